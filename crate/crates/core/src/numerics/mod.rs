//! Extended-exponent floating point and the small numeric toolkit shared by
//! the evaluators.
//!
//! [`ExtFloat`] keeps a 53-bit mantissa in `[1, 2)` next to a 64-bit binary
//! exponent, so values such as `1229^27 ≈ 2.6e83` or `10^442` keep full
//! relative precision without touching arbitrary-precision arithmetic.

mod dd;
mod decimal;
mod exact;
mod ext;

pub use dd::DoubleDouble;
pub use decimal::parse_table_value;
pub use exact::ExactRational;
pub use ext::ExtFloat;

use thiserror::Error;

/// Euler's number at double precision, shared by every evaluator.
pub const E: f64 = std::f64::consts::E;
/// Euler–Mascheroni constant at double precision.
pub const GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("non-finite input {0}")]
    NonFinite(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of non-positive value")]
    LogDomain,
    #[error("exponent {0} exceeds the supported power cap 2^20")]
    PowerTooLarge(u64),
    #[error("invalid number text {0:?}")]
    Parse(String),
    #[error("value {0} cannot be floored to an integer count")]
    FloorRange(String),
}

/// Largest exponent accepted by [`ExtFloat::powi`].
pub const MAX_POWER: u64 = 1 << 20;

/// Arithmetic shared by the value path (`ExtFloat`), the argument path
/// (`DoubleDouble`) and the exact fallback (`ExactRational`), so one
/// expression walker serves all three.
pub trait Arith: Clone + Sized {
    fn from_f64(v: f64) -> Self;
    fn from_u64(v: u64) -> Self;
    fn e() -> Self;
    fn gamma() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, NumericsError>;
    fn neg(&self) -> Self;
    fn powi(&self, k: u64) -> Result<Self, NumericsError>;
    fn ln(&self) -> Result<Self, NumericsError>;
    /// Sum of terms, compensated where the representation needs it.
    fn sum(terms: Vec<Self>) -> Self;
    /// Lossy conversion used for logs and diagnostics.
    fn to_f64(&self) -> f64;
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Sums `ExtFloat` terms: compensated in native precision when every term
/// fits a normal `f64`, sequential extended addition otherwise.
pub fn compensated_sum(terms: &[ExtFloat]) -> ExtFloat {
    if terms.iter().all(|t| t.is_native()) {
        let acc: Neumaier = terms.iter().map(|t| t.to_f64()).collect();
        let v = acc.value();
        if v.is_finite() {
            return ExtFloat::from_f64(v).expect("finite");
        }
    }
    terms.iter().fold(ExtFloat::ZERO, |acc, t| acc + *t)
}
