use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Arith, NumericsError, MAX_POWER};

/// `floor(e · 2^256)` and `floor(γ · 2^256)`.
const E_SCALED: &str =
    "314755532053104800366792994148650327680839049479391720089470383831132767571951";
const GAMMA_SCALED: &str =
    "66837007779455094765092477805787399353999564573315406013700326330457103466429";

fn scaled_constant(cell: &'static OnceLock<BigRational>, digits: &str) -> BigRational {
    cell.get_or_init(|| {
        let num = BigInt::from_str(digits).expect("constant digits");
        BigRational::new(num, BigInt::one() << 256)
    })
    .clone()
}

/// Exact rational arithmetic with 256-bit approximations of `e` and `γ`.
///
/// Only used to re-decide `floor` for π arguments that land within 1e-9 of
/// an integer in double-double.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn floor_u64(&self) -> Result<u64, NumericsError> {
        let f = self.0.floor().to_integer();
        f.to_u64()
            .ok_or_else(|| NumericsError::FloorRange(f.to_string()))
    }

    pub fn round_u64(&self) -> Result<u64, NumericsError> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        ExactRational(&self.0 + half).floor_u64()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
}

impl Arith for ExactRational {
    fn from_f64(v: f64) -> Self {
        ExactRational(BigRational::from_float(v).expect("finite constant"))
    }

    fn from_u64(v: u64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }

    fn e() -> Self {
        static CELL: OnceLock<BigRational> = OnceLock::new();
        ExactRational(scaled_constant(&CELL, E_SCALED))
    }

    fn gamma() -> Self {
        static CELL: OnceLock<BigRational> = OnceLock::new();
        ExactRational(scaled_constant(&CELL, GAMMA_SCALED))
    }

    fn add(&self, rhs: &Self) -> Self {
        ExactRational(&self.0 + &rhs.0)
    }

    fn sub(&self, rhs: &Self) -> Self {
        ExactRational(&self.0 - &rhs.0)
    }

    fn mul(&self, rhs: &Self) -> Self {
        ExactRational(&self.0 * &rhs.0)
    }

    fn div(&self, rhs: &Self) -> Result<Self, NumericsError> {
        if rhs.0.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }

    fn neg(&self) -> Self {
        ExactRational(-&self.0)
    }

    fn powi(&self, k: u64) -> Result<Self, NumericsError> {
        if k > MAX_POWER {
            return Err(NumericsError::PowerTooLarge(k));
        }
        Ok(ExactRational(num_traits::pow(self.0.clone(), k as usize)))
    }

    fn ln(&self) -> Result<Self, NumericsError> {
        // logs inside π arguments are rare; native precision is accepted here
        let v = self.to_f64();
        if v <= 0.0 {
            return Err(NumericsError::LogDomain);
        }
        Ok(Self::from_f64(v.ln()))
    }

    fn sum(terms: Vec<Self>) -> Self {
        ExactRational(terms.into_iter().fold(BigRational::zero(), |a, t| a + t.0))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}
