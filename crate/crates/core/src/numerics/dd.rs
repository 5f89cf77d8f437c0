use super::{Arith, NumericsError, MAX_POWER};

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, about 106 bits.
///
/// Used for the real arguments handed to π so that `floor(x / e^j)` is
/// decided well below native rounding noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: DoubleDouble = DoubleDouble { hi: 1.0, lo: 0.0 };
    pub const E: DoubleDouble = DoubleDouble {
        hi: std::f64::consts::E,
        lo: 1.445_646_891_729_250_2e-16,
    };
    pub const GAMMA: DoubleDouble = DoubleDouble {
        hi: super::GAMMA,
        lo: -4.942_915_152_430_645e-18,
    };

    pub const fn new(v: f64) -> Self {
        DoubleDouble { hi: v, lo: 0.0 }
    }

    /// Exact for integers below 2^106.
    pub fn from_u128(v: u128) -> Self {
        let hi = v as f64;
        let rest = v as i128 - hi as i128;
        let (hi, lo) = quick_two_sum(hi, rest as f64);
        DoubleDouble { hi, lo }
    }

    pub fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }

    pub fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, rhs: Self) -> Self {
        self.add(rhs.neg())
    }

    pub fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    pub fn mul_f64(self, rhs: f64) -> Self {
        let (p, e) = two_prod(self.hi, rhs);
        let (hi, lo) = quick_two_sum(p, e + self.lo * rhs);
        DoubleDouble { hi, lo }
    }

    pub fn div(self, rhs: Self) -> Result<Self, NumericsError> {
        if rhs.hi == 0.0 {
            return Err(NumericsError::DivisionByZero);
        }
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Ok(DoubleDouble { hi, lo }.add(DoubleDouble::new(q3)))
    }

    pub fn powi(self, k: u64) -> Result<Self, NumericsError> {
        if k > MAX_POWER {
            return Err(NumericsError::PowerTooLarge(k));
        }
        let mut result: Option<Self> = None;
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base,
                    Some(r) => r.mul(base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(base);
            }
        }
        Ok(result.unwrap_or(Self::ONE))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn floor(self) -> Self {
        let fh = self.hi.floor();
        if fh == self.hi {
            let (hi, lo) = quick_two_sum(fh, self.lo.floor());
            DoubleDouble { hi, lo }
        } else {
            DoubleDouble::new(fh)
        }
    }

    pub fn round(self) -> Self {
        self.add(DoubleDouble::new(0.5)).floor()
    }

    /// Distance to the nearest integer.
    pub fn distance_to_integer(self) -> f64 {
        let r = self.round();
        self.sub(r).to_f64().abs()
    }
}

impl Arith for DoubleDouble {
    fn from_f64(v: f64) -> Self {
        DoubleDouble::new(v)
    }

    fn from_u64(v: u64) -> Self {
        DoubleDouble::from_u128(v as u128)
    }

    fn e() -> Self {
        DoubleDouble::E
    }

    fn gamma() -> Self {
        DoubleDouble::GAMMA
    }

    fn add(&self, rhs: &Self) -> Self {
        DoubleDouble::add(*self, *rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        DoubleDouble::sub(*self, *rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        DoubleDouble::mul(*self, *rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self, NumericsError> {
        DoubleDouble::div(*self, *rhs)
    }

    fn neg(&self) -> Self {
        DoubleDouble::neg(*self)
    }

    fn powi(&self, k: u64) -> Result<Self, NumericsError> {
        DoubleDouble::powi(*self, k)
    }

    fn ln(&self) -> Result<Self, NumericsError> {
        let v = self.to_f64();
        if v <= 0.0 {
            return Err(NumericsError::LogDomain);
        }
        // one Newton step on exp(y) = v lifts the native log to ~double-double
        let y = v.ln();
        let correction = DoubleDouble::sub(*self, DoubleDouble::new(y.exp())).to_f64() / v;
        Ok(DoubleDouble::add(
            DoubleDouble::new(y),
            DoubleDouble::new(correction),
        ))
    }

    fn sum(terms: Vec<Self>) -> Self {
        terms.into_iter().fold(Self::ZERO, DoubleDouble::add)
    }

    fn to_f64(&self) -> f64 {
        DoubleDouble::to_f64(*self)
    }
}
