use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use super::{Arith, NumericsError, MAX_POWER};

/// A real number `sign · mantissa · 2^exponent2` with `mantissa ∈ [1, 2)`.
///
/// Zero is canonical: sign 0, mantissa 0.0, exponent 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtFloat {
    sign: i8,
    mantissa: f64,
    exponent2: i64,
}

const MANTISSA_MASK: u64 = (1 << 52) - 1;
/// Gap beyond which the smaller addend is below mantissa resolution.
const ADD_GAP_LIMIT: i64 = 60;

/// `2^k` for `k` in the normal exponent range.
#[inline]
pub(crate) fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// Splits a positive finite `v` into `(m, e)` with `v = m · 2^e`, `m ∈ [1, 2)`.
#[inline]
pub(crate) fn frexp1(v: f64) -> (f64, i64) {
    debug_assert!(v > 0.0 && v.is_finite());
    let bits = v.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        let (m, e) = frexp1(v * pow2(64));
        return (m, e - 64);
    }
    let m = f64::from_bits((bits & MANTISSA_MASK) | (1023u64 << 52));
    (m, biased - 1023)
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat {
        sign: 0,
        mantissa: 0.0,
        exponent2: 0,
    };
    pub const ONE: ExtFloat = ExtFloat {
        sign: 1,
        mantissa: 1.0,
        exponent2: 0,
    };

    /// Exact conversion from a finite `f64`.
    pub fn from_f64(v: f64) -> Result<Self, NumericsError> {
        if !v.is_finite() {
            return Err(NumericsError::NonFinite(v));
        }
        if v == 0.0 {
            return Ok(Self::ZERO);
        }
        let (m, e) = frexp1(v.abs());
        Ok(ExtFloat {
            sign: if v < 0.0 { -1 } else { 1 },
            mantissa: m,
            exponent2: e,
        })
    }

    pub fn from_u64(v: u64) -> Self {
        Self::from_f64(v as f64).expect("u64 is finite")
    }

    /// Builds a value from raw parts, validating the invariants.
    pub fn from_parts(sign: i8, mantissa: f64, exponent2: i64) -> Option<Self> {
        match sign {
            0 => (mantissa == 0.0 && exponent2 == 0).then_some(Self::ZERO),
            1 | -1 if (1.0..2.0).contains(&mantissa) => Some(ExtFloat {
                sign,
                mantissa,
                exponent2,
            }),
            _ => None,
        }
    }

    /// Normalizes `sign · m · 2^e` for any positive finite `m`.
    pub(crate) fn scaled(sign: i8, m: f64, e: i64) -> Self {
        if sign == 0 || m == 0.0 {
            return Self::ZERO;
        }
        let (mm, ee) = frexp1(m);
        ExtFloat {
            sign,
            mantissa: mm,
            exponent2: e + ee,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent2(&self) -> i64 {
        self.exponent2
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// True when the value converts to a normal `f64` (or zero) without loss.
    pub fn is_native(&self) -> bool {
        self.sign == 0 || (-1022..=1023).contains(&self.exponent2)
    }

    pub fn abs(&self) -> Self {
        ExtFloat {
            sign: self.sign.abs(),
            ..*self
        }
    }

    /// Nearest `f64`; saturates to ±∞ or ±0 outside the native range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let s = f64::from(self.sign);
        let e = self.exponent2;
        if e > 1023 {
            s * f64::INFINITY
        } else if e >= -1022 {
            s * self.mantissa * pow2(e)
        } else if e < -1076 {
            s * 0.0
        } else {
            s * (self.mantissa * pow2(e + 1022)) * pow2(-1022)
        }
    }

    /// Base-10 logarithm of the magnitude, for diagnostics and decimal layout.
    pub fn log10_abs(&self) -> f64 {
        self.mantissa.log10() + self.exponent2 as f64 * std::f64::consts::LOG10_2
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self, NumericsError> {
        if rhs.sign == 0 {
            return Err(NumericsError::DivisionByZero);
        }
        if self.sign == 0 {
            return Ok(Self::ZERO);
        }
        let mut m = self.mantissa / rhs.mantissa;
        let mut e = self.exponent2 - rhs.exponent2;
        if m < 1.0 {
            m *= 2.0;
            e -= 1;
        }
        Ok(ExtFloat {
            sign: self.sign * rhs.sign,
            mantissa: m,
            exponent2: e,
        })
    }

    /// Square-and-multiply power with `k ≤ 2^20`.
    pub fn powi(self, k: u64) -> Result<Self, NumericsError> {
        if k > MAX_POWER {
            return Err(NumericsError::PowerTooLarge(k));
        }
        let mut result: Option<ExtFloat> = None;
        let mut base = self;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base,
                    Some(r) => r * base,
                });
            }
            k >>= 1;
            if k > 0 {
                base = base * base;
            }
        }
        Ok(result.unwrap_or(Self::ONE))
    }

    /// Natural logarithm; native `ln` inside the `f64` range.
    pub fn ln(&self) -> Result<f64, NumericsError> {
        if self.sign <= 0 {
            return Err(NumericsError::LogDomain);
        }
        if self.is_native() {
            Ok(self.to_f64().ln())
        } else {
            Ok(self.mantissa.ln() + self.exponent2 as f64 * std::f64::consts::LN_2)
        }
    }

    /// `|self − reference| / |reference|` as a native float.
    pub fn rel_error(&self, reference: &ExtFloat) -> Option<f64> {
        if reference.is_zero() {
            return None;
        }
        let diff = (*self - *reference).abs();
        diff.checked_div(reference.abs()).ok().map(|r| r.to_f64())
    }

    /// Decimal scientific text with `digits` significant digits, round-half-even.
    pub fn to_scientific(&self, digits: usize) -> String {
        super::decimal::render(self, digits)
    }
}

impl Default for ExtFloat {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<u64> for ExtFloat {
    fn from(v: u64) -> Self {
        Self::from_u64(v)
    }
}

impl TryFrom<f64> for ExtFloat {
    type Error = NumericsError;

    fn try_from(v: f64) -> Result<Self, Self::Error> {
        Self::from_f64(v)
    }
}

impl Mul for ExtFloat {
    type Output = ExtFloat;

    fn mul(self, rhs: ExtFloat) -> ExtFloat {
        if self.sign == 0 || rhs.sign == 0 {
            return ExtFloat::ZERO;
        }
        let mut m = self.mantissa * rhs.mantissa;
        let mut e = self.exponent2 + rhs.exponent2;
        if m >= 2.0 {
            m *= 0.5;
            e += 1;
        }
        ExtFloat {
            sign: self.sign * rhs.sign,
            mantissa: m,
            exponent2: e,
        }
    }
}

impl Add for ExtFloat {
    type Output = ExtFloat;

    fn add(self, rhs: ExtFloat) -> ExtFloat {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.exponent2 >= rhs.exponent2 {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent2 - small.exponent2;
        if gap > ADD_GAP_LIMIT {
            return big;
        }
        let s = f64::from(big.sign) * big.mantissa
            + f64::from(small.sign) * small.mantissa * pow2(-gap);
        if s == 0.0 {
            return ExtFloat::ZERO;
        }
        ExtFloat::scaled(if s < 0.0 { -1 } else { 1 }, s.abs(), big.exponent2)
    }
}

impl Neg for ExtFloat {
    type Output = ExtFloat;

    fn neg(self) -> ExtFloat {
        ExtFloat {
            sign: -self.sign,
            ..self
        }
    }
}

impl Sub for ExtFloat {
    type Output = ExtFloat;

    fn sub(self, rhs: ExtFloat) -> ExtFloat {
        self + (-rhs)
    }
}

/// Panics on a zero divisor, like integer division; use
/// [`ExtFloat::checked_div`] when the divisor may vanish.
impl Div for ExtFloat {
    type Output = ExtFloat;

    fn div(self, rhs: ExtFloat) -> ExtFloat {
        self.checked_div(rhs).expect("ExtFloat division by zero")
    }
}

impl Eq for ExtFloat {}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            o => return o,
        }
        if self.sign == 0 {
            return Ordering::Equal;
        }
        let magnitude = self
            .exponent2
            .cmp(&other.exponent2)
            .then(self.mantissa.total_cmp(&other.mantissa));
        if self.sign > 0 {
            magnitude
        } else {
            magnitude.reverse()
        }
    }
}

impl fmt::Display for ExtFloat {
    /// 16 significant digits with trailing zeros trimmed, e.g. `-4.822952515086e8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p + 1).unwrap_or(16).clamp(1, 17);
        let text = self.to_scientific(digits);
        if f.precision().is_some() {
            return f.write_str(&text);
        }
        f.write_str(&super::decimal::trim_trailing_zeros(&text))
    }
}

impl FromStr for ExtFloat {
    type Err = NumericsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::decimal::parse(s)
    }
}

impl Arith for ExtFloat {
    fn from_f64(v: f64) -> Self {
        ExtFloat::from_f64(v).expect("finite constant")
    }

    fn from_u64(v: u64) -> Self {
        ExtFloat::from_u64(v)
    }

    fn e() -> Self {
        ExtFloat::from_f64(super::E).unwrap()
    }

    fn gamma() -> Self {
        ExtFloat::from_f64(super::GAMMA).unwrap()
    }

    fn add(&self, rhs: &Self) -> Self {
        *self + *rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        *self - *rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        *self * *rhs
    }

    fn div(&self, rhs: &Self) -> Result<Self, NumericsError> {
        self.checked_div(*rhs)
    }

    fn neg(&self) -> Self {
        -*self
    }

    fn powi(&self, k: u64) -> Result<Self, NumericsError> {
        ExtFloat::powi(*self, k)
    }

    fn ln(&self) -> Result<Self, NumericsError> {
        ExtFloat::ln(self).map(|v| ExtFloat::from_f64(v).expect("finite log"))
    }

    fn sum(terms: Vec<Self>) -> Self {
        super::compensated_sum(&terms)
    }

    fn to_f64(&self) -> f64 {
        ExtFloat::to_f64(self)
    }
}
