//! Decimal scientific text for [`ExtFloat`]: `[-]d.ddd…e[-]ddd`.
//!
//! The decimal exponent comes from `exponent2 · log10(2)`; the residual
//! scaling by `10^D` runs in double-double with a separate binary exponent,
//! which keeps 17-digit output exact away from pathological near-ties.

use super::dd::DoubleDouble;
use super::ext::{frexp1, pow2};
use super::{ExtFloat, NumericsError};

/// Double-double mantissa with an unbounded binary exponent.
#[derive(Clone, Copy, Debug)]
struct Wide {
    v: DoubleDouble,
    e: i64,
}

impl Wide {
    fn new(v: DoubleDouble, e: i64) -> Self {
        if v.hi == 0.0 {
            return Wide { v, e: 0 };
        }
        let (_, ee) = frexp1(v.hi.abs());
        let s = pow2(-ee);
        Wide {
            v: DoubleDouble {
                hi: v.hi * s,
                lo: v.lo * s,
            },
            e: e + ee,
        }
    }

    fn mul(self, rhs: Wide) -> Wide {
        Wide::new(self.v.mul(rhs.v), self.e + rhs.e)
    }

    fn div(self, rhs: Wide) -> Wide {
        Wide::new(
            self.v.div(rhs.v).expect("non-zero power of ten"),
            self.e - rhs.e,
        )
    }

    fn pow10(k: u64) -> Wide {
        let mut result = Wide::new(DoubleDouble::ONE, 0);
        let mut base = Wide::new(DoubleDouble::new(10.0), 0);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(base);
            }
        }
        result
    }

    fn to_dd(self) -> DoubleDouble {
        let s = pow2(self.e);
        DoubleDouble {
            hi: self.v.hi * s,
            lo: self.v.lo * s,
        }
    }
}

/// Remainders this close to one half are treated as exact ties.
const TIE_EPS: f64 = 1e-9;

pub(super) fn render(x: &ExtFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.clamp(1, 17);
    let mut dexp = x.log10_abs().floor() as i64;
    let v = Wide::new(DoubleDouble::new(x.mantissa()), x.exponent2());
    let scale = |d: i64| {
        if d >= 0 {
            v.div(Wide::pow10(d as u64))
        } else {
            v.mul(Wide::pow10(d.unsigned_abs()))
        }
    };
    let mut r = scale(dexp).to_dd();
    if r.hi < 1.0 {
        dexp -= 1;
        r = scale(dexp).to_dd();
    } else if r.hi >= 10.0 {
        dexp += 1;
        r = scale(dexp).to_dd();
    }

    let mut out: Vec<u8> = Vec::with_capacity(digits);
    for _ in 0..digits {
        let d = r.floor().to_f64().clamp(0.0, 9.0);
        out.push(d as u8);
        r = r.sub(DoubleDouble::new(d)).mul_f64(10.0);
    }
    let rem = r.sub(DoubleDouble::new(5.0)).to_f64();
    let round_up = if rem > TIE_EPS {
        true
    } else if rem < -TIE_EPS {
        false
    } else {
        out.last().is_some_and(|d| d % 2 == 1)
    };
    if round_up {
        let mut i = out.len();
        loop {
            if i == 0 {
                out.insert(0, 1);
                out.pop();
                dexp += 1;
                break;
            }
            i -= 1;
            if out[i] == 9 {
                out[i] = 0;
            } else {
                out[i] += 1;
                break;
            }
        }
    }

    let mut s = String::with_capacity(digits + 8);
    if x.sign() < 0 {
        s.push('-');
    }
    s.push((b'0' + out[0]) as char);
    if out.len() > 1 {
        s.push('.');
        s.extend(out[1..].iter().map(|d| (b'0' + d) as char));
    }
    s.push('e');
    s.push_str(&dexp.to_string());
    s
}

/// Drops trailing zeros of the fraction: `4.8200e8` → `4.82e8`, `1.0e0` → `1e0`.
pub(super) fn trim_trailing_zeros(text: &str) -> String {
    match text.split_once('e') {
        Some((mant, exp)) if mant.contains('.') => {
            let mant = mant.trim_end_matches('0').trim_end_matches('.');
            format!("{mant}e{exp}")
        }
        _ => text.to_string(),
    }
}

struct Decomposed {
    negative: bool,
    /// Significant digits, leading zeros stripped, as written.
    digits: Vec<u8>,
    /// Decimal exponent of the first significant digit.
    exp10: i64,
}

fn decompose(s: &str) -> Result<Decomposed, NumericsError> {
    let err = || NumericsError::Parse(s.to_string());
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut negative = false;
    if let Some(&c) = bytes.first() {
        if c == b'-' || c == b'+' {
            negative = c == b'-';
            i += 1;
        }
    }
    let mut digits = Vec::new();
    let mut point_seen = false;
    let mut int_len: i64 = 0;
    let mut leading_zeros_after_point: i64 = 0;
    let mut any_digit = false;
    while i < bytes.len() {
        match bytes[i] {
            b'0'..=b'9' => {
                any_digit = true;
                let d = bytes[i] - b'0';
                if digits.is_empty() && d == 0 {
                    if point_seen {
                        leading_zeros_after_point += 1;
                    }
                } else {
                    digits.push(d);
                    if !point_seen {
                        int_len += 1;
                    }
                }
            }
            b'.' if !point_seen => point_seen = true,
            _ => break,
        }
        i += 1;
    }
    if !any_digit {
        return Err(err());
    }
    let mut exp: i64 = 0;
    if i < bytes.len() {
        if bytes[i] != b'e' && bytes[i] != b'E' {
            return Err(err());
        }
        let rest = &s[i + 1..];
        if rest.is_empty() || rest.starts_with('+') && rest.len() == 1 {
            return Err(err());
        }
        exp = rest.parse::<i64>().map_err(|_| err())?;
        if exp.abs() > 1_000_000_000 {
            return Err(err());
        }
    }
    let exp10 = if digits.is_empty() {
        0
    } else if int_len > 0 {
        exp + int_len - 1
    } else {
        exp - leading_zeros_after_point - 1
    };
    Ok(Decomposed {
        negative,
        digits,
        exp10,
    })
}

pub(super) fn parse(s: &str) -> Result<ExtFloat, NumericsError> {
    let d = decompose(s.trim())?;
    if d.digits.is_empty() {
        return Ok(ExtFloat::ZERO);
    }
    // 36 digits fit in u128 and exceed double-double resolution
    let kept = d.digits.len().min(36);
    let mut m: u128 = 0;
    for &digit in &d.digits[..kept] {
        m = m * 10 + digit as u128;
    }
    if d.digits[kept..].first().is_some_and(|&x| x >= 5) {
        m += 1;
    }
    let scale = d.exp10 - (kept as i64 - 1);
    let base = Wide::new(DoubleDouble::from_u128(m), 0);
    let w = if scale >= 0 {
        base.mul(Wide::pow10(scale as u64))
    } else {
        base.div(Wide::pow10(scale.unsigned_abs()))
    };
    // normalized: hi = fl(hi + lo), so hi is the rounded mantissa
    let mut mant = w.v.hi;
    let mut e = w.e;
    if mant >= 2.0 {
        mant *= 0.5;
        e += 1;
    }
    Ok(ExtFloat::scaled(if d.negative { -1 } else { 1 }, mant, e))
}

/// Parses a value written in table style (`−4.822952515086 × 10^8`,
/// `6.785501979995337 × 10^{11}`, `-377,275.13516957406`).
///
/// Returns the value and its canonical scientific text carrying exactly the
/// significant digits written in the source.
pub fn parse_table_value(text: &str) -> Result<(ExtFloat, String), NumericsError> {
    let mut cleaned: String = text
        .chars()
        .filter(|c| !c.is_whitespace() && !matches!(c, ',' | '{' | '}' | '$' | '\\'))
        .map(|c| if c == '−' { '-' } else { c })
        .collect();
    for marker in ["×10^", "x10^", "*10^", "times10^"] {
        if let Some(pos) = cleaned.find(marker) {
            let (mant, exp) = cleaned.split_at(pos);
            cleaned = format!("{mant}e{}", &exp[marker.len()..]);
            break;
        }
    }
    let d = decompose(&cleaned)?;
    let value = parse(&cleaned)?;
    let canonical = if d.digits.is_empty() {
        "0".to_string()
    } else {
        let mut s = String::new();
        if d.negative {
            s.push('-');
        }
        s.push((b'0' + d.digits[0]) as char);
        if d.digits.len() > 1 {
            s.push('.');
            s.extend(d.digits[1..].iter().map(|x| (b'0' + x) as char));
        }
        s.push_str(&format!("e{}", d.exp10));
        s
    };
    Ok((value, canonical))
}
