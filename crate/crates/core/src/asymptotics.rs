//! Closed-form leading terms of each family and the scale of the error
//! term they come with.
//!
//! Everything is evaluated in [`ExtFloat`] from the native logarithm of `x`,
//! so `x^{3^n}/(log x)^{3^n}` stays representable.

use crate::inequality::{EvalError, Evaluator, Family, FamilyKind};
use crate::numerics::{ExtFloat, Neumaier, E, GAMMA, MAX_POWER};

fn ext(v: f64) -> ExtFloat {
    ExtFloat::from_f64(v).expect("finite")
}

fn domain(family: &'static str, requirement: &'static str, got: impl ToString) -> EvalError {
    EvalError::Domain {
        family,
        requirement,
        got: got.to_string(),
    }
}

fn check_x(family: &'static str, x: f64) -> Result<f64, EvalError> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(domain(family, "finite x > 1", x));
    }
    Ok(x.ln())
}

/// `−3x³ / (e (log x − 1)³)`.
pub fn main_term_h(x: f64) -> Result<ExtFloat, EvalError> {
    if !(x > E) || !x.is_finite() {
        return Err(domain("H", "x > e", x));
    }
    let d = x.ln() - 1.0;
    if d <= 0.0 {
        return Err(domain("H", "log x != 1", x));
    }
    let num = ExtFloat::from_u64(3) * ext(x).powi(3)?;
    let den = ext(E) * ext(d).powi(3)?;
    Ok(-num.checked_div(den)?)
}

/// `(x/log x)⁴ · (1 − 4e/log x + 6e²/(log x)² − 4e³/(log x)³)`.
pub fn main_term_k(x: f64) -> Result<ExtFloat, EvalError> {
    let l = check_x("K", x)?;
    let u = E / l;
    let factor = 1.0 - 4.0 * u + 6.0 * u * u - 4.0 * u * u * u;
    Ok((ext(x) / ext(l)).powi(4)? * ext(factor))
}

fn check_n(family: &'static str, n: u32) -> Result<(), EvalError> {
    if n < 2 {
        return Err(domain(family, "n > 1", n));
    }
    Ok(())
}

/// `x² log n (log n − 1) / (log x)²`.
pub fn main_term_l(x: f64, n: u32) -> Result<ExtFloat, EvalError> {
    let l = check_x("L", x)?;
    check_n("L", n)?;
    let ln = f64::from(n).ln();
    Ok((ext(x) / ext(l)).powi(2)? * ext(ln * (ln - 1.0)))
}

/// `−x² log n / (log x)³`.
pub fn main_term_f(x: f64, n: u32) -> Result<ExtFloat, EvalError> {
    let l = check_x("F", x)?;
    check_n("F", n)?;
    let ln = f64::from(n).ln();
    Ok(-((ext(x) / ext(l)).powi(2)? * ext(ln / l)))
}

fn hn_power(n: u32) -> Result<u64, EvalError> {
    if n < 1 {
        return Err(domain("Hn", "n >= 1", n));
    }
    3u64.checked_pow(n)
        .filter(|&m| m <= MAX_POWER)
        .ok_or_else(|| domain("Hn", "3^n <= 2^20", n))
}

/// `(x / log x)^{3^n}`; the exponentially smaller companions are dropped.
pub fn main_term_hn(x: f64, n: u32) -> Result<ExtFloat, EvalError> {
    let l = check_x("Hn", x)?;
    let m = hn_power(n)?;
    Ok((ext(x) / ext(l)).powi(m)?)
}

/// `−x^{r+1} (log n + γ)^r / (e^{r−1} (log x)^{r+1})`.
///
/// Odd `r = 2m+1` and even `r = 2m` give the same expression in `r`.
pub fn main_term_nr(x: f64, n: u32, r: u32) -> Result<ExtFloat, EvalError> {
    let l = check_x("Nr", x)?;
    check_n("Nr", n)?;
    if r < 2 {
        return Err(domain("Nr", "r > 1", r));
    }
    let r = u64::from(r);
    let ratio = (ext(x) / ext(l)).powi(r + 1)?;
    let weight = ext(harmonic_approx(u64::from(n))).powi(r)?;
    let den = ext(E).powi(r - 1)?;
    Ok(-(ratio * weight).checked_div(den)?)
}

/// Leading term of `family` at `x`.
pub fn main_term(family: &Family, x: f64) -> Result<ExtFloat, EvalError> {
    match family {
        Family::H => main_term_h(x),
        Family::K => main_term_k(x),
        Family::L { n } => main_term_l(x, *n),
        Family::F { n } => main_term_f(x, *n),
        Family::Hn { n } => main_term_hn(x, *n),
        Family::Nr { n, r } => main_term_nr(x, *n, *r),
        other => Err(EvalError::Unsupported(format!(
            "no closed-form main term for {}",
            other.label()
        ))),
    }
}

/// `x^d / (log x)^{d+1}`, the error scale attached to a degree-`d` family.
pub fn general_error_scale(x: f64, d: u64) -> Result<ExtFloat, EvalError> {
    let l = check_x("general", x)?;
    Ok((ext(x) / ext(l)).powi(d)?.checked_div(ext(l))?)
}

/// Positive error scale of `family` at `x`.
///
/// `L` carries `x²/(log x)²`; every other family carries
/// `x^d/(log x)^{d+1}` with `d` its degree in `π`.
pub fn error_scale(family: &Family, x: f64) -> Result<ExtFloat, EvalError> {
    let d = match family {
        Family::L { .. } => {
            let l = check_x("L", x)?;
            return Ok((ext(x) / ext(l)).powi(2)?);
        }
        Family::G | Family::F { .. } => 2,
        Family::H | Family::Hassani => 3,
        Family::K => 4,
        Family::Hn { n } => hn_power(*n)?,
        Family::Nr { r, .. } => u64::from(*r),
        Family::General { spec, .. } => spec.degree(),
    };
    general_error_scale(x, d)
}

/// `Σ_{k=1..n} 1/k`, summed from the small end.
pub fn harmonic(n: u64) -> f64 {
    let mut acc = Neumaier::new();
    for k in (1..=n).rev() {
        acc.add(1.0 / k as f64);
    }
    acc.value()
}

/// `log n + γ`.
pub fn harmonic_approx(n: u64) -> f64 {
    (n as f64).ln() + GAMMA
}

/// Exact value against its leading term.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermReport {
    pub family: FamilyKind,
    pub x: f64,
    pub main: ExtFloat,
    pub exact: ExtFloat,
    /// `exact / main`; `NaN` when `main = 0`.
    pub ratio: f64,
    pub error_scale: ExtFloat,
}

impl MainTermReport {
    /// `|exact/main − 1|`.
    pub fn relative_gap(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }

    /// `|exact − main| / error_scale`.
    pub fn normalized_deviation(&self) -> f64 {
        (self.exact - self.main)
            .abs()
            .checked_div(self.error_scale)
            .map_or(f64::INFINITY, |v| v.to_f64())
    }
}

pub fn main_term_report(
    evaluator: &Evaluator<'_>,
    family: &Family,
    x: f64,
) -> Result<MainTermReport, EvalError> {
    let main = main_term(family, x)?;
    let exact = evaluator.eval(family, x)?.value;
    let ratio = exact.checked_div(main).map_or(f64::NAN, |r| r.to_f64());
    Ok(MainTermReport {
        family: family.kind(),
        x,
        main,
        exact,
        ratio,
        error_scale: error_scale(family, x)?,
    })
}
