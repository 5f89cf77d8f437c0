//! Native evaluators for the named inequality families.
//!
//! Every family is a short alternating sum of terms built from exact prime
//! counts at `x / (e^j k)`. Values are composed in [`ExtFloat`] in exactly
//! the operation order of the matching DSL text (see
//! [`crate::expression::family_text`]), so both routes agree bit for bit.
//!
//! Arguments of π are formed in double-double and floored; an argument
//! within `1e-9` of an integer is re-decided with exact rationals.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expression::GeneralSpec;
use crate::numerics::{
    compensated_sum, Arith, DoubleDouble, ExactRational, ExtFloat, NumericsError, E, MAX_POWER,
};
use crate::prime_engine::{PrimeCounter, PrimeError};

/// Distance to an integer below which a double-double floor is re-checked.
const NEAR_INTEGER: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Prime(#[from] PrimeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{family} requires {requirement} (got {got})")]
    Domain {
        family: &'static str,
        requirement: &'static str,
        got: String,
    },
    #[error("prime count of non-positive argument {0}")]
    PiArgument(f64),
    #[error("parameter {0} is required for this expression")]
    MissingParameter(&'static str),
    #[error("{0}")]
    Unsupported(String),
}

/// How a real π argument becomes an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArgRounding {
    #[default]
    Floor,
    /// Round to nearest; only used to measure table sensitivity.
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    G,
    H,
    K,
    L,
    F,
    Hn,
    Nr,
    Hassani,
    General,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::G => "G",
            FamilyKind::H => "H",
            FamilyKind::K => "K",
            FamilyKind::L => "L",
            FamilyKind::F => "F",
            FamilyKind::Hn => "Hn",
            FamilyKind::Nr => "Nr",
            FamilyKind::Hassani => "hassani",
            FamilyKind::General => "general",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    G,
    H,
    K,
    L {
        n: u32,
    },
    F {
        n: u32,
    },
    Hn {
        n: u32,
    },
    Nr {
        n: u32,
        r: u32,
    },
    /// Scalar form `π(x)³ − (e²x/log x)·π(x/e)²` of the upper inequality.
    Hassani,
    General {
        spec: Arc<GeneralSpec>,
        n: Option<u32>,
    },
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::G => FamilyKind::G,
            Family::H => FamilyKind::H,
            Family::K => FamilyKind::K,
            Family::L { .. } => FamilyKind::L,
            Family::F { .. } => FamilyKind::F,
            Family::Hn { .. } => FamilyKind::Hn,
            Family::Nr { .. } => FamilyKind::Nr,
            Family::Hassani => FamilyKind::Hassani,
            Family::General { .. } => FamilyKind::General,
        }
    }

    /// Builds a family from its command-line name and optional parameters.
    pub fn from_name(name: &str, n: Option<u32>, r: Option<u32>) -> Result<Family, EvalError> {
        let need = |v: Option<u32>, what: &'static str| v.ok_or(EvalError::MissingParameter(what));
        Ok(match name {
            "G" => Family::G,
            "H" => Family::H,
            "K" => Family::K,
            "L" => Family::L { n: need(n, "n")? },
            "F" => Family::F { n: need(n, "n")? },
            "Hn" => Family::Hn { n: need(n, "n")? },
            "Nr" => Family::Nr {
                n: need(n, "n")?,
                r: need(r, "r")?,
            },
            "hassani" | "Hassani" => Family::Hassani,
            other => return Err(EvalError::Unsupported(format!("unknown family {other:?}"))),
        })
    }

    /// Short label such as `H`, `L(n=5)` or `Nr(n=5,r=3)`.
    pub fn label(&self) -> String {
        match self {
            Family::L { n } | Family::F { n } | Family::Hn { n } => {
                format!("{}(n={n})", self.kind())
            }
            Family::Nr { n, r } => format!("Nr(n={n},r={r})"),
            Family::General { n: Some(n), .. } => format!("general(n={n})"),
            _ => self.kind().to_string(),
        }
    }

    pub fn n(&self) -> Option<u32> {
        match self {
            Family::L { n } | Family::F { n } | Family::Hn { n } | Family::Nr { n, .. } => Some(*n),
            Family::General { n, .. } => *n,
            _ => None,
        }
    }

    pub fn r(&self) -> Option<u32> {
        match self {
            Family::Nr { r, .. } => Some(*r),
            _ => None,
        }
    }
}

/// One evaluation of a family at `x`.
///
/// `value` is the alternating sum `terms[0] − terms[1] + terms[2] − …`,
/// folded left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyEval {
    pub family: FamilyKind,
    pub x: f64,
    pub n: Option<u32>,
    pub r: Option<u32>,
    pub value: ExtFloat,
    pub terms: Vec<(String, ExtFloat)>,
    pub sign: i8,
}

impl FamilyEval {
    fn from_terms(family: &Family, x: f64, terms: Vec<(String, ExtFloat)>) -> Self {
        let value = alternating_sum(terms.iter().map(|(_, t)| *t));
        FamilyEval {
            family: family.kind(),
            x,
            n: family.n(),
            r: family.r(),
            value,
            sign: value.sign(),
            terms,
        }
    }
}

/// `t0 − t1 + t2 − …`, folded left to right.
pub fn alternating_sum(terms: impl IntoIterator<Item = ExtFloat>) -> ExtFloat {
    let mut iter = terms.into_iter();
    let Some(first) = iter.next() else {
        return ExtFloat::ZERO;
    };
    iter.enumerate().fold(
        first,
        |acc, (i, t)| if i % 2 == 0 { acc - t } else { acc + t },
    )
}

/// The three sides of Hassani's double inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct HassaniEval {
    pub x: f64,
    pub lower: ExtFloat,
    pub middle: ExtFloat,
    pub upper: ExtFloat,
    /// `(lower < middle, middle < upper)`.
    pub holds: (bool, bool),
}

/// Evaluation context: a shared prime counter plus the argument rounding.
#[derive(Debug, Clone, Copy)]
pub struct Evaluator<'a> {
    counter: &'a PrimeCounter,
    rounding: ArgRounding,
}

/// `x / (e^j · k)` in any arithmetic, in DSL operation order.
fn quotient<S: Arith>(x: f64, e_pow: u64, k: Option<u64>) -> Result<S, NumericsError> {
    let xs = S::from_f64(x);
    let denom = match (e_pow, k) {
        (0, None) => return Ok(xs),
        (j, None) => S::e().powi(j)?,
        (0, Some(k)) => S::from_u64(k),
        (j, Some(k)) => S::e().powi(j)?.mul(&S::from_u64(k)),
    };
    xs.div(&denom)
}

fn ext(v: f64) -> ExtFloat {
    ExtFloat::from_f64(v).expect("finite")
}

fn ext_e() -> ExtFloat {
    ext(E)
}

/// `log(v)` promoted the way the DSL promotes it.
fn ext_ln(v: ExtFloat) -> Result<ExtFloat, EvalError> {
    Ok(<ExtFloat as Arith>::ln(&v)?)
}

fn domain(family: &'static str, requirement: &'static str, got: impl fmt::Display) -> EvalError {
    EvalError::Domain {
        family,
        requirement,
        got: got.to_string(),
    }
}

impl<'a> Evaluator<'a> {
    pub fn new(counter: &'a PrimeCounter) -> Self {
        Evaluator {
            counter,
            rounding: ArgRounding::Floor,
        }
    }

    pub fn with_rounding(self, rounding: ArgRounding) -> Self {
        Evaluator { rounding, ..self }
    }

    pub fn counter(&self) -> &'a PrimeCounter {
        self.counter
    }

    pub fn rounding(&self) -> ArgRounding {
        self.rounding
    }

    /// Integer argument for π from a double-double approximation, falling
    /// back to `exact` when the approximation sits next to a rounding
    /// boundary.
    pub fn resolve_argument(
        &self,
        approx: DoubleDouble,
        exact: impl FnOnce() -> Result<ExactRational, EvalError>,
    ) -> Result<u64, EvalError> {
        let shifted = match self.rounding {
            ArgRounding::Floor => approx,
            ArgRounding::Nearest => approx.add(DoubleDouble::new(0.5)),
        };
        let near_boundary =
            shifted.distance_to_integer() < NEAR_INTEGER || approx.to_f64().abs() < NEAR_INTEGER;
        if !near_boundary {
            let v = approx.to_f64();
            if !(v > 0.0) {
                return Err(EvalError::PiArgument(v));
            }
            let f = shifted.floor().to_f64();
            if f >= u64::MAX as f64 {
                return Err(PrimeError::AboveCap {
                    value: u64::MAX,
                    cap: self.counter.pi_cap(),
                }
                .into());
            }
            return Ok(f as u64);
        }
        let q = exact()?;
        if !q.is_positive() {
            return Err(EvalError::PiArgument(q.to_f64()));
        }
        Ok(match self.rounding {
            ArgRounding::Floor => q.floor_u64()?,
            ArgRounding::Nearest => q.round_u64()?,
        })
    }

    /// Integer argument for `π(x / (e^j k))`.
    fn quotient_arg(&self, x: f64, e_pow: u64, k: Option<u64>) -> Result<u64, EvalError> {
        let approx = quotient::<DoubleDouble>(x, e_pow, k)?;
        self.resolve_argument(approx, || Ok(quotient::<ExactRational>(x, e_pow, k)?))
    }

    /// `π(x / (e^j k))` for a list of `(j, k)` pairs, sharing counting work.
    fn pis(&self, x: f64, args: &[(u64, Option<u64>)]) -> Result<Vec<ExtFloat>, EvalError> {
        let ns = args
            .iter()
            .map(|&(j, k)| self.quotient_arg(x, j, k))
            .collect::<Result<Vec<_>, _>>()?;
        let counts = self.counter.count_batch(&ns)?;
        Ok(counts.into_iter().map(ExtFloat::from_u64).collect())
    }

    /// `Σ_{k=1..n} π(x / (e^j k))`, compensated in native precision.
    fn pi_sum(&self, x: f64, e_pow: u64, n: u32) -> Result<ExtFloat, EvalError> {
        let args: Vec<_> = (1..=u64::from(n)).map(|k| (e_pow, Some(k))).collect();
        Ok(compensated_sum(&self.pis(x, &args)?))
    }

    pub fn eval(&self, family: &Family, x: f64) -> Result<FamilyEval, EvalError> {
        if !x.is_finite() {
            return Err(domain(family.kind().name(), "finite x", x));
        }
        match family {
            Family::G => self.eval_g(x),
            Family::H => self.eval_h(x),
            Family::K => self.eval_k(x),
            Family::L { n } => self.eval_l(x, *n),
            Family::F { n } => self.eval_f(x, *n),
            Family::Hn { n } => self.eval_hn(x, *n),
            Family::Nr { n, r } => self.eval_nr(x, *n, *r),
            Family::Hassani => {
                let h = self.eval_hassani(x)?;
                Ok(FamilyEval::from_terms(
                    family,
                    x,
                    vec![
                        ("pi(x)^3".into(), h.middle),
                        ("e^2*x/log(x)*pi(x/e)^2".into(), h.upper),
                    ],
                ))
            }
            Family::General { spec, n } => {
                let value = crate::expression::eval_spec(spec, self, x, n.map(u64::from))?;
                Ok(FamilyEval::from_terms(
                    family,
                    x,
                    vec![(spec.to_string(), value)],
                ))
            }
        }
    }

    /// `π(x)² − (ex/log x)·π(x/e)`.
    pub fn eval_g(&self, x: f64) -> Result<FamilyEval, EvalError> {
        if !(x >= E) {
            return Err(domain("G", "x >= e", x));
        }
        let p = self.pis(x, &[(0, None), (1, None)])?;
        let lx = ext_ln(ext(x))?;
        let a = p[0].powi(2)?;
        let b = ((ext_e() * ext(x)) / lx) * p[1];
        Ok(FamilyEval::from_terms(
            &Family::G,
            x,
            vec![("pi(x)^2".into(), a), ("e*x/log(x)*pi(x/e)".into(), b)],
        ))
    }

    /// `π(x)³ − (3ex/log x)·π(x/e)² + (3e²x/(log x)²)·π(x/e²)`.
    pub fn eval_h(&self, x: f64) -> Result<FamilyEval, EvalError> {
        if !(x >= E * E) {
            return Err(domain("H", "x >= e^2", x));
        }
        let p = self.pis(x, &[(0, None), (1, None), (2, None)])?;
        let (xe, e, lx) = (ext(x), ext_e(), ext_ln(ext(x))?);
        let three = ExtFloat::from_u64(3);
        let a = p[0].powi(3)?;
        let b = (((three * e) * xe) / lx) * p[1].powi(2)?;
        let c = (((three * e.powi(2)?) * xe) / lx.powi(2)?) * p[2];
        Ok(FamilyEval::from_terms(
            &Family::H,
            x,
            vec![
                ("pi(x)^3".into(), a),
                ("3*e*x/log(x)*pi(x/e)^2".into(), b),
                ("3*e^2*x/log(x)^2*pi(x/e^2)".into(), c),
            ],
        ))
    }

    /// Quartic analogue of `H` with binomial weights 1, 4, 6, 4.
    pub fn eval_k(&self, x: f64) -> Result<FamilyEval, EvalError> {
        if !(x >= E * E * E) {
            return Err(domain("K", "x >= e^3", x));
        }
        let p = self.pis(x, &[(0, None), (1, None), (2, None), (3, None)])?;
        let (xe, e, lx) = (ext(x), ext_e(), ext_ln(ext(x))?);
        let four = ExtFloat::from_u64(4);
        let six = ExtFloat::from_u64(6);
        let a = p[0].powi(4)?;
        let b = (((four * e) * xe) / lx) * p[1].powi(3)?;
        let c = (((six * e.powi(2)?) * xe) / lx.powi(2)?) * p[2].powi(2)?;
        let d = (((four * e.powi(3)?) * xe) / lx.powi(3)?) * p[3];
        Ok(FamilyEval::from_terms(
            &Family::K,
            x,
            vec![
                ("pi(x)^4".into(), a),
                ("4*e*x/log(x)*pi(x/e)^3".into(), b),
                ("6*e^2*x/log(x)^2*pi(x/e^2)^2".into(), c),
                ("4*e^3*x/log(x)^3*pi(x/e^3)".into(), d),
            ],
        ))
    }

    fn check_sum_params(family: &'static str, x: f64, n: u32, e_pow: u64) -> Result<(), EvalError> {
        if n < 2 {
            return Err(domain(family, "n > 1", n));
        }
        let reach = x / (E.powi(e_pow as i32) * f64::from(n));
        if !(reach >= 1.0) {
            return Err(domain(
                family,
                if e_pow == 1 {
                    "x/(e*n) >= 1"
                } else {
                    "x/(e^2*n) >= 1"
                },
                x,
            ));
        }
        Ok(())
    }

    /// `(Σ π(x/k))² − (ex/log x)·Σ π(x/(ek))`, `k = 1..n`.
    pub fn eval_l(&self, x: f64, n: u32) -> Result<FamilyEval, EvalError> {
        Self::check_sum_params("L", x, n, 1)?;
        let s1 = self.pi_sum(x, 0, n)?;
        let s2 = self.pi_sum(x, 1, n)?;
        let a = s1.powi(2)?;
        let b = ((ext_e() * ext(x)) / ext_ln(ext(x))?) * s2;
        Ok(FamilyEval::from_terms(
            &Family::L { n },
            x,
            vec![
                ("sum(pi(x/k))^2".into(), a),
                ("e*x/log(x)*sum(pi(x/(e*k)))".into(), b),
            ],
        ))
    }

    /// `L` with each count weighted by `1/log` of its argument.
    pub fn eval_f(&self, x: f64, n: u32) -> Result<FamilyEval, EvalError> {
        Self::check_sum_params("F", x, n, 1)?;
        if !(x / (E * f64::from(n)) > 1.0) {
            return Err(domain("F", "x/(e*n) > 1", x));
        }
        let ks: Vec<u64> = (1..=u64::from(n)).collect();
        let mut args: Vec<_> = ks.iter().map(|&k| (0, Some(k))).collect();
        args.extend(ks.iter().map(|&k| (1, Some(k))));
        let p = self.pis(x, &args)?;
        let (xe, e) = (ext(x), ext_e());
        let mut first = Vec::with_capacity(ks.len());
        let mut second = Vec::with_capacity(ks.len());
        for (i, &k) in ks.iter().enumerate() {
            let kx = ExtFloat::from_u64(k);
            first.push(p[i].checked_div(ext_ln(xe.checked_div(kx)?)?)?);
            let ek = e * kx;
            second.push(p[ks.len() + i].checked_div(ext_ln(xe.checked_div(ek)?)?)?);
        }
        let a = compensated_sum(&first).powi(2)?;
        let b = ((e * xe) / ext_ln(xe)?) * compensated_sum(&second);
        Ok(FamilyEval::from_terms(
            &Family::F { n },
            x,
            vec![
                ("sum(pi(x/k)/log(x/k))^2".into(), a),
                ("e*x/log(x)*sum(pi(x/(e*k))/log(x/(e*k)))".into(), b),
            ],
        ))
    }

    /// `π(x)^{3^n} − (3ex/log x)·π(x/e)^{3^n−1} + (3e²x/(log x)²)·π(x/e²)^{3^n−2}`.
    pub fn eval_hn(&self, x: f64, n: u32) -> Result<FamilyEval, EvalError> {
        if n < 1 {
            return Err(domain("Hn", "n >= 1", n));
        }
        let m = 3u64
            .checked_pow(n)
            .filter(|&m| m <= MAX_POWER)
            .ok_or_else(|| domain("Hn", "3^n <= 2^20", n))?;
        if !(x >= E * E) {
            return Err(domain("Hn", "x >= e^2", x));
        }
        let p = self.pis(x, &[(0, None), (1, None), (2, None)])?;
        let (xe, e, lx) = (ext(x), ext_e(), ext_ln(ext(x))?);
        let three = ExtFloat::from_u64(3);
        let a = p[0].powi(m)?;
        let b = (((three * e) * xe) / lx) * p[1].powi(m - 1)?;
        let c = (((three * e.powi(2)?) * xe) / lx.powi(2)?) * p[2].powi(m - 2)?;
        Ok(FamilyEval::from_terms(
            &Family::Hn { n },
            x,
            vec![
                (format!("pi(x)^{m}"), a),
                (format!("3*e*x/log(x)*pi(x/e)^{}", m - 1), b),
                (format!("3*e^2*x/log(x)^2*pi(x/e^2)^{}", m - 2), c),
            ],
        ))
    }

    /// `(Σπ(x/k))^r − (ex/log x)(Σπ(x/(ek)))^r + (Σπ(x/(e²k)))^r`.
    pub fn eval_nr(&self, x: f64, n: u32, r: u32) -> Result<FamilyEval, EvalError> {
        if r < 2 {
            return Err(domain("Nr", "r > 1", r));
        }
        Self::check_sum_params("Nr", x, n, 2)?;
        let r64 = u64::from(r);
        let s1 = self.pi_sum(x, 0, n)?;
        let s2 = self.pi_sum(x, 1, n)?;
        let s3 = self.pi_sum(x, 2, n)?;
        let a = s1.powi(r64)?;
        let b = ((ext_e() * ext(x)) / ext_ln(ext(x))?) * s2.powi(r64)?;
        let c = s3.powi(r64)?;
        Ok(FamilyEval::from_terms(
            &Family::Nr { n, r },
            x,
            vec![
                (format!("sum(pi(x/k))^{r}"), a),
                (format!("e*x/log(x)*sum(pi(x/(e*k)))^{r}"), b),
                (format!("sum(pi(x/(e^2*k)))^{r}"), c),
            ],
        ))
    }

    /// `(√e x/log x)² π(x/e) < π(x)³ < (e²x/log x)·π(x/e)²`.
    pub fn eval_hassani(&self, x: f64) -> Result<HassaniEval, EvalError> {
        if !(x >= E) {
            return Err(domain("hassani", "x >= e", x));
        }
        let p = self.pis(x, &[(0, None), (1, None)])?;
        let (xe, e, lx) = (ext(x), ext_e(), ext_ln(ext(x))?);
        let lower = ((ext(E.sqrt()) * xe) / lx).powi(2)? * p[1];
        let middle = p[0].powi(3)?;
        let upper = ((e.powi(2)? * xe) / lx) * p[1].powi(2)?;
        Ok(HassaniEval {
            x,
            holds: (lower < middle, middle < upper),
            lower,
            middle,
            upper,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter() -> &'static PrimeCounter {
        PrimeCounter::shared()
    }

    fn eval() -> Evaluator<'static> {
        Evaluator::new(counter())
    }

    fn assert_rel(actual: ExtFloat, expected: f64, tol: f64) {
        let r = actual.rel_error(&ext(expected)).unwrap();
        assert!(r <= tol, "{actual} vs {expected}: rel {r}");
    }

    #[test]
    fn g_at_100_by_hand() {
        // π(100) = 25, π(36) = 11
        let expected = 625.0 - (100.0 * E / 100f64.ln()) * 11.0;
        let g = eval().eval_g(100.0).unwrap();
        assert_rel(g.value, expected, 1e-14);
        assert!((g.value.to_f64() - (-24.294)).abs() < 1e-3);
        assert_eq!(g.sign, -1);
    }

    #[test]
    fn g_at_e_uses_pi_of_one() {
        let g = eval().eval_g(E).unwrap();
        assert_eq!(g.value, ExtFloat::ONE);
        assert!(eval().eval_g(2.7).is_err());
    }

    #[test]
    fn h_at_100_by_hand() {
        // π(100) = 25, π(36) = 11, π(13) = 6
        let l = 100f64.ln();
        let expected =
            25f64.powi(3) - 3.0 * E * 100.0 / l * 121.0 + 3.0 * E * E * 100.0 / (l * l) * 6.0;
        assert_rel(eval().eval_h(100.0).unwrap().value, expected, 1e-13);
    }

    #[test]
    fn k_at_30_by_hand() {
        // π(30) = 10, π(11) = 5, π(4) = 2, π(1) = 0
        let l = 30f64.ln();
        let expected = 1e4 - 4.0 * E * 30.0 / l * 125.0 + 6.0 * E * E * 30.0 / (l * l) * 4.0;
        assert_rel(eval().eval_k(30.0).unwrap().value, expected, 1e-13);
    }

    #[test]
    fn l_at_1000_with_n2_by_hand() {
        // π(1000) = 168, π(500) = 95, π(367) = 73, π(183) = 42
        let expected = (263f64).powi(2) - E * 1000.0 / 1000f64.ln() * 115.0;
        assert_rel(eval().eval_l(1000.0, 2).unwrap().value, expected, 1e-14);
    }

    #[test]
    fn f_at_1000_with_n2_by_hand() {
        let first = 168.0 / 1000f64.ln() + 95.0 / 500f64.ln();
        let second = 73.0 / (1000.0 / E).ln() + 42.0 / (1000.0 / (2.0 * E)).ln();
        let expected = first * first - E * 1000.0 / 1000f64.ln() * second;
        assert_rel(eval().eval_f(1000.0, 2).unwrap().value, expected, 1e-13);
    }

    #[test]
    fn nr_at_1000_by_hand() {
        // π(1000/e²) = π(135) = 32, π(1000/(2e²)) = π(67) = 19
        let expected = 263f64.powi(2) - E * 1000.0 / 1000f64.ln() * 115f64.powi(2) + 51f64.powi(2);
        assert_rel(eval().eval_nr(1000.0, 2, 2).unwrap().value, expected, 1e-14);
    }

    #[test]
    fn hn_with_n1_is_h() {
        for x in [100.0, 1e4, 123_456.0, 1e7] {
            let h = eval().eval_h(x).unwrap();
            let h1 = eval().eval_hn(x, 1).unwrap();
            assert_eq!(h.value, h1.value);
        }
    }

    #[test]
    fn reference_rows_at_ten_thousand() {
        let e = eval();
        assert_rel(e.eval_h(1e4).unwrap().value, -4.822952515086e8, 1e-12);
        assert_rel(e.eval_k(1e4).unwrap().value, 6.785501979995337e11, 1e-12);
        assert_rel(e.eval_l(1e4, 5).unwrap().value, 5.442878634267854e6, 1e-12);
        assert_rel(
            e.eval_f(1e4, 5).unwrap().value,
            -377_275.135_169_574_06,
            1e-12,
        );
        assert_rel(
            e.eval_nr(1e4, 5, 3).unwrap().value,
            -6.204817261289663e12,
            1e-12,
        );
        assert_rel(
            e.eval_nr(1e4, 5, 4).unwrap().value,
            -7.911694463952808e15,
            1e-12,
        );
        assert_rel(
            e.eval_hn(1e4, 2).unwrap().value,
            6.353725021975254e27,
            1e-12,
        );
        let h3: ExtFloat = "2.617585266401968e83".parse().unwrap();
        let got = e.eval_hn(1e4, 3).unwrap().value;
        assert!(got.rel_error(&h3).unwrap() < 1e-12);
    }

    #[test]
    fn terms_fold_to_value() {
        let e = eval();
        for f in [
            Family::G,
            Family::H,
            Family::K,
            Family::L { n: 5 },
            Family::F { n: 5 },
            Family::Hn { n: 2 },
            Family::Nr { n: 5, r: 4 },
            Family::Hassani,
        ] {
            let v = e.eval(&f, 54_321.0).unwrap();
            assert_eq!(alternating_sum(v.terms.iter().map(|t| t.1)), v.value);
            assert_eq!(v.sign, v.value.sign());
        }
    }

    #[test]
    fn parameter_errors() {
        let e = eval();
        assert!(e.eval_h(7.0).is_err());
        assert!(e.eval_k(20.0).is_err());
        assert!(e.eval_l(1e4, 1).is_err());
        assert!(e.eval_l(10.0, 5).is_err());
        assert!(e.eval_f(13.0, 5).is_err());
        assert!(e.eval_hn(1e4, 0).is_err());
        assert!(e.eval_hn(1e4, 13).is_err());
        assert!(e.eval_nr(1e4, 5, 1).is_err());
        assert!(e.eval_nr(30.0, 5, 3).is_err());
        assert!(e.eval(&Family::H, f64::NAN).is_err());
    }

    #[test]
    fn hassani_examples() {
        let h = eval().eval_hassani(1e6).unwrap();
        assert_eq!(h.holds, (true, true));
        let h = eval().eval_hassani(E).unwrap();
        assert_eq!(h.middle, ExtFloat::ONE);
        assert_eq!(h.lower, ExtFloat::ZERO);
        assert!(h.holds.0);
    }

    #[test]
    fn near_integer_arguments_use_exact_fallback() {
        // x = e·3678 rounded to a double lies within 1e-12 of 3678·e
        let x = E * 3678.0;
        let got = eval().quotient_arg(x, 1, None).unwrap();
        let exact = quotient::<ExactRational>(x, 1, None)
            .unwrap()
            .floor_u64()
            .unwrap();
        assert_eq!(got, exact);
    }

    #[test]
    fn nearest_rounding_differs_from_floor() {
        let floor = eval();
        let nearest = eval().with_rounding(ArgRounding::Nearest);
        assert_eq!(floor.quotient_arg(1e4, 1, None).unwrap(), 3678);
        assert_eq!(nearest.quotient_arg(1e4, 1, None).unwrap(), 3679);
    }
}
