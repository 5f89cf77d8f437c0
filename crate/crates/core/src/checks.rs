//! Empirical property suites shared by the command line and the tests.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::asymptotics::main_term_report;
use crate::inequality::{EvalError, Evaluator, Family};
use crate::prime_engine::{PrimeCounter, PrimeError};
use crate::scanner::{cosign_check, scan_grid, Monotonicity, ScanError};

/// Bound on `|ψ(x) − x| / (√x (log x)²)`.
pub const PSI_BOUND: f64 = 1.0;
/// Bound on `|π(x) − ψ(x)/log x| · (log x)² / x`.
pub const RESIDUAL_BOUND: f64 = 2.0;
/// Bound on `|exact − main| / error_scale`.
pub const MAIN_TERM_BOUND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub label: String,
    pub detail: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// One `PASS`/`FAIL` line per row and a closing summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            let tag = if r.pass { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {} {}: {}", self.name, r.label, r.detail).unwrap();
        }
        let ok = self.rows.iter().filter(|r| r.pass).count();
        writeln!(
            out,
            "{} {}: {ok}/{} checks passed",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.rows.len()
        )
        .unwrap();
        out
    }
}

/// `10^lo, 10^(lo+1), …, 10^hi`.
pub fn decades(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|k| 10f64.powi(k as i32)).collect()
}

/// Families whose leading terms are compared against exact values.
pub fn main_term_families() -> Vec<Family> {
    vec![
        Family::H,
        Family::K,
        Family::L { n: 5 },
        Family::F { n: 5 },
        Family::Nr { n: 5, r: 3 },
        Family::Nr { n: 5, r: 4 },
        Family::Hn { n: 2 },
    ]
}

/// Expected sign and direction over large `x` for each tabulated family.
pub fn sign_expectations() -> Vec<(Family, i8, Monotonicity)> {
    use Monotonicity::{Decreasing, Increasing};
    vec![
        (Family::H, -1, Decreasing),
        (Family::K, 1, Increasing),
        (Family::L { n: 5 }, 1, Increasing),
        (Family::F { n: 5 }, -1, Decreasing),
        (Family::Nr { n: 5, r: 3 }, -1, Decreasing),
        (Family::Nr { n: 5, r: 4 }, -1, Decreasing),
        (Family::Hn { n: 2 }, 1, Increasing),
        (Family::Hn { n: 3 }, 1, Increasing),
    ]
}

/// `|ψ(x) − x| / (√x (log x)²) ≤ 1`.
pub fn psi_suite(counter: &PrimeCounter, xs: &[u64]) -> Result<SuiteReport, PrimeError> {
    let rows = xs
        .par_iter()
        .map(|&x| {
            let d = counter.psi_deviation(x)?.abs();
            // The x (log x)² normalization is reported alongside, unbounded.
            let linear = d / (x as f64).sqrt();
            Ok(CheckRow {
                label: format!("x={x}"),
                detail: format!(
                    "|psi(x)-x|/(sqrt(x)*log(x)^2) = {d:.6e} (bound {PSI_BOUND}), |psi(x)-x|/(x*log(x)^2) = {linear:.3e}"
                ),
                pass: d <= PSI_BOUND,
            })
        })
        .collect::<Result<_, PrimeError>>()?;
    Ok(SuiteReport { name: "psi", rows })
}

/// `|π(x) − ψ(x)/log x| · (log x)² / x ≤ 2`.
pub fn residual_suite(counter: &PrimeCounter, xs: &[u64]) -> Result<SuiteReport, PrimeError> {
    let rows = xs
        .par_iter()
        .map(|&x| {
            let d = counter.pi_residual(x)?.abs();
            Ok(CheckRow {
                label: format!("x={x}"),
                detail: format!(
                    "|pi(x)-psi(x)/log(x)|*log(x)^2/x = {d:.6e} (bound {RESIDUAL_BOUND})"
                ),
                pass: d <= RESIDUAL_BOUND,
            })
        })
        .collect::<Result<_, PrimeError>>()?;
    Ok(SuiteReport {
        name: "residual",
        rows,
    })
}

/// Two rows per family: the relative gap to the main term shrinks from the
/// first to the last grid point, and the deviation stays within
/// [`MAIN_TERM_BOUND`] error scales everywhere on the grid.
pub fn main_term_suite(
    evaluator: &Evaluator<'_>,
    families: &[Family],
    grid: &[f64],
) -> Result<SuiteReport, EvalError> {
    let mut rows = Vec::new();
    for family in families {
        let reports = grid
            .par_iter()
            .map(|&x| main_term_report(evaluator, family, x))
            .collect::<Result<Vec<_>, _>>()?;
        let (Some(first), Some(last)) = (reports.first(), reports.last()) else {
            continue;
        };
        let (g0, g1) = (first.relative_gap(), last.relative_gap());
        rows.push(CheckRow {
            label: format!("{} gap", family.label()),
            detail: format!(
                "|exact/main-1| = {g0:.4e} at x={} and {g1:.4e} at x={}",
                first.x, last.x
            ),
            pass: g1 < g0,
        });
        let worst = reports
            .iter()
            .map(|r| (r.normalized_deviation(), r.x))
            .fold(
                (0.0f64, 0.0),
                |a, b| if b.0 > a.0 || b.0.is_nan() { b } else { a },
            );
        rows.push(CheckRow {
            label: format!("{} scale", family.label()),
            detail: format!(
                "max |exact-main|/error_scale = {:.4e} at x={} (bound {MAIN_TERM_BOUND})",
                worst.0, worst.1
            ),
            pass: worst.0 <= MAIN_TERM_BOUND,
        });
    }
    Ok(SuiteReport {
        name: "maintermtrend",
        rows,
    })
}

/// `G` and `H` share a sign at every grid point.
pub fn cosign_suite(evaluator: &Evaluator<'_>, grid: &[f64]) -> Result<SuiteReport, ScanError> {
    let rows = cosign_check(evaluator, grid)?
        .into_iter()
        .map(|r| CheckRow {
            label: format!("x={}", r.x),
            detail: format!("sign G = {}, sign H = {}", r.sign_g, r.sign_h),
            pass: r.agree,
        })
        .collect();
    Ok(SuiteReport {
        name: "cosign",
        rows,
    })
}

/// Sign and strict monotonicity of each family over `grid`.
pub fn sign_monotone_suite(
    evaluator: &Evaluator<'_>,
    expectations: &[(Family, i8, Monotonicity)],
    grid: &[f64],
) -> Result<SuiteReport, ScanError> {
    let mut rows = Vec::new();
    for (family, sign, direction) in expectations {
        let report = scan_grid(evaluator, family, grid.to_vec())?;
        let signs_ok = report.signs.iter().all(|s| s == sign);
        rows.push(CheckRow {
            label: family.label(),
            detail: format!(
                "signs {:?} (expected all {sign}), {} (expected {})",
                report.signs,
                report.monotone.name(),
                direction.name()
            ),
            pass: signs_ok && report.monotone == *direction,
        });
    }
    Ok(SuiteReport {
        name: "signs",
        rows,
    })
}
