//! Sign scans over integer grids, bisection of sign changes, and the
//! co-sign comparison of `G` and `H`.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::inequality::{EvalError, Evaluator, Family};
use crate::numerics::ExtFloat;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error(
        "endpoints {lo} and {hi} do not bracket a sign change (signs {sign_lo} and {sign_hi})"
    )]
    NoSignChange {
        lo: f64,
        hi: f64,
        sign_lo: i8,
        sign_hi: i8,
    },
    #[error("tolerance must be at least 1, got {0}")]
    Tolerance(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Mixed,
}

impl Monotonicity {
    pub fn name(self) -> &'static str {
        match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::Mixed => "mixed",
        }
    }

    /// Strict monotonicity of a sequence; a single value counts as both.
    pub fn of(values: &[ExtFloat]) -> Self {
        if values.windows(2).all(|w| w[0] < w[1]) {
            Monotonicity::Increasing
        } else if values.windows(2).all(|w| w[0] > w[1]) {
            Monotonicity::Decreasing
        } else {
            Monotonicity::Mixed
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub family: Family,
    /// Strictly ascending integers.
    pub grid: Vec<f64>,
    pub values: Vec<ExtFloat>,
    pub signs: Vec<i8>,
    /// Adjacent grid pairs whose signs differ strictly.
    pub crossings: Vec<(f64, f64)>,
    pub monotone: Monotonicity,
    pub runtime_ms: u64,
}

impl ScanReport {
    /// Per-point CSV followed by `#`-prefixed summary lines; runtime excluded.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value,sign\n");
        for ((x, v), s) in self.grid.iter().zip(&self.values).zip(&self.signs) {
            writeln!(out, "{x},{v},{s}").unwrap();
        }
        writeln!(out, "# family={}", self.family.label()).unwrap();
        writeln!(out, "# monotone={}", self.monotone.name()).unwrap();
        let crossings: Vec<String> = self
            .crossings
            .iter()
            .map(|(a, b)| format!("[{a},{b}]"))
            .collect();
        writeln!(out, "# crossings={}", crossings.join(";")).unwrap();
        out
    }
}

/// Integer grid between `x_min` and `x_max`, duplicates removed.
pub fn make_grid(
    x_min: f64,
    x_max: f64,
    points: usize,
    kind: GridKind,
) -> Result<Vec<f64>, ScanError> {
    if points < 2 {
        return Err(ScanError::InvalidGrid(format!(
            "need at least 2 points, got {points}"
        )));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min > 0.0 && x_min < x_max) {
        return Err(ScanError::InvalidGrid(format!(
            "bad range [{x_min}, {x_max}]"
        )));
    }
    let (lo, hi) = (x_min.ceil(), x_max.floor());
    if lo >= hi {
        return Err(ScanError::InvalidGrid(format!(
            "no two integers in [{x_min}, {x_max}]"
        )));
    }
    let steps = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let t = i as f64 / steps;
            let v = match kind {
                GridKind::Linear => x_min + (x_max - x_min) * t,
                GridKind::Log => x_min * (x_max / x_min).powf(t),
            };
            v.round().clamp(lo, hi)
        })
        .collect();
    grid.dedup();
    Ok(grid)
}

fn eval_sign(ev: &Evaluator<'_>, family: &Family, x: f64) -> Result<i8, ScanError> {
    Ok(ev.eval(family, x)?.sign)
}

/// Evaluates `family` on the grid in parallel; results are kept in grid order.
pub fn scan(
    evaluator: &Evaluator<'_>,
    family: &Family,
    x_min: f64,
    x_max: f64,
    points: usize,
    kind: GridKind,
) -> Result<ScanReport, ScanError> {
    let grid = make_grid(x_min, x_max, points, kind)?;
    scan_grid(evaluator, family, grid)
}

/// [`scan`] over an explicit ascending grid.
pub fn scan_grid(
    evaluator: &Evaluator<'_>,
    family: &Family,
    grid: Vec<f64>,
) -> Result<ScanReport, ScanError> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ScanError::InvalidGrid(
            "grid must be strictly ascending".into(),
        ));
    }
    let start = Instant::now();
    let values = grid
        .par_iter()
        .map(|&x| evaluator.eval(family, x).map(|e| e.value))
        .collect::<Result<Vec<_>, _>>()?;
    let signs: Vec<i8> = values.iter().map(|v| v.sign()).collect();
    let crossings = grid
        .windows(2)
        .zip(signs.windows(2))
        .filter(|(_, s)| s[0] != s[1])
        .map(|(g, _)| (g[0], g[1]))
        .collect();
    Ok(ScanReport {
        family: family.clone(),
        monotone: Monotonicity::of(&values),
        grid,
        values,
        signs,
        crossings,
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Final bracket of a bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub lo: f64,
    pub hi: f64,
    pub sign_lo: i8,
    pub sign_hi: i8,
    /// Integer where the family evaluated to exactly zero, if one was hit.
    pub zero_at: Option<f64>,
}

/// Bisects on integers until `hi − lo ≤ tolerance` or an exact zero is hit.
pub fn refine_crossing(
    evaluator: &Evaluator<'_>,
    family: &Family,
    lo: f64,
    hi: f64,
    tolerance: f64,
) -> Result<Crossing, ScanError> {
    if !(tolerance >= 1.0) {
        return Err(ScanError::Tolerance(tolerance));
    }
    let (mut a, mut b) = (lo.round(), hi.round());
    if !(a < b) {
        return Err(ScanError::InvalidGrid(format!("bad bracket [{lo}, {hi}]")));
    }
    let (mut sa, mut sb) = (
        eval_sign(evaluator, family, a)?,
        eval_sign(evaluator, family, b)?,
    );
    if sa == sb {
        return Err(ScanError::NoSignChange {
            lo: a,
            hi: b,
            sign_lo: sa,
            sign_hi: sb,
        });
    }
    let zero = |x: f64, s: i8| (s == 0).then_some(x);
    if let Some(z) = zero(a, sa).or(zero(b, sb)) {
        return Ok(Crossing {
            lo: a,
            hi: b,
            sign_lo: sa,
            sign_hi: sb,
            zero_at: Some(z),
        });
    }
    while b - a > tolerance {
        let m = (a + ((b - a) / 2.0).floor()).max(a + 1.0);
        let sm = eval_sign(evaluator, family, m)?;
        if sm == 0 {
            return Ok(Crossing {
                lo: a,
                hi: m,
                sign_lo: sa,
                sign_hi: 0,
                zero_at: Some(m),
            });
        }
        if sm == sa {
            (a, sa) = (m, sm);
        } else {
            (b, sb) = (m, sm);
        }
    }
    Ok(Crossing {
        lo: a,
        hi: b,
        sign_lo: sa,
        sign_hi: sb,
        zero_at: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosignRow {
    pub x: f64,
    pub sign_g: i8,
    pub sign_h: i8,
    pub agree: bool,
}

/// Signs of `G` and `H` at every grid point, in grid order.
pub fn cosign_check(evaluator: &Evaluator<'_>, grid: &[f64]) -> Result<Vec<CosignRow>, ScanError> {
    grid.par_iter()
        .map(|&x| {
            let sign_g = eval_sign(evaluator, &Family::G, x)?;
            let sign_h = eval_sign(evaluator, &Family::H, x)?;
            Ok(CosignRow {
                x,
                sign_g,
                sign_h,
                agree: sign_g == sign_h,
            })
        })
        .collect()
}

/// Fraction of rows whose signs agree; `1` for an empty report.
pub fn agreement_rate(rows: &[CosignRow]) -> f64 {
    if rows.is_empty() {
        return 1.0;
    }
    rows.iter().filter(|r| r.agree).count() as f64 / rows.len() as f64
}
