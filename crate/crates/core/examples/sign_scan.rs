//! Sign scan of Ramanujan's G, bisection of its last sign change below 10^4,
//! and the co-sign check of G and H.

use pipoly::inequality::{Evaluator, Family};
use pipoly::prime_engine::PrimeCounter;
use pipoly::scanner::{agreement_rate, cosign_check, make_grid, refine_crossing, scan, GridKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());

    let report = scan(&ev, &Family::G, 10.0, 1e4, 200, GridKind::Linear)?;
    println!(
        "{} sign changes, monotone: {}",
        report.crossings.len(),
        report.monotone.name()
    );
    if let Some(&(lo, hi)) = report.crossings.last() {
        let c = refine_crossing(&ev, &Family::G, lo, hi, 1.0)?;
        println!(
            "last change in [{}, {}] (signs {} and {})",
            c.lo, c.hi, c.sign_lo, c.sign_hi
        );
    }

    let grid = make_grid(1e4, 1e10, 13, GridKind::Log)?;
    let rows = cosign_check(&ev, &grid)?;
    println!(
        "G and H agree in sign at {:.0}% of the grid",
        100.0 * agreement_rate(&rows)
    );
    Ok(())
}
