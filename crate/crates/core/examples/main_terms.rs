//! Exact values against closed-form leading terms and their error scales.

use pipoly::asymptotics::main_term_report;
use pipoly::checks::main_term_families;
use pipoly::inequality::{Evaluator, Family};
use pipoly::prime_engine::PrimeCounter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());
    println!("family,x,exact,main,ratio,deviation_over_scale");
    for family in main_term_families() {
        for k in 4..=10 {
            let r = main_term_report(&ev, &family, 10f64.powi(k))?;
            println!(
                "{},1e{k},{},{},{:.6},{:.3e}",
                family.label(),
                r.exact,
                r.main,
                r.ratio,
                r.normalized_deviation()
            );
        }
    }

    // For n = 2 the leading term has factor log 2 − 1 < 0.
    println!("L(n=2): sign of main term vs sign of exact value");
    for k in [4, 6, 8, 10] {
        let r = main_term_report(&ev, &Family::L { n: 2 }, 10f64.powi(k))?;
        println!(
            "    1e{k}: main {}, exact {}",
            r.main.sign(),
            r.exact.sign()
        );
    }
    Ok(())
}
