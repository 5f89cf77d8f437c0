//! Every named family at one point, with its signed terms.

use pipoly::inequality::{Evaluator, Family};
use pipoly::prime_engine::PrimeCounter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());
    let x = 1e6;
    let families = [
        Family::G,
        Family::H,
        Family::K,
        Family::L { n: 5 },
        Family::F { n: 5 },
        Family::Hn { n: 2 },
        Family::Nr { n: 5, r: 3 },
        Family::Nr { n: 5, r: 4 },
    ];
    for family in &families {
        let e = ev.eval(family, x)?;
        println!("{} at {x:e} = {}", family.label(), e.value);
        for (i, (label, v)) in e.terms.iter().enumerate() {
            println!("    {} {label} = {v}", if i % 2 == 0 { '+' } else { '-' });
        }
    }
    let h = ev.eval_hassani(x)?;
    println!(
        "hassani: {} < {} < {}: {:?}",
        h.lower, h.middle, h.upper, h.holds
    );
    Ok(())
}
