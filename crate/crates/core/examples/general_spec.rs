//! A user-written inequality in the expression language, checked against the
//! built-in evaluator it mirrors.

use pipoly::expression::{eval_spec, family_text, parse_spec};
use pipoly::inequality::{Evaluator, Family};
use pipoly::prime_engine::PrimeCounter;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());

    let spec = parse_spec(
        "sum(k, 1, n, pi(x/k)/log(x/k))^2 - e*x/log(x)*sum(k, 1, n, pi(x/(e*k))/log(x/(e*k)))",
    )?;
    println!("canonical: {spec}");
    println!("degree:    {}", spec.degree());
    for x in [1e4, 1e6, 1e8] {
        let dsl = eval_spec(&spec, &ev, x, Some(5))?;
        let native = ev.eval(&Family::F { n: 5 }, x)?.value;
        println!(
            "x = {x:e}: dsl {dsl}, native {native}, identical {}",
            dsl == native
        );
    }

    println!(
        "built-in text for K: {}",
        family_text(&Family::K).unwrap_or_default()
    );

    match parse_spec("pi(x)^2 - e*x/log(x)*pi(x/e") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
    Ok(())
}
