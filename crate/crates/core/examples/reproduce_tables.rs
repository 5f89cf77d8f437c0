//! Recomputes the published tables up to 10^10 and prints them as Markdown.

use pipoly::inequality::Evaluator;
use pipoly::prime_engine::PrimeCounter;
use pipoly::repro::{emit, reproduce_table, OutputFormat, TableId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());
    for id in [
        TableId::T1H,
        TableId::T2K,
        TableId::T3L,
        TableId::T4F,
        TableId::T5N3N4,
        TableId::T7H2H3,
    ] {
        let report = reproduce_table(&ev, id, 1e10, 1e-6)?;
        println!("Table {} ({} mismatches)", id.number(), report.mismatches());
        println!("{}", emit(&report.rows, OutputFormat::Markdown));
    }
    Ok(())
}
