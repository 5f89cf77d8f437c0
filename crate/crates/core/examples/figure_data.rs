//! Plot samples for the figures, written as CSV files in the temp directory.

use pipoly::inequality::Evaluator;
use pipoly::prime_engine::PrimeCounter;
use pipoly::repro::{figure_csv, figure_data, figure_family};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ev = Evaluator::new(PrimeCounter::shared());
    for figure in 1..=8 {
        let samples = figure_data(&ev, figure, 400)?;
        let path = std::env::temp_dir().join(format!("pipoly-figure-{figure}.csv"));
        std::fs::write(&path, figure_csv(&samples))?;
        println!(
            "figure {figure} ({}): {}",
            figure_family(figure)?.label(),
            path.display()
        );
    }
    Ok(())
}
