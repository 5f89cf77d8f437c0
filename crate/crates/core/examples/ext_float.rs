//! Values far outside the native exponent range keep full relative precision.

use pipoly::numerics::{parse_table_value, ExtFloat};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ExtFloat::from_f64(2.44e16)?;
    let big = base.powi(27)?;
    println!("(2.44e16)^27 = {big}");
    println!("            = {}", big.to_scientific(8));
    println!("log10       = {:.6}", big.log10_abs());

    let tiny = ExtFloat::ONE.checked_div(big)?;
    println!("reciprocal  = {tiny}");
    println!("product     = {}", big * tiny);

    let (v, canonical) = parse_table_value(r"6.353725021975254 \times 10^{27}")?;
    println!("parsed {canonical} -> {v}");
    Ok(())
}
