// Orthogonality defect and reconstruction error across the family.
//
// cargo run --example non_orthogonality

use legwave::analysis::{orthogonality_defect, roundtrip_error};
use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    println!("family  lag-0     defect    half-band  S·A−I (n=16)");
    for n in 1..=8 {
        let f = FilterBank::legd(n)?;
        let o = orthogonality_defect(&f);
        let r = roundtrip_error(16, 1, f.order(), 4, 2024)?;
        println!(
            "{:<7} {:<9} {:<9.6} {:<10.6} {:.6}",
            f.order().name(),
            o.lag_autocorrelations_exact[&0].to_string(),
            o.defect,
            o.halfband_deviation,
            r.operator_deviation.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
