// Scaling function and wavelet of legd2 after 4 and 8 cascade iterations,
// compared with the exact dyadic values.
//
// cargo run --example cascade_shapes

use legwave::cascade::{
    cascade_scaling, cascade_wavelet, convergence_profile, exact_dyadic_values,
};
use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = FilterBank::legd(2)?;
    for iterations in [4, 8] {
        let phi = cascade_scaling(&f, iterations)?;
        let psi = cascade_wavelet(&f, &phi)?;
        let peak = phi.values.iter().cloned().fold(f64::MIN, f64::max);
        println!(
            "{iterations} iterations: {} samples, mass {:.12}, max φ {peak:.6}, ∫ψ {:.1e}",
            phi.values.len(),
            phi.integral(),
            psi.integral()
        );
    }
    let exact = exact_dyadic_values(&f, 3)?;
    println!("exact φ on 1/8 grid:");
    for (t, y) in exact.points() {
        println!("  φ({t:.3}) = {y:.9}");
    }
    println!("sup gap per iteration: {:?}", convergence_profile(&f, 8)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
