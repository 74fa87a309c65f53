// Three-level periodic transform of a test signal: Haar reconstructs it
// exactly, the longer Legendre filters do not.
//
// cargo run --example signal_roundtrip

use legwave::analysis::signal_roundtrip_error;
use legwave::transform::{dwt1d, Boundary};
use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let signal: Vec<f64> = (0..128)
        .map(|i| {
            let t = i as f64 / 128.0;
            (2.0 * std::f64::consts::PI * 3.0 * t).sin() + if t > 0.6 { 0.5 } else { 0.0 }
        })
        .collect();
    for n in 1..=4 {
        let f = FilterBank::legd(n)?;
        let d = dwt1d(&signal, &f, 3, Boundary::Periodic)?;
        let detail_energy: f64 = d.details.iter().flatten().map(|c| c * c).sum();
        let (max_abs, rel) = signal_roundtrip_error(&signal, &f, 3)?;
        println!(
            "{}: detail energy {detail_energy:.4}, round trip max |e| {max_abs:.3e}, rel L2 {rel:.3e}",
            f.order().name()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
