// Wavelet-packet tree of a chirp and the packet functions W_0 … W_9 of
// legd2.
//
// cargo run --example wavelet_packets

use legwave::transform::{wp_decompose, wp_functions, Boundary};
use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let f = FilterBank::legd(2)?;
    let chirp: Vec<f64> = (0..64)
        .map(|i| {
            let t = i as f64 / 64.0;
            (40.0 * t * t).sin()
        })
        .collect();
    let tree = wp_decompose(&chirp, &f, 3, Boundary::Periodic)?;
    let energies: Vec<String> = tree
        .leaves()
        .iter()
        .map(|leaf| format!("{:.3}", leaf.iter().map(|c| c * c).sum::<f64>()))
        .collect();
    println!("leaf energies (natural order): {}", energies.join(" "));

    for (n, w) in wp_functions(&f, 9, 6)?.iter().enumerate() {
        let (lo, hi) = w
            .values
            .iter()
            .fold((f64::MAX, f64::MIN), |(a, b), &y| (a.min(y), b.max(y)));
        println!("W_{n}: range [{lo:+.3}, {hi:+.3}] over t ∈ [0, {}]", f.v());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
