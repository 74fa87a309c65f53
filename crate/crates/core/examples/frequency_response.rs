// Magnitude responses of the smoothing filters, their zeros and the
// linear-phase check.
//
// cargo run --example frequency_response

use std::f64::consts::PI;

use legwave::filterbank::{
    closed_form_magnitude, freq_response, passband_zeros, phase_linearity_residual, uniform_grid,
};
use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let probes = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];
    for v in [1, 3, 5] {
        let f = FilterBank::with_degree(v)?;
        let resp = freq_response(f.h(), &probes);
        print!("v={v} |H|:");
        for (w, z) in probes.iter().zip(&resp.values) {
            let closed = closed_form_magnitude(f.order(), *w);
            assert!((z.norm() - closed).abs() < 1e-12);
            print!(" {:.6}", z.norm());
        }
        println!();
        let zeros = passband_zeros(f.order());
        println!("  {} zeros in (-π, π]: {:?}", zeros.len(), zeros);
        let grid = uniform_grid(-PI, PI, 1024);
        println!("  phase residual {:e}", phase_linearity_residual(&f, &grid));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
