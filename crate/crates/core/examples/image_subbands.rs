// One-level 2D decomposition and reconstruction of a synthetic line
// drawing, written out as PGM files.
//
// cargo run --example image_subbands [output-dir]

use legwave::io::{encode_pgm, write_atomic};
use legwave::transform::{dwt2d, idwt2d, Boundary};
use legwave::FilterBank;
use nalgebra::DMatrix;

fn sketch(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        let (x, y) = (j as f64 - n as f64 / 2.0, i as f64 - n as f64 / 2.0);
        let ring = ((x * x + y * y).sqrt() - n as f64 / 3.0).abs() < 1.5;
        let stroke = (i as i64 - j as i64).abs() < 2 || i == n / 5;
        if ring || stroke {
            20.0
        } else {
            235.0
        }
    })
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let image = sketch(64);
    write_atomic(&out_dir.join("sketch.pgm"), &encode_pgm(&image, true))?;
    for n in [1, 2] {
        let f = FilterBank::legd(n)?;
        let s = dwt2d(&image, &f, 1, Boundary::Periodic)?;
        let back = idwt2d(&s, &f)?;
        let b = &s.details[0];
        let energy = |m: &DMatrix<f64>| m.iter().map(|c| c * c).sum::<f64>();
        println!(
            "{}: LL {:.0}  LH {:.0}  HL {:.0}  HH {:.0}  max |error| {:.3e}",
            f.order().name(),
            energy(&s.ll),
            energy(&b.lh),
            energy(&b.hl),
            energy(&b.hh),
            (&back - &image).amax()
        );
        let name = format!("sketch_{}.pgm", f.order().name());
        write_atomic(&out_dir.join(&name), &encode_pgm(&back, true))?;
    }
    println!("images written to {}", out_dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
