// Exact low-pass taps of the first Legendre wavelets and their JSON export.
//
// cargo run --example filters

use legwave::FilterBank;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=3 {
        let f = FilterBank::legd(n)?;
        println!("{}", f.order());
        for (k, (exact, h)) in f.h_exact().iter().zip(f.h()).enumerate() {
            println!(
                "  h_{k} = ({exact})·√2 = {h:.12}   g_{k} = {:+.12}",
                f.g()[k]
            );
        }
    }
    let json = serde_json::to_string(&FilterBank::legd(2)?.export())?;
    println!("{json}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
