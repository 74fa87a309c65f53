// The phased transfer function `−e^{jvθ}·H(2θ)` solves Legendre's equation;
// the finite-difference residual shrinks like h².
//
// cargo run --example legendre_ode

use std::f64::consts::PI;

use legwave::analysis::{ode_convergence_orders, ode_residual};
use legwave::filterbank::uniform_grid;
use legwave::LegendreOrder;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = uniform_grid(0.2, PI - 0.2, 101);
    for v in [1, 3, 5, 7] {
        let order = LegendreOrder::new(v)?;
        let r = ode_residual(order, &grid, 1e-2)?;
        let orders = ode_convergence_orders(order, &grid, 1e-2, 3)?;
        println!("v={v}: residual(h=1e-2) = {r:.3e}, observed orders {orders:.3?}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
