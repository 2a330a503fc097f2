//! Biorthogonal dynamic phase of the unbroken dimer and the gamma-independent
//! geometric phase of the gain/loss loop.
//!
//!     cargo run --example biorthogonal_phase

use std::f64::consts::PI;

use geophase::linalg::biorthogonal;
use geophase::models::{build_pt_dimer, PTDimerParams};
use geophase::phases::{biorthogonal_dynamic_phase, pt_geometric_phase, pt_modified_period, total_phase, BlochInitialState};

fn main() -> geophase::Result<()> {
    let init = BlochInitialState::new(PI / 3.0, 0.0)?;
    println!("{:>5} {:>10} {:>12} {:>12} {:>12}", "gamma", "T", "dynamic", "total", "dyn - total");
    for gamma in [0.0, 0.3, 0.6, 0.9] {
        let h = build_pt_dimer(PTDimerParams::with_gamma(0.5, 1.0, gamma)?);
        let basis = biorthogonal(&h.operator())?;
        let [k1, k2] = basis.eigenvalues;
        let dynamic = biorthogonal_dynamic_phase(&h, &init)?;
        let total = total_phase(k1.re, k2.re)?;
        println!(
            "{gamma:>5.2} {:>10.5} {dynamic:>12.7} {total:>12.7} {:>12.7}",
            2.0 * PI / (k1.re - k2.re),
            dynamic - total
        );
    }

    let (g, omega_loop) = (1.0, 0.1);
    println!("\nloop with g = {g}, Omega = {omega_loop}: pi g / Omega = {:.12}", PI * g / omega_loop);
    for gamma in [0.0, 0.3, 0.6, 0.9] {
        println!(
            "gamma {gamma:.1}: return time {:>9.4}, geometric phase {:.12}",
            pt_modified_period(g, gamma, omega_loop)?,
            pt_geometric_phase(g, gamma, omega_loop)?
        );
    }
    Ok(())
}
