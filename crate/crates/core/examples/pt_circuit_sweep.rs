//! Normalized modes of the gain/loss gyrator circuit versus gamma = s/g,
//! plus the precession rate of the unbroken circuit.
//!
//!     cargo run --example pt_circuit_sweep [sweep.csv]

use geophase::circuits::{gamma_grid, gamma_sweep, pt_circuit_system, CircuitParams};
use geophase::evolution::{integrate_second_order, IntegratorConfig};
use geophase::export::{sweep_csv, write_file};
use geophase::phases::{extract_precession, pt_modified_period};
use nalgebra::Vector2;

fn main() -> geophase::Result<()> {
    let base = CircuitParams::from_rates(1.0, 0.2, None)?;
    let points = gamma_sweep(&base, &gamma_grid(2.0, 81))?;
    for p in points.iter().step_by(8) {
        let m = p.normalized(base.omega0());
        let re: Vec<String> = m.iter().map(|z| format!("{:+.4}", z.re)).collect();
        let im: Vec<String> = m.iter().map(|z| format!("{:+.4}", z.im)).collect();
        println!("gamma {:.2}  re [{}]  im [{}]  {}", p.gamma, re.join(" "), im.join(" "), p.classification.label());
    }
    if let Some(path) = std::env::args().nth(1) {
        write_file(path.as_ref(), &sweep_csv(&points, base.omega0()))?;
        println!("wrote {path}");
    }

    // Below the EP the pattern still precesses, at g√(1 − γ²)/2.
    let (g, omega_loop) = (0.4, 0.1);
    let cfg = IntegratorConfig::new(1e-3, 10.0, 1)?;
    for gamma in [0.3, 0.6, 0.9] {
        let sys = pt_circuit_system(&CircuitParams::from_rates(20.0, g, Some(gamma * g))?)?;
        let traj = integrate_second_order(&sys, &Vector2::new(1.0, 0.0), &Vector2::zeros(), &cfg)?;
        let rate = extract_precession(&traj)?.rate;
        let expected = 0.5 * g * (1.0 - gamma * gamma).sqrt();
        let holonomy = rate * pt_modified_period(g, gamma, omega_loop)?;
        println!("gamma {gamma}: rate {rate:.6} (expected {expected:.6}), rate x return time {holonomy:.5}");
    }
    Ok(())
}
