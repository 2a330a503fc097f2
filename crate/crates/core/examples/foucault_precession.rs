//! Gyrator-coupled LC pair as a Foucault pendulum: the oscillation plane
//! turns at a/2, and a CSV of the voltages shows the precessing ellipse.
//!
//!     cargo run --example foucault_precession [out.csv]

use geophase::circuits::{foucault_system, CircuitParams};
use geophase::evolution::{integrate_second_order, IntegratorConfig};
use geophase::export::{export_trajectory, OutputFormat};
use geophase::phases::extract_precession;
use nalgebra::Vector2;

fn main() -> geophase::Result<()> {
    let (omega0, a, duration) = (20.0, 0.4, 10.0);
    let p = CircuitParams::from_rates(omega0, a, None)?;
    println!("L = {} H, C = {} F, Gg = {} S", p.inductance, p.capacitance, p.gyrator_conductance);

    let sys = foucault_system(&p)?;
    let cfg = IntegratorConfig::new(1e-3, duration, 1)?;
    let start = Vector2::new(1.0, 1.0) / 2f64.sqrt();
    let traj = integrate_second_order(&sys, &start, &Vector2::zeros(), &cfg)?;
    let prec = extract_precession(&traj)?;
    println!("precession rate {:.6} (a/2 = {})", prec.rate, a / 2.0);
    println!("angle after {duration}: {:.6} rad (a t / 2 = {})", prec.angle_at(duration), a * duration / 2.0);

    if let Some(path) = std::env::args().nth(1) {
        export_trajectory(&traj, OutputFormat::Csv, path.as_ref())?;
        println!("wrote {} samples to {path}", traj.len());
    }
    Ok(())
}
