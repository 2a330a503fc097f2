//! Closed-form Berry, dynamic and Hannay phases next to the same numbers
//! measured on a propagated trajectory.
//!
//!     cargo run --example berry_hannay

use std::f64::consts::PI;

use geophase::evolution::{integrate_schrodinger, IntegratorConfig};
use geophase::linalg::eig2;
use geophase::models::{build_hermitian, HermitianEqualDiagonal};
use geophase::phases::{extract_phases, BlochInitialState, PhaseReport};

fn main() -> geophase::Result<()> {
    let h = build_hermitian(HermitianEqualDiagonal { h: 0.2, f: 0.6, g: 0.8 }).operator();
    let eig = eig2(&h)?;
    let (l1, l2) = (eig.eigenvalue1.re, eig.eigenvalue2.re);
    println!("eigenvalues {l1:.6} {l2:.6}, return time {:.6}", 2.0 * PI / (l1 - l2));
    println!("{:>8} {:>11} {:>11} {:>11} {:>11}", "theta0", "geometric", "measured", "hannay", "measured");

    for k in 0..=6 {
        let theta0 = PI * k as f64 / 6.0;
        let init = BlochInitialState::new(theta0, 0.0)?;
        let exact = PhaseReport::analytic(l1, l2, &init)?;
        let cfg = IntegratorConfig::new(exact.period / 4000.0, exact.period, 1)?;
        let traj = integrate_schrodinger(&h, &init.state_in(&eig.eigenvectors()), &cfg)?;
        let seen = extract_phases(&traj, &h)?;
        println!(
            "{theta0:>8.4} {:>11.7} {:>11.7} {:>11.7} {:>11.7}",
            exact.geometric, seen.geometric, exact.hannay, seen.hannay
        );
    }
    Ok(())
}
