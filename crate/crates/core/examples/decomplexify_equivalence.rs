//! One Hamiltonian, three propagations: complex Schrödinger, the real
//! four-dimensional system and two uncoupled second-order oscillators.
//!
//!     cargo run --example decomplexify_equivalence

use geophase::decomplexify::{initial_position, initial_velocity, real4, second_order, split, to_real4, Variable};
use geophase::evolution::{integrate_real4, integrate_schrodinger, integrate_second_order, IntegratorConfig};
use geophase::{Complex, ComplexMatrix2, ComplexVector2};

fn main() -> geophase::Result<()> {
    let h = ComplexMatrix2::new(
        Complex::new(0.7, 0.0),
        Complex::new(0.9, -0.3),
        Complex::new(0.9, 0.3),
        Complex::new(-0.4, 0.0),
    );
    let psi0 = ComplexVector2::new(Complex::new(0.8, 0.0), Complex::new(0.0, 0.6));
    let rs = split(&h);
    println!("A = Im H = {}", rs.a_mat);
    println!("B = Re H = {}", rs.b_mat);

    let x = second_order(&rs, Variable::X)?;
    println!("z'' = D z' - K z with D = {}K = {}", x.damping, x.stiffness);

    let cfg = IntegratorConfig::new(1e-3, 10.0, 1000)?;
    let complex = integrate_schrodinger(&h, &psi0, &cfg)?;
    let real = integrate_real4(&real4(&h), &to_real4(&psi0), &cfg)?;
    let [xs, ys] = [Variable::X, Variable::Y].map(|w| {
        let sys = second_order(&rs, w).expect("B is invertible");
        integrate_second_order(&sys, &initial_position(w, &psi0), &initial_velocity(&rs, w, &psi0), &cfg)
            .expect("step is stable")
    });

    println!("{:>5} {:>12} {:>12} {:>12} {:>12}", "t", "Re psi1", "|real4|", "|2nd order|", "norm^2");
    for k in 0..complex.len() {
        let c = &complex.states[k];
        let r = &real.states[k];
        let so = [xs.states[k][0], ys.states[k][0], xs.states[k][1], ys.states[k][1]];
        let d_real = (0..4).map(|i| (c[i] - r[i]).abs()).fold(0.0, f64::max);
        let d_so = (0..4).map(|i| (c[i] - so[i]).abs()).fold(0.0, f64::max);
        let norm: f64 = c.iter().map(|v| v * v).sum();
        println!("{:>5.1} {:>12.8} {:>12.2e} {:>12.2e} {:>12.10}", complex.times[k], c[0], d_real, d_so, norm);
    }
    Ok(())
}
