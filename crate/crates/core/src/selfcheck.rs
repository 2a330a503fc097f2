//! Quick invariant suite behind the `check` command.

use std::f64::consts::PI;

use nalgebra::Vector2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuits::{foucault_system, gamma_grid, gamma_sweep, pt_circuit_system, CircuitParams, EpClass};
use crate::decomplexify::{initial_position, initial_velocity, real4, second_order, split, to_real4, Variable};
use crate::evolution::{integrate_real4, integrate_schrodinger, integrate_second_order, norm_series, IntegratorConfig};
use crate::linalg::{eig2, Complex, ComplexMatrix2, ComplexVector2};
use crate::models::{build_pt_dimer, pt_operator, pt_symmetry_check, PTDimerParams, PtRealization};
use crate::phases::{
    berry_phase, dynamic_phase, extract_precession, hannay_angle, pt_geometric_phase, pt_modified_period,
    total_phase, BlochInitialState,
};

const DEFAULT_SEED: u64 = 0x6765_6f70_6861_7365;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Seed from `GEOPHASE_SEED` if set and numeric, otherwise a fixed default.
pub fn seed() -> u64 {
    std::env::var("GEOPHASE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst.is_finite() && worst < tol,
        detail: format!("max deviation {worst:.3e} (tol {tol:.0e})"),
    }
}

fn failed(name: &'static str, err: crate::Error) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: false,
        detail: err.to_string(),
    }
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex {
    Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_hermitian(rng: &mut ChaCha8Rng) -> ComplexMatrix2 {
    let off = random_complex(rng);
    ComplexMatrix2::new(
        Complex::new(rng.gen_range(-1.0..1.0), 0.0),
        off,
        off.conj(),
        Complex::new(rng.gen_range(-1.0..1.0), 0.0),
    )
}

fn phase_identities(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let l2 = rng.gen_range(-2.0..2.0);
        let l1 = l2 + rng.gen_range(0.01..2.0);
        let init = BlochInitialState::new(rng.gen_range(0.0..=PI), 0.0).unwrap();
        let (tot, dynm) = (total_phase(l1, l2).unwrap(), dynamic_phase(l1, l2, &init).unwrap());
        worst = worst.max((tot - dynm - berry_phase(&init)).abs());
        worst = worst.max((hannay_angle(init.theta0) + 2.0 * berry_phase(&init)).abs());
    }
    outcome("phase identities (total = dynamic + geometric, hannay = -2 geometric)", worst, 1e-10)
}

fn equivalence(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let name = "decomplexification equivalence (complex / real4 / second order)";
    let cfg = IntegratorConfig::new(1e-3, 10.0, 100).unwrap();
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 10 {
        let h = random_hermitian(rng);
        let rs = split(&h);
        let b = rs.b_mat;
        if b.determinant().abs() < 0.1 * b.norm_squared() {
            continue;
        }
        let psi0 = ComplexVector2::new(random_complex(rng), random_complex(rng)).normalized();
        let run = || -> crate::Result<f64> {
            let a = integrate_schrodinger(&h, &psi0, &cfg)?;
            let r = integrate_real4(&real4(&h), &to_real4(&psi0), &cfg)?;
            let mut halves = Vec::new();
            for which in [Variable::X, Variable::Y] {
                let so = second_order(&rs, which)?;
                let z0 = initial_position(which, &psi0);
                let v0 = initial_velocity(&rs, which, &psi0);
                halves.push(integrate_second_order(&so, &z0, &v0, &cfg)?);
            }
            let mut w: f64 = 0.0;
            for k in 0..a.len() {
                let (ca, cr) = (&a.states[k], &r.states[k]);
                let so = [halves[0].states[k][0], halves[1].states[k][0], halves[0].states[k][1], halves[1].states[k][1]];
                for i in 0..4 {
                    w = w.max((ca[i] - cr[i]).abs()).max((ca[i] - so[i]).abs());
                }
            }
            Ok(w)
        };
        match run() {
            Ok(w) => worst = worst.max(w),
            Err(e) => return failed(name, e),
        }
        done += 1;
    }
    outcome(name, worst, 1e-7)
}

fn norm_laws() -> CheckOutcome {
    let name = "norm laws (hermitian, uniform decay, balanced PT eigenstate)";
    let run = || -> crate::Result<f64> {
        let cfg = IntegratorConfig::new(1e-3, 10.0, 10)?;
        let h = ComplexMatrix2::new(
            Complex::new(0.4, 0.0),
            Complex::new(0.3, -0.8),
            Complex::new(0.3, 0.8),
            Complex::new(-0.9, 0.0),
        );
        let psi0 = ComplexVector2::new(Complex::new(0.6, 0.0), Complex::new(0.0, 0.8));
        let mut worst = norm_series(&integrate_schrodinger(&h, &psi0, &cfg)?)?.max_relative_drift();

        let s = 0.1;
        let decay = h - ComplexMatrix2::identity().scale(Complex::new(0.0, s));
        let ns = norm_series(&integrate_schrodinger(&decay, &psi0, &cfg)?)?;
        for (t, n) in ns.times.iter().zip(&ns.norms_sq) {
            worst = worst.max((n / ns.norms_sq[0] / (-2.0 * s * t).exp() - 1.0).abs() * 1e-1);
        }

        let dimer = build_pt_dimer(PTDimerParams::new(0.0, 1.0, 0.6)?).operator();
        let v = eig2(&dimer)?.eigenvector1;
        let ns = norm_series(&integrate_schrodinger(&dimer, &v, &cfg)?)?;
        worst = worst.max(ns.max_relative_drift() * 1e-3);
        Ok(worst)
    };
    match run() {
        Ok(w) => outcome(name, w, 1e-9),
        Err(e) => failed(name, e),
    }
}

fn pt_spectrum() -> CheckOutcome {
    let name = "PT dimer spectrum and realization over gamma in [0, 2]";
    let pt = pt_operator();
    for gamma in gamma_grid(2.0, 81) {
        let p = match PTDimerParams::with_gamma(0.0, 1.0, gamma) {
            Ok(p) => p,
            Err(e) => return failed(name, e),
        };
        let h = build_pt_dimer(p);
        let (eig, sym) = match (eig2(&h.operator()), pt_symmetry_check(&h)) {
            (Ok(e), Ok(s)) => (e, s),
            (Err(e), _) | (_, Err(e)) => return failed(name, e),
        };
        let ok = if p.is_exceptional() {
            sym.realization == Some(PtRealization::Exceptional)
        } else if gamma < 1.0 {
            sym.realization == Some(PtRealization::Unbroken)
                && eig.eigenvalue1.im.abs() < 1e-12
                && eig.eigenvalue2.im.abs() < 1e-12
        } else {
            sym.realization == Some(PtRealization::Broken)
                && (eig.eigenvalue2 - eig.eigenvalue1.conj()).norm() < 1e-10
                && eig.eigenvector2.phase_distance(&pt.apply(&eig.eigenvector1)) < 1e-8
        };
        if !ok || !sym.symmetric {
            return CheckOutcome {
                name,
                passed: false,
                detail: format!("failed at gamma = {gamma}"),
            };
        }
    }
    CheckOutcome {
        name,
        passed: true,
        detail: "81 grid points".into(),
    }
}

fn precession() -> CheckOutcome {
    let name = "gyrator precession (Foucault angle, PT holonomy gamma-independence)";
    let run = || -> crate::Result<(f64, f64)> {
        let cfg = IntegratorConfig::new(1e-3, 10.0, 1)?;
        let z0 = Vector2::new(1.0, 0.0);
        let fou = foucault_system(&CircuitParams::from_rates(20.0, 0.4, None)?)?;
        let p = extract_precession(&integrate_second_order(&fou, &z0, &Vector2::zeros(), &cfg)?)?;
        let angle_err = (p.angle_at(10.0) - 2.0).abs() / 2.0;

        let (g, omega_loop) = (0.4, 0.1);
        let mut holonomies = Vec::new();
        for gamma in [0.0, 0.3, 0.6] {
            let sys = if gamma == 0.0 {
                foucault_system(&CircuitParams::from_rates(20.0, g, None)?)?
            } else {
                pt_circuit_system(&CircuitParams::from_rates(20.0, g, Some(gamma * g))?)?
            };
            let traj = integrate_second_order(&sys, &z0, &Vector2::zeros(), &cfg)?;
            let rate = extract_precession(&traj)?.rate;
            holonomies.push(rate * pt_modified_period(g, gamma, omega_loop)?);
        }
        let mean = holonomies.iter().sum::<f64>() / 3.0;
        let spread = holonomies.iter().map(|h| (h / mean - 1.0).abs()).fold(0.0, f64::max);
        Ok((angle_err, spread))
    };
    match run() {
        Ok((a, s)) => CheckOutcome {
            name,
            passed: a < 0.01 && s < 0.02,
            detail: format!("angle rel. error {a:.2e}, holonomy spread {s:.2e}"),
        },
        Err(e) => failed(name, e),
    }
}

fn pt_phase_constant() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for gamma in [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        match pt_geometric_phase(1.0, gamma, 0.1) {
            Ok(v) => worst = worst.max((v - 10.0 * PI).abs()),
            Err(e) => return failed("PT geometric phase", e),
        }
    }
    outcome("PT geometric phase equals pi g / Omega", worst, 1e-12)
}

fn sweep_closure() -> CheckOutcome {
    let name = "gamma sweep: conjugation closure, zero trace, EP bracketing";
    let base = match CircuitParams::from_rates(1.0, 0.2, None) {
        Ok(b) => b,
        Err(e) => return failed(name, e),
    };
    let pts = match gamma_sweep(&base, &gamma_grid(2.0, 81)) {
        Ok(p) => p,
        Err(e) => return failed(name, e),
    };
    let mut worst: f64 = 0.0;
    for p in &pts {
        let sum: Complex = p.mode_values.iter().sum();
        worst = worst.max(sum.norm());
        for z in &p.mode_values {
            let partner = p.mode_values.iter().map(|w| (w - z.conj()).norm()).fold(f64::MAX, f64::min);
            worst = worst.max(partner);
        }
        let expected = if p.gamma < 1.0 {
            EpClass::BelowEP
        } else if p.gamma == 1.0 {
            EpClass::AtEP
        } else {
            EpClass::AboveEP
        };
        if p.classification != expected {
            return CheckOutcome {
                name,
                passed: false,
                detail: format!("classification {:?} at gamma {}", p.classification, p.gamma),
            };
        }
    }
    outcome(name, worst, 1e-10)
}

fn integrator_order() -> CheckOutcome {
    let name = "RK4 convergence order";
    let h = ComplexMatrix2::diag(Complex::new(1.0, 0.0), Complex::new(2.0, 0.0));
    let psi0 = ComplexVector2::from_real(1.0, 1.0).normalized();
    let err = |steps: usize| -> crate::Result<f64> {
        let cfg = IntegratorConfig::new(2.0 * PI / steps as f64, 2.0 * PI, steps)?;
        let t = integrate_schrodinger(&h, &psi0, &cfg)?;
        let end = crate::evolution::state_at(&t, t.len() - 1)?;
        let exact = ComplexVector2::new(
            psi0.c1 * Complex::new(0.0, -2.0 * PI).exp(),
            psi0.c2 * Complex::new(0.0, -4.0 * PI).exp(),
        );
        Ok((end - exact).norm())
    };
    match (err(200), err(400)) {
        (Ok(a), Ok(b)) => {
            let order = (a / b).log2();
            CheckOutcome {
                name,
                passed: (order - 4.0).abs() < 0.2,
                detail: format!("observed order {order:.3}"),
            }
        }
        (Err(e), _) | (_, Err(e)) => failed(name, e),
    }
}

pub fn run_checks() -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    vec![
        phase_identities(&mut rng),
        equivalence(&mut rng),
        norm_laws(),
        pt_spectrum(),
        pt_phase_constant(),
        precession(),
        sweep_closure(),
        integrator_order(),
    ]
}
