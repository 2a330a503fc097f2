//! Total, dynamic and geometric phases for cyclic two-level evolution, the
//! classical Hannay angle, and the PT-dimer variants.
//!
//! Sign convention: a phase `φ` is the argument of the multiplier `e^{iφ}`
//! picked up by the state, so `Ψ(T) = e^{iφ_total} Ψ(0)` with
//! `φ_total = −λ₁T`. The gain/loss section of the source material writes the
//! same quantity as `e^{−iΦ}` with `Φ = +2πκ₁/(κ₁ − κ₂)`; here `φ = −Φ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{state_at, Trajectory};
use crate::linalg::{biorthogonal, eig2, Complex, ComplexMatrix2, ComplexVector2, HERMITIAN_TOL};
use crate::models::{EffectiveHamiltonian, HamiltonianKind, EXCEPTIONAL_TOL};

mod precession;

pub use precession::{extract_precession, Precession, SCALE_SEPARATION};

/// Minimum eigenvalue gap for a finite return period.
pub const GAP_TOL: f64 = 1e-12;

/// Initial state `cos(θ₀/2)|1⟩ + sin(θ₀/2) e^{iφ₀}|2⟩` in an eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochInitialState {
    pub theta0: f64,
    pub phi0: f64,
}

impl BlochInitialState {
    pub fn new(theta0: f64, phi0: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta0) {
            return Err(Error::InvalidParameter(format!("theta0 = {theta0} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&phi0) {
            return Err(Error::InvalidParameter(format!("phi0 = {phi0} outside [0, 2pi)")));
        }
        Ok(Self { theta0, phi0 })
    }

    pub fn coefficients(&self) -> [Complex; 2] {
        let half = 0.5 * self.theta0;
        [
            Complex::new(half.cos(), 0.0),
            Complex::from_polar(half.sin(), self.phi0),
        ]
    }

    pub fn state_in(&self, basis: &[ComplexVector2; 2]) -> ComplexVector2 {
        let [c1, c2] = self.coefficients();
        basis[0].scale(c1) + basis[1].scale(c2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseMethod {
    Analytic,
    TrajectoryExtraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    pub period: f64,
    pub total: f64,
    pub dynamic: f64,
    pub geometric: f64,
    pub hannay: f64,
    pub method: PhaseMethod,
}

impl PhaseReport {
    pub fn analytic(lambda1: f64, lambda2: f64, init: &BlochInitialState) -> Result<Self> {
        let total = total_phase(lambda1, lambda2)?;
        let dynamic = dynamic_phase(lambda1, lambda2, init)?;
        Ok(Self {
            period: return_period(lambda1, lambda2)?,
            total,
            dynamic,
            geometric: berry_phase(init),
            hannay: hannay_angle(init.theta0),
            method: PhaseMethod::Analytic,
        })
    }
}

fn gap(lambda1: f64, lambda2: f64) -> Result<f64> {
    let gap = lambda1 - lambda2;
    if gap.abs() < GAP_TOL {
        return Err(Error::DegenerateSpectrum { gap: gap.abs() });
    }
    Ok(gap)
}

/// `T = 2π/(λ₁ − λ₂)`.
pub fn return_period(lambda1: f64, lambda2: f64) -> Result<f64> {
    Ok(2.0 * PI / gap(lambda1, lambda2)?)
}

/// `φ_total = −λ₁T = −2πλ₁/(λ₁ − λ₂)`.
pub fn total_phase(lambda1: f64, lambda2: f64) -> Result<f64> {
    Ok(-2.0 * PI * lambda1 / gap(lambda1, lambda2)?)
}

/// `φ_dyn = −2πλ₁/(λ₁ − λ₂) + 2π sin²(θ₀/2)`.
pub fn dynamic_phase(lambda1: f64, lambda2: f64, init: &BlochInitialState) -> Result<f64> {
    let s = (0.5 * init.theta0).sin();
    Ok(total_phase(lambda1, lambda2)? + 2.0 * PI * s * s)
}

/// `−2π sin²(θ₀/2) = π(cos θ₀ − 1)`, independent of the spectrum.
pub fn berry_phase(init: &BlochInitialState) -> f64 {
    let s = (0.5 * init.theta0).sin();
    -2.0 * PI * s * s
}

/// Classical Hannay angle `2π(1 − cos θ)` at colatitude `θ`.
pub fn hannay_angle(theta: f64) -> f64 {
    2.0 * PI * (1.0 - theta.cos())
}

fn check_unbroken_dimer(h: &EffectiveHamiltonian) -> Result<()> {
    if h.kind != HamiltonianKind::PTDimer {
        return Ok(());
    }
    let g = h.m.h21.im;
    let s = h.gamma.h22.re;
    let gamma = s / g;
    if (gamma - 1.0).abs() < EXCEPTIONAL_TOL {
        return Err(Error::ExceptionalPoint);
    }
    if gamma > 1.0 {
        return Err(Error::BrokenPhase { gamma });
    }
    Ok(())
}

/// Quadrature intervals for the biorthogonal dynamic phase integral.
const QUADRATURE_INTERVALS: usize = 2000;

/// `−∫₀ᵀ ⟨Ψ̃|H|Ψ⟩/⟨Ψ̃|Ψ⟩ dt` with `|Ψ̃⟩` evolved in the left (H†) basis.
///
/// The integrand is evaluated from the explicit states at each quadrature
/// node (composite Simpson), not from its closed form.
pub fn biorthogonal_dynamic_phase(h: &EffectiveHamiltonian, init: &BlochInitialState) -> Result<f64> {
    check_unbroken_dimer(h)?;
    let op = h.operator();
    let basis = biorthogonal(&op)?;
    let [k1, k2] = basis.eigenvalues;
    if k1.im.abs() > 1e-9 || k2.im.abs() > 1e-9 {
        return Err(Error::BrokenPhase { gamma: f64::NAN });
    }
    let period = return_period(k1.re, k2.re)?;
    let coeffs = init.coefficients();

    let integrand = |t: f64| -> f64 {
        let mut psi = ComplexVector2::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0));
        let mut dual = psi;
        for (n, (&kappa, &c)) in basis.eigenvalues.iter().zip(&coeffs).enumerate() {
            psi = psi + basis.right[n].scale(c * (Complex::new(0.0, -t) * kappa).exp());
            dual = dual + basis.left[n].scale(c * (Complex::new(0.0, -t) * kappa.conj()).exp());
        }
        (dual.inner(&op.apply(&psi)) / dual.inner(&psi)).re
    };

    Ok(-simpson(integrand, 0.0, period, QUADRATURE_INTERVALS))
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

fn unbroken_root(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
    }
    if gamma >= 1.0 {
        return Err(Error::BrokenPhase { gamma });
    }
    Ok((1.0 - gamma * gamma).sqrt())
}

/// Return time of the gain/loss circuit, `T̃ = 2π/(Ω√(1 − γ²))`.
///
/// `g` only enters through `γ = s/g`; it is kept in the signature to mirror
/// [`pt_geometric_phase`].
pub fn pt_modified_period(_g: f64, gamma: f64, omega_loop: f64) -> Result<f64> {
    if !(omega_loop > 0.0) {
        return Err(Error::InvalidParameter(format!("loop frequency must be > 0, got {omega_loop}")));
    }
    Ok(2.0 * PI / (omega_loop * unbroken_root(gamma)?))
}

/// `ã T̃ / 2` with `ã = g√(1 − γ²)`; algebraically `πg/Ω` for every `γ < 1`.
pub fn pt_geometric_phase(g: f64, gamma: f64, omega_loop: f64) -> Result<f64> {
    let a_eff = g * unbroken_root(gamma)?;
    Ok(0.5 * a_eff * pt_modified_period(g, gamma, omega_loop)?)
}

fn unwrap_step(prev: f64, next: f64) -> f64 {
    let mut d = next - prev;
    d -= 2.0 * PI * (d / (2.0 * PI)).round();
    prev + d
}

/// Phases measured on a hermitian Schrödinger trajectory.
///
/// The run must start from `init` expressed in the eigenbasis of `h` and have
/// a sample at the return period `T`. The total phase is the continuously
/// tracked phase of the `|1⟩` amplitude (of `|2⟩` when `θ₀ = π`), the dynamic
/// phase is `−∫⟨Ψ|H|Ψ⟩/⟨Ψ|Ψ⟩ dt` by quadrature over the samples, and the
/// Hannay angle is reported through the factor `−2`.
pub fn extract_phases(t: &Trajectory, h: &ComplexMatrix2) -> Result<PhaseReport> {
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::NotHermitian);
    }
    let eig = eig2(h)?;
    let (l1, l2) = (eig.eigenvalue1.re, eig.eigenvalue2.re);
    let period = return_period(l1, l2)?;
    let spacing = t.times.get(1).copied().unwrap_or(0.0) - t.times[0];
    let end = t
        .times
        .iter()
        .position(|&time| (time - period).abs() <= 1e-9 * period.max(1.0))
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "trajectory has no sample at the return period {period} (spacing {spacing})"
            ))
        })?;

    let states: Vec<ComplexVector2> = (0..=end).map(|k| state_at(t, k)).collect::<Result<_>>()?;
    let [v1, v2] = eig.eigenvectors();
    let amp1 = states[0].inner(&v1).norm();
    let (probe, offset) = if amp1 > 1e-8 { (v1, 0.0) } else { (v2, -2.0 * PI) };

    let mut phase = probe.inner(&states[0]).arg();
    let start = phase;
    for s in &states[1..] {
        phase = unwrap_step(phase, probe.inner(s).arg());
    }
    let total = phase - start + offset;

    let energies: Vec<f64> = states
        .iter()
        .map(|s| (s.inner(&h.apply(s)) / s.norm_sqr()).re)
        .collect();
    let dynamic = -sampled_integral(&energies, spacing);
    let geometric = total - dynamic;
    Ok(PhaseReport {
        period,
        total,
        dynamic,
        geometric,
        hannay: -2.0 * geometric,
        method: PhaseMethod::TrajectoryExtraction,
    })
}

/// Simpson on uniformly spaced samples; trapezoid on the last interval when
/// the interval count is odd.
fn sampled_integral(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    if n == 0 {
        return 0.0;
    }
    let even = n - n % 2;
    let mut sum = 0.0;
    if even > 0 {
        sum += values[0] + values[even];
        for (k, v) in values.iter().enumerate().take(even).skip(1) {
            sum += if k % 2 == 1 { 4.0 } else { 2.0 } * v;
        }
        sum *= h / 3.0;
    }
    if n % 2 == 1 {
        sum += 0.5 * h * (values[n - 1] + values[n]);
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{integrate_schrodinger, IntegratorConfig};
    use crate::models::{build_pt_dimer, PTDimerParams};

    fn bloch(theta: f64) -> BlochInitialState {
        BlochInitialState::new(theta, 0.0).unwrap()
    }

    #[test]
    fn return_period_examples() {
        assert!((return_period(1.5, 0.5).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((return_period(2.0, 0.0).unwrap() - PI).abs() < 1e-15);
        assert!(matches!(return_period(1.0, 1.0), Err(Error::DegenerateSpectrum { .. })));
    }

    #[test]
    fn total_phase_examples() {
        assert!((total_phase(1.5, 0.5).unwrap() + 3.0 * PI).abs() < 1e-14);
        assert_eq!(total_phase(0.0, -1.0).unwrap(), 0.0);
        assert!((total_phase(1.0, -1.0).unwrap() + PI).abs() < 1e-15);
    }

    #[test]
    fn dynamic_phase_examples() {
        assert!((dynamic_phase(1.5, 0.5, &bloch(PI / 2.0)).unwrap() + 2.0 * PI).abs() < 1e-14);
        assert_eq!(
            dynamic_phase(1.5, 0.5, &bloch(0.0)).unwrap(),
            total_phase(1.5, 0.5).unwrap()
        );
        assert!((dynamic_phase(1.0, -1.0, &bloch(PI)).unwrap() - PI).abs() < 1e-14);
    }

    #[test]
    fn berry_and_hannay_examples() {
        assert_eq!(berry_phase(&bloch(0.0)), 0.0);
        assert!((berry_phase(&bloch(PI / 2.0)) + PI).abs() < 1e-15);
        assert!((berry_phase(&bloch(PI)) + 2.0 * PI).abs() < 1e-15);
        assert_eq!(hannay_angle(0.0), 0.0);
        assert!((hannay_angle(PI / 2.0) - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn bloch_state_bounds() {
        assert!(BlochInitialState::new(-0.1, 0.0).is_err());
        assert!(BlochInitialState::new(PI + 1e-9, 0.0).is_err());
        assert!(BlochInitialState::new(0.5, 2.0 * PI).is_err());
        assert!(BlochInitialState::new(PI, 0.0).is_ok());
    }

    #[test]
    fn analytic_report_is_consistent() {
        let r = PhaseReport::analytic(0.7, -0.4, &bloch(1.1)).unwrap();
        assert!((r.total - r.dynamic - r.geometric).abs() < 1e-12);
        assert!((r.hannay + 2.0 * r.geometric).abs() < 1e-12);
        assert_eq!(r.method, PhaseMethod::Analytic);
    }

    #[test]
    fn biorthogonal_phase_hermitian_limit() {
        let h = build_pt_dimer(PTDimerParams::new(0.2, 1.0, 0.0).unwrap());
        let init = BlochInitialState::new(1.0, 0.4).unwrap();
        let got = biorthogonal_dynamic_phase(&h, &init).unwrap();
        let want = dynamic_phase(1.2, -0.8, &init).unwrap();
        assert!((got - want).abs() < 1e-10);
    }

    #[test]
    fn biorthogonal_phase_unbroken_matches_hermitian_formula() {
        let h = build_pt_dimer(PTDimerParams::new(0.0, 1.0, 0.5).unwrap());
        let init = bloch(PI / 2.0);
        let k = 0.75_f64.sqrt();
        let got = biorthogonal_dynamic_phase(&h, &init).unwrap();
        assert!((got - dynamic_phase(k, -k, &init).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn biorthogonal_phase_errors() {
        let ep = build_pt_dimer(PTDimerParams::new(0.0, 1.0, 1.0).unwrap());
        assert!(matches!(
            biorthogonal_dynamic_phase(&ep, &bloch(0.3)),
            Err(Error::ExceptionalPoint)
        ));
        let broken = build_pt_dimer(PTDimerParams::new(0.0, 1.0, 1.4).unwrap());
        assert!(matches!(
            biorthogonal_dynamic_phase(&broken, &bloch(0.3)),
            Err(Error::BrokenPhase { .. })
        ));
    }

    #[test]
    fn pt_period_and_phase() {
        assert!((pt_modified_period(1.0, 0.0, 1.0).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert!((pt_modified_period(1.0, 0.6, 1.0).unwrap() - 2.0 * PI / 0.8).abs() < 1e-14);
        assert!(matches!(pt_modified_period(1.0, 1.0, 1.0), Err(Error::BrokenPhase { .. })));
        let mut last = 0.0;
        for gamma in [0.9, 0.99, 0.999, 0.9999] {
            let t = pt_modified_period(1.0, gamma, 1.0).unwrap();
            assert!(t > last);
            last = t;
        }
        assert!((pt_geometric_phase(1.0, 0.5, 0.1).unwrap() - 10.0 * PI).abs() < 1e-12);
        assert_eq!(pt_geometric_phase(0.0, 0.5, 0.1).unwrap(), 0.0);
        assert!(
            (pt_geometric_phase(1.0, 0.0, 0.3).unwrap() - pt_geometric_phase(1.0, 0.9, 0.3).unwrap()).abs()
                < 1e-12
        );
    }

    #[test]
    fn trajectory_extraction_matches_closed_form() {
        let h = crate::models::build_hermitian(crate::models::HermitianEqualDiagonal {
            h: 0.5,
            f: 0.6,
            g: 0.8,
        })
        .operator();
        let eig = eig2(&h).unwrap();
        let (l1, l2) = (eig.eigenvalue1.re, eig.eigenvalue2.re);
        let period = return_period(l1, l2).unwrap();
        for theta in [0.0, 0.7, PI / 2.0, 2.5, PI] {
            let init = BlochInitialState::new(theta, 1.3).unwrap();
            let psi0 = init.state_in(&eig.eigenvectors());
            let cfg = IntegratorConfig::new(period / 4000.0, period, 4).unwrap();
            let t = integrate_schrodinger(&h, &psi0, &cfg).unwrap();
            let got = extract_phases(&t, &h).unwrap();
            let want = PhaseReport::analytic(l1, l2, &init).unwrap();
            assert!((got.total - want.total).abs() < 1e-8, "theta {theta}");
            assert!((got.dynamic - want.dynamic).abs() < 1e-8, "theta {theta}");
            assert!((got.hannay - want.hannay).abs() < 1e-7, "theta {theta}");
        }
    }

    #[test]
    fn sampled_integral_handles_odd_counts() {
        let xs: Vec<f64> = (0..=5).map(|k| (k as f64 * 0.1).powi(2)).collect();
        // Simpson is exact on the first four intervals; the trapezoid adds h³/6.
        let err = sampled_integral(&xs, 0.1) - 0.5f64.powi(3) / 3.0;
        assert!((err - 0.1f64.powi(3) / 6.0).abs() < 1e-15);
        let xs: Vec<f64> = (0..=4).map(|k| (k as f64 * 0.25).powi(2)).collect();
        assert!((sampled_integral(&xs, 0.25) - 1.0 / 3.0).abs() < 1e-15);
    }
}
