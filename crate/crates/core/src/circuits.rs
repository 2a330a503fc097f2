//! Gyrator-coupled LC resonators.
//!
//! Node voltages obey `V̈ + C V̇ + ω₀² V = 0` with `ω₀² = 1/(LC)`. The lossless
//! pair has `C = [[0, −a], [a, 0]]`, `a = G_g/C`; the gain/loss pair (`+R` on
//! one node, `−R` on the other) has `C = [[−s, −g], [g, s]]` with `g = G_g/C`
//! and `s = 1/(RC)`. Its spectrum goes through an exceptional point at
//! `γ = s/g = 1`.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::decomplexify::{SecondOrderSystem, Variable};
use crate::error::{Error, Result};
use crate::linalg::{eig2, Complex, ComplexMatrix2};

/// Real parts below `BELOW_EP_TOL · ω₀` count as zero.
pub const BELOW_EP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Henry.
    pub inductance: f64,
    /// Farad.
    pub capacitance: f64,
    /// Siemens.
    pub gyrator_conductance: f64,
    /// Ohm; `None` for a lossless circuit. The partner node carries `−R`.
    pub resistance: Option<f64>,
}

impl CircuitParams {
    pub fn new(inductance: f64, capacitance: f64, gyrator_conductance: f64, resistance: Option<f64>) -> Result<Self> {
        let p = Self {
            inductance,
            capacitance,
            gyrator_conductance,
            resistance,
        };
        p.validate()?;
        Ok(p)
    }

    /// Circuit with `C = 1 F` realizing the normalized rates `ω₀`, coupling
    /// and (optional) gain/loss rate.
    pub fn from_rates(omega0: f64, coupling: f64, rate: Option<f64>) -> Result<Self> {
        let resistance = match rate {
            Some(s) if s > 0.0 => Some(1.0 / s),
            Some(0.0) => None,
            Some(s) => return Err(Error::InvalidParameter(format!("rate must be >= 0, got {s}"))),
            None => None,
        };
        Self::new(1.0 / (omega0 * omega0), 1.0, coupling, resistance)
    }

    /// Foucault analog at latitude `latitude` (radians) for a loop
    /// (Earth-rotation) frequency `omega_loop`: `a = 2Ω sin λ`.
    pub fn foucault_latitude(omega0: f64, omega_loop: f64, latitude: f64) -> Result<Self> {
        Self::from_rates(omega0, 2.0 * omega_loop * latitude.sin(), None)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, name: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")))
            }
        };
        positive(self.inductance, "inductance")?;
        positive(self.capacitance, "capacitance")?;
        if !(self.gyrator_conductance.is_finite() && self.gyrator_conductance >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gyrator conductance must be >= 0, got {}",
                self.gyrator_conductance
            )));
        }
        if let Some(r) = self.resistance {
            positive(r, "resistance")?;
        }
        Ok(())
    }

    pub fn omega0_sq(&self) -> f64 {
        1.0 / (self.inductance * self.capacitance)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0_sq().sqrt()
    }

    /// `G_g / C`.
    pub fn coupling(&self) -> f64 {
        self.gyrator_conductance / self.capacitance
    }

    /// `1/(RC)`, zero when lossless.
    pub fn rate(&self) -> f64 {
        self.resistance.map_or(0.0, |r| 1.0 / (r * self.capacitance))
    }

    /// `γ = s/g`; infinite for gain/loss without coupling.
    pub fn gamma(&self) -> f64 {
        let (s, g) = (self.rate(), self.coupling());
        if s == 0.0 {
            0.0
        } else if g == 0.0 {
            f64::INFINITY
        } else {
            s / g
        }
    }
}

fn circuit_system(p: &CircuitParams) -> SecondOrderSystem {
    let (g, s) = (p.coupling(), p.rate());
    SecondOrderSystem {
        damping: Matrix2::new(s, g, -g, -s),
        stiffness: Matrix2::identity() * p.omega0_sq(),
        variable: Variable::X,
    }
}

/// Lossless gyrator pair: `D = [[0, a], [−a, 0]]`, `K = ω₀²·1`.
pub fn foucault_system(p: &CircuitParams) -> Result<SecondOrderSystem> {
    p.validate()?;
    if p.resistance.is_some() {
        return Err(Error::UnexpectedResistor);
    }
    Ok(circuit_system(p))
}

/// Balanced gain/loss pair: `D = [[s, g], [−g, −s]]`, `K = ω₀²·1`.
pub fn pt_circuit_system(p: &CircuitParams) -> Result<SecondOrderSystem> {
    p.validate()?;
    if p.resistance.is_none() {
        return Err(Error::InvalidParameter("gain/loss circuit needs a resistance".into()));
    }
    Ok(circuit_system(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EpClass {
    BelowEP,
    AtEP,
    AboveEP,
}

impl EpClass {
    pub fn label(self) -> &'static str {
        match self {
            EpClass::BelowEP => "BelowEP",
            EpClass::AtEP => "AtEP",
            EpClass::AboveEP => "AboveEP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub gamma: f64,
    /// Eigenvalues of the 4×4 first-order system, sorted by descending
    /// imaginary part, then descending real part.
    pub mode_values: [Complex; 4],
    pub classification: EpClass,
}

impl SpectrumPoint {
    /// Mode values divided by `ω₀`.
    pub fn normalized(&self, omega0: f64) -> [Complex; 4] {
        self.mode_values.map(|z| z / omega0)
    }
}

/// Imaginary parts equal to ~1e-9 of the spectral scale count as ties, so
/// that `±re` pairs sharing a frequency always come out in the same order.
fn sort_modes(modes: &mut [Complex; 4]) {
    let scale = modes.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
    let bucket = |z: &Complex| (z.im / (1e-9 * scale)).round() as i64;
    modes.sort_by(|a, b| bucket(b).cmp(&bucket(a)).then(b.re.total_cmp(&a.re)));
}

/// Eigenvalues of the companion matrix by a general dense solver.
///
/// Used when the stiffness is not a multiple of the identity, and as a
/// cross-check elsewhere. Accuracy near a defective point is only
/// `O(√ε)`.
pub fn companion_spectrum(sys: &SecondOrderSystem) -> [Complex; 4] {
    let ev = sys.companion().complex_eigenvalues();
    let mut modes = [ev[0], ev[1], ev[2], ev[3]];
    sort_modes(&mut modes);
    modes
}

/// Modes from the 2×2 reduction: with `K = ω²·1`, `μ` is a mode iff
/// `(μ² + ω²)/μ` is an eigenvalue `ζ` of `D`, i.e. `μ = (ζ ± √(ζ² − 4ω²))/2`.
fn reduced_spectrum(sys: &SecondOrderSystem) -> Result<([Complex; 4], bool)> {
    let d = &sys.damping;
    let eig = eig2(&ComplexMatrix2::from_real([[d[(0, 0)], d[(0, 1)]], [d[(1, 0)], d[(1, 1)]]]))?;
    let omega_sq = sys.stiffness[(0, 0)];
    let mut modes = [Complex::new(0.0, 0.0); 4];
    for (i, zeta) in eig.eigenvalues().iter().enumerate() {
        let root = (zeta * zeta - 4.0 * omega_sq).sqrt();
        modes[2 * i] = (zeta + root) * 0.5;
        modes[2 * i + 1] = (zeta - root) * 0.5;
    }
    sort_modes(&mut modes);
    Ok((modes, eig.defective))
}

fn is_scalar_stiffness(k: &Matrix2<f64>) -> bool {
    let tol = 1e-14 * k.norm().max(1.0);
    k[(0, 1)].abs() < tol && k[(1, 0)].abs() < tol && (k[(0, 0)] - k[(1, 1)]).abs() < tol
}

/// Modes and exceptional-point classification of any second-order system.
pub fn system_spectrum(sys: &SecondOrderSystem, gamma: f64) -> Result<SpectrumPoint> {
    let omega0 = (0.5 * sys.stiffness.trace()).abs().sqrt().max(f64::MIN_POSITIVE);
    let (modes, coalesced) = if is_scalar_stiffness(&sys.stiffness) {
        reduced_spectrum(sys)?
    } else {
        let modes = companion_spectrum(sys);
        let coalesced = modes
            .iter()
            .enumerate()
            .any(|(i, a)| modes[i + 1..].iter().any(|b| (a - b).norm() < 1e-7 * omega0));
        (modes, coalesced)
    };
    let classification = if coalesced {
        EpClass::AtEP
    } else if modes.iter().all(|z| z.re.abs() < BELOW_EP_TOL * omega0) {
        EpClass::BelowEP
    } else {
        EpClass::AboveEP
    };
    Ok(SpectrumPoint {
        gamma,
        mode_values: modes,
        classification,
    })
}

/// Modes of the circuit's 4-dimensional first-order system.
pub fn circuit_spectrum(p: &CircuitParams) -> Result<SpectrumPoint> {
    p.validate()?;
    system_spectrum(&circuit_system(p), p.gamma())
}

/// Spectrum along `s = γ·g` at fixed `ω₀` and `g` taken from `base`.
pub fn gamma_sweep(base: &CircuitParams, gamma_grid: &[f64]) -> Result<Vec<SpectrumPoint>> {
    base.validate()?;
    if gamma_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("gamma grid must be sorted ascending".into()));
    }
    if gamma_grid.iter().any(|&g| !(g >= 0.0)) {
        return Err(Error::InvalidParameter("gamma grid values must be >= 0".into()));
    }
    let g = base.coupling();
    if g <= 0.0 {
        return Err(Error::InvalidParameter("sweep needs a nonzero gyrator coupling".into()));
    }
    gamma_grid
        .iter()
        .map(|&gamma| {
            // Built from s = γ·g directly; going through R = 1/(sC) would
            // not round-trip exactly and could miss γ = 1 on the grid.
            let rate = gamma * g;
            let sys = SecondOrderSystem {
                damping: Matrix2::new(rate, g, -g, -rate),
                stiffness: Matrix2::identity() * base.omega0_sq(),
                variable: Variable::X,
            };
            system_spectrum(&sys, gamma)
        })
        .collect()
}

/// `points` evenly spaced values on `[0, gamma_max]`, computed as `k·max/(points − 1)` so the ends are exact.
pub fn gamma_grid(gamma_max: f64, points: usize) -> Vec<f64> {
    if points < 2 {
        return vec![0.0];
    }
    let n = (points - 1) as f64;
    (0..points).map(|k| k as f64 * gamma_max / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn foucault_parameter_map() {
        let p = CircuitParams::new(1.0, 1.0, 0.5, None).unwrap();
        assert_eq!(p.omega0_sq(), 1.0);
        assert_eq!(p.coupling(), 0.5);
        let sys = foucault_system(&p).unwrap();
        assert_eq!(sys.damping, Matrix2::new(0.0, 0.5, -0.5, 0.0));
        assert_eq!(sys.stiffness, Matrix2::identity());

        let free = foucault_system(&CircuitParams::new(1.0, 1.0, 0.0, None).unwrap()).unwrap();
        assert_eq!(free.damping, Matrix2::zeros());

        let lat = CircuitParams::foucault_latitude(1.0, 1.0, std::f64::consts::PI / 6.0).unwrap();
        assert!((lat.coupling() - 1.0).abs() < 1e-15);

        let lossy = CircuitParams::new(1.0, 1.0, 0.5, Some(2.0)).unwrap();
        assert!(matches!(foucault_system(&lossy), Err(Error::UnexpectedResistor)));
    }

    #[test]
    fn pt_parameter_map() {
        let p = CircuitParams::new(1.0, 1.0, 0.5, Some(2.0)).unwrap();
        assert_eq!(p.coupling(), 0.5);
        assert_eq!(p.rate(), 0.5);
        assert_eq!(p.gamma(), 1.0);
        let sys = pt_circuit_system(&p).unwrap();
        assert_eq!(sys.damping, Matrix2::new(0.5, 0.5, -0.5, -0.5));
        assert_eq!(circuit_spectrum(&p).unwrap().classification, EpClass::AtEP);

        // Lossless limit reduces to the Foucault system.
        let big_r = CircuitParams::new(1.0, 1.0, 0.5, Some(1e300)).unwrap();
        let sys = pt_circuit_system(&big_r).unwrap();
        let f = foucault_system(&CircuitParams::new(1.0, 1.0, 0.5, None).unwrap()).unwrap();
        assert!((sys.damping - f.damping).norm() < 1e-299);
    }

    #[test]
    fn coupling_block_eigenvalues() {
        let (g, s) = (1.0, 0.6);
        let coupling = ComplexMatrix2::from_real([[-s, -g], [g, s]]);
        let e = eig2(&coupling).unwrap();
        assert!((e.eigenvalue1 - c(0.0, 0.8)).norm() < 1e-15);
        assert!((e.eigenvalue2 - c(0.0, -0.8)).norm() < 1e-15);
    }

    #[test]
    fn hermitian_point_modes() {
        let p = CircuitParams::from_rates(1.0, 0.1, None).unwrap();
        let sp = circuit_spectrum(&p).unwrap();
        assert_eq!(sp.classification, EpClass::BelowEP);
        let w = (1.0f64 + 0.0025).sqrt();
        let expected = [c(0.0, w + 0.05), c(0.0, w - 0.05), c(0.0, -(w - 0.05)), c(0.0, -(w + 0.05))];
        for (m, e) in sp.mode_values.iter().zip(expected) {
            assert!((m - e).norm() < 1e-14, "{m} vs {e}");
        }
        assert!((sp.mode_values[0].im - sp.mode_values[1].im - 0.1).abs() < 1e-14);
    }

    #[test]
    fn above_ep_has_growing_mode() {
        let sp = circuit_spectrum(&CircuitParams::from_rates(1.0, 0.2, Some(0.3)).unwrap()).unwrap();
        assert_eq!(sp.classification, EpClass::AboveEP);
        let max_re = sp.mode_values.iter().map(|z| z.re).fold(f64::MIN, f64::max);
        let min_re = sp.mode_values.iter().map(|z| z.re).fold(f64::MAX, f64::min);
        assert!(max_re > 0.0 && (max_re + min_re).abs() < 1e-14);
    }

    #[test]
    fn reduction_agrees_with_companion() {
        for gamma in [0.0, 0.4, 0.95, 1.05, 1.7] {
            let sys = SecondOrderSystem {
                damping: Matrix2::new(gamma * 0.3, 0.3, -0.3, -gamma * 0.3),
                stiffness: Matrix2::identity() * 2.0,
                variable: Variable::X,
            };
            let (reduced, _) = reduced_spectrum(&sys).unwrap();
            let dense = companion_spectrum(&sys);
            for (a, b) in reduced.iter().zip(dense.iter()) {
                assert!((a - b).norm() < 1e-10, "gamma {gamma}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn non_scalar_stiffness_uses_companion() {
        let sys = SecondOrderSystem {
            damping: Matrix2::zeros(),
            stiffness: Matrix2::new(1.0, 0.0, 0.0, 4.0),
            variable: Variable::X,
        };
        let sp = system_spectrum(&sys, 0.0).unwrap();
        assert!((sp.mode_values[0] - c(0.0, 2.0)).norm() < 1e-12);
        assert!((sp.mode_values[1] - c(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(sp.classification, EpClass::BelowEP);
    }

    #[test]
    fn sweep_validation_and_grid() {
        let base = CircuitParams::from_rates(1.0, 0.2, None).unwrap();
        assert!(gamma_sweep(&base, &[0.5, 0.1]).is_err());
        assert!(gamma_sweep(&base, &[-0.1, 0.1]).is_err());
        let grid = gamma_grid(2.0, 81);
        assert_eq!(grid.len(), 81);
        assert_eq!(grid[40], 1.0);
        assert_eq!(grid[80], 2.0);
        let sweep = gamma_sweep(&base, &grid).unwrap();
        assert_eq!(sweep[40].classification, EpClass::AtEP);
        assert_eq!(sweep[39].classification, EpClass::BelowEP);
        assert_eq!(sweep[41].classification, EpClass::AboveEP);
    }
}
