//! Slow precession of gyrator-coupled oscillators, measured from a trajectory.
//!
//! For `z̈ + C ż + ω² z = 0` with a coupling `C` whose eigenvalues are `±iã`,
//! project onto a left eigenvector `w` of `C` (`wᵀC = iã wᵀ`). The complex
//! envelope `u = wᵀz` obeys `ü + iã u̇ + ω² u = 0`, whose solutions are
//!
//! ```text
//! u(t) = e^{−iãt/2} (A e^{iω't} + B e^{−iω't}),   ω' = √(ω² + ã²/4)
//! ```
//!
//! so the oscillation pattern turns by `ã t / 2` on top of the fast carrier.
//! For the lossless Foucault circuit `w = (1, i)` and `u = z₁ + i z₂`.
//!
//! The reported rate is positive in the sense of the `e^{−iãt/2}` factor,
//! i.e. the (z₁, z₂) pattern turns clockwise for positive gyrator coupling.

use std::f64::consts::PI;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::evolution::{Representation, Trajectory};
use crate::linalg::{eig2, Complex, ComplexMatrix2};

/// Minimum carrier-to-coupling ratio `ω/ã`.
pub const SCALE_SEPARATION: f64 = 20.0;

/// Sidebands weaker than this fraction of the dominant one are ignored.
const SIDEBAND_FLOOR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Precession {
    /// Slow turning rate of the oscillation pattern (rad per time unit).
    pub rate: f64,
    /// Carrier frequency used for demodulation.
    pub carrier: f64,
    /// Effective coupling `ã` implied by `rate`.
    pub coupling: f64,
    /// Measured precession angle (relative to the first window) over time.
    pub samples: Vec<(f64, f64)>,
}

impl Precession {
    /// Accumulated precession angle at time `t` from the fitted rate.
    pub fn angle_at(&self, t: f64) -> f64 {
        self.rate * t
    }
}

struct Envelope {
    projector: [Complex; 2],
    omega: f64,
}

fn envelope(sys_damping: &Matrix2<f64>, sys_stiffness: &Matrix2<f64>) -> Result<Envelope> {
    let omega_sq = 0.5 * sys_stiffness.trace();
    if !(omega_sq > 0.0) {
        return Err(Error::InvalidParameter("stiffness must be positive".into()));
    }
    let omega = omega_sq.sqrt();
    let coupling = -sys_damping;
    if coupling.norm() < 1e-14 * omega {
        return Ok(Envelope {
            projector: [Complex::new(1.0, 0.0), Complex::new(0.0, 1.0)],
            omega,
        });
    }
    let eig = eig2(&ComplexMatrix2::from_real([
        [coupling[(0, 0)], coupling[(1, 0)]],
        [coupling[(0, 1)], coupling[(1, 1)]],
    ]))?;
    // Eigenvalue with the largest imaginary part is +iã.
    let (zeta, w) = if eig.eigenvalue1.im >= eig.eigenvalue2.im {
        (eig.eigenvalue1, eig.eigenvector1)
    } else {
        (eig.eigenvalue2, eig.eigenvector2)
    };
    if eig.degenerate || zeta.im <= 0.0 || zeta.re.abs() > 1e-9 * zeta.norm() {
        let g = 0.5 * (coupling[(1, 0)] - coupling[(0, 1)]);
        let s = 0.5 * (coupling[(1, 1)] - coupling[(0, 0)]);
        return Err(Error::BrokenPhase { gamma: s / g });
    }
    let a_eff = zeta.im;
    let ratio = omega / a_eff;
    if ratio < SCALE_SEPARATION {
        return Err(Error::ScaleSeparationViolated { ratio });
    }
    let norm = w.c1;
    Ok(Envelope {
        projector: [w.c1 / norm, w.c2 / norm],
        omega,
    })
}

/// Carrier frequency from zero crossings of a real signal.
fn zero_crossing_frequency(times: &[f64], signal: &[f64]) -> Option<f64> {
    let mut crossings = Vec::new();
    for k in 1..signal.len() {
        let (a, b) = (signal[k - 1], signal[k]);
        if (a < 0.0 && b >= 0.0) || (a >= 0.0 && b < 0.0) {
            let frac = a / (a - b);
            crossings.push(times[k - 1] + frac * (times[k] - times[k - 1]));
        }
    }
    if crossings.len() < 3 {
        return None;
    }
    let span = crossings[crossings.len() - 1] - crossings[0];
    Some(PI * (crossings.len() - 1) as f64 / span)
}

/// Boxcar averages of `values` over `window` samples, at every `hop` samples.
fn boxcar(values: &[Complex], window: usize, hop: usize) -> Vec<(usize, Complex)> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(Complex::new(0.0, 0.0));
    for v in values {
        let last = *prefix.last().unwrap();
        prefix.push(last + v);
    }
    (0..=values.len() - window)
        .step_by(hop)
        .map(|start| {
            let mean = (prefix[start + window] - prefix[start]) / window as f64;
            (start + window / 2, mean)
        })
        .collect()
}

fn unwrapped_args(values: &[Complex]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev: Option<f64> = None;
    for v in values {
        let a = v.arg();
        let next = match prev {
            None => a,
            Some(p) => {
                let mut d = a - p;
                d -= 2.0 * PI * (d / (2.0 * PI)).round();
                p + d
            }
        };
        out.push(next);
        prev = Some(next);
    }
    out
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Measures the slow precession rate of a second-order trajectory.
///
/// The envelope is demodulated at `±ω̂` (carrier from a zero-crossing count),
/// low-passed over one carrier period, and the slow phase is fitted by least
/// squares. With both sidebands present their product cancels any carrier
/// estimation error. A single-sideband (circular) run instead measures its
/// full frequency `Λ` and recovers `ã = ω²/Λ − Λ` from the quadratic
/// `Λ² + ãΛ − ω² = 0`.
pub fn extract_precession(t: &Trajectory) -> Result<Precession> {
    if t.representation != Representation::SecondOrder2 {
        return Err(Error::WrongRepresentation {
            expected: "SecondOrder2",
            found: t.representation.name(),
        });
    }
    let sys = t
        .metadata
        .system
        .ok_or_else(|| Error::InvalidParameter("trajectory carries no system coefficients".into()))?;
    let env = envelope(&sys.damping, &sys.stiffness)?;
    let n = t.len();
    if n < 16 {
        return Err(Error::InvalidParameter("trajectory too short".into()));
    }
    let dt = t.times[1] - t.times[0];
    let [w1, w2] = env.projector;
    let u: Vec<Complex> = t.states.iter().map(|r| w1 * r[0] + w2 * r[1]).collect();

    let re: Vec<f64> = u.iter().map(|z| z.re).collect();
    let carrier = zero_crossing_frequency(&t.times, &re).unwrap_or(env.omega);
    if carrier * dt > PI / 4.0 {
        return Err(Error::InvalidParameter(format!(
            "trajectory undersampled: {:.2} rad per sample at the carrier",
            carrier * dt
        )));
    }
    let window = ((2.0 * PI / (carrier * dt)).round() as usize).max(1);
    if window * 2 > n {
        return Err(Error::InvalidParameter(
            "trajectory shorter than two carrier periods".into(),
        ));
    }
    let hop = (window / 4).max(1);

    let mix = |sign: f64| -> Vec<(usize, Complex)> {
        let mixed: Vec<Complex> = u
            .iter()
            .zip(&t.times)
            .map(|(z, &time)| z * Complex::from_polar(1.0, -sign * carrier * time))
            .collect();
        boxcar(&mixed, window, hop)
    };
    let upper = mix(1.0);
    let lower = mix(-1.0);
    let centers: Vec<f64> = upper.iter().map(|(k, _)| t.times[0] + *k as f64 * dt).collect();
    let mag = |v: &[(usize, Complex)]| v.iter().map(|(_, z)| z.norm()).sum::<f64>() / v.len() as f64;
    let (mu, ml) = (mag(&upper), mag(&lower));

    let (drift, phases) = if mu.min(ml) > SIDEBAND_FLOOR * mu.max(ml) {
        let product: Vec<Complex> = upper.iter().zip(&lower).map(|((_, a), (_, b))| a * b).collect();
        let ph: Vec<f64> = unwrapped_args(&product).into_iter().map(|p| 0.5 * p).collect();
        (slope(&centers, &ph), ph)
    } else {
        let full = unwrapped_args(&u);
        let lambda = slope(&t.times, &full);
        let omega_sq = env.omega * env.omega;
        let a_eff = omega_sq / lambda - lambda;
        let carrier_exact = (omega_sq + 0.25 * a_eff * a_eff).sqrt() * lambda.signum();
        let ph: Vec<f64> = centers
            .iter()
            .map(|&c| {
                let k = ((c - t.times[0]) / dt).round() as usize;
                full[k] - carrier_exact * t.times[k]
            })
            .collect();
        (-0.5 * a_eff, ph)
    };

    let rate = -drift;
    let p0 = phases[0];
    let samples = centers.iter().zip(&phases).map(|(&c, &p)| (c, -(p - p0))).collect();
    Ok(Precession {
        rate,
        carrier,
        coupling: 2.0 * rate,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomplexify::{SecondOrderSystem, Variable};
    use crate::evolution::{integrate_second_order, IntegratorConfig};
    use nalgebra::Vector2;

    fn gyrator(a: f64, omega: f64) -> SecondOrderSystem {
        SecondOrderSystem {
            damping: Matrix2::new(0.0, a, -a, 0.0),
            stiffness: Matrix2::identity() * omega * omega,
            variable: Variable::X,
        }
    }

    fn run(sys: &SecondOrderSystem, z0: Vector2<f64>, v0: Vector2<f64>, duration: f64) -> Trajectory {
        let cfg = IntegratorConfig::new(1e-3, duration, 1).unwrap();
        integrate_second_order(sys, &z0, &v0, &cfg).unwrap()
    }

    #[test]
    fn uncoupled_oscillators_do_not_precess() {
        let t = run(&gyrator(0.0, 20.0), Vector2::new(1.0, 0.0), Vector2::zeros(), 5.0);
        let p = extract_precession(&t).unwrap();
        assert!(p.rate.abs() < 1e-6, "{}", p.rate);
    }

    #[test]
    fn linear_start_precesses_at_half_coupling() {
        let t = run(&gyrator(0.4, 20.0), Vector2::new(1.0, 0.0), Vector2::zeros(), 10.0);
        let p = extract_precession(&t).unwrap();
        assert!((p.rate - 0.2).abs() < 0.002, "{}", p.rate);
        assert!((p.angle_at(10.0) - 2.0).abs() < 0.02);
    }

    #[test]
    fn circular_start_uses_single_sideband() {
        // u(0) = 1 on the + sideband only: u̇(0) = iΛ₊ with Λ₊ = −a/2 + ω'.
        let (a, omega): (f64, f64) = (0.5, 20.0);
        let lp = -0.5 * a + (omega * omega + 0.25 * a * a).sqrt();
        let t = run(&gyrator(a, omega), Vector2::new(1.0, 0.0), Vector2::new(0.0, lp), 6.0);
        let p = extract_precession(&t).unwrap();
        assert!((p.rate - 0.25).abs() < 1e-6, "{}", p.rate);
    }

    #[test]
    fn scale_separation_is_enforced() {
        let t = run(&gyrator(2.0, 20.0), Vector2::new(1.0, 0.0), Vector2::zeros(), 2.0);
        assert!(matches!(
            extract_precession(&t),
            Err(Error::ScaleSeparationViolated { .. })
        ));
    }

    #[test]
    fn broken_coupling_is_rejected() {
        let sys = SecondOrderSystem {
            damping: Matrix2::new(0.6, 0.4, -0.4, -0.6),
            stiffness: Matrix2::identity() * 400.0,
            variable: Variable::X,
        };
        let t = run(&sys, Vector2::new(1.0, 0.0), Vector2::zeros(), 1.0);
        assert!(matches!(extract_precession(&t), Err(Error::BrokenPhase { .. })));
    }
}
