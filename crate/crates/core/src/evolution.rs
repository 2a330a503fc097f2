//! Fixed-step propagation of the three equivalent representations.
//!
//! All integrators use the classical fourth-order Runge–Kutta scheme with a
//! constant step. Samples are recorded every `record_stride` steps at times
//! `k · stride · step`, so trajectories are exactly uniformly spaced.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use nalgebra::{SVector, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::decomplexify::{from_real4, RealSystem4, SecondOrderSystem};
use crate::error::{Error, Result};
use crate::linalg::{eig2, Complex, ComplexMatrix2, ComplexVector2};

/// Largest admissible `step · (spectral scale)`.
pub const MAX_STEP_SCALE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: f64,
    pub duration: f64,
    pub record_stride: usize,
}

impl IntegratorConfig {
    pub fn new(step: f64, duration: f64, record_stride: usize) -> Result<Self> {
        let cfg = Self {
            step,
            duration,
            record_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// At least 1000 steps per period of the fastest mode `omega_max`.
    pub fn with_default_step(omega_max: f64, duration: f64, record_stride: usize) -> Result<Self> {
        if !(omega_max > 0.0) {
            return Err(Error::InvalidConfig(format!("omega_max must be > 0, got {omega_max}")));
        }
        Self::new(2.0 * std::f64::consts::PI / (1000.0 * omega_max), duration, record_stride)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig(format!("step must be > 0, got {}", self.step)));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "duration must be > 0, got {}",
                self.duration
            )));
        }
        if self.step > self.duration {
            return Err(Error::InvalidConfig("step exceeds duration".into()));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig("record_stride must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of integration steps; ratios within 1e-9 of an integer round to it.
    pub fn step_count(&self) -> usize {
        let ratio = self.duration / self.step;
        let nearest = ratio.round();
        if (ratio - nearest).abs() < 1e-9 * ratio.max(1.0) {
            nearest as usize
        } else {
            ratio.floor() as usize
        }
    }

    pub fn sample_count(&self) -> usize {
        self.step_count() / self.record_stride + 1
    }

    pub fn sample_spacing(&self) -> f64 {
        self.step * self.record_stride as f64
    }

    fn guard(&self, scale: f64) -> Result<()> {
        let product = self.step * scale;
        if product > MAX_STEP_SCALE {
            return Err(Error::StepTooLarge {
                step: self.step,
                scale,
                product,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    /// Rows `[Re Ψ₁, Im Ψ₁, Re Ψ₂, Im Ψ₂]`.
    Complex2,
    /// Rows `[x₁, y₁, x₂, y₂]`.
    Real4,
    /// Rows `[z₁, z₂]`.
    SecondOrder2,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Complex2 => "Complex2",
            Representation::Real4 => "Real4",
            Representation::SecondOrder2 => "SecondOrder2",
        }
    }

    pub fn width(self) -> usize {
        match self {
            Representation::SecondOrder2 => 2,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Metadata {
    pub source: String,
    pub parameters: BTreeMap<String, f64>,
    pub step: f64,
    pub record_stride: usize,
    /// Coefficients of the propagated second-order system, when there is one.
    pub system: Option<SecondOrderSystem>,
}

impl Metadata {
    pub fn with_source(source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            ..Self::default()
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub representation: Representation,
    pub metadata: Metadata,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        let (step, stride, system) = (
            self.metadata.step,
            self.metadata.record_stride,
            self.metadata.system,
        );
        self.metadata = Metadata {
            step,
            record_stride: stride,
            system: metadata.system.or(system),
            ..metadata
        };
        self
    }

    /// Samples as complex two-vectors; only for `Complex2` and `Real4`.
    pub fn complex_states(&self) -> Result<Vec<ComplexVector2>> {
        if self.representation == Representation::SecondOrder2 {
            return Err(Error::WrongRepresentation {
                expected: "Complex2 or Real4",
                found: self.representation.name(),
            });
        }
        Ok(self
            .states
            .iter()
            .map(|r| ComplexVector2::new(Complex::new(r[0], r[1]), Complex::new(r[2], r[3])))
            .collect())
    }
}

trait Linear: Copy + Add<Output = Self> + Mul<f64, Output = Self> {}
impl<T: Copy + Add<Output = T> + Mul<f64, Output = T>> Linear for T {}

fn rk4_step<S: Linear>(y: S, h: f64, f: &impl Fn(S) -> S) -> S {
    let k1 = f(y);
    let k2 = f(y + k1 * (0.5 * h));
    let k3 = f(y + k2 * (0.5 * h));
    let k4 = f(y + k3 * h);
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

fn run<S: Linear>(
    y0: S,
    cfg: &IntegratorConfig,
    f: impl Fn(S) -> S,
    record: impl Fn(&S) -> Vec<f64>,
    representation: Representation,
) -> Trajectory {
    let n = cfg.step_count();
    let stride = cfg.record_stride;
    let mut times = Vec::with_capacity(cfg.sample_count());
    let mut states = Vec::with_capacity(cfg.sample_count());
    let mut y = y0;
    times.push(0.0);
    states.push(record(&y));
    for k in 1..=n {
        y = rk4_step(y, cfg.step, &f);
        if k % stride == 0 {
            times.push(k as f64 * cfg.step);
            states.push(record(&y));
        }
    }
    Trajectory {
        times,
        states,
        representation,
        metadata: Metadata {
            step: cfg.step,
            record_stride: stride,
            ..Metadata::default()
        },
    }
}

fn spectral_radius(h: &ComplexMatrix2) -> Result<f64> {
    let e = eig2(h)?;
    Ok(e.eigenvalue1.norm().max(e.eigenvalue2.norm()))
}

/// Propagates `Ψ̇ = −iHΨ` in complex arithmetic.
pub fn integrate_schrodinger(
    h: &ComplexMatrix2,
    psi0: &ComplexVector2,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !psi0.is_finite() {
        return Err(Error::NonFinite("initial state"));
    }
    cfg.guard(spectral_radius(h)?)?;
    let generator = h.scale(Complex::new(0.0, -1.0));
    Ok(run(
        *psi0,
        cfg,
        |v| generator.apply(&v),
        |v| vec![v.c1.re, v.c1.im, v.c2.re, v.c2.im],
        Representation::Complex2,
    ))
}

impl RealSystem4 {
    /// Recovers `H` from the block layout.
    pub fn to_complex(&self) -> ComplexMatrix2 {
        let e = &self.evo;
        let entry = |r: usize, c: usize| Complex::new(e[(2 * r, 2 * c + 1)], e[(2 * r, 2 * c)]);
        ComplexMatrix2::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }
}

pub fn integrate_real4(
    sys: &RealSystem4,
    state0: &Vector4<f64>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !state0.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("initial state"));
    }
    cfg.guard(spectral_radius(&sys.to_complex())?)?;
    let evo = sys.evo;
    Ok(run(
        *state0,
        cfg,
        |v: Vector4<f64>| evo * v,
        |v| v.iter().copied().collect(),
        Representation::Real4,
    ))
}

/// Integrates `z̈ = D ż − K z` as a first-order system in `(z, ż)`.
///
/// Only `z` is recorded; the coefficients go into the trajectory metadata.
pub fn integrate_second_order(
    sys: &SecondOrderSystem,
    z0: &Vector2<f64>,
    zdot0: &Vector2<f64>,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(z0.iter().chain(zdot0.iter()).all(|x| x.is_finite())) {
        return Err(Error::NonFinite("initial state"));
    }
    let scale = sys.stiffness.norm().sqrt().max(sys.damping.norm());
    cfg.guard(scale)?;
    let companion = sys.companion();
    let y0 = SVector::<f64, 4>::new(z0[0], z0[1], zdot0[0], zdot0[1]);
    let mut traj = run(
        y0,
        cfg,
        |v: SVector<f64, 4>| companion * v,
        |v| vec![v[0], v[1]],
        Representation::SecondOrder2,
    );
    traj.metadata.system = Some(*sys);
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub norms_sq: Vec<f64>,
}

impl NormSeries {
    /// Central differences at interior samples: `(t_k, dN/dt)`.
    pub fn central_derivative(&self) -> Vec<(f64, f64)> {
        self.times
            .windows(3)
            .zip(self.norms_sq.windows(3))
            .map(|(t, n)| (t[1], (n[2] - n[0]) / (t[2] - t[0])))
            .collect()
    }

    /// `max_k |N_k / N_0 − 1|`.
    pub fn max_relative_drift(&self) -> f64 {
        let n0 = self.norms_sq[0];
        self.norms_sq
            .iter()
            .map(|n| (n / n0 - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

pub fn norm_series(t: &Trajectory) -> Result<NormSeries> {
    let states = t.complex_states()?;
    Ok(NormSeries {
        times: t.times.clone(),
        norms_sq: states.iter().map(ComplexVector2::norm_sqr).collect(),
    })
}

/// Recovers a sample of the complex state from a trajectory row.
pub fn state_at(t: &Trajectory, index: usize) -> Result<ComplexVector2> {
    match t.representation {
        Representation::SecondOrder2 => Err(Error::WrongRepresentation {
            expected: "Complex2 or Real4",
            found: t.representation.name(),
        }),
        _ => {
            let r = &t.states[index];
            Ok(from_real4(&Vector4::new(r[0], r[1], r[2], r[3])))
        }
    }
}
