//! Hamiltonian families `H = M − iΓ` and the PT symmetry machinery.
//!
//! Parity on the dimer is site exchange, `P = [[0, 1], [1, 0]]`; time reversal
//! is complex conjugation. With that choice the gain/loss dimer
//! `[[a + is, −ig], [ig, a − is]]` commutes with `PT` for every `s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{adjoint, eig2, Complex, ComplexMatrix2, ComplexVector2, HERMITIAN_TOL};

/// Tolerance on `γ` for declaring the exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-12;
/// Tolerance for comparing eigenvectors up to a global phase.
pub const PHASE_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HamiltonianKind {
    Hermitian,
    UniformDecay,
    PTDimer,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub m: ComplexMatrix2,
    pub gamma: ComplexMatrix2,
    pub kind: HamiltonianKind,
}

impl EffectiveHamiltonian {
    /// `M − iΓ`.
    pub fn operator(&self) -> ComplexMatrix2 {
        self.m - self.gamma.scale(Complex::i())
    }

    /// Splits an arbitrary operator into hermitian parts `M = (H + H†)/2` and
    /// `Γ = i(H − H†)/2`.
    pub fn from_operator(h: &ComplexMatrix2) -> Self {
        let adj = adjoint(h);
        let m = (*h + adj).scale(Complex::new(0.5, 0.0));
        let gamma = (*h - adj).scale(Complex::new(0.0, 0.5));
        let kind = if gamma.norm() < HERMITIAN_TOL {
            HamiltonianKind::Hermitian
        } else {
            HamiltonianKind::General
        };
        Self { m, gamma, kind }
    }
}

/// Hermitian two-level Hamiltonian with equal diagonal entries,
/// `[[h, f − ig], [f + ig, h]]`. `g = 0` is inductive coupling, `f = 0`
/// gyrator coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianEqualDiagonal {
    pub h: f64,
    pub f: f64,
    pub g: f64,
}

/// Gain/loss dimer: `M = [[a, −ig], [ig, a]]`, `Γ = diag(−s, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PTDimerParams {
    pub a: f64,
    pub g: f64,
    pub s: f64,
}

impl PTDimerParams {
    pub fn new(a: f64, g: f64, s: f64) -> Result<Self> {
        if !(a.is_finite() && g.is_finite() && s.is_finite()) {
            return Err(Error::NonFinite("PT dimer parameters"));
        }
        if g <= 0.0 {
            return Err(Error::InvalidParameter(format!("coupling g must be > 0, got {g}")));
        }
        if s < 0.0 {
            return Err(Error::InvalidParameter(format!("gain/loss s must be >= 0, got {s}")));
        }
        Ok(Self { a, g, s })
    }

    /// Parameters for a given degree of non-hermiticity `γ = s/g`.
    pub fn with_gamma(a: f64, g: f64, gamma: f64) -> Result<Self> {
        Self::new(a, g, gamma * g)
    }

    pub fn gamma_ratio(&self) -> f64 {
        self.s / self.g
    }

    pub fn is_exceptional(&self) -> bool {
        (self.gamma_ratio() - 1.0).abs() < EXCEPTIONAL_TOL
    }

    pub fn is_unbroken(&self) -> bool {
        self.gamma_ratio() < 1.0 && !self.is_exceptional()
    }

    pub fn is_broken(&self) -> bool {
        self.gamma_ratio() > 1.0 && !self.is_exceptional()
    }

    /// Closed-form spectrum `a ± g√(1 − γ²)`, principal branch above the
    /// exceptional point (`a ± i g√(γ² − 1)`).
    pub fn eigenvalues(&self) -> [Complex; 2] {
        let gamma = self.gamma_ratio();
        let q = 1.0 - gamma * gamma;
        if q >= 0.0 {
            let r = self.g * q.sqrt();
            [Complex::new(self.a + r, 0.0), Complex::new(self.a - r, 0.0)]
        } else {
            let r = self.g * (-q).sqrt();
            [Complex::new(self.a, r), Complex::new(self.a, -r)]
        }
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn build_hermitian(p: HermitianEqualDiagonal) -> EffectiveHamiltonian {
    let m = ComplexMatrix2::new(c(p.h, 0.0), c(p.f, -p.g), c(p.f, p.g), c(p.h, 0.0));
    EffectiveHamiltonian {
        m,
        gamma: ComplexMatrix2::zero(),
        kind: HamiltonianKind::Hermitian,
    }
}

/// `H = h − i s·1`: every state decays at rate `2s` in norm².
pub fn build_uniform_decay(h: &ComplexMatrix2, s: f64) -> Result<EffectiveHamiltonian> {
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::NotHermitian);
    }
    if !(s > 0.0) {
        return Err(Error::NonPositiveRate(s));
    }
    Ok(EffectiveHamiltonian {
        m: *h,
        gamma: ComplexMatrix2::diag(c(s, 0.0), c(s, 0.0)),
        kind: HamiltonianKind::UniformDecay,
    })
}

pub fn build_pt_dimer(p: PTDimerParams) -> EffectiveHamiltonian {
    EffectiveHamiltonian {
        m: ComplexMatrix2::new(c(p.a, 0.0), c(0.0, -p.g), c(0.0, p.g), c(p.a, 0.0)),
        gamma: ComplexMatrix2::diag(c(-p.s, 0.0), c(p.s, 0.0)),
        kind: HamiltonianKind::PTDimer,
    }
}

/// Antilinear map `v ↦ P·conj(v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtOperator {
    pub parity: [[f64; 2]; 2],
}

pub fn pt_operator() -> PtOperator {
    PtOperator {
        parity: [[0.0, 1.0], [1.0, 0.0]],
    }
}

impl PtOperator {
    pub fn apply(&self, v: &ComplexVector2) -> ComplexVector2 {
        ComplexMatrix2::from_real(self.parity).apply(&v.conj())
    }

    /// `P·conj(H)·P`; equals `H` exactly when `[H, PT] = 0`.
    pub fn conjugate(&self, h: &ComplexMatrix2) -> ComplexMatrix2 {
        let p = ComplexMatrix2::from_real(self.parity);
        p * h.conj() * p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PtRealization {
    /// Each eigenvector is PT-invariant up to phase; spectrum real.
    Unbroken,
    /// PT exchanges the two eigenvectors; spectrum a conjugate pair.
    Broken,
    /// Eigenvalues and eigenvectors coalesce.
    Exceptional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PtSymmetry {
    pub symmetric: bool,
    /// `None` when the operator is not PT-symmetric.
    pub realization: Option<PtRealization>,
}

pub fn pt_symmetry_check(h: &EffectiveHamiltonian) -> Result<PtSymmetry> {
    let op = h.operator();
    let pt = pt_operator();
    let symmetric = pt.conjugate(&op).max_abs_diff(&op) < HERMITIAN_TOL;
    if !symmetric {
        return Ok(PtSymmetry {
            symmetric,
            realization: None,
        });
    }
    let eig = eig2(&op)?;
    let realization = if eig.degenerate {
        PtRealization::Exceptional
    } else {
        let [v1, v2] = eig.eigenvectors();
        let (pv1, pv2) = (pt.apply(&v1), pt.apply(&v2));
        if v1.phase_distance(&pv1) < PHASE_MATCH_TOL && v2.phase_distance(&pv2) < PHASE_MATCH_TOL {
            PtRealization::Unbroken
        } else if v2.phase_distance(&pv1) < PHASE_MATCH_TOL {
            PtRealization::Broken
        } else if eig.eigenvalue1.im.abs() < PHASE_MATCH_TOL && eig.eigenvalue2.im.abs() < PHASE_MATCH_TOL {
            PtRealization::Unbroken
        } else {
            PtRealization::Broken
        }
    };
    Ok(PtSymmetry {
        symmetric,
        realization: Some(realization),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayClass {
    /// Both Γ eigenvalues positive: norm decays for every state.
    Decaying,
    /// Traceless PT-balanced Γ (or Γ = 0).
    Conserving,
    Indefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaSpectrum {
    pub trace: f64,
    pub det: f64,
    pub decay_class: DecayClass,
}

/// Trace and determinant of Γ, the coefficients of its characteristic
/// polynomial `λ² − Tr(Γ)λ + det(Γ)`.
pub fn gamma_spectrum(h: &EffectiveHamiltonian) -> GammaSpectrum {
    let trace = h.gamma.trace().re;
    let det = h.gamma.det().re;
    let scale = h.gamma.norm().max(1.0);
    let tol = HERMITIAN_TOL * scale;
    let decay_class = if trace > tol && det > tol * scale {
        DecayClass::Decaying
    } else if trace.abs() < tol && h.gamma.norm() < tol {
        DecayClass::Conserving
    } else if trace.abs() < tol && det < -tol * scale {
        let pt = pt_operator();
        let op = h.operator();
        if pt.conjugate(&op).max_abs_diff(&op) < tol {
            DecayClass::Conserving
        } else {
            DecayClass::Indefinite
        }
    } else {
        DecayClass::Indefinite
    };
    GammaSpectrum { trace, det, decay_class }
}
