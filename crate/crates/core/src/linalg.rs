//! Exact-size complex linear algebra for two-level systems.
//!
//! Everything here is closed form: the 2×2 eigenproblem is a quadratic, so the
//! coalescence of eigenvalues (an exceptional point for non-hermitian input)
//! shows up directly as a vanishing discriminant.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Relative tolerance for eigenvalue coalescence.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Absolute tolerance for the hermitian predicate.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexVector2 {
    pub c1: Complex,
    pub c2: Complex,
}

impl ComplexVector2 {
    pub const fn new(c1: Complex, c2: Complex) -> Self {
        Self { c1, c2 }
    }

    pub fn from_real(x1: f64, x2: f64) -> Self {
        Self::new(Complex::new(x1, 0.0), Complex::new(x2, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian inner product `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> Complex {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    pub fn conj(&self) -> Self {
        Self::new(self.c1.conj(), self.c2.conj())
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.c1 * k, self.c2 * k)
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.c1 / n, self.c2 / n)
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    /// Distance to `other` after removing the best global phase.
    ///
    /// Both vectors are assumed to be unit-norm.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        let overlap = self.inner(other);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        (*other - self.scale(phase)).norm()
    }
}

impl Add for ComplexVector2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.c1 + rhs.c1, self.c2 + rhs.c2)
    }
}

impl Sub for ComplexVector2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.c1 - rhs.c1, self.c2 - rhs.c2)
    }
}

impl Mul<f64> for ComplexVector2 {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.c1 * k, self.c2 * k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix2 {
    pub h11: Complex,
    pub h12: Complex,
    pub h21: Complex,
    pub h22: Complex,
}

impl ComplexMatrix2 {
    pub const fn new(h11: Complex, h12: Complex, h21: Complex, h22: Complex) -> Self {
        Self { h11, h12, h21, h22 }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self::new(
            Complex::new(m[0][0], 0.0),
            Complex::new(m[0][1], 0.0),
            Complex::new(m[1][0], 0.0),
            Complex::new(m[1][1], 0.0),
        )
    }

    pub fn diag(d1: Complex, d2: Complex) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.h11, self.h12, self.h21, self.h22]
    }

    pub fn trace(&self) -> Complex {
        self.h11 + self.h22
    }

    pub fn det(&self) -> Complex {
        self.h11 * self.h22 - self.h12 * self.h21
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.h11.conj(), self.h12.conj(), self.h21.conj(), self.h22.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.h11, self.h21, self.h12, self.h22)
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self::new(self.h11 * k, self.h12 * k, self.h21 * k, self.h22 * k)
    }

    pub fn apply(&self, v: &ComplexVector2) -> ComplexVector2 {
        ComplexVector2::new(
            self.h11 * v.c1 + self.h12 * v.c2,
            self.h21 * v.c1 + self.h22 * v.c2,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.h11.im.abs() < tol
            && self.h22.im.abs() < tol
            && (self.h21 - self.h12.conj()).norm() < tol
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Add for ComplexMatrix2 {
    type Output = Self;
    fn add(self, r: Self) -> Self {
        Self::new(self.h11 + r.h11, self.h12 + r.h12, self.h21 + r.h21, self.h22 + r.h22)
    }
}

impl Sub for ComplexMatrix2 {
    type Output = Self;
    fn sub(self, r: Self) -> Self {
        Self::new(self.h11 - r.h11, self.h12 - r.h12, self.h21 - r.h21, self.h22 - r.h22)
    }
}

impl Neg for ComplexMatrix2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix2 {
    type Output = Self;
    fn mul(self, r: Self) -> Self {
        Self::new(
            self.h11 * r.h11 + self.h12 * r.h21,
            self.h11 * r.h12 + self.h12 * r.h22,
            self.h21 * r.h11 + self.h22 * r.h21,
            self.h21 * r.h12 + self.h22 * r.h22,
        )
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &ComplexMatrix2) -> ComplexMatrix2 {
    m.conj().transpose()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem2 {
    pub eigenvalue1: Complex,
    pub eigenvalue2: Complex,
    pub eigenvector1: ComplexVector2,
    pub eigenvector2: ComplexVector2,
    /// Eigenvalues coincide within the degeneracy tolerance.
    pub degenerate: bool,
    /// Degenerate with a single eigenvector (Jordan block). Both returned
    /// pairs are then the same repeated pair.
    pub defective: bool,
}

impl EigenSystem2 {
    pub fn eigenvalues(&self) -> [Complex; 2] {
        [self.eigenvalue1, self.eigenvalue2]
    }

    pub fn eigenvectors(&self) -> [ComplexVector2; 2] {
        [self.eigenvector1, self.eigenvector2]
    }
}

/// Orders by descending real part, then descending imaginary part.
fn descending(a: &Complex, b: &Complex) -> std::cmp::Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Normalizes to unit length and rotates the largest-magnitude component onto
/// the positive real axis. Near-ties resolve to the first component.
fn fix_phase(v: ComplexVector2) -> ComplexVector2 {
    let v = v.normalized();
    let pivot = if v.c2.norm() > v.c1.norm() + 1e-12 { v.c2 } else { v.c1 };
    let phase = pivot.conj() / pivot.norm();
    v.scale(phase)
}

fn eigenvector_for(m: &ComplexMatrix2, lambda: Complex) -> ComplexVector2 {
    // Two null-vector candidates of (H - λ); the longer one is better conditioned.
    let from_row1 = ComplexVector2::new(m.h12, lambda - m.h11);
    let from_row2 = ComplexVector2::new(lambda - m.h22, m.h21);
    let v = if from_row1.norm_sqr() >= from_row2.norm_sqr() {
        from_row1
    } else {
        from_row2
    };
    fix_phase(v)
}

/// Closed-form eigendecomposition of a 2×2 complex matrix.
pub fn eig2(m: &ComplexMatrix2) -> Result<EigenSystem2> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix"));
    }
    let scale = m.norm().max(1.0);
    let mean = m.trace() * 0.5;
    let half_split = (m.h11 - m.h22) * 0.5;
    let disc = half_split * half_split + m.h12 * m.h21;
    let root = disc.sqrt();
    let mut lambdas = [mean + root, mean - root];
    lambdas.sort_by(descending);
    let [l1, l2] = lambdas;

    let degenerate = (l1 - l2).norm() < DEGENERACY_TOL * scale;
    if degenerate {
        let lambda = mean;
        let off = m.h12.norm().max(m.h21.norm()).max(half_split.norm());
        if off < DEGENERACY_TOL * scale {
            // Scalar matrix: every vector is an eigenvector.
            return Ok(EigenSystem2 {
                eigenvalue1: lambda,
                eigenvalue2: lambda,
                eigenvector1: ComplexVector2::new(ONE, ZERO),
                eigenvector2: ComplexVector2::new(ZERO, ONE),
                degenerate: true,
                defective: false,
            });
        }
        let v = eigenvector_for(m, lambda);
        return Ok(EigenSystem2 {
            eigenvalue1: lambda,
            eigenvalue2: lambda,
            eigenvector1: v,
            eigenvector2: v,
            degenerate: true,
            defective: true,
        });
    }

    Ok(EigenSystem2 {
        eigenvalue1: l1,
        eigenvalue2: l2,
        eigenvector1: eigenvector_for(m, l1),
        eigenvector2: eigenvector_for(m, l2),
        degenerate: false,
        defective: false,
    })
}

/// Right eigenvectors of `H` paired with left eigenvectors (eigenvectors of
/// `H†`) so that `⟨χ_n|φ_m⟩ = δ_nm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiorthogonalBasis {
    pub right: [ComplexVector2; 2],
    pub left: [ComplexVector2; 2],
    pub eigenvalues: [Complex; 2],
}

impl BiorthogonalBasis {
    /// The matrix `⟨χ_n|φ_m⟩`.
    pub fn overlap_matrix(&self) -> [[Complex; 2]; 2] {
        let mut out = [[ZERO; 2]; 2];
        for (n, chi) in self.left.iter().enumerate() {
            for (k, phi) in self.right.iter().enumerate() {
                out[n][k] = chi.inner(phi);
            }
        }
        out
    }

    /// Expansion coefficients of `psi` in the right basis.
    pub fn coefficients(&self, psi: &ComplexVector2) -> [Complex; 2] {
        [self.left[0].inner(psi), self.left[1].inner(psi)]
    }
}

pub fn biorthogonal(m: &ComplexMatrix2) -> Result<BiorthogonalBasis> {
    let right = eig2(m)?;
    if right.defective {
        return Err(Error::ExceptionalPoint);
    }
    if right.degenerate {
        // Scalar operator; the standard basis is orthonormal on both sides.
        return Ok(BiorthogonalBasis {
            right: right.eigenvectors(),
            left: right.eigenvectors(),
            eigenvalues: right.eigenvalues(),
        });
    }
    let adj = eig2(&adjoint(m))?;
    let mut left = [ComplexVector2::new(ZERO, ZERO); 2];
    for (n, kappa) in right.eigenvalues().iter().enumerate() {
        // Left partner of κ_n is the H† eigenvector with eigenvalue conj(κ_n).
        let target = kappa.conj();
        let chi = if (adj.eigenvalue1 - target).norm() <= (adj.eigenvalue2 - target).norm() {
            adj.eigenvector1
        } else {
            adj.eigenvector2
        };
        let product = chi.inner(&right.eigenvectors()[n]);
        if product.norm() < 1e-12 {
            return Err(Error::ExceptionalPoint);
        }
        left[n] = chi.scale(ONE / product.conj());
    }
    Ok(BiorthogonalBasis {
        right: right.eigenvectors(),
        left,
        eigenvalues: right.eigenvalues(),
    })
}
