//! Quantum → classical map for two-level systems.
//!
//! Writing `Ψ = x + iy` and `H = B + iA` (so `B = Re H`, `A = Im H`), the
//! Schrödinger equation `iΨ̇ = HΨ` becomes the real first-order system
//!
//! ```text
//! ẋ = A x + B y
//! ẏ = A y − B x
//! ```
//!
//! which, when `B` is invertible, decouples into second-order oscillator
//! equations for `x` and for `y` separately.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix2, ComplexVector2};

/// Relative threshold on `|det B| / ‖B‖²` below which `B` counts as singular.
pub const SINGULAR_B_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSplit {
    /// `Im H`.
    pub a_mat: Matrix2<f64>,
    /// `Re H`.
    pub b_mat: Matrix2<f64>,
}

impl RealSplit {
    /// `B + iA`.
    pub fn reassemble(&self) -> ComplexMatrix2 {
        let e = |r: usize, c: usize| Complex::new(self.b_mat[(r, c)], self.a_mat[(r, c)]);
        ComplexMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

pub fn split(h: &ComplexMatrix2) -> RealSplit {
    RealSplit {
        a_mat: Matrix2::new(h.h11.im, h.h12.im, h.h21.im, h.h22.im),
        b_mat: Matrix2::new(h.h11.re, h.h12.re, h.h21.re, h.h22.re),
    }
}

/// Real first-order system acting on `(x₁, y₁, x₂, y₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSystem4 {
    pub evo: Matrix4<f64>,
}

pub fn real4(h: &ComplexMatrix2) -> RealSystem4 {
    let RealSplit { a_mat: g, b_mat: f } = split(h);
    #[rustfmt::skip]
    let evo = Matrix4::new(
         g[(0, 0)], f[(0, 0)],  g[(0, 1)], f[(0, 1)],
        -f[(0, 0)], g[(0, 0)], -f[(0, 1)], g[(0, 1)],
         g[(1, 0)], f[(1, 0)],  g[(1, 1)], f[(1, 1)],
        -f[(1, 0)], g[(1, 0)], -f[(1, 1)], g[(1, 1)],
    );
    RealSystem4 { evo }
}

/// Interleaves `Ψ` into `(x₁, y₁, x₂, y₂)`.
pub fn to_real4(psi: &ComplexVector2) -> Vector4<f64> {
    Vector4::new(psi.c1.re, psi.c1.im, psi.c2.re, psi.c2.im)
}

pub fn from_real4(v: &Vector4<f64>) -> ComplexVector2 {
    ComplexVector2::new(Complex::new(v[0], v[1]), Complex::new(v[2], v[3]))
}

/// Which half of the state a second-order system evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variable {
    /// `x = Re Ψ`.
    X,
    /// `y = Im Ψ`.
    Y,
}

/// `z̈ = D ż − K z`.
///
/// Also the form used for the gyrator-coupled circuits, where `z` is the pair
/// of node voltages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderSystem {
    pub damping: Matrix2<f64>,
    pub stiffness: Matrix2<f64>,
    pub variable: Variable,
}

impl SecondOrderSystem {
    /// Real 4×4 first-order companion acting on `(z₁, z₂, ż₁, ż₂)`.
    pub fn companion(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m[(0, 2)] = 1.0;
        m[(1, 3)] = 1.0;
        m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(-self.stiffness));
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.damping);
        m
    }
}

/// Decoupled second-order form for `x` or `y`.
///
/// Eliminating the other half from the first-order pair gives, for either
/// variable,
///
/// ```text
/// z̈ = (A + BAB⁻¹) ż − (BAB⁻¹A + BB) z
/// ```
pub fn second_order(rs: &RealSplit, which: Variable) -> Result<SecondOrderSystem> {
    let b = rs.b_mat;
    let det = b.determinant();
    if !(det.abs() > SINGULAR_B_TOL * b.norm_squared()) {
        return Err(Error::SingularB { det });
    }
    let b_inv = b.try_inverse().ok_or(Error::SingularB { det })?;
    let a = rs.a_mat;
    let bab = b * a * b_inv;
    Ok(SecondOrderSystem {
        damping: a + bab,
        stiffness: bab * a + b * b,
        variable: which,
    })
}

/// Initial slope fixed by the first-order system:
/// `ẋ(0) = A x(0) + B y(0)`, `ẏ(0) = A y(0) − B x(0)`.
pub fn initial_velocity(rs: &RealSplit, which: Variable, psi0: &ComplexVector2) -> Vector2<f64> {
    let x0 = Vector2::new(psi0.c1.re, psi0.c2.re);
    let y0 = Vector2::new(psi0.c1.im, psi0.c2.im);
    match which {
        Variable::X => rs.a_mat * x0 + rs.b_mat * y0,
        Variable::Y => rs.a_mat * y0 - rs.b_mat * x0,
    }
}

/// Initial position of the chosen half of `Ψ(0)`.
pub fn initial_position(which: Variable, psi0: &ComplexVector2) -> Vector2<f64> {
    match which {
        Variable::X => Vector2::new(psi0.c1.re, psi0.c2.re),
        Variable::Y => Vector2::new(psi0.c1.im, psi0.c2.im),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn split_equal_diagonal_hamiltonian() {
        let h = ComplexMatrix2::new(c(2.0, 0.0), c(1.0, -3.0), c(1.0, 3.0), c(2.0, 0.0));
        let rs = split(&h);
        assert_eq!(rs.a_mat, Matrix2::new(0.0, -3.0, 3.0, 0.0));
        assert_eq!(rs.b_mat, Matrix2::new(2.0, 1.0, 1.0, 2.0));
        assert_eq!(rs.reassemble(), h);
    }

    #[test]
    fn split_special_cases() {
        let real = ComplexMatrix2::from_real([[1.0, 0.5], [0.5, -2.0]]);
        assert_eq!(split(&real).a_mat, Matrix2::zeros());
        let imag = ComplexMatrix2::diag(c(0.0, 1.0), c(0.0, 1.0));
        let rs = split(&imag);
        assert_eq!(rs.b_mat, Matrix2::zeros());
        assert_eq!(rs.a_mat, Matrix2::identity());
    }

    #[test]
    fn real4_block_pattern() {
        let h = ComplexMatrix2::new(c(0.1, 0.2), c(0.3, 0.4), c(0.5, 0.6), c(0.7, 0.8));
        let e = real4(&h).evo;
        assert_eq!(e[(0, 1)], 0.1);
        assert_eq!(e[(1, 0)], -0.1);
        assert_eq!(e[(0, 0)], 0.2);
        assert_eq!(e[(1, 1)], 0.2);
        assert_eq!(e[(0, 2)], 0.4);
        assert_eq!(e[(0, 3)], 0.3);
        assert_eq!(e[(1, 2)], -0.3);
        assert_eq!(e[(2, 0)], 0.6);
        assert_eq!(e[(3, 0)], -0.5);
        assert_eq!(e[(3, 2)], -0.7);
        assert_eq!(e[(3, 3)], 0.8);

        let y = ComplexMatrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        let e = real4(&y).evo;
        assert_eq!(e[(0, 2)], -1.0);
        assert_eq!(e[(2, 0)], 1.0);
        assert_eq!(real4(&ComplexMatrix2::zero()).evo, Matrix4::zeros());
    }

    #[test]
    fn real4_matches_complex_generator() {
        // evo · to_real4(v) must equal to_real4(−iHv).
        let h = ComplexMatrix2::new(c(0.3, -0.2), c(-0.8, 0.5), c(0.1, 0.9), c(-0.4, 0.6));
        let v = ComplexVector2::new(c(0.2, -0.7), c(1.1, 0.4));
        let lhs = real4(&h).evo * to_real4(&v);
        let rhs = to_real4(&h.scale(c(0.0, -1.0)).apply(&v));
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn commuting_case_coefficients() {
        // A = gJ commutes with B = h·1: D = 2A, K = A² + h²·1.
        let (h, g) = (1.5, 0.4);
        let rs = RealSplit {
            a_mat: Matrix2::new(0.0, -g, g, 0.0),
            b_mat: Matrix2::identity() * h,
        };
        for which in [Variable::X, Variable::Y] {
            let so = second_order(&rs, which).unwrap();
            assert!((so.damping - Matrix2::new(0.0, -2.0 * g, 2.0 * g, 0.0)).norm() < 1e-15);
            let k = rs.a_mat * rs.a_mat + Matrix2::identity() * h * h;
            assert!((so.stiffness - k).norm() < 1e-15);
        }
    }

    #[test]
    fn inductive_limit_is_uncoupled() {
        let b = Matrix2::new(2.0, 0.5, 0.5, 2.0);
        let rs = RealSplit { a_mat: Matrix2::zeros(), b_mat: b };
        let so = second_order(&rs, Variable::X).unwrap();
        assert_eq!(so.damping, Matrix2::zeros());
        assert!((so.stiffness - b * b).norm() < 1e-15);
    }

    #[test]
    fn singular_b_is_rejected() {
        let h = ComplexMatrix2::new(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!(matches!(second_order(&split(&h), Variable::X), Err(Error::SingularB { .. })));
        let rank_one = ComplexMatrix2::from_real([[1.0, 2.0], [2.0, 4.0]]);
        assert!(matches!(second_order(&split(&rank_one), Variable::Y), Err(Error::SingularB { .. })));
    }

    #[test]
    fn companion_layout() {
        let so = SecondOrderSystem {
            damping: Matrix2::new(1.0, 2.0, 3.0, 4.0),
            stiffness: Matrix2::new(5.0, 6.0, 7.0, 8.0),
            variable: Variable::X,
        };
        let m = so.companion();
        assert_eq!(m[(0, 2)], 1.0);
        assert_eq!(m[(2, 0)], -5.0);
        assert_eq!(m[(3, 1)], -8.0);
        assert_eq!(m[(2, 3)], 2.0);
    }
}
