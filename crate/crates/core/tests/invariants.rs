use std::f64::consts::PI;

use geophase::decomplexify::{from_real4, real4, split, to_real4};
use geophase::linalg::{biorthogonal, eig2, Complex, ComplexMatrix2, ComplexVector2};
use geophase::models::{build_pt_dimer, pt_operator, PTDimerParams};
use geophase::phases::{berry_phase, dynamic_phase, hannay_angle, total_phase, BlochInitialState};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = Complex> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn matrix() -> impl Strategy<Value = ComplexMatrix2> {
    (complex(), complex(), complex(), complex()).prop_map(|(a, b, c, d)| ComplexMatrix2::new(a, b, c, d))
}

fn vector() -> impl Strategy<Value = ComplexVector2> {
    (complex(), complex()).prop_map(|(a, b)| ComplexVector2::new(a, b))
}

proptest! {
    #[test]
    fn eigenpairs_have_small_residuals(m in matrix()) {
        let eig = eig2(&m).unwrap();
        prop_assume!(!eig.defective);
        let scale = m.norm().max(1.0);
        for (l, v) in eig.eigenvalues().iter().zip(eig.eigenvectors()) {
            let r = m.apply(&v) - v.scale(*l);
            prop_assert!(r.norm() < 1e-9 * scale, "residual {}", r.norm());
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalues_match_trace_and_determinant(m in matrix()) {
        let eig = eig2(&m).unwrap();
        let scale = m.norm().max(1.0);
        prop_assert!((eig.eigenvalue1 + eig.eigenvalue2 - m.trace()).norm() < 1e-12 * scale);
        prop_assert!((eig.eigenvalue1 * eig.eigenvalue2 - m.det()).norm() < 1e-11 * scale * scale);
    }

    #[test]
    fn biorthogonal_basis_is_dual(m in matrix()) {
        let Ok(basis) = biorthogonal(&m) else { return Ok(()) };
        let o = basis.overlap_matrix();
        // Well-separated spectra only; the overlap conditioning degrades near an EP.
        prop_assume!((basis.eigenvalues[0] - basis.eigenvalues[1]).norm() > 1e-2);
        for (i, row) in o.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((entry - want).norm() < 1e-8, "overlap[{i}][{j}] = {entry}");
            }
        }
    }

    #[test]
    fn real_split_round_trips(m in matrix(), v in vector()) {
        prop_assert_eq!(split(&m).reassemble(), m);
        prop_assert_eq!(from_real4(&to_real4(&v)), v);
        // −iHψ in complex arithmetic equals the real evo matrix acting on (x1, y1, x2, y2).
        let lhs = to_real4(&m.apply(&v).scale(Complex::new(0.0, -1.0)));
        let rhs = real4(&m).evo * to_real4(&v);
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + m.norm() * v.norm()));
    }

    #[test]
    fn pt_operator_is_an_antilinear_involution(v in vector(), k in complex()) {
        let pt = pt_operator();
        prop_assert_eq!(pt.apply(&pt.apply(&v)), v);
        let lhs = pt.apply(&v.scale(k));
        let rhs = pt.apply(&v).scale(k.conj());
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + k.norm() * v.norm()));
    }

    #[test]
    fn pt_dimer_commutes_with_pt(a in -2.0..2.0f64, g in 0.1..2.0f64, s in 0.0..3.0f64) {
        let h = build_pt_dimer(PTDimerParams::new(a, g, s).unwrap()).operator();
        prop_assert!(pt_operator().conjugate(&h).max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn phase_chain_identities(l2 in -5.0..5.0f64, gap in 1e-3..5.0f64, theta in 0.0..=PI) {
        let l1 = l2 + gap;
        let init = BlochInitialState::new(theta, 0.0).unwrap();
        let total = total_phase(l1, l2).unwrap();
        let dynamic = dynamic_phase(l1, l2, &init).unwrap();
        prop_assert!((total - dynamic - berry_phase(&init)).abs() < 1e-10);
        prop_assert!((hannay_angle(theta) + 2.0 * berry_phase(&init)).abs() < 1e-12);
        prop_assert!(berry_phase(&init) <= 0.0 && berry_phase(&init) >= -2.0 * PI);
    }
}
