//! Spectral analysis properties: similarity invariance, permutation
//! invariance, alpha ranges, and eigenvalue residuals.

use opstable::spectral::{analyze_exponent, eigenvalues, validate_exponent, CaseLabel};
use proptest::prelude::*;

mod util;
use util::{conjugate, rotation2, rotation3, Mat};

fn analyze(rows: Vec<Vec<f64>>) -> opstable::spectral::SpectralProfile {
    analyze_exponent(&validate_exponent(&rows).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn similarity_preserves_alphas_and_case_d2(
        a1 in 0.55f64..1.9,
        gap in 0.06f64..0.5,
        theta in 0.0f64..std::f64::consts::PI,
        s in 0.25f64..4.0,
    ) {
        let a2 = (a1 + gap).min(2.0);
        let d = Mat::diag(&[a1, a2]);
        let p = rotation2(theta).mul(&Mat::diag(&[s, 1.0]));
        let b = conjugate(&p, &d);
        let base = analyze(d.rows());
        let conj = analyze(b.rows());
        prop_assert_eq!(base.case_label, conj.case_label);
        for (x, y) in base.alphas.iter().zip(&conj.alphas) {
            prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn similarity_preserves_complex_pair_d2(
        a in 0.55f64..1.9,
        im in 0.05f64..1.0,
        theta in 0.0f64..std::f64::consts::PI,
        s in 0.25f64..4.0,
    ) {
        let d = Mat::new2(a, -im, im, a);
        let p = rotation2(theta).mul(&Mat::diag(&[s, 1.0]));
        let b = conjugate(&p, &d);
        let conj = analyze(b.rows());
        prop_assert_eq!(conj.case_label, CaseLabel::B);
        for alpha in &conj.alphas {
            prop_assert!((alpha - 1.0 / a).abs() < 1e-6);
        }
    }

    #[test]
    fn similarity_preserves_alphas_and_case_d3(
        a1 in 0.55f64..1.2,
        gap1 in 0.06f64..0.4,
        gap2 in 0.06f64..0.4,
        angles in (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::PI),
        s in 0.25f64..4.0,
    ) {
        let (a2, a3) = (a1 + gap1, a1 + gap1 + gap2);
        let d = Mat::diag(&[a1, a2, a3.min(2.0)]);
        let p = rotation3(angles.0, angles.1, angles.2).mul(&Mat::diag(&[s, 1.0, 1.0 / s.sqrt()]));
        let b = conjugate(&p, &d);
        let base = analyze(d.rows());
        let conj = analyze(b.rows());
        prop_assert_eq!(base.case_label, conj.case_label);
        for (x, y) in base.alphas.iter().zip(&conj.alphas) {
            prop_assert!((x - y).abs() < 1e-6, "{x} vs {y}");
        }
    }

    #[test]
    fn permuting_a_diagonal_leaves_alphas_unchanged(
        a1 in 0.55f64..2.0,
        gap in 0.06f64..0.5,
    ) {
        let a2 = (a1 + gap).min(2.0);
        let fwd = analyze(vec![vec![a1, 0.0], vec![0.0, a2]]);
        let rev = analyze(vec![vec![a2, 0.0], vec![0.0, a1]]);
        prop_assert_eq!(fwd.alphas.clone(), rev.alphas.clone());
        prop_assert_eq!(fwd.case_label, rev.case_label);
    }

    #[test]
    fn accepted_matrices_have_sorted_alphas_in_range(
        e in proptest::array::uniform9(-0.9f64..0.9),
        shift in 0.8f64..1.6,
    ) {
        // Random 3x3 with a diagonal shift; keep only matrices that pass
        // validation and give an unambiguous clustering.
        let rows = vec![
            vec![e[0] * 0.3 + shift, e[1] * 0.3, e[2] * 0.3],
            vec![e[3] * 0.3, e[4] * 0.3 + shift, e[5] * 0.3],
            vec![e[6] * 0.3, e[7] * 0.3, e[8] * 0.3 + shift],
        ];
        if let Ok(b) = validate_exponent(&rows) {
            if let Ok(profile) = analyze_exponent(&b) {
                prop_assert!(profile.alphas.windows(2).all(|w| w[0] >= w[1] - 1e-12));
                prop_assert!(profile.alphas.iter().all(|&a| a > 0.0 && a <= 2.0));
                let total: usize = profile.blocks.iter().map(|blk| blk.multiplicity).sum();
                prop_assert_eq!(total, 3);
            }
        }
    }

    #[test]
    fn closed_form_roots_satisfy_characteristic_polynomial(
        e in proptest::array::uniform9(-0.5f64..0.5),
        shift in 0.9f64..1.5,
    ) {
        let rows = vec![
            vec![e[0] + shift, e[1], e[2]],
            vec![e[3], e[4] + shift, e[5]],
            vec![e[6], e[7], e[8] + shift],
        ];
        if let Ok(b) = validate_exponent(&rows) {
            let scale = 1.0 + b.norm_inf();
            // Characteristic polynomial evaluated with independently
            // computed coefficients.
            let m = |i: usize, j: usize| b.entry(i, j);
            let c2 = m(0,0) + m(1,1) + m(2,2);
            let c1 = m(0,0)*m(1,1) - m(0,1)*m(1,0)
                + m(0,0)*m(2,2) - m(0,2)*m(2,0)
                + m(1,1)*m(2,2) - m(1,2)*m(2,1);
            let c0 = m(0,0)*(m(1,1)*m(2,2) - m(1,2)*m(2,1))
                - m(0,1)*(m(1,0)*m(2,2) - m(1,2)*m(2,0))
                + m(0,2)*(m(1,0)*m(2,1) - m(1,1)*m(2,0));
            for x in eigenvalues(&b) {
                let res = ((x - c2) * x + c1) * x - c0;
                prop_assert!(res.norm() < 1e-9 * scale, "residual {}", res.norm());
            }
        }
    }
}
