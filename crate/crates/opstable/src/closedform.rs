//! Closed-form answers: dimension of the double-point set, critical
//! exponents of the anisotropic integrals, and existence verdicts.
//!
//! With `alpha_1 >= ... >= alpha_d` the indices of the exponent and
//! `gamma = 2 - Σ_j 1/alpha_j`:
//!
//! * `d = 2`: `dim M_2 = min{ alpha_1 (2 - 1/alpha_1 - 1/alpha_2),
//!   2 alpha_2 - 2 alpha_2 / alpha_1 }`, and the critical exponent of `I_β`
//!   is `max{ 3 + alpha_1/alpha_2 - 2 alpha_1, 2 + 2 alpha_2/alpha_1 -
//!   2 alpha_2 }` when `gamma > 0` (infinite otherwise).
//! * `d = 3`: `dim M_2 = alpha_1 (2 - 1/alpha_1 - 1/alpha_2 - 1/alpha_3)`,
//!   and the critical exponent of `J_β` is `4 + alpha_1/alpha_2 +
//!   alpha_1/alpha_3 - 2 alpha_1`.
//! * `d >= 4`: `M_2` is empty for every valid exponent.
//!
//! A negative dimension value means `M_2` is empty. Existence follows
//! `gamma > 0` except in the full-Jordan case d, where the sharp condition
//! is `alpha_1 >= 3/2` — the one configuration where `M_2` can be nonempty
//! while its dimension is zero.

use crate::spectral::{CaseLabel, SpectralProfile};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClosedFormError {
    #[error("no closed-form critical exponent for d = {0}; only d in {{2, 3}}")]
    UnsupportedDim(usize),
    #[error("arguments must satisfy 2 >= a1 >= a2 >= a3 > 1")]
    DomainError,
}

/// Dimension value with the empty-set marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum DimValue {
    Value(f64),
    Empty,
}

/// Critical exponent with the everywhere-divergent marker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum CriticalBeta {
    Finite(f64),
    Infinite,
}

impl CriticalBeta {
    pub fn finite(self) -> Option<f64> {
        match self {
            CriticalBeta::Finite(v) => Some(v),
            CriticalBeta::Infinite => None,
        }
    }
}

/// Everything the closed forms say about the double points of one exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub dim_value: DimValue,
    /// Value of the dimension formula before the negative-means-empty rule;
    /// `None` for `d >= 4`, where no formula applies.
    pub raw_formula_value: Option<f64>,
    pub exists: bool,
    pub critical_beta: CriticalBeta,
    /// `gamma = 2 - Σ_j 1/alpha_j`.
    pub gamma: f64,
    pub case_label: CaseLabel,
}

/// Tolerance for the non-strict `alpha_1 >= 3/2` comparison in case d, so
/// that the exactly representable boundary value never misclassifies.
const CASE_D_BOUNDARY_TOL: f64 = 1e-12;

/// Boundary tolerance for `gamma` and the raw dimension formula: values of
/// `2 - Σ 1/alpha_j` at an exact boundary (all `alpha_j = 3/2`, say) land a
/// few ulps off zero, and the sign decides existence and emptiness.
const BOUNDARY_SNAP: f64 = 1e-12;

fn snap_zero(v: f64) -> f64 {
    if v.abs() <= BOUNDARY_SNAP {
        0.0
    } else {
        v
    }
}

/// Raw dimension formula (before the empty rule) for `d` in `{2, 3}`.
fn raw_dim_formula(alphas: &[f64]) -> Option<f64> {
    match alphas {
        [a1, a2] => {
            let first = a1 * (2.0 - 1.0 / a1 - 1.0 / a2);
            let second = 2.0 * a2 - 2.0 * a2 / a1;
            Some(snap_zero(first.min(second)))
        }
        [a1, a2, a3] => Some(snap_zero(a1 * (2.0 - 1.0 / a1 - 1.0 / a2 - 1.0 / a3))),
        _ => None,
    }
}

/// Raw critical-exponent formula for `d` in `{2, 3}` (no `gamma` gate).
pub fn critical_beta_formula(alphas: &[f64]) -> Option<f64> {
    match alphas {
        [a1, a2] => Some((3.0 + a1 / a2 - 2.0 * a1).max(2.0 + 2.0 * a2 / a1 - 2.0 * a2)),
        [a1, a2, a3] => Some(4.0 + a1 / a2 + a1 / a3 - 2.0 * a1),
        _ => None,
    }
}

/// Hausdorff dimension of the double-point set, with existence verdict and
/// critical exponent, for any valid profile.
pub fn dim_double_points(profile: &SpectralProfile) -> DimensionReport {
    let gamma = profile.gamma();
    let exists = exists_double_points(profile);
    let critical = match critical_beta(profile) {
        Ok(c) => c,
        // d >= 4 forces gamma <= 0 (each 1/alpha_j >= 1/2), so the
        // everywhere-divergent marker is the consistent value.
        Err(_) => CriticalBeta::Infinite,
    };
    let raw = raw_formula_value(profile);
    let dim_value = match raw {
        Some(v) if v >= 0.0 => DimValue::Value(v.max(0.0)),
        _ => DimValue::Empty,
    };
    DimensionReport {
        dim_value,
        raw_formula_value: raw,
        exists,
        critical_beta: critical,
        gamma,
        case_label: profile.case_label,
    }
}

fn raw_formula_value(profile: &SpectralProfile) -> Option<f64> {
    if profile.dim >= 4 {
        None
    } else {
        raw_dim_formula(&profile.alphas)
    }
}

/// Critical exponent `inf{β > 0 : I_β < ∞}` (d = 2) or the same for `J_β`
/// (d = 3); infinite when `gamma <= 0`.
pub fn critical_beta(profile: &SpectralProfile) -> Result<CriticalBeta, ClosedFormError> {
    if profile.dim != 2 && profile.dim != 3 {
        return Err(ClosedFormError::UnsupportedDim(profile.dim));
    }
    if snap_zero(profile.gamma()) <= 0.0 {
        return Ok(CriticalBeta::Infinite);
    }
    Ok(CriticalBeta::Finite(
        critical_beta_formula(&profile.alphas).expect("dim checked"),
    ))
}

/// Whether the double-point set is nonempty.
pub fn exists_double_points(profile: &SpectralProfile) -> bool {
    match (profile.dim, profile.case_label) {
        (2, _) => snap_zero(profile.gamma()) > 0.0,
        (3, CaseLabel::D) => profile.alphas[0] >= 1.5 - CASE_D_BOUNDARY_TOL,
        (3, _) => snap_zero(profile.gamma()) > 0.0,
        _ => false,
    }
}

/// The exponent inequality behind the three-index series classification:
/// for `2 >= a1 >= a2 >= a3 > 1`,
///
/// ```text
/// max{ 2 + 2 a3/a1 + 2 a3/a2 - 2 a3,  3 + 2 a2/a1 + a2/a3 - 2 a2 }
///     <= 4 + a1/a2 + a1/a3 - 2 a1
/// ```
///
/// Exposed so the property test over the whole domain is a one-liner.
pub fn lemma_alpha_check(a1: f64, a2: f64, a3: f64) -> Result<bool, ClosedFormError> {
    if !(a1 <= 2.0 && a1 >= a2 && a2 >= a3 && a3 > 1.0) {
        return Err(ClosedFormError::DomainError);
    }
    let lhs = (2.0 + 2.0 * a3 / a1 + 2.0 * a3 / a2 - 2.0 * a3)
        .max(3.0 + 2.0 * a2 / a1 + a2 / a3 - 2.0 * a2);
    let rhs = 4.0 + a1 / a2 + a1 / a3 - 2.0 * a1;
    Ok(lhs <= rhs + 1e-12 * rhs.abs().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(alphas: &[f64], case: CaseLabel) -> SpectralProfile {
        SpectralProfile::from_alphas(alphas, case).unwrap()
    }

    #[test]
    fn planar_brownian_corner_has_dimension_two() {
        let r = dim_double_points(&profile(&[2.0, 2.0], CaseLabel::A));
        assert_eq!(r.dim_value, DimValue::Value(2.0));
        assert!(r.exists);
    }

    #[test]
    fn mixed_indices_d2() {
        // min{2 (2 - 1/2 - 1), 2 - 1} = 1
        let r = dim_double_points(&profile(&[2.0, 1.0], CaseLabel::A));
        assert_eq!(r.dim_value, DimValue::Value(1.0));
        assert_eq!(r.critical_beta, CriticalBeta::Finite(1.0));
    }

    #[test]
    fn spatial_brownian_corner_has_dimension_one() {
        let r = dim_double_points(&profile(&[2.0, 2.0, 2.0], CaseLabel::A));
        assert_eq!(r.dim_value, DimValue::Value(1.0));
        assert_eq!(r.critical_beta, CriticalBeta::Finite(2.0));
    }

    #[test]
    fn case_d_boundary_has_dimension_zero_but_exists() {
        let r = dim_double_points(&profile(&[1.5, 1.5, 1.5], CaseLabel::D));
        assert_eq!(r.dim_value, DimValue::Value(0.0));
        assert!(r.exists, "case d at alpha_1 = 3/2 is the nonempty boundary");
    }

    #[test]
    fn case_a_at_same_alphas_does_not_exist() {
        let r = dim_double_points(&profile(&[1.5, 1.5, 1.5], CaseLabel::A));
        assert_eq!(r.dim_value, DimValue::Value(0.0));
        assert!(!r.exists, "gamma = 0 in cases a-c means no double points");
    }

    #[test]
    fn gamma_zero_d2_boundary() {
        let r = dim_double_points(&profile(&[1.0, 1.0], CaseLabel::A));
        assert_eq!(r.raw_formula_value, Some(0.0));
        assert_eq!(r.dim_value, DimValue::Value(0.0));
        assert!(!r.exists);
        assert_eq!(r.critical_beta, CriticalBeta::Infinite);
    }

    #[test]
    fn negative_formula_means_empty() {
        let r = dim_double_points(&profile(&[1.1, 0.8], CaseLabel::A));
        assert!(r.raw_formula_value.unwrap() < 0.0);
        assert_eq!(r.dim_value, DimValue::Empty);
        assert!(!r.exists);
    }

    #[test]
    fn high_dim_is_always_empty() {
        for alphas in [vec![2.0, 2.0, 2.0, 2.0], vec![2.0, 1.8, 1.5, 1.2, 1.0]] {
            let p = profile(&alphas, CaseLabel::HighDim);
            let r = dim_double_points(&p);
            assert_eq!(r.dim_value, DimValue::Empty);
            assert!(!r.exists);
            assert_eq!(r.raw_formula_value, None);
            assert_eq!(r.critical_beta, CriticalBeta::Infinite);
            assert!(r.gamma <= 1e-12);
        }
    }

    #[test]
    fn critical_beta_values() {
        let c = critical_beta(&profile(&[2.0, 1.0], CaseLabel::A)).unwrap();
        assert_eq!(c, CriticalBeta::Finite(1.0));
        let c = critical_beta(&profile(&[2.0, 2.0, 2.0], CaseLabel::A)).unwrap();
        assert_eq!(c, CriticalBeta::Finite(2.0));
        let c = critical_beta(&profile(&[1.9, 1.6], CaseLabel::A)).unwrap();
        let want = 2.0 + 2.0 * 1.6 / 1.9 - 2.0 * 1.6; // the larger branch
        assert!((c.finite().unwrap() - want).abs() < 1e-12);
        assert!((want - 0.48421052631578955).abs() < 1e-14);
    }

    #[test]
    fn lemma_alpha_at_the_symmetric_corner_is_tight() {
        assert!(lemma_alpha_check(2.0, 2.0, 2.0).unwrap());
        assert!(lemma_alpha_check(2.0, 1.5, 1.2).unwrap());
        assert!(matches!(
            lemma_alpha_check(1.5, 1.6, 1.2),
            Err(ClosedFormError::DomainError)
        ));
    }

    #[test]
    fn duality_links_critical_beta_to_the_dimension_formula() {
        for alphas in [
            vec![2.0, 1.0],
            vec![1.9, 1.6],
            vec![1.8, 1.2],
            vec![2.0, 2.0],
        ] {
            let p = profile(&alphas, CaseLabel::A);
            let r = dim_double_points(&p);
            if let (DimValue::Value(v), CriticalBeta::Finite(b)) = (r.dim_value, r.critical_beta) {
                assert!((2.0 - b - v).abs() < 1e-12, "alphas {alphas:?}");
            }
        }
        for alphas in [vec![2.0, 2.0, 2.0], vec![2.0, 1.8, 1.6], vec![1.9, 1.9, 1.8]] {
            let p = profile(&alphas, CaseLabel::A);
            let r = dim_double_points(&p);
            if let (DimValue::Value(v), CriticalBeta::Finite(b)) = (r.dim_value, r.critical_beta) {
                assert!((3.0 - b - v).abs() < 1e-12, "alphas {alphas:?}");
            }
        }
    }
}
