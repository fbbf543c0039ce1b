//! Series-laboratory integration: critical-exponent recovery against the
//! closed forms, verdict monotonicity, comparability robustness, and the
//! distortion-shift sandwich.

use opstable::closedform::critical_beta_formula;
use opstable::numlab::{
    dyadic_series_sum_2d, estimate_critical_beta_series, series_term_2d, Parallelism,
    SeriesOptions, Verdict,
};

fn opts(m_max: u32) -> SeriesOptions {
    SeriesOptions {
        m_max,
        parallelism: Parallelism::default(),
    }
}

/// Inflated-bracket containment plus point-estimate agreement, the two
/// readings of "brackets the value within the tolerance".
fn assert_recovers(alphas: &[f64], target: f64, tol: f64, m_max: u32) {
    let est = estimate_critical_beta_series(alphas, tol, &opts(m_max)).unwrap();
    assert_eq!(est.trace_at_lo.verdict, Verdict::Divergent);
    assert_eq!(est.trace_at_hi.verdict, Verdict::Convergent);
    assert!(
        est.beta_lo - tol <= target && target <= est.beta_hi + tol,
        "alphas {alphas:?}: bracket [{}, {}] misses {target}",
        est.beta_lo,
        est.beta_hi
    );
    let point = est.point_estimate();
    assert!(
        (point - target).abs() <= tol,
        "alphas {alphas:?}: point {point} vs {target}"
    );
}

#[test]
fn recovers_the_analytic_critical_exponent_2d() {
    assert_recovers(&[2.0, 1.0], 1.0, 0.1, 12);
}

#[test]
fn recovers_the_closed_form_oracle_2d() {
    let target = critical_beta_formula(&[1.9, 1.6]).unwrap();
    assert!((target - 0.48421052631578955).abs() < 1e-14);
    assert_recovers(&[1.9, 1.6], target, 0.1, 12);
}

#[test]
fn recovers_the_analytic_critical_exponent_3d() {
    assert_recovers(&[2.0, 2.0, 2.0], 2.0, 0.1, 8);
}

#[test]
fn verdicts_are_monotone_in_beta() {
    // Once convergent, larger beta stays convergent (series terms are
    // pointwise non-increasing in beta).
    let alphas = [1.9f64, 1.6];
    let gamma = 2.0 - 1.0 / alphas[0] - 1.0 / alphas[1];
    let run = opts(10);
    let mut seen_convergent = false;
    for beta in [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0] {
        let t = dyadic_series_sum_2d(
            |k, n| series_term_2d(alphas, gamma, beta, k, n),
            &run,
        )
        .unwrap();
        match t.verdict {
            Verdict::Convergent => seen_convergent = true,
            Verdict::Divergent | Verdict::Inconclusive => {
                assert!(
                    !seen_convergent,
                    "verdict left the convergent zone at beta = {beta}"
                );
            }
        }
    }
    assert!(seen_convergent);
}

#[test]
fn bounded_rescaling_never_changes_a_verdict() {
    let alphas = [1.8f64, 1.2];
    let gamma = 2.0 - 1.0 / alphas[0] - 1.0 / alphas[1];
    let run = opts(10);
    for beta in [0.4, 0.9333, 1.4] {
        let base = dyadic_series_sum_2d(
            |k, n| series_term_2d(alphas, gamma, beta, k, n),
            &run,
        )
        .unwrap();
        for scale in [0.25, 0.5, 2.0, 4.0] {
            let scaled = dyadic_series_sum_2d(
                |k, n| scale * series_term_2d(alphas, gamma, beta, k, n),
                &run,
            )
            .unwrap();
            assert_eq!(base.verdict, scaled.verdict, "beta {beta} scale {scale}");
        }
    }
}

#[test]
fn distortion_shift_sandwiches_the_critical_exponent() {
    // Estimates on the (1-eps)-shifted alphas sit above the unshifted
    // estimate and drift toward the closed form as eps shrinks.
    let alphas = [1.9f64, 1.6];
    let run = opts(11);
    let closed = critical_beta_formula(&alphas).unwrap();
    let mut points = Vec::new();
    for eps in [0.02, 0.01, 0.005] {
        let shifted: Vec<f64> = alphas.iter().map(|a| a * (1.0 - eps)).collect();
        let est = estimate_critical_beta_series(&shifted, 0.1, &run).unwrap();
        let point = est.point_estimate();
        let shifted_closed = critical_beta_formula(&shifted).unwrap();
        assert!(
            (point - shifted_closed).abs() <= 0.1,
            "eps {eps}: {point} vs {shifted_closed}"
        );
        assert!(shifted_closed > closed);
        points.push((eps, point, shifted_closed));
    }
    // Monotone trend: larger distortion pushes the critical exponent higher.
    assert!(points[0].1 >= points[1].1 - 0.02, "{points:?}");
    assert!(points[1].1 >= points[2].1 - 0.02, "{points:?}");
    // And the closed-form targets themselves decrease toward the limit.
    assert!(points[0].2 > points[1].2 && points[1].2 > points[2].2);
}

#[test]
fn no_bracket_when_the_series_always_diverges_is_an_input_error() {
    // gamma <= 0 contradicts the search precondition.
    let err = estimate_critical_beta_series(&[1.0, 1.0], 0.1, &opts(8)).unwrap_err();
    assert!(err.to_string().contains("gamma"));
}
