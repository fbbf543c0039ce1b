//! Lattice series: shell sums and critical-exponent recovery.
//!
//! The two- and three-index series
//!
//! ```text
//! Σ 1/(k^β + n^β) · (k^{α1} + n^{α2})^{-γ}
//! Σ (k^{α1} + n^{α2} + m^{α3})^{-γ} / (k^β + n^β + m^β)
//! ```
//!
//! converge exactly for `β` above the closed-form critical exponent. The
//! shell decomposition groups lattice points by `max(indices) ∈ (2^m,
//! 2^{m+1}]` (the corner point with all indices 1 is folded into block 0),
//! so the block sums are the partial-sum increments `S(2^{m+1}) - S(2^m)`
//! exactly — the same terms, regrouped.

use super::classify::DyadicTrace;
use super::exec::{Executor, Parallelism};
use super::{bisect_on_verdicts, CriterionEstimate, NumLabError};

/// Default shell count for two-index sums (largest index `2^{12+1}`).
pub const DEFAULT_M_MAX_2D: u32 = 12;
/// Default shell count for three-index sums (largest index `2^{8+1}`).
pub const DEFAULT_M_MAX_3D: u32 = 8;

/// Exponents at or above this are nudged to `2 - 0.01` before series
/// estimation: at the boundary `alpha_j = 2` the shell sums carry an extra
/// logarithmic factor that a finite window cannot separate from the power,
/// and the nudge moves the critical exponent by under 0.02.
const BOUNDARY_ALPHA: f64 = 2.0 - 0.01;

#[derive(Debug, Clone, Copy)]
pub struct SeriesOptions {
    /// Highest dyadic shell index; blocks run `m = 0 ..= m_max`.
    pub m_max: u32,
    pub parallelism: Parallelism,
}

impl SeriesOptions {
    pub fn for_dim(d: usize) -> Self {
        SeriesOptions {
            m_max: if d == 3 {
                DEFAULT_M_MAX_3D
            } else {
                DEFAULT_M_MAX_2D
            },
            parallelism: Parallelism::default(),
        }
    }
}

/// One term of the two-index series.
pub fn series_term_2d(alpha: [f64; 2], gamma: f64, beta: f64, k: u64, n: u64) -> f64 {
    let (kf, nf) = (k as f64, n as f64);
    (kf.powf(beta) + nf.powf(beta)).recip()
        * (kf.powf(alpha[0]) + nf.powf(alpha[1])).powf(-gamma)
}

/// One term of the three-index series.
pub fn series_term_3d(alpha: [f64; 3], gamma: f64, beta: f64, k: u64, n: u64, m: u64) -> f64 {
    let (kf, nf, mf) = (k as f64, n as f64, m as f64);
    (kf.powf(beta) + nf.powf(beta) + mf.powf(beta)).recip()
        * (kf.powf(alpha[0]) + nf.powf(alpha[1]) + mf.powf(alpha[2])).powf(-gamma)
}

/// Dyadic shell sums of a non-negative term over the two-index lattice.
pub fn dyadic_series_sum_2d<F>(term: F, opts: &SeriesOptions) -> Result<DyadicTrace, NumLabError>
where
    F: Fn(u64, u64) -> f64 + Sync,
{
    let exec = Executor::new(opts.parallelism);
    let mut blocks = Vec::with_capacity(opts.m_max as usize + 1);
    for m in 0..=opts.m_max {
        let lo = if m == 0 { 0u64 } else { 1u64 << m };
        let hi = 1u64 << (m + 1);
        let block = exec.map_sum(hi as usize, |i| {
            let k = i as u64 + 1;
            let n_start = if k > lo { 1 } else { lo + 1 };
            let mut acc = 0.0;
            for n in n_start..=hi {
                acc += term(k, n);
            }
            acc
        });
        if !block.is_finite() {
            return Err(NumLabError::Overflow);
        }
        blocks.push(block);
    }
    Ok(DyadicTrace::classify(0.0, blocks))
}

/// Dyadic shell sums of a non-negative term over the three-index lattice.
pub fn dyadic_series_sum_3d<F>(term: F, opts: &SeriesOptions) -> Result<DyadicTrace, NumLabError>
where
    F: Fn(u64, u64, u64) -> f64 + Sync,
{
    let exec = Executor::new(opts.parallelism);
    let mut blocks = Vec::with_capacity(opts.m_max as usize + 1);
    for m in 0..=opts.m_max {
        let lo = if m == 0 { 0u64 } else { 1u64 << m };
        let hi = 1u64 << (m + 1);
        let block = exec.map_sum(hi as usize, |i| {
            let k = i as u64 + 1;
            let mut acc = 0.0;
            if k > lo {
                for n in 1..=hi {
                    for mm in 1..=hi {
                        acc += term(k, n, mm);
                    }
                }
            } else {
                for n in 1..=hi {
                    let mm_start = if n > lo { 1 } else { lo + 1 };
                    for mm in mm_start..=hi {
                        acc += term(k, n, mm);
                    }
                }
            }
            acc
        });
        if !block.is_finite() {
            return Err(NumLabError::Overflow);
        }
        blocks.push(block);
    }
    Ok(DyadicTrace::classify(0.0, blocks))
}

/// Recover the critical exponent of the series family for `alphas` by
/// bisecting the shell-sum verdict over `β ∈ [0, d]`.
///
/// Boundary exponents `alpha_j = 2` are nudged to `1.99` (see
/// [`BOUNDARY_ALPHA`]); inconclusive midpoints are retried once with one
/// more shell and, when the dead zone persists, narrow the search interval
/// without entering the certified bracket. The certified bracket can
/// therefore stay wider than `tol`; [`CriterionEstimate::point_estimate`]
/// carries the accuracy.
pub fn estimate_critical_beta_series(
    alphas: &[f64],
    tol: f64,
    opts: &SeriesOptions,
) -> Result<CriterionEstimate, NumLabError> {
    let d = alphas.len();
    if d != 2 && d != 3 {
        return Err(NumLabError::InvalidInput(format!(
            "series families exist for 2 or 3 indices, got {d}"
        )));
    }
    if !alphas.windows(2).all(|w| w[0] >= w[1]) {
        return Err(NumLabError::InvalidInput(
            "alphas must be sorted non-increasing".into(),
        ));
    }
    if alphas.iter().any(|&a| a <= 0.0 || a > 2.0 + 1e-12) {
        return Err(NumLabError::InvalidInput("alphas must lie in (0, 2]".into()));
    }
    if tol < 0.05 {
        return Err(NumLabError::InvalidInput(
            "tol below 0.05 exceeds what slope classification can certify".into(),
        ));
    }
    let gamma_raw = 2.0 - alphas.iter().map(|a| 1.0 / a).sum::<f64>();
    if gamma_raw <= 0.0 {
        return Err(NumLabError::InvalidInput(format!(
            "gamma = {gamma_raw} <= 0: the series diverges for every beta"
        )));
    }

    let working: Vec<f64> = alphas.iter().map(|&a| a.min(BOUNDARY_ALPHA)).collect();
    let gamma = 2.0 - working.iter().map(|a| 1.0 / a).sum::<f64>();
    let opts = *opts;

    let eval = |beta: f64, refined: bool| -> Result<DyadicTrace, NumLabError> {
        let run = SeriesOptions {
            m_max: opts.m_max + refined as u32,
            parallelism: opts.parallelism,
        };
        let hi = 1u64 << (run.m_max + 1);
        let pow_beta = pow_table(hi, beta);
        if d == 2 {
            let pa1 = pow_table(hi, working[0]);
            let pa2 = pow_table(hi, working[1]);
            dyadic_series_sum_2d(
                |k, n| {
                    (pow_beta[k as usize] + pow_beta[n as usize]).recip()
                        * (pa1[k as usize] + pa2[n as usize]).powf(-gamma)
                },
                &run,
            )
        } else {
            let pa1 = pow_table(hi, working[0]);
            let pa2 = pow_table(hi, working[1]);
            let pa3 = pow_table(hi, working[2]);
            dyadic_series_sum_3d(
                |k, n, m| {
                    (pow_beta[k as usize] + pow_beta[n as usize] + pow_beta[m as usize]).recip()
                        * (pa1[k as usize] + pa2[n as usize] + pa3[m as usize]).powf(-gamma)
                },
                &run,
            )
        }
    };

    bisect_on_verdicts(d as f64, tol, eval)
}

/// `t^e` for `t = 0 ..= n` (index 0 unused by the lattice sums).
fn pow_table(n: u64, e: f64) -> Vec<f64> {
    (0..=n).map(|t| (t as f64).powf(e)).collect()
}
