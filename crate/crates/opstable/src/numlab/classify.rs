//! Convergence classification of dyadic block sums.
//!
//! A truncated series or integral is summarized by its dyadic block sums
//! `B_m = S(2^{m+1}) - S(2^m)`. For the power-law families handled here the
//! blocks behave like `B_m ~ poly(m) * 2^{m sigma}` with `sigma < 0` exactly
//! when the quantity is finite, `sigma > 0` when it diverges at a power
//! rate, and `sigma = 0` for logarithmic divergence.
//!
//! The classifier fits the slope of `log2 B_m` against `m` over the last
//! `W = 4` blocks. The raw least-squares slope of that window carries a
//! systematic `O(1/m)` contribution from the polynomial factor, so the slope
//! model `s_m = sigma + c/m` is fitted to the local slopes and the verdict is
//! taken on the asymptotic component `sigma`: convergent when
//! `sigma <= -0.2`, divergent when `sigma >= -0.05` (log-divergent families
//! land here with `sigma ~ 0`), and otherwise inconclusive — the dead zone
//! is surfaced, never silently resolved.

use serde::{Deserialize, Serialize};
use std::io::Write;

/// Number of trailing dyadic blocks the slope fit uses.
pub const SLOPE_WINDOW: usize = 4;
/// Verdict is Convergent when the fitted asymptotic slope is at most this.
pub const CONVERGENT_SLOPE: f64 = -0.2;
/// Verdict is Divergent when the fitted asymptotic slope is at least this.
pub const DIVERGENT_SLOPE: f64 = -0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Convergent,
    Divergent,
    Inconclusive,
}

/// Dyadic partial-sum increments with their fitted decay slope and verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicTrace {
    /// Dyadic index of `block_sums[0]` (so block `i` covers the shell at
    /// scale `2^{m_start + i}`).
    pub m_start: f64,
    pub block_sums: Vec<f64>,
    /// Fitted asymptotic slope of `log2 B_m` per unit `m`; `None` when the
    /// trailing window contains non-positive blocks.
    pub slope: Option<f64>,
    pub verdict: Verdict,
}

impl DyadicTrace {
    /// Classify a block-sum sequence indexed dyadically from `m_start`.
    pub fn classify(m_start: f64, block_sums: Vec<f64>) -> Self {
        let (slope, verdict) = classify_blocks(m_start, &block_sums);
        DyadicTrace {
            m_start,
            block_sums,
            slope,
            verdict,
        }
    }

    /// Build with an externally supplied slope and rule (the per-`n` series
    /// of the full-Jordan existence analysis uses a log-log fit instead).
    pub fn with_verdict(
        m_start: f64,
        block_sums: Vec<f64>,
        slope: Option<f64>,
        verdict: Verdict,
    ) -> Self {
        DyadicTrace {
            m_start,
            block_sums,
            slope,
            verdict,
        }
    }

    pub fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.block_sums
            .iter()
            .map(|b| {
                acc += b;
                acc
            })
            .collect()
    }

    /// Write the trace as CSV with columns `m, block_sum, cumulative`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "m,block_sum,cumulative")?;
        let mut acc = 0.0;
        for (i, b) in self.block_sums.iter().enumerate() {
            acc += b;
            writeln!(w, "{},{},{}", self.m_start + i as f64, b, acc)?;
        }
        Ok(())
    }
}

fn classify_blocks(m_start: f64, blocks: &[f64]) -> (Option<f64>, Verdict) {
    let n = blocks.len();
    if n < 2 {
        return (None, Verdict::Inconclusive);
    }
    // A tail that has underflowed to zero decayed faster than anything the
    // slope fit could certify.
    let tail = &blocks[n.saturating_sub(2)..];
    if tail.iter().all(|&b| b <= 0.0) && blocks.iter().any(|&b| b > 0.0) {
        return (None, Verdict::Convergent);
    }
    let window = SLOPE_WINDOW.min(n - 1);
    // Local slopes over the last `window` adjacent pairs.
    let mut pts = Vec::with_capacity(window);
    for i in (n - window)..n {
        let (b0, b1) = (blocks[i - 1], blocks[i]);
        if b0 <= 0.0 || b1 <= 0.0 || !b0.is_finite() || !b1.is_finite() {
            return (None, Verdict::Inconclusive);
        }
        let s = (b1 / b0).log2();
        let m_mid = m_start + i as f64 - 0.5;
        pts.push((1.0 / m_mid, s));
    }
    let sigma = match pts.len() {
        1 => pts[0].1,
        _ => intercept(&pts),
    };
    let verdict = if sigma <= CONVERGENT_SLOPE {
        Verdict::Convergent
    } else if sigma >= DIVERGENT_SLOPE {
        Verdict::Divergent
    } else {
        Verdict::Inconclusive
    };
    (Some(sigma), verdict)
}

/// Least-squares intercept of `y` against `x` at `x = 0`.
fn intercept(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return sy / n;
    }
    let slope = (n * sxy - sx * sy) / denom;
    (sy - slope * sx) / n
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
