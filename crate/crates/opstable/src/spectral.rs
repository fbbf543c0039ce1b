//! Stability exponent validation and spectral structure analysis.
//!
//! The stability exponent of a symmetric operator stable Lévy process is a
//! real `d x d` matrix `B` whose eigenvalue real parts `a_i` all lie in
//! `[1/2, ∞)`. Everything downstream consumes only the spectral data
//! extracted here: the distinct real parts with their multiplicities, the
//! per-coordinate indices `alpha_j = 1/a_l` (sorted non-increasing, each in
//! `(0, 2]`), and a structure case label that records whether a repeated real
//! part carries a nilpotent Jordan block or a complex conjugate pair — those
//! are the cases in which the Lévy exponent picks up logarithmic corrections.
//!
//! Eigenvalues are computed by closed-form quadratic (`d = 2`) and
//! trigonometric-cubic (`d = 3`) formulas, polished with a complex Newton
//! step on the characteristic polynomial; for `d >= 4` a dense solver is
//! used (all double-point answers there are "empty", only the report needs
//! the spectrum).

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative base for all spectral tolerances.
pub const EIG_TOL_BASE: f64 = 1e-8;

/// Gap factor below which eigenvalue clustering is reported as ambiguous
/// rather than guessed.
const DEGENERATE_GAP_FACTOR: f64 = 4.0;

const MIN_REAL_PART: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },
    #[error("matrix entry ({row},{col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("d = 1 is unsupported; the double-point analysis needs d >= 2")]
    DimensionOne,
    #[error(
        "invalid spectrum: eigenvalue real part {real_part} < 1/2 (some alpha_j would exceed 2)"
    )]
    InvalidSpectrum { real_part: f64 },
    #[error(
        "degenerate spectrum: eigenvalue real-part gap {gap:e} sits at the clustering \
         tolerance {tol:e}; classification would be a guess"
    )]
    DegenerateSpectrum { gap: f64, tol: f64 },
    #[error("alpha values must be sorted non-increasing and lie in (0, 2]")]
    InvalidAlphas,
    #[error("case label {label:?} is inconsistent with d = {dim} and the given alphas")]
    InconsistentCase { label: CaseLabel, dim: usize },
}

/// Validated stability exponent matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityExponent {
    dim: usize,
    /// Row-major `dim x dim` entries.
    entries: Vec<f64>,
}

impl StabilityExponent {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Max row sum norm of the matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.entry(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Absolute tolerance used for eigenvalue comparisons on this matrix.
    pub fn eig_tol(&self) -> f64 {
        EIG_TOL_BASE * (1.0 + self.norm_inf())
    }
}

/// What a group of eigenvalues sharing one real part looks like structurally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockKind {
    RealDiagonalizable,
    NilpotentJordan,
    ComplexPair,
}

/// One group of eigenvalues with a common real part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBlock {
    /// Common real part `a_i` of the eigenvalues in this group.
    pub real_part: f64,
    /// Number of eigenvalues (with algebraic multiplicity) in the group.
    pub multiplicity: usize,
    pub kind: BlockKind,
}

/// Structure case of the exponent; selects the log-corrected form of the
/// Lévy exponent comparability model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    HighDim,
}

/// Spectral data of a validated exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub dim: usize,
    /// Groups ordered by real part ascending.
    pub blocks: Vec<SpectralBlock>,
    /// `alpha_j = 1/a_l`, sorted non-increasing, each in `(0, 2]`.
    pub alphas: Vec<f64>,
    pub case_label: CaseLabel,
}

impl SpectralProfile {
    /// Deficiency `gamma = 2 - sum_j 1/alpha_j`; positive `gamma` is the
    /// existence threshold in the diagonalizable cases.
    pub fn gamma(&self) -> f64 {
        2.0 - self.alphas.iter().map(|a| 1.0 / a).sum::<f64>()
    }

    /// Build a profile directly from an alpha tuple and a case label, for
    /// callers that know the indices but not the matrix. The case label must
    /// be consistent with the tuple (cases b/c/d require the corresponding
    /// equal-alpha pattern).
    pub fn from_alphas(alphas: &[f64], case_label: CaseLabel) -> Result<Self, SpectralError> {
        let dim = alphas.len();
        if dim < 2 {
            return Err(SpectralError::DimensionOne);
        }
        let sorted = alphas.windows(2).all(|w| w[0] >= w[1] - 1e-12);
        let in_range = alphas.iter().all(|&a| a > 0.0 && a <= 2.0 + 1e-12);
        if !sorted || !in_range {
            return Err(SpectralError::InvalidAlphas);
        }
        let eq = |x: f64, y: f64| (x - y).abs() <= 1e-9;
        let consistent = match (dim, case_label) {
            (2, CaseLabel::A) => true,
            (2, CaseLabel::B) => eq(alphas[0], alphas[1]),
            (3, CaseLabel::A) => true,
            (3, CaseLabel::B) => eq(alphas[0], alphas[1]),
            (3, CaseLabel::C) => eq(alphas[1], alphas[2]),
            (3, CaseLabel::D) => eq(alphas[0], alphas[1]) && eq(alphas[1], alphas[2]),
            (d, CaseLabel::HighDim) => d >= 4,
            _ => false,
        };
        if !consistent {
            return Err(SpectralError::InconsistentCase {
                label: case_label,
                dim,
            });
        }

        // Group equal alphas into blocks, ordered by real part ascending
        // (i.e. alpha descending groups, reversed).
        let mut groups: Vec<(f64, usize)> = Vec::new();
        for &a in alphas {
            match groups.last_mut() {
                Some((ga, m)) if eq(*ga, a) => *m += 1,
                _ => groups.push((a, 1)),
            }
        }
        let defective_group = match (dim, case_label) {
            (2, CaseLabel::B) | (3, CaseLabel::B) | (3, CaseLabel::D) => Some(0usize),
            (3, CaseLabel::C) => Some(groups.len() - 1),
            _ => None,
        };
        // alphas descending means real parts 1/alpha ascending: group order
        // is already block order.
        let blocks: Vec<SpectralBlock> = groups
            .iter()
            .enumerate()
            .map(|(gi, &(a, m))| SpectralBlock {
                real_part: 1.0 / a,
                multiplicity: m,
                kind: if defective_group == Some(gi) {
                    BlockKind::NilpotentJordan
                } else {
                    BlockKind::RealDiagonalizable
                },
            })
            .collect();
        Ok(SpectralProfile {
            dim,
            blocks,
            alphas: alphas.to_vec(),
            case_label,
        })
    }
}

/// Validate a raw matrix as a stability exponent.
///
/// Rejects non-square and non-finite input, `d = 1`, and any matrix with an
/// eigenvalue real part below `1/2` (within tolerance), since such a matrix
/// would produce an index `alpha_j > 2`.
pub fn validate_exponent(matrix: &[Vec<f64>]) -> Result<StabilityExponent, SpectralError> {
    let rows = matrix.len();
    if rows == 0 {
        return Err(SpectralError::NonSquare {
            rows: 0,
            row: 0,
            cols: 0,
        });
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != rows {
            return Err(SpectralError::NonSquare {
                rows,
                row: i,
                cols: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(SpectralError::NonFinite { row: i, col: j });
            }
        }
    }
    if rows == 1 {
        return Err(SpectralError::DimensionOne);
    }
    let exponent = StabilityExponent {
        dim: rows,
        entries: matrix.iter().flatten().copied().collect(),
    };
    let tol = exponent.eig_tol();
    let eigs = eigenvalues(&exponent);
    for e in &eigs {
        if e.re < MIN_REAL_PART - tol {
            return Err(SpectralError::InvalidSpectrum { real_part: e.re });
        }
    }
    Ok(exponent)
}

/// Extract blocks, alphas and the case label from a validated exponent.
///
/// Eigenvalue real parts closer than the relative tolerance are merged into
/// one block; a gap that lands in the ambiguous band just above the merge
/// tolerance is reported as [`SpectralError::DegenerateSpectrum`].
pub fn analyze_exponent(b: &StabilityExponent) -> Result<SpectralProfile, SpectralError> {
    let tol = b.eig_tol();
    let mut eigs = eigenvalues(b);
    eigs.sort_by(|x, y| x.re.total_cmp(&y.re));

    // Cluster by real part (single linkage on the sorted list).
    let mut clusters: Vec<Vec<Complex<f64>>> = Vec::new();
    for e in eigs {
        match clusters.last_mut() {
            Some(c) if (e.re - c.last().unwrap().re).abs() <= tol => c.push(e),
            _ => clusters.push(vec![e]),
        }
    }
    // Chained merges can stretch a cluster past the tolerance, and gaps just
    // above it are indistinguishable from roundoff. Both are reported.
    for c in &clusters {
        let spread = c.last().unwrap().re - c[0].re;
        if spread > tol {
            return Err(SpectralError::DegenerateSpectrum { gap: spread, tol });
        }
    }
    for w in clusters.windows(2) {
        let gap = w[1][0].re - w[0].last().unwrap().re;
        if gap <= DEGENERATE_GAP_FACTOR * tol {
            return Err(SpectralError::DegenerateSpectrum { gap, tol });
        }
    }

    let d = b.dim();
    let mut blocks = Vec::with_capacity(clusters.len());
    for c in &clusters {
        let mean_re = c.iter().map(|e| e.re).sum::<f64>() / c.len() as f64;
        let has_complex = c.iter().any(|e| e.im.abs() > tol);
        let kind = if has_complex {
            BlockKind::ComplexPair
        } else if c.len() == 1 {
            BlockKind::RealDiagonalizable
        } else if rank_with_tol(b, mean_re, tol) > d - c.len() {
            BlockKind::NilpotentJordan
        } else {
            BlockKind::RealDiagonalizable
        };
        blocks.push(SpectralBlock {
            real_part: mean_re,
            multiplicity: c.len(),
            kind,
        });
    }

    // Blocks ascend in real part, so 1/a descends: alpha order falls out.
    let mut alphas = Vec::with_capacity(d);
    for blk in &blocks {
        for _ in 0..blk.multiplicity {
            alphas.push((1.0 / blk.real_part).min(2.0));
        }
    }

    let case_label = classify_case(b, &blocks, tol);
    Ok(SpectralProfile {
        dim: d,
        blocks,
        alphas,
        case_label,
    })
}

/// Eigenvalues of a validated exponent, unsorted, as `re + i*im`.
pub fn eigenvalues(b: &StabilityExponent) -> Vec<Complex<f64>> {
    match b.dim() {
        2 => eigen2(b).to_vec(),
        3 => eigen3(b).to_vec(),
        _ => {
            let m = DMatrix::from_row_slice(b.dim(), b.dim(), b.entries());
            m.complex_eigenvalues().iter().copied().collect()
        }
    }
}

fn eigen2(b: &StabilityExponent) -> [Complex<f64>; 2] {
    let (b11, b12, b21, b22) = (b.entry(0, 0), b.entry(0, 1), b.entry(1, 0), b.entry(1, 1));
    let mean = 0.5 * (b11 + b22);
    let h = 0.5 * (b11 - b22);
    let disc = h * h + b12 * b21;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [Complex::new(mean + s, 0.0), Complex::new(mean - s, 0.0)]
    } else {
        let s = (-disc).sqrt();
        [Complex::new(mean, s), Complex::new(mean, -s)]
    }
}

fn eigen3(b: &StabilityExponent) -> [Complex<f64>; 3] {
    // Characteristic polynomial x^3 - c2 x^2 + c1 x - c0.
    let e = |i, j| b.entry(i, j);
    let c2 = e(0, 0) + e(1, 1) + e(2, 2);
    let c1 = e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0) + e(0, 0) * e(2, 2) - e(0, 2) * e(2, 0)
        + e(1, 1) * e(2, 2)
        - e(1, 2) * e(2, 1);
    let c0 = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
        - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));

    // Depressed cubic t^3 + p t + q with x = t + c2/3.
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = shift * shift * shift - c2 * shift * shift + c1 * shift - c0;
    let scale = 1.0 + c2.abs() + c1.abs() + c0.abs();
    let tiny = 1e-14 * scale;

    if p.abs() < tiny && q.abs() < tiny {
        return [Complex::new(shift, 0.0); 3];
    }
    let provisional: [f64; 3] = {
        let disc = -4.0 * p * p * p - 27.0 * q * q;
        if disc >= 0.0 {
            // Three real roots; trigonometric form (p < 0 here).
            let r = (-p / 3.0).sqrt();
            let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
            let phi = arg.acos();
            let mut out = [0.0; 3];
            for (k, slot) in out.iter_mut().enumerate() {
                *slot = 2.0 * r * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos();
            }
            out
        } else {
            // One real root via the stable Cardano branch.
            let half_q = q / 2.0;
            let sq = (half_q * half_q + p * p * p / 27.0).sqrt();
            let u = if half_q >= 0.0 {
                -(half_q + sq).cbrt()
            } else {
                (-half_q + sq).cbrt()
            };
            let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
            let t1 = u + v;
            [t1, t1, t1]
        }
    };

    // Pick the best-conditioned real root, polish it on the undepressed
    // polynomial, and recover the other two from the deflated quadratic via
    // Vieta (sum and product of the remaining pair). This keeps a repeated
    // pair's mean exact instead of sqrt(eps)-perturbed.
    let poly = |x: f64| ((x - c2) * x + c1) * x - c0;
    let dpoly = |x: f64| (3.0 * x - 2.0 * c2) * x + c1;
    let mut best = provisional[0] + shift;
    let mut best_dp = 0.0;
    for t in provisional {
        let x = t + shift;
        let dp = dpoly(x).abs();
        if dp >= best_dp {
            best = x;
            best_dp = dp;
        }
    }
    if best_dp > 1e-9 * scale {
        for _ in 0..3 {
            let dp = dpoly(best);
            if dp.abs() < 1e-12 * scale {
                break;
            }
            best -= poly(best) / dp;
        }
    }
    let pair_sum = c2 - best;
    // The validated spectrum keeps eigenvalues away from zero, but guard the
    // deflation anyway.
    let pair_prod = if best.abs() > 1e-12 * scale {
        c0 / best
    } else {
        c1 - best * pair_sum
    };
    let mut disc2 = pair_sum * pair_sum - 4.0 * pair_prod;
    if disc2.abs() <= 64.0 * f64::EPSILON * (pair_sum * pair_sum + 4.0 * pair_prod.abs()) {
        disc2 = 0.0; // exact double root within roundoff
    }
    if disc2 >= 0.0 {
        let s = disc2.sqrt();
        [
            Complex::new(best, 0.0),
            Complex::new(0.5 * (pair_sum + s), 0.0),
            Complex::new(0.5 * (pair_sum - s), 0.0),
        ]
    } else {
        let im = (-disc2).sqrt() / 2.0;
        [
            Complex::new(best, 0.0),
            Complex::new(0.5 * pair_sum, im),
            Complex::new(0.5 * pair_sum, -im),
        ]
    }
}

/// Numerical rank of `B - a I` with minor thresholds scaled by matrix size.
fn rank_with_tol(b: &StabilityExponent, a: f64, tol: f64) -> usize {
    let d = b.dim();
    let m: Vec<f64> = (0..d * d)
        .map(|idx| {
            let (i, j) = (idx / d, idx % d);
            b.entry(i, j) - if i == j { a } else { 0.0 }
        })
        .collect();
    let scale = 1.0 + b.norm_inf();
    if d <= 3 {
        let max_entry = m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if max_entry <= tol {
            return 0;
        }
        if d == 2 {
            return 1; // determinant vanishes since a is an eigenvalue
        }
        let mut max_minor2 = 0.0f64;
        for r0 in 0..3 {
            for r1 in (r0 + 1)..3 {
                for c0 in 0..3 {
                    for c1 in (c0 + 1)..3 {
                        let det = m[r0 * 3 + c0] * m[r1 * 3 + c1] - m[r0 * 3 + c1] * m[r1 * 3 + c0];
                        max_minor2 = max_minor2.max(det.abs());
                    }
                }
            }
        }
        if max_minor2 > EIG_TOL_BASE * scale * scale {
            2
        } else {
            1
        }
    } else {
        let mat = DMatrix::from_row_slice(d, d, &m);
        mat.svd(false, false)
            .singular_values
            .iter()
            .filter(|&&s| s > tol * (d as f64).sqrt())
            .count()
    }
}

fn classify_case(b: &StabilityExponent, blocks: &[SpectralBlock], tol: f64) -> CaseLabel {
    let d = b.dim();
    if d >= 4 {
        return CaseLabel::HighDim;
    }
    let defective =
        |blk: &SpectralBlock| blk.kind != BlockKind::RealDiagonalizable && blk.multiplicity >= 2;
    match d {
        2 => match blocks.len() {
            2 => CaseLabel::A,
            _ => {
                if defective(&blocks[0]) {
                    CaseLabel::B
                } else {
                    CaseLabel::A
                }
            }
        },
        3 => match blocks.len() {
            3 => CaseLabel::A,
            2 => {
                let (pos, pair) = blocks
                    .iter()
                    .enumerate()
                    .find(|(_, blk)| blk.multiplicity == 2)
                    .expect("one block has multiplicity 2");
                if !defective(pair) {
                    CaseLabel::A
                } else if pos == 0 {
                    CaseLabel::B
                } else {
                    CaseLabel::C
                }
            }
            _ => {
                let blk = &blocks[0];
                match blk.kind {
                    BlockKind::RealDiagonalizable => CaseLabel::A,
                    // A complex pair sharing its real part with a real
                    // eigenvalue carries one log-corrected coordinate, the
                    // same shape as case b.
                    BlockKind::ComplexPair => CaseLabel::B,
                    BlockKind::NilpotentJordan => {
                        if rank_with_tol(b, blk.real_part, tol) == 2 {
                            CaseLabel::D
                        } else {
                            // Jordan structure 2+1 on a triple eigenvalue:
                            // a single log-corrected coordinate.
                            CaseLabel::B
                        }
                    }
                }
            }
        },
        _ => unreachable!("d = 1 rejected at validation"),
    }
}
