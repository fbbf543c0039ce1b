//! Double points of symmetric operator stable Lévy processes.
//!
//! An operator stable Lévy process in `R^d` is governed by a stability
//! exponent matrix `B`; the real parts `a_i` of its eigenvalues determine the
//! directional indices `alpha_j = 1/a_l`, and those indices determine whether
//! the path ever visits a point twice and, when it does, the Hausdorff
//! dimension of the set `M_2` of double points.
//!
//! The crate has four layers:
//!
//! * [`spectral`] — validate a stability exponent and extract its spectral
//!   data (eigenvalue real parts, block multiplicities, sorted `alpha`s, and
//!   the structure case label `a`..`d` that selects the log-corrected form of
//!   the Lévy exponent).
//! * [`psi`] — evaluable comparability models `Ψ̂(ξ)` of the Lévy exponent
//!   for each structure case.
//! * [`closedform`] — the closed-form answers: dimension of `M_2`, the
//!   critical exponents of the anisotropic integrals `I_β` / `J_β`, and
//!   existence verdicts.
//! * [`numlab`] — a numerical convergence laboratory (dyadic block sums,
//!   truncated integral growth, quasi-Monte Carlo criterion integrals,
//!   critical-exponent bisection) that independently cross-checks the closed
//!   forms.
//!
//! Lattice sums, quadrature grids and sample batches are data parallel; with
//! the default `parallel` feature they run on rayon. Results are bit-identical
//! for every thread width: rows are summed in a fixed order and combined with
//! a fixed pairwise reduction tree.

pub mod closedform;
pub mod numlab;
pub mod psi;
pub mod spectral;

pub use closedform::{
    critical_beta, dim_double_points, exists_double_points, lemma_alpha_check, CriticalBeta,
    DimValue, DimensionReport,
};
pub use psi::{eval_psi_hat, psi_model_for, PsiModel, PsiTerm};
pub use spectral::{
    analyze_exponent, validate_exponent, BlockKind, CaseLabel, SpectralBlock, SpectralProfile,
    StabilityExponent,
};
