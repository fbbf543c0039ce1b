//! Report assembly and rendering.

use opstable::closedform::{self, CriticalBeta, DimValue, DimensionReport};
use opstable::numlab::{
    estimate_critical_beta_series, existence_integral_estimate, mk_criterion_estimate,
    CriterionEstimate, DyadicTrace, NumLabError, Parallelism, QmcOptions, RadiiSchedule,
    SeriesOptions, Verdict,
};
use opstable::psi::{psi_model_for, PsiModel};
use opstable::spectral::SpectralProfile;
use serde::{Deserialize, Serialize};

/// Options echoed into the provenance block. Thread width is deliberately
/// absent: results are bit-identical for every width, and the report must be
/// too.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EchoedOptions {
    pub tol: f64,
    pub m_max: u32,
    pub radii_first: f64,
    pub radii_doublings: u32,
    pub qmc_samples_per_box: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub options: EchoedOptions,
}

/// Numerical cross-checks attached by `--verify`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verification {
    pub psi_model: PsiModel,
    /// Bisection estimate of the critical exponent (absent when `gamma <= 0`,
    /// where the closed form is infinite).
    pub critical_beta_estimate: Option<CriterionEstimate>,
    pub critical_beta_point: Option<f64>,
    /// |point estimate - closed form|.
    pub critical_beta_delta: Option<f64>,
    pub existence_trace: DyadicTrace,
    /// Whether the existence-integral verdict matches the closed-form
    /// existence verdict (`None` when the trace is inconclusive).
    pub existence_agrees: Option<bool>,
    /// Double-point criterion integral via quasi-Monte Carlo.
    pub criterion_trace: DyadicTrace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub profile: SpectralProfile,
    pub dimension: DimensionReport,
    pub verification: Option<Verification>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub tol: f64,
    pub m_max: Option<u32>,
    pub radii: RadiiSchedule,
    pub threads: usize,
    pub seed: u64,
    pub qmc_samples_per_box: u32,
}

impl RunOptions {
    pub fn parallelism(&self) -> Parallelism {
        if self.threads == 0 {
            Parallelism::default()
        } else {
            Parallelism::new(self.threads)
        }
    }
}

pub fn build_report(
    profile: SpectralProfile,
    verify: bool,
    opts: &RunOptions,
) -> Result<Report, NumLabError> {
    let dimension = closedform::dim_double_points(&profile);
    let m_max = opts
        .m_max
        .unwrap_or(SeriesOptions::for_dim(profile.dim).m_max);
    let verification = if verify {
        Some(run_verification(&profile, &dimension, m_max, opts)?)
    } else {
        None
    };
    Ok(Report {
        profile,
        dimension,
        verification,
        provenance: Provenance {
            tool: "opstable".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: opts.seed,
            options: EchoedOptions {
                tol: opts.tol,
                m_max,
                radii_first: opts.radii.first(),
                radii_doublings: opts.radii.doublings(),
                qmc_samples_per_box: opts.qmc_samples_per_box,
            },
        },
    })
}

fn run_verification(
    profile: &SpectralProfile,
    dimension: &DimensionReport,
    m_max: u32,
    opts: &RunOptions,
) -> Result<Verification, NumLabError> {
    let model = psi_model_for(profile).map_err(|e| NumLabError::InvalidInput(e.to_string()))?;
    let series_opts = SeriesOptions {
        m_max,
        parallelism: opts.parallelism(),
    };
    let gamma_positive = matches!(dimension.critical_beta, CriticalBeta::Finite(_));
    let critical_beta_estimate = if gamma_positive {
        Some(estimate_critical_beta_series(
            &profile.alphas,
            opts.tol,
            &series_opts,
        )?)
    } else {
        None
    };
    let critical_beta_point = critical_beta_estimate.as_ref().map(|e| e.point_estimate());
    let critical_beta_delta = match (critical_beta_point, dimension.critical_beta) {
        (Some(p), CriticalBeta::Finite(c)) => Some((p - c).abs()),
        _ => None,
    };

    let existence_trace = existence_integral_estimate(&model, &opts.radii, opts.parallelism())?;
    let existence_agrees = match existence_trace.verdict {
        Verdict::Convergent => Some(dimension.exists),
        Verdict::Divergent => Some(!dimension.exists),
        Verdict::Inconclusive => None,
    };

    let qmc = QmcOptions {
        seed: opts.seed,
        samples_per_box: opts.qmc_samples_per_box,
        parallelism: opts.parallelism(),
    };
    let criterion_trace = mk_criterion_estimate(&model, 2, &opts.radii, &qmc)?;

    Ok(Verification {
        psi_model: model,
        critical_beta_estimate,
        critical_beta_point,
        critical_beta_delta,
        existence_trace,
        existence_agrees,
        criterion_trace,
    })
}

pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    let p = &report.profile;
    out.push_str(&format!("d = {}, case {:?}\n", p.dim, p.case_label));
    out.push_str(&format!(
        "alphas = [{}]\n",
        p.alphas
            .iter()
            .map(|a| format!("{a:.6}"))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let d = &report.dimension;
    out.push_str(&format!("gamma = {:.6}\n", d.gamma));
    match d.dim_value {
        DimValue::Value(v) => out.push_str(&format!("dim M2 = {v:.6}\n")),
        DimValue::Empty => out.push_str("dim M2 = empty (M2 = ∅)\n"),
    }
    out.push_str(&format!("double points exist: {}\n", d.exists));
    match d.critical_beta {
        CriticalBeta::Finite(b) => out.push_str(&format!("critical beta = {b:.6}\n")),
        CriticalBeta::Infinite => out.push_str("critical beta = infinite\n"),
    }
    if let Some(v) = &report.verification {
        if let (Some(pt), Some(delta)) = (v.critical_beta_point, v.critical_beta_delta) {
            out.push_str(&format!(
                "numeric critical beta = {pt:.4} (|delta| = {delta:.4})\n"
            ));
        }
        out.push_str(&format!(
            "existence integral: {:?} (agrees: {})\n",
            v.existence_trace.verdict,
            v.existence_agrees
                .map(|b| b.to_string())
                .unwrap_or_else(|| "inconclusive".into())
        ));
        out.push_str(&format!(
            "criterion integral (k=2): {:?}\n",
            v.criterion_trace.verdict
        ));
    }
    out
}
