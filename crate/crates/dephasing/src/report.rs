use dephasing_core::{
    choi_purity, extremality_certificate, AssistanceResult, Bound, OptimizerConfig,
    PhaseDampingChannel,
};
use serde::Serialize;

use crate::error::CliError;
use crate::experiments;

/// Which simplex `v_b` refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeKind {
    /// All `N` Bloch vectors, `r² = N`.
    Full,
    /// Best principal sub-simplex of size `r²`, `r² < N`.
    SubMatrix,
    /// All `N` Bloch vectors with `r² > N`; not a certificate.
    Informational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub n: usize,
    pub rank: usize,
    pub v_b: f64,
    pub v_b_kind: VolumeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subvolume_indices: Option<Vec<usize>>,
    pub purity: f64,
    /// Upper bound on the quantumness of assistance.
    pub q_a: f64,
    pub q_a_bound: &'static str,
    /// Lower bound on the entanglement of assistance, in bits.
    pub e_a_lower: f64,
    pub e_a_bound: &'static str,
    pub certified_non_ru: bool,
    pub volume_tolerance: f64,
    pub converged: bool,
    pub restart_values: Vec<f64>,
    pub decomposition_len: usize,
}

fn bound_name(b: Bound) -> &'static str {
    match b {
        Bound::Lower => "lower",
        Bound::Upper => "upper",
    }
}

pub fn analyze(
    d: &PhaseDampingChannel,
    cfg: &OptimizerConfig,
    volume_tol: f64,
) -> Result<MetricsReport, CliError> {
    let cert = extremality_certificate(d, volume_tol);
    let n = d.dim_n();
    let r2 = cert.rank * cert.rank;
    let v_b_kind = if r2 < n {
        VolumeKind::SubMatrix
    } else if r2 == n {
        VolumeKind::Full
    } else {
        VolumeKind::Informational
    };
    let result: AssistanceResult = experiments::assistance(d, cfg)?;
    Ok(MetricsReport {
        n,
        rank: cert.rank,
        v_b: cert.best_volume,
        v_b_kind,
        subvolume_indices: (v_b_kind == VolumeKind::SubMatrix)
            .then(|| cert.witness_indices.clone()),
        purity: choi_purity(d),
        q_a: result.q_a,
        q_a_bound: bound_name(result.q_a_bound),
        e_a_lower: result.e_a_lower,
        e_a_bound: bound_name(result.e_a_bound),
        certified_non_ru: cert.certified_non_ru,
        volume_tolerance: volume_tol,
        converged: result.converged,
        restart_values: result.restart_values,
        decomposition_len: result.decomposition_len,
    })
}
