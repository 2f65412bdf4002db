//! Data generation behind the CLI commands, parallelized with rayon.
//!
//! Samples, grid rows and optimizer restarts all draw from streams keyed by
//! their index, and results are collected in index order, so the output does
//! not depend on the number of worker threads.

use dephasing_core::{
    bloch_volume, choi_purity, choi_state, derived_seed, extremality_certificate, lambda_channel,
    mcmq_channel, sample_record, tetrahedral_angle, AssistanceProblem, AssistanceResult,
    OptimizerConfig, PhaseDampingChannel, SampleRecord,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;

/// Dimension of the two-qubit channels sampled by the figure commands.
pub const FIGURE_DIM: usize = 4;

/// Runs `f` on a pool with `threads` workers (`0` = rayon's default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(pool.install(f))
}

/// Entanglement of assistance of the channel's Choi state with restarts
/// spread over the current pool.
pub fn assistance(
    d: &PhaseDampingChannel,
    cfg: &OptimizerConfig,
) -> Result<AssistanceResult, CliError> {
    let problem = AssistanceProblem::new(&choi_state(d), cfg)?;
    let outcomes: Vec<_> = (0..problem.restarts())
        .into_par_iter()
        .map(|i| problem.restart(i))
        .collect();
    Ok(problem.finish(&outcomes)?)
}

/// Random channels in groups of `(rank, count)`. Rows are numbered
/// consecutively across groups and row `i` uses stream `(seed, i)`.
pub fn figure_records(
    groups: &[(usize, usize)],
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<SampleRecord>, CliError> {
    let mut jobs = Vec::new();
    let mut index = 0u64;
    for &(rank, count) in groups {
        if count == 0 {
            return Err(CliError::Config("sample counts must be at least 1".into()));
        }
        for _ in 0..count {
            jobs.push((rank, index));
            index += 1;
        }
    }
    let records: Result<Vec<_>, _> = jobs
        .into_par_iter()
        .map(|(rank, i)| sample_record(FIGURE_DIM, rank, seed, i, cfg))
        .collect();
    Ok(records?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub alpha: f64,
    pub v_b: f64,
    pub purity: f64,
    pub q_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaRow {
    pub lambda: f64,
    pub v_b: f64,
    pub purity: f64,
    pub q_a: f64,
}

fn uniform_grid(points: usize, upper: f64) -> Result<Vec<f64>, CliError> {
    if points < 2 {
        return Err(CliError::Config("grids need at least 2 points".into()));
    }
    // pin the last point so the endpoint is hit exactly
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                upper
            } else {
                upper * i as f64 / (points - 1) as f64
            }
        })
        .collect())
}

/// The maximal-quantumness family on a uniform grid over
/// `[0, arccos(-1/3)]`. Row `i` seeds its optimizer from stream `(seed, i)`.
pub fn mcmq_curve(
    points: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<CurveRow>, CliError> {
    let grid = uniform_grid(points, tetrahedral_angle())?;
    grid.into_par_iter()
        .enumerate()
        .map(|(i, alpha)| {
            let d = mcmq_channel(alpha)?;
            let cfg = OptimizerConfig {
                seed: derived_seed(seed, i as u64),
                ..cfg.clone()
            };
            Ok(CurveRow {
                alpha,
                v_b: bloch_volume(&d),
                purity: choi_purity(&d),
                q_a: assistance(&d, &cfg)?.q_a,
            })
        })
        .collect()
}

/// `D_λ = (1-λ) D_Δ + λ D_cd` on a uniform grid over `[0, 1]`.
pub fn lambda_sweep(
    points: usize,
    seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<LambdaRow>, CliError> {
    let grid = uniform_grid(points, 1.0)?;
    grid.into_par_iter()
        .enumerate()
        .map(|(i, lambda)| {
            let d = lambda_channel(lambda)?;
            let cfg = OptimizerConfig {
                seed: derived_seed(seed, i as u64),
                ..cfg.clone()
            };
            Ok(LambdaRow {
                lambda,
                v_b: extremality_certificate(&d, dephasing_core::DEFAULT_VOLUME_TOL).best_volume,
                purity: choi_purity(&d),
                q_a: assistance(&d, &cfg)?.q_a,
            })
        })
        .collect()
}

/// Piecewise-linear upper bound on the quantumness built from a sampled
/// maximal-quantumness curve. Outside the sampled range the bound is held at
/// the nearest endpoint; below purity 1/2 this is the tetrahedral channel's
/// value, the largest on the curve.
#[derive(Debug, Clone)]
pub struct McmqBound {
    by_volume: Vec<(f64, f64)>,
    by_purity: Vec<(f64, f64)>,
}

impl McmqBound {
    pub fn new(rows: &[CurveRow]) -> Self {
        let mut by_volume: Vec<_> = rows.iter().map(|r| (r.v_b, r.q_a)).collect();
        let mut by_purity: Vec<_> = rows.iter().map(|r| (r.purity, r.q_a)).collect();
        by_volume.sort_by(|a, b| a.0.total_cmp(&b.0));
        by_purity.sort_by(|a, b| a.0.total_cmp(&b.0));
        McmqBound {
            by_volume,
            by_purity,
        }
    }

    pub fn q_a_at_volume(&self, v_b: f64) -> f64 {
        interpolate(&self.by_volume, v_b)
    }

    pub fn q_a_at_purity(&self, purity: f64) -> f64 {
        interpolate(&self.by_purity, purity)
    }
}

fn interpolate(table: &[(f64, f64)], x: f64) -> f64 {
    let (first, last) = match (table.first(), table.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return f64::NAN,
    };
    if x <= first.0 {
        return first.1;
    }
    if x >= last.0 {
        return last.1;
    }
    let hi = table.partition_point(|p| p.0 < x);
    let (x0, y0) = table[hi - 1];
    let (x1, y1) = table[hi];
    if x1 == x0 {
        return y0.max(y1);
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}
