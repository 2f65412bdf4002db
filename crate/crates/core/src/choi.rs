//! Choi–Jamiołkowski states of phase-damping channels and the entanglement
//! (and quantumness) of assistance.
//!
//! The Choi state of a channel with damping matrix `D` is
//! `ρ = (1/N) Σₘₙ Dₘₙ |mm⟩⟨nn|`. Its range lies in `span{|mm⟩}`, so every
//! state of every pure-state decomposition has the Schmidt form
//! `Σₘ cₘ |mm⟩` and its entanglement entropy is the Shannon entropy of
//! `|cₘ|²`. The optimizer works in this `N`-dimensional picture; the
//! reported decomposition is lifted back to `C^N ⊗ C^N` and re-evaluated
//! with the general entropy routine before its value is reported.
//!
//! Decompositions of length `k` of a rank-`q` state are the images of
//! `k×q` isometries `u` (`u†u = 1`). The search parameterizes
//! `u = exp(X)·u₀` with `X` anti-Hermitian and `u₀` a Haar-random starting
//! isometry, and runs BFGS on the `k²` real coordinates of `X` with an
//! exact gradient.
//!
//! Every decomposition found is a valid one, so the optimum found is a lower
//! bound on the entanglement of assistance, and the derived quantumness
//! `Q_A = 1 - E_A/log₂N` is an upper bound on the true value.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::channel::PhaseDampingChannel;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianEigen, ONE, ZERO};
use crate::optimize::{self, BfgsOptions};
use crate::sampling::{random_unitary, stream_rng};

/// Eigenvalues at or below this are dropped from entropies.
pub const ENTROPY_CLIP: f64 = 1e-12;
/// Tolerance on the isometry condition `u†u = 1`.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Upper limit on the default decomposition length.
pub const MAX_DEFAULT_DECOMPOSITION_LEN: usize = 16;

/// Jamiołkowski state of a phase-damping channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    n: usize,
    matrix: CMatrix,
}

impl ChoiState {
    pub fn dim_n(&self) -> usize {
        self.n
    }

    /// The full `N²×N²` density matrix.
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Restriction to `span{|mm⟩}`, an `N×N` matrix equal to `D/N`.
    pub fn support_matrix(&self) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |m, k| self.matrix[(m * n + m, k * n + k)])
    }

    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn rank(&self) -> usize {
        HermitianEigen::new(&self.support_matrix()).rank()
    }

    /// Reduced state on the first (`first = true`) or second factor.
    pub fn reduced(&self, first: bool) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| {
                    if first {
                        self.matrix[(i * n + k, j * n + k)]
                    } else {
                        self.matrix[(k * n + i, k * n + j)]
                    }
                })
                .sum()
        })
    }
}

/// `ρ = (1/N) Σₘₙ Dₘₙ |mm⟩⟨nn|`.
pub fn choi_state(d: &PhaseDampingChannel) -> ChoiState {
    let n = d.dim_n();
    let mut matrix = CMatrix::zeros(n * n, n * n);
    let scale = 1.0 / n as f64;
    for m in 0..n {
        for k in 0..n {
            matrix[(m * n + m, k * n + k)] = d.entry(m, k) * scale;
        }
    }
    ChoiState { n, matrix }
}

/// `tr ρ² = (1/N²) Σₘₙ |Dₘₙ|²`, between `1/N` and `1`.
pub fn choi_purity(d: &PhaseDampingChannel) -> f64 {
    let n = d.dim_n() as f64;
    d.matrix().iter().map(|z| z.norm_sqr()).sum::<f64>() / (n * n)
}

/// Base-2 von Neumann entropy of the reduced state of `psi ∈ C^{dim_a} ⊗
/// C^{len/dim_a}`, with basis index `a * dim_b + b`.
pub fn entanglement_entropy(psi: &CVector, dim_a: usize) -> Result<f64> {
    if dim_a == 0 || !psi.len().is_multiple_of(dim_a) {
        return Err(Error::DimensionMismatch {
            expected: dim_a,
            found: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > ISOMETRY_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let dim_b = psi.len() / dim_a;
    let coeffs = CMatrix::from_fn(dim_a, dim_b, |a, b| psi[a * dim_b + b]);
    let reduced = &coeffs * coeffs.adjoint();
    let eig = SymmetricEigen::new(reduced);
    Ok(linalg::shannon_entropy_bits(
        eig.eigenvalues.iter().map(|&x| x.max(0.0)),
        ENTROPY_CLIP,
    ))
}

/// Eigenpairs of a density matrix restricted to its support, in descending
/// order of eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    /// One eigenvector per column.
    pub vectors: CMatrix,
}

impl Spectrum {
    pub fn of(rho: &CMatrix) -> Self {
        let eig = HermitianEigen::new(rho);
        let q = eig.rank().max(1);
        Spectrum {
            values: eig.values[..q].to_vec(),
            vectors: eig.vectors.columns(0, q).into_owned(),
        }
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn dim(&self) -> usize {
        self.vectors.nrows()
    }
}

/// Weighted pure states `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub weights: Vec<f64>,
    pub states: Vec<CVector>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.states.first().map_or(0, |s| s.len());
        self.weights
            .iter()
            .zip(&self.states)
            .fold(CMatrix::zeros(dim, dim), |acc, (&w, s)| {
                acc + s * s.adjoint() * Complex64::new(w, 0.0)
            })
    }

    /// `Σ wᵢ E(ψᵢ)` with bipartition `dim_a × (len/dim_a)`.
    pub fn average_entanglement(&self, dim_a: usize) -> Result<f64> {
        let mut total = 0.0;
        for (&w, s) in self.weights.iter().zip(&self.states) {
            if w > 0.0 {
                total += w * entanglement_entropy(s, dim_a)?;
            }
        }
        Ok(total)
    }
}

/// `|ψ̃ᵢ⟩ = Σⱼ conj(uᵢⱼ) √λⱼ |eⱼ⟩`, `wᵢ = ⟨ψ̃ᵢ|ψ̃ᵢ⟩`, `|ψᵢ⟩ = |ψ̃ᵢ⟩/√wᵢ`.
/// States with zero weight are set to the leading eigenvector.
pub fn decomposition_from_isometry(spectrum: &Spectrum, u: &CMatrix) -> Result<Decomposition> {
    let q = spectrum.rank();
    if u.ncols() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: u.ncols(),
        });
    }
    let defect = linalg::isometry_defect(u);
    if defect > ISOMETRY_TOL {
        return Err(Error::NotIsometry { defect });
    }
    let scaled = CMatrix::from_fn(spectrum.dim(), q, |row, j| {
        spectrum.vectors[(row, j)] * libm::sqrt(spectrum.values[j].max(0.0))
    });
    let mut weights = Vec::with_capacity(u.nrows());
    let mut states = Vec::with_capacity(u.nrows());
    for i in 0..u.nrows() {
        let coeffs = CVector::from_fn(q, |j, _| u[(i, j)].conj());
        let psi = &scaled * coeffs;
        let w = psi.norm_squared();
        weights.push(w);
        if w > 0.0 {
            states.push(psi / Complex64::new(libm::sqrt(w), 0.0));
        } else {
            states.push(spectrum.vectors.column(0).into_owned());
        }
    }
    Ok(Decomposition { weights, states })
}

/// Search settings for [`entanglement_of_assistance`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Decomposition length `k`; defaults to `min(rank², 16)`, at least `rank`.
    pub decomposition_len: Option<usize>,
    pub max_iters: usize,
    pub objective_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 20,
            decomposition_len: None,
            max_iters: 2000,
            objective_tol: 1e-7,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1"));
        }
        if self.objective_tol.is_nan() || self.objective_tol <= 0.0 {
            return Err(Error::InvalidConfig("objective_tol must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        Ok(())
    }

    pub fn decomposition_len_for(&self, rank: usize) -> Result<usize> {
        match self.decomposition_len {
            Some(k) if k < rank => Err(Error::InvalidConfig(
                "decomposition length must be at least the rank",
            )),
            Some(k) => Ok(k),
            None => Ok((rank * rank).min(MAX_DEFAULT_DECOMPOSITION_LEN).max(rank)),
        }
    }
}

/// Direction in which a reported value bounds the exact one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// Best decomposition found and the derived quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct AssistanceResult {
    /// Average entanglement (bits) of `decomposition`; a lower bound on E_A.
    pub e_a_lower: f64,
    /// `1 - e_a_lower/log₂N` clipped to `[0, 1]`; an upper bound on Q_A.
    pub q_a: f64,
    /// Unclipped `1 - e_a_lower/log₂N`.
    pub q_a_raw: f64,
    pub e_a_bound: Bound,
    pub q_a_bound: Bound,
    pub decomposition: Decomposition,
    /// The two best restarts agree within `10·objective_tol`.
    pub converged: bool,
    /// Optimum of each restart, in restart order (bits).
    pub restart_values: Vec<f64>,
    /// Average entanglement of the plain eigendecomposition (bits).
    pub eigen_baseline: f64,
    pub decomposition_len: usize,
}

/// Outcome of a single restart.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub index: usize,
    /// Average entanglement in bits.
    pub value: f64,
    pub isometry: CMatrix,
    pub iterations: usize,
}

/// The optimization problem for one Choi state, shared by all restarts.
#[derive(Debug, Clone)]
pub struct AssistanceProblem {
    n: usize,
    k: usize,
    cfg: OptimizerConfig,
    /// Spectrum of the `N×N` support matrix.
    support: Spectrum,
    /// `A = V√Λ`, `N×q`.
    amplitudes: CMatrix,
}

impl AssistanceProblem {
    pub fn new(rho: &ChoiState, cfg: &OptimizerConfig) -> Result<Self> {
        cfg.validate()?;
        let support = Spectrum::of(&rho.support_matrix());
        let q = support.rank();
        let k = cfg.decomposition_len_for(q)?;
        let amplitudes = CMatrix::from_fn(rho.n, q, |m, j| {
            support.vectors[(m, j)] * libm::sqrt(support.values[j].max(0.0))
        });
        Ok(AssistanceProblem {
            n: rho.n,
            k,
            cfg: cfg.clone(),
            support,
            amplitudes,
        })
    }

    pub fn rank(&self) -> usize {
        self.support.rank()
    }

    pub fn decomposition_len(&self) -> usize {
        self.k
    }

    pub fn restarts(&self) -> usize {
        self.cfg.restarts
    }

    /// Average entanglement (bits) of the decomposition given by isometry
    /// `u`, evaluated in the Schmidt picture.
    pub fn objective(&self, u: &CMatrix) -> f64 {
        let mut grad = CMatrix::zeros(0, 0);
        self.objective_nats(u, &mut grad, false) / core::f64::consts::LN_2
    }

    /// Returns the objective in nats. With `want_grad`, writes
    /// `Γ = ∂f/∂ū` (`k×q`) into `grad`.
    fn objective_nats(&self, u: &CMatrix, grad: &mut CMatrix, want_grad: bool) -> f64 {
        let (k, q, n) = (u.nrows(), u.ncols(), self.n);
        // cᵢₘ = Σⱼ conj(uᵢⱼ) Aₘⱼ
        let c = u.map(|z| z.conj()) * self.amplitudes.transpose();
        let mut f = 0.0;
        if want_grad {
            *grad = CMatrix::zeros(k, q);
        }
        let mut g_row = vec![ZERO; n];
        for i in 0..k {
            let p: Vec<f64> = (0..n).map(|m| c[(i, m)].norm_sqr()).collect();
            let w: f64 = p.iter().sum();
            if w <= 0.0 {
                continue;
            }
            let ln_w = libm::log(w);
            f += w * ln_w;
            for m in 0..n {
                if p[m] > 0.0 {
                    let ln_p = libm::log(p[m]);
                    f -= p[m] * ln_p;
                    g_row[m] = c[(i, m)].conj() * (ln_w - ln_p);
                } else {
                    g_row[m] = ZERO;
                }
            }
            if want_grad {
                for j in 0..q {
                    grad[(i, j)] = (0..n).map(|m| g_row[m] * self.amplitudes[(m, j)]).sum();
                }
            }
        }
        f
    }

    /// Runs restart `index` from a Haar-random isometry drawn from stream
    /// `index` of the configured seed.
    pub fn restart(&self, index: usize) -> RestartOutcome {
        let q = self.rank();
        let k = self.k;
        let mut rng = stream_rng(self.cfg.seed, index as u64);
        let start = random_unitary(k, &mut rng).columns(0, q).into_owned();

        if q == 1 {
            // a rank-one state has a single decomposition up to weights
            return RestartOutcome {
                index,
                value: self.objective(&start),
                isometry: start,
                iterations: 0,
            };
        }

        let chart = ExpChart::new(k);
        let opts = BfgsOptions {
            max_iters: self.cfg.max_iters,
            f_tol: self.cfg.objective_tol * 1e-3,
            g_tol: 1e-10,
        };
        let mut gamma = CMatrix::zeros(k, q);
        let out = optimize::minimize(
            |x, g| {
                let (w, eig) = chart.unitary(x);
                let u = &w * &start;
                let f = self.objective_nats(&u, &mut gamma, true);
                let m = &gamma * start.adjoint();
                chart.pull_back(&eig, &m, g);
                for gi in g.iter_mut() {
                    *gi = -*gi / core::f64::consts::LN_2;
                }
                -f / core::f64::consts::LN_2
            },
            vec![0.0; k * k],
            &opts,
        );
        let (w, _) = chart.unitary(&out.x);
        let isometry = w * &start;
        RestartOutcome {
            index,
            value: self.objective(&isometry),
            isometry,
            iterations: out.iterations,
        }
    }

    /// Merges restart outcomes into the final result. The plain
    /// eigendecomposition is always a candidate.
    pub fn finish(&self, outcomes: &[RestartOutcome]) -> Result<AssistanceResult> {
        let q = self.rank();
        let identity = CMatrix::from_fn(self.k, q, |i, j| if i == j { ONE } else { ZERO });
        let eigen_baseline = self.objective(&identity);

        let mut restart_values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
        let mut best_u = identity;
        let mut best = eigen_baseline;
        for o in outcomes {
            if o.value > best {
                best = o.value;
                best_u = o.isometry.clone();
            }
        }

        let decomposition = decomposition_from_isometry(&self.lifted_spectrum(), &best_u)?;
        let e_a_lower = decomposition.average_entanglement(self.n)?;

        let converged = if q == 1 {
            true
        } else {
            restart_values.sort_by(|a, b| b.total_cmp(a));
            restart_values.len() >= 2
                && restart_values[0] - restart_values[1] <= 10.0 * self.cfg.objective_tol
        };
        let restart_values = outcomes.iter().map(|o| o.value).collect();

        let log_n = libm::log2(self.n as f64);
        let q_a_raw = if log_n > 0.0 {
            1.0 - e_a_lower / log_n
        } else {
            0.0
        };
        Ok(AssistanceResult {
            e_a_lower,
            q_a: q_a_raw.clamp(0.0, 1.0),
            q_a_raw,
            e_a_bound: Bound::Lower,
            q_a_bound: Bound::Upper,
            decomposition,
            converged,
            restart_values,
            eigen_baseline,
            decomposition_len: self.k,
        })
    }

    /// Support eigenvectors embedded into `C^N ⊗ C^N` via `|m⟩ ↦ |mm⟩`.
    fn lifted_spectrum(&self) -> Spectrum {
        let n = self.n;
        let q = self.rank();
        let mut vectors = CMatrix::zeros(n * n, q);
        for j in 0..q {
            for m in 0..n {
                vectors[(m * n + m, j)] = self.support.vectors[(m, j)];
            }
        }
        Spectrum {
            values: self.support.values.clone(),
            vectors,
        }
    }
}

/// Coordinates on `k×k` anti-Hermitian matrices: `k` diagonal entries
/// `X_aa = i x`, then one `(re, im)` pair per `a < b` with `X_ab = re + i im`
/// and `X_ba = -re + i im`.
struct ExpChart {
    k: usize,
}

struct ChartEigen {
    /// Eigenvectors of `H = -iX`.
    q: CMatrix,
    theta: Vec<f64>,
}

impl ExpChart {
    fn new(k: usize) -> Self {
        ExpChart { k }
    }

    fn hermitian(&self, x: &[f64]) -> CMatrix {
        // H = -iX
        let k = self.k;
        let mut h = CMatrix::zeros(k, k);
        for a in 0..k {
            h[(a, a)] = Complex64::new(x[a], 0.0);
        }
        let mut idx = k;
        for a in 0..k {
            for b in (a + 1)..k {
                let (re, im) = (x[idx], x[idx + 1]);
                idx += 2;
                // X_ab = re + i im  =>  H_ab = im - i re
                h[(a, b)] = Complex64::new(im, -re);
                h[(b, a)] = Complex64::new(im, re);
            }
        }
        h
    }

    /// `exp(X)` together with the eigensystem used to build it.
    fn unitary(&self, x: &[f64]) -> (CMatrix, ChartEigen) {
        let eig = SymmetricEigen::new(self.hermitian(x));
        let theta: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let q = eig.eigenvectors;
        let phases = CVector::from_fn(self.k, |a, _| Complex64::from_polar(1.0, theta[a]));
        let w = &q * CMatrix::from_diagonal(&phases) * q.adjoint();
        (w, ChartEigen { q, theta })
    }

    /// Given `M` with `df = 2 Re tr(M† dW)`, writes `∂f/∂x` into `out`.
    fn pull_back(&self, eig: &ChartEigen, m: &CMatrix, out: &mut [f64]) {
        let k = self.k;
        let mp = eig.q.adjoint() * m * &eig.q;
        let weighted = CMatrix::from_fn(k, k, |a, b| {
            divided_difference_exp(eig.theta[a], eig.theta[b]).conj() * mp[(a, b)]
        });
        let gx = &eig.q * weighted * eig.q.adjoint();
        for a in 0..k {
            out[a] = 2.0 * gx[(a, a)].im;
        }
        let mut idx = k;
        for a in 0..k {
            for b in (a + 1)..k {
                out[idx] = 2.0 * (gx[(a, b)].re - gx[(b, a)].re);
                out[idx + 1] = 2.0 * (gx[(a, b)].im + gx[(b, a)].im);
                idx += 2;
            }
        }
    }
}

/// `(e^{iα} - e^{iβ}) / (iα - iβ)`, continuous at `α = β`.
fn divided_difference_exp(alpha: f64, beta: f64) -> Complex64 {
    let half = 0.5 * (alpha - beta);
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        libm::sin(half) / half
    };
    Complex64::from_polar(sinc, 0.5 * (alpha + beta))
}

/// Maximizes the average entanglement over decompositions of `rho` with
/// `cfg.restarts` independent random starts, run serially.
pub fn entanglement_of_assistance(
    rho: &ChoiState,
    cfg: &OptimizerConfig,
) -> Result<AssistanceResult> {
    let problem = AssistanceProblem::new(rho, cfg)?;
    let outcomes: Vec<RestartOutcome> = (0..problem.restarts())
        .map(|i| problem.restart(i))
        .collect();
    problem.finish(&outcomes)
}

/// `Q_A = 1 - E_A(ρ_D)/log₂N` from the optimized lower bound on `E_A`. The
/// reported value therefore overestimates the exact quantumness.
pub fn quantumness_of_assistance(
    d: &PhaseDampingChannel,
    cfg: &OptimizerConfig,
) -> Result<AssistanceResult> {
    entanglement_of_assistance(&choi_state(d), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{completely_decohering, identity_channel, tetra_channel};

    #[test]
    fn choi_of_decohering_channel_is_diagonal() {
        let c = choi_state(&completely_decohering(4).unwrap());
        for i in 0..16 {
            for j in 0..16 {
                let expect = if i == j && i % 5 == 0 { 0.25 } else { 0.0 };
                assert_eq!(c.matrix()[(i, j)], Complex64::new(expect, 0.0));
            }
        }
        assert_eq!(c.rank(), 4);
    }

    #[test]
    fn choi_of_identity_is_maximally_entangled() {
        let c = choi_state(&identity_channel(4).unwrap());
        let mut phi = CVector::zeros(16);
        for m in 0..4 {
            phi[m * 5] = Complex64::new(0.5, 0.0);
        }
        assert!(linalg::max_abs_diff(c.matrix(), &(&phi * phi.adjoint())) < 1e-15);
        assert!((c.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn choi_of_tetra_channel() {
        let c = choi_state(&tetra_channel());
        assert_eq!(c.rank(), 2);
        assert!((c.purity() - 0.5).abs() < 1e-12);
        assert!((c.trace() - 1.0).abs() < 1e-12);
        for first in [true, false] {
            let red = c.reduced(first);
            assert!(
                linalg::max_abs_diff(&red, &(CMatrix::identity(4, 4) * Complex64::new(0.25, 0.0)))
                    < 1e-12
            );
        }
    }

    #[test]
    fn purities_of_named_channels() {
        assert!((choi_purity(&identity_channel(4).unwrap()) - 1.0).abs() < 1e-15);
        assert!((choi_purity(&completely_decohering(4).unwrap()) - 0.25).abs() < 1e-15);
        assert!((choi_purity(&tetra_channel()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn entropies_of_simple_states() {
        let mut phi = CVector::zeros(16);
        for m in 0..4 {
            phi[m * 5] = Complex64::new(0.5, 0.0);
        }
        assert!((entanglement_entropy(&phi, 4).unwrap() - 2.0).abs() < 1e-12);

        let mut prod = CVector::zeros(16);
        prod[6] = ONE;
        assert!(entanglement_entropy(&prod, 4).unwrap().abs() < 1e-12);

        let s = libm::sqrt(0.5);
        let mut bell = CVector::zeros(16);
        bell[0] = Complex64::new(s, 0.0);
        bell[5] = Complex64::new(s, 0.0);
        assert!((entanglement_entropy(&bell, 4).unwrap() - 1.0).abs() < 1e-12);

        let unnormalized = CVector::from_element(4, ONE);
        assert!(matches!(
            entanglement_entropy(&unnormalized, 2),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn identity_isometry_reproduces_eigendecomposition() {
        let c = choi_state(&tetra_channel());
        let spectrum = Spectrum::of(c.matrix());
        assert_eq!(spectrum.rank(), 2);
        let dec = decomposition_from_isometry(&spectrum, &CMatrix::identity(2, 2)).unwrap();
        for j in 0..2 {
            assert!((dec.weights[j] - spectrum.values[j]).abs() < 1e-14);
            assert!((&dec.states[j] - spectrum.vectors.column(j)).norm() < 1e-12);
        }
        assert!(linalg::max_abs_diff(&dec.reconstruct(), c.matrix()) < 1e-12);
    }

    #[test]
    fn rank_one_split_keeps_the_state() {
        let c = choi_state(&identity_channel(3).unwrap());
        let spectrum = Spectrum::of(c.matrix());
        assert_eq!(spectrum.rank(), 1);
        let u = CMatrix::from_column_slice(
            3,
            1,
            &[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), ZERO],
        );
        let dec = decomposition_from_isometry(&spectrum, &u).unwrap();
        assert!((dec.weights[0] - 0.36).abs() < 1e-14);
        assert!((dec.weights[1] - 0.64).abs() < 1e-14);
        assert_eq!(dec.weights[2], 0.0);
        let overlap = dec.states[0].dotc(&dec.states[1]).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        assert!(linalg::max_abs_diff(&dec.reconstruct(), c.matrix()) < 1e-12);
    }

    #[test]
    fn non_isometry_is_rejected() {
        let c = choi_state(&tetra_channel());
        let spectrum = Spectrum::of(c.matrix());
        let u = CMatrix::from_element(2, 2, ONE);
        assert!(matches!(
            decomposition_from_isometry(&spectrum, &u),
            Err(Error::NotIsometry { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = OptimizerConfig {
            restarts: 0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.decomposition_len_for(2).unwrap(), 4);
        assert_eq!(cfg.decomposition_len_for(5).unwrap(), 16);
        assert_eq!(cfg.decomposition_len_for(1).unwrap(), 1);
        let short = OptimizerConfig {
            decomposition_len: Some(1),
            ..cfg
        };
        assert!(short.decomposition_len_for(2).is_err());
    }

    #[test]
    fn divided_difference_limits() {
        let z = divided_difference_exp(0.3, 0.3);
        assert!((z - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        let (a, b) = (0.9, -0.4);
        let direct = (Complex64::from_polar(1.0, a) - Complex64::from_polar(1.0, b))
            / Complex64::new(0.0, a - b);
        assert!((divided_difference_exp(a, b) - direct).norm() < 1e-14);
    }

    #[test]
    fn chart_is_unitary() {
        let chart = ExpChart::new(3);
        let x = [0.1, -0.4, 0.7, 0.3, 0.2, -0.5, 0.05, 0.9, -0.3];
        let (w, _) = chart.unitary(&x);
        assert!(linalg::isometry_defect(&w) < 1e-12);
    }
}
