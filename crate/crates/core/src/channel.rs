//! Phase-damping channels in their Gram-matrix, dynamical-vector and Kraus
//! forms.
//!
//! A phase-damping channel on `C^N` leaves the populations of a preferred
//! basis untouched and multiplies each coherence by a damping factor,
//! `ρ'ₘₙ = Dₘₙ ρₘₙ`. The factors are the overlaps `Dₘₙ = ⟨aₙ|aₘ⟩` of `N`
//! unit "dynamical vectors" `|aₙ⟩ ∈ C^r`, so `D` is a Hermitian, positive
//! semidefinite matrix with unit diagonal and the Kraus rank of the channel
//! equals the rank of `D`.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianEigen, ONE};

/// Tolerance on `|Dₘₙ - conj(Dₙₘ)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;
/// PSD floor used by strict validation.
pub const PSD_TOL_STRICT: f64 = -1e-12;
/// Tolerance on `|Dₙₙ - 1|`.
pub const DIAGONAL_TOL: f64 = 1e-12;
/// Tolerance on vector norms and traces.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on `Σ Kᵢ†Kᵢ = 1` and unitarity checks.
pub const OPERATOR_TOL: f64 = 1e-10;

/// Result of checking a candidate matrix against the phase-damping structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub dim: usize,
    pub hermiticity_defect: f64,
    pub min_eigenvalue: f64,
    pub max_diagonal_deviation: f64,
    pub max_modulus: f64,
    pub rank: usize,
    pub strict: bool,
}

impl ValidationReport {
    pub fn psd_floor(&self) -> f64 {
        if self.strict {
            PSD_TOL_STRICT
        } else {
            PSD_TOL
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_defect <= HERMITIAN_TOL
    }

    pub fn is_psd(&self) -> bool {
        self.min_eigenvalue >= self.psd_floor()
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.max_diagonal_deviation <= DIAGONAL_TOL
    }

    pub fn moduli_bounded(&self) -> bool {
        self.max_modulus <= 1.0 + DIAGONAL_TOL
    }

    pub fn accepted(&self) -> bool {
        self.is_hermitian() && self.is_psd() && self.has_unit_diagonal() && self.moduli_bounded()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} hermiticity_defect={:e} min_eigenvalue={:e} max_diagonal_deviation={:e} max_modulus={} ({})",
            self.dim,
            self.hermiticity_defect,
            self.min_eigenvalue,
            self.max_diagonal_deviation,
            self.max_modulus,
            if self.accepted() { "accepted" } else { "rejected" }
        )
    }
}

/// Checks `matrix` against the Gram-matrix structure of a phase-damping
/// channel with the default tolerances.
pub fn validate_channel(matrix: &CMatrix) -> Result<ValidationReport> {
    validate_channel_with(matrix, false)
}

/// Like [`validate_channel`], with `strict` tightening the PSD floor to
/// [`PSD_TOL_STRICT`].
pub fn validate_channel_with(matrix: &CMatrix, strict: bool) -> Result<ValidationReport> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::NotSquare {
            rows: matrix.nrows(),
            cols: matrix.ncols(),
        });
    }
    if matrix.nrows() == 0 {
        return Err(Error::Empty);
    }
    let n = matrix.nrows();
    let eig = HermitianEigen::new(matrix);
    Ok(ValidationReport {
        dim: n,
        hermiticity_defect: linalg::hermiticity_defect(matrix),
        min_eigenvalue: eig.min_value(),
        max_diagonal_deviation: (0..n)
            .map(|i| (matrix[(i, i)] - ONE).norm())
            .fold(0.0, f64::max),
        max_modulus: matrix.iter().map(|z| z.norm()).fold(0.0, f64::max),
        rank: eig.rank(),
        strict,
    })
}

/// `N` unit vectors in `C^r` whose Gram matrix defines a channel.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalVectors {
    rank: usize,
    vectors: Vec<CVector>,
}

impl DynamicalVectors {
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let rank = vectors.first().ok_or(Error::Empty)?.len();
        if rank == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for v in &vectors {
            if v.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: v.len(),
                });
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(DynamicalVectors { rank, vectors })
    }

    /// Normalizes each vector before building the set. Zero vectors are
    /// rejected.
    pub fn normalized(vectors: Vec<CVector>) -> Result<Self> {
        let mut out = Vec::with_capacity(vectors.len());
        for v in vectors {
            let norm = v.norm();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::NotNormalized { norm });
            }
            out.push(v / Complex64::new(norm, 0.0));
        }
        Self::new(out)
    }

    /// Number of vectors, `N`.
    pub fn dim_n(&self) -> usize {
        self.vectors.len()
    }

    /// Ambient dimension `r` of the vectors.
    pub fn rank_r(&self) -> usize {
        self.rank
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    /// Applies the same `r×r` unitary to every vector.
    pub fn rotated(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.rank || u.ncols() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: u.nrows(),
            });
        }
        Self::normalized(self.vectors.iter().map(|v| u * v).collect())
    }
}

/// A phase-damping channel, described completely by its damping matrix `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDampingChannel {
    d: CMatrix,
    rank: usize,
}

impl PhaseDampingChannel {
    /// Validates `d` and wraps it.
    pub fn new(d: CMatrix) -> Result<Self> {
        let report = validate_channel(&d)?;
        if !report.accepted() {
            return Err(Error::InvalidChannel(report));
        }
        Ok(PhaseDampingChannel {
            d,
            rank: report.rank,
        })
    }

    /// Builds a channel from row-major entries.
    pub fn from_row_slice(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Self::new(CMatrix::from_row_slice(n, n, entries))
    }

    pub fn dim_n(&self) -> usize {
        self.d.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.d
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.d[(m, n)]
    }

    /// Kraus rank: the numerical rank of `D`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Conjugates `D` by `diag(e^{iφₙ})`, producing an equivalent channel.
    pub fn phase_conjugated(&self, phases: &[f64]) -> Result<Self> {
        let n = self.dim_n();
        if phases.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phases.len(),
            });
        }
        let d = CMatrix::from_fn(n, n, |i, j| {
            self.d[(i, j)] * Complex64::from_polar(1.0, phases[i] - phases[j])
        });
        Self::new(d)
    }

    /// Relabels the preferred basis: entry `(m, n)` of the result is entry
    /// `(perm[m], perm[n])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.dim_n();
        let mut seen = alloc::vec![false; n];
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        for &p in perm {
            if p >= n || seen[p] {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p,
                });
            }
            seen[p] = true;
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| self.d[(perm[i], perm[j])]))
    }
}

/// Gram channel of the dynamical vectors, `Dₘₙ = ⟨aₙ|aₘ⟩`.
pub fn channel_from_vectors(v: &DynamicalVectors) -> PhaseDampingChannel {
    let n = v.dim_n();
    let mut d = CMatrix::identity(n, n);
    for m in 0..n {
        for k in (m + 1)..n {
            let overlap = v.vectors[k].dotc(&v.vectors[m]);
            d[(m, k)] = overlap;
            d[(k, m)] = overlap.conj();
        }
    }
    let rank = HermitianEigen::new(&d).rank();
    PhaseDampingChannel { d, rank }
}

/// Factorizes `D = B B†` with `B = V√Λ` restricted to the `r` leading
/// eigenpairs; row `n` of `B` is `|aₙ⟩`.
pub fn vectors_from_channel(d: &PhaseDampingChannel) -> DynamicalVectors {
    let n = d.dim_n();
    let eig = HermitianEigen::new(&d.d);
    let r = d.rank.max(1);
    let vectors = (0..n)
        .map(|row| {
            let v = CVector::from_fn(r, |i, _| {
                eig.vectors[(row, i)] * libm::sqrt(eig.values[i].max(0.0))
            });
            let norm = v.norm();
            v / Complex64::new(norm, 0.0)
        })
        .collect();
    DynamicalVectors { rank: r, vectors }
}

/// Numerical Kraus rank of the channel.
pub fn channel_rank(d: &PhaseDampingChannel) -> usize {
    d.rank
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: CMatrix,
}

impl DensityMatrix {
    pub fn new(rho: CMatrix) -> Result<Self> {
        if rho.nrows() != rho.ncols() {
            return Err(Error::NotSquare {
                rows: rho.nrows(),
                cols: rho.ncols(),
            });
        }
        if linalg::hermiticity_defect(&rho) > HERMITIAN_TOL {
            return Err(Error::InvalidState {
                reason: "not Hermitian",
            });
        }
        if (linalg::trace(&rho) - ONE).norm() > NORM_TOL {
            return Err(Error::InvalidState {
                reason: "trace differs from one",
            });
        }
        if HermitianEigen::new(&rho).min_value() < PSD_TOL {
            return Err(Error::InvalidState {
                reason: "negative eigenvalue",
            });
        }
        Ok(DensityMatrix { rho })
    }

    /// The projector onto a normalized copy of `psi`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(DensityMatrix {
            rho: &psi * psi.adjoint(),
        })
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.rho
    }

    pub fn purity(&self) -> f64 {
        self.rho.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// Applies the channel as a Hadamard product, `ρ' = D ⋆ ρ`.
pub fn apply_channel(d: &PhaseDampingChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if d.dim_n() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: d.dim_n(),
            found: rho.dim(),
        });
    }
    Ok(DensityMatrix {
        rho: d.d.component_mul(&rho.rho),
    })
}

/// Diagonal Kraus operators of a phase-damping channel.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators.first().map_or(0, |k| k.nrows())
    }

    /// Largest entry of `Σ Kᵢ†Kᵢ - 1`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let n = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + k.adjoint() * k);
        linalg::max_abs_diff(&sum, &CMatrix::identity(n, n))
    }

    /// Largest entry of `Σ KᵢKᵢ† - 1`.
    pub fn unitality_defect(&self) -> f64 {
        let n = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(n, n), |acc, k| acc + k * k.adjoint());
        linalg::max_abs_diff(&sum, &CMatrix::identity(n, n))
    }
}

/// `Kᵢ = Σₙ (aₙ)ᵢ |n⟩⟨n|`, one operator per component of the dynamical
/// vectors.
pub fn kraus_from_vectors(v: &DynamicalVectors) -> KrausSet {
    let n = v.dim_n();
    let operators = (0..v.rank)
        .map(|i| CMatrix::from_diagonal(&CVector::from_fn(n, |row, _| v.vectors[row][i])))
        .collect();
    KrausSet { operators }
}

/// `ρ' = Σᵢ Kᵢ ρ Kᵢ†`.
pub fn apply_kraus(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if k.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: k.dim(),
            found: rho.dim(),
        });
    }
    let n = rho.dim();
    let out = k.operators.iter().fold(CMatrix::zeros(n, n), |acc, op| {
        acc + op * &rho.rho * op.adjoint()
    });
    Ok(DensityMatrix { rho: out })
}

/// A random-unitary ensemble `ρ ↦ Σ pᵢ Uᵢ ρ Uᵢ†`.
#[derive(Debug, Clone, PartialEq)]
pub struct RuDecomposition {
    probs: Vec<f64>,
    unitaries: Vec<CMatrix>,
}

impl RuDecomposition {
    pub fn new(probs: Vec<f64>, unitaries: Vec<CMatrix>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        if probs.len() != unitaries.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                found: unitaries.len(),
            });
        }
        check_weights(&probs)?;
        let dim = unitaries[0].nrows();
        for u in &unitaries {
            if u.nrows() != dim || u.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.nrows(),
                });
            }
            let defect = linalg::isometry_defect(u);
            if defect > OPERATOR_TOL {
                return Err(Error::NotUnitary { defect });
            }
        }
        Ok(RuDecomposition { probs, unitaries })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].nrows()
    }
}

/// Largest entry-wise deviation between the ensemble's action and the
/// channel's action, taken over all matrix units `|m⟩⟨n|`.
pub fn verify_ru_decomposition(ru: &RuDecomposition, d: &PhaseDampingChannel) -> Result<f64> {
    let n = d.dim_n();
    if ru.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ru.dim(),
        });
    }
    let mut worst = 0.0f64;
    for m in 0..n {
        for k in 0..n {
            let mut unit = CMatrix::zeros(n, n);
            unit[(m, k)] = ONE;
            let image = ru
                .probs
                .iter()
                .zip(&ru.unitaries)
                .fold(CMatrix::zeros(n, n), |acc, (&p, u)| {
                    acc + (u * &unit * u.adjoint()) * Complex64::new(p, 0.0)
                });
            let mut target = CMatrix::zeros(n, n);
            target[(m, k)] = d.d[(m, k)];
            worst = worst.max(linalg::max_abs_diff(&image, &target));
        }
    }
    Ok(worst)
}

/// The tetrahedral angle `arccos(-1/3)`.
pub fn tetrahedral_angle() -> f64 {
    libm::acos(-1.0 / 3.0)
}

/// The maximal-volume two-qubit channel whose dynamical vectors form a
/// regular tetrahedron on the Bloch sphere. Off-diagonal moduli are `1/√3`.
pub fn tetra_channel() -> PhaseDampingChannel {
    let x = libm::sqrt(1.0 / 3.0);
    let re = Complex64::new(x, 0.0);
    let ix = Complex64::new(0.0, x);
    #[rustfmt::skip]
    let entries = [
        ONE, re,  re,  re,
        re,  ONE, ix,  -ix,
        re,  -ix, ONE, ix,
        re,  ix,  -ix, ONE,
    ];
    PhaseDampingChannel::from_row_slice(4, &entries).expect("tetrahedral channel is valid")
}

/// The completely decohering channel: `D` is the identity.
pub fn completely_decohering(n: usize) -> Result<PhaseDampingChannel> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    Ok(PhaseDampingChannel {
        d: CMatrix::identity(n, n),
        rank: n,
    })
}

/// The channel with every entry equal to one (identity map).
pub fn identity_channel(n: usize) -> Result<PhaseDampingChannel> {
    if n == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    Ok(PhaseDampingChannel {
        d: CMatrix::from_element(n, n, ONE),
        rank: 1,
    })
}

/// Qubit state with Bloch polar angle `theta` and azimuth `phi`.
pub fn qubit_state(theta: f64, phi: f64) -> CVector {
    CVector::from_vec(alloc::vec![
        Complex64::new(libm::cos(theta / 2.0), 0.0),
        Complex64::from_polar(libm::sin(theta / 2.0), phi),
    ])
}

/// Dynamical vectors of the "umbrella" family: one Bloch vector at the north
/// pole and three at polar angle `alpha`, spaced by 2π/3 in azimuth.
pub fn mcmq_vectors(alpha: f64) -> Result<DynamicalVectors> {
    let max = tetrahedral_angle();
    if !(0.0..=max).contains(&alpha) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha,
            lower: 0.0,
            upper: max,
        });
    }
    let third = 2.0 * core::f64::consts::PI / 3.0;
    DynamicalVectors::new(alloc::vec![
        qubit_state(0.0, 0.0),
        qubit_state(alpha, 0.0),
        qubit_state(alpha, third),
        qubit_state(alpha, -third),
    ])
}

/// Member of the maximal-quantumness family at opening angle `alpha`, from
/// the unitary channel (`alpha = 0`) to the tetrahedral channel.
pub fn mcmq_channel(alpha: f64) -> Result<PhaseDampingChannel> {
    Ok(channel_from_vectors(&mcmq_vectors(alpha)?))
}

fn check_weights(weights: &[f64]) -> Result<()> {
    let sum: f64 = weights.iter().sum();
    if weights.iter().any(|&w| w.is_nan() || w < 0.0) || (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidWeights { sum });
    }
    Ok(())
}

/// Entry-wise convex combination `Σ wᵢ Dᵢ`.
pub fn mix_channels(
    channels: &[PhaseDampingChannel],
    weights: &[f64],
) -> Result<PhaseDampingChannel> {
    let first = channels.first().ok_or(Error::Empty)?;
    if channels.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: channels.len(),
            found: weights.len(),
        });
    }
    check_weights(weights)?;
    let n = first.dim_n();
    let mut d = CMatrix::zeros(n, n);
    for (c, &w) in channels.iter().zip(weights) {
        if c.dim_n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.dim_n(),
            });
        }
        d += &c.d * Complex64::new(w, 0.0);
    }
    for i in 0..n {
        d[(i, i)] = ONE;
    }
    PhaseDampingChannel::new(d)
}

/// `D_λ = (1-λ) D_Δ + λ D_cd`.
pub fn lambda_channel(lambda: f64) -> Result<PhaseDampingChannel> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::OutOfRange {
            name: "lambda",
            value: lambda,
            lower: 0.0,
            upper: 1.0,
        });
    }
    mix_channels(
        &[tetra_channel(), completely_decohering(4)?],
        &[1.0 - lambda, lambda],
    )
}

/// The four-element ensemble `{1⊗1, σz⊗1, 1⊗σz, σz⊗σz}` with equal weights,
/// which realizes the completely decohering two-qubit channel.
pub fn two_qubit_dephasing_ensemble() -> RuDecomposition {
    let id = CMatrix::identity(2, 2);
    let z = CMatrix::from_diagonal(&CVector::from_vec(alloc::vec![ONE, -ONE]));
    let unitaries = alloc::vec![
        linalg::kron(&id, &id),
        linalg::kron(&z, &id),
        linalg::kron(&id, &z),
        linalg::kron(&z, &z),
    ];
    RuDecomposition::new(alloc::vec![0.25; 4], unitaries).expect("Pauli-Z ensemble is unitary")
}
