//! Small dense helpers on top of nalgebra.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative cutoff below which an eigenvalue does not count toward the rank.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Components smaller than this are skipped when fixing eigenvector phases.
const PHASE_FIX_EPS: f64 = 1e-10;

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order. Each eigenvector has its first non-negligible component
/// rotated onto the positive real axis.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn new(m: &CMatrix) -> Self {
        let n = m.nrows();
        // symmetrize so round-off in the input cannot leak into the solver
        let h = CMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
        let eig = SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let phase = v
                .iter()
                .find(|z| z.norm() > PHASE_FIX_EPS)
                .map(|z| z.conj() / z.norm())
                .unwrap_or(ONE);
            for row in 0..n {
                vectors[(row, col)] = v[row] * phase;
            }
        }
        HermitianEigen { values, vectors }
    }

    pub fn max_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Number of eigenvalues above `RANK_CUTOFF * λ_max`.
    pub fn rank(&self) -> usize {
        let lmax = self.max_value();
        if lmax <= 0.0 {
            return 0;
        }
        self.values
            .iter()
            .filter(|&&v| v > RANK_CUTOFF * lmax)
            .count()
    }
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry-wise modulus of `m - m†`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Largest entry-wise deviation of `m† m` from the identity.
pub fn isometry_defect(m: &CMatrix) -> f64 {
    let g = m.adjoint() * m;
    max_abs_diff(&g, &CMatrix::identity(g.nrows(), g.ncols()))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[(i, i)]).sum()
}

/// Kronecker product.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Base-2 Shannon entropy of a (not necessarily normalized) weight vector.
/// Entries at or below `clip` contribute nothing.
pub fn shannon_entropy_bits(weights: impl IntoIterator<Item = f64>, clip: f64) -> f64 {
    let w: Vec<f64> = weights.into_iter().collect();
    let total: f64 = w.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut h = 0.0;
    for &x in &w {
        let p = x / total;
        if p > clip {
            h -= p * libm::log2(p);
        }
    }
    h
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
