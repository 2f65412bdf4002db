//! Bloch geometry of the dynamical vectors and the simplex-volume witness.
//!
//! Every pure state `|a⟩ ∈ C^r` has a Bloch vector `b ∈ R^{r²-1}` with
//! `|a⟩⟨a| = ½(2/r·1 + b·σ)`, where `σ` is a trace-orthogonal basis of
//! traceless Hermitian generators normalized to `tr σᵢσⱼ = 2δᵢⱼ`. Squared
//! distances between Bloch vectors of dynamical vectors only depend on the
//! damping factors, `s²ₘₙ = 4(1 - |Dₘₙ|²)`, so the volume of their simplex
//! follows from `D` through the Cayley–Menger determinant without ever
//! constructing coordinates.
//!
//! When `r² ≤ N` the projectors can span the full operator space on `C^r`,
//! and a non-zero volume certifies that the channel is extremal among unital
//! channels and hence admits no random-unitary decomposition.

use alloc::vec::Vec;

use itertools::Itertools;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{vectors_from_channel, PhaseDampingChannel, NORM_TOL};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, I, ONE};

/// Default absolute volume threshold for certifying extremality.
pub const DEFAULT_VOLUME_TOL: f64 = 1e-7;

/// Generalized Gell-Mann generators of SU(r).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBasis {
    rank: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn rank_r(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Symmetric off-diagonal generators first, then antisymmetric ones, then
/// the diagonal ones. For `r = 2` this is `(σx, σy, σz)`.
pub fn su_generators(r: usize) -> Result<GeneratorBasis> {
    if r < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: r });
    }
    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|j| ((j + 1)..r).map(move |k| (j, k)))
        .collect();
    let mut generators = Vec::with_capacity(r * r - 1);
    for &(j, k) in &pairs {
        let mut g = CMatrix::zeros(r, r);
        g[(j, k)] = ONE;
        g[(k, j)] = ONE;
        generators.push(g);
    }
    for &(j, k) in &pairs {
        let mut g = CMatrix::zeros(r, r);
        g[(j, k)] = -I;
        g[(k, j)] = I;
        generators.push(g);
    }
    for l in 1..r {
        let scale = libm::sqrt(2.0 / (l * (l + 1)) as f64);
        let mut g = CMatrix::zeros(r, r);
        for j in 0..l {
            g[(j, j)] = Complex64::new(scale, 0.0);
        }
        g[(l, l)] = Complex64::new(-(l as f64) * scale, 0.0);
        generators.push(g);
    }
    Ok(GeneratorBasis {
        rank: r,
        generators,
    })
}

/// Real coordinates of a projector in a [`GeneratorBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    coords: Vec<f64>,
}

impl BlochVector {
    pub fn new(coords: Vec<f64>) -> Self {
        BlochVector { coords }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }
}

/// `bᵢ = ⟨a|σᵢ|a⟩`.
pub fn bloch_from_state(a: &CVector, basis: &GeneratorBasis) -> Result<BlochVector> {
    if a.len() != basis.rank {
        return Err(Error::DimensionMismatch {
            expected: basis.rank,
            found: a.len(),
        });
    }
    let norm = a.norm();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let coords = basis
        .generators
        .iter()
        .map(|g| a.dotc(&(g * a)).re)
        .collect();
    Ok(BlochVector { coords })
}

/// `½(2/r·1 + b·σ)`.
pub fn projector_from_bloch(b: &BlochVector, basis: &GeneratorBasis) -> CMatrix {
    let r = basis.rank;
    let mut m = CMatrix::identity(r, r) * Complex64::new(1.0 / r as f64, 0.0);
    for (c, g) in b.coords.iter().zip(&basis.generators) {
        m += g * Complex64::new(0.5 * c, 0.0);
    }
    m
}

/// Bloch vectors of the dynamical vectors of `d`, in the basis of rank
/// `d.rank()`.
pub fn channel_bloch_vectors(d: &PhaseDampingChannel) -> Result<Vec<BlochVector>> {
    let vectors = vectors_from_channel(d);
    let basis = su_generators(vectors.rank_r())?;
    vectors
        .vectors()
        .iter()
        .map(|a| bloch_from_state(a, &basis))
        .collect()
}

/// Pairwise squared distances between simplex vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix {
    entries: DMatrix<f64>,
}

impl SquaredDistanceMatrix {
    /// Wraps a symmetric matrix with zero diagonal.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::NotSquare {
                rows: entries.nrows(),
                cols: entries.ncols(),
            });
        }
        Ok(SquaredDistanceMatrix { entries })
    }

    /// Squared Euclidean distances between explicit points.
    pub fn from_points(points: &[BlochVector]) -> Self {
        let k = points.len();
        let entries = DMatrix::from_fn(k, k, |i, j| {
            points[i]
                .coords
                .iter()
                .zip(&points[j].coords)
                .map(|(a, b)| (a - b) * (a - b))
                .sum()
        });
        SquaredDistanceMatrix { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Principal sub-matrix on `indices`.
    pub fn select(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        SquaredDistanceMatrix {
            entries: DMatrix::from_fn(k, k, |i, j| self.entries[(indices[i], indices[j])]),
        }
    }
}

/// `s²ₘₙ = 4(1 - |Dₘₙ|²)`.
pub fn squared_distances(d: &PhaseDampingChannel) -> SquaredDistanceMatrix {
    let n = d.dim_n();
    let entries = DMatrix::from_fn(n, n, |m, k| {
        if m == k {
            0.0
        } else {
            (4.0 * (1.0 - d.entry(m, k).norm_sqr())).max(0.0)
        }
    });
    SquaredDistanceMatrix { entries }
}

/// Volume of the `(k-1)`-simplex with the given squared edge lengths,
/// `Vol² = (-1)^k / (2^{k-1} ((k-1)!)²) · det(A)` with `A` the bordered
/// Cayley–Menger matrix. Fewer than two points span no volume. Negative
/// round-off in `Vol²` is clipped to zero.
pub fn cayley_menger_volume(s: &SquaredDistanceMatrix) -> f64 {
    let k = s.len();
    if k < 2 {
        return 0.0;
    }
    let mut a = DMatrix::<f64>::zeros(k + 1, k + 1);
    for i in 1..=k {
        a[(0, i)] = 1.0;
        a[(i, 0)] = 1.0;
        for j in 1..=k {
            a[(i, j)] = s.entries[(i - 1, j - 1)];
        }
    }
    let det = a.lu().determinant();
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let fact = linalg::factorial(k - 1);
    let vol_sq = sign * det / (libm::pow(2.0, (k - 1) as f64) * fact * fact);
    libm::sqrt(vol_sq.max(0.0))
}

/// Volume of the simplex spanned by the Bloch vectors of all `N` dynamical
/// vectors.
pub fn bloch_volume(d: &PhaseDampingChannel) -> f64 {
    cayley_menger_volume(&squared_distances(d))
}

/// Best principal sub-simplex and the indices achieving it.
#[derive(Debug, Clone, PartialEq)]
pub struct SubVolume {
    pub volume: f64,
    pub indices: Vec<usize>,
}

/// Maximizes the simplex volume over all principal sub-matrices of size `r²`.
/// Ties resolve to the lexicographically first index set.
pub fn max_subvolume(d: &PhaseDampingChannel) -> Result<SubVolume> {
    let r = d.rank();
    let n = d.dim_n();
    if r * r >= n {
        return Err(Error::NoSubmatrices { rank: r, n });
    }
    let s = squared_distances(d);
    let mut best = SubVolume {
        volume: -1.0,
        indices: Vec::new(),
    };
    for idx in (0..n).combinations(r * r) {
        let v = cayley_menger_volume(&s.select(&idx));
        if v > best.volume {
            best = SubVolume {
                volume: v,
                indices: idx,
            };
        }
    }
    Ok(best)
}

/// Outcome of the volume test for extremality.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalityCertificate {
    pub rank: usize,
    pub r_squared_le_n: bool,
    /// Full-simplex volume when `r² ≥ N`, best sub-simplex volume when
    /// `r² < N`. Informational only when `r² > N`.
    pub best_volume: f64,
    pub certified_non_ru: bool,
    pub witness_indices: Vec<usize>,
    pub tolerance: f64,
}

/// Certifies a channel as non-random-unitary when `2 ≤ r`, `r² ≤ N` and the
/// relevant Bloch volume exceeds `tol`. The test is one-directional: a
/// negative outcome does not imply a random-unitary decomposition exists.
pub fn extremality_certificate(d: &PhaseDampingChannel, tol: f64) -> ExtremalityCertificate {
    let r = d.rank();
    let n = d.dim_n();
    let r_squared_le_n = r * r <= n;
    let (best_volume, witness_indices) = if r * r < n {
        let sub = max_subvolume(d).expect("r² < N checked above");
        (sub.volume, sub.indices)
    } else {
        (bloch_volume(d), (0..n).collect())
    };
    ExtremalityCertificate {
        rank: r,
        r_squared_le_n,
        best_volume,
        certified_non_ru: r >= 2 && r_squared_le_n && best_volume > tol,
        witness_indices,
        tolerance: tol,
    }
}

/// Channel purity from the barycenter `b̄` of the channel's Bloch vectors,
/// `1/r + ½|b̄|²`; for rank 2 this is `½(1 + |b̄|²)`.
pub fn barycenter_purity(blochs: &[BlochVector]) -> Result<f64> {
    let first = blochs.first().ok_or(Error::Empty)?;
    let dim = first.coords.len();
    let r = libm::round(libm::sqrt((dim + 1) as f64)) as usize;
    if r * r != dim + 1 {
        return Err(Error::DimensionMismatch {
            expected: r * r - 1,
            found: dim,
        });
    }
    let mut mean = alloc::vec![0.0f64; dim];
    for b in blochs {
        if b.coords.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: b.coords.len(),
            });
        }
        for (m, c) in mean.iter_mut().zip(&b.coords) {
            *m += c;
        }
    }
    let len = blochs.len() as f64;
    let norm_sqr: f64 = mean.iter().map(|m| (m / len) * (m / len)).sum();
    Ok(1.0 / r as f64 + 0.5 * norm_sqr)
}

/// Simplex volume from explicit coordinates, `√det(G) / (k-1)!` with `G` the
/// Gram matrix of the edge vectors from the last point. Shares no code with
/// the Cayley–Menger route and serves as its cross-check.
pub fn gram_volume_oracle(points: &[BlochVector]) -> f64 {
    let k = points.len();
    if k < 2 {
        return 0.0;
    }
    let last = &points[k - 1].coords;
    let edges: Vec<Vec<f64>> = points[..k - 1]
        .iter()
        .map(|p| p.coords.iter().zip(last).map(|(a, b)| a - b).collect())
        .collect();
    let g = DMatrix::from_fn(k - 1, k - 1, |i, j| {
        edges[i]
            .iter()
            .zip(&edges[j])
            .map(|(a, b)| a * b)
            .sum::<f64>()
    });
    libm::sqrt(g.lu().determinant().max(0.0)) / linalg::factorial(k - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{
        completely_decohering, identity_channel, mcmq_channel, mcmq_vectors, tetra_channel,
        tetrahedral_angle,
    };
    use alloc::vec;

    fn tetra_volume() -> f64 {
        8.0 * libm::sqrt(3.0) / 27.0
    }

    #[test]
    fn su2_generators_are_paulis() {
        let b = su_generators(2).unwrap();
        let x = CMatrix::from_row_slice(2, 2, &[linalg::ZERO, ONE, ONE, linalg::ZERO]);
        let y = CMatrix::from_row_slice(2, 2, &[linalg::ZERO, -I, I, linalg::ZERO]);
        let z = CMatrix::from_row_slice(2, 2, &[ONE, linalg::ZERO, linalg::ZERO, -ONE]);
        assert_eq!(b.generators(), &[x, y, z]);
        assert!(su_generators(1).is_err());
    }

    #[test]
    fn generators_are_traceless_and_orthogonal() {
        for r in 2..=5 {
            let b = su_generators(r).unwrap();
            assert_eq!(b.len(), r * r - 1);
            for (i, gi) in b.generators().iter().enumerate() {
                assert!(linalg::trace(gi).norm() < 1e-12);
                assert!(linalg::hermiticity_defect(gi) < 1e-15);
                for (j, gj) in b.generators().iter().enumerate() {
                    let t = linalg::trace(&(gi * gj));
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((t - Complex64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn qubit_bloch_vectors() {
        let b = su_generators(2).unwrap();
        let north = CVector::from_vec(vec![ONE, linalg::ZERO]);
        assert_eq!(
            bloch_from_state(&north, &b).unwrap().coords(),
            &[0.0, 0.0, 1.0]
        );
        let s = libm::sqrt(0.5);
        let plus = CVector::from_vec(vec![Complex64::new(s, 0.0); 2]);
        let v = bloch_from_state(&plus, &b).unwrap();
        assert!((v.coords()[0] - 1.0).abs() < 1e-15 && v.coords()[1].abs() < 1e-15);

        let alpha = tetrahedral_angle();
        let family = mcmq_vectors(alpha).unwrap();
        let v = bloch_from_state(&family.vectors()[1], &b).unwrap();
        let expect = [2.0 * libm::sqrt(2.0) / 3.0, 0.0, -1.0 / 3.0];
        for (c, e) in v.coords().iter().zip(expect) {
            assert!((c - e).abs() < 1e-12);
        }
        let bad = CVector::from_vec(vec![ONE, ONE]);
        assert!(matches!(
            bloch_from_state(&bad, &b),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn projector_round_trip_in_higher_rank() {
        let b = su_generators(3).unwrap();
        let a = CVector::from_vec(vec![
            Complex64::new(0.3, 0.4),
            Complex64::new(-0.5, 0.1),
            Complex64::new(0.2, -0.3),
        ]);
        let a = &a / Complex64::new(a.norm(), 0.0);
        let v = bloch_from_state(&a, &b).unwrap();
        assert!((v.norm_sqr() - 2.0 * (1.0 - 1.0 / 3.0)).abs() < 1e-12);
        let p = projector_from_bloch(&v, &b);
        assert!(linalg::max_abs_diff(&p, &(&a * a.adjoint())) < 1e-12);
    }

    #[test]
    fn distances_of_named_channels() {
        let s = squared_distances(&identity_channel(4).unwrap());
        assert!(s.entries().iter().all(|&x| x.abs() < 1e-15));
        let s = squared_distances(&completely_decohering(4).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(s.entries()[(i, j)], if i == j { 0.0 } else { 4.0 });
            }
        }
        let s = squared_distances(&tetra_channel());
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!((s.entries()[(i, j)] - 8.0 / 3.0).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn regular_simplex_volumes() {
        let zero = SquaredDistanceMatrix::new(DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(cayley_menger_volume(&zero), 0.0);
        let reg = |s2: f64| {
            SquaredDistanceMatrix::new(DMatrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { s2 }))
                .unwrap()
        };
        assert!((cayley_menger_volume(&reg(8.0 / 3.0)) - tetra_volume()).abs() < 1e-12);
        assert!((cayley_menger_volume(&reg(4.0)) - 2.0 * libm::sqrt(2.0) / 3.0).abs() < 1e-12);
        // a segment of length 2 and an equilateral triangle of side 1
        let seg = SquaredDistanceMatrix::new(DMatrix::from_row_slice(2, 2, &[0.0, 4.0, 4.0, 0.0]))
            .unwrap();
        assert!((cayley_menger_volume(&seg) - 2.0).abs() < 1e-14);
        let tri = SquaredDistanceMatrix::new(DMatrix::from_fn(3, 3, |i, j| (i != j) as u8 as f64))
            .unwrap();
        assert!((cayley_menger_volume(&tri) - libm::sqrt(3.0) / 4.0).abs() < 1e-14);
    }

    #[test]
    fn bloch_volume_of_named_channels() {
        assert!(bloch_volume(&identity_channel(4).unwrap()) < 1e-7);
        assert!((bloch_volume(&tetra_channel()) - tetra_volume()).abs() < 1e-10);
        assert!(
            (bloch_volume(&completely_decohering(4).unwrap()) - 0.942_809_041_582_063_4).abs()
                < 1e-10
        );
    }

    #[test]
    fn mcmq_volume_matches_cone_formula() {
        let amax = tetrahedral_angle();
        for i in 0..=20 {
            let a = amax * i as f64 / 20.0;
            let cone = libm::sqrt(3.0) / 4.0 * libm::sin(a).powi(2) * (1.0 - libm::cos(a));
            let v = bloch_volume(&mcmq_channel(a).unwrap());
            assert!((v - cone).abs() < 1e-10, "alpha {a}: {v} vs {cone}");
        }
    }

    #[test]
    fn oracle_basic_shapes() {
        let tri = [
            BlochVector::new(vec![0.0, 0.0]),
            BlochVector::new(vec![1.0, 0.0]),
            BlochVector::new(vec![0.0, 1.0]),
        ];
        assert!((gram_volume_oracle(&tri) - 0.5).abs() < 1e-15);
        let line = [
            BlochVector::new(vec![0.0, 0.0]),
            BlochVector::new(vec![1.0, 1.0]),
            BlochVector::new(vec![2.0, 2.0]),
        ];
        assert!(gram_volume_oracle(&line) < 1e-7);
        let b = su_generators(2).unwrap();
        let tetra: Vec<_> = mcmq_vectors(tetrahedral_angle())
            .unwrap()
            .vectors()
            .iter()
            .map(|a| bloch_from_state(a, &b).unwrap())
            .collect();
        assert!((gram_volume_oracle(&tetra) - tetra_volume()).abs() < 1e-12);
    }

    fn tetra_plus_duplicate() -> PhaseDampingChannel {
        let v = mcmq_vectors(tetrahedral_angle()).unwrap();
        let mut vs = v.vectors().to_vec();
        vs.push(vs[2].clone());
        crate::channel::channel_from_vectors(&crate::channel::DynamicalVectors::new(vs).unwrap())
    }

    #[test]
    fn subvolume_skips_duplicate_vector() {
        let d = tetra_plus_duplicate();
        assert_eq!(d.rank(), 2);
        assert!(bloch_volume(&d) < 1e-7);
        let sub = max_subvolume(&d).unwrap();
        assert!((sub.volume - tetra_volume()).abs() < 1e-10);
        assert_eq!(sub.indices, vec![0, 1, 2, 3]);

        let all_same = identity_channel(5).unwrap();
        assert!(max_subvolume(&all_same).unwrap().volume < 1e-12);
        assert!(matches!(
            max_subvolume(&tetra_channel()),
            Err(Error::NoSubmatrices { rank: 2, n: 4 })
        ));
    }

    #[test]
    fn certificates_of_named_channels() {
        let c = extremality_certificate(&tetra_channel(), DEFAULT_VOLUME_TOL);
        assert!(c.certified_non_ru && c.r_squared_le_n && c.rank == 2);

        let c = extremality_certificate(&completely_decohering(4).unwrap(), DEFAULT_VOLUME_TOL);
        assert!(!c.certified_non_ru && !c.r_squared_le_n);
        assert!((c.best_volume - 0.9428).abs() < 1e-4);

        let c = extremality_certificate(&identity_channel(4).unwrap(), DEFAULT_VOLUME_TOL);
        assert!(!c.certified_non_ru);
        assert_eq!(c.rank, 1);

        let c = extremality_certificate(&tetra_plus_duplicate(), DEFAULT_VOLUME_TOL);
        assert!(c.certified_non_ru);
        assert_eq!(c.witness_indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn barycenter_purity_cases() {
        let b = su_generators(2).unwrap();
        let blochs = |alpha: f64| -> Vec<BlochVector> {
            mcmq_vectors(alpha)
                .unwrap()
                .vectors()
                .iter()
                .map(|a| bloch_from_state(a, &b).unwrap())
                .collect()
        };
        assert!((barycenter_purity(&blochs(tetrahedral_angle())).unwrap() - 0.5).abs() < 1e-12);
        assert!((barycenter_purity(&blochs(0.0)).unwrap() - 1.0).abs() < 1e-12);
        let a = 0.7;
        let z = (1.0 + 3.0 * libm::cos(a)) / 4.0;
        assert!((barycenter_purity(&blochs(a)).unwrap() - 0.5 * (1.0 + z * z)).abs() < 1e-12);
        assert_eq!(barycenter_purity(&[]), Err(Error::Empty));
        assert!(barycenter_purity(&[BlochVector::new(vec![0.0; 2])]).is_err());
    }
}
