//! Seeded random channels.
//!
//! Every sample owns a ChaCha stream keyed by `(base_seed, index)`, so a batch
//! produces the same records whether it is generated serially, in parallel,
//! or one index at a time.

use alloc::vec::Vec;

use nalgebra::QR;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch::extremality_certificate;
use crate::channel::{channel_from_vectors, DynamicalVectors, PhaseDampingChannel};
use crate::choi::{choi_purity, quantumness_of_assistance, OptimizerConfig};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};

/// The generator used for all sampling.
pub type SampleRng = ChaCha8Rng;

/// Stream `index` of the generator seeded with `base_seed`.
pub fn stream_rng(base_seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

/// A seed drawn from stream `index` of `base_seed`, for handing to a
/// component that runs its own streams.
pub fn derived_seed(base_seed: u64, index: u64) -> u64 {
    stream_rng(base_seed, index).next_u64()
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Uniformly distributed unit vector in `C^r`: a complex Gaussian vector
/// scaled to unit length.
pub fn random_unit_vector<R: Rng + ?Sized>(r: usize, rng: &mut R) -> Result<CVector> {
    if r == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    loop {
        let v = CVector::from_fn(r, |_, _| complex_normal(rng));
        let norm = v.norm();
        if norm > 1e-150 {
            return Ok(v / Complex64::new(norm, 0.0));
        }
    }
}

/// Haar-distributed `k×k` unitary, from the QR factorization of a complex
/// Ginibre matrix with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(k: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(k, k, |_, _| complex_normal(rng));
    let qr = QR::new(g);
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `n` independent uniform unit vectors in `C^r`.
pub fn random_vectors<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<DynamicalVectors> {
    if n == 0 {
        return Err(Error::Empty);
    }
    let vectors = (0..n)
        .map(|_| random_unit_vector(r, rng))
        .collect::<Result<Vec<_>>>()?;
    DynamicalVectors::new(vectors)
}

/// Gram channel of `n` independent uniform unit vectors in `C^r`; its rank
/// is `min(n, r)` almost surely.
pub fn random_channel<R: Rng + ?Sized>(
    n: usize,
    r: usize,
    rng: &mut R,
) -> Result<PhaseDampingChannel> {
    Ok(channel_from_vectors(&random_vectors(n, r, rng)?))
}

/// Metrics of one sampled channel.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRecord {
    pub index: u64,
    pub seed: u64,
    pub channel: PhaseDampingChannel,
    pub rank: usize,
    pub v_b: f64,
    pub purity: f64,
    pub q_a: f64,
    pub e_a_lower: f64,
    pub converged: bool,
}

/// Draws the channel for `(base_seed, index)` and returns it with the seed
/// for its optimizer restarts, both taken from the sample's own stream.
pub fn sample_channel(
    n: usize,
    r: usize,
    base_seed: u64,
    index: u64,
) -> Result<(PhaseDampingChannel, u64)> {
    let mut rng = stream_rng(base_seed, index);
    let channel = random_channel(n, r, &mut rng)?;
    Ok((channel, rng.next_u64()))
}

/// Computes the record for sample `index`. `cfg.seed` is replaced by the
/// seed drawn from the sample stream.
pub fn sample_record(
    n: usize,
    r: usize,
    base_seed: u64,
    index: u64,
    cfg: &OptimizerConfig,
) -> Result<SampleRecord> {
    let (channel, opt_seed) = sample_channel(n, r, base_seed, index)?;
    let cfg = OptimizerConfig {
        seed: opt_seed,
        ..cfg.clone()
    };
    let assistance = quantumness_of_assistance(&channel, &cfg)?;
    let cert = extremality_certificate(&channel, crate::bloch::DEFAULT_VOLUME_TOL);
    Ok(SampleRecord {
        index,
        seed: base_seed,
        rank: channel.rank(),
        v_b: cert.best_volume,
        purity: choi_purity(&channel),
        q_a: assistance.q_a,
        e_a_lower: assistance.e_a_lower,
        converged: assistance.converged,
        channel,
    })
}

/// Records `0..count` in index order.
pub fn sample_batch(
    count: usize,
    n: usize,
    r: usize,
    base_seed: u64,
    cfg: &OptimizerConfig,
) -> Result<Vec<SampleRecord>> {
    if count == 0 {
        return Err(Error::Empty);
    }
    (0..count as u64)
        .map(|i| sample_record(n, r, base_seed, i, cfg))
        .collect()
}
