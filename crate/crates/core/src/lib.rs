//! Numerical core for characterizing phase-damping (pure dephasing) quantum
//! channels.
//!
//! - [`channel`]: damping matrices, dynamical vectors, Kraus operators,
//!   random-unitary ensembles and the named channel families.
//! - [`bloch`]: generalized Gell-Mann bases, Bloch vectors, the
//!   Cayley–Menger simplex volume and the extremality certificate.
//! - [`choi`]: Jamiołkowski states, entanglement entropy and the
//!   entanglement / quantumness of assistance.
//! - [`sampling`]: seeded random channels and per-sample metrics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bloch;
pub mod channel;
pub mod choi;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod sampling;

pub use num_complex::Complex64;

pub use crate::bloch::{
    barycenter_purity, bloch_from_state, bloch_volume, cayley_menger_volume, channel_bloch_vectors,
    extremality_certificate, gram_volume_oracle, max_subvolume, squared_distances, su_generators,
    BlochVector, ExtremalityCertificate, GeneratorBasis, SquaredDistanceMatrix, SubVolume,
    DEFAULT_VOLUME_TOL,
};
pub use crate::channel::{
    apply_channel, apply_kraus, channel_from_vectors, channel_rank, completely_decohering,
    identity_channel, kraus_from_vectors, lambda_channel, mcmq_channel, mcmq_vectors, mix_channels,
    tetra_channel, tetrahedral_angle, two_qubit_dephasing_ensemble, validate_channel,
    validate_channel_with, vectors_from_channel, verify_ru_decomposition, DensityMatrix,
    DynamicalVectors, KrausSet, PhaseDampingChannel, RuDecomposition, ValidationReport,
};
pub use crate::choi::{
    choi_purity, choi_state, decomposition_from_isometry, entanglement_entropy,
    entanglement_of_assistance, quantumness_of_assistance, AssistanceProblem, AssistanceResult,
    Bound, ChoiState, Decomposition, OptimizerConfig, RestartOutcome, Spectrum,
};
pub use crate::error::{Error, Result};
pub use crate::linalg::{CMatrix, CVector};
pub use crate::sampling::{
    derived_seed, random_channel, random_unit_vector, random_unitary, sample_batch, sample_record,
    stream_rng, SampleRecord,
};
