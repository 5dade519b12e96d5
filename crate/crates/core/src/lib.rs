//! Location-privacy enhancement for mmWave MISO-OFDM localisation with
//! structured artificial noise (SAN).
//!
//! Alice precodes the pilots with a beamformer that adds a delayed,
//! angle-shifted copy of every propagation path. A legitimate receiver that
//! holds the two-parameter key δ = [δ_τ, δ_θ] folds the copy into its known
//! pilots; an eavesdropper sees a channel with twice as many, closely spaced
//! paths. The crate models the channel, the beamformer and both receivers'
//! Cramér-Rao bounds, and drives seeded SNR sweeps that write CSV results.
//!
//! Module map:
//! - [`geometry`]: scenario, delays, departure angles, free-space gains
//! - [`channel`]: Fourier/steering vectors, true and fake channel rows
//! - [`signaling`]: pilots, SAN beamformer, key, observations, Gaussian baseline
//! - [`fisher`]: analytic Jacobians, Fisher information, CRLBs
//! - [`metrics`]: minimal separation, resolvability, SNR, leakage
//! - [`experiment`]: config, sweeps, CSV/manifest output
//! - [`validation`]: self-check suite with finite-difference and brute-force oracles

// `!(x > 0.0)` is used on purpose so NaN is rejected; grids are indexed by (g, n).
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod channel;
pub mod error;
pub mod experiment;
pub mod fisher;
pub mod geometry;
pub mod metrics;
mod rng;
pub mod signaling;
pub mod validation;

pub use error::{Result, SanError};
pub use geometry::{Receiver, Scenario};
pub use signaling::{Mode, SanKey};
