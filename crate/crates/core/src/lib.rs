//! Exact state-vector simulation of interaction-free imaging with
//! OAM-encoded multi-pixel objects, plus closed-form oracles, Monte Carlo
//! click sampling and image reconstruction.
//!
//! The crate is organised bottom-up:
//!
//! - [`optics`]: photon states over polarisation ⊗ OAM ⊗ path and the
//!   optical elements acting on them.
//! - [`schemes`]: the single-pass, multi-pass and folded interferometers.
//! - [`analytics`]: closed-form and large-`N` outcome probabilities.
//! - [`experiment`]: shot sampling, click statistics, pattern reconstruction
//!   and transmission estimation.
//! - [`verify`]: named invariant suites used by the `ifm verify` command.

pub mod analytics;
pub mod error;
pub mod experiment;
pub mod optics;
pub mod schemes;
pub mod verify;

pub use error::{IfmError, Result};
