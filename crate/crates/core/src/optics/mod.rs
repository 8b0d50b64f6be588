//! Photon states and the optical elements that act on them.

mod detect;
mod element;
mod pattern;
mod state;

pub use detect::{detection_distribution, DetectionDistribution, Detector, DetectorMap, Port};
pub use element::{
    beam_splitter, identity, mirror_reflect, oam_converter, oam_sorter, object_attenuator,
    pockels_flip, polarisation_map, polarisation_rotator, polarising_beam_splitter, Direction,
    ElementOp, MirrorKind, OpKind, Placement, Structure,
};
pub use pattern::{PixelKind, PixelPattern};
pub use state::{BasisLabel, EntryPort, Layout, PhotonState, Polarisation};

use crate::error::Result;
use crate::schemes::SchemeKind;

/// Equal OAM superposition, H-polarised, injected where `kind` expects it.
pub fn make_initial_state(dim: usize, kind: SchemeKind) -> Result<PhotonState> {
    PhotonState::initial(dim, kind.entry_port())
}

/// `Σ|amp|²`, the probability that the photon has not been absorbed.
pub fn survival_probability(state: &PhotonState) -> f64 {
    state.survival_probability()
}
