//! Photon states over polarisation ⊗ OAM ⊗ spatial mode.
//!
//! The spatial register has `d + 1` modes: modes `0..d` are the pixel paths
//! inside the encoder (mode 0 doubles as the object arm outside it) and mode
//! `d` is the reference arm. Amplitudes are stored row-major as
//! `(pol, oam, mode)` so the mode index varies fastest.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{IfmError, Result};

/// Slack allowed above unit norm before a state is rejected.
const NORM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Polarisation {
    H,
    V,
}

impl Polarisation {
    pub const ALL: [Polarisation; 2] = [Polarisation::H, Polarisation::V];

    pub fn index(self) -> usize {
        match self {
            Polarisation::H => 0,
            Polarisation::V => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarisation::H => Polarisation::V,
            Polarisation::V => Polarisation::H,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarisation::H => 'h',
            Polarisation::V => 'v',
        }
    }
}

/// Where the photon is injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryPort {
    /// Spatial mode 0.
    ObjectArm,
    /// Spatial mode `d`.
    ReferenceArm,
}

/// A single basis label `|pol, ℓ, m⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub pol: Polarisation,
    pub oam: usize,
    pub mode: usize,
}

/// Shape of the composite space for a given OAM dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    dim: usize,
}

impl Layout {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(IfmError::ZeroDimension);
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> usize {
        self.dim + 1
    }

    pub fn reference_mode(&self) -> usize {
        self.dim
    }

    /// Number of basis states, `2·d·(d+1)`. Never zero.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        2 * self.dim * self.modes()
    }

    pub fn index(&self, pol: Polarisation, oam: usize, mode: usize) -> usize {
        debug_assert!(oam < self.dim && mode <= self.dim);
        (pol.index() * self.dim + oam) * self.modes() + mode
    }

    pub fn label(&self, index: usize) -> BasisLabel {
        let mode = index % self.modes();
        let rest = index / self.modes();
        let oam = rest % self.dim;
        let pol = if rest / self.dim == 0 {
            Polarisation::H
        } else {
            Polarisation::V
        };
        BasisLabel { pol, oam, mode }
    }

    /// Iterates every basis label in storage order.
    pub fn labels(&self) -> impl Iterator<Item = BasisLabel> + '_ {
        (0..self.len()).map(move |i| self.label(i))
    }
}

/// Sub-normalised pure state of a single photon.
///
/// `Σ|amp|²` is the probability that the photon has not been absorbed yet.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonState {
    layout: Layout,
    amps: Vec<Complex64>,
}

impl PhotonState {
    pub fn zeros(dim: usize) -> Result<Self> {
        let layout = Layout::new(dim)?;
        Ok(Self {
            layout,
            amps: vec![Complex64::new(0.0, 0.0); layout.len()],
        })
    }

    pub fn basis(dim: usize, pol: Polarisation, oam: usize, mode: usize) -> Result<Self> {
        let mut state = Self::zeros(dim)?;
        let idx = state.layout.index(pol, oam, mode);
        state.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps raw amplitudes; rejects vectors of the wrong length or with norm above 1.
    pub fn from_amplitudes(dim: usize, amps: Vec<Complex64>) -> Result<Self> {
        let layout = Layout::new(dim)?;
        if amps.len() != layout.len() {
            return Err(IfmError::DimensionMismatch {
                op: layout.len(),
                state: amps.len(),
            });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm > 1.0 + NORM_SLACK {
            return Err(IfmError::NotSubNormalized(norm));
        }
        Ok(Self { layout, amps })
    }

    pub(crate) fn from_raw(layout: Layout, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), layout.len());
        Self { layout, amps }
    }

    /// Equal superposition `(1/√d) Σ_ℓ |H, ℓ, m⟩` with `m` given by the entry port.
    pub fn initial(dim: usize, port: EntryPort) -> Result<Self> {
        let mut state = Self::zeros(dim)?;
        let mode = match port {
            EntryPort::ObjectArm => 0,
            EntryPort::ReferenceArm => dim,
        };
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        for oam in 0..dim {
            let idx = state.layout.index(Polarisation::H, oam, mode);
            state.amps[idx] = amp;
        }
        Ok(state)
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, pol: Polarisation, oam: usize, mode: usize) -> Complex64 {
        self.amps[self.layout.index(pol, oam, mode)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability the photon is still alive, `Σ|amp|²`.
    pub fn survival_probability(&self) -> f64 {
        self.norm_sqr()
    }

    pub fn absorption_probability(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PhotonState) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(IfmError::DimensionMismatch {
                op: self.amps.len(),
                state: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &PhotonState) -> f64 {
        assert_eq!(self.layout, other.layout, "state dimensions differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Returns the state rescaled to unit norm, or `None` if it has vanished.
    pub fn normalized(&self) -> Option<PhotonState> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return None;
        }
        Some(Self {
            layout: self.layout,
            amps: self.amps.iter().map(|a| a / n).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_round_trip() {
        let layout = Layout::new(3).unwrap();
        assert_eq!(layout.len(), 24);
        for (i, label) in layout.labels().enumerate() {
            assert_eq!(layout.index(label.pol, label.oam, label.mode), i);
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(PhotonState::zeros(0), Err(IfmError::ZeroDimension));
        assert_eq!(
            PhotonState::initial(0, EntryPort::ReferenceArm),
            Err(IfmError::ZeroDimension)
        );
    }

    #[test]
    fn single_pixel_initial_state_is_one_basis_vector() {
        let s = PhotonState::initial(1, EntryPort::ReferenceArm).unwrap();
        assert_eq!(s.amp(Polarisation::H, 0, 1), Complex64::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn four_pixel_initial_state_has_half_amplitudes() {
        let s = PhotonState::initial(4, EntryPort::ReferenceArm).unwrap();
        for l in 0..4 {
            assert_eq!(s.amp(Polarisation::H, l, 4).re, 0.5);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn object_arm_entry() {
        let s = PhotonState::initial(2, EntryPort::ObjectArm).unwrap();
        let a = 1.0 / 2f64.sqrt();
        assert!((s.amp(Polarisation::H, 0, 0).re - a).abs() < 1e-15);
        assert!((s.amp(Polarisation::H, 1, 0).re - a).abs() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn over_normalised_amplitudes_rejected() {
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(1.0, 0.0);
        amps[1] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            PhotonState::from_amplitudes(1, amps),
            Err(IfmError::NotSubNormalized(_))
        ));
    }
}
