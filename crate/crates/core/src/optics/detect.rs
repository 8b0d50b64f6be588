//! Detector labels, basis-to-detector maps and outcome distributions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::state::{BasisLabel, Layout, PhotonState, Polarisation};
use crate::error::{IfmError, Result};

/// Output port of a single-pass interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    /// Port 0, the bright port.
    Zero,
    /// Port `d`, the dark port.
    Dark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Detector {
    /// Single-pixel Mach–Zehnder outputs: `D0` (bright) and `D1` (dark).
    Port(Port),
    /// Single-pixel polarisation readout: `Dh`, `Dv`.
    Polarisation(Polarisation),
    /// Single-pass multi-pixel readout: `D0,ℓ` and `Dd,ℓ`.
    PortPixel { port: Port, pixel: usize },
    /// Multi-pass readout: `Dℓ,h` and `Dℓ,v`.
    PixelPolarisation { pixel: usize, pol: Polarisation },
}

impl Detector {
    pub fn pixel(&self) -> Option<usize> {
        match *self {
            Detector::PortPixel { pixel, .. } | Detector::PixelPolarisation { pixel, .. } => {
                Some(pixel)
            }
            _ => None,
        }
    }

    /// Same detector with polarisation swapped (identity for port detectors).
    pub fn with_flipped_polarisation(self) -> Detector {
        match self {
            Detector::Polarisation(p) => Detector::Polarisation(p.flipped()),
            Detector::PixelPolarisation { pixel, pol } => Detector::PixelPolarisation {
                pixel,
                pol: pol.flipped(),
            },
            other => other,
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Detector::Port(Port::Zero) => write!(f, "D0"),
            Detector::Port(Port::Dark) => write!(f, "D1"),
            Detector::Polarisation(p) => write!(f, "D{}", p.symbol()),
            Detector::PortPixel { port, pixel } => {
                let p = if port == Port::Zero { "0" } else { "d" };
                write!(f, "D{p},{pixel}")
            }
            Detector::PixelPolarisation { pixel, pol } => write!(f, "D{pixel},{}", pol.symbol()),
        }
    }
}

impl FromStr for Detector {
    type Err = IfmError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || IfmError::UnknownDetector(s.to_string());
        let body = s.strip_prefix('D').ok_or_else(bad)?;
        let pol = |t: &str| match t {
            "h" => Some(Polarisation::H),
            "v" => Some(Polarisation::V),
            _ => None,
        };
        match body.split_once(',') {
            None => match body {
                "0" => Ok(Detector::Port(Port::Zero)),
                "1" => Ok(Detector::Port(Port::Dark)),
                other => pol(other).map(Detector::Polarisation).ok_or_else(bad),
            },
            Some((a, b)) => {
                if let Some(p) = pol(b) {
                    let pixel = a.parse().map_err(|_| bad())?;
                    return Ok(Detector::PixelPolarisation { pixel, pol: p });
                }
                let port = match a {
                    "0" => Port::Zero,
                    "d" => Port::Dark,
                    _ => return Err(bad()),
                };
                let pixel = b.parse().map_err(|_| bad())?;
                Ok(Detector::PortPixel { port, pixel })
            }
        }
    }
}

/// Assigns each basis index to at most one detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorMap {
    layout: Layout,
    assignments: Vec<Option<Detector>>,
    detectors: Vec<Detector>,
}

impl DetectorMap {
    /// Builds a map from explicit `(basis index, detector)` pairs. An index
    /// listed twice with different detectors is an error.
    pub fn from_assignments(
        dim: usize,
        pairs: impl IntoIterator<Item = (usize, Detector)>,
    ) -> Result<Self> {
        let layout = Layout::new(dim)?;
        let mut assignments = vec![None; layout.len()];
        for (index, det) in pairs {
            let slot = assignments
                .get_mut(index)
                .ok_or(IfmError::BasisIndexOutOfRange {
                    index,
                    len: layout.len(),
                })?;
            match slot {
                Some(prev) if *prev != det => return Err(IfmError::DuplicateDetector { index }),
                _ => *slot = Some(det),
            }
        }
        Ok(Self::finish(layout, assignments))
    }

    pub fn from_fn(dim: usize, f: impl Fn(BasisLabel) -> Option<Detector>) -> Result<Self> {
        let layout = Layout::new(dim)?;
        let assignments = layout.labels().map(f).collect();
        Ok(Self::finish(layout, assignments))
    }

    fn finish(layout: Layout, assignments: Vec<Option<Detector>>) -> Self {
        let detectors: BTreeSet<Detector> = assignments.iter().flatten().copied().collect();
        Self {
            layout,
            assignments,
            detectors: detectors.into_iter().collect(),
        }
    }

    pub fn detectors(&self) -> &[Detector] {
        &self.detectors
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    pub fn detector_at(&self, index: usize) -> Option<Detector> {
        self.assignments.get(index).copied().flatten()
    }

    /// Same map with every detector relabelled through `f`.
    pub fn relabel(&self, f: impl Fn(Detector) -> Detector) -> Self {
        let assignments = self.assignments.iter().map(|a| a.map(&f)).collect();
        Self::finish(self.layout, assignments)
    }
}

/// Probability per detector plus the absorbed and unrouted mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionDistribution {
    entries: Vec<(Detector, f64)>,
    absorbed: f64,
    undetected: f64,
}

impl DetectionDistribution {
    pub fn new(entries: Vec<(Detector, f64)>, absorbed: f64, undetected: f64) -> Self {
        let mut entries = entries;
        entries.sort_by_key(|e| e.0);
        Self {
            entries,
            absorbed,
            undetected,
        }
    }

    pub fn entries(&self) -> &[(Detector, f64)] {
        &self.entries
    }

    /// Probability of `det`; zero for detectors not in the support.
    pub fn probability(&self, det: &Detector) -> f64 {
        self.entries
            .iter()
            .find(|(d, _)| d == det)
            .map_or(0.0, |&(_, p)| p)
    }

    pub fn absorbed(&self) -> f64 {
        self.absorbed
    }

    /// Surviving mass on basis states no detector watches.
    pub fn undetected(&self) -> f64 {
        self.undetected
    }

    pub fn detected(&self) -> f64 {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Detector mass + unrouted mass + absorption.
    pub fn total(&self) -> f64 {
        self.detected() + self.undetected + self.absorbed
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        (self.total() - 1.0).abs() <= tol
    }

    pub fn relabel(&self, f: impl Fn(Detector) -> Detector) -> Self {
        Self::new(
            self.entries.iter().map(|&(d, p)| (f(d), p)).collect(),
            self.absorbed,
            self.undetected,
        )
    }

    /// Largest absolute difference over the union of supports and the absorbed mass.
    pub fn max_abs_diff(&self, other: &DetectionDistribution) -> f64 {
        let dets: BTreeSet<Detector> = self
            .entries
            .iter()
            .chain(&other.entries)
            .map(|(d, _)| *d)
            .collect();
        dets.iter()
            .map(|d| (self.probability(d) - other.probability(d)).abs())
            .chain([
                (self.absorbed - other.absorbed).abs(),
                (self.undetected - other.undetected).abs(),
            ])
            .fold(0.0, f64::max)
    }
}

/// Projects `state` onto the detector basis.
pub fn detection_distribution(
    state: &PhotonState,
    map: &DetectorMap,
) -> Result<DetectionDistribution> {
    if state.layout() != map.layout {
        return Err(IfmError::DimensionMismatch {
            op: map.dim(),
            state: state.dim(),
        });
    }
    let mut mass = vec![0.0; map.detectors.len()];
    let mut undetected = 0.0;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let p = a.norm_sqr();
        match map.assignments[i] {
            Some(det) => {
                let k = map.detectors.binary_search(&det).expect("detector listed");
                mass[k] += p;
            }
            None => undetected += p,
        }
    }
    Ok(DetectionDistribution::new(
        map.detectors.iter().copied().zip(mass).collect(),
        state.absorption_probability(),
        undetected,
    ))
}
