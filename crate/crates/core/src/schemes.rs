//! The interferometer layouts, assembled from [`crate::optics`] elements and
//! run cycle by cycle.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{IfmError, Result};
use crate::optics::{
    beam_splitter, detection_distribution, make_initial_state, mirror_reflect, oam_converter,
    oam_sorter, object_attenuator, pockels_flip, polarisation_rotator, polarising_beam_splitter,
    DetectionDistribution, Detector, DetectorMap, Direction, ElementOp, EntryPort, Layout,
    MirrorKind, PhotonState, PixelPattern, Placement, Polarisation, Port,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    /// Single-pixel Mach–Zehnder bomb tester.
    EvSinglePass,
    /// Single-pixel multi-pass polarisation scheme.
    ZenoSinglePixel,
    /// OAM-encoded Mach–Zehnder, one pass.
    MultipixelSinglePass,
    /// OAM-encoded multi-pass Mach–Zehnder scheme.
    MultipixelZeno,
    /// Folded (Michelson) version of the multi-pass scheme with Pockels switch-out.
    MichelsonZeno,
    /// Multi-pass scheme imaging grey-level pixels.
    SemitransparentZeno,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 6] = [
        SchemeKind::EvSinglePass,
        SchemeKind::ZenoSinglePixel,
        SchemeKind::MultipixelSinglePass,
        SchemeKind::MultipixelZeno,
        SchemeKind::MichelsonZeno,
        SchemeKind::SemitransparentZeno,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::EvSinglePass => "ev-single-pass",
            SchemeKind::ZenoSinglePixel => "zeno-single-pixel",
            SchemeKind::MultipixelSinglePass => "multipixel-single-pass",
            SchemeKind::MultipixelZeno => "multipixel-zeno",
            SchemeKind::MichelsonZeno => "michelson-zeno",
            SchemeKind::SemitransparentZeno => "semitransparent-zeno",
        }
    }

    pub fn is_single_pass(self) -> bool {
        matches!(
            self,
            SchemeKind::EvSinglePass | SchemeKind::MultipixelSinglePass
        )
    }

    pub fn is_zeno(self) -> bool {
        !self.is_single_pass()
    }

    /// Single-pixel kinds only accept `d = 1`.
    pub fn is_single_pixel(self) -> bool {
        matches!(self, SchemeKind::EvSinglePass | SchemeKind::ZenoSinglePixel)
    }

    pub fn entry_port(self) -> EntryPort {
        if self.is_single_pass() {
            EntryPort::ObjectArm
        } else {
            EntryPort::ReferenceArm
        }
    }

    /// Rotation per rotator pass for `cycles` cycles. The folded layout
    /// passes the rotator twice per cycle.
    pub fn canonical_theta(self, cycles: usize) -> f64 {
        match self {
            SchemeKind::EvSinglePass | SchemeKind::MultipixelSinglePass => 0.0,
            SchemeKind::MichelsonZeno => PI / (4 * cycles) as f64,
            _ => PI / (2 * cycles) as f64,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = IfmError;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| IfmError::UnknownScheme(s.to_string()))
    }
}

/// How the path-to-OAM encoder is realised in the element list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EncoderForm {
    /// Sorter, converter, object on pixel paths, inverse converter, inverse sorter.
    #[default]
    Composed,
    /// One OAM-diagonal attenuator on arm 0.
    Diagonal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeConfig {
    kind: SchemeKind,
    cycles: usize,
    theta: f64,
    pattern: PixelPattern,
    encoder: EncoderForm,
}

impl SchemeConfig {
    /// Validates the pattern against the kind and derives the rotation angle.
    /// `cycles` is ignored by single-pass kinds.
    pub fn new(kind: SchemeKind, pattern: PixelPattern, cycles: usize) -> Result<Self> {
        let pattern = PixelPattern::from_transmissions(pattern.transmissions().to_vec())?;
        if kind.is_single_pixel() {
            pattern.check_dim(1)?;
        }
        let cycles = if kind.is_single_pass() {
            1
        } else if cycles == 0 {
            return Err(IfmError::ZeroCycles);
        } else {
            cycles
        };
        Ok(Self {
            kind,
            cycles,
            theta: kind.canonical_theta(cycles),
            pattern,
            encoder: EncoderForm::default(),
        })
    }

    pub fn with_encoder(mut self, encoder: EncoderForm) -> Self {
        self.encoder = encoder;
        self
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.pattern.dim()
    }

    pub fn cycles(&self) -> usize {
        self.cycles
    }

    /// Rotation per rotator pass.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Rotation accumulated over one full cycle.
    pub fn theta_per_cycle(&self) -> f64 {
        match self.kind {
            SchemeKind::MichelsonZeno => 2.0 * self.theta,
            _ => self.theta,
        }
    }

    pub fn pattern(&self) -> &PixelPattern {
        &self.pattern
    }

    pub fn encoder(&self) -> EncoderForm {
        self.encoder
    }
}

/// An assembled layout: `cycle` is applied `repetitions` times, then `switch_out`.
#[derive(Debug, Clone)]
pub struct Scheme {
    pub cycle: Vec<ElementOp>,
    pub repetitions: usize,
    pub switch_out: Vec<ElementOp>,
    pub detectors: DetectorMap,
    pub initial: PhotonState,
}

impl Scheme {
    /// Total number of element applications.
    pub fn element_count(&self) -> usize {
        self.cycle.len() * self.repetitions + self.switch_out.len()
    }

    /// The full unrolled element sequence.
    pub fn elements(&self) -> impl Iterator<Item = &ElementOp> {
        (0..self.repetitions)
            .flat_map(move |_| self.cycle.iter())
            .chain(&self.switch_out)
    }
}

fn encoder(config: &SchemeConfig, mirror: bool) -> Result<Vec<ElementOp>> {
    let d = config.dim();
    Ok(match config.encoder {
        EncoderForm::Composed => {
            let mut ops = vec![
                oam_sorter(d, Direction::Forward)?,
                oam_converter(d, Direction::Forward)?,
                object_attenuator(&config.pattern, Placement::PixelPaths)?,
            ];
            if mirror {
                ops.push(mirror_reflect(MirrorKind::Plain, d)?);
            }
            ops.push(oam_converter(d, Direction::Inverse)?);
            ops.push(oam_sorter(d, Direction::Inverse)?);
            ops
        }
        EncoderForm::Diagonal => vec![object_attenuator(&config.pattern, Placement::OamDiagonal)?],
    })
}

/// Readout on the reference mode, resolved in OAM and polarisation.
fn polarisation_detectors(dim: usize, single_pixel: bool) -> Result<DetectorMap> {
    DetectorMap::from_fn(dim, |b| {
        let det = if single_pixel {
            Detector::Polarisation(b.pol)
        } else {
            Detector::PixelPolarisation {
                pixel: b.oam,
                pol: b.pol,
            }
        };
        (b.mode == dim).then_some(det)
    })
}

/// Element list and detector map for `config`.
pub fn build_scheme(config: &SchemeConfig) -> Result<Scheme> {
    let d = config.dim();
    let initial = make_initial_state(d, config.kind)?;
    let scheme = match config.kind {
        SchemeKind::EvSinglePass => Scheme {
            cycle: vec![
                beam_splitter(d)?,
                object_attenuator(&config.pattern, Placement::PixelPaths)?,
                beam_splitter(d)?,
            ],
            repetitions: 1,
            switch_out: vec![],
            detectors: DetectorMap::from_fn(d, |b| {
                Some(Detector::Port(if b.mode == 0 {
                    Port::Zero
                } else {
                    Port::Dark
                }))
            })?,
            initial,
        },
        SchemeKind::MultipixelSinglePass => {
            let mut cycle = vec![beam_splitter(d)?];
            cycle.extend(encoder(config, false)?);
            cycle.push(beam_splitter(d)?);
            // the output sorter on port d is folded into the OAM-resolved readout
            let detectors = DetectorMap::from_fn(d, |b| {
                let port = match b.mode {
                    0 => Port::Zero,
                    m if m == d => Port::Dark,
                    _ => return None,
                };
                Some(Detector::PortPixel { port, pixel: b.oam })
            })?;
            Scheme {
                cycle,
                repetitions: 1,
                switch_out: vec![],
                detectors,
                initial,
            }
        }
        SchemeKind::ZenoSinglePixel
        | SchemeKind::MultipixelZeno
        | SchemeKind::SemitransparentZeno => {
            let mut cycle = vec![
                polarisation_rotator(d, config.theta)?,
                polarising_beam_splitter(d)?,
            ];
            cycle.extend(encoder(config, false)?);
            cycle.push(polarising_beam_splitter(d)?);
            Scheme {
                cycle,
                repetitions: config.cycles,
                switch_out: vec![],
                detectors: polarisation_detectors(d, config.kind == SchemeKind::ZenoSinglePixel)?,
                initial,
            }
        }
        SchemeKind::MichelsonZeno => {
            let mut cycle = vec![
                polarisation_rotator(d, config.theta)?,
                mirror_reflect(MirrorKind::Retro, d)?,
                polarisation_rotator(d, config.theta)?,
                polarising_beam_splitter(d)?,
            ];
            cycle.extend(encoder(config, true)?);
            cycle.push(polarising_beam_splitter(d)?);
            Scheme {
                cycle,
                repetitions: config.cycles,
                switch_out: vec![pockels_flip(d)?],
                detectors: polarisation_detectors(d, false)?,
                initial,
            }
        }
    };
    Ok(scheme)
}

/// One entry per completed cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleRecord {
    /// Zero-based index of the cycle just completed.
    pub cycle: usize,
    /// Survival probability after this cycle.
    pub survival: f64,
    /// Absorption probability during this cycle, conditioned on having
    /// survived all earlier cycles.
    pub absorption: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SchemeTrace {
    pub records: Vec<CycleRecord>,
}

#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub final_state: PhotonState,
    pub distribution: DetectionDistribution,
    pub trace: SchemeTrace,
}

/// Propagates the initial state through an assembled scheme.
pub fn run_built(scheme: &Scheme) -> Result<SchemeRun> {
    let mut state = scheme.initial.clone();
    let mut records = Vec::with_capacity(scheme.repetitions);
    for n in 0..scheme.repetitions {
        let before = state.survival_probability();
        for op in &scheme.cycle {
            state = op.apply(&state)?;
        }
        let after = state.survival_probability();
        let absorption = if before > 0.0 {
            ((before - after) / before).clamp(0.0, 1.0)
        } else {
            0.0
        };
        records.push(CycleRecord {
            cycle: n,
            survival: after,
            absorption,
        });
    }
    for op in &scheme.switch_out {
        state = op.apply(&state)?;
    }
    let distribution = detection_distribution(&state, &scheme.detectors)?;
    Ok(SchemeRun {
        final_state: state,
        distribution,
        trace: SchemeTrace { records },
    })
}

pub fn run_scheme(config: &SchemeConfig) -> Result<SchemeRun> {
    run_built(&build_scheme(config)?)
}

/// Target state of the multi-pass Mach–Zehnder scheme in the many-cycle limit:
/// opaque pixels stay H, transparent pixels end V, all on the reference mode.
pub fn final_state_ideal(config: &SchemeConfig) -> Result<PhotonState> {
    if !matches!(
        config.kind,
        SchemeKind::MultipixelZeno | SchemeKind::ZenoSinglePixel
    ) {
        return Err(IfmError::Unsupported {
            kind: config.kind.as_str(),
            what: "an ideal final state",
        });
    }
    if !config.pattern.is_binary() {
        return Err(IfmError::SemiTransparentUnsupported("final_state_ideal"));
    }
    let d = config.dim();
    let layout = Layout::new(d)?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); layout.len()];
    for l in 0..d {
        let pol = if config.pattern.occupancy(l) == 1 {
            Polarisation::H
        } else {
            Polarisation::V
        };
        amps[layout.index(pol, l, d)] = amp;
    }
    PhotonState::from_amplitudes(d, amps)
}
