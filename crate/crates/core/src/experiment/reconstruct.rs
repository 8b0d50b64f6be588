use super::ClickCounts;
use crate::analytics::SemiTransparentBlock;
use crate::error::{IfmError, Result};
use crate::optics::{Detector, PixelKind, PixelPattern, Polarisation, Port};
use crate::schemes::{SchemeConfig, SchemeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Opaque,
    Transparent,
    Unknown,
}

impl Verdict {
    pub fn symbol(self) -> char {
        match self {
            Verdict::Opaque => '1',
            Verdict::Transparent => '0',
            Verdict::Unknown => '?',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionEstimate {
    pub value: f64,
    pub std_error: f64,
    /// ~95% interval, clipped to [0, 1].
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedImage {
    pub verdicts: Vec<Verdict>,
    /// Per-pixel transmission fit; `None` inside the vector for pixels that
    /// received no clicks.
    pub transmissions: Option<Vec<Option<TransmissionEstimate>>>,
}

impl ReconstructedImage {
    /// `1` opaque, `0` transparent, `?` unknown.
    pub fn bit_string(&self) -> String {
        self.verdicts.iter().map(|v| v.symbol()).collect()
    }

    /// Every pixel decided and equal to the opaque/transparent ground truth.
    pub fn matches(&self, truth: &PixelPattern) -> bool {
        truth.dim() == self.verdicts.len()
            && self
                .verdicts
                .iter()
                .enumerate()
                .all(|(l, v)| match truth.kind(l) {
                    PixelKind::Opaque => *v == Verdict::Opaque,
                    PixelKind::Transparent => *v == Verdict::Transparent,
                    PixelKind::SemiTransparent => false,
                })
    }
}

/// `(object-revealing detector, object-absent detector)` for a pixel.
fn pixel_channels(kind: SchemeKind, pixel: usize) -> Result<(Detector, Detector)> {
    let pp = |pol| Detector::PixelPolarisation { pixel, pol };
    match kind {
        SchemeKind::ZenoSinglePixel => Ok((
            Detector::Polarisation(Polarisation::H),
            Detector::Polarisation(Polarisation::V),
        )),
        SchemeKind::MultipixelZeno | SchemeKind::SemitransparentZeno => {
            Ok((pp(Polarisation::H), pp(Polarisation::V)))
        }
        // Pockels switch-out swaps the roles
        SchemeKind::MichelsonZeno => Ok((pp(Polarisation::V), pp(Polarisation::H))),
        SchemeKind::MultipixelSinglePass => Ok((
            Detector::PortPixel {
                port: Port::Dark,
                pixel,
            },
            Detector::PortPixel {
                port: Port::Zero,
                pixel,
            },
        )),
        SchemeKind::EvSinglePass => Err(IfmError::Unsupported {
            kind: kind.as_str(),
            what: "per-pixel reconstruction",
        }),
    }
}

fn verdicts(counts: &ClickCounts, config: &SchemeConfig) -> Result<Vec<Verdict>> {
    let kind = config.kind();
    (0..config.dim())
        .map(|pixel| {
            let (present, absent) = pixel_channels(kind, pixel)?;
            let (p, a) = (counts.count(&present), counts.count(&absent));
            Ok(if kind == SchemeKind::MultipixelSinglePass {
                if p > 0 {
                    Verdict::Opaque
                } else if a > 0 {
                    Verdict::Transparent
                } else {
                    Verdict::Unknown
                }
            } else if p > a {
                Verdict::Opaque
            } else if a > p {
                Verdict::Transparent
            } else {
                Verdict::Unknown
            })
        })
        .collect()
}

/// Opaque/transparent call per pixel from click counts.
///
/// Multi-pass layouts compare the two polarisation detectors of each pixel
/// (ties are unknown); the single-pass layout calls a pixel opaque on any
/// dark-port click.
pub fn reconstruct_pattern(
    counts: &ClickCounts,
    config: &SchemeConfig,
) -> Result<ReconstructedImage> {
    Ok(ReconstructedImage {
        verdicts: verdicts(counts, config)?,
        transmissions: None,
    })
}

/// Expected per-pixel `(h, v, absorbed)` fractions, normalised to one pixel.
fn pixel_model(transmission: f64, theta: f64, cycles: usize) -> [f64; 3] {
    let block = SemiTransparentBlock::new(transmission.clamp(0.0, 1.0), theta)
        .expect("clamped transmission and finite angle");
    let (ch, cv) = block.evolve_from_h(cycles);
    let (h, v) = (ch * ch, cv * cv);
    [h, v, (1.0 - h - v).max(0.0)]
}

const GRID: usize = 1000;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimises `f` on [0, 1]: coarse grid, then golden-section on the bracket
/// around the best grid point.
fn bracketed_argmin(f: impl Fn(f64) -> f64) -> f64 {
    let step = 1.0 / GRID as f64;
    let best = (0..=GRID)
        .map(|i| (i, f(i as f64 * step)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let mut lo = best.saturating_sub(1) as f64 * step;
    let mut hi = (best + 1).min(GRID) as f64 * step;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    // grid endpoints can beat the interior refinement
    [mid, best as f64 * step]
        .into_iter()
        .min_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("two candidates")
}

/// Fits each pixel's transmission independently from its click fractions.
///
/// A pixel's photon budget is `n/d`. For each pixel the observed
/// `(h, v, implied absorbed)` fractions are matched in least squares against
/// the single-pixel cycle map, and the error is propagated from multinomial
/// counting noise through the model slope.
pub fn estimate_transmissions(
    counts: &ClickCounts,
    config: &SchemeConfig,
) -> Result<ReconstructedImage> {
    let kind = config.kind();
    if kind.is_single_pass() {
        return Err(IfmError::Unsupported {
            kind: kind.as_str(),
            what: "transmission estimation",
        });
    }
    let verdicts = verdicts(counts, config)?;
    let d = config.dim() as f64;
    let n = counts.total() as f64;
    let theta = config.theta_per_cycle();
    let cycles = config.cycles();
    let estimates = (0..config.dim())
        .map(|pixel| {
            let (present, absent) = pixel_channels(kind, pixel)?;
            let (h, v) = (counts.count(&present), counts.count(&absent));
            if h + v == 0 {
                return Ok(None);
            }
            let qh = d * h as f64 / n;
            let qv = d * v as f64 / n;
            let observed = [qh, qv, 1.0 - qh - qv];
            let loss = |t: f64| {
                pixel_model(t, theta, cycles)
                    .iter()
                    .zip(&observed)
                    .map(|(m, o)| (m - o).powi(2))
                    .sum::<f64>()
            };
            let value = bracketed_argmin(loss);

            let trials = n / d;
            let eps = 1e-5;
            let (a, b) = ((value - eps).max(0.0), (value + eps).min(1.0));
            let (ma, mb, m0) = (
                pixel_model(a, theta, cycles),
                pixel_model(b, theta, cycles),
                pixel_model(value, theta, cycles),
            );
            let info: f64 = (0..3)
                .filter(|&k| m0[k] > 0.0)
                .map(|k| {
                    let slope = (mb[k] - ma[k]) / (b - a);
                    trials * slope * slope / m0[k]
                })
                .sum();
            let std_error = if info > 0.0 {
                info.sqrt().recip()
            } else {
                f64::INFINITY
            };
            Ok(Some(TransmissionEstimate {
                value,
                std_error,
                lower: (value - 1.96 * std_error).max(0.0),
                upper: (value + 1.96 * std_error).min(1.0),
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReconstructedImage {
        verdicts,
        transmissions: Some(estimates),
    })
}
