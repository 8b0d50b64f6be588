//! Closed-form and large-`N` probabilities for every scheme.
//!
//! These are evaluated independently of the state-vector simulator and serve
//! as its oracle. Grey-level pixels are handled through [`SemiTransparentBlock`]
//! matrix powers rather than a symbolic amplitude formula.

mod block;

pub use block::{mat_mul, mat_pow, Mat2, SemiTransparentBlock};

use std::f64::consts::PI;

use crate::error::{IfmError, Result};
use crate::optics::{DetectionDistribution, Detector, PixelKind, PixelPattern, Polarisation, Port};
use crate::schemes::{SchemeConfig, SchemeKind};

/// Exact and large-`N` outcome probabilities for one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticReport {
    pub exact: Option<DetectionDistribution>,
    pub asymptotic: Option<DetectionDistribution>,
    /// Probability of an object-revealing click given the object is present.
    pub efficiency: Option<f64>,
}

impl AnalyticReport {
    /// Exact absorption if available, otherwise the asymptotic one.
    pub fn absorption(&self) -> Option<f64> {
        self.exact
            .as_ref()
            .or(self.asymptotic.as_ref())
            .map(DetectionDistribution::absorbed)
    }
}

/// `Σ_ℓ p_{ℓ,h}` and `Σ_ℓ p_{ℓ,v}` of a multi-pass distribution.
pub fn polarisation_totals(dist: &DetectionDistribution) -> (f64, f64) {
    dist.entries()
        .iter()
        .fold((0.0, 0.0), |(h, v), (det, p)| match det {
            Detector::PixelPolarisation {
                pol: Polarisation::H,
                ..
            }
            | Detector::Polarisation(Polarisation::H) => (h + p, v),
            Detector::PixelPolarisation {
                pol: Polarisation::V,
                ..
            }
            | Detector::Polarisation(Polarisation::V) => (h, v + p),
            _ => (h, v),
        })
}

fn pixel_pol(pixel: usize, pol: Polarisation) -> Detector {
    Detector::PixelPolarisation { pixel, pol }
}

fn check_cycles(cycles: usize) -> Result<()> {
    if cycles == 0 {
        Err(IfmError::ZeroCycles)
    } else {
        Ok(())
    }
}

fn check_opaque(dim: usize, opaque: usize) -> Result<()> {
    if dim == 0 {
        return Err(IfmError::ZeroDimension);
    }
    if opaque > dim {
        return Err(IfmError::InvalidOpaqueCount { opaque, dim });
    }
    Ok(())
}

/// Rest-mass of a distribution given its detector entries.
fn with_absorption(entries: Vec<(Detector, f64)>) -> DetectionDistribution {
    let detected: f64 = entries.iter().map(|(_, p)| p).sum();
    DetectionDistribution::new(entries, (1.0 - detected).max(0.0), 0.0)
}

/// Single-pixel single-pass outcomes.
pub fn ev_table(opaque: bool) -> AnalyticReport {
    let (p0, p1, abs) = if opaque {
        (0.25, 0.25, 0.5)
    } else {
        (1.0, 0.0, 0.0)
    };
    let dist = DetectionDistribution::new(
        vec![
            (Detector::Port(Port::Zero), p0),
            (Detector::Port(Port::Dark), p1),
        ],
        abs,
        0.0,
    );
    AnalyticReport {
        exact: Some(dist.clone()),
        asymptotic: Some(dist),
        efficiency: Some(0.25),
    }
}

/// Single-pixel multi-pass scheme with `θ = π/2N`.
pub fn zeno_single_exact(cycles: usize, opaque: bool) -> Result<AnalyticReport> {
    check_cycles(cycles)?;
    let n = cycles as f64;
    let theta = PI / (2.0 * n);
    let h = Detector::Polarisation(Polarisation::H);
    let v = Detector::Polarisation(Polarisation::V);
    let survive = theta.cos().powi(2 * cycles as i32);
    let (exact, asymptotic) = if opaque {
        let first_order = PI * PI / (4.0 * n);
        (
            DetectionDistribution::new(vec![(h, survive), (v, 0.0)], 1.0 - survive, 0.0),
            DetectionDistribution::new(vec![(h, 1.0 - first_order), (v, 0.0)], first_order, 0.0),
        )
    } else {
        let rot = n * theta;
        (
            DetectionDistribution::new(
                vec![(h, rot.cos().powi(2)), (v, rot.sin().powi(2))],
                0.0,
                0.0,
            ),
            DetectionDistribution::new(vec![(h, 0.0), (v, 1.0)], 0.0, 0.0),
        )
    };
    Ok(AnalyticReport {
        exact: Some(exact),
        asymptotic: Some(asymptotic),
        efficiency: Some(survive),
    })
}

/// Exact fraction `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::ops::Add for Ratio {
    type Output = Ratio;

    fn add(self, other: Ratio) -> Ratio {
        Ratio::new(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
        )
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Single-pass multi-pixel outcomes as exact fractions:
/// `(detector entries, absorption)`.
pub fn multipixel_single_pass_rational(
    pattern: &PixelPattern,
) -> Result<(Vec<(Detector, Ratio)>, Ratio)> {
    if !pattern.is_binary() {
        return Err(IfmError::SemiTransparentUnsupported(
            "multipixel_single_pass_table",
        ));
    }
    let d = pattern.dim() as u64;
    let mut entries = Vec::with_capacity(2 * pattern.dim());
    for pixel in 0..pattern.dim() {
        let (zero, dark) = if pattern.occupancy(pixel) == 1 {
            (Ratio::new(1, 4 * d), Ratio::new(1, 4 * d))
        } else {
            (Ratio::new(1, d), Ratio::new(0, 1))
        };
        entries.push((
            Detector::PortPixel {
                port: Port::Zero,
                pixel,
            },
            zero,
        ));
        entries.push((
            Detector::PortPixel {
                port: Port::Dark,
                pixel,
            },
            dark,
        ));
    }
    let absorbed = Ratio::new(pattern.opaque_count() as u64, 2 * d);
    Ok((entries, absorbed))
}

/// Single-pass multi-pixel outcomes for opaque/transparent pixels.
pub fn multipixel_single_pass_table(pattern: &PixelPattern) -> Result<AnalyticReport> {
    let (entries, absorbed) = multipixel_single_pass_rational(pattern)?;
    let dist = DetectionDistribution::new(
        entries.into_iter().map(|(d, r)| (d, r.to_f64())).collect(),
        absorbed.to_f64(),
        0.0,
    );
    Ok(AnalyticReport {
        exact: Some(dist.clone()),
        asymptotic: Some(dist),
        efficiency: Some(0.25),
    })
}

/// Single-pass outcomes for arbitrary transmissions: per pixel the two arms
/// recombine with relative amplitude `√T`.
pub fn single_pass_exact(pattern: &PixelPattern) -> DetectionDistribution {
    let d = pattern.dim() as f64;
    let mut entries = Vec::with_capacity(2 * pattern.dim());
    let mut absorbed = 0.0;
    for (pixel, &t) in pattern.transmissions().iter().enumerate() {
        let a = t.sqrt();
        entries.push((
            Detector::PortPixel {
                port: Port::Zero,
                pixel,
            },
            (1.0 + a).powi(2) / (4.0 * d),
        ));
        entries.push((
            Detector::PortPixel {
                port: Port::Dark,
                pixel,
            },
            (1.0 - a).powi(2) / (4.0 * d),
        ));
        absorbed += (1.0 - t) / (2.0 * d);
    }
    DetectionDistribution::new(entries, absorbed, 0.0)
}

/// Survival after `cycles` cycles with `opaque` of `dim` pixels blocked:
/// `1 − (N_abs/d)(1 − cos^{2N} θ)`.
pub fn multipixel_zeno_survival(
    dim: usize,
    opaque: usize,
    cycles: usize,
    theta: f64,
) -> Result<f64> {
    check_opaque(dim, opaque)?;
    let frac = opaque as f64 / dim as f64;
    Ok(1.0 - frac * (1.0 - theta.cos().powi(2 * cycles as i32)))
}

/// First-order survival for `θ = π/2N`: `1 − (N_abs/d) π²/4N`.
pub fn multipixel_zeno_survival_asymptotic(
    dim: usize,
    opaque: usize,
    cycles: usize,
) -> Result<f64> {
    check_opaque(dim, opaque)?;
    check_cycles(cycles)?;
    Ok(1.0 - opaque as f64 / dim as f64 * PI * PI / (4.0 * cycles as f64))
}

/// Absorption during cycle `n + 1` given survival through the first `n`:
/// `N_abs cos^{2n}θ sin²θ / (d − N_abs + N_abs cos^{2n}θ)`.
///
/// Returns 0 when nothing survives to cycle `n + 1`.
pub fn per_cycle_absorption(dim: usize, opaque: usize, n: usize, theta: f64) -> Result<f64> {
    check_opaque(dim, opaque)?;
    let k = opaque as f64;
    let c2n = theta.cos().powi(2 * n as i32);
    let norm = (dim - opaque) as f64 + k * c2n;
    if norm <= 0.0 {
        return Ok(0.0);
    }
    Ok(k * c2n * theta.sin().powi(2) / norm)
}

fn check_transmissions(dim: usize, transmissions: &[f64]) -> Result<()> {
    if dim == 0 {
        return Err(IfmError::ZeroDimension);
    }
    if transmissions.len() != dim {
        return Err(IfmError::PatternLength {
            expected: dim,
            got: transmissions.len(),
        });
    }
    for (pixel, &value) in transmissions.iter().enumerate() {
        if !(0.0..=1.0).contains(&value) {
            return Err(IfmError::TransmissionOutOfRange { pixel, value });
        }
    }
    Ok(())
}

/// Multi-pass outcomes for arbitrary transmissions via `m_ℓ^N` applied to
/// `(1/√d)(1, 0)` for each pixel.
pub fn semitransparent_exact(
    dim: usize,
    cycles: usize,
    theta: f64,
    transmissions: &[f64],
) -> Result<AnalyticReport> {
    check_transmissions(dim, transmissions)?;
    let amp = 1.0 / (dim as f64).sqrt();
    let mut entries = Vec::with_capacity(2 * dim);
    for (pixel, &t) in transmissions.iter().enumerate() {
        let (ch, cv) = SemiTransparentBlock::new(t, theta)?.evolve_from_h(cycles);
        entries.push((pixel_pol(pixel, Polarisation::H), (amp * ch).powi(2)));
        entries.push((pixel_pol(pixel, Polarisation::V), (amp * cv).powi(2)));
    }
    let exact = with_absorption(entries);
    let efficiency = transmissions
        .iter()
        .position(|&t| t == 0.0)
        .map(|pixel| dim as f64 * exact.probability(&pixel_pol(pixel, Polarisation::H)));
    Ok(AnalyticReport {
        exact: Some(exact),
        asymptotic: None,
        efficiency,
    })
}

/// Leading-order `(p_{ℓ,h}, p_{ℓ,v})` for one pixel with `T < 1` and `θ = π/2N`.
fn asymptotic_pixel(dim: usize, cycles: usize, t: f64) -> (f64, f64) {
    let n = cycles as f64;
    let d = dim as f64;
    let a = t.sqrt();
    let h = (1.0 - (1.0 + a) / (1.0 - a) * PI * PI / (4.0 * n)) / d;
    let v = t / (1.0 - a).powi(2) * PI * PI / (4.0 * n * n) / d;
    (h, v)
}

/// Large-`N` outcomes for `θ = π/2N`. Every `T_ℓ` must be below 1.
pub fn semitransparent_asymptotic(
    dim: usize,
    cycles: usize,
    transmissions: &[f64],
) -> Result<AnalyticReport> {
    check_transmissions(dim, transmissions)?;
    check_cycles(cycles)?;
    if let Some(pixel) = transmissions.iter().position(|&t| t == 1.0) {
        return Err(IfmError::AsymptoticPole { pixel });
    }
    let mut entries = Vec::with_capacity(2 * dim);
    for (pixel, &t) in transmissions.iter().enumerate() {
        let (h, v) = asymptotic_pixel(dim, cycles, t);
        entries.push((pixel_pol(pixel, Polarisation::H), h));
        entries.push((pixel_pol(pixel, Polarisation::V), v));
    }
    Ok(AnalyticReport {
        exact: None,
        asymptotic: Some(with_absorption(entries)),
        efficiency: None,
    })
}

/// Large-`N` multi-pass outcomes for any pattern: transparent pixels take the
/// exact full-rotation value `(0, 1/d)`, the rest the leading-order formulas.
pub fn zeno_asymptotic(pattern: &PixelPattern, cycles: usize) -> Result<DetectionDistribution> {
    check_cycles(cycles)?;
    let dim = pattern.dim();
    let mut entries = Vec::with_capacity(2 * dim);
    for (pixel, &t) in pattern.transmissions().iter().enumerate() {
        let (h, v) = if pattern.kind(pixel) == PixelKind::Transparent {
            (0.0, 1.0 / dim as f64)
        } else {
            asymptotic_pixel(dim, cycles, t)
        };
        entries.push((pixel_pol(pixel, Polarisation::H), h));
        entries.push((pixel_pol(pixel, Polarisation::V), v));
    }
    Ok(with_absorption(entries))
}

/// Object-revealing click probability per present pixel for the multi-pass
/// scheme with `θ = π/2N`: `cos^{2N}(π/2N)`.
pub fn zeno_efficiency(cycles: usize) -> Result<f64> {
    check_cycles(cycles)?;
    Ok((PI / (2 * cycles) as f64).cos().powi(2 * cycles as i32))
}

fn to_single_pixel_labels(det: Detector) -> Detector {
    match det {
        Detector::PixelPolarisation { pol, .. } => Detector::Polarisation(pol),
        other => other,
    }
}

/// Closed-form distribution matching what `run_scheme` reports for `config`.
pub fn exact_distribution(config: &SchemeConfig) -> Result<DetectionDistribution> {
    let pattern = config.pattern();
    let d = config.dim();
    let zeno = |theta: f64| -> Result<DetectionDistribution> {
        Ok(
            semitransparent_exact(d, config.cycles(), theta, pattern.transmissions())?
                .exact
                .expect("exact evaluator"),
        )
    };
    match config.kind() {
        SchemeKind::EvSinglePass => Ok(single_pass_exact(pattern).relabel(|det| match det {
            Detector::PortPixel { port, .. } => Detector::Port(port),
            other => other,
        })),
        SchemeKind::MultipixelSinglePass => Ok(single_pass_exact(pattern)),
        SchemeKind::ZenoSinglePixel => Ok(zeno(config.theta())?.relabel(to_single_pixel_labels)),
        SchemeKind::MultipixelZeno | SchemeKind::SemitransparentZeno => zeno(config.theta()),
        SchemeKind::MichelsonZeno => {
            Ok(zeno(config.theta_per_cycle())?.relabel(Detector::with_flipped_polarisation))
        }
    }
}

/// Large-`N` distribution for `config`, when one is defined.
pub fn asymptotic_distribution(config: &SchemeConfig) -> Result<Option<DetectionDistribution>> {
    let pattern = config.pattern();
    Ok(match config.kind() {
        SchemeKind::EvSinglePass | SchemeKind::MultipixelSinglePass => None,
        SchemeKind::ZenoSinglePixel => {
            Some(zeno_asymptotic(pattern, config.cycles())?.relabel(to_single_pixel_labels))
        }
        SchemeKind::MultipixelZeno | SchemeKind::SemitransparentZeno => {
            Some(zeno_asymptotic(pattern, config.cycles())?)
        }
        SchemeKind::MichelsonZeno => Some(
            zeno_asymptotic(pattern, config.cycles())?.relabel(Detector::with_flipped_polarisation),
        ),
    })
}

/// Full analytic report for a configuration.
pub fn analyze(config: &SchemeConfig) -> Result<AnalyticReport> {
    let exact = exact_distribution(config)?;
    let asymptotic = asymptotic_distribution(config)?;
    let pattern = config.pattern();
    let efficiency = match config.kind() {
        SchemeKind::EvSinglePass | SchemeKind::MultipixelSinglePass => Some(0.25),
        _ => {
            let theta = config.theta_per_cycle();
            (pattern.opaque_count() > 0).then(|| theta.cos().powi(2 * config.cycles() as i32))
        }
    };
    Ok(AnalyticReport {
        exact: Some(exact),
        asymptotic,
        efficiency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(pixel: usize, pol: Polarisation) -> Detector {
        pixel_pol(pixel, pol)
    }

    #[test]
    fn ev_rows() {
        let clear = ev_table(false).exact.unwrap();
        assert_eq!(clear.probability(&Detector::Port(Port::Zero)), 1.0);
        assert_eq!(clear.probability(&Detector::Port(Port::Dark)), 0.0);
        assert_eq!(clear.absorbed(), 0.0);
        let blocked = ev_table(true);
        let b = blocked.exact.as_ref().unwrap();
        assert_eq!(b.probability(&Detector::Port(Port::Dark)), 0.25);
        assert_eq!(b.absorbed(), 0.5);
        assert_eq!(b.total(), 1.0);
        assert_eq!(blocked.efficiency, Some(0.25));
    }

    #[test]
    fn zeno_single_one_cycle_absorbs_everything() {
        let r = zeno_single_exact(1, true).unwrap();
        let e = r.exact.unwrap();
        assert!(e.probability(&Detector::Polarisation(Polarisation::H)) < 1e-30);
        assert!((e.absorbed() - 1.0).abs() < 1e-15);
        assert_eq!(zeno_single_exact(0, true), Err(IfmError::ZeroCycles));
    }

    #[test]
    fn zeno_single_first_order() {
        let n = 1000;
        let r = zeno_single_exact(n, true).unwrap();
        let ph = r
            .exact
            .unwrap()
            .probability(&Detector::Polarisation(Polarisation::H));
        let first = 1.0 - PI * PI / (4.0 * n as f64);
        assert!((ph - first).abs() <= 5.0 / (n * n) as f64);
        let absent = zeno_single_exact(n, false).unwrap().exact.unwrap();
        assert!((absent.probability(&Detector::Polarisation(Polarisation::V)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_pass_table_rows() {
        let one = multipixel_single_pass_table(&"1".parse().unwrap()).unwrap();
        let e = one.exact.unwrap();
        let zero = Detector::PortPixel {
            port: Port::Zero,
            pixel: 0,
        };
        let dark = Detector::PortPixel {
            port: Port::Dark,
            pixel: 0,
        };
        assert_eq!(e.probability(&zero), 0.25);
        assert_eq!(e.probability(&dark), 0.25);
        assert_eq!(e.absorbed(), 0.5);

        let four = multipixel_single_pass_table(&"1100".parse().unwrap())
            .unwrap()
            .exact
            .unwrap();
        assert_eq!(1.0 - four.absorbed(), 6.0 / 8.0);

        let clear = multipixel_single_pass_table(&"000".parse().unwrap())
            .unwrap()
            .exact
            .unwrap();
        for pixel in 0..3 {
            assert_eq!(
                clear.probability(&Detector::PortPixel {
                    port: Port::Zero,
                    pixel
                }),
                1.0 / 3.0
            );
            assert_eq!(
                clear.probability(&Detector::PortPixel {
                    port: Port::Dark,
                    pixel
                }),
                0.0
            );
        }
        let semi = PixelPattern::from_transmissions(vec![0.5, 1.0]).unwrap();
        assert!(multipixel_single_pass_table(&semi).is_err());
    }

    #[test]
    fn single_pass_rationals_sum_to_one() {
        for bits in ["1", "0", "1010", "11111111", "0110100"] {
            let (entries, abs) = multipixel_single_pass_rational(&bits.parse().unwrap()).unwrap();
            let total = entries.iter().fold(abs, |acc, &(_, r)| acc + r);
            assert_eq!(total, Ratio::new(1, 1), "{bits}");
        }
    }

    #[test]
    fn general_single_pass_matches_table() {
        let p: PixelPattern = "10110".parse().unwrap();
        let table = multipixel_single_pass_table(&p).unwrap().exact.unwrap();
        assert!(single_pass_exact(&p).max_abs_diff(&table) < 1e-15);
    }

    #[test]
    fn survival_examples() {
        assert_eq!(multipixel_zeno_survival(5, 0, 10, 0.3).unwrap(), 1.0);
        let v = multipixel_zeno_survival(2, 1, 2, PI / 4.0).unwrap();
        assert!((v - 0.625).abs() < 1e-15);
        // all pixels blocked reduces to the single-pixel product
        for n in [3, 10, 40] {
            let theta = PI / (2 * n) as f64;
            let all = multipixel_zeno_survival(4, 4, n, theta).unwrap();
            assert!((all - theta.cos().powi(2 * n as i32)).abs() < 1e-15);
        }
        assert!(multipixel_zeno_survival(2, 3, 2, 0.1).is_err());
    }

    #[test]
    fn per_cycle_examples() {
        let theta = 0.2;
        let first = per_cycle_absorption(1, 1, 0, theta).unwrap();
        assert!((first - theta.sin().powi(2)).abs() < 1e-15);
        assert_eq!(per_cycle_absorption(4, 0, 7, theta).unwrap(), 0.0);
    }

    #[test]
    fn telescoping_product() {
        for d in 1..=8 {
            for k in 0..=d {
                for n in [1usize, 2, 5, 17, 64] {
                    let theta = PI / (2 * n) as f64;
                    let product: f64 = (0..n)
                        .map(|i| 1.0 - per_cycle_absorption(d, k, i, theta).unwrap())
                        .product();
                    let closed = multipixel_zeno_survival(d, k, n, theta).unwrap();
                    assert!((product - closed).abs() < 1e-12, "d={d} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn semitransparent_limits() {
        let n = 20;
        let theta = PI / (2 * n) as f64;
        let clear = semitransparent_exact(3, n, theta, &[1.0; 3])
            .unwrap()
            .exact
            .unwrap();
        for l in 0..3 {
            assert!((clear.probability(&pp(l, Polarisation::V)) - 1.0 / 3.0).abs() < 1e-15);
            assert!(clear.probability(&pp(l, Polarisation::H)) < 1e-30);
        }
        let opaque = semitransparent_exact(3, n, theta, &[0.0; 3])
            .unwrap()
            .exact
            .unwrap();
        let survival = multipixel_zeno_survival(3, 3, n, theta).unwrap();
        assert!((opaque.detected() - survival).abs() < 1e-12);
        assert!(semitransparent_exact(2, n, theta, &[0.1]).is_err());
        assert!(semitransparent_exact(1, n, theta, &[1.1]).is_err());
    }

    #[test]
    fn asymptotic_forms() {
        let n = 1000;
        let opaque = semitransparent_asymptotic(4, n, &[0.0; 4]).unwrap();
        let a = opaque.asymptotic.unwrap();
        let row = (1.0 - PI * PI / (4.0 * n as f64)) / 4.0;
        assert!((a.probability(&pp(2, Polarisation::H)) - row).abs() < 1e-15);
        assert_eq!(a.probability(&pp(2, Polarisation::V)), 0.0);

        // (1 + √T)/(1 − √T) = 3 at T = 0.25
        let q = semitransparent_asymptotic(1, n, &[0.25])
            .unwrap()
            .asymptotic
            .unwrap();
        let ph = q.probability(&pp(0, Polarisation::H));
        assert!(((1.0 - ph) / (PI * PI / (4.0 * n as f64)) - 3.0).abs() < 1e-9);

        assert_eq!(
            semitransparent_asymptotic(2, n, &[0.3, 1.0]),
            Err(IfmError::AsymptoticPole { pixel: 1 })
        );
    }

    #[test]
    fn vertical_leak_scales_inverse_square() {
        let pv = |n| {
            semitransparent_exact(1, n, PI / (2 * n) as f64, &[0.25])
                .unwrap()
                .exact
                .unwrap()
                .probability(&pp(0, Polarisation::V))
        };
        for n in [1000usize, 2000, 4000] {
            let ratio = pv(n) / pv(2 * n);
            assert!((3.5..=4.5).contains(&ratio), "n={n} ratio={ratio}");
        }
    }

    #[test]
    fn efficiency_beats_single_pass_from_three_cycles() {
        assert!((zeno_efficiency(2).unwrap() - 0.25).abs() < 1e-15);
        for n in 3..200 {
            assert!(zeno_efficiency(n).unwrap() > 0.25, "n = {n}");
        }
        let pattern: PixelPattern = "1010".parse().unwrap();
        let config = SchemeConfig::new(SchemeKind::MultipixelZeno, pattern, 10).unwrap();
        let report = analyze(&config).unwrap();
        assert!((report.efficiency.unwrap() - zeno_efficiency(10).unwrap()).abs() < 1e-15);
    }
}
