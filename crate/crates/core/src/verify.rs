//! Named invariant suites.
//!
//! Each suite runs a self-contained numerical check and reports pass/fail
//! with the worst deviation seen. Element constructors that the suites probe
//! are taken from an [`ElementCatalog`] so a faulty element can be swapped in.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytics::{self, multipixel_zeno_survival, per_cycle_absorption};
use crate::error::Result;
use crate::optics::{
    self, beam_splitter, mirror_reflect, oam_converter, oam_sorter, object_attenuator,
    pockels_flip, polarising_beam_splitter, DetectionDistribution, Detector, Direction, ElementOp,
    Layout, MirrorKind, PhotonState, PixelPattern, Placement, Polarisation, Port,
};
use crate::schemes::{run_scheme, EncoderForm, SchemeConfig, SchemeKind};

pub type RotatorFn = fn(usize, f64) -> Result<ElementOp>;

/// Constructors the suites use for elements that may be replaced in tests.
#[derive(Clone, Copy)]
pub struct ElementCatalog {
    pub rotator: RotatorFn,
}

impl Default for ElementCatalog {
    fn default() -> Self {
        Self {
            rotator: optics::polarisation_rotator,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Uniformly random unit-norm state.
pub fn random_state<R: Rng>(dim: usize, rng: &mut R) -> PhotonState {
    let len = Layout::new(dim).expect("dim >= 1").len();
    let raw: Vec<Complex64> = (0..len)
        .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
        .collect();
    let n = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    PhotonState::from_amplitudes(dim, raw.into_iter().map(|a| a / n).collect()).expect("normalised")
}

/// Random transmissions: a mix of exact 0/1 pixels and grey levels.
pub fn random_pattern<R: Rng>(dim: usize, rng: &mut R) -> PixelPattern {
    let t = (0..dim)
        .map(|_| match rng.gen_range(0..4) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.gen::<f64>(),
        })
        .collect();
    PixelPattern::from_transmissions(t).expect("values in [0, 1]")
}

pub fn random_binary_pattern<R: Rng>(dim: usize, rng: &mut R) -> PixelPattern {
    let bits: Vec<bool> = (0..dim).map(|_| rng.gen()).collect();
    PixelPattern::from_occupancy(&bits).expect("dim >= 1")
}

/// Random configuration with `d ≤ max_dim` and `N ≤ max_cycles`.
pub fn random_config<R: Rng>(rng: &mut R, max_dim: usize, max_cycles: usize) -> SchemeConfig {
    let kind = SchemeKind::ALL[rng.gen_range(0..SchemeKind::ALL.len())];
    let dim = if kind.is_single_pixel() {
        1
    } else {
        rng.gen_range(1..=max_dim)
    };
    let pattern = random_pattern(dim, rng);
    let cycles = rng.gen_range(1..=max_cycles);
    SchemeConfig::new(kind, pattern, cycles).expect("valid random config")
}

/// Frobenius norm of `(converter ∘ sorter − SWAP)` restricted to inputs on
/// path 0. Bounds the operator-norm difference from above.
pub fn swap_deviation(dim: usize) -> Result<f64> {
    let layout = Layout::new(dim)?;
    let composite =
        oam_sorter(dim, Direction::Forward)?.then(&oam_converter(dim, Direction::Forward)?)?;
    let mut sum = 0.0;
    for pol in Polarisation::ALL {
        for l in 0..dim {
            let col = layout.index(pol, l, 0);
            let swapped = layout.index(pol, 0, l);
            for row in 0..layout.len() {
                let target = if row == swapped { 1.0 } else { 0.0 };
                sum += (composite.entry(row, col) - Complex64::new(target, 0.0)).norm_sqr();
            }
        }
    }
    Ok(sum.sqrt())
}

/// Michelson distribution with the H/V detector roles swapped back.
pub fn michelson_as_mach_zehnder(
    pattern: &PixelPattern,
    cycles: usize,
) -> Result<(DetectionDistribution, DetectionDistribution)> {
    let mz = run_scheme(&SchemeConfig::new(
        SchemeKind::MultipixelZeno,
        pattern.clone(),
        cycles,
    )?)?;
    let mi = run_scheme(&SchemeConfig::new(
        SchemeKind::MichelsonZeno,
        pattern.clone(),
        cycles,
    )?)?;
    Ok((
        mz.distribution,
        mi.distribution.relabel(Detector::with_flipped_polarisation),
    ))
}

struct Worst {
    value: f64,
    failures: usize,
    note: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Self {
            value: 0.0,
            failures: 0,
            note: None,
        }
    }

    fn observe(&mut self, deviation: f64, tol: f64, what: impl FnOnce() -> String) {
        if deviation.is_nan() || deviation > tol {
            self.failures += 1;
            if self.note.is_none() {
                self.note = Some(what());
            }
        }
        if deviation.is_nan() || deviation > self.value {
            self.value = deviation;
        }
    }

    fn finish(self, name: &'static str, tol: f64) -> CheckResult {
        let passed = self.failures == 0;
        let detail = match self.note {
            Some(n) => format!(
                "max deviation {:.3e} > tol {tol:.0e} ({} failures; first: {n})",
                self.value, self.failures
            ),
            None => format!("max deviation {:.3e} <= tol {tol:.0e}", self.value),
        };
        CheckResult {
            name,
            passed,
            detail,
        }
    }
}

fn error_check(name: &'static str, err: crate::IfmError) -> CheckResult {
    CheckResult {
        name,
        passed: false,
        detail: format!("error: {err}"),
    }
}

macro_rules! suite {
    ($name:expr, $body:expr) => {
        match (|| -> Result<CheckResult> { $body })() {
            Ok(c) => c,
            Err(e) => error_check($name, e),
        }
    };
}

fn unitarity(catalog: &ElementCatalog, rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "unitarity";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=4 {
            let mut ops = vec![
                beam_splitter(dim)?,
                polarising_beam_splitter(dim)?,
                oam_sorter(dim, Direction::Forward)?,
                oam_sorter(dim, Direction::Inverse)?,
                oam_converter(dim, Direction::Forward)?,
                oam_converter(dim, Direction::Inverse)?,
                pockels_flip(dim)?,
                mirror_reflect(MirrorKind::Plain, dim)?,
                mirror_reflect(MirrorKind::Retro, dim)?,
            ];
            for theta in [0.0, 0.1, PI / 7.0, PI / 2.0, 2.5] {
                ops.push((catalog.rotator)(dim, theta)?);
            }
            for op in &ops {
                for _ in 0..100 {
                    let s = random_state(dim, rng);
                    let dev = (op.apply(&s)?.norm_sqr() - s.norm_sqr()).abs();
                    worst.observe(dev, TOL, || format!("{} at d={dim}", op.label()));
                }
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn contraction(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "attenuator-contraction";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=6 {
            for _ in 0..20 {
                let pattern = random_pattern(dim, rng);
                for placement in [Placement::PixelPaths, Placement::OamDiagonal] {
                    let op = object_attenuator(&pattern, placement)?;
                    let s = random_state(dim, rng);
                    let growth = op.apply(&s)?.norm_sqr() - s.norm_sqr();
                    worst.observe(growth.max(0.0), TOL, || format!("d={dim}"));
                }
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn inverse_identity(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "inverse-identity";
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=6 {
            let pairs = [
                (
                    oam_sorter(dim, Direction::Forward)?,
                    oam_sorter(dim, Direction::Inverse)?,
                ),
                (
                    oam_converter(dim, Direction::Forward)?,
                    oam_converter(dim, Direction::Inverse)?,
                ),
                (
                    polarising_beam_splitter(dim)?,
                    polarising_beam_splitter(dim)?,
                ),
                (pockels_flip(dim)?, pockels_flip(dim)?),
                (
                    mirror_reflect(MirrorKind::Plain, dim)?,
                    mirror_reflect(MirrorKind::Plain, dim)?,
                ),
            ];
            for (op, inv) in &pairs {
                let s = random_state(dim, rng);
                let back = inv.apply(&op.apply(&s)?)?;
                // permutations move amplitudes without arithmetic
                worst.observe(back.max_abs_diff(&s), 0.0, || {
                    format!("{} at d={dim}", op.label())
                });
            }
        }
        Ok(worst.finish(NAME, 0.0))
    })
}

fn rotation_additivity(catalog: &ElementCatalog, rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "rotation-additivity";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for n in [1usize, 2, 5, 16, 64] {
            let step = (catalog.rotator)(2, PI / (2 * n) as f64)?;
            let once = (catalog.rotator)(2, PI / 2.0)?;
            let s = random_state(2, rng);
            let mut t = s.clone();
            for _ in 0..n {
                t = step.apply(&t)?;
            }
            worst.observe(t.max_abs_diff(&once.apply(&s)?), TOL, || format!("N={n}"));
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn swap_identity() -> CheckResult {
    const NAME: &str = "swap-identity";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=6 {
            worst.observe(swap_deviation(dim)?, TOL, || format!("d={dim}"));
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn encoder_equivalence(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "encoder-equivalence";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=6 {
            for kind in [
                SchemeKind::MultipixelSinglePass,
                SchemeKind::MultipixelZeno,
                SchemeKind::MichelsonZeno,
            ] {
                let pattern = random_pattern(dim, rng);
                let cycles = rng.gen_range(1..=20);
                let config = SchemeConfig::new(kind, pattern, cycles)?;
                let composed = run_scheme(&config)?;
                let diagonal = run_scheme(&config.clone().with_encoder(EncoderForm::Diagonal))?;
                worst.observe(
                    composed.final_state.max_abs_diff(&diagonal.final_state),
                    TOL,
                    || format!("{kind} d={dim}"),
                );
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn ev_table() -> CheckResult {
    const NAME: &str = "ev-table";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        let d0 = Detector::Port(Port::Zero);
        let d1 = Detector::Port(Port::Dark);
        for (bits, row) in [("0", [1.0, 0.0, 0.0]), ("1", [0.25, 0.25, 0.5])] {
            let r = run_scheme(&SchemeConfig::new(
                SchemeKind::EvSinglePass,
                bits.parse()?,
                1,
            )?)?;
            let got = [
                r.distribution.probability(&d0),
                r.distribution.probability(&d1),
                r.distribution.absorbed(),
            ];
            for (g, e) in got.iter().zip(row) {
                worst.observe((g - e).abs(), TOL, || format!("f={bits}"));
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn zeno_single_table() -> CheckResult {
    const NAME: &str = "zeno-single-pixel-table";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        let h = Detector::Polarisation(Polarisation::H);
        let v = Detector::Polarisation(Polarisation::V);
        for n in [10usize, 100, 1000] {
            let blocked = run_scheme(&SchemeConfig::new(
                SchemeKind::ZenoSinglePixel,
                "1".parse()?,
                n,
            )?)?;
            let exact = (PI / (2 * n) as f64).cos().powi(2 * n as i32);
            worst.observe(
                (blocked.distribution.probability(&h) - exact).abs(),
                TOL,
                || format!("N={n}"),
            );
            let first_order = 1.0 - PI * PI / (4.0 * n as f64);
            let gap = (blocked.distribution.probability(&h) - first_order).abs();
            worst.observe((gap - 5.0 / (n * n) as f64).max(0.0), 0.0, || {
                format!("first order N={n}")
            });
            let clear = run_scheme(&SchemeConfig::new(
                SchemeKind::ZenoSinglePixel,
                "0".parse()?,
                n,
            )?)?;
            worst.observe(
                (clear.distribution.probability(&v) - 1.0).abs(),
                TOL,
                || format!("clear N={n}"),
            );
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn single_pass_table(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "single-pass-multipixel-table";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in [2usize, 4, 8] {
            let df = dim as f64;
            for _ in 0..20 {
                let pattern = random_binary_pattern(dim, rng);
                let config =
                    SchemeConfig::new(SchemeKind::MultipixelSinglePass, pattern.clone(), 1)?;
                let dist = run_scheme(&config)?.distribution;
                for pixel in 0..dim {
                    let zero = dist.probability(&Detector::PortPixel {
                        port: Port::Zero,
                        pixel,
                    });
                    let dark = dist.probability(&Detector::PortPixel {
                        port: Port::Dark,
                        pixel,
                    });
                    let (ez, ed) = if pattern.occupancy(pixel) == 1 {
                        (1.0 / (4.0 * df), 1.0 / (4.0 * df))
                    } else {
                        (1.0 / df, 0.0)
                    };
                    worst.observe((zero - ez).abs().max((dark - ed).abs()), TOL, || {
                        format!("{pattern} pixel {pixel}")
                    });
                }
                let eabs = pattern.opaque_count() as f64 / (2.0 * df);
                worst.observe((dist.absorbed() - eabs).abs(), TOL, || {
                    format!("{pattern} absorption")
                });
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn multipixel_zeno_table() -> CheckResult {
    const NAME: &str = "multipixel-zeno-table";
    suite!(NAME, {
        let mut worst = Worst::new();
        let n = 10_000usize;
        let pattern: PixelPattern = "1010".parse()?;
        let dist = run_scheme(&SchemeConfig::new(
            SchemeKind::MultipixelZeno,
            pattern.clone(),
            n,
        )?)?
        .distribution;
        let d = 4.0;
        for pixel in 0..4 {
            let h = dist.probability(&Detector::PixelPolarisation {
                pixel,
                pol: Polarisation::H,
            });
            let v = dist.probability(&Detector::PixelPolarisation {
                pixel,
                pol: Polarisation::V,
            });
            if pattern.occupancy(pixel) == 1 {
                let row = (1.0 - PI * PI / (4.0 * n as f64)) / d;
                worst.observe((h - row).abs(), 1e-7, || format!("opaque pixel {pixel} h"));
                worst.observe(v, 0.0, || format!("opaque pixel {pixel} v"));
            } else {
                worst.observe((v - 1.0 / d).abs(), 1e-12, || {
                    format!("clear pixel {pixel} v")
                });
                worst.observe(h, 1e-12, || format!("clear pixel {pixel} h"));
            }
        }
        Ok(worst.finish(NAME, 1e-7))
    })
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "oracle-equivalence";
    const TOL: f64 = 1e-10;
    suite!(NAME, {
        let mut worst = Worst::new();
        for _ in 0..200 {
            let config = random_config(rng, 8, 64);
            let sim = run_scheme(&config)?.distribution;
            let exact = analytics::exact_distribution(&config)?;
            worst.observe(sim.max_abs_diff(&exact), TOL, || {
                format!("{} d={} N={}", config.kind(), config.dim(), config.cycles())
            });
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn telescoping() -> CheckResult {
    const NAME: &str = "telescoping";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=8 {
            for opaque in 0..=dim {
                for n in [1usize, 3, 10, 64] {
                    let theta = PI / (2 * n) as f64;
                    let product: f64 = (0..n)
                        .map(|i| per_cycle_absorption(dim, opaque, i, theta).map(|p| 1.0 - p))
                        .product::<Result<f64>>()?;
                    let closed = multipixel_zeno_survival(dim, opaque, n, theta)?;
                    worst.observe((product - closed).abs(), TOL, || {
                        format!("d={dim} k={opaque} N={n}")
                    });
                }
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn per_cycle_trace(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "per-cycle-trace";
    const TOL: f64 = 1e-10;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=8 {
            for opaque in 0..=dim {
                let n = rng.gen_range(1..=64);
                let mut bits = vec![true; opaque];
                bits.resize(dim, false);
                let config = SchemeConfig::new(
                    SchemeKind::MultipixelZeno,
                    PixelPattern::from_occupancy(&bits)?,
                    n,
                )?;
                let run = run_scheme(&config)?;
                for rec in &run.trace.records {
                    let expected = per_cycle_absorption(dim, opaque, rec.cycle, config.theta())?;
                    worst.observe((rec.absorption - expected).abs(), TOL, || {
                        format!("d={dim} k={opaque} n={}", rec.cycle)
                    });
                }
                let survival = multipixel_zeno_survival(dim, opaque, n, config.theta())?;
                worst.observe(
                    (run.final_state.survival_probability() - survival).abs(),
                    TOL,
                    || format!("survival d={dim} k={opaque}"),
                );
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn michelson_equivalence(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "michelson-equivalence";
    const TOL: f64 = 1e-10;
    suite!(NAME, {
        let mut worst = Worst::new();
        for dim in 1..=4 {
            for _ in 0..5 {
                let pattern = random_pattern(dim, rng);
                let n = rng.gen_range(1..=64);
                let (mz, mi) = michelson_as_mach_zehnder(&pattern, n)?;
                worst.observe(mz.max_abs_diff(&mi), TOL, || format!("d={dim} N={n}"));
            }
        }
        Ok(worst.finish(NAME, TOL))
    })
}

fn completeness(rng: &mut ChaCha8Rng) -> CheckResult {
    const NAME: &str = "distribution-completeness";
    const TOL: f64 = 1e-12;
    suite!(NAME, {
        let mut worst = Worst::new();
        for _ in 0..100 {
            let config = random_config(rng, 6, 40);
            let dist = run_scheme(&config)?.distribution;
            worst.observe((dist.total() - 1.0).abs(), TOL, || {
                config.kind().to_string()
            });
        }
        Ok(worst.finish(NAME, TOL))
    })
}

/// Runs every suite with the stock elements.
pub fn run_all() -> VerifyReport {
    run_with(&ElementCatalog::default())
}

pub fn run_with(catalog: &ElementCatalog) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1f3a_5eed);
    let checks = vec![
        unitarity(catalog, &mut rng),
        contraction(&mut rng),
        inverse_identity(&mut rng),
        rotation_additivity(catalog, &mut rng),
        swap_identity(),
        encoder_equivalence(&mut rng),
        ev_table(),
        zeno_single_table(),
        single_pass_table(&mut rng),
        multipixel_zeno_table(),
        oracle_equivalence(&mut rng),
        telescoping(),
        per_cycle_trace(&mut rng),
        michelson_equivalence(&mut rng),
        completeness(&mut rng),
    ];
    VerifyReport { checks }
}
