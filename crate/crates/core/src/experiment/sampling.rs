use std::io::{self, Write};

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ClickCounts, Outcome, ShotRecord};
use crate::error::{IfmError, Result};
use crate::optics::DetectionDistribution;
use crate::schemes::{run_scheme, SchemeConfig, SchemeRun};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SamplingMode {
    /// One categorical draw from the final distribution per shot.
    #[default]
    FinalDistribution,
    /// Absorption is decided cycle by cycle from the conditional per-cycle
    /// absorption probabilities; survivors then draw a detector.
    PerCycle,
}

/// Draws shot outcomes with one independent RNG stream per shot index, so
/// results do not depend on evaluation order or thread count.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    seed: u64,
    outcomes: Vec<Outcome>,
    weights: Option<WeightedIndex<f64>>,
    /// Per-cycle conditional absorption; empty in final-distribution mode.
    cycle_absorption: Vec<f64>,
}

impl ShotSampler {
    pub fn new(dist: &DetectionDistribution, seed: u64) -> Self {
        let mut outcomes: Vec<Outcome> = dist
            .entries()
            .iter()
            .map(|&(d, _)| Outcome::Click(d))
            .collect();
        let mut weights: Vec<f64> = dist.entries().iter().map(|&(_, p)| p.max(0.0)).collect();
        outcomes.push(Outcome::Absorbed);
        weights.push(dist.absorbed().max(0.0));
        outcomes.push(Outcome::Undetected);
        weights.push(dist.undetected().max(0.0));
        Self {
            seed,
            outcomes,
            weights: WeightedIndex::new(weights).ok(),
            cycle_absorption: Vec::new(),
        }
    }

    /// Per-cycle collapse sampler for a completed run.
    pub fn per_cycle(run: &SchemeRun, seed: u64) -> Self {
        let dist = &run.distribution;
        let survived = dist.detected() + dist.undetected();
        let outcomes = dist
            .entries()
            .iter()
            .map(|&(d, _)| Outcome::Click(d))
            .chain([Outcome::Undetected])
            .collect();
        let weights: Vec<f64> = dist
            .entries()
            .iter()
            .map(|&(_, p)| p.max(0.0))
            .chain([dist.undetected().max(0.0)])
            .collect();
        Self {
            seed,
            outcomes,
            weights: (survived > 0.0)
                .then(|| WeightedIndex::new(weights).ok())
                .flatten(),
            cycle_absorption: run.trace.records.iter().map(|r| r.absorption).collect(),
        }
    }

    fn rng(&self, shot: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(shot);
        rng
    }

    pub fn outcome(&self, shot: u64) -> Outcome {
        let mut rng = self.rng(shot);
        for &p in &self.cycle_absorption {
            if rng.gen::<f64>() < p {
                return Outcome::Absorbed;
            }
        }
        match &self.weights {
            Some(w) => self.outcomes[w.sample(&mut rng)],
            None => Outcome::Absorbed,
        }
    }

    pub fn record(&self, shot: u64) -> ShotRecord {
        ShotRecord {
            shot,
            outcome: self.outcome(shot),
            seed: self.seed,
        }
    }

    /// Shot records `0..shots`, in index order.
    pub fn records(&self, shots: u64) -> Vec<ShotRecord> {
        (0..shots).into_par_iter().map(|k| self.record(k)).collect()
    }

    pub fn counts(&self, shots: u64) -> ClickCounts {
        (0..shots)
            .into_par_iter()
            .fold(ClickCounts::new, |mut acc, k| {
                acc.record(self.outcome(k));
                acc
            })
            .reduce(ClickCounts::new, ClickCounts::merge)
    }
}

#[derive(Debug, Clone)]
pub struct ShotSample {
    pub counts: ClickCounts,
    pub records: Vec<ShotRecord>,
    pub run: SchemeRun,
}

pub fn sample_shots(config: &SchemeConfig, shots: u64, seed: u64) -> Result<ShotSample> {
    sample_shots_with(config, shots, seed, SamplingMode::FinalDistribution)
}

pub fn sample_shots_with(
    config: &SchemeConfig,
    shots: u64,
    seed: u64,
    mode: SamplingMode,
) -> Result<ShotSample> {
    if shots == 0 {
        return Err(IfmError::ZeroShots);
    }
    let run = run_scheme(config)?;
    let sampler = match mode {
        SamplingMode::FinalDistribution => ShotSampler::new(&run.distribution, seed),
        SamplingMode::PerCycle => ShotSampler::per_cycle(&run, seed),
    };
    let records = sampler.records(shots);
    let counts = records.iter().fold(ClickCounts::new(), |mut acc, r| {
        acc.record(r.outcome);
        acc
    });
    Ok(ShotSample {
        counts,
        records,
        run,
    })
}

/// Writes `shot_index,outcome_label` lines under a header row.
pub fn write_shot_csv<W: Write>(mut out: W, records: &[ShotRecord]) -> io::Result<()> {
    writeln!(out, "shot_index,outcome_label")?;
    for r in records {
        writeln!(out, "{}", r.csv_line())?;
    }
    Ok(())
}
