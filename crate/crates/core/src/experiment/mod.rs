//! Monte Carlo click experiments on top of exact scheme distributions.

mod reconstruct;
mod sampling;

pub use reconstruct::{
    estimate_transmissions, reconstruct_pattern, ReconstructedImage, TransmissionEstimate, Verdict,
};
pub use sampling::{
    sample_shots, sample_shots_with, write_shot_csv, SamplingMode, ShotSample, ShotSampler,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{IfmError, Result};
use crate::optics::{DetectionDistribution, Detector};

/// What happened to one photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Click(Detector),
    Absorbed,
    /// Survived but reached no detector. Zero-probability in every built scheme.
    Undetected,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Click(d) => write!(f, "{d}"),
            Outcome::Absorbed => f.write_str("absorbed"),
            Outcome::Undetected => f.write_str("undetected"),
        }
    }
}

impl FromStr for Outcome {
    type Err = IfmError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "absorbed" => Ok(Outcome::Absorbed),
            "undetected" => Ok(Outcome::Undetected),
            other => other.parse().map(Outcome::Click),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub shot: u64,
    pub outcome: Outcome,
    pub seed: u64,
}

impl ShotRecord {
    /// `shot_index,outcome_label`
    pub fn csv_line(&self) -> String {
        format!("{},{}", self.shot, self.outcome)
    }
}

/// Accumulated clicks. Merging is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClickCounts {
    clicks: BTreeMap<Detector, u64>,
    absorbed: u64,
    undetected: u64,
    total: u64,
}

impl ClickCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, outcome: Outcome) {
        self.add(outcome, 1);
    }

    pub fn add(&mut self, outcome: Outcome, n: u64) {
        match outcome {
            Outcome::Click(d) => *self.clicks.entry(d).or_insert(0) += n,
            Outcome::Absorbed => self.absorbed += n,
            Outcome::Undetected => self.undetected += n,
        }
        self.total += n;
    }

    pub fn merge(mut self, other: ClickCounts) -> ClickCounts {
        for (d, n) in other.clicks {
            *self.clicks.entry(d).or_insert(0) += n;
        }
        self.absorbed += other.absorbed;
        self.undetected += other.undetected;
        self.total += other.total;
        self
    }

    /// Counts proportional to `dist` for `shots` photons, rounded to nearest.
    /// Stands in for the infinite-shot limit; `total` is the sum of the
    /// rounded counts.
    pub fn expected(dist: &DetectionDistribution, shots: u64) -> ClickCounts {
        let mut c = ClickCounts::new();
        let n = shots as f64;
        for &(d, p) in dist.entries() {
            c.add(Outcome::Click(d), (p * n).round() as u64);
        }
        c.add(Outcome::Absorbed, (dist.absorbed() * n).round() as u64);
        c.add(Outcome::Undetected, (dist.undetected() * n).round() as u64);
        c
    }

    pub fn count(&self, det: &Detector) -> u64 {
        self.clicks.get(det).copied().unwrap_or(0)
    }

    pub fn outcome_count(&self, outcome: &Outcome) -> u64 {
        match outcome {
            Outcome::Click(d) => self.count(d),
            Outcome::Absorbed => self.absorbed,
            Outcome::Undetected => self.undetected,
        }
    }

    pub fn clicks(&self) -> impl Iterator<Item = (&Detector, &u64)> {
        self.clicks.iter()
    }

    pub fn absorbed(&self) -> u64 {
        self.absorbed
    }

    pub fn undetected(&self) -> u64 {
        self.undetected
    }

    pub fn total(&self) -> u64 {
        self.total
    }
}

/// Below this a probability is treated as an impossible outcome.
const DEGENERATE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeCheck {
    pub outcome: Outcome,
    pub expected: f64,
    pub observed: u64,
    /// `(freq − p)/√(p(1−p)/n)`; `None` for outcomes with `p ∈ {0, 1}`.
    pub z: Option<f64>,
    /// Count disagrees with a certain or impossible outcome.
    pub violation: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatisticalCheck {
    pub shots: u64,
    pub outcomes: Vec<OutcomeCheck>,
}

impl StatisticalCheck {
    pub fn max_abs_z(&self) -> f64 {
        self.outcomes
            .iter()
            .filter_map(|o| o.z)
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    pub fn violations(&self) -> impl Iterator<Item = &OutcomeCheck> {
        self.outcomes.iter().filter(|o| o.violation)
    }

    /// No impossible-outcome violations and every `|z| ≤ bound`.
    pub fn passes(&self, bound: f64) -> bool {
        self.violations().next().is_none() && self.max_abs_z() <= bound
    }
}

/// Per-outcome z-scores of observed counts against an exact distribution.
///
/// Meaningful for at least ~100 shots; smaller samples are still scored.
pub fn statistical_check(counts: &ClickCounts, exact: &DetectionDistribution) -> StatisticalCheck {
    let n = counts.total();
    let nf = n as f64;
    let mut outcomes: Vec<(Outcome, f64)> = exact
        .entries()
        .iter()
        .map(|&(d, p)| (Outcome::Click(d), p))
        .collect();
    // clicks on detectors outside the support are impossible outcomes
    for (d, _) in counts.clicks() {
        if !outcomes.iter().any(|(o, _)| *o == Outcome::Click(*d)) {
            outcomes.push((Outcome::Click(*d), 0.0));
        }
    }
    outcomes.push((Outcome::Absorbed, exact.absorbed()));
    outcomes.push((Outcome::Undetected, exact.undetected()));

    let outcomes = outcomes
        .into_iter()
        .map(|(outcome, p)| {
            let observed = counts.outcome_count(&outcome);
            let (z, violation) = if p <= DEGENERATE {
                (None, observed != 0)
            } else if p >= 1.0 - DEGENERATE {
                (None, observed != n)
            } else if n == 0 {
                (None, false)
            } else {
                let freq = observed as f64 / nf;
                (Some((freq - p) / (p * (1.0 - p) / nf).sqrt()), false)
            };
            OutcomeCheck {
                outcome,
                expected: p,
                observed,
                z,
                violation,
            }
        })
        .collect();
    StatisticalCheck { shots: n, outcomes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{Polarisation, Port};

    #[test]
    fn outcome_labels_round_trip() {
        for o in [
            Outcome::Absorbed,
            Outcome::Undetected,
            Outcome::Click(Detector::Port(Port::Dark)),
            Outcome::Click(Detector::PixelPolarisation {
                pixel: 3,
                pol: Polarisation::H,
            }),
        ] {
            assert_eq!(o.to_string().parse::<Outcome>().unwrap(), o);
        }
    }

    #[test]
    fn counts_merge_and_total() {
        let d0 = Detector::Port(Port::Zero);
        let mut a = ClickCounts::new();
        a.record(Outcome::Click(d0));
        a.record(Outcome::Absorbed);
        let mut b = ClickCounts::new();
        b.add(Outcome::Click(d0), 3);
        let m = a.merge(b);
        assert_eq!(m.count(&d0), 4);
        assert_eq!(m.absorbed(), 1);
        assert_eq!(m.total(), 5);
    }

    #[test]
    fn perfect_frequencies_score_zero() {
        let d0 = Detector::Port(Port::Zero);
        let d1 = Detector::Port(Port::Dark);
        let dist = DetectionDistribution::new(vec![(d0, 0.25), (d1, 0.25)], 0.5, 0.0);
        let counts = ClickCounts::expected(&dist, 1000);
        let check = statistical_check(&counts, &dist);
        assert!(check.max_abs_z() < 1e-12);
        assert!(check.passes(1e-9));
    }

    #[test]
    fn click_on_impossible_detector_is_flagged() {
        let d0 = Detector::Port(Port::Zero);
        let d1 = Detector::Port(Port::Dark);
        let dist = DetectionDistribution::new(vec![(d0, 1.0), (d1, 0.0)], 0.0, 0.0);
        let mut counts = ClickCounts::new();
        counts.add(Outcome::Click(d0), 199);
        counts.record(Outcome::Click(d1));
        let check = statistical_check(&counts, &dist);
        let flagged: Vec<_> = check.violations().map(|o| o.outcome).collect();
        assert!(flagged.contains(&Outcome::Click(d1)));
        // the certain outcome also missed one count
        assert!(flagged.contains(&Outcome::Click(d0)));
        assert!(!check.passes(100.0));
    }
}
