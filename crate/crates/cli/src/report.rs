use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use ifm_core::analytics::{
    self, ev_table, multipixel_single_pass_table, multipixel_zeno_survival, zeno_efficiency,
};
use ifm_core::experiment::{
    estimate_transmissions, reconstruct_pattern, sample_shots, statistical_check, write_shot_csv,
    ClickCounts, ReconstructedImage, ShotSample,
};
use ifm_core::optics::{DetectionDistribution, PixelPattern};
use ifm_core::schemes::{run_scheme, SchemeConfig, SchemeKind, SchemeRun};
use ifm_core::verify::VerifyReport;

use crate::config::{Format, RunConfig, Settings, SweepAxis};
use crate::error::CliError;

/// Tolerance on `Σ detectors + p_abs = 1` before anything is written.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Rounds to 15 significant digits.
pub fn sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// CSV cell for a float: plain decimal in the usual range, exponent otherwise.
pub fn cell(x: f64) -> String {
    let x = sig(x);
    if x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e15) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(cell).unwrap_or_default()
}

pub fn check_complete(dist: &DetectionDistribution, what: &str) -> Result<(), CliError> {
    if dist.is_complete(COMPLETENESS_TOL) {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "{what}: probabilities sum to {:.17}",
            dist.total()
        )))
    }
}

#[derive(Debug, Serialize)]
pub struct DistBlock {
    pub detectors: BTreeMap<String, f64>,
    pub p_abs: f64,
    pub p_undetected: f64,
}

impl From<&DetectionDistribution> for DistBlock {
    fn from(dist: &DetectionDistribution) -> Self {
        DistBlock {
            detectors: dist
                .entries()
                .iter()
                .map(|(d, p)| (d.to_string(), sig(*p)))
                .collect(),
            p_abs: sig(dist.absorbed()),
            p_undetected: sig(dist.undetected()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Comparison {
    pub expected: f64,
    pub simulated: f64,
    pub abs_diff: f64,
}

impl Comparison {
    fn new(expected: f64, simulated: f64) -> Self {
        Comparison {
            expected: sig(expected),
            simulated: sig(simulated),
            abs_diff: sig((expected - simulated).abs()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyticBlock {
    pub exact: DistBlock,
    pub asymptotic: Option<DistBlock>,
    pub efficiency: Option<f64>,
    pub max_abs_diff_exact: f64,
    pub max_abs_diff_asymptotic: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TraceRow {
    pub cycle: usize,
    pub survival: f64,
    pub absorption: f64,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub config: Settings,
    pub scheme: String,
    pub d: usize,
    #[serde(rename = "N")]
    pub cycles: usize,
    pub theta: f64,
    pub detectors: BTreeMap<String, f64>,
    pub p_abs: f64,
    pub p_nabs: f64,
    pub p_undetected: f64,
    pub analytic: AnalyticBlock,
    /// Named closed-form values checked against the simulation.
    pub closed_form: BTreeMap<String, Comparison>,
    pub trace: Vec<TraceRow>,
}

pub fn scheme_config(config: &RunConfig) -> Result<SchemeConfig, CliError> {
    let pattern = config
        .pattern
        .clone()
        .ok_or_else(|| CliError::Usage("a pattern is required".into()))?;
    let cycles = config
        .cycles
        .ok_or_else(|| CliError::Usage("--N is required".into()))?;
    Ok(SchemeConfig::new(config.scheme, pattern, cycles)?)
}

fn closed_form(
    sc: &SchemeConfig,
    dist: &DetectionDistribution,
) -> Result<BTreeMap<String, Comparison>, CliError> {
    let mut out = BTreeMap::new();
    let pattern = sc.pattern();
    let compare_all =
        |out: &mut BTreeMap<String, Comparison>, prefix: &str, table: &DetectionDistribution| {
            for (det, p) in table.entries() {
                out.insert(
                    format!("{prefix}.{det}"),
                    Comparison::new(*p, dist.probability(det)),
                );
            }
            out.insert(
                format!("{prefix}.p_abs"),
                Comparison::new(table.absorbed(), dist.absorbed()),
            );
        };
    match sc.kind() {
        SchemeKind::EvSinglePass if pattern.is_binary() => {
            let table = ev_table(pattern.occupancy(0) == 1)
                .exact
                .expect("exact row");
            compare_all(&mut out, "ev_outcomes", &table);
        }
        SchemeKind::MultipixelSinglePass if pattern.is_binary() => {
            let table = multipixel_single_pass_table(pattern)?
                .exact
                .expect("exact rows");
            compare_all(&mut out, "single_pass_outcomes", &table);
        }
        SchemeKind::ZenoSinglePixel | SchemeKind::MultipixelZeno | SchemeKind::MichelsonZeno
            if pattern.is_binary() =>
        {
            let (d, n, k) = (sc.dim(), sc.cycles(), pattern.opaque_count());
            let survival = multipixel_zeno_survival(d, k, n, sc.theta_per_cycle())?;
            out.insert(
                "zeno_survival".into(),
                Comparison::new(survival, 1.0 - dist.absorbed()),
            );
            if k > 0 {
                // the Michelson switch-out swaps which polarisation flags the object
                let (h, v) = analytics::polarisation_totals(dist);
                let present = if sc.kind() == SchemeKind::MichelsonZeno {
                    v
                } else {
                    h
                };
                let eff = zeno_efficiency(n)?;
                out.insert(
                    "zeno_object_clicks".into(),
                    Comparison::new(eff * k as f64 / d as f64, present),
                );
                out.insert(
                    "zeno_object_clicks_first_order".into(),
                    Comparison::new(
                        (1.0 - PI * PI / (4.0 * n as f64)) * k as f64 / d as f64,
                        present,
                    ),
                );
            }
        }
        SchemeKind::SemitransparentZeno => {
            let exact = analytics::semitransparent_exact(
                sc.dim(),
                sc.cycles(),
                sc.theta(),
                pattern.transmissions(),
            )?
            .exact
            .expect("exact");
            compare_all(&mut out, "block_power", &exact);
        }
        _ => {}
    }
    Ok(out)
}

pub fn run_report(config: &RunConfig) -> Result<RunReport, CliError> {
    let sc = scheme_config(config)?;
    let run = run_scheme(&sc)?;
    let dist = &run.distribution;
    check_complete(dist, "simulated distribution")?;
    let report = analytics::analyze(&sc)?;
    let exact = report.exact.expect("exact distribution");
    check_complete(&exact, "closed-form distribution")?;
    let asymptotic = report.asymptotic;
    Ok(RunReport {
        config: config.to_settings(),
        scheme: sc.kind().to_string(),
        d: sc.dim(),
        cycles: sc.cycles(),
        theta: sig(sc.theta()),
        detectors: DistBlock::from(dist).detectors,
        p_abs: sig(dist.absorbed()),
        p_nabs: sig(1.0 - dist.absorbed()),
        p_undetected: sig(dist.undetected()),
        analytic: AnalyticBlock {
            max_abs_diff_exact: sig(dist.max_abs_diff(&exact)),
            max_abs_diff_asymptotic: asymptotic.as_ref().map(|a| sig(dist.max_abs_diff(a))),
            exact: DistBlock::from(&exact),
            asymptotic: asymptotic.as_ref().map(DistBlock::from),
            efficiency: report.efficiency.map(sig),
        },
        closed_form: closed_form(&sc, dist)?,
        trace: trace_rows(&run),
    })
}

fn trace_rows(run: &SchemeRun) -> Vec<TraceRow> {
    run.trace
        .records
        .iter()
        .map(|r| TraceRow {
            cycle: r.cycle,
            survival: sig(r.survival),
            absorption: sig(r.absorption),
        })
        .collect()
}

pub fn run_csv(report: &RunReport) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["outcome", "probability", "exact", "asymptotic"])
        .map_err(csv_err)?;
    let asym = report.analytic.asymptotic.as_ref();
    for (det, p) in &report.detectors {
        w.write_record([
            det.clone(),
            cell(*p),
            opt_cell(report.analytic.exact.detectors.get(det).copied()),
            opt_cell(asym.and_then(|a| a.detectors.get(det).copied())),
        ])
        .map_err(csv_err)?;
    }
    w.write_record([
        "absorbed".to_string(),
        cell(report.p_abs),
        cell(report.analytic.exact.p_abs),
        opt_cell(asym.map(|a| a.p_abs)),
    ])
    .map_err(csv_err)?;
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.into())
}

/// One evaluated sweep point.
#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub index: usize,
    #[serde(rename = "N")]
    pub cycles: usize,
    pub transmissions: Vec<f64>,
    pub exact: DistBlock,
    pub asymptotic: Option<DistBlock>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub config: Settings,
    pub scheme: String,
    pub d: usize,
    pub rows: Vec<SweepRow>,
}

pub fn sweep_report(config: &RunConfig) -> Result<SweepReport, CliError> {
    let points: Vec<(usize, PixelPattern)> = match &config.sweep {
        Some(SweepAxis::Cycles(ns)) => {
            let pattern = config.pattern.clone().expect("validated pattern");
            ns.iter().map(|&n| (n, pattern.clone())).collect()
        }
        Some(SweepAxis::Transmission(ts)) => {
            let n = config.cycles.expect("validated cycles");
            ts.iter()
                .map(|&t| Ok((n, PixelPattern::uniform(config.d, t)?)))
                .collect::<Result<_, CliError>>()?
        }
        None => return Err(CliError::Usage("sweep needs --sweep-N or --sweep-T".into())),
    };
    // evaluated concurrently, collected in sweep order
    let rows = points
        .into_par_iter()
        .enumerate()
        .map(|(index, (n, pattern))| {
            let sc = SchemeConfig::new(config.scheme, pattern, n)?;
            let dist = run_scheme(&sc)?.distribution;
            check_complete(&dist, &format!("sweep point {index}"))?;
            let asym = analytics::asymptotic_distribution(&sc).ok().flatten();
            Ok(SweepRow {
                index,
                cycles: sc.cycles(),
                transmissions: sc
                    .pattern()
                    .transmissions()
                    .iter()
                    .copied()
                    .map(sig)
                    .collect(),
                exact: DistBlock::from(&dist),
                asymptotic: asym.as_ref().map(DistBlock::from),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(SweepReport {
        config: config.to_settings(),
        scheme: config.scheme.to_string(),
        d: config.d,
        rows,
    })
}

pub fn sweep_csv(report: &SweepReport) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let detectors: Vec<String> = report
        .rows
        .first()
        .map(|r| r.exact.detectors.keys().cloned().collect())
        .unwrap_or_default();
    let mut header = vec![
        "index".to_string(),
        "scheme".into(),
        "d".into(),
        "N".into(),
        "transmissions".into(),
    ];
    for name in detectors.iter().map(String::as_str).chain(["p_abs"]) {
        header.push(format!("exact {name}"));
        header.push(format!("asymptotic {name}"));
        header.push(format!("gap {name}"));
    }
    w.write_record(&header).map_err(csv_err)?;
    for row in &report.rows {
        let mut rec = vec![
            row.index.to_string(),
            report.scheme.clone(),
            report.d.to_string(),
            row.cycles.to_string(),
            row.transmissions
                .iter()
                .map(|t| cell(*t))
                .collect::<Vec<_>>()
                .join(";"),
        ];
        let asym = row.asymptotic.as_ref();
        let mut push = |exact: f64, a: Option<f64>| {
            rec.push(cell(exact));
            rec.push(opt_cell(a));
            rec.push(opt_cell(a.map(|a| (exact - a).abs())));
        };
        for det in &detectors {
            let exact = row.exact.detectors.get(det).copied().unwrap_or(0.0);
            push(
                exact,
                asym.map(|a| a.detectors.get(det).copied().unwrap_or(0.0)),
            );
        }
        push(row.exact.p_abs, asym.map(|a| a.p_abs));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

#[derive(Debug, Serialize)]
pub struct CountsBlock {
    pub detectors: BTreeMap<String, u64>,
    pub absorbed: u64,
    pub undetected: u64,
    pub total: u64,
}

impl From<&ClickCounts> for CountsBlock {
    fn from(c: &ClickCounts) -> Self {
        CountsBlock {
            detectors: c.clicks().map(|(d, n)| (d.to_string(), *n)).collect(),
            absorbed: c.absorbed(),
            undetected: c.undetected(),
            total: c.total(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EstimateBlock {
    pub value: f64,
    pub std_error: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Serialize)]
pub struct ReconstructionBlock {
    pub pattern: String,
    pub transmissions: Option<Vec<Option<EstimateBlock>>>,
}

impl From<&ReconstructedImage> for ReconstructionBlock {
    fn from(img: &ReconstructedImage) -> Self {
        ReconstructionBlock {
            pattern: img.bit_string(),
            transmissions: img.transmissions.as_ref().map(|ts| {
                ts.iter()
                    .map(|e| {
                        e.map(|e| EstimateBlock {
                            value: sig(e.value),
                            std_error: sig(e.std_error),
                            lower: sig(e.lower),
                            upper: sig(e.upper),
                        })
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GroundTruth {
    pub pattern: String,
    pub matches: bool,
}

#[derive(Debug, Serialize)]
pub struct ShotsReport {
    pub config: Settings,
    pub shots: u64,
    pub seed: u64,
    pub counts: CountsBlock,
    pub exact: DistBlock,
    /// `null` for outcomes with probability 0 or 1.
    pub z_scores: BTreeMap<String, Option<f64>>,
    pub max_abs_z: f64,
    /// Outcomes observed despite probability 0, or missed despite probability 1.
    pub violations: Vec<String>,
    pub reconstruction: Option<ReconstructionBlock>,
    pub ground_truth: Option<GroundTruth>,
}

pub struct ShotsOutcome {
    pub report: ShotsReport,
    pub sample: ShotSample,
}

pub fn shots_report(config: &RunConfig) -> Result<ShotsOutcome, CliError> {
    let sc = scheme_config(config)?;
    let shots = config.shots.expect("validated shot count");
    let sample = sample_shots(&sc, shots, config.seed)?;
    let exact = &sample.run.distribution;
    check_complete(exact, "simulated distribution")?;
    let check = statistical_check(&sample.counts, exact);

    let image = match sc.kind() {
        SchemeKind::EvSinglePass => None,
        SchemeKind::MultipixelSinglePass => Some(reconstruct_pattern(&sample.counts, &sc)?),
        _ => Some(estimate_transmissions(&sample.counts, &sc)?),
    };
    let ground_truth = image
        .as_ref()
        .filter(|_| sc.pattern().is_binary())
        .map(|img| GroundTruth {
            pattern: sc.pattern().to_string(),
            matches: img.matches(sc.pattern()),
        });

    let report = ShotsReport {
        config: config.to_settings(),
        shots,
        seed: config.seed,
        counts: CountsBlock::from(&sample.counts),
        exact: DistBlock::from(exact),
        z_scores: check
            .outcomes
            .iter()
            .map(|o| (o.outcome.to_string(), o.z.map(sig)))
            .collect(),
        max_abs_z: sig(check.max_abs_z()),
        violations: check.violations().map(|o| o.outcome.to_string()).collect(),
        reconstruction: image.as_ref().map(ReconstructionBlock::from),
        ground_truth,
    };
    Ok(ShotsOutcome { report, sample })
}

pub fn shots_csv(sample: &ShotSample) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_shot_csv(&mut buf, &sample.records)?;
    Ok(buf)
}

#[derive(Debug, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct VerifyOutput {
    pub all_passed: bool,
    pub checks: Vec<VerifyCheck>,
}

impl From<&VerifyReport> for VerifyOutput {
    fn from(r: &VerifyReport) -> Self {
        VerifyOutput {
            all_passed: r.all_passed(),
            checks: r
                .checks
                .iter()
                .map(|c| VerifyCheck {
                    name: c.name.to_string(),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

pub fn verify_csv(out: &VerifyOutput) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["check", "passed", "detail"])
        .map_err(csv_err)?;
    for c in &out.checks {
        w.write_record([
            c.name.as_str(),
            if c.passed { "true" } else { "false" },
            c.detail.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    buf.push(b'\n');
    Ok(buf)
}

pub fn render(
    format: Format,
    json: impl FnOnce() -> Result<Vec<u8>, CliError>,
    csv: impl FnOnce() -> Result<Vec<u8>, CliError>,
) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => json(),
        Format::Csv => csv(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(sig(0.1 + 0.2), 0.3);
        assert_eq!(sig(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(cell(2.5e-31), "2.5e-31");
        assert_eq!(cell(0.25), "0.25");
    }

    #[test]
    fn incomplete_distribution_is_a_numeric_failure() {
        use ifm_core::optics::{Detector, Port};
        let dist = DetectionDistribution::new(vec![(Detector::Port(Port::Zero), 0.9)], 0.0, 0.0);
        let err = check_complete(&dist, "test").unwrap_err();
        assert!(matches!(err, CliError::Numeric(_)));
        assert_eq!(
            err.exit_code(),
            std::process::ExitCode::from(crate::error::EXIT_NUMERIC)
        );
    }
}
