use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ifm_core::experiment::{
    estimate_transmissions, reconstruct_pattern, sample_shots, sample_shots_with,
    statistical_check, write_shot_csv, ClickCounts, SamplingMode, Verdict,
};
use ifm_core::optics::PixelPattern;
use ifm_core::schemes::{run_scheme, SchemeConfig, SchemeKind};
use ifm_core::verify::random_binary_pattern;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// With noiseless counts the reconstruction recovers any binary pattern.
    #[test]
    fn expected_counts_reconstruct_exactly(seed: u64, dim in 1usize..=8, cycles in 2usize..=100) {
        let pattern = random_binary_pattern(dim, &mut ChaCha8Rng::seed_from_u64(seed));
        for kind in [SchemeKind::MultipixelSinglePass, SchemeKind::MultipixelZeno, SchemeKind::MichelsonZeno] {
            let config = SchemeConfig::new(kind, pattern.clone(), cycles).unwrap();
            let dist = run_scheme(&config).unwrap().distribution;
            let counts = ClickCounts::expected(&dist, 1_000_000);
            let image = reconstruct_pattern(&counts, &config).unwrap();
            prop_assert!(image.matches(&pattern), "{kind}: {} vs {pattern}", image.bit_string());
        }
    }

    #[test]
    fn expected_counts_recover_transmissions(t in prop::collection::vec(0.0..0.95f64, 1..=4), cycles in 20usize..=200) {
        let pattern = PixelPattern::from_transmissions(t.clone()).unwrap();
        let config = SchemeConfig::new(SchemeKind::SemitransparentZeno, pattern, cycles).unwrap();
        let dist = run_scheme(&config).unwrap().distribution;
        let counts = ClickCounts::expected(&dist, 100_000_000);
        let est = estimate_transmissions(&counts, &config).unwrap();
        for (truth, e) in t.iter().zip(est.transmissions.unwrap()) {
            let e = e.unwrap();
            prop_assert!((e.value - truth).abs() < 1e-3, "{truth} vs {e:?}");
            prop_assert!(e.lower <= e.value && e.value <= e.upper);
        }
    }

    #[test]
    fn same_seed_same_records(seed: u64, shots in 1u64..2000) {
        let config = SchemeConfig::new(SchemeKind::MultipixelZeno, "0110".parse().unwrap(), 10).unwrap();
        let a = sample_shots(&config, shots, seed).unwrap();
        let b = sample_shots(&config, shots, seed).unwrap();
        prop_assert_eq!(&a.records, &b.records);
        prop_assert_eq!(a.counts.total(), shots);
    }
}

#[test]
fn per_cycle_and_final_sampling_agree_statistically() {
    let config = SchemeConfig::new(
        SchemeKind::SemitransparentZeno,
        PixelPattern::from_transmissions(vec![0.0, 0.3, 0.8, 1.0]).unwrap(),
        25,
    )
    .unwrap();
    let exact = run_scheme(&config).unwrap().distribution;
    for mode in [SamplingMode::FinalDistribution, SamplingMode::PerCycle] {
        let sample = sample_shots_with(&config, 200_000, 11, mode).unwrap();
        let check = statistical_check(&sample.counts, &exact);
        assert!(check.passes(5.0), "{mode:?}: max |z| {}", check.max_abs_z());
    }
}

#[test]
fn single_shot_leaves_most_pixels_unknown() {
    let config =
        SchemeConfig::new(SchemeKind::MultipixelZeno, "10110010".parse().unwrap(), 100).unwrap();
    let sample = sample_shots(&config, 1, 5).unwrap();
    assert_eq!(sample.counts.total(), 1);
    let image = reconstruct_pattern(&sample.counts, &config).unwrap();
    let unknown = image
        .verdicts
        .iter()
        .filter(|v| **v == Verdict::Unknown)
        .count();
    assert!(unknown >= 7);
}

#[test]
fn csv_bytes_are_reproducible() {
    let config = SchemeConfig::new(SchemeKind::EvSinglePass, "1".parse().unwrap(), 1).unwrap();
    let render = |seed| {
        let mut buf = Vec::new();
        write_shot_csv(
            &mut buf,
            &sample_shots(&config, 10_000, seed).unwrap().records,
        )
        .unwrap();
        buf
    };
    assert_eq!(render(77), render(77));
    assert_ne!(render(77), render(78));
}

#[test]
fn imaging_at_moderate_shot_counts() {
    let pattern: PixelPattern = "1010".parse().unwrap();
    let config = SchemeConfig::new(SchemeKind::MultipixelZeno, pattern.clone(), 100).unwrap();
    let sample = sample_shots(&config, 100_000, 1).unwrap();
    let image = reconstruct_pattern(&sample.counts, &config).unwrap();
    assert_eq!(image.bit_string(), "1010");
    assert!(statistical_check(&sample.counts, &sample.run.distribution).passes(5.0));
}
