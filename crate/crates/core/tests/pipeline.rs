use graphnyquist::bandwidth::{BandwidthProfile, ExtReal};
use graphnyquist::filtration::{build_filtration, find_admissible_sequence};
use graphnyquist::fixtures::{five_vertex_profile, five_vertex_spectrum, two_path_spectrum};
use graphnyquist::plan::{build_sample_set, make_plan, split_rate_transform, SamplingPlan};
use graphnyquist::recovery::{recover, recovery_error};
use graphnyquist::sampling::sample_signal;
use graphnyquist::signal::SignalMode;
use graphnyquist::surrogate::verify_membership;
use graphnyquist::synth::{synthesize_from_plan, synthesize_generic, tightness_witness};
use graphnyquist::testing::{random_graph_spectrum, random_profile};
use graphnyquist::Spectrum64;
use proptest::prelude::*;

const UNIT: SignalMode<f64> = SignalMode::Periodic { period: 1.0 };

fn plan_for(s: &Spectrum64, p: &BandwidthProfile<f64>) -> Option<SamplingPlan<f64>> {
    let f = build_filtration(s, p).unwrap();
    let seq = find_admissible_sequence(s, &f).unwrap()?;
    Some(make_plan(s, &f, &seq).unwrap())
}

fn round_trip(s: &Spectrum64, plan: &SamplingPlan<f64>, f: &graphnyquist::signal::ContinuousGraphSignal<f64>) -> f64 {
    let set = build_sample_set(plan, f.mode).unwrap();
    let obs = sample_signal(f, &set).unwrap();
    let rec = recover(&obs, plan, s).unwrap();
    recovery_error(f, &rec.recovered, None).unwrap().max
}

#[test]
fn five_vertex_periodic_round_trip() {
    let s = five_vertex_spectrum::<f64>();
    let p = five_vertex_profile::<f64>();
    let plan = plan_for(&s, &p).unwrap();
    for seed in 0..5 {
        let structured = synthesize_from_plan(&plan, seed, UNIT).unwrap().signal;
        assert!(round_trip(&s, &plan, &structured) < 1e-9);
        let generic = synthesize_generic(&s, &p, seed, 1.0).unwrap().signal;
        assert!(round_trip(&s, &plan, &generic) < 1e-9);
    }
}

#[test]
fn components_sum_to_recovered() {
    let s = five_vertex_spectrum::<f64>();
    let plan = plan_for(&s, &five_vertex_profile()).unwrap();
    let f = synthesize_from_plan(&plan, 11, UNIT).unwrap().signal;
    let obs = sample_signal(&f, &build_sample_set(&plan, UNIT).unwrap()).unwrap();
    let rec = recover(&obs, &plan, &s).unwrap();
    assert_eq!(rec.components.len(), 4);
    for t in [0.0, 0.31, 0.9] {
        let total: Vec<f64> = (0..5)
            .map(|v| rec.components.iter().map(|c| c.eval(v, t)).sum())
            .collect();
        for (a, b) in total.iter().zip(rec.recovered.snapshot(t)) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn five_vertex_split_plan_round_trip() {
    let s = five_vertex_spectrum::<f64>();
    let p = five_vertex_profile::<f64>();
    let plan = split_rate_transform(&plan_for(&s, &p).unwrap(), 1, 4, 1.0).unwrap();
    for seed in 0..3 {
        let f = synthesize_generic(&s, &p, seed, 1.0).unwrap().signal;
        assert!(round_trip(&s, &plan, &f) < 1e-9);
    }
}

#[test]
fn five_vertex_sinc_round_trip() {
    let s = five_vertex_spectrum::<f64>();
    let plan = plan_for(&s, &five_vertex_profile()).unwrap();
    let mode = SignalMode::Sinc { start: -20.0, end: 20.0 };
    let f = synthesize_from_plan(&plan, 42, mode).unwrap().signal;
    let err = round_trip(&s, &plan, &f);
    assert!(err < 1e-2, "sinc error {err}");
}

/// With 𝒞[λ1] = 0 on the two-vertex path, v1 alone determines the signal.
#[test]
fn two_path_single_vertex_recovery() {
    let s = two_path_spectrum::<f64>();
    let p = BandwidthProfile::from_finite(&[3.0, 3.0], vec![ExtReal::Finite(0.0), ExtReal::Infinite]).unwrap();
    let plan = plan_for(&s, &p).unwrap();
    assert_eq!(plan.k(), 0);
    assert_eq!(plan.grids.len(), 1);
    assert_eq!(plan.grids[0].vertex, 0);
    let f = synthesize_from_plan(&plan, 5, UNIT).unwrap().signal;
    assert!(round_trip(&s, &plan, &f) < 1e-12);
}

#[test]
fn zero_observations_recover_zero() {
    let s = five_vertex_spectrum::<f64>();
    let plan = plan_for(&s, &five_vertex_profile()).unwrap();
    let zero = graphnyquist::signal::ContinuousGraphSignal::zero(5, UNIT);
    let obs = sample_signal(&zero, &build_sample_set(&plan, UNIT).unwrap()).unwrap();
    let rec = recover(&obs, &plan, &s).unwrap();
    assert!((0..5).all(|v| rec.recovered.eval(v, 0.37) == 0.0));
}

#[test]
fn five_vertex_tightness_witnesses_reach_b() {
    let s = five_vertex_spectrum::<f64>();
    let p = five_vertex_profile::<f64>();
    let plan = plan_for(&s, &p).unwrap();
    for level in 1..=plan.k() {
        let w = tightness_witness(&s, &plan, level, 1.0).unwrap();
        assert_eq!(w.reach, plan.schedule[level].bandwidth.unwrap());
        let m = verify_membership(&s, p.vertex_bw(), p.freq_bw(), &w.signal).unwrap();
        assert!(m.ok, "level {level}: {:?}", m.violations);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_periodic_round_trip(n in 2usize..6, seed in 0u64..10_000) {
        let s = random_graph_spectrum(n, seed);
        let p = random_profile(n, seed ^ 0x5eed);
        if let Some(plan) = plan_for(&s, &p) {
            let period = plan.natural_period();
            let mode = SignalMode::Periodic { period };
            let structured = synthesize_from_plan(&plan, seed, mode).unwrap().signal;
            prop_assert!(verify_membership(&s, p.vertex_bw(), p.freq_bw(), &structured).unwrap().ok);
            prop_assert!(round_trip(&s, &plan, &structured) < 1e-9);
            let generic = synthesize_generic(&s, &p, seed, period).unwrap().signal;
            prop_assert!(round_trip(&s, &plan, &generic) < 1e-9);
        }
    }
}

fn simple_instance(n: usize, seed: u64) -> (Spectrum64, graphnyquist::FrequencySubset, Vec<f64>) {
    use rand::{Rng, SeedableRng};
    let s = random_graph_spectrum(n, seed);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let b: Vec<f64> = (0..n).map(|_| f64::from(rng.gen_range(1u8..=8)) / 2.0).collect();
    let l0 = graphnyquist::testing::random_subset(n, seed, n - 1);
    (s, l0, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn redistribution_keeps_rate_and_bound(n in 3usize..7, seed in 0u64..10_000) {
        use graphnyquist::matroid::greedy_minimal_vertex_set;
        use graphnyquist::redistribute::{grow_v_star, recover_simple, redistribute};
        use graphnyquist::sampling::{sample_rate, Grid, GridRole, SampleSet};
        let (s, l0, b) = simple_instance(n, seed);
        let v0 = greedy_minimal_vertex_set(&s, &l0, &b).unwrap().set.vertices().to_vec();
        let grids: Vec<Grid<f64>> = v0
            .iter()
            .filter(|&&v| b[v] > 0.0)
            .map(|&v| Grid { vertex: v, rate: 2.0 * b[v], phase: 0.0, role: GridRole::Base })
            .collect();
        let period = graphnyquist::period::least_period(&grids.iter().map(|g| g.rate).collect::<Vec<_>>()).period;
        let mode = SignalMode::Periodic { period };
        let base = SampleSet::new(n, mode, grids).unwrap();
        let v_star = grow_v_star(&s, &l0, &v0);
        let r = redistribute(&s, &l0, &b, &v0, &v_star, &base).unwrap();
        prop_assert!((sample_rate(&r.set) - sample_rate(&base)).abs() < 1e-12);
        prop_assert!(r.eccentricity_after <= r.eccentricity_before + 1e-12);
        prop_assert!(r.eccentricity_after <= r.bound + 1e-12, "{} > {}", r.eccentricity_after, r.bound);
        let c: Vec<ExtReal<f64>> = (0..n).map(|l| if l0.contains(l) { ExtReal::Finite(0.0) } else { ExtReal::Infinite }).collect();
        let p = BandwidthProfile::from_finite(&b, c).unwrap();
        let SignalMode::Periodic { period: out_period } = r.set.mode else { unreachable!() };
        prop_assert!(((out_period / period).round() - out_period / period).abs() < 1e-9);
        let f = synthesize_generic(&s, &p, seed, out_period).unwrap().signal;
        let obs = sample_signal(&f, &r.set).unwrap();
        let g = recover_simple(&s, &l0, &b, &obs).unwrap();
        prop_assert!(recovery_error(&f, &g, None).unwrap().max < 1e-9);
    }
}

#[test]
fn five_vertex_round_trip_in_f32() {
    let s = five_vertex_spectrum::<f32>();
    let p = five_vertex_profile::<f32>();
    let f = build_filtration(&s, &p).unwrap();
    let seq = find_admissible_sequence(&s, &f).unwrap().unwrap();
    let plan = make_plan(&s, &f, &seq).unwrap();
    assert_eq!(plan.total_rate, 32.0f32);
    let mode = SignalMode::Periodic { period: 1.0f32 };
    let sig = synthesize_from_plan(&plan, 4, mode).unwrap().signal;
    let obs = sample_signal(&sig, &build_sample_set(&plan, mode).unwrap()).unwrap();
    let rec = recover(&obs, &plan, &s).unwrap();
    let err = recovery_error(&sig, &rec.recovered, None).unwrap().max;
    assert!(err < 1e-3, "f32 error {err}");
}

/// λ₂'s eigenvector vanishes at v2 here, so v2 carries only round-off.
#[test]
fn round_off_channel_round_trip() {
    let (n, seed) = (3, 8015);
    let s = random_graph_spectrum(n, seed);
    let p = random_profile(n, seed ^ 0x5eed);
    let plan = plan_for(&s, &p).unwrap();
    let period = plan.natural_period();
    let generic = synthesize_generic(&s, &p, seed, period).unwrap().signal;
    let set = build_sample_set(&plan, generic.mode).unwrap();
    let rec = recover(&sample_signal(&generic, &set).unwrap(), &plan, &s).unwrap();
    let report = recovery_error(&generic, &rec.recovered, None).unwrap();
    assert!(report.absolute[1]);
    assert!(report.max < 1e-9);
}
