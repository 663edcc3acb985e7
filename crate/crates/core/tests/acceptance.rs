//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use graphnyquist::bandwidth::{is_tight, profile_union, tighten, BandwidthProfile, ExtReal};
use graphnyquist::filtration::{build_filtration, find_admissible_sequence, verify_admissible};
use graphnyquist::fixtures::{five_vertex_profile, five_vertex_spectrum};
use graphnyquist::linalg::Matrix;
use graphnyquist::matroid::{
    enumerate_uniqueness_sets, greedy_minimal_vertex_set, is_dependent, is_dependent_by_rank, is_independent,
    is_uniqueness_set, matroid_rank,
};
use graphnyquist::plan::{build_sample_set, make_plan, SamplingPlan};
use graphnyquist::recovery::{recover, recovery_error};
use graphnyquist::redistribute::redistribute;
use graphnyquist::sampling::{eccentricity, sample_rate, sample_signal, Grid, GridRole, Observation, SampleSet};
use graphnyquist::signal::SignalMode;
use graphnyquist::spectral::{build_shift_operator, eigendecompose, GraphModel, ShiftKind};
use graphnyquist::surrogate::{null_witness, signal_space_basis, verify_membership};
use graphnyquist::synth::{synthesize_from_plan, synthesize_generic};
use graphnyquist::testing::{random_graph_spectrum, random_half_integers, random_profile, random_spectrum, random_subset};
use graphnyquist::{Error, FrequencySubset, Spectrum64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INF: ExtReal<f64> = ExtReal::Infinite;
const UNIT: SignalMode<f64> = SignalMode::Periodic { period: 1.0 };
const B6: [f64; 5] = [5., 5., 1., 4., 4.];

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn fin(x: f64) -> ExtReal<f64> {
    ExtReal::Finite(x)
}

fn freqs(ix: &[usize]) -> FrequencySubset {
    FrequencySubset::new(ix.to_vec(), 5).unwrap()
}

fn five_vertex_plan() -> (Spectrum64, SamplingPlan<f64>) {
    let s = five_vertex_spectrum::<f64>();
    let f = build_filtration(&s, &five_vertex_profile()).unwrap();
    let seq = find_admissible_sequence(&s, &f).unwrap().expect("admissible sequence");
    let plan = make_plan(&s, &f, &seq).unwrap();
    (s, plan)
}

/// The Laplacian as printed, entered row by row.
fn printed_laplacian() -> Matrix<f64> {
    Matrix::from_rows(&[
        vec![3., -1., 0., -1., -1.],
        vec![-1., 3., -1., -1., 0.],
        vec![0., -1., 3., -1., -1.],
        vec![-1., -1., -1., 3., 0.],
        vec![-1., 0., -1., 0., 2.],
    ])
    .unwrap()
}

fn criterion_1() -> Outcome {
    let g = GraphModel::<f64>::unweighted(5, &[]).unwrap();
    let shift = build_shift_operator(&g, &ShiftKind::Custom(printed_laplacian())).unwrap();
    let s = eigendecompose(&shift, 1e-9).unwrap();
    let expected = [0., 2., 3., 4., 5.];
    let eig_err = s.eigenvalues().iter().zip(expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let printed = [0., 0.408, 0., 0.408, -0.817];
    let u2 = s.row(1);
    let vec_err = [1.0, -1.0]
        .iter()
        .map(|sign| u2.iter().zip(printed).map(|(a, b)| (sign * a - b).abs()).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min);
    check(
        eig_err <= 1e-9 && vec_err <= 5e-3,
        format!("eigenvalue error {eig_err:.2e} (tol 1e-9), lambda2 eigenvector error {vec_err:.2e} (tol 5e-3)"),
    )
}

fn criterion_2() -> Outcome {
    let s = five_vertex_spectrum::<f64>();
    let f = build_filtration(&s, &five_vertex_profile()).unwrap();
    let order: Vec<String> = f.selection_order().iter().map(|&l| format!("λ{}", l + 1)).collect();
    let by_selection: Vec<f64> = f.steps.iter().rev().map(|st| st.b_star).collect();
    let terminal = f.terminal().freq_bw.clone();
    let order_ok = f.selection_order() == vec![1, 2, 0];
    let b_ok = by_selection == vec![2.0, 5.0, 5.0];
    let terminal_ok = terminal == vec![fin(0.), fin(0.), fin(0.), INF, INF];
    check(
        order_ok && b_ok && terminal_ok,
        format!(
            "order {order:?} ({}), b in selection order {by_selection:?} vs expected [2, 5, 5] ({}), terminal C0 {} ({})",
            ok(order_ok),
            ok(b_ok),
            terminal.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            ok(terminal_ok)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "mismatch"
    }
}

fn criterion_3() -> Outcome {
    let s = five_vertex_spectrum::<f64>();
    let sets: Vec<Vec<usize>> = enumerate_uniqueness_sets(&s, &freqs(&[1]))
        .unwrap()
        .iter()
        .map(|u| u.vertices().to_vec())
        .collect();
    let expected = vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 2, 3, 4]];
    let l123 = freqs(&[0, 1, 2]);
    let v35 = is_uniqueness_set(&s, &l123, &[2, 4]);
    let v34 = is_uniqueness_set(&s, &l123, &[2, 3]);
    check(
        sets == expected && !v35 && v34,
        format!(
            "U({{λ2}}) has {} sets ({}), {{v3,v5}} in U: {v35}, {{v3,v4}} in U: {v34}",
            sets.len(),
            ok(sets == expected)
        ),
    )
}

fn criterion_4() -> Outcome {
    let s = five_vertex_spectrum::<f64>();
    let l0 = freqs(&[0, 1, 2]);
    let g = greedy_minimal_vertex_set(&s, &l0, &B6).unwrap();
    let dep = is_dependent(&s, &l0, &[2], 4).unwrap();
    let dep_rank = is_dependent_by_rank(&s, &l0, &[2], 4).unwrap();
    let w0 = BandwidthProfile::from_finite(&B6, vec![fin(0.), fin(0.), fin(0.), INF, INF]).unwrap();
    let tight = is_tight(&s, &w0).unwrap().tight;
    let pass = g.set.vertices() == [2, 3] && g.rate == 10.0 && dep && dep_rank && !tight;
    check(
        pass,
        format!(
            "greedy set {:?} rate {}, v5 dependent on {{v3}}: {dep} (rank route {dep_rank}), verdict {}",
            g.set.vertices().iter().map(|v| v + 1).collect::<Vec<_>>(),
            g.rate,
            if tight { "tight" } else { "not tight" }
        ),
    )
}

fn criterion_5() -> Outcome {
    let s = five_vertex_spectrum::<f64>();
    let f = build_filtration(&s, &five_vertex_profile()).unwrap();
    let Some(seq) = find_admissible_sequence(&s, &f).unwrap() else {
        return check(false, "no admissible sequence found");
    };
    let verified = verify_admissible(&s, &f, &seq).is_ok();
    let expected = vec![vec![2, 3], vec![2, 3, 4], vec![0, 2, 3, 4], vec![0, 1, 2, 3, 4]];
    let total = make_plan(&s, &f, &seq).unwrap().total_rate;
    let dim = signal_space_basis(&s, &B6, five_vertex_profile::<f64>().freq_bw(), 1.0).unwrap().dim();
    check(
        seq.sets == expected && verified && total == 34.0,
        format!(
            "sequence {} ({}), verified {verified}, total rate {total} vs expected 34; surrogate dimension per unit period {dim}",
            seq.sets
                .iter()
                .map(|v| format!("{:?}", v.iter().map(|x| x + 1).collect::<Vec<_>>()))
                .collect::<Vec<_>>()
                .join(" ⊂ "),
            ok(seq.sets == expected)
        ),
    )
}

fn criterion_6() -> Outcome {
    let s = five_vertex_spectrum::<f64>();
    let g = |v, rate| Grid {
        vertex: v,
        rate,
        phase: 0.0,
        role: GridRole::Base,
    };
    let base = SampleSet::new(5, UNIT, vec![g(2, 2.0), g(3, 8.0)]).unwrap();
    let c_before = eccentricity(&base).unwrap();
    let r = redistribute(&s, &freqs(&[0, 1, 2]), &B6, &[2, 3], &[1, 2, 3], &base).unwrap();
    let rates = r.set.vertex_rates();
    let rates_ok = rates == vec![0.0, 4.0, 2.0, 4.0, 0.0];
    let total = sample_rate(&r.set);
    let pass = c_before == 4.0 && rates_ok && r.eccentricity_after == 2.0 && total == 10.0 && r.eccentricity_after <= r.bound && r.eccentricity_after <= 4.0;
    check(
        pass,
        format!(
            "c before {c_before}, rates v2:{} v3:{} v4:{} ({}), c after {}, total {total}, redistribution bound {} (criterion quotes 4)",
            rates[1],
            rates[2],
            rates[3],
            ok(rates_ok),
            r.eccentricity_after,
            r.bound
        ),
    )
}

fn round_trip_error(s: &Spectrum64, plan: &SamplingPlan<f64>, f: &graphnyquist::Signal64) -> Result<f64, Error> {
    let set = build_sample_set(plan, f.mode)?;
    let obs = sample_signal(f, &set)?;
    let rec = recover(&obs, plan, s)?;
    Ok(recovery_error(f, &rec.recovered, None)?.max)
}

fn criterion_7() -> Outcome {
    let mut problems = 0;
    let mut skipped = 0;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut seed = 0u64;
    while problems < 100 {
        seed += 1;
        let n = 2 + (seed as usize % 6);
        let s = random_graph_spectrum(n, seed);
        let p = random_profile(n, seed.wrapping_mul(7919));
        let f = build_filtration(&s, &p).unwrap();
        let Some(seq) = find_admissible_sequence(&s, &f).unwrap() else {
            skipped += 1;
            continue;
        };
        problems += 1;
        let plan = make_plan(&s, &f, &seq).unwrap();
        let mode = SignalMode::Periodic {
            period: plan.natural_period(),
        };
        let period = plan.natural_period();
        for (route, signal) in [
            ("structured", synthesize_from_plan(&plan, seed, mode).map(|x| x.signal)),
            ("generic", synthesize_generic(&s, &p, seed, period).map(|x| x.signal)),
        ] {
            let outcome = signal.and_then(|sig| {
                let member = verify_membership(&s, p.vertex_bw(), p.freq_bw(), &sig)?.ok;
                if !member {
                    return Err(Error::Sampling("synthesized signal failed membership".into()));
                }
                round_trip_error(&s, &plan, &sig)
            });
            match outcome {
                Ok(e) => {
                    worst = worst.max(e);
                    if !(e < 1e-9) {
                        failures.push(format!("seed {seed} {route}: {e:.2e}"));
                    }
                }
                Err(e) => failures.push(format!("seed {seed} {route}: {e}")),
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "100 problems (n 2..7, {skipped} draws without an admissible sequence skipped), two signals each, worst relative error {worst:.2e} (tol 1e-9){}",
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut mismatches = Vec::new();
    for seed in 0..100u64 {
        let n = 2 + (seed as usize % 6);
        let s = if seed % 2 == 0 { random_spectrum(n, seed) } else { random_graph_spectrum(n, seed) };
        let l0 = random_subset(n, seed + 1000, n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_half_integers(n, &mut rng);
        let greedy = greedy_minimal_vertex_set(&s, &l0, &b).unwrap().rate;
        let oracle = enumerate_uniqueness_sets(&s, &l0)
            .unwrap()
            .iter()
            .map(|u| 2.0 * u.vertices().iter().map(|&v| b[v]).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if greedy != oracle {
            mismatches.push(format!("seed {seed}: greedy {greedy} vs oracle {oracle}"));
        }
    }
    check(
        mismatches.is_empty(),
        format!("100 instances, n 2..7, {} mismatches {}", mismatches.len(), mismatches.join("; ")),
    )
}

fn subsets(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect()
}

fn criterion_9() -> Outcome {
    let mut problems = Vec::new();
    let mut pairs = 0usize;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 5);
        let s = if seed % 2 == 0 { random_spectrum(n, seed) } else { random_graph_spectrum(n, seed) };
        let l0 = random_subset(n, seed + 77, n);
        let all = subsets(n);
        let independent: Vec<Vec<usize>> = all
            .into_iter()
            .filter(|set| {
                let by_null = is_independent(&s, &l0, set).unwrap();
                let by_rank = matroid_rank(&s, &l0, set) == set.len();
                if by_null != by_rank {
                    problems.push(format!("seed {seed}: routes disagree on {set:?}"));
                }
                by_null
            })
            .collect();
        for set in &independent {
            for i in 0..set.len() {
                let mut smaller = set.clone();
                smaller.remove(i);
                if !independent.contains(&smaller) {
                    problems.push(format!("seed {seed}: hereditary fails at {set:?}"));
                }
            }
        }
        for a in &independent {
            for b in &independent {
                if a.len() >= b.len() {
                    continue;
                }
                pairs += 1;
                let extends = b.iter().filter(|x| !a.contains(x)).any(|&x| {
                    let mut c = a.clone();
                    c.push(x);
                    c.sort_unstable();
                    independent.contains(&c)
                });
                if !extends {
                    problems.push(format!("seed {seed}: exchange fails for {a:?}, {b:?}"));
                }
            }
        }
    }
    check(
        problems.is_empty(),
        format!("50 instances, n 2..6, {pairs} exchange pairs, {} violations {}", problems.len(), problems.join("; ")),
    )
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();
    let mut checked = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 5);
        let s = random_graph_spectrum(n, seed + 500);
        let p = random_profile(n, seed + 900);
        let q = BandwidthProfile::from_finite(
            &random_half_integers(n, &mut ChaCha8Rng::seed_from_u64(seed + 1300)),
            p.freq_bw().to_vec(),
        )
        .unwrap();
        let (Ok(t), Ok(tq)) = (tighten(&s, &p), tighten(&s, &q)) else {
            problems.push(format!("seed {seed}: tighten failed"));
            continue;
        };
        checked += 1;
        let tb = t.finite_vertex_bw().unwrap();
        let pb = p.finite_vertex_bw().unwrap();
        if tighten(&s, &t).unwrap() != t {
            problems.push(format!("seed {seed}: not idempotent"));
        }
        if tb.iter().zip(&pb).any(|(a, b)| a > b) {
            problems.push(format!("seed {seed}: tightened exceeds original"));
        }
        if !is_tight(&s, &t).unwrap().tight {
            problems.push(format!("seed {seed}: result not tight"));
        }
        if !is_tight(&s, &profile_union(&t, &tq).unwrap()).unwrap().tight {
            problems.push(format!("seed {seed}: union of tight profiles not tight"));
        }
    }
    check(
        problems.is_empty() && checked == 50,
        format!("{checked} instances, n 2..6, {} violations {}", problems.len(), problems.join("; ")),
    )
}

fn criterion_11() -> Outcome {
    let (s, plan) = five_vertex_plan();
    let p = five_vertex_profile::<f64>();
    let set = build_sample_set(&plan, UNIT).unwrap();
    let f = synthesize_from_plan(&plan, 3, UNIT).unwrap().signal;
    let full = sample_signal(&f, &set).unwrap();
    let basis = signal_space_basis(&s, &B6, p.freq_bw(), 1.0).unwrap();
    let (mut singular, mut witnessed, mut neither) = (0, 0, Vec::new());
    for drop in 0..full.samples.len() {
        let mut samples = full.samples.clone();
        samples.remove(drop);
        let obs = Observation {
            mode: UNIT,
            samples: samples.clone(),
        };
        let is_singular = matches!(recover(&obs, &plan, &s), Err(Error::RankDeficient { .. }));
        let points: Vec<(usize, f64)> = samples.iter().map(|x| (x.vertex, x.time)).collect();
        let witness = null_witness(&basis, &points, 1e-9).filter(|w| {
            let member = verify_membership(&s, p.vertex_bw(), p.freq_bw(), w).map(|m| m.ok).unwrap_or(false);
            let scale = (0..5)
                .map(|v| w.channels[v].as_trig().unwrap().max_abs_coefficient())
                .fold(0.0, f64::max);
            let silent = points.iter().all(|&(v, t)| w.eval(v, t).abs() <= 1e-9 * scale);
            member && silent && scale > 0.0
        });
        if is_singular {
            singular += 1;
        }
        if witness.is_some() {
            witnessed += 1;
        }
        if !is_singular && witness.is_none() {
            let x = &full.samples[drop];
            neither.push(format!("v{} t={}", x.vertex + 1, x.time));
        }
    }
    check(
        neither.is_empty(),
        format!(
            "{} points per period, each deletion: singular level system {singular}/{n}, null-space witness in W {witnessed}/{n}{}",
            full.samples.len(),
            if neither.is_empty() { String::new() } else { format!("; undetected: {}", neither.join(", ")) },
            n = full.samples.len()
        ),
    )
}

fn criterion_12() -> Outcome {
    let (s, plan) = five_vertex_plan();
    let mode = SignalMode::Sinc { start: -20.0, end: 20.0 };
    let f = synthesize_from_plan(&plan, 42, mode).unwrap().signal;
    match round_trip_error(&s, &plan, &f) {
        Ok(e) => check(e < 1e-2, format!("window [-20, 20], inner half [-10, 10], max relative error {e:.2e} (tol 1e-2)")),
        Err(e) => check(false, format!("recovery failed: {e}")),
    }
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 12] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
    ];
    let mut failed = 0;
    for (id, run) in criteria {
        let start = Instant::now();
        let out = run();
        if !out.pass {
            failed += 1;
        }
        println!(
            "criterion {id} [{}]: {} ({:.1}s)",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
