//! The four commands over a parsed problem.

use graphnyquist::bandwidth::{check_uniform, finitize, is_tight, tighten, BandwidthProfile};
use graphnyquist::filtration::{build_filtration, find_admissible_sequence, Filtration};
use graphnyquist::matroid::greedy_minimal_vertex_set;
use graphnyquist::period::least_period;
use graphnyquist::plan::{build_sample_set, make_plan, SamplingPlan};
use graphnyquist::recovery::{inner_half, recover, recovery_error};
use graphnyquist::redistribute::{grow_v_star, redistribute, Choice};
use graphnyquist::sampling::{eccentricity, sample_rate, sample_signal, Grid, GridRole, SampleSet};
use graphnyquist::signal::{ContinuousGraphSignal, SignalMode};
use graphnyquist::spectral::{build_shift_operator, eigendecompose};
use graphnyquist::synth::synthesize_from_plan;
use graphnyquist::{AdmissibleSequence, Spectrum64};

use crate::error::CliError;
use crate::problem::{ModeKind, Problem};
use crate::report::*;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_WINDOW: (f64, f64) = (-20.0, 20.0);
/// Plot samples per period in periodic mode.
const PLOT_DENSITY: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Plan,
    Simulate,
    Redistribute,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Plan => "plan",
            Command::Simulate => "simulate",
            Command::Redistribute => "redistribute",
        }
    }
}

/// Flag values; each overrides the matching problem option.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub mode: Option<ModeKind>,
    pub period: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    /// 0-based.
    pub v_star: Option<Vec<usize>>,
}

struct Settings {
    mode: ModeKind,
    period: Option<f64>,
    window: (f64, f64),
    seed: u64,
}

fn settings(problem: &Problem, o: &Overrides) -> Settings {
    let p = &problem.options;
    Settings {
        mode: o.mode.or(p.mode).unwrap_or(ModeKind::Periodic),
        period: o.period.or(p.period),
        window: o.window.or(p.window).unwrap_or(DEFAULT_WINDOW),
        seed: o.seed.or(p.seed).unwrap_or(0),
    }
}

fn labelled(labels: &[String], set: &[usize]) -> Vec<String> {
    set.iter().map(|&v| labels[v].clone()).collect()
}

fn finitized(spectrum: &Spectrum64, problem: &Problem, report: &mut Report) -> Option<BandwidthProfile<f64>> {
    let cert = check_uniform(spectrum, &problem.profile);
    report.uniformity = Some(UniformitySummary {
        is_uniform: cert.is_uniform,
        v_infinity: cert.v_infinity.clone(),
        witness_freqs: cert.witness_freqs.clone(),
        bound: cert.bound,
        used_fallback: cert.used_fallback,
    });
    let profile = finitize(&problem.profile, &cert).ok()?;
    report.finitized_b = profile.finite_vertex_bw().ok();
    Some(profile)
}

fn require_finitized(spectrum: &Spectrum64, problem: &Problem, report: &mut Report) -> Result<BandwidthProfile<f64>, CliError> {
    finitized(spectrum, problem, report)
        .ok_or_else(|| CliError::Infeasible("the signal space is not uniformly bandlimited; no finite sampling rate exists".into()))
}

fn filtration_summary(f: &Filtration<f64>) -> FiltrationSummary {
    FiltrationSummary {
        selection_order: f.selection_order(),
        levels: f
            .levels
            .iter()
            .enumerate()
            .map(|(i, l)| LevelSummary {
                level: i,
                c: l.freq_bw.clone(),
                lambda_zero: l.lambda_zero.indices().to_vec(),
                lambda_star: (i > 0).then(|| f.steps[i - 1].lambda_star),
                b: (i > 0).then(|| f.steps[i - 1].b_star),
            })
            .collect(),
    }
}

fn sequence_summary(seq: &AdmissibleSequence<f64>, labels: &[String]) -> SequenceSummary {
    SequenceSummary {
        sets: seq.sets.clone(),
        added: seq.added.clone(),
        labels: seq.sets.iter().map(|s| labelled(labels, s)).collect(),
    }
}

fn plan_summary(plan: &SamplingPlan<f64>, seq: &AdmissibleSequence<f64>) -> PlanSummary {
    PlanSummary {
        vertex_rates: plan.vertex_rates(),
        base_rate: plan.base_rate(),
        quotient_rates: seq.quotient_rates.clone(),
        total_rate: plan.total_rate,
        natural_period: plan.natural_period(),
        grids: plan.grids.clone(),
    }
}

fn signal_mode(s: &Settings, plan: &SamplingPlan<f64>) -> SignalMode<f64> {
    match s.mode {
        ModeKind::Periodic => SignalMode::Periodic {
            period: s.period.unwrap_or_else(|| plan.natural_period()),
        },
        ModeKind::Sinc => SignalMode::Sinc {
            start: s.window.0,
            end: s.window.1,
        },
    }
}

fn set_summary(set: &SampleSet<f64>, count: usize) -> SampleSetSummary {
    let (period, window) = match set.mode {
        SignalMode::Periodic { period } => (Some(period), None),
        SignalMode::Sinc { start, end } => (None, Some((start, end))),
    };
    SampleSetSummary {
        mode: set.mode.name().into(),
        period,
        window,
        count,
    }
}

fn point_rows(set: &SampleSet<f64>) -> Vec<SampleRow> {
    set.points()
        .into_iter()
        .map(|p| SampleRow {
            vertex: p.vertex,
            time: p.time,
            value: None,
            role: p.role,
        })
        .collect()
}

fn plot_rows(truth: &ContinuousGraphSignal<f64>, recovered: &ContinuousGraphSignal<f64>, plan: &SamplingPlan<f64>) -> Vec<PlotRow> {
    let (start, step, count) = match truth.mode {
        SignalMode::Periodic { period } => (0.0, period / PLOT_DENSITY as f64, PLOT_DENSITY),
        SignalMode::Sinc { start, end } => {
            let (a, b) = inner_half(start, end);
            let fastest = plan.vertex_bw.iter().copied().fold(1e-3, f64::max);
            // 16 points per Nyquist interval of the fastest channel.
            let step = 1.0 / (32.0 * fastest);
            (a, step, ((b - a) / step).floor() as usize + 1)
        }
    };
    (0..truth.n())
        .flat_map(|v| {
            (0..count).map(move |j| {
                let t = start + j as f64 * step;
                PlotRow {
                    vertex: v,
                    time: t,
                    truth: truth.eval(v, t),
                    recovered: recovered.eval(v, t),
                }
            })
        })
        .collect()
}

fn plan_problem(spectrum: &Spectrum64, problem: &Problem, report: &mut Report) -> Result<SamplingPlan<f64>, CliError> {
    let profile = require_finitized(spectrum, problem, report)?;
    let filtration = build_filtration(spectrum, &profile)?;
    report.filtration = Some(filtration_summary(&filtration));
    report.b_sequence = Some(filtration.quotient_bandwidths());
    let seq = find_admissible_sequence(spectrum, &filtration)?
        .ok_or_else(|| CliError::Infeasible("no admissible sequence exists for this filtration".into()))?;
    report.admissible_sequence = Some(sequence_summary(&seq, problem.graph.labels()));
    let plan = make_plan(spectrum, &filtration, &seq)?;
    report.plan = Some(plan_summary(&plan, &seq));
    Ok(plan)
}

fn analyze(spectrum: &Spectrum64, problem: &Problem, report: &mut Report) -> Result<(), CliError> {
    let Some(profile) = finitized(spectrum, problem, report) else {
        return Ok(());
    };
    let t = is_tight(spectrum, &profile)?;
    report.tightness = Some(TightnessSummary {
        tight: t.tight,
        violations: t
            .violations
            .iter()
            .map(|v| ViolationSummary {
                vertex: v.vertex,
                support: v.support.clone(),
                max_bw: v.max_bw,
            })
            .collect(),
    });
    report.tightened_b = Some(tighten(spectrum, &profile)?.finite_vertex_bw()?);
    Ok(())
}

fn redistribute_command(
    spectrum: &Spectrum64,
    problem: &Problem,
    overrides: &Overrides,
    report: &mut Report,
) -> Result<Option<Vec<SampleRow>>, CliError> {
    let profile = require_finitized(spectrum, problem, report)?;
    let filtration = build_filtration(spectrum, &profile)?;
    let lambda0 = filtration.terminal().lambda_zero.clone();
    let b = filtration.vertex_bw.clone();
    let v0 = greedy_minimal_vertex_set(spectrum, &lambda0, &b)?.set.vertices().to_vec();
    let grids: Vec<Grid<f64>> = v0
        .iter()
        .filter(|&&v| b[v] > 0.0)
        .map(|&v| Grid {
            vertex: v,
            rate: 2.0 * b[v],
            phase: 0.0,
            role: GridRole::Base,
        })
        .collect();
    if grids.is_empty() {
        return Err(CliError::Infeasible("the base sampling set has zero rate; nothing to redistribute".into()));
    }
    let period = least_period(&grids.iter().map(|g| g.rate).collect::<Vec<_>>()).period;
    let base = SampleSet::new(problem.n(), SignalMode::Periodic { period }, grids)?;
    let v_star = overrides
        .v_star
        .clone()
        .or_else(|| problem.options.v_star.clone())
        .unwrap_or_else(|| grow_v_star(spectrum, &lambda0, &v0));
    let r = redistribute(spectrum, &lambda0, &b, &v0, &v_star, &base)?;
    let SignalMode::Periodic { period: out_period } = r.set.mode else {
        unreachable!("periodic input stays periodic")
    };
    let mut v_star_sorted = v_star;
    v_star_sorted.sort_unstable();
    v_star_sorted.dedup();
    report.redistribution = Some(RedistributionSummary {
        v0,
        v_star: v_star_sorted,
        choices: r
            .choices
            .iter()
            .map(|c| match c {
                Choice::Own => "own".to_string(),
                Choice::Snapshot => "snapshot".to_string(),
            })
            .collect(),
        period: out_period,
        rates_before: base.vertex_rates(),
        rates_after: r.set.vertex_rates(),
        total_rate: sample_rate(&r.set),
        eccentricity_before: eccentricity(&base)?,
        eccentricity_after: r.eccentricity_after,
        bound: r.bound,
        grids: r.set.grids.clone(),
    });
    Ok(Some(point_rows(&r.set)))
}

pub fn run_command(command: Command, problem: &Problem, overrides: &Overrides) -> Result<Artifacts, CliError> {
    let s = settings(problem, overrides);
    let tol = overrides.tolerance.or(problem.options.tolerance).unwrap_or(DEFAULT_TOLERANCE);
    let shift = build_shift_operator(&problem.graph, &problem.shift)?;
    let spectrum = eigendecompose(&shift, tol)?;
    let mut report = Report {
        command: Some(command.name().into()),
        n: Some(problem.n()),
        labels: Some(problem.graph.labels().to_vec()),
        eigenvalues: Some(spectrum.eigenvalues().to_vec()),
        ..Report::default()
    };
    let mut samples = None;
    let mut plot = None;
    match command {
        Command::Analyze => analyze(&spectrum, problem, &mut report)?,
        Command::Plan => {
            let plan = plan_problem(&spectrum, problem, &mut report)?;
            let set = build_sample_set(&plan, signal_mode(&s, &plan))?;
            let rows = point_rows(&set);
            report.sample_set = Some(set_summary(&set, rows.len()));
            samples = Some(rows);
        }
        Command::Simulate => {
            let plan = plan_problem(&spectrum, problem, &mut report)?;
            let mode = signal_mode(&s, &plan);
            let set = build_sample_set(&plan, mode)?;
            let truth = synthesize_from_plan(&plan, s.seed, mode)?.signal;
            let obs = sample_signal(&truth, &set)?;
            let recovered = recover(&obs, &plan, &spectrum)?.recovered;
            let err = recovery_error(&truth, &recovered, None)?;
            let set_summary = set_summary(&set, obs.samples.len());
            report.simulation = Some(SimulationSummary {
                mode: mode.name().into(),
                period: set_summary.period,
                window: set_summary.window,
                seed: s.seed,
                samples: obs.samples.len(),
                per_vertex_error: err.per_vertex,
                absolute: err.absolute,
                max_error: err.max,
            });
            report.sample_set = Some(set_summary);
            samples = Some(
                obs.samples
                    .iter()
                    .map(|x| SampleRow {
                        vertex: x.vertex,
                        time: x.time,
                        value: Some(x.value),
                        role: x.role,
                    })
                    .collect(),
            );
            plot = Some(plot_rows(&truth, &recovered, &plan));
        }
        Command::Redistribute => samples = redistribute_command(&spectrum, problem, overrides, &mut report)?,
    }
    Ok(Artifacts { report, samples, plot })
}

/// One-line-per-fact summary with 1-based labels.
pub fn human_summary(a: &Artifacts) -> String {
    let r = &a.report;
    let one = |v: usize| format!("v{}", v + 1);
    let set = |s: &[usize]| format!("{{{}}}", s.iter().map(|&v| one(v)).collect::<Vec<_>>().join(","));
    let mut out = Vec::new();
    if let Some(u) = &r.uniformity {
        out.push(format!("uniformly bandlimited: {} (bound {})", u.is_uniform, u.bound));
    }
    if let Some(t) = &r.tightness {
        out.push(format!("tight: {}", t.tight));
    }
    if let Some(f) = &r.filtration {
        let order: Vec<String> = f.selection_order.iter().map(|l| format!("λ{}", l + 1)).collect();
        out.push(format!("reduction order: {}", order.join(", ")));
    }
    if let Some(b) = &r.b_sequence {
        out.push(format!("quotient bandwidths b_1..b_k: {b:?}"));
    }
    if let Some(s) = &r.admissible_sequence {
        out.push(format!(
            "admissible sequence: {}",
            s.sets.iter().map(|x| set(x)).collect::<Vec<_>>().join(" ⊂ ")
        ));
    }
    if let Some(p) = &r.plan {
        out.push(format!("total rate: {}", p.total_rate));
    }
    if let Some(sim) = &r.simulation {
        out.push(format!("max relative error: {:.3e}", sim.max_error));
    }
    if let Some(d) = &r.redistribution {
        out.push(format!(
            "eccentricity {} -> {} (bound {}), V* = {}",
            d.eccentricity_before,
            d.eccentricity_after,
            d.bound,
            set(&d.v_star)
        ));
    }
    out.join("\n") + "\n"
}
