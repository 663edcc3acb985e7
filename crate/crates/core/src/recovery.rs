//! Level-by-level recovery `f = f₀ + Σ_i M_i[:, v_i]·h_i` and error measures.
//!
//! Level 0 reconstructs every `V₀` channel from its own grid and extends.
//! Level `i` subtracts the components found so far at the samples on `v_i`,
//! reconstructs the bandwidth-`b_i` residual `h_i`, and extends it with the
//! `v_i` column of `M_i`, which vanishes on `V_{i−1}`.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::plan::{joint_system, SamplingPlan};
use crate::sampling::{GridRole, Observation, ObservedSample};
use crate::scalar::Scalar;
use crate::signal::{ContinuousGraphSignal, ScalarSignal, SignalMode, SincAtom, TrigPoly};
use crate::spectral::Spectrum;
use crate::surrogate::{fit_channel, Component};

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult<S> {
    pub recovered: ContinuousGraphSignal<S>,
    /// `f₀, f₁, …, f_k`; their sum is `recovered`.
    pub components: Vec<ContinuousGraphSignal<S>>,
}

fn reconstruct<S: Scalar>(
    mode: &SignalMode<S>,
    bandwidth: S,
    samples: &[(S, S)],
    level: usize,
) -> Result<ScalarSignal<S>> {
    if bandwidth <= S::zero() {
        return Ok(ScalarSignal::zero(mode));
    }
    match *mode {
        SignalMode::Periodic { period } => {
            let (t, y): (Vec<S>, Vec<S>) = samples.iter().copied().unzip();
            fit_channel(bandwidth, period, &t, &y, S::rank_tolerance())
                .map(ScalarSignal::Trig)
                .map_err(|(rank, unknowns)| Error::RankDeficient { level, rank, unknowns })
        }
        SignalMode::Sinc { .. } => Ok(ScalarSignal::Sinc(
            samples
                .iter()
                .map(|&(center, amplitude)| SincAtom {
                    center,
                    bandwidth,
                    amplitude,
                })
                .collect(),
        )),
    }
}

fn column_signal<S: Scalar>(
    mode: SignalMode<S>,
    column: &[S],
    h: ScalarSignal<S>,
    nominal_bw: &[S],
) -> Result<ContinuousGraphSignal<S>> {
    let m = Matrix::from_fn(column.len(), 1, |r, _| column[r]);
    ContinuousGraphSignal::extend(mode, &m, &[h], nominal_bw.to_vec())
}

fn residuals<'a, S: Scalar>(
    sum: &ContinuousGraphSignal<S>,
    samples: impl Iterator<Item = &'a ObservedSample<S>>,
) -> Vec<(usize, S, S)> {
    samples
        .map(|s| (s.vertex, s.time, s.value - sum.eval(s.vertex, s.time)))
        .collect()
}

pub fn recover<S: Scalar>(
    obs: &Observation<S>,
    plan: &SamplingPlan<S>,
    spectrum: &Spectrum<S>,
) -> Result<RecoveryResult<S>> {
    let n = plan.n;
    if spectrum.n() != n {
        return Err(Error::Dimension(format!("plan on {n} vertices, spectrum on {}", spectrum.n())));
    }
    let mode = obs.mode;
    let split_from = plan.first_split_level();
    if split_from.is_some() && matches!(mode, SignalMode::Sinc { .. }) {
        return Err(Error::Unsupported("split plans are recovered in periodic mode only".into()));
    }
    let nominal = &plan.vertex_bw;
    let base = &plan.schedule[0];
    let mut sources = Vec::with_capacity(base.vertices.len());
    for &v in &base.vertices {
        let pts: Vec<(S, S)> = obs
            .with_role(GridRole::Base)
            .filter(|s| s.vertex == v)
            .map(|s| (s.time, s.value))
            .collect();
        sources.push(reconstruct(&mode, plan.vertex_bw[v], &pts, 0)?);
    }
    let f0 = ContinuousGraphSignal::extend(mode, &base.extension, &sources, nominal.clone())?;
    let mut sum = f0.clone();
    let mut components = vec![f0];

    let last_sequential = split_from.map_or(plan.k(), |s| s - 1);
    for recipe in &plan.schedule[1..=last_sequential] {
        let level = recipe.level;
        let bi = recipe.bandwidth.expect("quotient level");
        let pts: Vec<(S, S)> = residuals(&sum, obs.with_role(GridRole::Quotient { level }))
            .into_iter()
            .map(|(_, t, r)| (t, r))
            .collect();
        let h = reconstruct(&mode, bi, &pts, level)?;
        let fi = column_signal(mode, &recipe.added_column().expect("quotient level"), h, nominal)?;
        sum.add_scaled(&fi, S::one())?;
        components.push(fi);
    }

    if let (Some(from), SignalMode::Periodic { period }) = (split_from, mode) {
        let rows = residuals(
            &sum,
            obs.samples.iter().filter(|s| match s.role {
                GridRole::Quotient { level } | GridRole::Donated { level } => level >= from,
                _ => false,
            }),
        );
        let points: Vec<(usize, S)> = rows.iter().map(|&(v, t, _)| (v, t)).collect();
        let values: Vec<S> = rows.iter().map(|&(_, _, r)| r).collect();
        let (a, unknowns) = joint_system(plan, from, period, &points);
        let tol = S::rank_tolerance();
        let svd = linalg::svd(&a);
        let rank = svd.rank(tol);
        if rank < unknowns.len() {
            return Err(Error::RankDeficient {
                level: from,
                rank,
                unknowns: unknowns.len(),
            });
        }
        let coef = if unknowns.is_empty() {
            Vec::new()
        } else {
            svd.solve_least_squares(&values, tol)
        };
        for recipe in &plan.schedule[from..] {
            let mut h = TrigPoly::zero(period);
            for (&(level, k, comp), &c) in unknowns.iter().zip(&coef) {
                if level != recipe.level {
                    continue;
                }
                let (cc, ss) = (h.cos.get(k).copied().unwrap_or(S::zero()), h.sin.get(k).copied().unwrap_or(S::zero()));
                match comp {
                    Component::Cos => h.set(k, c, ss),
                    Component::Sin => h.set(k, cc, c),
                }
            }
            let fi = column_signal(
                mode,
                &recipe.added_column().expect("quotient level"),
                ScalarSignal::Trig(h),
                nominal,
            )?;
            sum.add_scaled(&fi, S::one())?;
            components.push(fi);
        }
    }
    Ok(RecoveryResult {
        recovered: sum,
        components,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport<S> {
    /// Relative L² error per vertex; scaled by the largest channel norm where flagged.
    pub per_vertex: Vec<S>,
    /// True where the reference channel is numerically zero, or everything is zero.
    pub absolute: Vec<bool>,
    pub max: S,
}

/// Inner half of a sinc window.
pub fn inner_half<S: Scalar>(start: S, end: S) -> (S, S) {
    let q = (end - start) / S::lit(4.0);
    (start + q, end - q)
}

fn max_atom_bandwidth<S: Scalar>(f: &ContinuousGraphSignal<S>) -> S {
    f.channels
        .iter()
        .flat_map(|c| match c {
            ScalarSignal::Sinc(atoms) => atoms.iter().map(|a| a.bandwidth).collect::<Vec<_>>(),
            ScalarSignal::Trig(_) => Vec::new(),
        })
        .fold(S::zero(), S::max)
}

/// `‖f_v − g_v‖ / ‖f_v‖` per vertex: exact by Parseval in periodic mode,
/// trapezoid at 32× the Nyquist rate on `window` (default: inner half) in sinc mode.
pub fn recovery_error<S: Scalar>(
    f: &ContinuousGraphSignal<S>,
    g: &ContinuousGraphSignal<S>,
    window: Option<(S, S)>,
) -> Result<ErrorReport<S>> {
    if f.n() != g.n() || f.mode.name() != g.mode.name() {
        return Err(Error::ModeMismatch("error between incompatible signals".into()));
    }
    let pairs: Vec<(S, S)> = match f.mode {
        SignalMode::Periodic { .. } => f
            .channels
            .iter()
            .zip(&g.channels)
            .map(|(a, b)| {
                let (Some(p), Some(q)) = (a.as_trig(), b.as_trig()) else {
                    return Err(Error::ModeMismatch("expected periodic channels".into()));
                };
                if p.period != q.period {
                    return Err(Error::ModeMismatch("periods differ".into()));
                }
                let mut d = p.clone();
                d.add_scaled(q, -S::one());
                Ok((d.energy().sqrt(), p.energy().sqrt()))
            })
            .collect::<Result<_>>()?,
        SignalMode::Sinc { start, end } => {
            let (a, b) = window.unwrap_or_else(|| inner_half(start, end));
            let bw = max_atom_bandwidth(f).max(max_atom_bandwidth(g)).max(S::lit(1e-3));
            let h0 = S::one() / (S::lit(64.0) * bw);
            let steps = ((b - a) / h0).ceil().to_usize().unwrap_or(1).max(1);
            let h = (b - a) / S::from_usize_lossy(steps);
            (0..f.n())
                .map(|v| {
                    let (mut e, mut r) = (S::zero(), S::zero());
                    for j in 0..=steps {
                        let t = a + S::from_usize_lossy(j) * h;
                        let w = if j == 0 || j == steps { S::lit(0.5) } else { S::one() };
                        let (x, y) = (f.eval(v, t), g.eval(v, t));
                        e += w * (x - y) * (x - y);
                        r += w * x * x;
                    }
                    Ok(((e * h).sqrt(), (r * h).sqrt()))
                })
                .collect::<Result<_>>()?
        }
    };
    // A channel at round-off level next to the largest one is zero in exact
    // arithmetic; its error is measured against the largest channel instead.
    let scale = pairs.iter().map(|&(_, r)| r).fold(S::zero(), S::max);
    let floor = S::rank_tolerance() * scale;
    let mut per_vertex = Vec::with_capacity(pairs.len());
    let mut absolute = Vec::with_capacity(pairs.len());
    for (err, reference) in pairs {
        let abs = reference <= floor;
        absolute.push(abs);
        per_vertex.push(match (abs, scale > S::zero()) {
            (false, _) => err / reference,
            (true, true) => err / scale,
            (true, false) => err,
        });
    }
    let max = per_vertex.iter().copied().fold(S::zero(), S::max);
    Ok(ErrorReport {
        per_vertex,
        absolute,
        max,
    })
}
