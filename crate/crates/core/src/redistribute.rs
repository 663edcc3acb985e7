//! Eccentricity reduction for simple GFT bandwidths.
//!
//! Channels of `V₀` are handled in ascending rate. Each either keeps its
//! remaining load on its own vertex, or converts it into snapshots spread
//! round-robin over disjoint subsets of `V* ∖ V′`, which is possible because
//! every `m`-subset of `V*` is a uniqueness set. All `2^m` choice patterns
//! are scored by the largest per-vertex rate and the best one that still
//! determines the space is returned.

use itertools::Itertools;

use crate::bandwidth::ExtReal;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matroid::{self, FrequencySubset};
use crate::period::least_period;
use crate::sampling::{eccentricity, sample_rate, Grid, GridRole, Observation, SampleSet};
use crate::scalar::Scalar;
use crate::signal::{ContinuousGraphSignal, SignalMode};
use crate::spectral::Spectrum;
use crate::surrogate::{fit_in_space, signal_space_basis, SignalSpaceBasis};

/// Largest `|V₀|` for which every choice pattern is scored.
pub const CHOICE_LIMIT: usize = 16;
/// Largest number of `m`-subsets of `V*` checked for the uniqueness condition.
pub const SUBSET_LIMIT: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Choice {
    Own,
    Snapshot,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Redistribution<S> {
    pub set: SampleSet<S>,
    /// Per channel of `V₀`, in ascending rate order.
    pub order: Vec<usize>,
    pub choices: Vec<Choice>,
    pub eccentricity_before: S,
    pub eccentricity_after: S,
    pub bound: S,
}

/// `(2n·B₁/⌊m′/m⌋ + 2n·Σ_i (B_{i+1} − B_i)/⌊(m′−i)/(m−i)⌋) / r` with `B`
/// ascending over `V₀`.
pub fn eccentricity_bound<S: Scalar>(n: usize, sorted_bw: &[S], m_star: usize, rate: S) -> Result<S> {
    let m = sorted_bw.len();
    if m == 0 || rate <= S::zero() {
        return Err(Error::ZeroRate);
    }
    if m_star < m {
        return Err(Error::Redistribution(format!("|V*| = {m_star} is smaller than |V0| = {m}")));
    }
    let two_n = S::lit(2.0) * S::from_usize_lossy(n);
    let mut acc = two_n * sorted_bw[0] / S::from_usize_lossy(m_star / m);
    for i in 1..m {
        let p = (m_star - i) / (m - i);
        acc += two_n * (sorted_bw[i] - sorted_bw[i - 1]) / S::from_usize_lossy(p);
    }
    Ok(acc / rate)
}

/// Errors unless every `|V₀|`-subset of `v_star` is a uniqueness set.
pub fn check_v_star<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v0: &[usize],
    v_star: &[usize],
) -> Result<()> {
    if let Some(&v) = v0.iter().find(|v| !v_star.contains(v)) {
        return Err(Error::Redistribution(format!("vertex {v} of V0 is not in V*")));
    }
    let count = binomial(v_star.len(), v0.len());
    if count > SUBSET_LIMIT {
        return Err(Error::TooLarge {
            what: "subsets of V*",
            limit: SUBSET_LIMIT,
            n: count,
        });
    }
    for subset in v_star.iter().copied().combinations(v0.len()) {
        if !matroid::is_uniqueness_set(spectrum, lambda0, &subset) {
            return Err(Error::Redistribution(format!("subset {subset:?} of V* is not a uniqueness set")));
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Grows `V₀` one vertex at a time, in index order, while the uniqueness
/// condition on all `|V₀|`-subsets survives.
pub fn grow_v_star<S: Scalar>(spectrum: &Spectrum<S>, lambda0: &FrequencySubset, v0: &[usize]) -> Vec<usize> {
    let mut v_star = v0.to_vec();
    v_star.sort_unstable();
    for v in 0..spectrum.n() {
        if v_star.contains(&v) {
            continue;
        }
        let ok = v0.is_empty()
            || (binomial(v_star.len(), v0.len() - 1) <= SUBSET_LIMIT
                && v_star.iter().copied().combinations(v0.len() - 1).all(|mut s| {
                    s.push(v);
                    matroid::is_uniqueness_set(spectrum, lambda0, &s)
                }));
        if ok {
            v_star.push(v);
            v_star.sort_unstable();
        }
    }
    v_star
}

fn realize<S: Scalar>(order: &[(usize, S)], v_star: &[usize], choices: &[Choice]) -> Vec<Grid<S>> {
    let m = order.len();
    let mut recovered: Vec<usize> = Vec::new();
    let mut covered = S::zero();
    let mut grids = Vec::new();
    for (i, &(v, rate)) in order.iter().enumerate() {
        let increment = rate - covered;
        let phase0 = if covered > S::zero() {
            S::one() / (S::lit(2.0) * rate)
        } else {
            S::zero()
        };
        if increment > S::zero() {
            match choices[i] {
                Choice::Own => grids.push(Grid {
                    vertex: v,
                    rate: increment,
                    phase: phase0,
                    role: GridRole::Redistributed,
                }),
                Choice::Snapshot => {
                    let size = m - recovered.len();
                    let pool: Vec<usize> = v_star.iter().copied().filter(|u| !recovered.contains(u)).collect();
                    let parts = pool.len() / size;
                    let share = increment / S::from_usize_lossy(parts);
                    for (s, chunk) in pool.chunks(size).take(parts).enumerate() {
                        for &u in chunk {
                            grids.push(Grid {
                                vertex: u,
                                rate: share,
                                phase: phase0 + S::from_usize_lossy(s) / increment,
                                role: GridRole::Redistributed,
                            });
                        }
                    }
                    covered = rate;
                }
            }
        }
        recovered.push(v);
    }
    grids
}

fn simple_basis<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    vertex_bw: &[S],
    period: S,
) -> Result<SignalSpaceBasis<S>> {
    let n = spectrum.n();
    let c: Vec<ExtReal<S>> = (0..n)
        .map(|l| if lambda0.contains(l) { ExtReal::zero() } else { ExtReal::Infinite })
        .collect();
    signal_space_basis(spectrum, vertex_bw, &c, period)
}

/// Least period carrying every grid; in periodic mode also a multiple of the
/// input period, so the input space stays inside the checked one.
fn output_mode<S: Scalar>(grids: &[Grid<S>], mode: SignalMode<S>) -> SignalMode<S> {
    let mut rates: Vec<S> = grids.iter().map(|g| g.rate).collect();
    match mode {
        SignalMode::Periodic { period } => {
            rates.push(S::one() / period);
            SignalMode::Periodic {
                period: least_period(&rates).period,
            }
        }
        SignalMode::Sinc { .. } => mode,
    }
}

fn determines<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    vertex_bw: &[S],
    n: usize,
    grids: &[Grid<S>],
    mode: SignalMode<S>,
) -> Result<bool> {
    let period = match output_mode(grids, mode) {
        SignalMode::Periodic { period } => period,
        SignalMode::Sinc { .. } => least_period(&grids.iter().map(|g| g.rate).collect::<Vec<_>>()).period,
    };
    let set = SampleSet::new(n, SignalMode::Periodic { period }, grids.to_vec())?;
    let basis = simple_basis(spectrum, lambda0, vertex_bw, period)?;
    if basis.dim() == 0 {
        return Ok(true);
    }
    let points: Vec<(usize, S)> = set.points().iter().map(|p| (p.vertex, p.time)).collect();
    Ok(linalg::rank(&basis.evaluation_matrix(&points), S::rank_tolerance()) == basis.dim())
}

/// Redistributes a sample set supported on `V₀` across `V*`, keeping its rate.
/// A periodic result may carry a longer period than the input.
pub fn redistribute<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    vertex_bw: &[S],
    v0: &[usize],
    v_star: &[usize],
    set: &SampleSet<S>,
) -> Result<Redistribution<S>> {
    let n = spectrum.n();
    if set.n != n || vertex_bw.len() != n {
        return Err(Error::Dimension("sample set, profile and spectrum disagree on n".into()));
    }
    let m = v0.len();
    if m > CHOICE_LIMIT {
        return Err(Error::TooLarge {
            what: "V0 for redistribution",
            limit: CHOICE_LIMIT,
            n: m,
        });
    }
    if let Some(g) = set.grids.iter().find(|g| !v0.contains(&g.vertex)) {
        return Err(Error::Redistribution(format!("grid on vertex {} lies outside V0", g.vertex)));
    }
    let mut v_star = v_star.to_vec();
    v_star.sort_unstable();
    v_star.dedup();
    check_v_star(spectrum, lambda0, v0, &v_star)?;
    let before = eccentricity(set)?;
    let rates = set.vertex_rates();
    let mut order: Vec<(usize, S)> = v0.iter().map(|&v| (v, rates[v])).collect();
    order.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("finite rates").then(a.0.cmp(&b.0)));
    let mut sorted_bw: Vec<S> = v0.iter().map(|&v| vertex_bw[v]).collect();
    sorted_bw.sort_by(|a, b| a.partial_cmp(b).expect("finite bandwidths"));
    let total = sample_rate(set);
    let bound = eccentricity_bound(n, &sorted_bw, v_star.len(), total)?;

    let mut candidates: Vec<(S, usize, Vec<Choice>, Vec<Grid<S>>)> = (0..1usize << m)
        .map(|mask| {
            let choices: Vec<Choice> = (0..m)
                .map(|i| if mask >> i & 1 == 1 { Choice::Snapshot } else { Choice::Own })
                .collect();
            let grids = realize(&order, &v_star, &choices);
            let mut per = vec![S::zero(); n];
            for g in &grids {
                per[g.vertex] += g.rate;
            }
            let top = per.into_iter().fold(S::zero(), S::max);
            (top, mask, choices, grids)
        })
        .collect();
    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite rates").then(a.1.cmp(&b.1)));
    for (_, _, choices, grids) in candidates {
        if !determines(spectrum, lambda0, vertex_bw, n, &grids, set.mode)? {
            continue;
        }
        let out = SampleSet::new(n, output_mode(&grids, set.mode), grids)?;
        let after = eccentricity(&out)?;
        return Ok(Redistribution {
            set: out,
            order: order.iter().map(|o| o.0).collect(),
            choices,
            eccentricity_before: before,
            eccentricity_after: after,
            bound,
        });
    }
    Err(Error::Redistribution("no choice pattern determines the signal space".into()))
}

/// Least-squares recovery in `W_{ℬ,𝒞}` with `𝒞 ∈ {0, ∞}` from any periodic
/// observation, such as one on a redistributed set.
pub fn recover_simple<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    vertex_bw: &[S],
    obs: &Observation<S>,
) -> Result<ContinuousGraphSignal<S>> {
    let SignalMode::Periodic { period } = obs.mode else {
        return Err(Error::Unsupported("space recovery is periodic only".into()));
    };
    let basis = simple_basis(spectrum, lambda0, vertex_bw, period)?;
    let points: Vec<(usize, S)> = obs.samples.iter().map(|s| (s.vertex, s.time)).collect();
    let values: Vec<S> = obs.samples.iter().map(|s| s.value).collect();
    let fit = fit_in_space(&basis, &points, &values, S::rank_tolerance());
    if fit.rank < fit.unknowns {
        return Err(Error::RankDeficient {
            level: 0,
            rank: fit.rank,
            unknowns: fit.unknowns,
        });
    }
    Ok(fit.signal)
}
