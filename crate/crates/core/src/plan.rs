//! Sampling plans: per-vertex grids, the total rate, and the level-by-level
//! recovery recipe, plus the rate-splitting variant.

use crate::error::{Error, Result};
use crate::filtration::{self, AdmissibleSequence, Filtration};
use crate::linalg::{self, Matrix};
use crate::matroid::FrequencySubset;
use crate::period::least_period;
use crate::sampling::{Grid, GridRole, SampleSet};
use crate::scalar::Scalar;
use crate::signal::SignalMode;
use crate::spectral::Spectrum;
use crate::surrogate::{basis_value, channel_harmonics};

/// Everything recovery needs at one level, computed once at planning time.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecipe<S> {
    pub level: usize,
    /// `V_i`, sorted.
    pub vertices: Vec<usize>,
    pub lambda_zero: FrequencySubset,
    /// `v_i`; `None` at level 0.
    pub added: Option<usize>,
    pub lambda_star: Option<usize>,
    /// `b_i`; `None` at level 0.
    pub bandwidth: Option<S>,
    /// `M_i`, `n × |V_i|`, columns in `vertices` order.
    pub extension: Matrix<S>,
    /// `𝐱_{V_i}`; empty at level 0.
    pub x_vector: Vec<S>,
}

impl<S: Scalar> LevelRecipe<S> {
    /// Column of `M_i` belonging to `v_i`.
    pub fn added_column(&self) -> Option<Vec<S>> {
        let v = self.added?;
        let pos = self.vertices.iter().position(|&u| u == v)?;
        Some(self.extension.column(pos))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitRecipe<S> {
    pub level: usize,
    pub acceptor: usize,
    pub donor: usize,
    pub amount: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplingPlan<S> {
    pub n: usize,
    pub vertex_bw: Vec<S>,
    pub grids: Vec<Grid<S>>,
    pub total_rate: S,
    /// Level 0 first, then `1..=k`.
    pub schedule: Vec<LevelRecipe<S>>,
    pub splits: Vec<SplitRecipe<S>>,
}

impl<S: Scalar> SamplingPlan<S> {
    pub fn k(&self) -> usize {
        self.schedule.len() - 1
    }

    pub fn vertex_rates(&self) -> Vec<S> {
        let mut r = vec![S::zero(); self.n];
        for g in &self.grids {
            r[g.vertex] += g.rate;
        }
        r
    }

    pub fn base_rate(&self) -> S {
        self.grids.iter().filter(|g| g.role == GridRole::Base).map(|g| g.rate).sum()
    }

    pub fn quotient_bandwidths(&self) -> Vec<S> {
        self.schedule.iter().filter_map(|l| l.bandwidth).collect()
    }

    /// Least period making every grid integral.
    pub fn natural_period(&self) -> S {
        least_period(&self.grids.iter().map(|g| g.rate).collect::<Vec<_>>()).period
    }

    pub fn first_split_level(&self) -> Option<usize> {
        self.splits.iter().map(|s| s.level).min()
    }
}

pub fn make_plan<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
    sequence: &AdmissibleSequence<S>,
) -> Result<SamplingPlan<S>> {
    filtration::verify_admissible(spectrum, filtration, sequence)?;
    let n = spectrum.n();
    let b = &filtration.vertex_bw;
    let two = S::lit(2.0);
    let mut grids = Vec::new();
    for &v in &sequence.sets[0] {
        if b[v] > S::zero() {
            grids.push(Grid {
                vertex: v,
                rate: two * b[v],
                phase: S::zero(),
                role: GridRole::Base,
            });
        }
    }
    let mut schedule = Vec::with_capacity(filtration.k() + 1);
    for (i, set) in sequence.sets.iter().enumerate() {
        let (_, extension, x_vector) = filtration::level_x_vector(spectrum, filtration, i, set)?;
        let (added, lambda_star, bandwidth) = if i == 0 {
            (None, None, None)
        } else {
            let step = &filtration.steps[i - 1];
            (Some(sequence.added[i - 1]), Some(step.lambda_star), Some(step.b_star))
        };
        if let (Some(v), Some(bi)) = (added, bandwidth) {
            if bi > S::zero() {
                grids.push(Grid {
                    vertex: v,
                    rate: two * bi,
                    phase: S::zero(),
                    role: GridRole::Quotient { level: i },
                });
            }
        }
        schedule.push(LevelRecipe {
            level: i,
            vertices: set.clone(),
            lambda_zero: filtration.levels[i].lambda_zero.clone(),
            added,
            lambda_star,
            bandwidth,
            extension,
            x_vector,
        });
    }
    let total_rate = grids.iter().map(|g| g.rate).sum();
    Ok(SamplingPlan {
        n,
        vertex_bw: b.clone(),
        grids,
        total_rate,
        schedule,
        splits: Vec::new(),
    })
}

/// The plan's grids realized in `mode`; phases default to 0.
pub fn build_sample_set<S: Scalar>(plan: &SamplingPlan<S>, mode: SignalMode<S>) -> Result<SampleSet<S>> {
    SampleSet::new(plan.n, mode, plan.grids.clone())
}

/// Rows `(vertex, time)` against the unknown harmonics of `h_j` for every
/// level `j ≥ from`; the joint system used once a split is present.
pub(crate) fn joint_system<S: Scalar>(
    plan: &SamplingPlan<S>,
    from: usize,
    period: S,
    points: &[(usize, S)],
) -> (Matrix<S>, Vec<(usize, usize, crate::surrogate::Component)>) {
    let mut unknowns = Vec::new();
    for recipe in &plan.schedule[from..] {
        let bi = recipe.bandwidth.unwrap_or(S::zero());
        for (k, comp) in channel_harmonics(bi, period) {
            unknowns.push((recipe.level, k, comp));
        }
    }
    let columns: Vec<Vec<S>> = plan.schedule.iter().map(|r| r.added_column().unwrap_or_default()).collect();
    let a = Matrix::from_fn(points.len(), unknowns.len(), |r, c| {
        let (level, k, comp) = unknowns[c];
        let (v, t) = points[r];
        columns[level][v] * basis_value(k, comp, t, period)
    });
    (a, unknowns)
}

/// Moves `2·amount` of the quotient rate at `acceptor` onto an extra grid at
/// `donor`. Recovery from the split level upward becomes one joint solve,
/// which must have full column rank over the plan's natural period.
pub fn split_rate_transform<S: Scalar>(
    plan: &SamplingPlan<S>,
    donor: usize,
    acceptor: usize,
    amount: S,
) -> Result<SamplingPlan<S>> {
    let bad = |msg: String| Err(Error::InvalidSplit(msg));
    if donor >= plan.n || acceptor >= plan.n {
        return bad(format!("vertex out of range for n = {}", plan.n));
    }
    if !(amount >= S::zero()) || !amount.is_finite() {
        return bad(format!("amount {amount} must be a nonnegative number"));
    }
    if amount == S::zero() {
        return Ok(plan.clone());
    }
    if donor == acceptor {
        return bad("donor and acceptor coincide".into());
    }
    let Some(recipe) = plan.schedule.iter().find(|r| r.added == Some(acceptor)) else {
        return bad(format!("vertex {acceptor} carries no quotient rate"));
    };
    let level = recipe.level;
    let bi = recipe.bandwidth.expect("quotient level");
    if plan.splits.iter().any(|s| s.level == level) {
        return bad(format!("level {level} is already split"));
    }
    if amount > bi {
        return bad(format!("amount {amount} exceeds b{level} = {bi}"));
    }
    let two = S::lit(2.0);
    let donor_total = plan.vertex_rates()[donor] + two * amount;
    if donor_total > two * plan.vertex_bw[donor] * (S::one() + S::lit(1e-12)) {
        return bad(format!(
            "donor rate {donor_total} would exceed twice its bandwidth {}",
            plan.vertex_bw[donor]
        ));
    }
    let mut out = plan.clone();
    let quotient = GridRole::Quotient { level };
    out.grids.retain(|g| g.role != quotient);
    let remaining = two * (bi - amount);
    if remaining > S::zero() {
        out.grids.push(Grid {
            vertex: acceptor,
            rate: remaining,
            phase: S::zero(),
            role: quotient,
        });
    }
    out.grids.push(Grid {
        vertex: donor,
        rate: two * amount,
        phase: S::one() / (two * donor_total),
        role: GridRole::Donated { level },
    });
    out.splits.push(SplitRecipe {
        level,
        acceptor,
        donor,
        amount,
    });
    check_joint_rank(&out)?;
    Ok(out)
}

fn check_joint_rank<S: Scalar>(plan: &SamplingPlan<S>) -> Result<()> {
    let Some(from) = plan.first_split_level() else {
        return Ok(());
    };
    let period = plan.natural_period();
    let set = build_sample_set(plan, SignalMode::Periodic { period })?;
    let points: Vec<(usize, S)> = set
        .points()
        .into_iter()
        .filter(|p| match p.role {
            GridRole::Quotient { level } | GridRole::Donated { level } => level >= from,
            _ => false,
        })
        .map(|p| (p.vertex, p.time))
        .collect();
    let (a, unknowns) = joint_system(plan, from, period, &points);
    let tol = S::rank_tolerance();
    let rank = linalg::rank(&a, tol);
    if rank < unknowns.len() {
        return Err(Error::InvalidSplit(format!(
            "split leaves the system from level {from} with rank {rank} < {} unknowns",
            unknowns.len()
        )));
    }
    Ok(())
}
