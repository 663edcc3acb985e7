//! Uniform sampling grids on vertices, their rate and eccentricity, and
//! pointwise observation of a signal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::period::points_per_period;
use crate::scalar::Scalar;
use crate::signal::{ContinuousGraphSignal, SignalMode};

/// What a grid contributes to recovery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridRole {
    /// Rate `2ℬ[v]` on `v ∈ V₀`.
    Base,
    /// Rate `2b_i` on `v_i`.
    Quotient { level: usize },
    /// Load moved off the quotient grid of `level` onto another vertex.
    Donated { level: usize },
    /// Output of eccentricity reduction; recovered through the signal space.
    Redistributed,
}

/// Times `phase + j/rate` on one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid<S> {
    pub vertex: usize,
    pub rate: S,
    pub phase: S,
    pub role: GridRole,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePoint<S> {
    pub vertex: usize,
    pub time: S,
    pub role: GridRole,
}

/// A union of uniform grids; a vertex may carry several.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet<S> {
    pub n: usize,
    pub mode: SignalMode<S>,
    pub grids: Vec<Grid<S>>,
}

impl<S: Scalar> SampleSet<S> {
    pub fn new(n: usize, mode: SignalMode<S>, grids: Vec<Grid<S>>) -> Result<Self> {
        for g in &grids {
            if g.vertex >= n {
                return Err(Error::OutOfRange {
                    what: "grid vertex",
                    index: g.vertex,
                    len: n,
                });
            }
            if !(g.rate > S::zero()) || !g.rate.is_finite() || !g.phase.is_finite() {
                return Err(Error::Sampling(format!("grid on vertex {} has rate {}", g.vertex, g.rate)));
            }
            if let SignalMode::Periodic { period } = mode {
                if points_per_period(g.rate, period).is_none() {
                    return Err(Error::Sampling(format!(
                        "rate {} on vertex {} is not integral over period {period}",
                        g.rate, g.vertex
                    )));
                }
            }
        }
        if let SignalMode::Sinc { start, end } = mode {
            if !(start < end) {
                return Err(Error::Sampling(format!("empty window [{start}, {end}]")));
            }
        }
        Ok(SampleSet { n, mode, grids })
    }

    pub fn empty(n: usize, mode: SignalMode<S>) -> Self {
        SampleSet {
            n,
            mode,
            grids: Vec::new(),
        }
    }

    /// Total rate per vertex.
    pub fn vertex_rates(&self) -> Vec<S> {
        let mut r = vec![S::zero(); self.n];
        for g in &self.grids {
            r[g.vertex] += g.rate;
        }
        r
    }

    /// One period (periodic) or the whole window (sinc), in grid order.
    pub fn points(&self) -> Vec<SamplePoint<S>> {
        let mut out = Vec::new();
        for g in &self.grids {
            let step = S::one() / g.rate;
            match self.mode {
                SignalMode::Periodic { period } => {
                    let count = points_per_period(g.rate, period).expect("validated");
                    for j in 0..count {
                        let t = g.phase + S::from_usize_lossy(j) * step;
                        out.push(SamplePoint {
                            vertex: g.vertex,
                            time: t - (t / period).floor() * period,
                            role: g.role,
                        });
                    }
                }
                SignalMode::Sinc { start, end } => {
                    let first = ((start - g.phase) * g.rate).ceil();
                    let mut j = first;
                    loop {
                        let t = g.phase + j * step;
                        if t > end {
                            break;
                        }
                        out.push(SamplePoint {
                            vertex: g.vertex,
                            time: t,
                            role: g.role,
                        });
                        j += S::one();
                    }
                }
            }
        }
        out
    }
}

/// `r(S) = Σ_v r_v`, the limsup density of a union of uniform grids.
pub fn sample_rate<S: Scalar>(set: &SampleSet<S>) -> S {
    set.grids.iter().map(|g| g.rate).sum()
}

/// `c(S) = |V| · max_v r_v / r(S)`.
pub fn eccentricity<S: Scalar>(set: &SampleSet<S>) -> Result<S> {
    let total = sample_rate(set);
    if total <= S::zero() {
        return Err(Error::ZeroRate);
    }
    let top = set.vertex_rates().into_iter().fold(S::zero(), S::max);
    Ok(S::from_usize_lossy(set.n) * top / total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservedSample<S> {
    pub vertex: usize,
    pub time: S,
    pub value: S,
    pub role: GridRole,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observation<S> {
    pub mode: SignalMode<S>,
    pub samples: Vec<ObservedSample<S>>,
}

impl<S: Scalar> Observation<S> {
    pub fn with_role(&self, role: GridRole) -> impl Iterator<Item = &ObservedSample<S>> {
        self.samples.iter().filter(move |s| s.role == role)
    }
}

pub fn sample_signal<S: Scalar>(f: &ContinuousGraphSignal<S>, set: &SampleSet<S>) -> Result<Observation<S>> {
    if f.n() != set.n {
        return Err(Error::Dimension(format!("signal on {} vertices, sample set on {}", f.n(), set.n)));
    }
    if f.mode.name() != set.mode.name() {
        return Err(Error::ModeMismatch(format!(
            "{} signal sampled by a {} set",
            f.mode.name(),
            set.mode.name()
        )));
    }
    let samples = set
        .points()
        .into_iter()
        .map(|p| ObservedSample {
            vertex: p.vertex,
            time: p.time,
            value: f.eval(p.vertex, p.time),
            role: p.role,
        })
        .collect();
    Ok(Observation {
        mode: set.mode,
        samples,
    })
}
