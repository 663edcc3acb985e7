//! Extended-real bandwidth profiles, uniform bandlimitedness, finitization and tightness.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::matroid::{self, bandwidth_order, FrequencySubset};
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

/// Largest |V| for which [`tighten`] enumerates uniqueness sets.
pub const TIGHTEN_LIMIT: usize = 12;
/// Largest |V_∞| for which [`check_uniform`] searches Λ′ exhaustively.
pub const UNIFORM_SEARCH_LIMIT: usize = 12;
const UNIFORM_SEARCH_BUDGET: usize = 1 << 20;

/// A non-negative real or +∞.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtReal<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> ExtReal<S> {
    pub fn zero() -> Self {
        ExtReal::Finite(S::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtReal::Finite(x) if *x == S::zero())
    }

    pub fn finite(&self) -> Option<S> {
        match *self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::Infinite => None,
        }
    }

    /// Strictly positive and finite.
    pub fn is_positive_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(x) if *x > S::zero())
    }

    pub fn max(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).expect("bandwidths are not NaN")
    }

    pub fn to_f64(self) -> ExtReal<f64> {
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(x.to_f64_lossy()),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }
}

impl<S: Scalar> fmt::Display for ExtReal<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::Infinite => f.write_str("inf"),
        }
    }
}

impl<S: Scalar> Serialize for ExtReal<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            ExtReal::Finite(x) => serializer.serialize_f64(x.to_f64_lossy()),
            ExtReal::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de, S: Scalar> Deserialize<'de> for ExtReal<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtVisitor<S>(std::marker::PhantomData<S>);

        impl<S: Scalar> Visitor<'_> for ExtVisitor<S> {
            type Value = ExtReal<S>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a non-negative number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<Self::Value, E> {
                if !(x >= 0.0) {
                    return Err(E::custom(format!("bandwidth {x} is negative or NaN")));
                }
                if x.is_infinite() {
                    return Ok(ExtReal::Infinite);
                }
                S::from_f64(x)
                    .map(ExtReal::Finite)
                    .ok_or_else(|| E::custom("bandwidth not representable"))
            }

            fn visit_u64<E: de::Error>(self, x: u64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(x as f64)
            }

            fn visit_i64<E: de::Error>(self, x: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(x as f64)
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Self::Value, E> {
                match s {
                    "inf" | "Infinity" | "infinity" => Ok(ExtReal::Infinite),
                    _ => Err(E::custom(format!("unexpected string {s:?}; only \"inf\" is allowed"))),
                }
            }
        }

        deserializer.deserialize_any(ExtVisitor(std::marker::PhantomData))
    }
}

/// ℬ per vertex and 𝒞 per frequency index.
#[derive(Clone, Debug, PartialEq)]
pub struct BandwidthProfile<S> {
    vertex_bw: Vec<ExtReal<S>>,
    freq_bw: Vec<ExtReal<S>>,
}

fn validate<S: Scalar>(what: &str, values: &[ExtReal<S>]) -> Result<()> {
    for (i, x) in values.iter().enumerate() {
        if let ExtReal::Finite(v) = x {
            if !(*v >= S::zero()) || !v.is_finite() {
                return Err(Error::InvalidBandwidth(format!("{what}[{i}] = {v}")));
            }
        }
    }
    Ok(())
}

impl<S: Scalar> BandwidthProfile<S> {
    pub fn new(vertex_bw: Vec<ExtReal<S>>, freq_bw: Vec<ExtReal<S>>) -> Result<Self> {
        if vertex_bw.len() != freq_bw.len() {
            return Err(Error::Dimension(format!(
                "{} vertex bandwidths but {} frequency bandwidths",
                vertex_bw.len(),
                freq_bw.len()
            )));
        }
        validate("B", &vertex_bw)?;
        validate("C", &freq_bw)?;
        Ok(BandwidthProfile { vertex_bw, freq_bw })
    }

    pub fn from_finite(vertex_bw: &[S], freq_bw: Vec<ExtReal<S>>) -> Result<Self> {
        Self::new(vertex_bw.iter().map(|&b| ExtReal::Finite(b)).collect(), freq_bw)
    }

    pub fn n(&self) -> usize {
        self.vertex_bw.len()
    }

    pub fn vertex_bw(&self) -> &[ExtReal<S>] {
        &self.vertex_bw
    }

    pub fn freq_bw(&self) -> &[ExtReal<S>] {
        &self.freq_bw
    }

    /// Λ₀ = {λ : 𝒞[λ] = 0}.
    pub fn lambda_zero(&self) -> FrequencySubset {
        let ix = (0..self.n()).filter(|&i| self.freq_bw[i].is_zero()).collect();
        FrequencySubset::new(ix, self.n()).expect("indices in range")
    }

    pub fn finite_vertex_bw(&self) -> Result<Vec<S>> {
        self.vertex_bw
            .iter()
            .enumerate()
            .map(|(v, b)| b.finite().ok_or(Error::InfiniteBandwidth(v)))
            .collect()
    }

    pub fn with_freq_bw(&self, freq_bw: Vec<ExtReal<S>>) -> Result<Self> {
        Self::new(self.vertex_bw.clone(), freq_bw)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniformityCertificate<S> {
    pub is_uniform: bool,
    pub v_infinity: Vec<usize>,
    pub witness_freqs: Option<Vec<usize>>,
    pub bound: ExtReal<S>,
    /// Λ′ came from greedy rank building and `bound` is the coarse fallback.
    pub used_fallback: bool,
}

fn max_ext<S: Scalar>(it: impl IntoIterator<Item = ExtReal<S>>) -> ExtReal<S> {
    it.into_iter().fold(ExtReal::zero(), ExtReal::max)
}

pub fn check_uniform<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
) -> UniformityCertificate<S> {
    let n = profile.n();
    let v_inf: Vec<usize> = (0..n).filter(|&v| !profile.vertex_bw[v].is_finite()).collect();
    let outside = max_ext((0..n).filter(|v| !v_inf.contains(v)).map(|v| profile.vertex_bw[v]));
    if v_inf.is_empty() {
        return UniformityCertificate {
            is_uniform: true,
            v_infinity: v_inf,
            witness_freqs: None,
            bound: outside,
            used_fallback: false,
        };
    }
    let finite_freqs: Vec<usize> = (0..n).filter(|&l| profile.freq_bw[l].is_finite()).collect();
    let not_uniform = |v_infinity: Vec<usize>| UniformityCertificate {
        is_uniform: false,
        v_infinity,
        witness_freqs: None,
        bound: ExtReal::Infinite,
        used_fallback: false,
    };
    let k = v_inf.len();
    if finite_freqs.len() < k {
        return not_uniform(v_inf);
    }
    let tol = spectrum.tol();
    let invertible = |freqs: &[usize]| linalg::rank(&spectrum.block(freqs, &v_inf), tol) == k;
    let exhaustive = k <= UNIFORM_SEARCH_LIMIT
        && binomial(finite_freqs.len(), k).is_some_and(|c| c <= UNIFORM_SEARCH_BUDGET);
    if exhaustive {
        let mut best: Option<(ExtReal<S>, Vec<usize>)> = None;
        for freqs in finite_freqs.iter().copied().combinations(k) {
            if !invertible(&freqs) {
                continue;
            }
            let bound = outside.max(max_ext(freqs.iter().map(|&l| profile.freq_bw[l])));
            if best.as_ref().map_or(true, |(b, _)| bound < *b) {
                best = Some((bound, freqs));
            }
        }
        return match best {
            Some((bound, freqs)) => UniformityCertificate {
                is_uniform: true,
                v_infinity: v_inf,
                witness_freqs: Some(freqs),
                bound,
                used_fallback: false,
            },
            None => not_uniform(v_inf),
        };
    }
    let mut order = finite_freqs.clone();
    order.sort_by(|&a, &b| profile.freq_bw[a].total_cmp(&profile.freq_bw[b]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    for l in order {
        chosen.push(l);
        if linalg::rank(&spectrum.block(&chosen, &v_inf), tol) < chosen.len() {
            chosen.pop();
        }
        if chosen.len() == k {
            break;
        }
    }
    if chosen.len() < k {
        return not_uniform(v_inf);
    }
    chosen.sort_unstable();
    let bound = outside.max(max_ext(finite_freqs.iter().map(|&l| profile.freq_bw[l])));
    UniformityCertificate {
        is_uniform: true,
        v_infinity: v_inf,
        witness_freqs: Some(chosen),
        bound,
        used_fallback: true,
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Replaces every infinite ℬ[v] by the certificate's bound.
pub fn finitize<S: Scalar>(
    profile: &BandwidthProfile<S>,
    cert: &UniformityCertificate<S>,
) -> Result<BandwidthProfile<S>> {
    if !cert.is_uniform || !cert.bound.is_finite() {
        return Err(Error::NotUniform);
    }
    let vertex_bw = profile
        .vertex_bw
        .iter()
        .map(|&b| if b.is_finite() { b } else { cert.bound })
        .collect();
    BandwidthProfile::new(vertex_bw, profile.freq_bw.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TightnessViolation<S> {
    pub vertex: usize,
    /// Minimal dependent prefix `V′` of the other vertices in bandwidth order.
    pub support: Vec<usize>,
    /// `max ℬ` over `support`, strictly below `ℬ[vertex]`.
    pub max_bw: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TightnessReport<S> {
    pub tight: bool,
    pub violations: Vec<TightnessViolation<S>>,
}

/// Shortest prefix of `order` on which `v` is Λ₀-dependent, if any.
fn minimal_dependent_prefix<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    order: &[usize],
    v: usize,
) -> Result<Option<usize>> {
    if !matroid::is_dependent(spectrum, lambda0, order, v)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0usize, order.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matroid::is_dependent(spectrum, lambda0, &order[..mid], v)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Smallest `max_{V′} ℬ` over sets `V′` on which `v` is Λ₀-dependent, with a
/// minimizing `V′`; `None` if `v` depends on no set of other vertices.
pub fn dependence_bound<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    bandwidths: &[S],
    v: usize,
) -> Result<Option<(S, Vec<usize>)>> {
    let others: Vec<usize> = (0..bandwidths.len()).filter(|&u| u != v).collect();
    let order = bandwidth_order(bandwidths, &others);
    Ok(minimal_dependent_prefix(spectrum, lambda0, &order, v)?.map(|k| {
        let bound = if k == 0 { S::zero() } else { bandwidths[order[k - 1]] };
        (bound, order[..k].to_vec())
    }))
}

pub fn is_tight<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
) -> Result<TightnessReport<S>> {
    let b = profile.finite_vertex_bw()?;
    let lambda0 = profile.lambda_zero();
    let mut violations = Vec::new();
    if !lambda0.is_empty() {
        for v in 0..b.len() {
            if let Some((bound, support)) = dependence_bound(spectrum, &lambda0, &b, v)? {
                if b[v] > bound {
                    violations.push(TightnessViolation {
                        vertex: v,
                        support,
                        max_bw: bound,
                    });
                }
            }
        }
    }
    Ok(TightnessReport {
        tight: violations.is_empty(),
        violations,
    })
}

/// Pointwise max of ℬ; 𝒞 must agree.
pub fn profile_union<S: Scalar>(
    a: &BandwidthProfile<S>,
    b: &BandwidthProfile<S>,
) -> Result<BandwidthProfile<S>> {
    if a.freq_bw != b.freq_bw || a.n() != b.n() {
        return Err(Error::MismatchedFrequencyBandwidths);
    }
    let vertex_bw = a.vertex_bw.iter().zip(&b.vertex_bw).map(|(&x, &y)| x.max(y)).collect();
    BandwidthProfile::new(vertex_bw, a.freq_bw.clone())
}

/// The unique maximal tight ℬ* ≤ ℬ spanning the same space.
///
/// Union of the candidates built from each `V₀ ∈ 𝒰(Λ₀)`: a vertex outside
/// `V₀` is capped at the bandwidth of the last vertex of its minimal
/// dependent prefix within `V₀`; only tight candidates enter the union.
pub fn tighten<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
) -> Result<BandwidthProfile<S>> {
    let n = profile.n();
    if n > TIGHTEN_LIMIT {
        return Err(Error::TooLarge {
            what: "tighten",
            limit: TIGHTEN_LIMIT,
            n,
        });
    }
    let b = profile.finite_vertex_bw()?;
    let lambda0 = profile.lambda_zero();
    if lambda0.is_empty() {
        return Ok(profile.clone());
    }
    let mut result: Option<BandwidthProfile<S>> = None;
    for v0 in matroid::enumerate_uniqueness_sets(spectrum, &lambda0)? {
        let order = bandwidth_order(&b, v0.vertices());
        let mut capped = b.clone();
        for &v in v0.complement() {
            if let Some(k) = minimal_dependent_prefix(spectrum, &lambda0, &order, v)? {
                let cap = if k == 0 { S::zero() } else { b[order[k - 1]] };
                capped[v] = capped[v].min(cap);
            }
        }
        let candidate = BandwidthProfile::from_finite(&capped, profile.freq_bw.clone())?;
        if !is_tight(spectrum, &candidate)?.tight {
            continue;
        }
        result = Some(match result {
            None => candidate,
            Some(acc) => profile_union(&acc, &candidate)?,
        });
    }
    result.ok_or(Error::NoUniquenessSet)
}

/// `min(ℬ[v], β*(v))` per vertex, with β* from [`dependence_bound`].
pub fn tightened_closed_form<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
) -> Result<Vec<S>> {
    let b = profile.finite_vertex_bw()?;
    let lambda0 = profile.lambda_zero();
    (0..b.len())
        .map(|v| {
            Ok(match dependence_bound(spectrum, &lambda0, &b, v)? {
                Some((bound, _)) => b[v].min(bound),
                None => b[v],
            })
        })
        .collect()
}
