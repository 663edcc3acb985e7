//! Reduction steps, the filtration `W₀ ⊂ … ⊂ W_k`, and admissible vertex sequences.

use crate::bandwidth::{BandwidthProfile, ExtReal};
use crate::error::{Error, Result};
use crate::linalg::{Lu, Matrix};
use crate::matroid::{self, bandwidth_order, FrequencySubset, UniquenessSet};
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

/// Largest |V| for which the admissible-sequence search backtracks.
pub const BACKTRACK_LIMIT: usize = 10;

/// Which frequency wins when several share the minimal 𝒞.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    HighestIndex,
}

/// Frequency minimizing 𝒞 over strictly positive finite entries, ties by index.
pub fn select_lambda_star<S: Scalar>(freq_bw: &[ExtReal<S>]) -> Option<usize> {
    select_lambda_star_with(freq_bw, TieBreak::LowestIndex)
}

pub fn select_lambda_star_with<S: Scalar>(freq_bw: &[ExtReal<S>], tie: TieBreak) -> Option<usize> {
    let mut best: Option<(S, usize)> = None;
    for (i, c) in freq_bw.iter().enumerate() {
        if let ExtReal::Finite(x) = *c {
            let better = best.map_or(true, |(b, _)| match tie {
                TieBreak::LowestIndex => x < b,
                TieBreak::HighestIndex => x <= b,
            });
            if x > S::zero() && better {
                best = Some((x, i));
            }
        }
    }
    best.map(|(_, i)| i)
}

/// True when `x` is zero relative to `scale` under the spectrum tolerance.
pub(crate) fn is_negligible<S: Scalar>(x: S, scale: S, tol: S) -> bool {
    x.abs() <= tol * scale.max(S::one())
}

fn max_abs<S: Scalar>(xs: &[S]) -> S {
    xs.iter().fold(S::zero(), |m, &x| m.max(x.abs()))
}

/// `𝐱_{V₀} = u_{λ*} · M`, indexed like `v0.vertices()`.
pub fn x_vector<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda_star: usize,
    lambda0: &FrequencySubset,
    v0: &UniquenessSet<S>,
) -> Vec<S> {
    matroid::extension_matrix(spectrum, lambda0, v0).left_mul_vec(spectrum.row(lambda_star))
}

/// `b_{V₀}`: the largest ℬ over vertices where `x` is nonzero, 0 if none.
pub fn support_bandwidth<S: Scalar>(x: &[S], vertices: &[usize], bandwidths: &[S], tol: S) -> S {
    let scale = max_abs(x);
    x.iter()
        .zip(vertices)
        .filter(|(&xi, _)| !is_negligible(xi, scale, tol))
        .fold(S::zero(), |m, (_, &v)| m.max(bandwidths[v]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionStep<S> {
    pub lambda_star: usize,
    pub b_star: S,
    /// `min_{V₀ ∈ 𝒰(Λ₀)} b_{V₀}` before capping by `𝒞[λ*]`.
    pub min_support_bw: S,
    /// Λ₀ of the profile the step was computed on.
    pub lambda_zero: FrequencySubset,
    pub chosen_v0: UniquenessSet<S>,
    pub x_vector: Vec<S>,
    /// 𝒞 with `λ*` zeroed.
    pub child_c: Vec<ExtReal<S>>,
}

pub fn reduction_step<S: Scalar>(
    spectrum: &Spectrum<S>,
    bandwidths: &[S],
    freq_bw: &[ExtReal<S>],
) -> Result<ReductionStep<S>> {
    reduction_step_with(spectrum, bandwidths, freq_bw, TieBreak::LowestIndex)
}

pub fn reduction_step_with<S: Scalar>(
    spectrum: &Spectrum<S>,
    bandwidths: &[S],
    freq_bw: &[ExtReal<S>],
    tie: TieBreak,
) -> Result<ReductionStep<S>> {
    let n = spectrum.n();
    if bandwidths.len() != n || freq_bw.len() != n {
        return Err(Error::Dimension("profile does not match spectrum".into()));
    }
    let lambda_star = select_lambda_star_with(freq_bw, tie).ok_or(Error::NoReductionFrequency)?;
    let ix = (0..n).filter(|&i| freq_bw[i].is_zero()).collect();
    let lambda0 = FrequencySubset::new(ix, n)?;
    let mut best: Option<(S, UniquenessSet<S>, Vec<S>)> = None;
    for v0 in matroid::enumerate_uniqueness_sets(spectrum, &lambda0)? {
        let x = x_vector(spectrum, lambda_star, &lambda0, &v0);
        let b = support_bandwidth(&x, v0.vertices(), bandwidths, spectrum.tol());
        if best.as_ref().map_or(true, |(bb, _, _)| b < *bb) {
            best = Some((b, v0, x));
        }
    }
    let (min_support_bw, chosen_v0, x_vector) = best.ok_or(Error::NoUniquenessSet)?;
    let cap = freq_bw[lambda_star].finite().expect("λ* has finite bandwidth");
    let mut child_c = freq_bw.to_vec();
    child_c[lambda_star] = ExtReal::zero();
    Ok(ReductionStep {
        lambda_star,
        b_star: min_support_bw.min(cap),
        min_support_bw,
        lambda_zero: lambda0,
        chosen_v0,
        x_vector,
        child_c,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiltrationLevel<S> {
    pub freq_bw: Vec<ExtReal<S>>,
    pub lambda_zero: FrequencySubset,
}

/// Levels `0..=k`, where level 0 has simple frequency bandwidths and level
/// `k` is the input; `steps[i - 1]` links level `i - 1` to level `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration<S> {
    pub vertex_bw: Vec<S>,
    pub levels: Vec<FiltrationLevel<S>>,
    pub steps: Vec<ReductionStep<S>>,
}

impl<S: Scalar> Filtration<S> {
    pub fn k(&self) -> usize {
        self.steps.len()
    }

    /// `b₁ … b_k`.
    pub fn quotient_bandwidths(&self) -> Vec<S> {
        self.steps.iter().map(|s| s.b_star).collect()
    }

    /// λ* in the order the reductions were performed, from `W_k` downward.
    pub fn selection_order(&self) -> Vec<usize> {
        self.steps.iter().rev().map(|s| s.lambda_star).collect()
    }

    pub fn terminal(&self) -> &FiltrationLevel<S> {
        &self.levels[0]
    }
}

fn level<S: Scalar>(freq_bw: Vec<ExtReal<S>>) -> FiltrationLevel<S> {
    let n = freq_bw.len();
    let ix = (0..n).filter(|&i| freq_bw[i].is_zero()).collect();
    FiltrationLevel {
        lambda_zero: FrequencySubset::new(ix, n).expect("in range"),
        freq_bw,
    }
}

pub fn build_filtration<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
) -> Result<Filtration<S>> {
    build_filtration_with(spectrum, profile, TieBreak::LowestIndex)
}

pub fn build_filtration_with<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
    tie: TieBreak,
) -> Result<Filtration<S>> {
    let b = profile.finite_vertex_bw()?;
    let mut c = profile.freq_bw().to_vec();
    let mut levels = vec![level(c.clone())];
    let mut steps = Vec::new();
    while select_lambda_star_with(&c, tie).is_some() {
        let step = reduction_step_with(spectrum, &b, &c, tie)?;
        c = step.child_c.clone();
        levels.push(level(c.clone()));
        steps.push(step);
    }
    levels.reverse();
    steps.reverse();
    Ok(Filtration {
        vertex_bw: b,
        levels,
        steps,
    })
}

/// `V₀ ⊂ V₁ ⊂ … ⊂ V_k` with `V_i ∖ V_{i−1} = {v_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibleSequence<S> {
    pub sets: Vec<Vec<usize>>,
    pub added: Vec<usize>,
    pub base_rate: S,
    pub quotient_rates: Vec<S>,
}

impl<S: Scalar> AdmissibleSequence<S> {
    pub fn total_rate(&self) -> S {
        self.base_rate + self.quotient_rates.iter().copied().sum::<S>()
    }
}

fn with_vertex(set: &[usize], v: usize) -> Vec<usize> {
    let mut out = set.to_vec();
    out.push(v);
    out.sort_unstable();
    out
}

/// Vertices that may extend `prev` at level `i`, in bandwidth order.
fn level_candidates<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
    i: usize,
    prev: &[usize],
) -> Result<Vec<usize>> {
    let n = spectrum.n();
    let b = &filtration.vertex_bw;
    let lambda0 = &filtration.levels[i].lambda_zero;
    let step = &filtration.steps[i - 1];
    let outside: Vec<usize> = (0..n).filter(|v| !prev.contains(v)).collect();
    let mut free = Vec::new();
    for &u in &outside {
        if !matroid::is_dependent(spectrum, lambda0, prev, u)? {
            free.push(u);
        }
    }
    let mut out = Vec::new();
    for v in bandwidth_order(b, &outside) {
        if b[v] < step.b_star {
            continue;
        }
        if free.iter().any(|&u| u != v && b[u] < step.b_star) {
            continue;
        }
        let set = with_vertex(prev, v);
        let Ok(us) = matroid::uniqueness_set(spectrum, lambda0, &set) else {
            continue;
        };
        let x = x_vector(spectrum, step.lambda_star, lambda0, &us);
        let pos = us.position(v).expect("v in set");
        if !is_negligible(x[pos], max_abs(&x), spectrum.tol()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Greedy search per level with verified output; backtracks over all
/// minimal `V₀` and all candidates when `|V| ≤ BACKTRACK_LIMIT`.
pub fn find_admissible_sequence<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
) -> Result<Option<AdmissibleSequence<S>>> {
    let n = spectrum.n();
    let b = &filtration.vertex_bw;
    let lambda00 = &filtration.levels[0].lambda_zero;
    let greedy = matroid::greedy_minimal_vertex_set(spectrum, lambda00, b)?;
    let backtrack = n <= BACKTRACK_LIMIT;
    let mut bases = vec![greedy.set.vertices().to_vec()];
    if backtrack {
        let weight = |vs: &[usize]| vs.iter().map(|&v| b[v]).sum::<S>();
        let best = weight(greedy.set.vertices());
        for u in matroid::enumerate_uniqueness_sets(spectrum, lambda00)? {
            let w = weight(u.vertices());
            let vs = u.vertices().to_vec();
            if is_negligible(w - best, best, S::rank_tolerance()) && !bases.contains(&vs) {
                bases.push(vs);
            }
        }
    }
    for base in bases {
        let mut sets = vec![base];
        let mut added = Vec::new();
        if descend(spectrum, filtration, &mut sets, &mut added, backtrack)? {
            return Ok(Some(assemble(filtration, sets, added)));
        }
    }
    Ok(None)
}

fn assemble<S: Scalar>(
    filtration: &Filtration<S>,
    sets: Vec<Vec<usize>>,
    added: Vec<usize>,
) -> AdmissibleSequence<S> {
    let two = S::lit(2.0);
    let b = &filtration.vertex_bw;
    AdmissibleSequence {
        base_rate: two * sets[0].iter().map(|&v| b[v]).sum::<S>(),
        quotient_rates: filtration.steps.iter().map(|s| two * s.b_star).collect(),
        sets,
        added,
    }
}

fn descend<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
    sets: &mut Vec<Vec<usize>>,
    added: &mut Vec<usize>,
    backtrack: bool,
) -> Result<bool> {
    let i = sets.len();
    if i > filtration.k() {
        let seq = assemble(filtration, sets.clone(), added.clone());
        return Ok(verify_admissible(spectrum, filtration, &seq).is_ok());
    }
    let prev = sets[i - 1].clone();
    let candidates = level_candidates(spectrum, filtration, i, &prev)?;
    let limit = if backtrack { candidates.len() } else { candidates.len().min(1) };
    for &v in &candidates[..limit] {
        sets.push(with_vertex(&prev, v));
        added.push(v);
        if descend(spectrum, filtration, sets, added, backtrack)? {
            return Ok(true);
        }
        sets.pop();
        added.pop();
    }
    Ok(false)
}

/// Column-matroid basis test on `U[Λ₀ᶜ, ·]`.
fn is_basis<S: Scalar>(spectrum: &Spectrum<S>, lambda0: &FrequencySubset, set: &[usize]) -> bool {
    set.len() + lambda0.len() == spectrum.n()
        && matroid::matroid_rank(spectrum, lambda0, set) == set.len()
}

/// `𝐱_{V}[v]` from `U[Λ₀ᶜ, V]ᵀ c = e_v`, read off at the position of `λ*`.
fn x_entry_by_complement<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    lambda_star: usize,
    set: &[usize],
    v: usize,
) -> Result<S> {
    let rows = lambda0.complement(spectrum.n());
    let block = spectrum.block(&rows, set).transpose();
    let mut e = vec![S::zero(); set.len()];
    e[set.iter().position(|&u| u == v).expect("v in set")] = S::one();
    let c = Lu::new(&block, spectrum.tol())?.solve_vec(&e);
    let pos = rows
        .iter()
        .position(|&r| r == lambda_star)
        .ok_or_else(|| Error::NotAdmissible("λ* lies in Λ_i,0".into()))?;
    Ok(c[pos])
}

/// Checks conditions (a)–(d) without reusing the search's code paths:
/// bases via column rank, minimality via single exchanges, and 𝐱 through
/// the complementary block.
pub fn verify_admissible<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
    seq: &AdmissibleSequence<S>,
) -> Result<()> {
    let fail = |msg: String| Err(Error::NotAdmissible(msg));
    let n = spectrum.n();
    let b = &filtration.vertex_bw;
    let k = filtration.k();
    if seq.sets.len() != k + 1 || seq.added.len() != k {
        return fail(format!("expected {} sets for k = {k}", k + 1));
    }
    let l00 = &filtration.levels[0].lambda_zero;
    let v0 = &seq.sets[0];
    if !is_basis(spectrum, l00, v0) {
        return fail("V0 is not a uniqueness set".into());
    }
    for &u in v0 {
        for w in (0..n).filter(|w| !v0.contains(w)) {
            let swapped: Vec<usize> = v0.iter().map(|&x| if x == u { w } else { x }).collect();
            if b[w] < b[u] && is_basis(spectrum, l00, &swapped) {
                return fail(format!("V0 is not minimal: exchange {u} for {w}"));
            }
        }
    }
    for i in 1..=k {
        let (prev, cur) = (&seq.sets[i - 1], &seq.sets[i]);
        let vi = seq.added[i - 1];
        let step = &filtration.steps[i - 1];
        let lambda0 = &filtration.levels[i].lambda_zero;
        let expected = n - lambda0.len();
        if cur.len() != expected {
            return Err(Error::LevelSize {
                level: i,
                vertices: cur.len(),
                expected,
            });
        }
        if prev.contains(&vi) || with_vertex(prev, vi) != *cur {
            return fail(format!("V{i} is not V{} plus v{i}", i - 1));
        }
        if !is_basis(spectrum, lambda0, cur) {
            return fail(format!("V{i} is not a uniqueness set"));
        }
        let x = x_entry_by_complement(spectrum, lambda0, step.lambda_star, cur, vi)?;
        if is_negligible(x, S::one(), spectrum.tol()) {
            return fail(format!("x_V{i} vanishes at the added vertex"));
        }
        if b[vi] < step.b_star {
            return fail(format!("bandwidth of the added vertex is below b{i}"));
        }
        let base_rank = matroid::matroid_rank(spectrum, lambda0, prev);
        for v in (0..n).filter(|v| !cur.contains(v)) {
            let independent = matroid::matroid_rank(spectrum, lambda0, &with_vertex(prev, v)) > base_rank;
            if independent && b[v] < step.b_star {
                return fail(format!("vertex {v} is free over V{} with bandwidth below b{i}", i - 1));
            }
        }
    }
    Ok(())
}

/// Convenience: the x-vector of `set` at level `i` through the planner route.
pub fn level_x_vector<S: Scalar>(
    spectrum: &Spectrum<S>,
    filtration: &Filtration<S>,
    i: usize,
    set: &[usize],
) -> Result<(UniquenessSet<S>, Matrix<S>, Vec<S>)> {
    let lambda0 = &filtration.levels[i].lambda_zero;
    let us = matroid::uniqueness_set(spectrum, lambda0, set)?;
    let m = matroid::extension_matrix(spectrum, lambda0, &us);
    let x = if i == 0 {
        Vec::new()
    } else {
        m.left_mul_vec(spectrum.row(filtration.steps[i - 1].lambda_star))
    };
    Ok((us, m, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_vertex_profile, five_vertex_spectrum, two_path_spectrum};
    use crate::testing::{random_profile, random_spectrum};
    use proptest::prelude::*;

    const INF: ExtReal<f64> = ExtReal::Infinite;

    fn fin(x: f64) -> ExtReal<f64> {
        ExtReal::Finite(x)
    }

    #[test]
    fn lambda_star_selection() {
        assert_eq!(select_lambda_star(&[fin(9.), fin(2.), fin(5.), INF, INF]), Some(1));
        assert_eq!(select_lambda_star(&[fin(0.), INF, fin(0.)]), None);
        assert_eq!(select_lambda_star(&[fin(9.), fin(0.), fin(5.), INF, INF]), Some(2));
        assert_eq!(select_lambda_star(&[fin(3.), fin(3.)]), Some(0));
        assert_eq!(select_lambda_star_with(&[fin(3.), fin(3.), fin(4.)], TieBreak::HighestIndex), Some(1));
    }

    #[test]
    fn five_vertex_steps_one_and_two() {
        let s = five_vertex_spectrum::<f64>();
        let b = [5., 5., 1., 4., 4.];
        let c = five_vertex_profile::<f64>().freq_bw().to_vec();
        let one = reduction_step(&s, &b, &c).unwrap();
        assert_eq!(one.lambda_star, 1);
        assert!(one.lambda_zero.is_empty());
        assert_eq!(one.chosen_v0.vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(one.b_star, 2.0);
        let two = reduction_step(&s, &b, &one.child_c).unwrap();
        assert_eq!(two.lambda_star, 2);
        assert_eq!(two.lambda_zero.indices(), &[1]);
        assert_eq!(two.b_star, 5.0);
    }

    /// Step three evaluated by hand: with Λ₀ = {λ2, λ3}, the λ1 coefficient on
    /// V₀ = {v3, v4, v5} is (2 f3 + 3 f5)/√5, so `x` vanishes at v4 and
    /// b_{V₀} = max(ℬ[v3], ℬ[v5]) = 4.
    #[test]
    fn five_vertex_step_three() {
        let s = five_vertex_spectrum::<f64>();
        let b = [5., 5., 1., 4., 4.];
        let c = vec![fin(9.), fin(0.), fin(0.), INF, INF];
        let three = reduction_step(&s, &b, &c).unwrap();
        assert_eq!(three.lambda_star, 0);
        assert_eq!(three.min_support_bw, 4.0);
        assert_eq!(three.b_star, 4.0);
        let l0 = FrequencySubset::new(vec![1, 2], 5).unwrap();
        let v0 = matroid::uniqueness_set(&s, &l0, &[2, 3, 4]).unwrap();
        let x = x_vector(&s, 0, &l0, &v0);
        let r5 = 5f64.sqrt();
        assert!((x[0] - 2.0 / r5).abs() < 1e-12);
        assert!(x[1].abs() < 1e-12);
        assert!((x[2] - 3.0 / r5).abs() < 1e-12);
    }

    #[test]
    fn five_vertex_filtration() {
        let s = five_vertex_spectrum::<f64>();
        let f = build_filtration(&s, &five_vertex_profile()).unwrap();
        assert_eq!(f.k(), 3);
        assert_eq!(f.selection_order(), vec![1, 2, 0]);
        assert_eq!(f.quotient_bandwidths(), vec![4.0, 5.0, 2.0]);
        assert_eq!(f.terminal().freq_bw, vec![fin(0.), fin(0.), fin(0.), INF, INF]);
        let chain: Vec<Vec<usize>> = f.levels.iter().map(|l| l.lambda_zero.indices().to_vec()).collect();
        assert_eq!(chain, vec![vec![0, 1, 2], vec![1, 2], vec![1], vec![]]);
    }

    #[test]
    fn five_vertex_admissible_sequence() {
        let s = five_vertex_spectrum::<f64>();
        let f = build_filtration(&s, &five_vertex_profile()).unwrap();
        let seq = find_admissible_sequence(&s, &f).unwrap().expect("sequence exists");
        assert_eq!(
            seq.sets,
            vec![vec![2, 3], vec![2, 3, 4], vec![0, 2, 3, 4], vec![0, 1, 2, 3, 4]]
        );
        assert_eq!(seq.added, vec![4, 0, 1]);
        assert_eq!(seq.total_rate(), 32.0);
        verify_admissible(&s, &f, &seq).unwrap();
    }

    #[test]
    fn verifier_rejects_broken_sequences() {
        let s = five_vertex_spectrum::<f64>();
        let f = build_filtration(&s, &five_vertex_profile()).unwrap();
        let good = find_admissible_sequence(&s, &f).unwrap().unwrap();
        let mut bad = good.clone();
        bad.sets[0] = vec![3, 4];
        assert!(verify_admissible(&s, &f, &bad).is_err());
        let mut swapped = good.clone();
        swapped.sets[1] = vec![1, 2, 3];
        swapped.added[0] = 1;
        assert!(verify_admissible(&s, &f, &swapped).is_err());
    }

    #[test]
    fn simple_profile_has_trivial_filtration() {
        let s = five_vertex_spectrum::<f64>();
        let p = BandwidthProfile::from_finite(&[5., 5., 1., 4., 4.], vec![fin(0.), fin(0.), fin(0.), INF, INF]).unwrap();
        let f = build_filtration(&s, &p).unwrap();
        assert_eq!(f.k(), 0);
        assert_eq!(f.levels.len(), 1);
        let seq = find_admissible_sequence(&s, &f).unwrap().unwrap();
        assert_eq!(seq.sets, vec![vec![2, 3]]);
        assert_eq!(seq.total_rate(), 10.0);
    }

    #[test]
    fn two_path_single_reduction() {
        let s = two_path_spectrum::<f64>();
        let p = BandwidthProfile::from_finite(&[3., 5.], vec![fin(1.), INF]).unwrap();
        let f = build_filtration(&s, &p).unwrap();
        assert_eq!(f.k(), 1);
        assert_eq!(f.terminal().freq_bw, vec![fin(0.), INF]);
        // u_λ1 has support on both vertices; by hand b₁ = min(min over V₀ of b_{V₀}, 1).
        // 𝒰(∅) = {V}, x = u_λ1 with full support, so b_{V} = 5 and b₁ = 1.
        assert_eq!(f.quotient_bandwidths(), vec![1.0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn filtration_invariants(seed in any::<u64>(), n in 2usize..7) {
            let s = random_spectrum(n, seed);
            let p = random_profile(n, seed ^ 0xabc);
            let f = build_filtration(&s, &p).unwrap();
            let k = p.freq_bw().iter().filter(|c| c.is_positive_finite()).count();
            prop_assert_eq!(f.k(), k);
            for i in 1..f.levels.len() {
                let (lo, hi) = (&f.levels[i - 1].lambda_zero, &f.levels[i].lambda_zero);
                prop_assert_eq!(lo.len(), hi.len() + 1);
                prop_assert!(hi.indices().iter().all(|&x| lo.contains(x)));
            }
            prop_assert!(f.terminal().freq_bw.iter().all(|c| c.is_zero() || !c.is_finite()));
            let bmax = f.vertex_bw.iter().fold(0.0f64, |m, &x| m.max(x));
            for st in &f.steps {
                let cap = p.freq_bw()[st.lambda_star].finite().unwrap();
                prop_assert!(st.b_star <= cap && st.b_star <= bmax);
            }
            if let Some(seq) = find_admissible_sequence(&s, &f).unwrap() {
                prop_assert!(verify_admissible(&s, &f, &seq).is_ok());
                let sum: f64 = seq.quotient_rates.iter().sum();
                prop_assert_eq!(seq.total_rate(), seq.base_rate + sum);
            }
        }
    }
}
