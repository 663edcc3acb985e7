//! Random members of `W_{ℬ,𝒞}`.
//!
//! The structured route follows the filtration: free `V₀` channels extended
//! by `M₀`, plus one bandwidth-`b_i` witness `h_i` per level extended by the
//! `v_i` column of `M_i`. The generic route draws from the surrogate basis
//! and knows nothing about filtrations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bandwidth::BandwidthProfile;
use crate::error::{Error, Result};
use crate::filtration::{build_filtration, find_admissible_sequence};
use crate::linalg::Matrix;
use crate::plan::{make_plan, SamplingPlan};
use crate::scalar::Scalar;
use crate::signal::{ContinuousGraphSignal, ScalarSignal, SignalMode, SincAtom, TrigPoly};
use crate::spectral::Spectrum;
use crate::surrogate::{channel_harmonics, signal_space_basis, Component};

#[derive(Clone, Debug, PartialEq)]
pub struct Synthesized<S> {
    pub signal: ContinuousGraphSignal<S>,
    /// The constraints admit only the zero signal.
    pub zero_space: bool,
}

fn uniform<S: Scalar, R: Rng>(rng: &mut R) -> S {
    S::lit(rng.gen_range(-1.0..1.0))
}

fn random_channel<S: Scalar, R: Rng>(mode: &SignalMode<S>, bw: S, rng: &mut R) -> ScalarSignal<S> {
    if bw <= S::zero() {
        return ScalarSignal::zero(mode);
    }
    match *mode {
        SignalMode::Periodic { period } => {
            let mut p = TrigPoly::zero(period);
            for (k, comp) in channel_harmonics(bw, period) {
                let c = uniform(rng);
                match comp {
                    Component::Cos => p.set(k, c, p.sin.get(k).copied().unwrap_or(S::zero())),
                    Component::Sin => p.set(k, p.cos.get(k).copied().unwrap_or(S::zero()), c),
                }
            }
            ScalarSignal::Trig(p)
        }
        SignalMode::Sinc { start, end } => {
            // Atoms on the Nyquist lattice of the middle quarter of the window.
            let mid = (start + end) / S::lit(2.0);
            let reach = (end - start) / S::lit(8.0);
            let step = S::one() / (S::lit(2.0) * bw);
            let half = (reach / step).floor().to_i64().unwrap_or(0);
            ScalarSignal::Sinc(
                (-half..=half)
                    .map(|j| SincAtom {
                        center: mid + S::lit(j as f64) * step,
                        bandwidth: bw,
                        amplitude: uniform(rng),
                    })
                    .collect(),
            )
        }
    }
}

fn column_matrix<S: Scalar>(column: &[S]) -> Matrix<S> {
    Matrix::from_fn(column.len(), 1, |r, _| column[r])
}

/// Structured synthesis along an existing plan.
pub fn synthesize_from_plan<S: Scalar>(
    plan: &SamplingPlan<S>,
    seed: u64,
    mode: SignalMode<S>,
) -> Result<Synthesized<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = &plan.schedule[0];
    let sources: Vec<ScalarSignal<S>> = base
        .vertices
        .iter()
        .map(|&v| random_channel(&mode, plan.vertex_bw[v], &mut rng))
        .collect();
    let mut f = ContinuousGraphSignal::extend(mode, &base.extension, &sources, plan.vertex_bw.clone())?;
    let mut zero_space = base.vertices.iter().all(|&v| plan.vertex_bw[v] <= S::zero());
    for recipe in &plan.schedule[1..] {
        let bi = recipe.bandwidth.expect("quotient level");
        if bi <= S::zero() {
            continue;
        }
        zero_space = false;
        let h = random_channel(&mode, bi, &mut rng);
        let column = recipe.added_column().expect("quotient level");
        let fi = ContinuousGraphSignal::extend(mode, &column_matrix(&column), &[h], plan.vertex_bw.clone())?;
        f.add_scaled(&fi, S::one())?;
    }
    if zero_space {
        log::warn!("bandwidth constraints admit only the zero signal");
    }
    Ok(Synthesized { signal: f, zero_space })
}

/// Plans `profile` (finite ℬ) and synthesizes along the plan.
pub fn synthesize_signal<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
    seed: u64,
    mode: SignalMode<S>,
) -> Result<Synthesized<S>> {
    let filtration = build_filtration(spectrum, profile)?;
    let sequence = find_admissible_sequence(spectrum, &filtration)?.ok_or(Error::NotAdmissible(
        "no admissible sequence to synthesize along".into(),
    ))?;
    let plan = make_plan(spectrum, &filtration, &sequence)?;
    synthesize_from_plan(&plan, seed, mode)
}

/// A uniformly weighted random element of the periodic surrogate space.
pub fn synthesize_generic<S: Scalar>(
    spectrum: &Spectrum<S>,
    profile: &BandwidthProfile<S>,
    seed: u64,
    period: S,
) -> Result<Synthesized<S>> {
    let basis = signal_space_basis(spectrum, &profile.finite_vertex_bw()?, profile.freq_bw(), period)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Synthesized {
        signal: basis.random_element(&mut rng),
        zero_space: basis.dim() == 0,
    })
}

/// A member of `W_i` whose `λ*`-coefficient reaches bandwidth exactly `b_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TightnessWitness<S> {
    pub signal: ContinuousGraphSignal<S>,
    /// `u_{λ*} · f`, computed from the signal.
    pub alpha_image: TrigPoly<S>,
    /// Highest harmonic of `alpha_image` over the period, as a bandwidth.
    pub reach: S,
}

/// Bandwidth-`b_i` content on `v_i`, zero on `V_{i−1}`, extended by `M_i`.
pub fn tightness_witness<S: Scalar>(
    spectrum: &Spectrum<S>,
    plan: &SamplingPlan<S>,
    level: usize,
    period: S,
) -> Result<TightnessWitness<S>> {
    if level == 0 || level > plan.k() {
        return Err(Error::OutOfRange {
            what: "quotient level",
            index: level,
            len: plan.k() + 1,
        });
    }
    let recipe = &plan.schedule[level];
    let bi = recipe.bandwidth.expect("quotient level");
    let lambda_star = recipe.lambda_star.expect("quotient level");
    let mut h = TrigPoly::zero(period);
    if let Some(&(k, comp)) = channel_harmonics(bi, period).last() {
        match comp {
            Component::Cos => h.set(k, S::one(), S::zero()),
            Component::Sin => h.set(k, S::zero(), S::one()),
        }
    }
    let mode = SignalMode::Periodic { period };
    let column = recipe.added_column().expect("quotient level");
    let signal = ContinuousGraphSignal::extend(mode, &column_matrix(&column), &[ScalarSignal::Trig(h)], plan.vertex_bw.clone())?;
    let mut alpha_image = TrigPoly::zero(period);
    for (&w, ch) in spectrum.row(lambda_star).iter().zip(&signal.channels) {
        alpha_image.add_scaled(ch.as_trig().expect("periodic"), w);
    }
    let scale = alpha_image.max_abs_coefficient();
    let top = (0..=alpha_image.max_harmonic())
        .rev()
        .find(|&k| {
            let m = alpha_image.cos[k].abs().max(alpha_image.sin[k].abs());
            m > S::rank_tolerance() * scale.max(S::one())
        })
        .unwrap_or(0);
    Ok(TightnessWitness {
        signal,
        alpha_image,
        reach: S::from_usize_lossy(top) / period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandwidth::ExtReal;
    use crate::fixtures::{five_vertex_profile, five_vertex_spectrum, two_path_spectrum};
    use crate::surrogate::verify_membership;

    const UNIT: SignalMode<f64> = SignalMode::Periodic { period: 1.0 };

    fn fin(x: f64) -> ExtReal<f64> {
        ExtReal::Finite(x)
    }

    #[test]
    fn two_path_antisymmetric() {
        let s = two_path_spectrum::<f64>();
        let p = BandwidthProfile::from_finite(&[3.0, 3.0], vec![fin(0.0), ExtReal::Infinite]).unwrap();
        let f = synthesize_signal(&s, &p, 7, UNIT).unwrap();
        assert!(!f.zero_space);
        for t in [0.0, 0.13, 0.5, 0.77] {
            let x = f.signal.snapshot(t);
            assert!((x[0] + x[1]).abs() < 1e-12);
        }
        assert!(f.signal.eval(0, 0.13).abs() > 1e-6);
    }

    #[test]
    fn zero_bandwidths_give_zero_signal() {
        let s = two_path_spectrum::<f64>();
        let p = BandwidthProfile::from_finite(&[0.0, 0.0], vec![ExtReal::Infinite, ExtReal::Infinite]).unwrap();
        let f = synthesize_signal(&s, &p, 1, UNIT).unwrap();
        assert!(f.zero_space);
        assert!(f.signal.snapshot(0.3).iter().all(|&x| x == 0.0));
        assert!(synthesize_generic(&s, &p, 1, 1.0).unwrap().zero_space);
    }

    #[test]
    fn five_vertex_synthesis_is_a_member() {
        let s = five_vertex_spectrum::<f64>();
        let p = five_vertex_profile::<f64>();
        let f = synthesize_signal(&s, &p, 42, UNIT).unwrap();
        let report = verify_membership(&s, p.vertex_bw(), p.freq_bw(), &f.signal).unwrap();
        assert!(report.ok, "{:?}", report.violations);
        let g = synthesize_generic(&s, &p, 42, 1.0).unwrap();
        assert!(verify_membership(&s, p.vertex_bw(), p.freq_bw(), &g.signal).unwrap().ok);
    }

    #[test]
    fn five_vertex_sinc_synthesis_is_a_member() {
        let s = five_vertex_spectrum::<f64>();
        let p = five_vertex_profile::<f64>();
        let f = synthesize_signal(&s, &p, 42, SignalMode::Sinc { start: -20.0, end: 20.0 }).unwrap();
        let report = verify_membership(&s, p.vertex_bw(), p.freq_bw(), &f.signal).unwrap();
        assert!(report.ok, "{:?}", report.violations);
    }

    #[test]
    fn membership_rejects_an_out_of_band_channel() {
        let s = five_vertex_spectrum::<f64>();
        let p = five_vertex_profile::<f64>();
        let mut f = synthesize_signal(&s, &p, 3, UNIT).unwrap().signal;
        if let ScalarSignal::Trig(q) = &mut f.channels[2] {
            q.set(3, 0.5, 0.0);
        }
        assert!(!verify_membership(&s, p.vertex_bw(), p.freq_bw(), &f).unwrap().ok);
    }
}
