//! The periodic surrogate of `W_{ℬ,𝒞}`: trigonometric polynomials of period `T`.
//!
//! A harmonic `k` is admitted under bandwidth `B` when `k < B·T`, and its
//! cosine alone is admitted when `k = B·T ≥ 1`. This gives a channel space of
//! dimension exactly `2·B·T` whenever `2·B·T` is an integer, so a uniform grid
//! of rate `2B` (phase 0) determines it and no smaller sample count can.
//!
//! The space itself splits over `(k, component)`: each pair carries the
//! null space of `U[F, A]`, with `A` the vertices admitting the pair and `F`
//! the frequencies forbidding it.

use rand::Rng;

use crate::bandwidth::ExtReal;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::signal::{ContinuousGraphSignal, ScalarSignal, SignalMode, TrigPoly};
use crate::spectral::Spectrum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    Cos,
    Sin,
}

fn edge_slack<S: Scalar>(x: S) -> S {
    S::lit(1e-9) * x.max(S::one())
}

pub fn harmonic_allowed<S: Scalar>(bw: ExtReal<S>, k: usize, comp: Component, period: S) -> bool {
    let ExtReal::Finite(b) = bw else {
        return true;
    };
    if k == 0 && comp == Component::Sin {
        return false;
    }
    let x = b * period;
    let kk = S::from_usize_lossy(k);
    let slack = edge_slack(x);
    if kk < x - slack {
        true
    } else if (kk - x).abs() <= slack {
        comp == Component::Cos && k >= 1
    } else {
        false
    }
}

/// Highest harmonic admitted under bandwidth `bw`.
pub fn harmonic_limit<S: Scalar>(bw: S, period: S) -> usize {
    let x = bw * period;
    (x + edge_slack(x)).floor().to_usize().unwrap_or(0)
}

/// Admitted `(k, component)` pairs for one channel.
pub fn channel_harmonics<S: Scalar>(bw: S, period: S) -> Vec<(usize, Component)> {
    let mut out = Vec::new();
    for k in 0..=harmonic_limit(bw, period) {
        for comp in [Component::Cos, Component::Sin] {
            if harmonic_allowed(ExtReal::Finite(bw), k, comp, period) {
                out.push((k, comp));
            }
        }
    }
    out
}

pub fn basis_value<S: Scalar>(k: usize, comp: Component, t: S, period: S) -> S {
    let w = S::lit(2.0) * S::PI() * S::from_usize_lossy(k) * t / period;
    match comp {
        Component::Cos => w.cos(),
        Component::Sin => w.sin(),
    }
}

/// Fits a bandwidth-`bw` channel through `(times, values)`; on rank
/// deficiency returns `(rank, unknowns)`.
pub fn fit_channel<S: Scalar>(
    bw: S,
    period: S,
    times: &[S],
    values: &[S],
    tol: S,
) -> std::result::Result<TrigPoly<S>, (usize, usize)> {
    let harmonics = channel_harmonics(bw, period);
    let d = harmonics.len();
    let mut poly = TrigPoly::zero(period);
    if d == 0 {
        return Ok(poly);
    }
    let e = Matrix::from_fn(times.len(), d, |i, j| {
        basis_value(harmonics[j].0, harmonics[j].1, times[i], period)
    });
    let svd = linalg::svd(&e);
    let rank = svd.rank(tol);
    if rank < d {
        return Err((rank, d));
    }
    let coef = svd.solve_least_squares(values, tol);
    for (&(k, comp), c) in harmonics.iter().zip(coef) {
        match comp {
            Component::Cos => poly.set(k, c, poly.sin.get(k).copied().unwrap_or(S::zero())),
            Component::Sin => poly.set(k, poly.cos.get(k).copied().unwrap_or(S::zero()), c),
        }
    }
    Ok(poly)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement<S> {
    pub k: usize,
    pub comp: Component,
    /// Vertex profile; the element is `vector[v]·φ_{k,comp}(t)`.
    pub vector: Vec<S>,
}

/// An orthonormal-per-harmonic basis of the surrogate space.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalSpaceBasis<S> {
    pub period: S,
    pub n: usize,
    pub elements: Vec<BasisElement<S>>,
}

pub fn signal_space_basis<S: Scalar>(
    spectrum: &Spectrum<S>,
    vertex_bw: &[S],
    freq_bw: &[ExtReal<S>],
    period: S,
) -> Result<SignalSpaceBasis<S>> {
    let n = spectrum.n();
    if vertex_bw.len() != n || freq_bw.len() != n {
        return Err(Error::Dimension("profile does not match spectrum".into()));
    }
    let top = vertex_bw.iter().map(|&b| harmonic_limit(b, period)).max().unwrap_or(0);
    let mut elements = Vec::new();
    for k in 0..=top {
        for comp in [Component::Cos, Component::Sin] {
            let allowed: Vec<usize> = (0..n)
                .filter(|&v| harmonic_allowed(ExtReal::Finite(vertex_bw[v]), k, comp, period))
                .collect();
            if allowed.is_empty() {
                continue;
            }
            let forbidden: Vec<usize> = (0..n)
                .filter(|&l| !harmonic_allowed(freq_bw[l], k, comp, period))
                .collect();
            let null = linalg::svd(&spectrum.block(&forbidden, &allowed)).null_space(spectrum.tol());
            for j in 0..null.cols() {
                let mut vector = vec![S::zero(); n];
                for (i, &v) in allowed.iter().enumerate() {
                    vector[v] = null[(i, j)];
                }
                elements.push(BasisElement { k, comp, vector });
            }
        }
    }
    Ok(SignalSpaceBasis { period, n, elements })
}

impl<S: Scalar> SignalSpaceBasis<S> {
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn evaluation_matrix(&self, points: &[(usize, S)]) -> Matrix<S> {
        Matrix::from_fn(points.len(), self.dim(), |i, j| {
            let e = &self.elements[j];
            let (v, t) = points[i];
            e.vector[v] * basis_value(e.k, e.comp, t, self.period)
        })
    }

    pub fn signal(&self, coef: &[S]) -> ContinuousGraphSignal<S> {
        let mode = SignalMode::Periodic { period: self.period };
        let mut polys: Vec<TrigPoly<S>> = (0..self.n).map(|_| TrigPoly::zero(self.period)).collect();
        for (e, &c) in self.elements.iter().zip(coef) {
            for (v, p) in polys.iter_mut().enumerate() {
                let a = c * e.vector[v];
                if a == S::zero() {
                    continue;
                }
                let (mut cc, mut ss) = (
                    p.cos.get(e.k).copied().unwrap_or(S::zero()),
                    p.sin.get(e.k).copied().unwrap_or(S::zero()),
                );
                match e.comp {
                    Component::Cos => cc += a,
                    Component::Sin => ss += a,
                }
                p.set(e.k, cc, ss);
            }
        }
        let mut nominal = vec![S::zero(); self.n];
        for e in &self.elements {
            for v in 0..self.n {
                if e.vector[v] != S::zero() {
                    let kb = S::from_usize_lossy(e.k) / self.period;
                    nominal[v] = nominal[v].max(kb);
                }
            }
        }
        ContinuousGraphSignal {
            mode,
            channels: polys.into_iter().map(ScalarSignal::Trig).collect(),
            nominal_bw: nominal,
        }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> ContinuousGraphSignal<S> {
        let coef: Vec<S> = (0..self.dim())
            .map(|_| S::lit(rng.gen_range(-1.0..1.0)))
            .collect();
        self.signal(&coef)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceFit<S> {
    pub signal: ContinuousGraphSignal<S>,
    pub rank: usize,
    pub unknowns: usize,
}

/// Least-squares element of the space through the samples.
pub fn fit_in_space<S: Scalar>(
    basis: &SignalSpaceBasis<S>,
    points: &[(usize, S)],
    values: &[S],
    tol: S,
) -> SpaceFit<S> {
    if basis.dim() == 0 {
        return SpaceFit {
            signal: basis.signal(&[]),
            rank: 0,
            unknowns: 0,
        };
    }
    let svd = linalg::svd(&basis.evaluation_matrix(points));
    SpaceFit {
        signal: basis.signal(&svd.solve_least_squares(values, tol)),
        rank: svd.rank(tol),
        unknowns: basis.dim(),
    }
}

/// A nonzero element vanishing at every point, if the points do not determine the space.
pub fn null_witness<S: Scalar>(
    basis: &SignalSpaceBasis<S>,
    points: &[(usize, S)],
    tol: S,
) -> Option<ContinuousGraphSignal<S>> {
    if basis.dim() == 0 {
        return None;
    }
    let null = linalg::svd(&basis.evaluation_matrix(points)).null_space(tol);
    (null.cols() > 0).then(|| basis.signal(&null.column(0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembershipReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// Checks per-vertex and per-frequency harmonic support against `(ℬ, 𝒞)`.
pub fn verify_membership<S: Scalar>(
    spectrum: &Spectrum<S>,
    vertex_bw: &[ExtReal<S>],
    freq_bw: &[ExtReal<S>],
    signal: &ContinuousGraphSignal<S>,
) -> Result<MembershipReport> {
    let n = spectrum.n();
    if signal.n() != n || vertex_bw.len() != n || freq_bw.len() != n {
        return Err(Error::Dimension("signal does not match spectrum".into()));
    }
    let mut violations = Vec::new();
    let SignalMode::Periodic { period } = signal.mode else {
        return Ok(sinc_membership(spectrum, vertex_bw, freq_bw, signal));
    };
    let polys: Vec<&TrigPoly<S>> = signal
        .channels
        .iter()
        .map(|c| c.as_trig().ok_or_else(|| Error::ModeMismatch("expected periodic channels".into())))
        .collect::<Result<_>>()?;
    let scale = polys
        .iter()
        .fold(S::zero(), |m, p| m.max(p.max_abs_coefficient()))
        .max(S::min_positive_value());
    let thr = S::rank_tolerance() * scale;
    let top = polys.iter().map(|p| p.max_harmonic()).max().unwrap_or(0);
    let coef = |p: &TrigPoly<S>, k: usize, comp: Component| match comp {
        Component::Cos => p.cos.get(k).copied().unwrap_or(S::zero()),
        Component::Sin => p.sin.get(k).copied().unwrap_or(S::zero()),
    };
    for k in 0..=top {
        for comp in [Component::Cos, Component::Sin] {
            if k == 0 && comp == Component::Sin {
                continue;
            }
            let column: Vec<S> = polys.iter().map(|p| coef(p, k, comp)).collect();
            for v in 0..n {
                if column[v].abs() > thr && !harmonic_allowed(vertex_bw[v], k, comp, period) {
                    violations.push(format!("vertex {v}: harmonic {k} {comp:?} exceeds B"));
                }
            }
            for l in 0..n {
                let g = linalg::dot(spectrum.row(l), &column);
                if g.abs() > thr && !harmonic_allowed(freq_bw[l], k, comp, period) {
                    violations.push(format!("frequency {l}: harmonic {k} {comp:?} exceeds C"));
                }
            }
        }
    }
    Ok(MembershipReport {
        ok: violations.is_empty(),
        violations,
    })
}

/// Sufficient check for sums of atoms: atoms sharing a center and bandwidth
/// are merged, and every surviving group must fit the bound it is charged to.
fn sinc_membership<S: Scalar>(
    spectrum: &Spectrum<S>,
    vertex_bw: &[ExtReal<S>],
    freq_bw: &[ExtReal<S>],
    signal: &ContinuousGraphSignal<S>,
) -> MembershipReport {
    let n = spectrum.n();
    let mut groups: Vec<(S, S, Vec<S>)> = Vec::new();
    for (v, ch) in signal.channels.iter().enumerate() {
        let ScalarSignal::Sinc(atoms) = ch else { continue };
        for a in atoms {
            let slot = groups
                .iter()
                .position(|g| g.0 == a.center && g.1 == a.bandwidth)
                .unwrap_or_else(|| {
                    groups.push((a.center, a.bandwidth, vec![S::zero(); n]));
                    groups.len() - 1
                });
            groups[slot].2[v] += a.amplitude;
        }
    }
    let scale = groups
        .iter()
        .flat_map(|g| g.2.iter())
        .fold(S::zero(), |m, &x| m.max(x.abs()))
        .max(S::min_positive_value());
    let thr = S::rank_tolerance() * scale;
    let mut violations = Vec::new();
    for (center, bw, amp) in &groups {
        let b = ExtReal::Finite(*bw);
        for v in 0..n {
            if amp[v].abs() > thr && b > vertex_bw[v] {
                violations.push(format!("vertex {v}: atom at {center} with bandwidth {bw} exceeds B"));
            }
        }
        for l in 0..n {
            if linalg::dot(spectrum.row(l), amp).abs() > thr && b > freq_bw[l] {
                violations.push(format!("frequency {l}: atom at {center} with bandwidth {bw} exceeds C"));
            }
        }
    }
    MembershipReport {
        ok: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{five_vertex_profile, five_vertex_spectrum};

    #[test]
    fn edge_harmonic_is_cosine_only() {
        let b = ExtReal::Finite(2.0f64);
        assert!(harmonic_allowed(b, 1, Component::Sin, 1.0));
        assert!(harmonic_allowed(b, 2, Component::Cos, 1.0));
        assert!(!harmonic_allowed(b, 2, Component::Sin, 1.0));
        assert!(!harmonic_allowed(b, 3, Component::Cos, 1.0));
        assert!(!harmonic_allowed(ExtReal::Finite(0.0f64), 0, Component::Cos, 1.0));
        assert_eq!(channel_harmonics(2.5f64, 2.0).len(), 10);
        assert_eq!(channel_harmonics(1.5f64, 1.0).len(), 3);
    }

    #[test]
    fn nyquist_grid_fits_exactly() {
        let mut p = TrigPoly::constant(1.0f64, 0.3);
        p.set(1, -0.2, 0.7);
        p.set(2, 0.5, 0.0);
        let times: Vec<f64> = (0..4).map(|j| j as f64 / 4.0).collect();
        let values: Vec<f64> = times.iter().map(|&t| p.eval(t)).collect();
        let fit = fit_channel(2.0, 1.0, &times, &values, 1e-9).unwrap();
        assert!((fit.energy() - p.energy()).abs() < 1e-12);
        assert_eq!(fit_channel(2.0, 1.0, &times[..3], &values[..3], 1e-9).unwrap_err(), (3, 4));
    }

    /// Dimension of the surrogate equals the minimal rate per unit period at
    /// every level of the worked example: 32, 28, 18 and 10.
    #[test]
    fn five_vertex_dimensions() {
        let s = five_vertex_spectrum::<f64>();
        let b = [5., 5., 1., 4., 4.];
        let c = five_vertex_profile::<f64>().freq_bw().to_vec();
        let z = ExtReal::Finite(0.0);
        let levels = [
            c.clone(),
            vec![c[0], z, c[2], c[3], c[4]],
            vec![c[0], z, z, c[3], c[4]],
            vec![z, z, z, c[3], c[4]],
        ];
        let dims: Vec<usize> = levels
            .iter()
            .map(|cc| signal_space_basis(&s, &b, cc, 1.0).unwrap().dim())
            .collect();
        assert_eq!(dims, vec![32, 28, 18, 10]);
    }
}
