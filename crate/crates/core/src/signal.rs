//! Continuous-time graph signals in two representations: trigonometric
//! polynomials on a period (exact) and sums of sinc atoms on a window.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SignalMode<S> {
    Periodic { period: S },
    Sinc { start: S, end: S },
}

impl<S: Scalar> SignalMode<S> {
    pub fn name(&self) -> &'static str {
        match self {
            SignalMode::Periodic { .. } => "periodic",
            SignalMode::Sinc { .. } => "sinc",
        }
    }

    fn same_kind(&self, other: &Self) -> bool {
        match (self, other) {
            (SignalMode::Periodic { period: a }, SignalMode::Periodic { period: b }) => a == b,
            (SignalMode::Sinc { .. }, SignalMode::Sinc { .. }) => true,
            _ => false,
        }
    }
}

/// `c₀ + Σ_k c_k cos(2πkt/T) + s_k sin(2πkt/T)`; `sin[0]` is always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<S> {
    pub period: S,
    pub cos: Vec<S>,
    pub sin: Vec<S>,
}

impl<S: Scalar> TrigPoly<S> {
    pub fn zero(period: S) -> Self {
        TrigPoly {
            period,
            cos: vec![S::zero()],
            sin: vec![S::zero()],
        }
    }

    pub fn constant(period: S, c: S) -> Self {
        TrigPoly {
            period,
            cos: vec![c],
            sin: vec![S::zero()],
        }
    }

    pub fn max_harmonic(&self) -> usize {
        self.cos.len() - 1
    }

    fn grow(&mut self, k: usize) {
        if self.cos.len() <= k {
            self.cos.resize(k + 1, S::zero());
            self.sin.resize(k + 1, S::zero());
        }
    }

    pub fn set(&mut self, k: usize, cos: S, sin: S) {
        self.grow(k);
        self.cos[k] = cos;
        self.sin[k] = if k == 0 { S::zero() } else { sin };
    }

    pub fn eval(&self, t: S) -> S {
        let w = S::lit(2.0) * S::PI() * t / self.period;
        let mut acc = self.cos[0];
        for k in 1..self.cos.len() {
            let (s, c) = (w * S::from_usize_lossy(k)).sin_cos();
            acc += self.cos[k] * c + self.sin[k] * s;
        }
        acc
    }

    pub fn add_scaled(&mut self, other: &TrigPoly<S>, a: S) {
        self.grow(other.max_harmonic());
        for k in 0..other.cos.len() {
            self.cos[k] += a * other.cos[k];
            self.sin[k] += a * other.sin[k];
        }
    }

    /// `∫₀ᵀ |p|²`, exact by Parseval.
    pub fn energy(&self) -> S {
        let half = S::lit(0.5);
        let tail: S = (1..self.cos.len())
            .map(|k| self.cos[k] * self.cos[k] + self.sin[k] * self.sin[k])
            .sum();
        self.period * (self.cos[0] * self.cos[0] + half * tail)
    }

    pub fn max_abs_coefficient(&self) -> S {
        self.cos
            .iter()
            .chain(&self.sin)
            .fold(S::zero(), |m, &x| m.max(x.abs()))
    }
}

/// `sin(πx)/(πx)`.
pub fn sinc<S: Scalar>(x: S) -> S {
    if x.abs() < S::lit(1e-12) {
        return S::one();
    }
    let px = S::PI() * x;
    px.sin() / px
}

/// `amplitude · sinc(2·bandwidth·(t − center))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SincAtom<S> {
    pub center: S,
    pub bandwidth: S,
    pub amplitude: S,
}

impl<S: Scalar> SincAtom<S> {
    pub fn eval(&self, t: S) -> S {
        self.amplitude * sinc(S::lit(2.0) * self.bandwidth * (t - self.center))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScalarSignal<S> {
    Trig(TrigPoly<S>),
    Sinc(Vec<SincAtom<S>>),
}

impl<S: Scalar> ScalarSignal<S> {
    pub fn zero(mode: &SignalMode<S>) -> Self {
        match *mode {
            SignalMode::Periodic { period } => ScalarSignal::Trig(TrigPoly::zero(period)),
            SignalMode::Sinc { .. } => ScalarSignal::Sinc(Vec::new()),
        }
    }

    pub fn eval(&self, t: S) -> S {
        match self {
            ScalarSignal::Trig(p) => p.eval(t),
            ScalarSignal::Sinc(atoms) => atoms.iter().map(|a| a.eval(t)).sum(),
        }
    }

    pub fn add_scaled(&mut self, other: &ScalarSignal<S>, a: S) -> Result<()> {
        if a == S::zero() {
            return Ok(());
        }
        match (self, other) {
            (ScalarSignal::Trig(p), ScalarSignal::Trig(q)) => {
                if p.period != q.period {
                    return Err(Error::ModeMismatch("periods differ".into()));
                }
                p.add_scaled(q, a);
            }
            (ScalarSignal::Sinc(p), ScalarSignal::Sinc(q)) => {
                p.extend(q.iter().map(|x| SincAtom { amplitude: x.amplitude * a, ..*x }));
            }
            _ => return Err(Error::ModeMismatch("periodic and sinc signals mixed".into())),
        }
        Ok(())
    }

    pub fn as_trig(&self) -> Option<&TrigPoly<S>> {
        match self {
            ScalarSignal::Trig(p) => Some(p),
            ScalarSignal::Sinc(_) => None,
        }
    }
}

/// One scalar signal per vertex plus the bandwidth each was declared with.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousGraphSignal<S> {
    pub mode: SignalMode<S>,
    pub channels: Vec<ScalarSignal<S>>,
    pub nominal_bw: Vec<S>,
}

impl<S: Scalar> ContinuousGraphSignal<S> {
    pub fn zero(n: usize, mode: SignalMode<S>) -> Self {
        ContinuousGraphSignal {
            mode,
            channels: (0..n).map(|_| ScalarSignal::zero(&mode)).collect(),
            nominal_bw: vec![S::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.channels.len()
    }

    pub fn eval(&self, v: usize, t: S) -> S {
        self.channels[v].eval(t)
    }

    pub fn snapshot(&self, t: S) -> Vec<S> {
        self.channels.iter().map(|c| c.eval(t)).collect()
    }

    /// `f_v = Σ_j M[v, j] g_j`.
    pub fn extend(
        mode: SignalMode<S>,
        m: &Matrix<S>,
        sources: &[ScalarSignal<S>],
        nominal_bw: Vec<S>,
    ) -> Result<Self> {
        if sources.len() != m.cols() {
            return Err(Error::Dimension(format!(
                "{} source channels for {} columns",
                sources.len(),
                m.cols()
            )));
        }
        let mut out = Self::zero(m.rows(), mode);
        out.nominal_bw = nominal_bw;
        for v in 0..m.rows() {
            for (j, g) in sources.iter().enumerate() {
                out.channels[v].add_scaled(g, m[(v, j)])?;
            }
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &ContinuousGraphSignal<S>, a: S) -> Result<()> {
        if !self.mode.same_kind(&other.mode) || self.n() != other.n() {
            return Err(Error::ModeMismatch(format!(
                "{} signal on {} vertices vs {} signal on {}",
                self.mode.name(),
                self.n(),
                other.mode.name(),
                other.n()
            )));
        }
        for (c, o) in self.channels.iter_mut().zip(&other.channels) {
            c.add_scaled(o, a)?;
        }
        for (b, &o) in self.nominal_bw.iter_mut().zip(&other.nominal_bw) {
            *b = b.max(o);
        }
        Ok(())
    }

    pub fn sum(mode: SignalMode<S>, n: usize, parts: &[ContinuousGraphSignal<S>]) -> Result<Self> {
        let mut out = Self::zero(n, mode);
        for p in parts {
            out.add_scaled(p, S::one())?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_eval_and_energy() {
        let mut p = TrigPoly::constant(1.0f64, 2.0);
        p.set(1, 0.0, 1.0);
        assert!((p.eval(0.25) - 3.0).abs() < 1e-14);
        assert!((p.energy() - 4.5).abs() < 1e-14);
    }

    #[test]
    fn sinc_atom_interpolates() {
        let a = SincAtom { center: 0.5f64, bandwidth: 2.0, amplitude: 3.0 };
        assert!((a.eval(0.5) - 3.0).abs() < 1e-15);
        assert!(a.eval(0.75).abs() < 1e-15);
    }

    #[test]
    fn mixed_modes_are_rejected() {
        let mut a = ContinuousGraphSignal::zero(2, SignalMode::Periodic { period: 1.0f64 });
        let b = ContinuousGraphSignal::zero(2, SignalMode::Sinc { start: -1.0, end: 1.0 });
        assert!(a.add_scaled(&b, 1.0).is_err());
    }
}
