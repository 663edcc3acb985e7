//! Minimal-rate sampling plans for bandlimited continuous-time graph signals.
//!
//! Every numeric routine is generic over [`Scalar`] (`f64` and `f32`); the
//! `*64` aliases below fix the scalar for the common case.

pub mod bandwidth;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod linalg;
pub mod matroid;
pub mod period;
pub mod plan;
pub mod recovery;
pub mod redistribute;
pub mod sampling;
pub mod scalar;
pub mod signal;
pub mod spectral;
pub mod surrogate;
pub mod synth;
pub mod testing;

pub use bandwidth::{BandwidthProfile, ExtReal, UniformityCertificate};
pub use error::{Error, Result};
pub use filtration::{AdmissibleSequence, Filtration, ReductionStep};
pub use linalg::Matrix;
pub use matroid::{FrequencySubset, UniquenessSet};
pub use plan::SamplingPlan;
pub use recovery::RecoveryResult;
pub use sampling::{Observation, SampleSet};
pub use scalar::Scalar;
pub use signal::{ContinuousGraphSignal, SignalMode};
pub use spectral::{GraphModel, ShiftKind, ShiftOperator, Spectrum};

pub type Spectrum64 = Spectrum<f64>;
pub type Spectrum32 = Spectrum<f32>;
pub type Profile64 = BandwidthProfile<f64>;
pub type Profile32 = BandwidthProfile<f32>;
pub type Matrix64 = Matrix<f64>;
pub type Filtration64 = Filtration<f64>;
pub type Plan64 = SamplingPlan<f64>;
pub type Plan32 = SamplingPlan<f32>;
pub type Signal64 = ContinuousGraphSignal<f64>;
pub type SampleSet64 = SampleSet<f64>;
