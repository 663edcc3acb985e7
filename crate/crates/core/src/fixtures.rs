//! Reference instances used by tests, the acceptance suite and the CLI examples.

use crate::bandwidth::{BandwidthProfile, ExtReal};
use crate::scalar::Scalar;
use crate::spectral::{build_shift_operator, eigendecompose, GraphModel, ShiftKind, Spectrum};

/// Five-vertex, seven-edge graph of the worked example.
pub fn five_vertex_graph<S: Scalar>() -> GraphModel<S> {
    GraphModel::unweighted(
        5,
        &[(0, 1), (0, 3), (0, 4), (1, 2), (1, 3), (2, 3), (2, 4)],
    )
    .expect("valid graph")
}

pub fn five_vertex_spectrum<S: Scalar>() -> Spectrum<S> {
    let shift = build_shift_operator(&five_vertex_graph::<S>(), &ShiftKind::Laplacian)
        .expect("symmetric");
    eigendecompose(&shift, S::rank_tolerance()).expect("converges")
}

/// ℬ = (5, 5, 1, 4, 4), 𝒞 = (9, 2, 5, ∞, ∞).
pub fn five_vertex_profile<S: Scalar>() -> BandwidthProfile<S> {
    let f = |x: f64| ExtReal::Finite(S::lit(x));
    BandwidthProfile::new(
        vec![f(5.0), f(5.0), f(1.0), f(4.0), f(4.0)],
        vec![f(9.0), f(2.0), f(5.0), ExtReal::Infinite, ExtReal::Infinite],
    )
    .expect("valid profile")
}

pub fn two_path_spectrum<S: Scalar>() -> Spectrum<S> {
    let g = GraphModel::unweighted(2, &[(0, 1)]).expect("valid graph");
    let shift = build_shift_operator(&g, &ShiftKind::Laplacian).expect("symmetric");
    eigendecompose(&shift, S::rank_tolerance()).expect("converges")
}
