//! Seeded random instances for property tests and the acceptance suite.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bandwidth::{BandwidthProfile, ExtReal};
use crate::linalg::Matrix;
use crate::matroid::FrequencySubset;
use crate::spectral::{build_shift_operator, eigendecompose, Edge, GraphModel, ShiftKind, Spectrum};

/// Spectrum of a random dense symmetric matrix; generic, with simple eigenvalues.
pub fn random_spectrum(n: usize, seed: u64) -> Spectrum<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.gen_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    let g = GraphModel::<f64>::unweighted(n, &[]).expect("valid graph");
    let shift = build_shift_operator(&g, &ShiftKind::Custom(m)).expect("symmetric");
    eigendecompose(&shift, 1e-9).expect("converges")
}

/// Laplacian spectrum of a connected random graph with weights in {1, 2, 3}/2.
pub fn random_graph_spectrum(n: usize, seed: u64) -> Spectrum<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let weight = |rng: &mut ChaCha8Rng| f64::from(rng.gen_range(1u8..=3)) / 2.0;
    for b in 1..n {
        let a = rng.gen_range(0..b);
        edges.push(Edge { a, b, weight: weight(&mut rng) });
    }
    for a in 0..n {
        for b in (a + 1)..n {
            if rng.gen_bool(0.3) && !edges.iter().any(|e| e.a == a && e.b == b) {
                edges.push(Edge { a, b, weight: weight(&mut rng) });
            }
        }
    }
    let g = GraphModel::new(n, edges, None).expect("valid graph");
    let shift = build_shift_operator(&g, &ShiftKind::Laplacian).expect("symmetric");
    eigendecompose(&shift, 1e-9).expect("converges")
}

/// Random subset of `0..n` with at most `max_len` elements.
pub fn random_subset(n: usize, seed: u64, max_len: usize) -> FrequencySubset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(0..=max_len.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(&mut rng);
    FrequencySubset::new(all[..len].to_vec(), n).expect("in range")
}

/// Bandwidths drawn from halves in `[1/2, 4]`.
pub fn random_half_integers(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| f64::from(rng.gen_range(1u8..=8)) / 2.0).collect()
}

/// Finite rational ℬ and a 𝒞 mixing zeros, finite halves and ∞.
pub fn random_profile(n: usize, seed: u64) -> BandwidthProfile<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_half_integers(n, &mut rng);
    let mut zeros = 0;
    let c = (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 if zeros + 1 < n => {
                zeros += 1;
                ExtReal::Finite(0.0)
            }
            1 => ExtReal::Finite(f64::from(rng.gen_range(1u8..=8)) / 2.0),
            _ => ExtReal::Infinite,
        })
        .collect();
    BandwidthProfile::new(b.into_iter().map(ExtReal::Finite).collect(), c).expect("valid profile")
}
