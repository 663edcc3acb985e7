//! Λ₀-dependence, uniqueness sets and the greedy minimum-weight basis.
//!
//! Two independent routes to the same matroid are kept side by side:
//! the null-space predicate [`is_dependent`] used by the planner, and the
//! column-rank oracle [`is_dependent_by_rank`] on `U[Λ₀ᶜ, ·]` used by verifiers.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;
use crate::spectral::Spectrum;

/// Largest |V| accepted by the brute-force enumerations.
pub const ENUMERATION_LIMIT: usize = 14;

/// Sorted set of frequency indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FrequencySubset {
    indices: Vec<usize>,
}

impl FrequencySubset {
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::OutOfRange {
                what: "frequency",
                index: bad,
                len: n,
            });
        }
        Ok(FrequencySubset { indices })
    }

    pub fn empty() -> Self {
        FrequencySubset::default()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| !self.contains(i)).collect()
    }
}

/// A vertex set `V₀` with `|V₀| + |Λ₀| = |V|` and invertible `U[Λ₀, V₀ᶜ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessSet<S> {
    vertices: Vec<usize>,
    complement: Vec<usize>,
    complement_inverse: Matrix<S>,
}

impl<S: Scalar> UniquenessSet<S> {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// `U[Λ₀, V₀ᶜ]⁻¹`.
    pub fn complement_inverse(&self) -> &Matrix<S> {
        &self.complement_inverse
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }
}

fn sorted_unique(vs: &[usize]) -> Vec<usize> {
    let mut out = vs.to_vec();
    out.sort_unstable();
    out.dedup();
    out
}

fn complement_of(vs: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|v| !vs.contains(v)).collect()
}

fn check_vertices(spectrum_n: usize, vs: &[usize]) -> Result<()> {
    match vs.iter().find(|&&v| v >= spectrum_n) {
        Some(&bad) => Err(Error::OutOfRange {
            what: "vertex",
            index: bad,
            len: spectrum_n,
        }),
        None => Ok(()),
    }
}

/// True iff every null vector of `U[Λ₀, V′ᶜ]` vanishes at `v`.
pub fn is_dependent<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v_prime: &[usize],
    v: usize,
) -> Result<bool> {
    let n = spectrum.n();
    check_vertices(n, v_prime)?;
    check_vertices(n, &[v])?;
    if v_prime.contains(&v) {
        return Err(Error::VertexInSet(v));
    }
    if lambda0.is_empty() {
        return Ok(false);
    }
    let cols = complement_of(&sorted_unique(v_prime), n);
    let pos = cols.iter().position(|&c| c == v).expect("v lies in the complement");
    let block = spectrum.block(lambda0.indices(), &cols);
    let null = linalg::svd(&block).null_space(spectrum.tol());
    let component = linalg::norm(null.row(pos));
    Ok(component <= spectrum.tol())
}

/// `rank U[Λ₀ᶜ, vertices]`, the rank function of the dependence matroid.
pub fn matroid_rank<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    vertices: &[usize],
) -> usize {
    let rows = lambda0.complement(spectrum.n());
    linalg::rank(&spectrum.block(&rows, vertices), spectrum.tol())
}

/// Dependence through the column matroid of `U[Λ₀ᶜ, ·]`.
pub fn is_dependent_by_rank<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v_prime: &[usize],
    v: usize,
) -> Result<bool> {
    check_vertices(spectrum.n(), v_prime)?;
    check_vertices(spectrum.n(), &[v])?;
    if v_prime.contains(&v) {
        return Err(Error::VertexInSet(v));
    }
    let mut with_v = v_prime.to_vec();
    with_v.push(v);
    Ok(matroid_rank(spectrum, lambda0, &with_v) == matroid_rank(spectrum, lambda0, v_prime))
}

/// No member is dependent on the others.
pub fn is_independent<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    set: &[usize],
) -> Result<bool> {
    for (i, &v) in set.iter().enumerate() {
        let rest: Vec<usize> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
        if is_dependent(spectrum, lambda0, &rest, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_uniqueness_set<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v_prime: &[usize],
) -> bool {
    uniqueness_set(spectrum, lambda0, v_prime).is_ok()
}

/// Builds the uniqueness set with its cached complement inverse.
pub fn uniqueness_set<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v_prime: &[usize],
) -> Result<UniquenessSet<S>> {
    let n = spectrum.n();
    check_vertices(n, v_prime)?;
    let vertices = sorted_unique(v_prime);
    if vertices.len() + lambda0.len() != n {
        return Err(Error::NoUniquenessSet);
    }
    let complement = complement_of(&vertices, n);
    let block = spectrum.block(lambda0.indices(), &complement);
    if linalg::rank(&block, spectrum.tol()) < lambda0.len() {
        return Err(Error::NoUniquenessSet);
    }
    let complement_inverse = linalg::inverse(&block, spectrum.tol())?;
    Ok(UniquenessSet {
        vertices,
        complement,
        complement_inverse,
    })
}

/// All of 𝒰(Λ₀), lexicographically sorted.
pub fn enumerate_uniqueness_sets<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
) -> Result<Vec<UniquenessSet<S>>> {
    let n = spectrum.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "uniqueness-set enumeration",
            limit: ENUMERATION_LIMIT,
            n,
        });
    }
    if lambda0.len() > n {
        return Ok(Vec::new());
    }
    Ok((0..n)
        .combinations(n - lambda0.len())
        .filter_map(|vs| uniqueness_set(spectrum, lambda0, &vs).ok())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalVertexSet<S> {
    pub set: UniquenessSet<S>,
    pub rate: S,
}

/// Vertices ordered by ascending bandwidth, ties by index.
pub fn bandwidth_order<S: Scalar>(bandwidths: &[S], vertices: &[usize]) -> Vec<usize> {
    let mut order = vertices.to_vec();
    order.sort_by(|&a, &b| {
        bandwidths[a]
            .partial_cmp(&bandwidths[b])
            .expect("bandwidths are not NaN")
            .then(a.cmp(&b))
    });
    order
}

/// Minimum-weight basis of the dependence matroid, rate `2·Σ_{V₀} ℬ`.
pub fn greedy_minimal_vertex_set<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    bandwidths: &[S],
) -> Result<MinimalVertexSet<S>> {
    let n = spectrum.n();
    if bandwidths.len() != n {
        return Err(Error::Dimension(format!(
            "{} bandwidths for {n} vertices",
            bandwidths.len()
        )));
    }
    let target = n.checked_sub(lambda0.len()).ok_or(Error::NoUniquenessSet)?;
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    for v in bandwidth_order(bandwidths, &(0..n).collect::<Vec<_>>()) {
        if chosen.len() == target {
            break;
        }
        if !is_dependent(spectrum, lambda0, &chosen, v)? {
            chosen.push(v);
        }
    }
    let set = uniqueness_set(spectrum, lambda0, &chosen)?;
    let rate = S::lit(2.0) * set.vertices().iter().map(|&v| bandwidths[v]).sum::<S>();
    Ok(MinimalVertexSet { set, rate })
}

/// `M` with `M[V₀,·] = I` and `M[V₀ᶜ,·] = −U[Λ₀,V₀ᶜ]⁻¹·U[Λ₀,V₀]`.
pub fn extension_matrix<S: Scalar>(
    spectrum: &Spectrum<S>,
    lambda0: &FrequencySubset,
    v0: &UniquenessSet<S>,
) -> Matrix<S> {
    let n = spectrum.n();
    let m = v0.vertices().len();
    let mut out = Matrix::zeros(n, m);
    for (j, &v) in v0.vertices().iter().enumerate() {
        out[(v, j)] = S::one();
    }
    if lambda0.is_empty() {
        return out;
    }
    let coupling = v0
        .complement_inverse()
        .mul(&spectrum.block(lambda0.indices(), v0.vertices()))
        .expect("conforming blocks");
    for (q, &w) in v0.complement().iter().enumerate() {
        for j in 0..m {
            out[(w, j)] = -coupling[(q, j)];
        }
    }
    out
}
