//! Graphs, shift operators, their eigendecomposition and the graph Fourier transform.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub a: usize,
    pub b: usize,
    pub weight: S,
}

/// Undirected weighted graph without self-loops.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphModel<S> {
    n: usize,
    edges: Vec<Edge<S>>,
    labels: Vec<String>,
}

impl<S: Scalar> GraphModel<S> {
    /// Labels default to `v1 … vn`.
    pub fn new(n: usize, edges: Vec<Edge<S>>, labels: Option<Vec<String>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        for e in &edges {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has an endpoint outside 0..{n}",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {}", e.a)));
            }
            if !(e.weight > S::zero()) || !e.weight.is_finite() {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) has non-positive weight",
                    e.a, e.b
                )));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::InvalidGraph(format!("{} labels for {n} vertices", l.len())))
            }
            Some(l) => l,
            None => (1..=n).map(|i| format!("v{i}")).collect(),
        };
        Ok(GraphModel { n, edges, labels })
    }

    /// Unit-weight graph from index pairs.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .map(|&(a, b)| Edge { a, b, weight: S::one() })
            .collect();
        Self::new(n, edges, None)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn weight_matrix(&self) -> Matrix<S> {
        let mut w = Matrix::zeros(self.n, self.n);
        for e in &self.edges {
            w[(e.a, e.b)] += e.weight;
            w[(e.b, e.a)] += e.weight;
        }
        w
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ShiftKind<S> {
    Laplacian,
    Adjacency,
    Custom(Matrix<S>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftKindTag {
    Laplacian,
    Adjacency,
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftOperator<S> {
    pub matrix: Matrix<S>,
    pub kind: ShiftKindTag,
}

pub fn build_shift_operator<S: Scalar>(
    graph: &GraphModel<S>,
    kind: &ShiftKind<S>,
) -> Result<ShiftOperator<S>> {
    let n = graph.n_vertices();
    let (matrix, tag) = match kind {
        ShiftKind::Laplacian => {
            let w = graph.weight_matrix();
            let mut l = w.scale(-S::one());
            for i in 0..n {
                l[(i, i)] = w.row(i).iter().copied().sum();
            }
            (l, ShiftKindTag::Laplacian)
        }
        ShiftKind::Adjacency => (graph.weight_matrix(), ShiftKindTag::Adjacency),
        ShiftKind::Custom(m) => {
            if m.rows() != n || m.cols() != n {
                return Err(Error::Dimension(format!(
                    "custom shift is {}x{}, graph has {n} vertices",
                    m.rows(),
                    m.cols()
                )));
            }
            (m.clone(), ShiftKindTag::Custom)
        }
    };
    let asym = matrix.max_abs_diff(&matrix.transpose());
    if asym > S::rank_tolerance() * matrix.max_abs().max(S::one()) {
        return Err(Error::NotSymmetric(asym.to_f64_lossy()));
    }
    Ok(ShiftOperator { matrix, kind: tag })
}

/// Eigenvalues in ascending order and the matching orthonormal eigenvector rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<S> {
    eigenvalues: Vec<S>,
    u: Matrix<S>,
    tol: S,
}

impl<S: Scalar> Spectrum<S> {
    /// Wraps precomputed rows after checking orthonormality; rows are kept in
    /// the given order.
    pub fn from_rows(eigenvalues: Vec<S>, u: Matrix<S>, tol: S) -> Result<Self> {
        let n = eigenvalues.len();
        if u.rows() != n || u.cols() != n {
            return Err(Error::Dimension("U must be n x n".into()));
        }
        let gram = u.mul(&u.transpose())?;
        if gram.max_abs_diff(&Matrix::identity(n)) > S::lit(1e3) * S::epsilon().sqrt() {
            return Err(Error::Dimension("rows of U are not orthonormal".into()));
        }
        Ok(Spectrum { eigenvalues, u, tol })
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[S] {
        &self.eigenvalues
    }

    /// `U`, one eigenvector per row.
    pub fn u(&self) -> &Matrix<S> {
        &self.u
    }

    pub fn row(&self, freq: usize) -> &[S] {
        self.u.row(freq)
    }

    pub fn tol(&self) -> S {
        self.tol
    }

    /// `U[freqs, vertices]`.
    pub fn block(&self, freqs: &[usize], vertices: &[usize]) -> Matrix<S> {
        self.u.select(freqs, vertices)
    }

    pub fn frequency_label(&self, freq: usize) -> String {
        format!("λ{}", freq + 1)
    }

    /// Size of the eigenvalue cluster each frequency index belongs to.
    pub fn multiplicities(&self) -> Vec<usize> {
        let scale = self
            .eigenvalues
            .iter()
            .fold(S::one(), |m, &x| m.max(x.abs()));
        let close = |a: S, b: S| (a - b).abs() <= S::lit(1e-8).max(self.tol) * scale;
        self.eigenvalues
            .iter()
            .map(|&x| self.eigenvalues.iter().filter(|&&y| close(x, y)).count())
            .collect()
    }

    pub fn has_repeated_eigenvalues(&self) -> bool {
        self.multiplicities().iter().any(|&m| m > 1)
    }
}

pub fn eigendecompose<S: Scalar>(shift: &ShiftOperator<S>, tol: S) -> Result<Spectrum<S>> {
    let n = shift.matrix.rows();
    let (vals, vecs) = linalg::symmetric_eigen(&shift.matrix)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap().then(a.cmp(&b)));
    let eigenvalues: Vec<S> = order.iter().map(|&i| vals[i]).collect();
    let mut u = Matrix::zeros(n, n);
    for (r, &c) in order.iter().enumerate() {
        let col = vecs.column(c);
        let flip = col
            .iter()
            .find(|x| x.abs() > tol)
            .is_some_and(|&x| x < S::zero());
        for (j, &x) in col.iter().enumerate() {
            u[(r, j)] = if flip { -x } else { x };
        }
    }
    Ok(Spectrum { eigenvalues, u, tol })
}

/// `u_λ · x`.
pub fn gft<S: Scalar>(spectrum: &Spectrum<S>, snapshot: &[S], freq: usize) -> Result<S> {
    let n = spectrum.n();
    if freq >= n {
        return Err(Error::OutOfRange {
            what: "frequency",
            index: freq,
            len: n,
        });
    }
    if snapshot.len() != n {
        return Err(Error::Dimension(format!(
            "snapshot has length {}, expected {n}",
            snapshot.len()
        )));
    }
    Ok(linalg::dot(spectrum.row(freq), snapshot))
}
