//! Small dense linear algebra: row-major matrices, a cyclic Jacobi eigensolver,
//! a one-sided Jacobi SVD and LU with partial pivoting.
//!
//! Sizes at the design point are a few hundred at most, so every routine is
//! the plain O(n³) textbook form.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for j in 0..self.cols {
                out[j] += xi * self[(i, j)];
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[S]) -> Vec<S> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Submatrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn scale(&self, a: S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * a).collect(),
        }
    }

    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |m, &x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix<S>) -> S {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(S::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    fn frobenius_sq(&self) -> S {
        self.data.iter().map(|&x| x * x).sum()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Singular values at or below this are zero: `tol · max(σ_max, 1)`.
///
/// The floor of 1 makes the scale the unit norm of the orthonormal
/// eigenvector matrix, so a 1×1 block holding round-off is rank zero.
pub fn zero_threshold<S: Scalar>(sigma_max: S, tol: S) -> S {
    tol * sigma_max.max(S::one())
}

/// Eigenpairs of a symmetric matrix; eigenvectors are the columns of the
/// returned matrix. Order is unspecified.
pub fn symmetric_eigen<S: Scalar>(a: &Matrix<S>) -> Result<(Vec<S>, Matrix<S>)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension("eigen needs a square matrix".into()));
    }
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let total = m.frobenius_sq();
    let eps = S::epsilon();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut off = S::zero();
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += m[(p, q)] * m[(p, q)];
                }
            }
        }
        if off <= eps * eps * total || off == S::zero() {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == S::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (S::lit(2.0) * apq);
                let t = if theta == S::zero() {
                    S::one()
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt())
                };
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (m[(k, p)], m[(k, q)]);
                    m[(k, p)] = c * akp - s * akq;
                    m[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (m[(p, k)], m[(q, k)]);
                    m[(p, k)] = c * apk - s * aqk;
                    m[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenFailure(MAX_SWEEPS));
    }
    Ok(((0..n).map(|i| m[(i, i)]).collect(), v))
}

/// Right-singular data of a matrix from one-sided (Hestenes) Jacobi.
///
/// `v` is a full orthogonal `cols × cols` matrix; column `j` of `v` pairs
/// with `singular_values[j]`, and `u_sigma` holds `A·v` whose columns are
/// mutually orthogonal with norms equal to the singular values.
#[derive(Clone, Debug)]
pub struct Svd<S> {
    pub singular_values: Vec<S>,
    pub v: Matrix<S>,
    pub u_sigma: Matrix<S>,
}

impl<S: Scalar> Svd<S> {
    pub fn sigma_max(&self) -> S {
        self.singular_values
            .iter()
            .fold(S::zero(), |m, &s| m.max(s))
    }

    pub fn threshold(&self, tol: S) -> S {
        zero_threshold(self.sigma_max(), tol)
    }

    pub fn rank(&self, tol: S) -> usize {
        let thr = self.threshold(tol);
        self.singular_values.iter().filter(|&&s| s > thr).count()
    }

    /// Orthonormal null-space basis as the columns of a `cols × d` matrix.
    pub fn null_space(&self, tol: S) -> Matrix<S> {
        let thr = self.threshold(tol);
        let idx: Vec<usize> = (0..self.singular_values.len())
            .filter(|&j| self.singular_values[j] <= thr)
            .collect();
        let rows: Vec<usize> = (0..self.v.rows()).collect();
        self.v.select(&rows, &idx)
    }

    /// Minimum-norm least-squares solution of `A x = b` on the numerical range.
    pub fn solve_least_squares(&self, b: &[S], tol: S) -> Vec<S> {
        let thr = self.threshold(tol);
        let n = self.v.rows();
        let mut x = vec![S::zero(); n];
        for (j, &s) in self.singular_values.iter().enumerate() {
            if s <= thr {
                continue;
            }
            let proj: S = (0..self.u_sigma.rows())
                .map(|i| self.u_sigma[(i, j)] * b[i])
                .sum();
            let coef = proj / (s * s);
            for (k, xk) in x.iter_mut().enumerate() {
                *xk += coef * self.v[(k, j)];
            }
        }
        x
    }
}

pub fn svd<S: Scalar>(a: &Matrix<S>) -> Svd<S> {
    let (m, n) = (a.rows(), a.cols());
    let mut g = a.clone();
    let mut v = Matrix::identity(n);
    let eps = S::epsilon();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (S::zero(), S::zero(), S::zero());
                for i in 0..m {
                    let (gp, gq) = (g[(i, p)], g[(i, q)]);
                    alpha += gp * gp;
                    beta += gq * gq;
                    gamma += gp * gq;
                }
                if gamma == S::zero() || gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (S::lit(2.0) * gamma);
                let t = if zeta == S::zero() {
                    S::one()
                } else {
                    zeta.signum() / (zeta.abs() + (S::one() + zeta * zeta).sqrt())
                };
                let c = S::one() / (S::one() + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (gp, gq) = (g[(i, p)], g[(i, q)]);
                    g[(i, p)] = c * gp - s * gq;
                    g[(i, q)] = s * gp + c * gq;
                }
                for i in 0..n {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let singular_values = (0..n)
        .map(|j| (0..m).map(|i| g[(i, j)] * g[(i, j)]).sum::<S>().sqrt())
        .collect();
    Svd {
        singular_values,
        v,
        u_sigma: g,
    }
}

pub fn rank<S: Scalar>(a: &Matrix<S>, tol: S) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    svd(a).rank(tol)
}

/// LU factorization with partial pivoting, `P A = L U` packed in one matrix.
#[derive(Clone, Debug)]
pub struct Lu<S> {
    lu: Matrix<S>,
    perm: Vec<usize>,
}

impl<S: Scalar> Lu<S> {
    pub fn new(a: &Matrix<S>, tol: S) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::Dimension("LU needs a square matrix".into()));
        }
        let scale = a.max_abs().max(S::one());
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| lu[(i, k)].abs().partial_cmp(&lu[(j, k)].abs()).unwrap())
                .unwrap();
            if lu[(p, k)].abs() <= tol * scale {
                return Err(Error::Singular);
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                perm.swap(k, p);
            }
            for i in (k + 1)..n {
                let f = lu[(i, k)] / lu[(k, k)];
                lu[(i, k)] = f;
                for j in (k + 1)..n {
                    let d = f * lu[(k, j)];
                    lu[(i, j)] -= d;
                }
            }
        }
        Ok(Lu { lu, perm })
    }

    pub fn solve_vec(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.rows();
        let mut y: Vec<S> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let d = self.lu[(i, j)] * y[j];
                y[i] -= d;
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                let d = self.lu[(i, j)] * y[j];
                y[i] -= d;
            }
            y[i] /= self.lu[(i, i)];
        }
        y
    }

    pub fn solve(&self, b: &Matrix<S>) -> Matrix<S> {
        let mut out = Matrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve_vec(&b.column(j));
            for (i, xi) in x.into_iter().enumerate() {
                out[(i, j)] = xi;
            }
        }
        out
    }
}

pub fn inverse<S: Scalar>(a: &Matrix<S>, tol: S) -> Result<Matrix<S>> {
    Ok(Lu::new(a, tol)?.solve(&Matrix::identity(a.rows())))
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm<S: Scalar>(a: &[S]) -> S {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_symmetric(n: usize, vals: &[f64]) -> Matrix<f64> {
        let mut m = Matrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[(i, j)] = vals[k % vals.len()];
                m[(j, i)] = vals[k % vals.len()];
                k += 1;
            }
        }
        m
    }

    #[test]
    fn eigen_of_two_path() {
        let a = Matrix::from_rows(&[vec![1.0f64, -1.0], vec![-1.0, 1.0]]).unwrap();
        let (mut vals, _) = symmetric_eigen(&a).unwrap();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(vals[0].abs() < 1e-14 && (vals[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn svd_null_space_of_rank_one() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        let s = svd(&a);
        assert_eq!(s.rank(1e-9), 1);
        let ns = s.null_space(1e-9);
        assert_eq!(ns.cols(), 2);
        let prod = a.mul(&ns).unwrap();
        assert!(prod.max_abs() < 1e-12);
    }

    #[test]
    fn svd_of_empty_row_block_is_all_null() {
        let a: Matrix<f64> = Matrix::zeros(0, 3);
        assert_eq!(svd(&a).null_space(1e-9).cols(), 3);
    }

    #[test]
    fn lu_detects_singular() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert_eq!(Lu::new(&a, 1e-9).unwrap_err(), Error::Singular);
    }

    proptest! {
        #[test]
        fn eigen_reconstructs(n in 1usize..7, vals in prop::collection::vec(-5.0f64..5.0, 28)) {
            let a = random_symmetric(n, &vals);
            let (lam, v) = symmetric_eigen(&a).unwrap();
            let d = Matrix::from_fn(n, n, |i, j| if i == j { lam[i] } else { 0.0 });
            let back = v.mul(&d).unwrap().mul(&v.transpose()).unwrap();
            prop_assert!(back.max_abs_diff(&a) < 1e-10);
            let vtv = v.transpose().mul(&v).unwrap();
            prop_assert!(vtv.max_abs_diff(&Matrix::identity(n)) < 1e-12);
        }

        #[test]
        fn svd_factors(m in 1usize..6, n in 1usize..6, vals in prop::collection::vec(-3.0f64..3.0, 36)) {
            let a = Matrix::from_fn(m, n, |i, j| vals[i * 6 + j]);
            let s = svd(&a);
            let av = a.mul(&s.v).unwrap();
            prop_assert!(av.max_abs_diff(&s.u_sigma) < 1e-10);
            let vtv = s.v.transpose().mul(&s.v).unwrap();
            prop_assert!(vtv.max_abs_diff(&Matrix::identity(n)) < 1e-12);
        }

        #[test]
        fn lu_inverse(vals in prop::collection::vec(-3.0f64..3.0, 16)) {
            let mut a = Matrix::from_fn(4, 4, |i, j| vals[i * 4 + j]);
            for i in 0..4 { a[(i, i)] += 13.0; }
            let inv = inverse(&a, 1e-12).unwrap();
            prop_assert!(a.mul(&inv).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-12);
        }
    }
}
