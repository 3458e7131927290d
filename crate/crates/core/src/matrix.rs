//! Dense kernels for small nonnegative matrices.
//!
//! Everything here is a pure function of its inputs. Matrices are stored
//! row-major; reductions always run in index order so results are
//! bit-reproducible across runs.

use std::fmt;
use std::ops::{Deref, DerefMut, Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default tolerance for column-sum classification.
pub const STOCHASTIC_TOL: f64 = 1e-9;
/// Default residual tolerance for [`power_iteration`].
pub const POWER_TOL: f64 = 1e-10;
/// Default iteration budget for [`power_iteration`].
pub const POWER_MAX_ITER: usize = 100_000;
/// Pivots at or below this fraction of the largest entry count as zero.
pub const PIVOT_THRESHOLD: f64 = 1e-12;

/// A vector of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(Vector(entries))
    }

    pub fn zeros(len: usize) -> Self {
        Vector(vec![0.0; len])
    }

    /// The uniform probability vector `(1/len, ..., 1/len)`.
    pub fn uniform(len: usize) -> Self {
        Vector(vec![1.0 / len as f64; len])
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![0.0; len];
        v[index] = 1.0;
        Vector(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn norm1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Vector {
        Vector(self.0.iter().map(|v| v * factor).collect())
    }

    /// `‖self − other‖∞`. Panics on length mismatch.
    pub fn dist_inf(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        self.0
            .iter()
            .zip(&other.0)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn kron(&self, other: &Vector) -> Vector {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            out.extend(other.0.iter().map(|b| a * b));
        }
        Vector(out)
    }
}

impl Deref for Vector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vector> for Vec<f64> {
    fn from(v: Vector) -> Self {
        v.0
    }
}

/// Dense row-major matrix of finite reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims("matrix shape", 1, 0));
        }
        if data.len() != rows * cols {
            return Err(Error::dims("matrix entries", rows * cols, data.len()));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::dims("matrix row length", cols, row.len()));
            }
            data.extend_from_slice(row);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be non-empty");
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// The all-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![1.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (s, v) in sums.iter_mut().zip(self.row(i)) {
                *s += v;
            }
        }
        sums
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, factor: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Entrywise `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Matrix, b: f64) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    /// `I − self`.
    pub fn identity_minus(&self) -> Result<Matrix> {
        self.require_square()?;
        Ok(Matrix::identity(self.rows).axpby(1.0, self, -1.0))
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.cols {
            return Err(Error::dims("matrix-vector product", self.cols, x.len()));
        }
        Ok(Vector(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::dims("matrix product", self.cols, other.rows));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(i * other.rows + p, j * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        out
    }

    /// Top-left `k×k` block.
    pub fn leading_block(&self, k: usize) -> Matrix {
        let mut out = Matrix::zeros(k, k);
        for i in 0..k {
            out.data[i * k..(i + 1) * k].copy_from_slice(&self.row(i)[..k]);
        }
        out
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Fails with the first entry below `−tol`.
    pub fn require_nonnegative(&self, tol: f64) -> Result<()> {
        match self.data.iter().position(|&v| v < -tol) {
            None => Ok(()),
            Some(k) => Err(Error::NegativeEntry {
                row: k / self.cols,
                col: k % self.cols,
                value: self.data[k],
            }),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:.6}")).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StochasticTag {
    ColumnStochastic,
    ColumnSubstochastic,
    NotColumnNonexpansive,
}

/// Column-sum classification of a square nonnegative matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticClass {
    pub tag: StochasticTag,
    pub column_sums: Vec<f64>,
    pub tolerance: f64,
}

impl StochasticClass {
    pub fn is_stochastic(&self) -> bool {
        self.tag == StochasticTag::ColumnStochastic
    }

    pub fn is_substochastic(&self) -> bool {
        self.tag == StochasticTag::ColumnSubstochastic
    }

    /// Every column sums to strictly less than one.
    pub fn all_columns_deficient(&self) -> bool {
        self.column_sums.iter().all(|&s| s < 1.0 - self.tolerance)
    }

    /// No column sum exceeds one.
    pub fn columns_at_most_one(&self) -> bool {
        self.column_sums.iter().all(|&s| s <= 1.0 + self.tolerance)
    }
}

pub fn classify_columns(m: &Matrix, tol: f64) -> Result<StochasticClass> {
    m.require_square()?;
    m.require_nonnegative(tol)?;
    let column_sums = m.column_sums();
    let tag = if column_sums.iter().all(|s| (s - 1.0).abs() <= tol) {
        StochasticTag::ColumnStochastic
    } else if column_sums.iter().all(|&s| s <= 1.0 + tol)
        && column_sums.iter().any(|&s| s < 1.0 - tol)
    {
        StochasticTag::ColumnSubstochastic
    } else {
        StochasticTag::NotColumnNonexpansive
    };
    Ok(StochasticClass {
        tag,
        column_sums,
        tolerance: tol,
    })
}

/// Dominant eigenpair of a nonnegative matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub eigenvalue: f64,
    /// Nonnegative, 1-norm one.
    pub eigenvector: Vector,
    pub iterations: usize,
    /// `‖M·v − λ·v‖∞`.
    pub residual: f64,
}

/// Power iteration from the uniform start vector, renormalized in the
/// 1-norm each step. The eigenvalue estimate is `‖Mv‖₁` for `‖v‖₁ = 1`.
pub fn power_iteration(m: &Matrix, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    m.require_square()?;
    m.require_nonnegative(0.0)?;
    let n = m.rows();
    let mut v = Vector::uniform(n);
    let mut residual = f64::INFINITY;
    for iterations in 0..=max_iter {
        let w = m.mul_vec(&v)?;
        let lambda = w.norm1();
        residual = w
            .iter()
            .zip(v.iter())
            .fold(0.0, |r, (a, b)| f64::max(r, (a - lambda * b).abs()));
        if residual <= tol {
            return Ok(SpectralResult {
                eigenvalue: lambda,
                eigenvector: v,
                iterations,
                residual,
            });
        }
        // lambda > 0 here: a zero image would have zero residual
        v = w.scaled(1.0 / lambda);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual,
    })
}

/// Gaussian elimination with partial pivoting.
pub fn solve_linear(n: &Matrix, b: &[f64]) -> Result<Vector> {
    n.require_square()?;
    let dim = n.rows();
    if b.len() != dim {
        return Err(Error::dims("right-hand side", dim, b.len()));
    }
    let threshold = PIVOT_THRESHOLD * n.max_abs();
    let mut a = n.clone();
    let mut x = b.to_vec();
    for k in 0..dim {
        let p = pivot_row(&a, k);
        let pivot = a[(p, k)];
        if pivot.abs() <= threshold {
            return Err(Error::SingularMatrix { step: k, pivot });
        }
        if p != k {
            swap_rows(&mut a, p, k);
            x.swap(p, k);
        }
        for i in k + 1..dim {
            let f = a[(i, k)] / pivot;
            if f == 0.0 {
                continue;
            }
            for j in k..dim {
                a[(i, j)] -= f * a[(k, j)];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..dim).rev() {
        let tail: f64 = (k + 1..dim).map(|j| a[(k, j)] * x[j]).sum();
        x[k] = (x[k] - tail) / a[(k, k)];
    }
    Vector::new(x)
}

/// Determinant by elimination with partial pivoting; exact zero when a
/// pivot column vanishes.
pub fn determinant(m: &Matrix) -> Result<f64> {
    m.require_square()?;
    let dim = m.rows();
    let mut a = m.clone();
    let mut det = 1.0;
    for k in 0..dim {
        let p = pivot_row(&a, k);
        let pivot = a[(p, k)];
        if pivot == 0.0 {
            return Ok(0.0);
        }
        if p != k {
            swap_rows(&mut a, p, k);
            det = -det;
        }
        det *= pivot;
        for i in k + 1..dim {
            let f = a[(i, k)] / pivot;
            for j in k..dim {
                a[(i, j)] -= f * a[(k, j)];
            }
        }
    }
    Ok(det)
}

/// `(det N[..1,..1], det N[..2,..2], …, det N)`, each from a fresh elimination.
pub fn leading_principal_minors(n: &Matrix) -> Result<Vector> {
    n.require_square()?;
    (1..=n.rows())
        .map(|k| determinant(&n.leading_block(k)))
        .collect::<Result<Vec<_>>>()
        .and_then(Vector::new)
}

/// Wielandt's bound `(N−1)² + 1` on the exponent at which a primitive
/// `N×N` matrix first becomes positive.
pub fn wielandt_bound(n: usize) -> usize {
    (n - 1) * (n - 1) + 1
}

/// Whether some power `M^k`, `1 ≤ k ≤ max_exp`, is entrywise positive.
/// Works on the zero pattern with boolean products.
pub fn is_positive_power(m: &Matrix, max_exp: usize) -> Result<bool> {
    m.require_square()?;
    m.require_nonnegative(0.0)?;
    let n = m.rows();
    let pattern: Vec<bool> = m.as_slice().iter().map(|&v| v > 0.0).collect();
    let mut power = pattern.clone();
    for k in 1..=max_exp {
        if power.iter().all(|&b| b) {
            return Ok(true);
        }
        if k == max_exp {
            break;
        }
        let mut next = vec![false; n * n];
        for i in 0..n {
            for l in 0..n {
                if !power[i * n + l] {
                    continue;
                }
                for j in 0..n {
                    next[i * n + j] |= pattern[l * n + j];
                }
            }
        }
        if next == power {
            // the pattern sequence is stuck at a non-positive fixed point
            return Ok(false);
        }
        power = next;
    }
    Ok(false)
}

fn pivot_row(a: &Matrix, k: usize) -> usize {
    let mut best = k;
    for i in k + 1..a.rows() {
        if a[(i, k)].abs() > a[(best, k)].abs() {
            best = i;
        }
    }
    best
}

fn swap_rows(a: &mut Matrix, p: usize, q: usize) {
    let cols = a.cols;
    for j in 0..cols {
        a.data.swap(p * cols + j, q * cols + j);
    }
}
