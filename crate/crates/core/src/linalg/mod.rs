//! Exact integer and rational linear algebra.
//!
//! Everything here works over arbitrary-precision integers. Ranks use
//! fraction-free (Bareiss) elimination; kernels and affine solves use reduced
//! row echelon form over the rationals. The [`small`] submodule offers a
//! checked `i128` fast path that callers fall back from on overflow.

pub mod small;
mod snf;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use snf::{smith_diagonal, smith_normal_form, SnfResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix of shape {rows}x{cols} needs {expected} entries, got {found}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        found: usize,
    },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("column index {index} out of range for {cols} columns")]
    ColumnOutOfRange { index: usize, cols: usize },
}

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape {
                rows,
                cols,
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to give zero-row matrices a width.
    pub fn from_rows<T>(rows: &[Vec<T>], cols: usize) -> Result<Self, LinalgError>
    where
        T: Clone + Into<BigInt>,
    {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors, each of length `dim`.
    pub fn from_columns<T>(columns: &[Vec<T>], dim: usize) -> Result<Self, LinalgError>
    where
        T: Clone + Into<BigInt>,
    {
        Ok(Self::from_rows(columns, dim)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Submatrix keeping the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out[(r, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Dimension(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Determinant by Bareiss elimination. `None` for non-square input.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Some(BigInt::zero());
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Some(sign * &a[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Some(d) if d.abs().is_one())
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.entries[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Vector of exact rationals. `BigRational` keeps every entry normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn from_ints<T: Into<BigInt>>(v: impl IntoIterator<Item = T>) -> Self {
        RatVector(
            v.into_iter()
                .map(|x| BigRational::from_integer(x.into()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Integer entries if every denominator is one.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect()
    }

    /// Scales to coprime integer entries with the first nonzero entry positive.
    pub fn primitive(&self) -> Vec<BigInt> {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|q| q.numer() * (&lcm / q.denom()))
            .collect();
        normalize_primitive(ints)
    }
}

impl Serialize for RatVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        strs.serialize(s)
    }
}

/// Divides out the content and flips the sign so the first nonzero entry is positive.
pub fn normalize_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let flip = v
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    for x in &mut v {
        *x = &*x / &g;
        if flip {
            *x = -&*x;
        }
    }
    v
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    rank_of_rows(&m.to_rows(), m.cols())
}

/// Rank of a list of rows of length `cols`, trying machine integers first.
pub(crate) fn rank_of_rows(rows: &[Vec<BigInt>], cols: usize) -> usize {
    let mut flat = Vec::with_capacity(rows.len() * cols);
    let fits = rows
        .iter()
        .flatten()
        .all(|x| x.to_i64().map(|v| flat.push(v)).is_some());
    if fits {
        let refs: Vec<&[i64]> = flat.chunks(cols.max(1)).take(rows.len()).collect();
        if let Some(r) = small::rank_checked(&refs, cols) {
            return r;
        }
    }
    bareiss_rank(rows.to_vec())
}

pub(crate) fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

/// Reduced row echelon form over Q. Returns the reduced rows and pivot columns.
fn rref(rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a = rows;
    let n = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let factor = a[i][c].clone();
                for j in 0..a[i].len() {
                    let v = &factor * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn to_rational_rows(m: &IntMatrix) -> Vec<Vec<BigRational>> {
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Basis of `{x : Mx = 0}`, one vector per free column, each scaled to coprime
/// integers with the first nonzero entry positive.
pub fn kernel_basis(m: &IntMatrix) -> Vec<RatVector> {
    let cols = m.cols();
    let (reduced, pivots) = rref(to_rational_rows(m), cols);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    (0..cols)
        .filter(|c| !pivot_set.contains(c))
        .map(|free| {
            let mut x = vec![BigRational::zero(); cols];
            x[free] = BigRational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -reduced[row][free].clone();
            }
            RatVector::from_ints(RatVector(x).primitive())
        })
        .collect()
}

/// Some exact solution of `Ax = b` with `x_i = 0` for `i` in `fixed_zero`;
/// free variables are set to zero. `Ok(None)` if the system is inconsistent.
pub fn solve_affine(
    a: &IntMatrix,
    b: &RatVector,
    fixed_zero: &BTreeSet<usize>,
) -> Result<Option<RatVector>, LinalgError> {
    if b.dim() != a.rows() {
        return Err(LinalgError::Dimension(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.dim(),
            a.rows()
        )));
    }
    if let Some(&index) = fixed_zero.iter().find(|&&i| i >= a.cols()) {
        return Err(LinalgError::ColumnOutOfRange {
            index,
            cols: a.cols(),
        });
    }
    let live: Vec<usize> = (0..a.cols()).filter(|c| !fixed_zero.contains(c)).collect();
    let reduced_a = a.select_columns(&live);
    let augmented: Vec<Vec<BigRational>> = to_rational_rows(&reduced_a)
        .into_iter()
        .zip(&b.0)
        .map(|(mut row, rhs)| {
            row.push(rhs.clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(augmented, live.len() + 1);
    if pivots.last() == Some(&live.len()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[live[pc]] = reduced[row][live.len()].clone();
    }
    Ok(Some(RatVector(x)))
}
