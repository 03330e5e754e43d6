//! Exact linear algebra over the rationals.
//!
//! Elimination always pivots on the leftmost nonzero column and the first row
//! with a nonzero entry there, so every echelon form, kernel basis and
//! particular solution produced here is reproducible.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

/// `y += c * x`
pub fn axpy(y: &mut [Q], c: &Q, x: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

/// A subspace of `Q^dim` held as rows in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_rows<I: IntoIterator<Item = Vec<Q>>>(dim: usize, rows: I) -> Self {
        let mut e = Echelon::new(dim);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot, in increasing order.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.dim];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.dim).filter(|&c| !is_pivot[c]).collect()
    }

    /// Clears every pivot column of `v`, leaving the canonical representative
    /// of `v` modulo the subspace.
    pub fn reduce(&self, v: &mut [Q]) {
        debug_assert_eq!(v.len(), self.dim);
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -v[p].clone();
                axpy(v, &c, row);
            }
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        is_zero_vec(&w)
    }

    /// Adds `v` to the spanning set. Returns false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<Q>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match echelon dimension");
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = -row[p].clone();
                axpy(row, &c, &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    /// Coordinates of `v` with respect to the echelon rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let coords: Vec<Q> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut w = v.to_vec();
        for (row, c) in self.rows.iter().zip(&coords) {
            axpy(&mut w, &-c.clone(), row);
        }
        is_zero_vec(&w).then_some(coords)
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<Q>>,
}

/// Column preference used when picking a particular solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ColumnOrder {
    /// Pivot on the lowest-index unknowns; free unknowns are set to zero.
    #[default]
    Forward,
    /// Same rule applied to the unknowns in reverse order.
    Reverse,
}

impl Matrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Matrix { nrows, ncols, data: vec![zero_vec(ncols); nrows] }
    }

    pub fn from_rows(ncols: usize, data: Vec<Vec<Q>>) -> Self {
        assert!(data.iter().all(|r| r.len() == ncols), "ragged matrix rows");
        Matrix { nrows: data.len(), ncols, data }
    }

    pub fn from_columns(nrows: usize, cols: &[Vec<Q>]) -> Self {
        let mut m = Matrix::zeros(nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "ragged matrix columns");
            for (i, x) in col.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Q::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Q> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_columns(self.ncols, &self.data)
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.ncols);
        self.data
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Matrix::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                axpy(&mut out.data[i], a, &other.data[k]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vec(r))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.nrows {
                break;
            }
            let Some(p) = (r..self.nrows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = -row[c].clone();
                    axpy(row, &f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix { nrows: self.nrows, ncols: self.ncols, data: m }, pivots)
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.ncols, self.data.iter().cloned()).rank()
    }

    /// Basis of the right kernel, one vector per free column in increasing order.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(self.ncols);
            v[f] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.data[i][f].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// A particular solution of `self * x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        self.solve_ordered(b, ColumnOrder::Forward)
    }

    pub fn solve_ordered(&self, b: &[Q], order: ColumnOrder) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.nrows);
        let perm: Vec<usize> = match order {
            ColumnOrder::Forward => (0..self.ncols).collect(),
            ColumnOrder::Reverse => (0..self.ncols).rev().collect(),
        };
        let aug: Vec<Vec<Q>> = self
            .data
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r: Vec<Q> = perm.iter().map(|&j| row[j].clone()).collect();
                r.push(bi.clone());
                r
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(self.ncols + 1, aug).rref();
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = zero_vec(self.ncols);
        for (i, &p) in pivots.iter().enumerate() {
            x[perm[p]] = r.data[i][self.ncols].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        let aug: Vec<Vec<Q>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        let (r, pivots) = Matrix::from_rows(2 * n, aug).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = r.data.into_iter().map(|row| row[n..].to_vec()).collect();
        Some(Matrix { nrows: n, ncols: n, data })
    }
}
