//! Dense matrices over ℚ with exact row reduction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{format_q, Q};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// An inconsistent row found while solving `A x = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    /// Index of the original equation whose reduced form reads `0 = residual`.
    pub equation: usize,
    pub residual: Q,
}

/// A subspace `W ⊆ ℚⁿ` with the quotient `ℚⁿ/W` coordinatized by the
/// non-pivot coordinates of a row-reduced spanning set.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// `q × n`, the projection onto quotient coordinates.
    pub projection: Matrix,
    /// `n × q`, a section of the projection.
    pub section: Matrix,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds from integer rows; `cols` is needed when there are no rows.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| crate::rational::q(x)).collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn column(v: Vec<Q>) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v }
    }

    /// The matrix sending basis vector `j` to `±e_{images[j]}`.
    pub fn permutation(images: &[usize], signs: Option<&[bool]>) -> Self {
        let n = images.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in images.iter().enumerate() {
            let neg = signs.map_or(false, |s| s[j]);
            m.data[i * n + j] = if neg { -Q::one() } else { Q::one() };
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Q) {
        let e = &mut self.data[i * self.cols + j];
        *e += v;
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Q] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, s: &Q) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; the left factor's index is the major one.
    pub fn kron(&self, other: &Matrix) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut m = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            m.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        m
    }

    pub fn hstack(blocks: &[&Matrix]) -> Self {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            m.paste(0, off, b);
            off += b.cols;
        }
        m
    }

    pub fn vstack(blocks: &[&Matrix]) -> Self {
        let cols = blocks.first().map_or(0, |b| b.cols);
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            m.paste(off, 0, b);
            off += b.rows;
        }
        m
    }

    pub fn block_diag(blocks: &[&Matrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.paste(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn paste(&mut self, row: usize, col: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows.start + i, cols.start + j).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self.get(idx[i], j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self.get(i, idx[j]).clone())
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols, None);
        Rref { matrix: m, pivots }
    }

    /// Gauss-Jordan on the first `pivot_cols` columns. Returns pivot columns;
    /// if `order` is given it tracks the original index of each row.
    fn reduce_in_place(&mut self, pivot_cols: usize, mut order: Option<&mut Vec<usize>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            if let Some(o) = order.as_deref_mut() {
                o.swap(r, p);
            }
            let inv = self.get(r, c).recip();
            if !inv.is_one() {
                for j in c..self.cols {
                    let idx = r * self.cols + j;
                    if !self.data[idx].is_zero() {
                        self.data[idx] = &self.data[idx] * &inv;
                    }
                }
            }
            let pivot_row: Vec<(usize, Q)> =
                (c..self.cols).filter_map(|j| {
                    let v = self.get(r, j);
                    (!v.is_zero()).then(|| (j, v.clone()))
                }).collect();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, v) in &pivot_row {
                    let idx = i * self.cols + j;
                    self.data[idx] -= &f * v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, in column order.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// Solves `A X = B` exactly. Free variables are set to zero.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix, Inconsistent> {
        assert_eq!(self.rows, rhs.rows, "rhs rows");
        let n = self.cols;
        let mut aug = Matrix::hstack(&[self, rhs]);
        let mut order: Vec<usize> = (0..self.rows).collect();
        let pivots = aug.reduce_in_place(n, Some(&mut order));
        for i in pivots.len()..aug.rows {
            for j in n..aug.cols {
                if !aug.get(i, j).is_zero() {
                    return Err(Inconsistent { equation: order[i], residual: aug.get(i, j).clone() });
                }
            }
        }
        let mut x = Matrix::zeros(n, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, aug.get(r, n + j).clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve(&Matrix::identity(self.rows)).ok()?;
        (self.rank() == self.rows).then_some(x)
    }

    /// Quotient of `ℚⁿ` by the row space of `self` (rows are spanning vectors).
    pub fn quotient_by_rows(&self) -> Quotient {
        let n = self.cols;
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let q = free.len();
        let mut projection = Matrix::zeros(q, n);
        let mut section = Matrix::zeros(n, q);
        for (k, &f) in free.iter().enumerate() {
            projection.set(k, f, Q::one());
            section.set(f, k, Q::one());
        }
        for (r, &p) in pivots.iter().enumerate() {
            for (k, &f) in free.iter().enumerate() {
                let v = matrix.get(r, f);
                if !v.is_zero() {
                    projection.set(k, p, -v.clone());
                }
            }
        }
        Quotient { projection, section }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_q).collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape {:?} * {:?}", self.shape(), rhs.shape());
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }
}
