//! Dense matrices over a [`Field`].
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a
//! minor of the input, which keeps rational entries from ballooning.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use super::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// `u vᵀ`.
    pub fn outer(u: &[S], v: &[S]) -> Self {
        let mut m = Self::zeros(u.len(), v.len());
        for (i, a) in u.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                let mut t = a.clone();
                t *= b;
                m[(i, j)] = t;
            }
        }
        m
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

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| {
                    let mut a = a.clone();
                    a *= c;
                    a
                })
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// `uᵀ M v`.
    pub fn bilinear(&self, u: &[S], v: &[S]) -> S {
        dot(u, &self.mul_vec(v))
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Exact determinant by Bareiss elimination.
    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(S::one());
        }
        let mut m = self.clone();
        let mut negate = false;
        let mut prev = S::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        negate = !negate;
                    }
                    None => return Ok(S::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let mut t = m[(i, j)].clone();
                    t *= &m[(k, k)];
                    let mut s = m[(i, k)].clone();
                    s *= &m[(k, j)];
                    t -= &s;
                    t /= &prev;
                    m[(i, j)] = t;
                }
                m[(i, k)] = S::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negate { -d } else { d })
    }

    /// Fraction-free row echelon form; returns the reduced matrix and the
    /// pivot columns in order.
    pub fn echelon(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prev = S::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(i) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(i, r);
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    // Bareiss still needs the scaling by the pivot
                    for j in c + 1..m.cols {
                        let mut t = m[(i, j)].clone();
                        t *= &m[(r, c)];
                        t /= &prev;
                        m[(i, j)] = t;
                    }
                    continue;
                }
                for j in c + 1..m.cols {
                    let mut t = m[(i, j)].clone();
                    t *= &m[(r, c)];
                    let mut s = m[(i, c)].clone();
                    s *= &m[(r, j)];
                    t -= &s;
                    t /= &prev;
                    m[(i, j)] = t;
                }
                m[(i, c)] = S::zero();
            }
            prev = m[(r, c)].clone();
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space in canonical form: one vector per
    /// non-pivot column, with a 1 in that column, 0 in the other free
    /// columns, ordered by free column.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (u, pivots) = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![S::zero(); self.cols];
            x[free] = S::one();
            for (k, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = S::zero();
                for j in pc + 1..self.cols {
                    if !x[j].is_zero() && !u[(k, j)].is_zero() {
                        let mut t = u[(k, j)].clone();
                        t *= &x[j];
                        acc += &t;
                    }
                }
                acc /= &u[(k, pc)];
                x[pc] = -acc;
            }
            basis.push(x);
        }
        basis
    }

    /// Reduced row echelon form with unit pivots; zero rows dropped.
    pub fn rref_rows(&self) -> Vec<Vec<S>> {
        let (u, pivots) = self.echelon();
        let mut rows: Vec<Vec<S>> = (0..pivots.len()).map(|k| u.row(k).to_vec()).collect();
        for k in (0..pivots.len()).rev() {
            let pc = pivots[k];
            let inv = rows[k][pc].inv();
            for a in rows[k].iter_mut() {
                *a *= &inv;
            }
            let (above, rest) = rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for row in above.iter_mut() {
                if row[pc].is_zero() {
                    continue;
                }
                let f = row[pc].clone();
                for (x, p) in row[pc..].iter_mut().zip(&pivot_row[pc..]) {
                    let mut t = p.clone();
                    t *= &f;
                    *x -= &t;
                }
            }
        }
        rows
    }

    /// Gauss-Jordan reduction with one inversion per pivot. Preferable to
    /// [`Matrix::rref_rows`] over prime fields, where division is costly.
    /// Returns the nonzero rows of the RREF and the pivot columns.
    pub fn gauss_jordan(&self) -> (Vec<Vec<S>>, Vec<usize>) {
        let mut rows = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(i) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(i, r);
            let inv = rows[r][c].inv();
            for a in rows[r][c..].iter_mut() {
                *a *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for j in c..self.cols {
                    if pivot_row[j].is_zero() {
                        continue;
                    }
                    let mut t = pivot_row[j].clone();
                    t *= &f;
                    row[j] -= &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let rows = aug.rref_rows();
        if rows.len() < n || rows.iter().enumerate().any(|(i, r)| !r[i].is_one()) {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for (i, r) in rows.iter().enumerate() {
            for j in 0..n {
                inv[(i, j)] = r[n + j].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

pub fn dot<S: Field>(u: &[S], v: &[S]) -> S {
    assert_eq!(u.len(), v.len());
    let mut acc = S::zero();
    for (a, b) in u.iter().zip(v) {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let mut t = a.clone();
        t *= b;
        acc += &t;
    }
    acc
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Field> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let mut t = a.clone();
                    t *= &other[(k, j)];
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }
}

impl<S: Field> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }
}

impl<S: Field> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }
}

impl<S: Field + fmt::Display> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
