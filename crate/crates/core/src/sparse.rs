//! Compressed sparse row matrices with deterministic construction order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_traits::{One, Zero};
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Scalars the sparse kernels operate on (`f64` and [`C64`]).
pub trait Scalar:
    nalgebra::Scalar
    + Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
{
    fn conj(self) -> Self;
    fn modulus(self) -> f64;
    fn from_real(x: f64) -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.abs()
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        x
    }
}

impl Scalar for C64 {
    #[inline]
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn from_real(x: f64) -> Self {
        C64::new(x, 0.0)
    }
}

/// Row-major compressed sparse matrix. Column indices within a row are
/// strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            indptr: vec![0; nrows + 1],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            nrows: n,
            ncols: n,
            indptr: (0..=n).collect(),
            indices: (0..n).collect(),
            data: vec![T::one(); n],
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        Self::from_triplets(
            diag.len(),
            diag.len(),
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)),
        )
    }

    /// Build from `(row, col, value)` triplets. Duplicates are summed and
    /// exact zeros dropped.
    pub fn from_triplets<I>(nrows: usize, ncols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); nrows];
        for (r, c, v) in triplets {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            rows[r].push((c, v));
        }
        let mut out = Self::zeros(nrows, ncols);
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut acc = T::zero();
                while k < row.len() && row[k].0 == c {
                    acc += row[k].1;
                    k += 1;
                }
                if acc != T::zero() {
                    out.indices.push(c);
                    out.data.push(acc);
                }
            }
            out.indptr[r + 1] = out.indices.len();
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Entries of row `r` as `(col, value)` pairs.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.indptr[r]..self.indptr[r + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.data[span].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.indptr[r]..self.indptr[r + 1];
        match self.indices[span.clone()].binary_search(&c) {
            Ok(k) => self.data[span.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().map(|(r, c, v)| (r, c, f(v))),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v = *v * s);
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(self.ncols, self.nrows, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.triplets().map(|(r, c, v)| (c, r, v.conj())),
        )
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: T, other: &Self, beta: T) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets()
                .map(|(r, c, v)| (r, c, alpha * v))
                .chain(other.triplets().map(|(r, c, v)| (r, c, beta * v))),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.lin_comb(T::one(), other, -T::one())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Shape(alloc::format!(
                "{}x{} vs {}x{}",
                self.nrows,
                self.ncols,
                other.nrows,
                other.ncols
            )));
        }
        Ok(())
    }

    /// Sparse product `self * other` (row-wise Gustavson accumulation).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(Error::Shape(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows,
                self.ncols,
                other.nrows,
                other.ncols
            )));
        }
        let mut acc = vec![T::zero(); other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut cols: Vec<usize> = Vec::new();
        let mut out = Self::zeros(self.nrows, other.ncols);
        for r in 0..self.nrows {
            cols.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if !touched[c] {
                        touched[c] = true;
                        cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            cols.sort_unstable();
            for &c in &cols {
                let v = acc[c];
                if v != T::zero() {
                    out.indices.push(c);
                    out.data.push(v);
                }
                acc[c] = T::zero();
                touched[c] = false;
            }
            out.indptr[r + 1] = out.indices.len();
        }
        Ok(out)
    }

    /// Drop entries with modulus at or below `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self::from_triplets(
            self.nrows,
            self.ncols,
            self.triplets().filter(|&(_, _, v)| v.modulus() > tol),
        )
    }

    /// `y = self * x`.
    pub fn matvec(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (r, yr) in y.iter_mut().enumerate() {
            let mut s = T::zero();
            for k in self.indptr[r]..self.indptr[r + 1] {
                s += self.data[k] * x[self.indices[k]];
            }
            *yr = s;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.matvec(x, &mut y);
        y
    }

    /// Dense product `self * m`.
    pub fn mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(self.ncols, m.nrows());
        let mut out = DMatrix::<T>::zeros(self.nrows, m.ncols());
        for j in 0..m.ncols() {
            let col = m.column(j);
            for r in 0..self.nrows {
                let mut s = T::zero();
                for k in self.indptr[r]..self.indptr[r + 1] {
                    s += self.data[k] * col[self.indices[k]];
                }
                out[(r, j)] = s;
            }
        }
        out
    }

    /// Dense product `m * self`.
    pub fn left_mul_dense(&self, m: &DMatrix<T>) -> DMatrix<T> {
        assert_eq!(m.ncols(), self.nrows);
        let mut out = DMatrix::<T>::zeros(m.nrows(), self.ncols);
        for r in 0..self.nrows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let (c, v) = (self.indices[k], self.data[k]);
                for i in 0..m.nrows() {
                    let x = m[(i, r)];
                    out[(i, c)] += x * v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut out = DMatrix::<T>::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.triplets() {
            out[(r, c)] = v;
        }
        out
    }

    /// Rows `rows` and columns `cols` (in the given orders) as a new matrix.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_pos = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        Self::from_triplets(
            rows.len(),
            cols.len(),
            rows.iter().enumerate().flat_map(|(i, &r)| {
                let col_pos = &col_pos;
                self.row(r)
                    .filter(move |&(c, _)| col_pos[c] != usize::MAX)
                    .map(move |(c, v)| (i, col_pos[c], v))
            }),
        )
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (p, q) = (other.nrows, other.ncols);
        Self::from_triplets(
            self.nrows * p,
            self.ncols * q,
            self.triplets().flat_map(|(r, c, a)| {
                other
                    .triplets()
                    .map(move |(r2, c2, b)| (r * p + r2, c * q + c2, a * b))
            }),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|v| {
                let m = v.modulus();
                m * m
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Upper bound on the spectral radius from absolute row sums.
    pub fn gershgorin_bound(&self) -> f64 {
        (0..self.nrows)
            .map(|r| self.row(r).map(|(_, v)| v.modulus()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl CsrMatrix<C64> {
    /// Real part, if every imaginary part is exactly zero.
    pub fn to_real(&self) -> Option<CsrMatrix<f64>> {
        if self.data.iter().any(|v| v.im != 0.0) {
            return None;
        }
        Some(self.map(|v| v.re))
    }
}

impl CsrMatrix<f64> {
    pub fn to_complex(&self) -> CsrMatrix<C64> {
        self.map(|v| C64::new(v, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_random(seed: u64, n: usize, m: usize) -> CsrMatrix<f64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) as f64 / (1u64 << 31) as f64 - 0.5
        };
        CsrMatrix::from_triplets(
            n,
            m,
            (0..n)
                .flat_map(|r| (0..m).map(move |c| (r, c)))
                .map(|(r, c)| (r, c, next()))
                .filter(|&(_, _, v)| v.abs() > 0.2),
        )
    }

    #[test]
    fn duplicates_are_summed_and_zeros_dropped() {
        let m = CsrMatrix::from_triplets(2, 2, [(0, 1, 1.0), (0, 1, 2.0), (1, 0, 1.0), (1, 0, -1.0)]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 0.0);
    }

    #[test]
    fn shape_errors() {
        let a = CsrMatrix::<f64>::identity(3);
        let b = CsrMatrix::<f64>::identity(2);
        assert!(matches!(a.matmul(&b), Err(Error::Shape(_))));
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn submatrix_and_kron() {
        let a = CsrMatrix::from_triplets(3, 3, [(0, 0, 1.0), (1, 2, 2.0), (2, 1, 3.0)]);
        let s = a.submatrix(&[2, 1], &[1, 2]);
        assert_eq!(s.to_dense(), DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 2.0]));
        let k = CsrMatrix::<f64>::identity(2).kron(&s);
        assert_eq!(k.nrows(), 4);
        assert_eq!(k.get(3, 3), 2.0);
        assert_eq!(k.get(2, 2), 3.0);
    }

    proptest! {
        #[test]
        fn matmul_matches_dense(seed in 0u64..10_000, n in 1usize..7, m in 1usize..7, p in 1usize..7) {
            let a = dense_random(seed, n, m);
            let b = dense_random(seed ^ 0xdead, m, p);
            let sparse = a.matmul(&b).unwrap().to_dense();
            let dense = a.to_dense() * b.to_dense();
            prop_assert!((sparse - dense).abs().max() < 1e-14);
            let x: Vec<f64> = (0..m).map(|i| i as f64 - 1.5).collect();
            let y = a.mul_vec(&x);
            let yd = a.to_dense() * nalgebra::DVector::from_vec(x);
            for i in 0..n {
                prop_assert!((y[i] - yd[i]).abs() < 1e-14);
            }
            let l = b.to_dense();
            let left = a.left_mul_dense(&dense_random(seed ^ 7, p, n).to_dense());
            let left_ref = dense_random(seed ^ 7, p, n).to_dense() * a.to_dense();
            prop_assert!((left - left_ref).abs().max() < 1e-13);
            let right = a.mul_dense(&l);
            prop_assert!((right - a.to_dense() * l).abs().max() < 1e-13);
        }
    }
}
