//! Compressed sparse row storage for the lattice operators.
//!
//! Local Pauli embeddings, fermion bilinears and spin-chain Hamiltonians have
//! at most a handful of nonzeros per row, so every operator in the crate is
//! stored in this form and densified only for eigendecompositions.

use std::ops::{Add, AddAssign, Mul};

use nalgebra::{DMatrix, Scalar};
use num_complex::Complex64;
use num_traits::Zero;

/// Element types the sparse kernels work over (`f64` and `Complex64`).
pub trait Element:
    Scalar + Copy + Zero + Add<Output = Self> + Mul<Output = Self> + AddAssign
{
}
impl<T> Element for T where T: Scalar + Copy + Zero + Add<Output = T> + Mul<Output = T> + AddAssign {}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Element> CsrMatrix<T> {
    /// Builds a matrix from unordered `(row, col, value)` entries; duplicates
    /// are summed and exact zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, mut entries: Vec<(usize, usize, T)>) -> Self {
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<T> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in entries {
            assert!(
                r < nrows && c < ncols,
                "entry ({r}, {c}) outside {nrows}x{ncols}"
            );
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for r in 0..nrows {
            row_ptr[r + 1] += row_ptr[r];
        }
        let mut m = Self {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        };
        m.prune();
        m
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_triplets(
            n,
            n,
            diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect(),
        )
    }

    pub fn from_dense(m: &DMatrix<T>) -> Self {
        let mut entries = Vec::new();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let v = m[(i, j)];
                if !v.is_zero() {
                    entries.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m.nrows(), m.ncols(), entries)
    }

    fn prune(&mut self) {
        if self.values.iter().all(|v| !v.is_zero()) {
            return;
        }
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::with_capacity(self.col_idx.len());
        let mut values = Vec::with_capacity(self.values.len());
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                if !self.values[k].is_zero() {
                    col_idx.push(self.col_idx[k]);
                    values.push(self.values[k]);
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        self.row_ptr = row_ptr;
        self.col_idx = col_idx;
        self.values = values;
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`, columns ascending.
    pub fn row(&self, i: usize) -> (&[usize], &[T]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => T::zero(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.nrows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    /// `y = A x`.
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (r, out) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(r);
            let mut acc = T::zero();
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            *out = acc;
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Sparse product `self * other` with a dense scratch accumulator.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut acc = vec![T::zero(); other.ncols];
        let mut touched = vec![false; other.ncols];
        let mut row_cols: Vec<usize> = Vec::new();
        let mut row_ptr = vec![0usize; self.nrows + 1];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for r in 0..self.nrows {
            let (cols, vals) = self.row(r);
            for (&k, &a) in cols.iter().zip(vals) {
                let (ocols, ovals) = other.row(k);
                for (&c, &b) in ocols.iter().zip(ovals) {
                    if !touched[c] {
                        touched[c] = true;
                        row_cols.push(c);
                    }
                    acc[c] += a * b;
                }
            }
            row_cols.sort_unstable();
            for &c in &row_cols {
                if !acc[c].is_zero() {
                    col_idx.push(c);
                    values.push(acc[c]);
                }
                acc[c] = T::zero();
                touched[c] = false;
            }
            row_cols.clear();
            row_ptr[r + 1] = col_idx.len();
        }
        Self {
            nrows: self.nrows,
            ncols: other.ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: T, other: &Self, beta: T) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let entries = self
            .iter()
            .map(|(r, c, v)| (r, c, alpha * v))
            .chain(other.iter().map(|(r, c, v)| (r, c, beta * v)))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, entries)
    }

    pub fn scale(&self, s: T) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v = *v * s);
        m.prune();
        m
    }

    pub fn map<U: Element>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        let mut m = CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        };
        m.prune();
        m
    }

    pub fn transpose(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(r, c, v)| (c, r, v)).collect(),
        )
    }

    pub fn to_dense(&self) -> DMatrix<T> {
        let mut m = DMatrix::from_element(self.nrows, self.ncols, T::zero());
        for (r, c, v) in self.iter() {
            m[(r, c)] = v;
        }
        m
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.nrows.min(self.ncols))
            .map(|i| self.get(i, i))
            .collect()
    }

    pub fn max_abs_by(&self, abs: impl Fn(T) -> f64) -> f64 {
        self.values.iter().map(|&v| abs(v)).fold(0.0, f64::max)
    }
}

impl CsrMatrix<Complex64> {
    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_triplets(
            self.ncols,
            self.nrows,
            self.iter().map(|(r, c, v)| (c, r, v.conj())).collect(),
        )
    }

    /// `Tr(A B)` computed as `sum_ij A_ij B_ji`.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.ncols, other.nrows);
        assert_eq!(self.nrows, other.ncols);
        self.iter()
            .map(|(i, j, a)| a * other.get(j, i))
            .fold(Complex64::zero(), |acc, x| acc + x)
    }

    /// `Tr(A B)` for Hermitian `B`, merging rows instead of searching.
    pub(crate) fn trace_product_hermitian(&self, hermitian: &Self) -> Complex64 {
        let mut acc = Complex64::zero();
        for r in 0..self.nrows {
            let (ac, av) = self.row(r);
            let (bc, bv) = hermitian.row(r);
            let (mut i, mut j) = (0, 0);
            while i < ac.len() && j < bc.len() {
                match ac[i].cmp(&bc[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        acc += av[i] * bv[j].conj();
                        i += 1;
                        j += 1;
                    }
                }
            }
        }
        acc
    }

    /// `<x| A |x>`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.ncols);
        let mut acc = Complex64::zero();
        for (r, xr) in x.iter().enumerate() {
            let (cols, vals) = self.row(r);
            let mut row = Complex64::zero();
            for (&c, &v) in cols.iter().zip(vals) {
                row += v * x[c];
            }
            acc += xr.conj() * row;
        }
        acc
    }
}
