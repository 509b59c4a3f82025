//! Eigensolvers and small dense helpers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
///
/// Implicit QL with Wilkinson shifts; `diag` has length n and `off` length
/// n - 1 (`off[i]` couples rows i and i + 1).
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    assert_eq!(off.len() + 1, n);
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::NoConvergence(format!(
                    "tridiagonal QL stalled at row {l} of {n}"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Eigenvector of a symmetric tridiagonal matrix for a known eigenvalue,
/// by inverse iteration with a partially pivoted tridiagonal solve.
pub fn tridiagonal_eigenvector(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = diag
        .iter()
        .chain(off)
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    let shift = lambda - 1e-13 * scale;
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64)
        .collect();
    normalize_real(&mut x);
    for _ in 0..4 {
        x = solve_tridiagonal(diag, off, shift, &x, scale);
        normalize_real(&mut x);
    }
    fix_phase_real(&mut x);
    x
}

/// Solves (T - shift) y = b with Gaussian elimination and row interchanges.
fn solve_tridiagonal(diag: &[f64], off: &[f64], shift: f64, b: &[f64], scale: f64) -> Vec<f64> {
    let n = diag.len();
    let tiny = f64::EPSILON * scale;
    // Row i holds (dl, d, du, du2) in columns (i-1, i, i+1, i+2) after pivoting.
    let mut dl: Vec<f64> = off.to_vec();
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut du: Vec<f64> = off.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut y = b.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            y[i + 1] -= f * y[i];
            dl[i] = 0.0;
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            du[i] = tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            y.swap(i, i + 1);
            y[i + 1] -= f * y[i];
        }
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = y[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (y[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (y[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    x
}

pub(crate) fn normalize_real(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn first_significant(mags: impl Iterator<Item = f64> + Clone) -> Option<usize> {
    let max = mags.clone().fold(0.0f64, f64::max);
    if max == 0.0 {
        return None;
    }
    mags.into_iter().position(|m| m > 1e-8 * max)
}

/// Makes the first non-negligible amplitude positive.
pub fn fix_phase_real(x: &mut [f64]) {
    if let Some(i) = first_significant(x.iter().map(|v| v.abs())) {
        if x[i] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// Makes the first non-negligible amplitude real and positive.
pub fn fix_phase_complex(x: &mut [Complex64]) {
    if let Some(i) = first_significant(x.iter().map(|v| v.norm())) {
        let phase = x[i].conj() / x[i].norm();
        x.iter_mut().for_each(|v| *v *= phase);
    }
}

/// Lowest eigenpair of a dense real symmetric matrix. Among degenerate
/// eigenvalues the solver's first index wins.
pub fn dense_lowest(h: &DMatrix<f64>) -> (f64, Vec<f64>) {
    let eig = h.clone().symmetric_eigen();
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[best] {
            best = i;
        }
    }
    let mut v: Vec<f64> = eig.eigenvectors.column(best).iter().copied().collect();
    fix_phase_real(&mut v);
    (eig.eigenvalues[best], v)
}

/// Settings for [`lanczos_lowest`].
#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Target residual norm `|H x - E x|`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            krylov_dim: 80,
            max_restarts: 60,
            tol: 1e-11,
            seed: 0x5eed,
        }
    }
}

/// Lowest eigenpair of a real symmetric operator given as a matvec.
///
/// Thick-less restarted Lanczos with full reorthogonalization; each cycle
/// restarts from the current Ritz vector. Deterministic for a fixed seed.
pub fn lanczos_lowest<F>(dim: usize, matvec: F, cfg: &LanczosConfig) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    normalize_real(&mut start);
    let m_max = cfg.krylov_dim.min(dim).max(1);
    let mut w = vec![0.0; dim];
    let mut last_residual = f64::INFINITY;
    for _ in 0..cfg.max_restarts {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        for j in 0..m_max {
            matvec(&basis[j], &mut w);
            let a = dot(&basis[j], &w);
            alpha.push(a);
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
            let b = dot(&w, &w).sqrt();
            if j + 1 == m_max || b < 1e-13 * a.abs().max(1.0) {
                break;
            }
            beta.push(b);
            basis.push(w.iter().map(|v| v / b).collect());
        }
        let m = alpha.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for i in 0..m {
            t[(i, i)] = alpha[i];
            if i + 1 < m {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let (_, s) = dense_lowest(&t);
        let mut x = vec![0.0; dim];
        for (q, &c) in basis.iter().zip(&s) {
            axpy(c, q, &mut x);
        }
        normalize_real(&mut x);
        matvec(&x, &mut w);
        let energy = dot(&x, &w);
        axpy(-energy, &x, &mut w);
        let residual = dot(&w, &w).sqrt();
        if residual < cfg.tol {
            fix_phase_real(&mut x);
            return Ok((energy, x));
        }
        last_residual = residual;
        start = x;
    }
    Err(Error::NoConvergence(format!(
        "Lanczos residual {last_residual:.3e} above {:.1e} on dimension {dim}",
        cfg.tol
    )))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// `exp(i H)` for a dense Hermitian `H`.
pub fn expi_hermitian(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| Complex64::from_polar(1.0, l)),
    );
    let u = &eig.eigenvectors;
    u * DMatrix::from_diagonal(&phases) * u.adjoint()
}

/// Eigenvalues (ascending) and eigenvectors of a dense Hermitian matrix.
pub fn hermitian_eigen(h: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (values, vectors)
}

/// Square root of a positive semidefinite Hermitian matrix; eigenvalues
/// below zero by less than `tol` are clamped.
pub fn psd_sqrt(h: &DMatrix<Complex64>, tol: f64) -> Result<DMatrix<Complex64>> {
    let eig = h.clone().symmetric_eigen();
    let mut roots = Vec::with_capacity(eig.eigenvalues.len());
    for &l in eig.eigenvalues.iter() {
        if l < -tol {
            return Err(Error::NotDensity(format!("negative eigenvalue {l:.3e}")));
        }
        roots.push(Complex64::new(l.max(0.0).sqrt(), 0.0));
    }
    let u = &eig.eigenvectors;
    Ok(u * DMatrix::from_diagonal(&DVector::from_vec(roots)) * u.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_tridiagonal(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = off[i];
                m[(i + 1, i)] = off[i];
            }
        }
        m
    }

    #[test]
    fn tridiagonal_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| rng.random::<f64>() - 0.5).collect();
        let vals = tridiagonal_eigenvalues(&diag, &off).unwrap();
        let mut dense: Vec<f64> = dense_tridiagonal(&diag, &off)
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        dense.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in vals.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let v = tridiagonal_eigenvector(&diag, &off, vals[0]);
        let m = dense_tridiagonal(&diag, &off);
        let r = &m * DVector::from_vec(v.clone()) - DVector::from_vec(v) * vals[0];
        assert!(r.norm() < 1e-11);
    }

    #[test]
    fn zero_couplings_split() {
        let vals = tridiagonal_eigenvalues(&[3.0, 1.0, 2.0], &[0.0, 0.0]).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
        let v = tridiagonal_eigenvector(&[3.0, 1.0, 2.0], &[0.0, 0.0], 1.0);
        assert!((v[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lanczos_finds_ground_state() {
        let n = 300;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + 0.2 * (i as f64).cos()).collect();
        let exact = tridiagonal_eigenvalues(&diag, &off).unwrap()[0];
        let (e, v) = lanczos_lowest(
            n,
            |x, y| {
                for i in 0..n {
                    let mut acc = diag[i] * x[i];
                    if i > 0 {
                        acc += off[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        acc += off[i] * x[i + 1];
                    }
                    y[i] = acc;
                }
            },
            &LanczosConfig::default(),
        )
        .unwrap();
        assert!((e - exact).abs() < 1e-10);
        assert!((v.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_of_pauli() {
        let sx = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let t = 0.3;
        let u = expi_hermitian(&(sx.clone() * Complex64::new(t, 0.0)));
        assert!((u[(0, 0)] - Complex64::new(t.cos(), 0.0)).norm() < 1e-14);
        assert!((u[(0, 1)] - Complex64::new(0.0, t.sin())).norm() < 1e-14);
    }
}
