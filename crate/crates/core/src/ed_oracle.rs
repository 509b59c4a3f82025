//! Brute-force exact diagonalization used as ground truth for the analytic
//! XY and LMG results.
//!
//! Hamiltonians are assembled directly in the qubit basis (site 0 is the
//! most significant bit, bit value 0 is `|↑⟩`, `σ_z|↑⟩ = |↑⟩`) and solved
//! per fermion-parity sector `K = Π_j (-σ_z^j) = (-1)^{#↑}`.

use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::linalg::{dense_lowest, lanczos_lowest, LanczosConfig};
use crate::operators::C64;
use crate::purity::{BasisTag, StateVector};
use crate::sparse::CsrMatrix;
use crate::xy_chain::SpinCorrelators;

pub const MAX_XY_SITES: usize = 12;
pub const MAX_LMG_SITES: usize = 10;
/// Sectors up to this size are diagonalized densely; larger ones by Lanczos.
pub const DENSE_SECTOR_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct EdResult {
    pub ground_energy: f64,
    pub ground_state: StateVector,
    /// Fermion parity `K` of the ground state.
    pub parity: Option<i8>,
    /// `‖H ψ - E ψ‖`.
    pub residual: f64,
}

fn up(idx: usize, n: usize, site: usize) -> bool {
    idx >> (n - 1 - site) & 1 == 0
}

fn parity_of(idx: usize, n: usize) -> i8 {
    let ups = n as u32 - idx.count_ones();
    if ups.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Periodic XY Hamiltonian as a real sparse matrix on `2^N` states.
pub fn xy_hamiltonian(n: usize, g: f64, gamma: f64) -> Result<CsrMatrix<f64>> {
    if n < 2 || !n.is_multiple_of(2) || n > MAX_XY_SITES {
        if n > MAX_XY_SITES {
            return Err(Error::Resource {
                what: "XY exact diagonalization",
                dim: 1usize << n.min(40),
                limit: 1 << MAX_XY_SITES,
            });
        }
        return Err(invalid(format!("XY oracle needs an even N >= 2, got {n}")));
    }
    let dim = 1usize << n;
    let mut entries = Vec::with_capacity(dim * (n + 1));
    for idx in 0..dim {
        let ups = n as f64 - idx.count_ones() as f64;
        entries.push((idx, idx, ups - (n as f64 - ups)));
        for i in 0..n {
            let j = (i + 1) % n;
            let flipped = idx ^ (1 << (n - 1 - i)) ^ (1 << (n - 1 - j));
            // σxσx contributes 1; σyσy contributes -1 on parallel and +1 on
            // antiparallel pairs.
            let amp = if up(idx, n, i) == up(idx, n, j) {
                2.0 * gamma
            } else {
                2.0
            };
            entries.push((flipped, idx, -g * amp));
        }
    }
    Ok(CsrMatrix::from_triplets(dim, dim, entries))
}

/// Ground state of a real symmetric matrix restricted to `indices`.
fn sector_ground(h: &CsrMatrix<f64>, indices: &[usize]) -> Result<(f64, Vec<f64>)> {
    let dim = indices.len();
    let mut pos = vec![usize::MAX; h.nrows()];
    for (s, &i) in indices.iter().enumerate() {
        pos[i] = s;
    }
    let mut entries = Vec::new();
    for (s, &i) in indices.iter().enumerate() {
        let (cols, vals) = h.row(i);
        for (&c, &v) in cols.iter().zip(vals) {
            if pos[c] == usize::MAX {
                if v != 0.0 {
                    return Err(invalid("Hamiltonian couples parity sectors"));
                }
                continue;
            }
            entries.push((s, pos[c], v));
        }
    }
    let block = CsrMatrix::from_triplets(dim, dim, entries);
    if dim <= DENSE_SECTOR_LIMIT {
        Ok(dense_lowest(&block.to_dense()))
    } else {
        let cfg = LanczosConfig {
            tol: 1e-12 * block.max_abs_by(f64::abs).max(1.0),
            ..LanczosConfig::default()
        };
        lanczos_lowest(dim, |x, y| block.mul_vec_into(x, y), &cfg)
    }
}

fn finish(
    h: &CsrMatrix<f64>,
    energy: f64,
    full: Vec<f64>,
    tag: BasisTag,
    parity: Option<i8>,
) -> Result<EdResult> {
    let hx = h.mul_vec(&full);
    let residual = hx
        .iter()
        .zip(&full)
        .map(|(a, b)| (a - energy * b).powi(2))
        .sum::<f64>()
        .sqrt();
    if residual > 1e-9 {
        return Err(Error::NoConvergence(format!(
            "ground-state residual {residual:.3e}"
        )));
    }
    Ok(EdResult {
        ground_energy: energy,
        ground_state: StateVector::from_real(&full, tag)?,
        parity,
        residual,
    })
}

fn embed(indices: &[usize], local: &[f64], dim: usize) -> Vec<f64> {
    let mut full = vec![0.0; dim];
    for (&i, &a) in indices.iter().zip(local) {
        full[i] = a;
    }
    full
}

/// Lowest state of the XY chain within the given parity sector.
pub fn xy_ed_sector(n: usize, g: f64, gamma: f64, parity: i8) -> Result<EdResult> {
    if parity != 1 && parity != -1 {
        return Err(invalid("parity must be +1 or -1"));
    }
    let h = xy_hamiltonian(n, g, gamma)?;
    let dim = h.nrows();
    let indices: Vec<usize> = (0..dim).filter(|&i| parity_of(i, n) == parity).collect();
    let (e, v) = sector_ground(&h, &indices)?;
    finish(
        &h,
        e,
        embed(&indices, &v, dim),
        BasisTag::QubitChain { n },
        Some(parity),
    )
}

/// Global XY ground state; ties between sectors go to `K = +1`.
pub fn xy_ed(n: usize, g: f64, gamma: f64) -> Result<EdResult> {
    let even = xy_ed_sector(n, g, gamma, 1)?;
    let odd = xy_ed_sector(n, g, gamma, -1)?;
    Ok(if odd.ground_energy < even.ground_energy - 1e-12 {
        odd
    } else {
        even
    })
}

/// LMG oracle on N qubits with collective spin `J_α = Σ σ_α/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmgEdResult {
    pub ed: EdResult,
    /// `⟨J²⟩` of the ground state.
    pub j_squared: f64,
    /// `⟨J_z⟩` of the ground state.
    pub jz: f64,
}

/// Collective raising operator `J_+ = Σ_j σ_+^j` (real).
fn j_plus(n: usize) -> CsrMatrix<f64> {
    let dim = 1usize << n;
    let mut entries = Vec::new();
    for idx in 0..dim {
        for site in 0..n {
            if !up(idx, n, site) {
                entries.push((idx ^ 1 << (n - 1 - site), idx, 1.0));
            }
        }
    }
    CsrMatrix::from_triplets(dim, dim, entries)
}

fn lmg_operators(n: usize) -> (CsrMatrix<f64>, CsrMatrix<f64>, CsrMatrix<f64>) {
    let dim = 1usize << n;
    let jp = j_plus(n);
    let jm = jp.transpose();
    let jz = CsrMatrix::from_diagonal(
        &(0..dim)
            .map(|i| (n as f64 - 2.0 * i.count_ones() as f64) / 2.0)
            .collect::<Vec<_>>(),
    );
    (jp, jm, jz)
}

/// `J²` on N qubits.
pub fn total_spin_squared(n: usize) -> CsrMatrix<f64> {
    let (jp, jm, jz) = lmg_operators(n);
    // J² = J_- J_+ + J_z² + J_z
    jm.matmul(&jp)
        .combine(1.0, &jz.matmul(&jz), 1.0)
        .combine(1.0, &jz, 1.0)
}

/// LMG Hamiltonian on the full `2^N` qubit space.
pub fn lmg_qubit_hamiltonian(n: usize, v: f64, w: f64) -> Result<CsrMatrix<f64>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(invalid(format!("LMG oracle needs an even N >= 2, got {n}")));
    }
    if n > MAX_LMG_SITES {
        return Err(Error::Resource {
            what: "LMG collective diagonalization",
            dim: 1usize << n.min(40),
            limit: 1 << MAX_LMG_SITES,
        });
    }
    let (jp, jm, jz) = lmg_operators(n);
    let nf = n as f64;
    let pairs = jp.matmul(&jp).combine(1.0, &jm.matmul(&jm), 1.0);
    let hop = jp.matmul(&jm).combine(1.0, &jm.matmul(&jp), 1.0);
    Ok(jz
        .combine(1.0, &pairs, v / (2.0 * nf))
        .combine(1.0, &hop, w / (2.0 * nf)))
}

/// Dense ED of the collective-spin LMG Hamiltonian, with the ground state
/// required to lie in the `J = N/2` multiplet.
pub fn lmg_collective(n: usize, v: f64, w: f64) -> Result<LmgEdResult> {
    let res = lmg_collective_unchecked(n, v, w)?;
    let j = n as f64 / 2.0;
    let expected = j * (j + 1.0);
    if (res.j_squared - expected).abs() > 1e-9 {
        return Err(Error::SectorCheck {
            expected,
            found: res.j_squared,
        });
    }
    Ok(res)
}

/// As [`lmg_collective`] but reports `⟨J²⟩` without enforcing the sector.
pub fn lmg_collective_unchecked(n: usize, v: f64, w: f64) -> Result<LmgEdResult> {
    let h = lmg_qubit_hamiltonian(n, v, w)?;
    let dim = h.nrows();
    let mut best: Option<(f64, Vec<f64>, i8)> = None;
    for parity in [1i8, -1] {
        let indices: Vec<usize> = (0..dim).filter(|&i| parity_of(i, n) == parity).collect();
        let block = {
            let mut pos = vec![usize::MAX; dim];
            for (s, &i) in indices.iter().enumerate() {
                pos[i] = s;
            }
            DMatrix::from_fn(indices.len(), indices.len(), |a, b| {
                h.get(indices[a], indices[b])
            })
        };
        let (e, local) = dense_lowest(&block);
        if best.as_ref().is_none_or(|(be, _, _)| e < *be - 1e-12) {
            best = Some((e, embed(&indices, &local, dim), parity));
        }
    }
    let (e, full, parity) = best.expect("two sectors");
    let ed = finish(
        &h,
        e,
        full.clone(),
        BasisTag::QubitChain { n },
        Some(parity),
    )?;
    let j2 = total_spin_squared(n);
    let j_squared: f64 = full.iter().zip(j2.mul_vec(&full)).map(|(a, b)| a * b).sum();
    let jz: f64 = full
        .iter()
        .enumerate()
        .map(|(i, a)| a * a * (n as f64 - 2.0 * i.count_ones() as f64) / 2.0)
        .sum();
    Ok(LmgEdResult { ed, j_squared, jz })
}

/// `⟨σ_z^i⟩` on a qubit state.
pub fn sigma_z(psi: &StateVector, site: usize) -> Result<f64> {
    let n = qubit_count(psi)?;
    if site >= n {
        return Err(invalid(format!("site {site} out of range")));
    }
    Ok(psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            if up(idx, n, site) {
                a.norm_sqr()
            } else {
                -a.norm_sqr()
            }
        })
        .sum())
}

fn qubit_count(psi: &StateVector) -> Result<usize> {
    if !psi.tag().is_qubit_chain() {
        return Err(invalid("expected a qubit state"));
    }
    Ok(psi.tag().dims().len())
}

/// Axis of a Pauli pair correlator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// `⟨σ_α^i σ_α^j⟩` for `i ≠ j`.
pub fn pauli_pair(psi: &StateVector, i: usize, j: usize, axis: Axis) -> Result<f64> {
    let n = qubit_count(psi)?;
    if i >= n || j >= n || i == j {
        return Err(invalid(format!("invalid site pair ({i}, {j})")));
    }
    let amps = psi.amplitudes();
    let mask = 1usize << (n - 1 - i) | 1usize << (n - 1 - j);
    let factor = |idx: usize, site: usize| -> C64 {
        match axis {
            Axis::X => C64::new(1.0, 0.0),
            Axis::Y => {
                if up(idx, n, site) {
                    C64::new(0.0, 1.0)
                } else {
                    C64::new(0.0, -1.0)
                }
            }
            Axis::Z => C64::new(if up(idx, n, site) { 1.0 } else { -1.0 }, 0.0),
        }
    };
    let mut acc = C64::new(0.0, 0.0);
    for (idx, &a) in amps.iter().enumerate() {
        let target = if axis == Axis::Z { idx } else { idx ^ mask };
        acc += amps[target].conj() * factor(idx, i) * factor(idx, j) * a;
    }
    Ok(acc.re)
}

/// Correlators between site 0 and site r.
pub fn ed_spin_correlators(psi: &StateVector, r: usize) -> Result<SpinCorrelators> {
    Ok(SpinCorrelators {
        xx: pauli_pair(psi, 0, r, Axis::X)?,
        yy: pauli_pair(psi, 0, r, Axis::Y)?,
        zz: pauli_pair(psi, 0, r, Axis::Z)?,
        z_single: sigma_z(psi, 0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_only_ground_state() {
        let r = xy_ed(6, 0.0, 0.5).unwrap();
        assert!((r.ground_energy + 6.0).abs() < 1e-12);
        assert!((r.ground_state.amplitudes()[63].norm() - 1.0).abs() < 1e-12);
        assert_eq!(r.parity, Some(1));
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let h = xy_hamiltonian(6, 0.7, 0.3).unwrap();
        assert_eq!(h, h.transpose());
    }

    #[test]
    fn lmg_free_energy() {
        let r = lmg_collective(6, 0.0, 0.0).unwrap();
        assert!((r.ed.ground_energy + 3.0).abs() < 1e-12);
    }

    #[test]
    fn oversized_requests_fail() {
        assert!(matches!(
            xy_hamiltonian(14, 0.3, 1.0),
            Err(Error::Resource { .. })
        ));
        assert!(matches!(
            lmg_qubit_hamiltonian(12, 0.3, 1.0),
            Err(Error::Resource { .. })
        ));
    }
}
