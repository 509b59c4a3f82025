//! Lipkin-Meshkov-Glick model in the maximal multiplet `J = N/2`:
//! `H = J_z + (V/2N)(J_+² + J_-²) + (W/2N)(J_+J_- + J_-J_+)`.
//!
//! `H` only connects `m` to `m ± 2`, so each parity block is a real symmetric
//! tridiagonal matrix. Multiplet index i holds `m = J - i`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fit::{linear_fit, LinearFit};
use crate::linalg::{tridiagonal_eigenvalues, tridiagonal_eigenvector};
use crate::operators::{HermitianOperator, Spin, C64};
use crate::purity::{BasisTag, StateVector};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgParams {
    pub n: usize,
    pub v: f64,
    pub w: f64,
}

impl LmgParams {
    pub fn new(n: usize, v: f64, w: f64) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(invalid(format!("LMG needs an even N >= 2, got {n}")));
        }
        if !(v.is_finite() && w.is_finite()) {
            return Err(invalid("LMG couplings must be finite"));
        }
        Ok(Self { n, v, w })
    }

    /// `Δ = |V| - W`.
    pub fn delta(&self) -> f64 {
        self.v.abs() - self.w
    }

    fn j(&self) -> f64 {
        self.n as f64 / 2.0
    }
}

/// Diagonal element for multiplet index i.
fn diag_entry(p: &LmgParams, i: usize) -> f64 {
    let j = p.j();
    let m = j - i as f64;
    m + p.w / p.n as f64 * (j * (j + 1.0) - m * m)
}

/// `⟨m+2| H |m⟩` for the state at multiplet index i (so `m+2` sits at i-2).
fn pair_entry(p: &LmgParams, i: usize) -> f64 {
    let j = p.j();
    let m = j - i as f64;
    let c = j * (j + 1.0);
    p.v / (2.0 * p.n as f64) * ((c - m * (m + 1.0)) * (c - (m + 1.0) * (m + 2.0))).sqrt()
}

/// The `(N+1) × (N+1)` Hamiltonian, real symmetric in the `J_z` basis.
pub fn build_hamiltonian(p: &LmgParams) -> HermitianOperator {
    let dim = p.n + 1;
    let mut entries = Vec::with_capacity(3 * dim);
    for i in 0..dim {
        entries.push((i, i, C64::new(diag_entry(p, i), 0.0)));
        if i >= 2 {
            let h = C64::new(pair_entry(p, i), 0.0);
            entries.push((i - 2, i, h));
            entries.push((i, i - 2, h));
        }
    }
    HermitianOperator::new(CsrMatrix::from_triplets(dim, dim, entries))
        .expect("LMG Hamiltonian is symmetric")
}

/// Parity `exp(iπ(J_z + J))` as a diagonal ±1 operator.
pub fn parity_operator(n: usize) -> HermitianOperator {
    let diag: Vec<C64> = (0..=n)
        .map(|i| C64::new(if (n - i).is_multiple_of(2) { 1.0 } else { -1.0 }, 0.0))
        .collect();
    HermitianOperator::new(CsrMatrix::from_diagonal(&diag)).expect("diagonal")
}

struct Block {
    indices: Vec<usize>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Block of multiplet indices `start, start+2, …`.
fn block(p: &LmgParams, start: usize) -> Block {
    let indices: Vec<usize> = (start..=p.n).step_by(2).collect();
    let diag = indices.iter().map(|&i| diag_entry(p, i)).collect();
    let off = indices.iter().skip(1).map(|&i| pair_entry(p, i)).collect();
    Block { indices, diag, off }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmgSolution {
    pub params: LmgParams,
    /// Full spectrum, ascending.
    pub energies: Vec<f64>,
    pub ground: StateVector,
    /// Parity of the ground state, `exp(iπ(J_z + J))`.
    pub ground_parity: i8,
    pub jz_expect: f64,
    /// `4⟨J_z⟩²/N²`.
    pub purity_jz: f64,
    /// `1/2 + ⟨J_z⟩/N`.
    pub n_up: f64,
}

impl LmgSolution {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn energy_per_particle(&self) -> f64 {
        self.energies[0] / self.params.n as f64
    }

    pub fn gap(&self) -> f64 {
        self.energies[1] - self.energies[0]
    }
}

pub fn solve(p: &LmgParams) -> Result<LmgSolution> {
    let p = LmgParams::new(p.n, p.v, p.w)?;
    // Block starting at index 0 has m + J even (parity +1).
    let blocks = [block(&p, 0), block(&p, 1)];
    let mut energies = Vec::with_capacity(p.n + 1);
    let mut lowest = [0.0; 2];
    for (b, blk) in blocks.iter().enumerate() {
        let vals = tridiagonal_eigenvalues(&blk.diag, &blk.off)?;
        lowest[b] = vals[0];
        energies.extend(vals);
    }
    energies.sort_by(|a, b| a.total_cmp(b));
    let pick = if lowest[1] < lowest[0] { 1 } else { 0 };
    let blk = &blocks[pick];
    let vec = tridiagonal_eigenvector(&blk.diag, &blk.off, lowest[pick]);
    let mut amps = vec![C64::new(0.0, 0.0); p.n + 1];
    for (&i, &a) in blk.indices.iter().zip(&vec) {
        amps[i] = C64::new(a, 0.0);
    }
    let j = Spin::from_twice(p.n as u32);
    let ground = StateVector::normalized(amps, BasisTag::SpinMultiplet { j })?;
    let jz_expect: f64 = ground
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| a.norm_sqr() * j.m(i))
        .sum();
    let nf = p.n as f64;
    Ok(LmgSolution {
        params: p,
        energies,
        ground,
        ground_parity: if pick == 0 { 1 } else { -1 },
        jz_expect,
        purity_jz: 4.0 * jz_expect * jz_expect / (nf * nf),
        n_up: 0.5 + jz_expect / nf,
    })
}

/// Ground energy only (cheaper than [`solve`]).
pub fn ground_energy(p: &LmgParams) -> Result<f64> {
    let p = LmgParams::new(p.n, p.v, p.w)?;
    let mut best = f64::INFINITY;
    for start in [0, 1] {
        let blk = block(&p, start);
        best = best.min(tridiagonal_eigenvalues(&blk.diag, &blk.off)?[0]);
    }
    Ok(best)
}

/// Azimuth of the classical minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Azimuth {
    /// Unique up to the `φ → φ + π` symmetry of `cos 2φ`.
    Fixed(f64),
    /// Two minima at `±φ`.
    PlusMinus(f64),
    /// Any `φ` (on the line `V = 0`).
    Free,
    /// Angular momentum along `-z`; `φ` is meaningless.
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassicalMinimum {
    pub theta: f64,
    pub phi: Azimuth,
    pub energy_per_particle: f64,
    pub degenerate: bool,
}

impl ClassicalMinimum {
    /// `cos²θ`, the classical `J_z` purity.
    pub fn purity(&self) -> f64 {
        self.theta.cos().powi(2)
    }

    /// Upper-shell occupation `(1 + cos θ)/2`.
    pub fn n_up(&self) -> f64 {
        0.5 * (1.0 + self.theta.cos())
    }
}

/// `h_c(j, θ, φ) = j cos θ + V j² sin²θ cos 2φ + W j² sin²θ`.
pub fn classical_energy(v: f64, w: f64, j: f64, theta: f64, phi: f64) -> f64 {
    let s2 = theta.sin().powi(2);
    j * theta.cos() + v * j * j * s2 * (2.0 * phi).cos() + w * j * j * s2
}

/// Closed-form minimum at `j = 1/2`: `θ = π` for `Δ ≤ 1`, otherwise
/// `cos θ = -1/Δ` with `e = -1/(4Δ) - Δ/4`.
pub fn classical_minimum(v: f64, w: f64) -> ClassicalMinimum {
    let delta = v.abs() - w;
    if delta <= 1.0 {
        return ClassicalMinimum {
            theta: PI,
            phi: Azimuth::Pole,
            energy_per_particle: -0.5,
            degenerate: false,
        };
    }
    let phi = if v < 0.0 {
        Azimuth::Fixed(0.0)
    } else if v > 0.0 {
        Azimuth::PlusMinus(FRAC_PI_2)
    } else {
        Azimuth::Free
    };
    ClassicalMinimum {
        theta: (-1.0 / delta).acos(),
        phi,
        energy_per_particle: -1.0 / (4.0 * delta) - delta / 4.0,
        degenerate: true,
    }
}

/// Grid search plus successive box refinement of `h_c` over `(θ, φ)` at
/// `j = 1/2`. Returns `(θ, φ, e)`.
pub fn classical_minimum_numeric(v: f64, w: f64) -> (f64, f64, f64) {
    let h = |t: f64, p: f64| classical_energy(v, w, 0.5, t, p);
    let (nt, np) = (180, 180);
    let mut best = (0.0, 0.0, f64::INFINITY);
    for a in 0..=nt {
        let t = PI * a as f64 / nt as f64;
        for b in 0..np {
            let p = -PI + 2.0 * PI * b as f64 / np as f64;
            let e = h(t, p);
            if e < best.2 {
                best = (t, p, e);
            }
        }
    }
    let (mut dt, mut dp) = (PI / nt as f64, 2.0 * PI / np as f64);
    for _ in 0..60 {
        let (t0, p0, _) = best;
        for a in -4..=4 {
            for b in -4..=4 {
                let t = (t0 + dt * a as f64 / 2.0).clamp(0.0, PI);
                let p = p0 + dp * b as f64 / 2.0;
                let e = h(t, p);
                if e < best.2 {
                    best = (t, p, e);
                }
            }
        }
        dt *= 0.5;
        dp *= 0.5;
    }
    best
}

/// One grid point of an LMG sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgSweepRow {
    pub v: f64,
    pub w: f64,
    pub n: usize,
    pub energy_per_particle: f64,
    pub purity_jz: f64,
    pub n_up: f64,
    pub classical_energy: f64,
    pub classical_purity: f64,
}

pub const LMG_COLUMNS: [&str; 8] = [
    "V",
    "W",
    "N",
    "energy_per_particle",
    "purity_jz",
    "n_up",
    "classical_energy",
    "classical_purity",
];

impl LmgSweepRow {
    pub fn values(&self) -> [f64; 8] {
        [
            self.v,
            self.w,
            self.n as f64,
            self.energy_per_particle,
            self.purity_jz,
            self.n_up,
            self.classical_energy,
            self.classical_purity,
        ]
    }
}

pub fn lmg_row(v: f64, w: f64, n: usize) -> Result<LmgSweepRow> {
    let sol = solve(&LmgParams::new(n, v, w)?)?;
    let cm = classical_minimum(v, w);
    Ok(LmgSweepRow {
        v,
        w,
        n,
        energy_per_particle: sol.energy_per_particle(),
        purity_jz: sol.purity_jz,
        n_up: sol.n_up,
        classical_energy: cm.energy_per_particle,
        classical_purity: cm.purity(),
    })
}

/// Default threshold on the jump of `∂(E/N)/∂V` across `V = 0`.
pub const DEFAULT_JUMP_THRESHOLD: f64 = 0.05;

/// Slope discontinuity of `E/N` across `V = 0` at fixed W.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderPoint {
    pub w: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    pub jump: f64,
    pub first_order: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmgSweep {
    /// Row-major over (W, V): all V values for the first W, then the next.
    pub rows: Vec<LmgSweepRow>,
    pub transitions: Vec<FirstOrderPoint>,
}

/// Evaluates the `vs × ws` grid concurrently and scans every W line for a
/// slope jump across `V = 0`; lines without two grid points on each side
/// of zero are skipped.
pub fn lmg_sweep(vs: &[f64], ws: &[f64], n: usize, threshold: f64) -> Result<LmgSweep> {
    let grid: Vec<(f64, f64)> = ws
        .iter()
        .flat_map(|&w| vs.iter().map(move |&v| (v, w)))
        .collect();
    let rows = grid
        .par_iter()
        .map(|&(v, w)| lmg_row(v, w, n))
        .collect::<Result<Vec<_>>>()?;
    let mut order: Vec<usize> = (0..vs.len()).collect();
    order.sort_by(|&a, &b| vs[a].total_cmp(&vs[b]));
    let neg: Vec<usize> = order.iter().copied().filter(|&i| vs[i] < 0.0).collect();
    let pos: Vec<usize> = order.iter().copied().filter(|&i| vs[i] > 0.0).collect();
    let mut transitions = Vec::new();
    if neg.len() >= 2 && pos.len() >= 2 {
        let (l1, l0) = (neg[neg.len() - 2], neg[neg.len() - 1]);
        let (r0, r1) = (pos[0], pos[1]);
        for (wi, &w) in ws.iter().enumerate() {
            let e = |i: usize| rows[wi * vs.len() + i].energy_per_particle;
            let left = (e(l0) - e(l1)) / (vs[l0] - vs[l1]);
            let right = (e(r1) - e(r0)) / (vs[r1] - vs[r0]);
            let jump = (right - left).abs();
            transitions.push(FirstOrderPoint {
                w,
                left_slope: left,
                right_slope: right,
                jump,
                first_order: jump > threshold,
            });
        }
    }
    Ok(LmgSweep { rows, transitions })
}

/// Direct probe of the slope jump: one-sided differences of `E/N` at
/// `V = ±h, ±2h`.
pub fn first_order_jump(n: usize, w: f64, h: f64, threshold: f64) -> Result<FirstOrderPoint> {
    if h <= 0.0 || h.is_nan() {
        return Err(invalid("step must be positive"));
    }
    let e = |v: f64| -> Result<f64> { Ok(ground_energy(&LmgParams::new(n, v, w)?)? / n as f64) };
    let left = (e(-h)? - e(-2.0 * h)?) / h;
    let right = (e(2.0 * h)? - e(h)?) / h;
    let jump = (right - left).abs();
    Ok(FirstOrderPoint {
        w,
        left_slope: left,
        right_slope: right,
        jump,
        first_order: jump > threshold,
    })
}

/// How the critical line `Δ = 1` is approached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ApproachPath {
    /// Classical minimum along fixed W, `V = Δ + W > 0`.
    Classical { w: f64 },
    /// Finite-N ground state along fixed W.
    Quantum { w: f64, n: usize },
}

/// Log-log fit of `⟨n_↑⟩` against `Δ - 1` over log-spaced points
/// `Δ - 1 ∈ [lo, hi]`, with `1 < 1 + lo < 1 + hi ≤ 1.2`.
pub fn lmg_exponents(path: ApproachPath, lo: f64, hi: f64, points: usize) -> Result<LinearFit> {
    if !(lo > 0.0 && hi > lo && hi <= 0.2 + 1e-12) || points < 8 {
        return Err(Error::Fit(format!(
            "ill-conditioned window Δ-1 ∈ [{lo}, {hi}] with {points} points"
        )));
    }
    let xs: Vec<f64> = (0..points)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (points - 1) as f64).exp())
        .collect();
    let ys = xs
        .par_iter()
        .map(|&x| -> Result<f64> {
            match path {
                ApproachPath::Classical { w } => Ok(classical_minimum(1.0 + x + w, w).n_up()),
                ApproachPath::Quantum { w, n } => {
                    Ok(solve(&LmgParams::new(n, 1.0 + x + w, w)?)?.n_up)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if ys.iter().any(|&y| y <= 0.0 || y.is_nan()) {
        return Err(Error::Fit("non-positive occupation in window".into()));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_hamiltonian_is_jz() {
        let h = build_hamiltonian(&LmgParams::new(6, 0.0, 0.0).unwrap()).to_dense();
        for i in 0..7 {
            assert_eq!(h[(i, i)].re, 3.0 - i as f64);
        }
    }

    #[test]
    fn commutes_with_parity() {
        let p = LmgParams::new(10, 1.3, -0.4).unwrap();
        let h = build_hamiltonian(&p).to_dense();
        let k = parity_operator(10).to_dense();
        let c = &h * &k - &k * &h;
        assert!(c.iter().all(|v| v.norm() < 1e-12));
    }

    #[test]
    fn tridiagonal_blocks_match_dense() {
        let p = LmgParams::new(12, 3.0, 1.0).unwrap();
        let sol = solve(&p).unwrap();
        let h = build_hamiltonian(&p).to_dense();
        let (dense, _) = crate::linalg::hermitian_eigen(&h);
        for (a, b) in sol.energies.iter().zip(&dense) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn gauge_line_ground_state() {
        let sol = solve(&LmgParams::new(40, 0.0, 1.0).unwrap()).unwrap();
        assert!((sol.ground.amplitudes()[40].norm() - 1.0).abs() < 1e-12);
        assert!((sol.purity_jz - 1.0).abs() < 1e-12);
        assert!(sol.n_up.abs() < 1e-12);
    }

    #[test]
    fn classical_closed_forms() {
        let m = classical_minimum(0.5, 0.0);
        assert_eq!(m.theta, PI);
        assert_eq!(m.energy_per_particle, -0.5);
        let m = classical_minimum(2.0, 0.0);
        assert!((m.theta.cos() + 0.5).abs() < 1e-15);
        assert!(m.degenerate);
        assert_eq!(m.phi, Azimuth::PlusMinus(FRAC_PI_2));
        let m = classical_minimum(1e-9, -2.0);
        assert!((m.energy_per_particle + 0.625).abs() < 1e-8);
        assert_eq!(classical_minimum(0.0, -2.0).phi, Azimuth::Free);
        assert_eq!(classical_minimum(-3.0, 0.0).phi, Azimuth::Fixed(0.0));
    }

    #[test]
    fn numeric_minimizer_agrees() {
        for (v, w) in [
            (0.5, 0.0),
            (2.0, 0.0),
            (-3.0, 1.0),
            (0.0, -2.0),
            (1.0, -1.5),
        ] {
            let (_, _, e) = classical_minimum_numeric(v, w);
            assert!(
                (e - classical_minimum(v, w).energy_per_particle).abs() < 1e-8,
                "{v} {w}"
            );
        }
    }
}
