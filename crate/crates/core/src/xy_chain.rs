//! Anisotropic XY chain in a transverse field,
//! `H = -g Σ [(1+γ) σ_x σ_x + (1-γ) σ_y σ_y] + Σ σ_z`, solved by
//! Jordan-Wigner and Bogoliubov transformations in the even-parity sector.
//!
//! The even sector has antiperiodic fermions with momenta
//! `k ∈ V = {±π/N, ±3π/N, …, ±(N-1)π/N}`. Each pair `(k, -k)` is rotated by
//! the angle `φ_k` with `cos φ_k = (1 - 2g cos k)/ê_k`,
//! `sin φ_k = -2gγ sin k/ê_k`, `ê_k = ξ_k/2`, and
//! `u_k = cos(φ_k/2)`, `v_k = sin(φ_k/2)`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigen, psd_sqrt};
use crate::operators::C64;

/// Coupling `g` at the critical point.
pub const G_CRITICAL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XyParams {
    pub n: usize,
    pub g: f64,
    pub gamma: f64,
}

impl XyParams {
    pub fn new(n: usize, g: f64, gamma: f64) -> Result<Self> {
        let p = Self { n, g, gamma };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || !self.n.is_multiple_of(2) {
            return Err(invalid(format!(
                "XY chain needs an even N >= 2, got {}",
                self.n
            )));
        }
        check_couplings(self.g, self.gamma)
    }
}

fn check_couplings(g: f64, gamma: f64) -> Result<()> {
    if !(g.is_finite() && g >= 0.0) {
        return Err(invalid(format!("coupling g = {g} must be finite and >= 0")));
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(invalid(format!(
            "anisotropy gamma = {gamma} outside [0, 1]"
        )));
    }
    Ok(())
}

fn check_thermo(g: f64, gamma: f64) -> Result<()> {
    check_couplings(g, gamma)?;
    if gamma == 0.0 {
        return Err(invalid("closed forms need gamma in (0, 1]"));
    }
    Ok(())
}

/// Antiperiodic momentum `k_m = (2m + 1 - N) π / N`, ascending in m.
pub fn momentum(n: usize, m: usize) -> f64 {
    (2.0 * m as f64 + 1.0 - n as f64) * std::f64::consts::PI / n as f64
}

/// One Bogoliubov mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: f64,
    pub u: f64,
    pub v: f64,
    pub phi: f64,
    pub xi: f64,
}

fn mode(k: f64, g: f64, gamma: f64) -> Mode {
    let a = 1.0 - 2.0 * g * k.cos();
    let b = -2.0 * g * gamma * k.sin();
    let e = a.hypot(b);
    let phi = b.atan2(a);
    Mode {
        k,
        u: (0.5 * phi).cos(),
        v: (0.5 * phi).sin(),
        phi,
        xi: 2.0 * e,
    }
}

/// Per-momentum Bogoliubov data, ordered by ascending k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BogoliubovSolution {
    pub params: XyParams,
    pub ks: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub phi: Vec<f64>,
    pub xi: Vec<f64>,
}

impl BogoliubovSolution {
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Indices of the modes with k > 0.
    pub fn positive(&self) -> impl Iterator<Item = usize> + '_ {
        (self.len() / 2)..self.len()
    }

    /// Quasiparticle vacuum energy `-Σ_V ξ_k / 2`.
    pub fn ground_energy(&self) -> f64 {
        -0.5 * self.xi.iter().sum::<f64>()
    }
}

pub fn bogoliubov_solve(p: &XyParams) -> Result<BogoliubovSolution> {
    p.validate()?;
    let modes: Vec<Mode> = (0..p.n)
        .map(|m| mode(momentum(p.n, m), p.g, p.gamma))
        .collect();
    Ok(BogoliubovSolution {
        params: *p,
        ks: modes.iter().map(|m| m.k).collect(),
        u: modes.iter().map(|m| m.u).collect(),
        v: modes.iter().map(|m| m.v).collect(),
        phi: modes.iter().map(|m| m.phi).collect(),
        xi: modes.iter().map(|m| m.xi).collect(),
    })
}

/// `(4/N) Σ_{k∈V} (v_k² - 1/2)²`.
pub fn purity_un_finite(p: &XyParams) -> Result<f64> {
    p.validate()?;
    let sum: f64 = (0..p.n)
        .map(|m| {
            let md = mode(momentum(p.n, m), p.g, p.gamma);
            (md.v * md.v - 0.5).powi(2)
        })
        .sum();
    Ok(4.0 / p.n as f64 * sum)
}

fn s_factor(g: f64, gamma: f64) -> f64 {
    (1.0 - 4.0 * g * g * (1.0 - gamma * gamma)).sqrt()
}

/// Thermodynamic u(N) purity: `(1 - γ²/s)/(1 - γ²)` with
/// `s = √(1 - 4g²(1-γ²))` for `g ≤ 1/2`, and `1/(1+γ)` above.
/// Evaluated as `(1 + γ² - 4g²)/(s (s + γ²))`, which is regular at γ = 1.
pub fn purity_un_thermo(g: f64, gamma: f64) -> Result<f64> {
    check_thermo(g, gamma)?;
    if g > G_CRITICAL {
        return Ok(1.0 / (1.0 + gamma));
    }
    let s = s_factor(g, gamma);
    Ok((1.0 + gamma * gamma - 4.0 * g * g) / (s * (s + gamma * gamma)))
}

/// Disorder parameter `P' = P - 1/(1+γ)`, zero for `g > 1/2`.
pub fn shifted_purity(g: f64, gamma: f64) -> Result<f64> {
    check_thermo(g, gamma)?;
    if g > G_CRITICAL {
        return Ok(0.0);
    }
    let s = s_factor(g, gamma);
    Ok(gamma * (1.0 - 4.0 * g * g) / (s * (s + gamma)))
}

/// Shifted purity written through the correlation length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationLengthForm {
    /// `λ₂ = e^{-1/ε}`.
    pub lambda2: f64,
    /// Correlation length `ε`.
    pub epsilon: f64,
    /// `P'` evaluated from `λ₂`.
    pub shifted_purity: f64,
}

/// Evaluates `P' = γ/(1-γ²) [1 + γ/(2gλ₂(1-γ) - 1)]` with
/// `λ₂ = 2g(1+γ)/(1+s)`, in the algebraically equivalent form
/// `γ(1 - 2gλ₂)/((1+γ)(1 - 2gλ₂(1-γ)))`, and checks it against
/// [`shifted_purity`].
pub fn correlation_length_form(g: f64, gamma: f64) -> Result<CorrelationLengthForm> {
    check_thermo(g, gamma)?;
    if !(g > 0.0 && g < G_CRITICAL) {
        return Err(invalid(format!(
            "correlation-length form needs 0 < g < 1/2, got {g}"
        )));
    }
    let s = s_factor(g, gamma);
    let lambda2 = 2.0 * g * (1.0 + gamma) / (1.0 + s);
    let x = 2.0 * g * lambda2;
    let value = gamma * (1.0 - x) / ((1.0 + gamma) * (1.0 - x * (1.0 - gamma)));
    let direct = shifted_purity(g, gamma)?;
    if (value - direct).abs() > 1e-10 {
        return Err(Error::NoConvergence(format!(
            "correlation-length form {value} disagrees with closed form {direct}"
        )));
    }
    Ok(CorrelationLengthForm {
        lambda2,
        epsilon: -1.0 / lambda2.ln(),
        shifted_purity: value,
    })
}

/// Probability `Ω(n)` of finding n fermions in the ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumberDistribution {
    pub probs: Vec<f64>,
}

impl NumberDistribution {
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - m).powi(2) * p)
            .sum()
    }
}

/// Each pair `(k, -k)`, k > 0, is doubly occupied with probability `v_k²`;
/// the distribution is the convolution over the N/2 pairs.
pub fn number_distribution(p: &XyParams) -> Result<NumberDistribution> {
    let sol = bogoliubov_solve(p)?;
    let mut probs = vec![0.0; p.n + 1];
    probs[0] = 1.0;
    let mut filled = 0;
    for i in sol.positive() {
        let (pv, pu) = (sol.v[i] * sol.v[i], sol.u[i] * sol.u[i]);
        for n in (0..=filled).rev() {
            let w = probs[n];
            probs[n + 2] += w * pv;
            probs[n] = w * pu;
        }
        filled += 2;
    }
    Ok(NumberDistribution { probs })
}

/// `Var(N̂) = Σ_{k>0} 4 u_k² v_k²`.
pub fn number_variance(p: &XyParams) -> Result<f64> {
    let sol = bogoliubov_solve(p)?;
    Ok(sol
        .positive()
        .map(|i| 4.0 * (sol.u[i] * sol.v[i]).powi(2))
        .sum())
}

/// `⟨N̂⟩ = 2 Σ_{k>0} v_k²`.
pub fn number_mean(p: &XyParams) -> Result<f64> {
    let sol = bogoliubov_solve(p)?;
    Ok(sol.positive().map(|i| 2.0 * sol.v[i] * sol.v[i]).sum())
}

/// `G(m) = -(1/N) Σ_{k∈V} cos(k m - φ_k)`.
fn g_function(sol: &BogoliubovSolution, m: i64) -> f64 {
    let n = sol.len() as f64;
    -sol.ks
        .iter()
        .zip(&sol.phi)
        .map(|(&k, &phi)| (k * m as f64 - phi).cos())
        .sum::<f64>()
        / n
}

/// `⟨σ_z⟩ = G(0) = (2/N) Σ_{k∈V} v_k² - 1`.
pub fn magnetization_z(p: &XyParams) -> Result<f64> {
    p.validate()?;
    let sum: f64 = (0..p.n)
        .map(|m| mode(momentum(p.n, m), p.g, p.gamma).v.powi(2))
        .sum();
    Ok(2.0 * sum / p.n as f64 - 1.0)
}

/// Two-point spin correlators at separation r.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinCorrelators {
    pub xx: f64,
    pub yy: f64,
    pub zz: f64,
    pub z_single: f64,
}

/// Orders at or below this use LU; larger ones use the O(r²) recursion.
const TOEPLITZ_LU_MAX: usize = 128;
/// Relative pivot size below which the recursion hands over to LU.
const TOEPLITZ_PIVOT_TOL: f64 = 1e-8;

/// Toeplitz determinant `det[G(l - j + offset)]_{j,l = 0..r}`.
fn toeplitz_det(g: &dyn Fn(i64) -> f64, r: usize, offset: i64) -> f64 {
    let t = |k: i64| g(k + offset);
    if r > TOEPLITZ_LU_MAX {
        if let Some(d) = toeplitz_det_recursive(&t, r) {
            return d;
        }
    }
    DMatrix::from_fn(r, r, |j, l| t(l as i64 - j as i64)).determinant()
}

/// Determinant of `T_{jl} = t(l - j)` by growing the forward and backward
/// solutions of `T a = ε e_1`, `T c = η e_k`, so that `det T_k = Π ε`.
/// Returns `None` when a pivot becomes too small for the recursion.
fn toeplitz_det_recursive(t: &dyn Fn(i64) -> f64, r: usize) -> Option<f64> {
    let scale = (-(r as i64) + 1..r as i64)
        .map(|k| t(k).abs())
        .fold(0.0, f64::max);
    let tiny = TOEPLITZ_PIVOT_TOL * scale;
    let (mut eps, mut eta) = (t(0), t(0));
    if eps.abs() <= tiny {
        return None;
    }
    let mut a = vec![1.0];
    let mut c = vec![1.0];
    let mut det = eps;
    for k in 1..r {
        let alpha: f64 = a
            .iter()
            .enumerate()
            .map(|(j, x)| t(j as i64 - k as i64) * x)
            .sum();
        let beta: f64 = c.iter().enumerate().map(|(j, x)| t(j as i64 + 1) * x).sum();
        let mut next_a = a.clone();
        next_a.push(0.0);
        let mut next_c = vec![0.0];
        next_c.extend_from_slice(&c);
        let (fa, fc) = (alpha / eta, beta / eps);
        for j in 0..=k {
            let (x, y) = (next_a[j], next_c[j]);
            next_a[j] = x - fa * y;
            next_c[j] = y - fc * x;
        }
        let ab = alpha * beta;
        (eps, eta) = (eps - ab / eta, eta - ab / eps);
        if eps.abs() <= tiny || eta.abs() <= tiny {
            return None;
        }
        det *= eps;
        a = next_a;
        c = next_c;
    }
    Some(det)
}

/// `⟨σ_x^i σ_x^{i+r}⟩ = det[G(l-j+1)]`, `⟨σ_y^i σ_y^{i+r}⟩ = det[G(l-j-1)]`,
/// `⟨σ_z^i σ_z^{i+r}⟩ = G(0)² - G(r) G(-r)`.
pub fn spin_correlators(p: &XyParams, r: usize) -> Result<SpinCorrelators> {
    p.validate()?;
    if r == 0 || r > p.n / 2 {
        return Err(invalid(format!(
            "separation r = {r} outside 1..={}",
            p.n / 2
        )));
    }
    let sol = bogoliubov_solve(p)?;
    let ri = r as i64;
    let table: Vec<f64> = (-ri - 1..=ri + 1).map(|m| g_function(&sol, m)).collect();
    let g = |m: i64| table[(m + ri + 1) as usize];
    let z = g(0);
    Ok(SpinCorrelators {
        xx: toeplitz_det(&g, r, 1),
        yy: toeplitz_det(&g, r, -1),
        zz: z * z - g(ri) * g(-ri),
        z_single: z,
    })
}

/// `M_x² ≈ ⟨σ_x^1 σ_x^{1+N/2}⟩` at finite N.
pub fn mx2_order_parameter(g: f64, gamma: f64, n: usize) -> Result<f64> {
    let p = XyParams::new(n, g, gamma)?;
    Ok(spin_correlators(&p, n / 2)?.xx)
}

/// Local purity of the ground state, `⟨σ_z⟩²` (the transverse components
/// vanish by parity).
pub fn local_purity_bcs(p: &XyParams) -> Result<f64> {
    Ok(magnetization_z(p)?.powi(2))
}

fn pauli_pair(c: &SpinCorrelators) -> DMatrix<C64> {
    let z = c.z_single;
    let re = |x: f64| C64::new(x, 0.0);
    // Basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
    let mut rho = DMatrix::from_element(4, 4, re(0.0));
    rho[(0, 0)] = re(1.0 + 2.0 * z + c.zz);
    rho[(1, 1)] = re(1.0 - c.zz);
    rho[(2, 2)] = re(1.0 - c.zz);
    rho[(3, 3)] = re(1.0 - 2.0 * z + c.zz);
    rho[(0, 3)] = re(c.xx - c.yy);
    rho[(3, 0)] = re(c.xx - c.yy);
    rho[(1, 2)] = re(c.xx + c.yy);
    rho[(2, 1)] = re(c.xx + c.yy);
    rho * re(0.25)
}

/// Two-site reduced density matrix at separation r built from the
/// correlators, `ρ = ¼ [1 + ⟨σ_z⟩(σ_z⊗1 + 1⊗σ_z) + Σ_α ⟨σ_α σ_α⟩ σ_α⊗σ_α]`.
pub fn two_site_density(p: &XyParams, r: usize) -> Result<DMatrix<C64>> {
    Ok(pauli_pair(&spin_correlators(p, r)?))
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence(rho: &DMatrix<C64>) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.nrows(),
        });
    }
    let herm = (rho - rho.adjoint())
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    if herm > 1e-10 {
        return Err(Error::NotHermitian(herm));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-8 {
        return Err(Error::NotDensity(format!("trace {}", tr.re)));
    }
    let sqrt_rho = psd_sqrt(rho, 1e-8)?;
    let yy = {
        let mut m = DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        // σ_y ⊗ σ_y is real: anti-diagonal (-1, 1, 1, -1).
        m[(0, 3)] = C64::new(-1.0, 0.0);
        m[(1, 2)] = C64::new(1.0, 0.0);
        m[(2, 1)] = C64::new(1.0, 0.0);
        m[(3, 0)] = C64::new(-1.0, 0.0);
        m
    };
    let tilde = &yy * rho.map(|v| v.conj()) * &yy;
    let r = &sqrt_rho * tilde * &sqrt_rho;
    let r = (&r + r.adjoint()) * C64::new(0.5, 0.0);
    let (vals, _) = hermitian_eigen(&r);
    let mut l: Vec<f64> = vals.iter().map(|&x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

/// Nearest and next-nearest neighbour concurrence.
pub fn pair_concurrences(p: &XyParams) -> Result<(f64, f64)> {
    let c1 = concurrence(&two_site_density(p, 1)?)?;
    let c2 = if p.n >= 4 {
        concurrence(&two_site_density(p, 2)?)?
    } else {
        0.0
    };
    Ok((c1, c2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcurrenceRow {
    pub g: f64,
    pub c1: f64,
    pub c2: f64,
    pub dc1_dg: f64,
}

/// Largest grid spacing accepted within 0.05 of the critical point.
pub const MAX_SPACING_NEAR_CRITICAL: f64 = 1e-2;

/// `C(1)`, `C(2)` and the central-difference `dC(1)/dg` over an ascending
/// grid of couplings (one-sided at the ends).
pub fn xy_concurrence_scan(gamma: f64, gs: &[f64], n: usize) -> Result<Vec<ConcurrenceRow>> {
    if gs.len() < 3 {
        return Err(invalid("concurrence scan needs at least 3 grid points"));
    }
    for w in gs.windows(2) {
        let h = w[1] - w[0];
        if h <= 0.0 || h.is_nan() {
            return Err(invalid("coupling grid must be strictly ascending"));
        }
        let near = |g: f64| (g - G_CRITICAL).abs() < 0.05;
        if h > MAX_SPACING_NEAR_CRITICAL && (near(w[0]) || near(w[1])) {
            return Err(invalid(format!(
                "grid spacing {h} too coarse near g_c (max {MAX_SPACING_NEAR_CRITICAL})"
            )));
        }
    }
    let pairs = gs
        .par_iter()
        .map(|&g| pair_concurrences(&XyParams::new(n, g, gamma)?))
        .collect::<Result<Vec<_>>>()?;
    let last = gs.len() - 1;
    Ok((0..gs.len())
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(last));
            ConcurrenceRow {
                g: gs[i],
                c1: pairs[i].0,
                c2: pairs[i].1,
                dc1_dg: (pairs[hi].0 - pairs[lo].0) / (gs[hi] - gs[lo]),
            }
        })
        .collect())
}

/// Step used for the per-row `dC(1)/dg` in sweeps.
pub const SWEEP_DERIVATIVE_STEP: f64 = 1e-3;

/// One row of an XY sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XySweepRow {
    pub gamma: f64,
    pub g: f64,
    pub n: usize,
    pub purity_un: f64,
    pub purity_thermo: f64,
    pub shifted_purity: f64,
    pub local_purity: f64,
    pub mx2: f64,
    pub mz: f64,
    pub var_n: f64,
    pub c1: f64,
    pub c2: f64,
    pub dc1_dg: f64,
}

pub const XY_COLUMNS: [&str; 13] = [
    "gamma",
    "g",
    "N",
    "purity_uN",
    "purity_thermo",
    "shifted_purity",
    "local_purity",
    "mx2",
    "mz",
    "var_n",
    "c1",
    "c2",
    "dc1_dg",
];

impl XySweepRow {
    pub fn values(&self) -> [f64; 13] {
        [
            self.gamma,
            self.g,
            self.n as f64,
            self.purity_un,
            self.purity_thermo,
            self.shifted_purity,
            self.local_purity,
            self.mx2,
            self.mz,
            self.var_n,
            self.c1,
            self.c2,
            self.dc1_dg,
        ]
    }
}

/// Evaluates every sweep column at one `(γ, g)`. For γ = 0 the thermodynamic
/// purity is 1 and the shifted purity 0.
pub fn xy_row(gamma: f64, g: f64, n: usize) -> Result<XySweepRow> {
    let all: Vec<usize> = (0..XY_COLUMNS.len()).collect();
    let v = xy_values(gamma, g, n, &all)?;
    Ok(XySweepRow {
        gamma,
        g,
        n,
        purity_un: v[3],
        purity_thermo: v[4],
        shifted_purity: v[5],
        local_purity: v[6],
        mx2: v[7],
        mz: v[8],
        var_n: v[9],
        c1: v[10],
        c2: v[11],
        dc1_dg: v[12],
    })
}

/// Evaluates only the listed columns (indices into [`XY_COLUMNS`]), in the
/// listed order. Unselected quantities are never computed, which matters
/// for `mx2` at large N.
pub fn xy_values(gamma: f64, g: f64, n: usize, columns: &[usize]) -> Result<Vec<f64>> {
    let p = XyParams::new(n, g, gamma)?;
    let mut mz = None;
    let mut pairs = None;
    let mut out = Vec::with_capacity(columns.len());
    for &c in columns {
        let name = XY_COLUMNS
            .get(c)
            .ok_or_else(|| invalid(format!("column index {c} outside the XY schema")))?;
        let value = match *name {
            "gamma" => gamma,
            "g" => g,
            "N" => n as f64,
            "purity_uN" => purity_un_finite(&p)?,
            "purity_thermo" if gamma == 0.0 => 1.0,
            "purity_thermo" => purity_un_thermo(g, gamma)?,
            "shifted_purity" if gamma == 0.0 => 0.0,
            "shifted_purity" => shifted_purity(g, gamma)?,
            "local_purity" | "mz" => {
                let m = match mz {
                    Some(m) => m,
                    None => *mz.insert(magnetization_z(&p)?),
                };
                if *name == "mz" {
                    m
                } else {
                    m * m
                }
            }
            "mx2" => spin_correlators(&p, n / 2)?.xx,
            "var_n" => number_variance(&p)?,
            "c1" | "c2" => {
                let (c1, c2) = match pairs {
                    Some(x) => x,
                    None => *pairs.insert(pair_concurrences(&p)?),
                };
                if *name == "c1" {
                    c1
                } else {
                    c2
                }
            }
            "dc1_dg" => {
                let h = SWEEP_DERIVATIVE_STEP;
                let (lo, hi) = if g >= h { (g - h, g + h) } else { (g, g + h) };
                let c_lo = pair_concurrences(&XyParams::new(n, lo, gamma)?)?.0;
                let c_hi = pair_concurrences(&XyParams::new(n, hi, gamma)?)?.0;
                (c_hi - c_lo) / (hi - lo)
            }
            _ => unreachable!("every schema column is handled"),
        };
        out.push(value);
    }
    Ok(out)
}

/// Evaluates a grid of couplings concurrently, rows in grid order.
pub fn xy_sweep(gamma: f64, gs: &[f64], n: usize) -> Result<Vec<XySweepRow>> {
    gs.par_iter().map(|&g| xy_row(gamma, g, n)).collect()
}

/// Like [`xy_sweep`], restricted to the listed columns.
pub fn xy_sweep_columns(
    gamma: f64,
    gs: &[f64],
    n: usize,
    columns: &[usize],
) -> Result<Vec<Vec<f64>>> {
    gs.par_iter()
        .map(|&g| xy_values(gamma, g, n, columns))
        .collect()
}
