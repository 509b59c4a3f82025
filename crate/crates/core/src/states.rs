//! Representative states: ferromagnetic, W, GHZ, Bell, 1-D cluster,
//! the spin-1 AKLT chain and the finite-N BCS vector of the XY chain.

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operators::{jw_fermion_ops, Spin, C64, MAX_DIM, MAX_FERMION_MODES};
use crate::purity::{BasisTag, StateVector};
use crate::xy_chain::{bogoliubov_solve, XyParams};

pub const MAX_AKLT_SITES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinChainSpec {
    pub n: usize,
    pub spin: Spin,
    pub boundary: Boundary,
}

impl SpinChainSpec {
    pub fn new(n: usize, spin: Spin, boundary: Boundary) -> Result<Self> {
        let s = Self { n, spin, boundary };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("a chain needs at least one site"));
        }
        if self.spin.twice() == 0 {
            return Err(invalid("spin must be positive"));
        }
        let dim = (self.spin.dim() as f64).powi(self.n as i32);
        if dim > MAX_DIM as f64 {
            return Err(Error::Resource {
                what: "spin chain state",
                dim: dim.min(usize::MAX as f64) as usize,
                limit: MAX_DIM,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.spin.dim().pow(self.n as u32)
    }

    pub fn tag(&self) -> BasisTag {
        if self.spin == Spin::HALF {
            BasisTag::QubitChain { n: self.n }
        } else {
            BasisTag::SpinChain {
                n: self.n,
                spin: self.spin,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    F,
    W,
    Ghz,
    Bell,
    Cluster,
    Product,
}

impl std::str::FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "f" => StateKind::F,
            "w" => StateKind::W,
            "ghz" => StateKind::Ghz,
            "bell" => StateKind::Bell,
            "cluster" => StateKind::Cluster,
            "product" => StateKind::Product,
            other => return Err(invalid(format!("unknown state kind '{other}'"))),
        })
    }
}

/// Index of the configuration whose site j carries local index `digits[j]`.
fn index_of(digits: impl Iterator<Item = usize>, d: usize) -> usize {
    digits.fold(0, |acc, x| acc * d + x)
}

/// Builds a named state. `product_sites` supplies one local vector per site
/// and is only read for [`StateKind::Product`].
pub fn named_state(
    kind: StateKind,
    spec: &SpinChainSpec,
    product_sites: Option<&[Vec<C64>]>,
) -> Result<StateVector> {
    spec.validate()?;
    let (n, d) = (spec.n, spec.spin.dim());
    let tag = spec.tag();
    let mut amps = vec![C64::new(0.0, 0.0); spec.dim()];
    match kind {
        StateKind::F => amps[0] = C64::new(1.0, 0.0),
        StateKind::W => {
            let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
            for i in 0..n {
                amps[index_of((0..n).map(|j| usize::from(j == i)), d)] = a;
            }
        }
        StateKind::Ghz => {
            let a = C64::new((d as f64).recip().sqrt(), 0.0);
            for l in 0..d {
                amps[index_of(std::iter::repeat_n(l, n), d)] = a;
            }
        }
        StateKind::Bell => {
            if n != 2 || spec.spin != Spin::HALF {
                return Err(invalid("Bell states need N = 2 and S = 1/2"));
            }
            let a = C64::new(0.5f64.sqrt(), 0.0);
            amps[0] = a;
            amps[3] = a;
        }
        StateKind::Cluster => {
            if spec.spin != Spin::HALF {
                return Err(invalid("cluster states are defined for qubits"));
            }
            return cluster_state(n);
        }
        StateKind::Product => {
            let sites =
                product_sites.ok_or_else(|| invalid("product state needs per-site vectors"))?;
            return StateVector::product(sites, tag);
        }
    }
    StateVector::new(amps, tag)
}

/// 1-D open cluster state: each up spin at j picks up the sign of `σ_z`
/// on site j+1, which counts as +1 past the end of the chain.
pub fn cluster_state(n: usize) -> Result<StateVector> {
    SpinChainSpec::new(n, Spin::HALF, Boundary::Open)?;
    let dim = 1usize << n;
    let up = |idx: usize, site: usize| idx >> (n - 1 - site) & 1 == 0;
    let scale = (dim as f64).sqrt().recip();
    let amps = (0..dim)
        .map(|idx| {
            let flips = (0..n.saturating_sub(1))
                .filter(|&j| up(idx, j) && !up(idx, j + 1))
                .count();
            C64::new(if flips % 2 == 0 { scale } else { -scale }, 0.0)
        })
        .collect();
    StateVector::new(amps, BasisTag::QubitChain { n })
}

/// Spin-1 AKLT valence-bond-solid state on a ring, as the trace of a
/// product of 2×2 tensors (local index 0 is `m = +1`).
pub fn aklt_vbs(n: usize, boundary: Boundary) -> Result<StateVector> {
    if boundary != Boundary::Periodic {
        return Err(invalid("the AKLT state is built on a periodic chain"));
    }
    if !(2..=MAX_AKLT_SITES).contains(&n) {
        return Err(invalid(format!(
            "AKLT chain needs 2 <= N <= {MAX_AKLT_SITES}, got {n}"
        )));
    }
    let a = (2.0f64 / 3.0).sqrt();
    let b = (1.0f64 / 3.0).sqrt();
    let tensors = [
        Matrix2::new(0.0, a, 0.0, 0.0),
        Matrix2::new(-b, 0.0, 0.0, b),
        Matrix2::new(0.0, 0.0, -a, 0.0),
    ];
    let dim = 3usize.pow(n as u32);
    let mut amps = Vec::with_capacity(dim);
    let mut stack = vec![Matrix2::identity(); n + 1];
    let mut digits = vec![0usize; n];
    for idx in 0..dim {
        // Recompute only the prefix products that changed since the last index.
        let changed = if idx == 0 {
            0
        } else {
            let mut pos = n - 1;
            while digits[pos] == 2 {
                digits[pos] = 0;
                pos -= 1;
            }
            digits[pos] += 1;
            pos
        };
        for site in changed..n {
            stack[site + 1] = stack[site] * tensors[digits[site]];
        }
        amps.push(C64::new(stack[n].trace(), 0.0));
    }
    StateVector::normalized(amps, BasisTag::SpinChain { n, spin: Spin::ONE })
}

/// Finite-N BCS ground state of the XY chain in the qubit basis,
/// `Π_{k>0} (u_k + i v_k c̃†_k c̃†_{-k}) |vac⟩` with
/// `c̃†_k = N^{-1/2} Σ_j e^{-ikj} c†_j`.
pub fn bcs_vector(n: usize, g: f64, gamma: f64) -> Result<StateVector> {
    if n > MAX_FERMION_MODES {
        return Err(Error::Resource {
            what: "BCS state vector",
            dim: 1usize << n.min(40),
            limit: 1 << MAX_FERMION_MODES,
        });
    }
    let p = XyParams::new(n, g, gamma)?;
    let sol = bogoliubov_solve(&p)?;
    let f = jw_fermion_ops(n)?;
    let creators: Vec<_> = (0..n).map(|j| f.cdag(j)).collect();
    let norm = (n as f64).sqrt().recip();
    let apply_mode = |k: f64, x: &[C64]| -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); x.len()];
        for (j, cd) in creators.iter().enumerate() {
            let w = C64::from_polar(norm, -k * j as f64);
            for (o, y) in out.iter_mut().zip(cd.mul_vec(x)) {
                *o += w * y;
            }
        }
        out
    };
    let mut psi = f.vacuum();
    for m in sol.positive() {
        let k = sol.ks[m];
        let pair = apply_mode(k, &apply_mode(-k, &psi));
        let iv = C64::new(0.0, sol.v[m]);
        psi = psi
            .iter()
            .zip(&pair)
            .map(|(&a, &b)| sol.u[m] * a + iv * b)
            .collect();
    }
    StateVector::normalized(psi, BasisTag::QubitChain { n })
}
