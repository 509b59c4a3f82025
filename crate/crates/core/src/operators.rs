//! Observable sets: Pauli, spin-S, Gell-Mann, local-algebra embeddings and
//! Jordan-Wigner fermion bilinears.
//!
//! Basis ordering convention used throughout the crate: site 0 is the most
//! significant digit of a basis index, and local index 0 is the largest
//! spin projection (`|↑⟩` for qubits, `m = +S` for spin S). A qubit `|↑⟩`
//! is an occupied fermion mode.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sparse::CsrMatrix;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Largest Hilbert-space dimension the operator constructors will build.
pub const MAX_DIM: usize = 1 << 20;
/// Largest number of Jordan-Wigner modes.
pub const MAX_FERMION_MODES: usize = 14;
/// Largest d accepted by [`su_basis`], which stores d² - 1 dense generators.
pub const MAX_SU_DIM: usize = 64;

const HERMITIAN_TOL: f64 = 1e-12;
const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A spin magnitude stored as the integer `2S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Spin(u32);

impl Spin {
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);

    pub fn from_twice(twice: u32) -> Self {
        Spin(twice)
    }

    /// Parses a spin magnitude such as `0.5`, `1`, `1.5`.
    pub fn from_f64(s: f64) -> Result<Self> {
        let twice = 2.0 * s;
        if twice < 0.0 || twice.is_nan() || (twice - twice.round()).abs() > 1e-9 || twice > 1e6 {
            return Err(invalid(format!(
                "spin {s} is not a non-negative half-integer"
            )));
        }
        Ok(Spin(twice.round() as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Local dimension `2S + 1`.
    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// Projection `m` of local index `i` (index 0 is `m = S`).
    pub fn m(self, i: usize) -> f64 {
        self.value() - i as f64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A Hermitian operator in sparse storage.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CsrMatrix<C64>,
}

impl HermitianOperator {
    /// Wraps a square matrix after checking Hermiticity elementwise.
    pub fn new(mat: CsrMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        let mut dev: f64 = 0.0;
        for (r, c, v) in mat.iter() {
            dev = dev.max((v - mat.get(c, r).conj()).norm());
        }
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { mat })
    }

    pub fn from_dense(m: &DMatrix<C64>) -> Result<Self> {
        Self::new(CsrMatrix::from_dense(m))
    }

    pub fn from_real(m: &CsrMatrix<f64>) -> Result<Self> {
        Self::new(m.map(|v| C64::new(v, 0.0)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CsrMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CsrMatrix::from_diagonal(&vec![ONE; dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CsrMatrix<C64> {
        &self.mat
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        self.mat.to_dense()
    }

    /// `Tr(self * other)`, real for Hermitian pairs.
    pub fn trace_product(&self, other: &Self) -> f64 {
        self.mat.trace_product_hermitian(&other.mat).re
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|v| v.re).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            mat: self.mat.scale(C64::new(s, 0.0)),
        }
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        Self {
            mat: self
                .mat
                .combine(C64::new(a, 0.0), &other.mat, C64::new(b, 0.0)),
        }
    }

    pub fn matmul(&self, other: &Self) -> CsrMatrix<C64> {
        self.mat.matmul(&other.mat)
    }

    /// `i [self, other]`, which is Hermitian.
    pub fn i_commutator(&self, other: &Self) -> Self {
        let ab = self.mat.matmul(&other.mat);
        let ba = other.mat.matmul(&self.mat);
        Self {
            mat: ab.combine(I, &ba, -I),
        }
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.mat.mul_vec(x)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.mat.max_abs_by(|v| v.norm())
    }
}

/// Hermitian combination `X + X†`.
pub(crate) fn hermitian_part(x: &CsrMatrix<C64>) -> HermitianOperator {
    HermitianOperator {
        mat: x.combine(ONE, &x.adjoint(), ONE),
    }
}

/// Hermitian combination `i (X - X†)`.
pub(crate) fn anti_hermitian_part(x: &CsrMatrix<C64>) -> HermitianOperator {
    HermitianOperator {
        mat: x.combine(I, &x.adjoint(), -I),
    }
}

/// An ordered, trace-orthogonal set of Hermitian operators spanning an
/// observable algebra, with its purity normalization `K`.
///
/// Purity is `K Σ ⟨A_α⟩²` over the stored operators. `norms[α]` is
/// `Tr(A_α²)`; `K` is fixed at construction so that a designated reference
/// state (a generalized coherent state of the algebra) has purity 1.
#[derive(Debug, Clone)]
pub struct ObservableBasis {
    name: String,
    ops: Vec<HermitianOperator>,
    norms: Vec<f64>,
    k: f64,
}

impl ObservableBasis {
    /// Builds a basis, checks trace-orthogonality and fixes `K` from the
    /// reference state's generator expectations.
    pub fn new(
        name: impl Into<String>,
        ops: Vec<HermitianOperator>,
        reference: &[C64],
    ) -> Result<Self> {
        let name = name.into();
        let dim = ops
            .first()
            .map(|a| a.dim())
            .ok_or_else(|| invalid("empty basis"))?;
        for a in &ops {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.dim(),
                });
            }
        }
        if reference.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: reference.len(),
            });
        }
        let norms: Vec<f64> = ops.iter().map(|a| a.trace_product(a)).collect();
        for (i, a) in ops.iter().enumerate() {
            if norms[i] <= 0.0 {
                return Err(invalid(format!("{name}: operator {i} vanishes")));
            }
            for (j, b) in ops.iter().enumerate().skip(i + 1) {
                let overlap = a.trace_product(b) / (norms[i] * norms[j]).sqrt();
                if overlap.abs() > ORTHOGONALITY_TOL {
                    return Err(invalid(format!(
                        "{name}: operators {i} and {j} are not trace-orthogonal ({overlap:.3e})"
                    )));
                }
            }
        }
        let total: f64 = ops
            .iter()
            .map(|a| a.matrix().quadratic_form(reference).re.powi(2))
            .sum();
        if total <= 0.0 {
            return Err(invalid(format!(
                "{name}: reference state has zero projection"
            )));
        }
        Ok(Self {
            name,
            ops,
            norms,
            k: 1.0 / total,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ops(&self) -> &[HermitianOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    /// `Tr(A_α²)` per operator.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// The common `Tr(A_α²)` if all operators share it.
    pub fn uniform_norm(&self) -> Option<f64> {
        let c = self.norms[0];
        self.norms
            .iter()
            .all(|&n| (n - c).abs() <= 1e-10 * c)
            .then_some(c)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Concatenates two bases acting on the same space; `K` is recomputed
    /// against `reference`.
    pub fn extend(
        &self,
        name: impl Into<String>,
        extra: Vec<HermitianOperator>,
        reference: &[C64],
    ) -> Result<Self> {
        let mut ops = self.ops.clone();
        ops.extend(extra);
        Self::new(name, ops, reference)
    }

    /// Quadratic Casimir `Σ_α A_α²`.
    pub fn casimir(&self) -> HermitianOperator {
        let dim = self.dim();
        let mut acc = CsrMatrix::zeros(dim, dim);
        for a in &self.ops {
            acc = acc.combine(ONE, &a.matmul(a), ONE);
        }
        HermitianOperator { mat: acc }
    }
}

/// Single-site basis state `|0…0⟩` of a product space.
pub(crate) fn first_basis_state(dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[0] = ONE;
    v
}

fn checked_dim(dims: &[usize]) -> Result<usize> {
    let mut total: usize = 1;
    for &d in dims {
        total = total
            .checked_mul(d)
            .filter(|&t| t <= MAX_DIM)
            .ok_or(Error::Resource {
                what: "Hilbert space",
                dim: usize::MAX,
                limit: MAX_DIM,
            })?;
    }
    Ok(total)
}

/// Embeds a local matrix acting on `site` of a product space with local
/// dimensions `dims` (identities elsewhere, unnormalized).
pub fn embed(local: &DMatrix<C64>, dims: &[usize], site: usize) -> CsrMatrix<C64> {
    let d = dims[site];
    assert_eq!(local.nrows(), d);
    let total: usize = dims.iter().product();
    let stride: usize = dims[site + 1..].iter().product();
    let mut entries = Vec::new();
    for col in 0..total {
        let b = (col / stride) % d;
        for a in 0..d {
            let v = local[(a, b)];
            if v != ZERO {
                let row = col + a * stride - b * stride;
                entries.push((row, col, v));
            }
        }
    }
    CsrMatrix::from_triplets(total, total, entries)
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// The raw Pauli operators `σ_x^i, σ_y^i, σ_z^i` on N qubits, site-major.
/// `Tr(A_α A_β) = 2^N δ_αβ` and `K = 1/N`, so product states have purity 1.
pub fn pauli_basis(n: usize) -> Result<ObservableBasis> {
    if n == 0 {
        return Err(invalid("pauli_basis needs at least one site"));
    }
    let dims = vec![2; n];
    let dim = checked_dim(&dims)?;
    let locals = [pauli_x(), pauli_y(), pauli_z()];
    let mut ops = Vec::with_capacity(3 * n);
    for site in 0..n {
        for m in &locals {
            ops.push(HermitianOperator {
                mat: embed(m, &dims, site),
            });
        }
    }
    ObservableBasis::new(format!("pauli({n})"), ops, &first_basis_state(dim))
}

/// The eight Gell-Mann matrices, normalized to `Tr(λ_α λ_β) = δ_αβ`.
pub fn gell_mann_matrices() -> Vec<DMatrix<C64>> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let e = |entries: &[(usize, usize, C64)], scale: C64| {
        let mut m = DMatrix::from_element(3, 3, ZERO);
        for &(r, c, v) in entries {
            m[(r, c)] = v * scale;
        }
        m
    };
    vec![
        e(&[(0, 1, ONE), (1, 0, ONE)], s),
        e(&[(0, 1, -I), (1, 0, I)], s),
        e(&[(0, 0, ONE), (1, 1, -ONE)], s),
        e(&[(0, 2, ONE), (2, 0, ONE)], s),
        e(&[(0, 2, -I), (2, 0, I)], s),
        e(&[(1, 2, ONE), (2, 1, ONE)], s),
        e(&[(1, 2, -I), (2, 1, I)], s),
        e(
            &[(0, 0, ONE), (1, 1, ONE), (2, 2, C64::new(-2.0, 0.0))],
            C64::new(1.0 / 6f64.sqrt(), 0.0),
        ),
    ]
}

/// su(3) on a single qutrit, `K = 3/2`.
pub fn gell_mann_basis() -> Result<ObservableBasis> {
    let ops = gell_mann_matrices()
        .iter()
        .map(HermitianOperator::from_dense)
        .collect::<Result<Vec<_>>>()?;
    ObservableBasis::new("su(3)", ops, &first_basis_state(3))
}

/// Generalized Gell-Mann matrices for su(d), orthonormal under the trace.
/// For d = 2 these are `σ/√2`, for d = 3 the standard Gell-Mann set.
pub fn generalized_gell_mann(d: usize) -> Vec<DMatrix<C64>> {
    match d {
        2 => [pauli_x(), pauli_y(), pauli_z()]
            .into_iter()
            .map(|m| m * C64::new(FRAC_1_SQRT_2, 0.0))
            .collect(),
        3 => gell_mann_matrices(),
        _ => {
            let s = C64::new(FRAC_1_SQRT_2, 0.0);
            let mut out = Vec::with_capacity(d * d - 1);
            for j in 0..d {
                for k in j + 1..d {
                    let mut sym = DMatrix::from_element(d, d, ZERO);
                    sym[(j, k)] = s;
                    sym[(k, j)] = s;
                    out.push(sym);
                    let mut anti = DMatrix::from_element(d, d, ZERO);
                    anti[(j, k)] = -I * s;
                    anti[(k, j)] = I * s;
                    out.push(anti);
                }
            }
            for l in 1..d {
                let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
                let mut diag = DMatrix::from_element(d, d, ZERO);
                for m in 0..l {
                    diag[(m, m)] = C64::new(norm, 0.0);
                }
                diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
                out.push(diag);
            }
            out
        }
    }
}

/// The full algebra su(d) of traceless observables on a d-level system;
/// every pure state has purity 1 and `K = d/(d-1)`.
pub fn su_basis(d: usize) -> Result<ObservableBasis> {
    if d < 2 {
        return Err(invalid("su(d) needs d >= 2"));
    }
    if d > MAX_SU_DIM {
        return Err(Error::Resource {
            what: "su(d) generator set",
            dim: d,
            limit: MAX_SU_DIM,
        });
    }
    let ops = generalized_gell_mann(d)
        .iter()
        .map(HermitianOperator::from_dense)
        .collect::<Result<Vec<_>>>()?;
    ObservableBasis::new(format!("su({d})"), ops, &first_basis_state(d))
}

/// Spin matrices `(S_x, S_y, S_z)` for magnitude S, with `S_z` diagonal
/// and descending from `S` to `-S`.
pub fn spin_matrices(spin: Spin) -> [DMatrix<C64>; 3] {
    let d = spin.dim();
    let s = spin.value();
    let mut sp = DMatrix::from_element(d, d, ZERO);
    let mut sz = DMatrix::from_element(d, d, ZERO);
    for i in 0..d {
        let m = spin.m(i);
        sz[(i, i)] = C64::new(m, 0.0);
        if i > 0 {
            // S_+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>, and m+1 sits at index i-1.
            sp[(i - 1, i)] = C64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let sm = sp.adjoint();
    let sx = (&sp + &sm) * C64::new(0.5, 0.0);
    let sy = (&sp - &sm) * C64::new(0.0, -0.5);
    [sx, sy, sz]
}

/// Local algebra `⊕_j su(d_j)` with orthonormal single-site generators
/// embedded as `1 ⊗ … ⊗ A ⊗ … ⊗ 1`. `K = 1/(N - Σ 1/d_j)`, the value for
/// which product states have purity 1.
pub fn local_algebra_basis(dims: &[usize]) -> Result<ObservableBasis> {
    if dims.is_empty() {
        return Err(invalid("local algebra needs at least one subsystem"));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(invalid(format!("subsystem dimension {d} < 2")));
    }
    let dim = checked_dim(dims)?;
    let mut ops = Vec::new();
    for (site, &d) in dims.iter().enumerate() {
        for m in generalized_gell_mann(d) {
            ops.push(HermitianOperator {
                mat: embed(&m, dims, site),
            });
        }
    }
    let label: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    ObservableBasis::new(
        format!("local[{}]", label.join(",")),
        ops,
        &first_basis_state(dim),
    )
}

/// Local spin rotations `⊕_i su(2)_i` generated by the spin-S matrices on
/// each of N sites. `K = 1/(N S²)`.
pub fn local_spin_basis(n: usize, spin: Spin) -> Result<ObservableBasis> {
    if n == 0 || spin.twice() == 0 {
        return Err(invalid("local spin basis needs N >= 1 and S > 0"));
    }
    let dims = vec![spin.dim(); n];
    let dim = checked_dim(&dims)?;
    let mats = spin_matrices(spin);
    let mut ops = Vec::with_capacity(3 * n);
    for site in 0..n {
        for m in &mats {
            ops.push(HermitianOperator {
                mat: embed(m, &dims, site),
            });
        }
    }
    ObservableBasis::new(
        format!("su(2)^{n} spin {spin}"),
        ops,
        &first_basis_state(dim),
    )
}

/// Collective spin components `J_α = Σ_i σ_α^i / 2` on N qubits.
pub fn collective_spin(n: usize) -> Result<[HermitianOperator; 3]> {
    let dims = vec![2; n];
    let dim = checked_dim(&dims)?;
    let mats = spin_matrices(Spin::HALF);
    let mut out: [CsrMatrix<C64>; 3] = [
        CsrMatrix::zeros(dim, dim),
        CsrMatrix::zeros(dim, dim),
        CsrMatrix::zeros(dim, dim),
    ];
    for site in 0..n {
        for (acc, m) in out.iter_mut().zip(&mats) {
            *acc = acc.combine(ONE, &embed(m, &dims, site), ONE);
        }
    }
    let [x, y, z] = out;
    Ok([
        HermitianOperator { mat: x },
        HermitianOperator { mat: y },
        HermitianOperator { mat: z },
    ])
}

/// Global su(2) spanned by the collective spin on N qubits, `K = 4/N²`.
pub fn collective_spin_basis(n: usize) -> Result<ObservableBasis> {
    if n == 0 {
        return Err(invalid("collective spin needs N >= 1"));
    }
    let ops = collective_spin(n)?.to_vec();
    ObservableBasis::new(
        format!("su(2) collective N={n}"),
        ops,
        &first_basis_state(1 << n),
    )
}

/// Spin-J multiplet algebra `{J_x, J_y, J_z}` (`K = 1/J²`).
pub fn multiplet_spin_basis(j: Spin) -> Result<ObservableBasis> {
    if j.twice() == 0 {
        return Err(invalid("spin-0 multiplet has no algebra"));
    }
    let ops = spin_matrices(j)
        .iter()
        .map(HermitianOperator::from_dense)
        .collect::<Result<Vec<_>>>()?;
    ObservableBasis::new(format!("su(2) J={j}"), ops, &first_basis_state(j.dim()))
}

/// The single observable `J_z` on a spin-J multiplet, `K = 1/J²`.
pub fn jz_basis(j: Spin) -> Result<ObservableBasis> {
    if j.twice() == 0 {
        return Err(invalid("spin-0 multiplet has no J_z purity"));
    }
    let [_, _, jz] = spin_matrices(j);
    ObservableBasis::new(
        format!("J_z J={j}"),
        vec![HermitianOperator::from_dense(&jz)?],
        &first_basis_state(j.dim()),
    )
}

/// Jordan-Wigner fermions on N qubits:
/// `c_j† = Π_{l<j} (-σ_z^l) σ_+^j`, so an occupied mode is `|↑⟩`.
#[derive(Debug, Clone)]
pub struct FermionOps {
    n: usize,
    annihilators: Vec<CsrMatrix<C64>>,
}

impl FermionOps {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `c_j`.
    pub fn c(&self, j: usize) -> &CsrMatrix<C64> {
        &self.annihilators[j]
    }

    /// `c_j†`.
    pub fn cdag(&self, j: usize) -> CsrMatrix<C64> {
        self.annihilators[j].adjoint()
    }

    /// Number operator `c_j† c_j`.
    pub fn number(&self, j: usize) -> HermitianOperator {
        HermitianOperator {
            mat: self.cdag(j).matmul(self.c(j)),
        }
    }

    /// Index of the empty state `|↓…↓⟩`.
    pub fn vacuum_index(&self) -> usize {
        self.dim() - 1
    }

    pub fn vacuum(&self) -> Vec<C64> {
        let mut v = vec![ZERO; self.dim()];
        v[self.vacuum_index()] = ONE;
        v
    }
}

/// Builds the Jordan-Wigner fermion operators on N modes.
pub fn jw_fermion_ops(n: usize) -> Result<FermionOps> {
    if n == 0 {
        return Err(invalid("need at least one fermion mode"));
    }
    if n > MAX_FERMION_MODES {
        return Err(Error::Resource {
            what: "Jordan-Wigner operators",
            dim: 1usize << n.min(63),
            limit: 1 << MAX_FERMION_MODES,
        });
    }
    let dim = 1usize << n;
    let annihilators = (0..n)
        .map(|j| {
            let bit = n - 1 - j;
            let before_mask = !((1usize << (bit + 1)) - 1) & (dim - 1);
            let mut entries = Vec::with_capacity(dim / 2);
            for idx in 0..dim {
                // Occupied (↑) is digit 0.
                if idx >> bit & 1 == 0 {
                    let occupied_before = (before_mask & !idx).count_ones();
                    let sign = if occupied_before.is_multiple_of(2) {
                        1.0
                    } else {
                        -1.0
                    };
                    entries.push((idx | 1 << bit, idx, C64::new(sign, 0.0)));
                }
            }
            CsrMatrix::from_triplets(dim, dim, entries)
        })
        .collect();
    Ok(FermionOps { n, annihilators })
}

/// u(N) bilinears: `c_j†c_j' + h.c.` and `i(c_j†c_j' - h.c.)` for j < j',
/// then `√2 (n_j - 1/2)`. Uniform trace norm `2^(N-1)`; `K = 2/N`.
pub fn un_basis(f: &FermionOps) -> Result<ObservableBasis> {
    let n = f.n();
    let cdag: Vec<_> = (0..n).map(|j| f.cdag(j)).collect();
    let mut ops = Vec::with_capacity(n * n);
    let mut antis = Vec::new();
    for (j, cd) in cdag.iter().enumerate() {
        for jp in j + 1..n {
            let hop = cd.matmul(f.c(jp));
            ops.push(hermitian_part(&hop));
            antis.push(anti_hermitian_part(&hop));
        }
    }
    ops.extend(antis);
    let half = HermitianOperator::identity(f.dim()).scale(0.5);
    for j in 0..n {
        ops.push(f.number(j).combine(2f64.sqrt(), &half, -2f64.sqrt()));
    }
    ObservableBasis::new(format!("u({n})"), ops, &f.vacuum())
}

/// Pairing operators `c_j†c_j'† + c_j' c_j` and `i(c_j†c_j'† - c_j' c_j)`,
/// j < j', which extend u(N) to so(2N).
pub fn pairing_operators(f: &FermionOps) -> Vec<HermitianOperator> {
    let n = f.n();
    let cdag: Vec<_> = (0..n).map(|j| f.cdag(j)).collect();
    let mut sym = Vec::new();
    let mut anti = Vec::new();
    for j in 0..n {
        for jp in j + 1..n {
            let pair = cdag[j].matmul(&cdag[jp]);
            sym.push(hermitian_part(&pair));
            anti.push(anti_hermitian_part(&pair));
        }
    }
    sym.extend(anti);
    sym
}

/// so(2N) = u(N) ⊕ r. Uniform trace norm `2^(N-1)`; `K = 2/N`.
pub fn so2n_extension(f: &FermionOps) -> Result<ObservableBasis> {
    let un = un_basis(f)?;
    un.extend(
        format!("so({})", 2 * f.n()),
        pairing_operators(f),
        &f.vacuum(),
    )
}

/// Projects a Hermitian operator onto the real span of `basis` and returns
/// the Frobenius norm of the remainder.
pub fn span_residual(op: &HermitianOperator, basis: &ObservableBasis) -> f64 {
    let mut proj = HermitianOperator::zeros(op.dim());
    for (a, &c) in basis.ops().iter().zip(basis.norms()) {
        let coeff = a.trace_product(op) / c;
        proj = proj.combine(1.0, a, coeff);
    }
    let rest = op.combine(1.0, &proj, -1.0);
    rest.trace_product(&rest).max(0.0).sqrt()
}
