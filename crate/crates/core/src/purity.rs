//! Expectation values, relative purity, algebra projection, invariant
//! uncertainty, subsystem purity and the Meyer-Wallach measure.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{expi_hermitian, hermitian_eigen};
use crate::operators::{HermitianOperator, ObservableBasis, Spin, C64, ZERO};

const NORM_TOL: f64 = 1e-12;
const DENSE_LIMIT: usize = 4096;

/// What the amplitude index of a [`StateVector`] enumerates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisTag {
    /// N qubits, `|↑⟩` is local index 0.
    QubitChain { n: usize },
    /// N spins of magnitude S, local index 0 is `m = S`.
    SpinChain { n: usize, spin: Spin },
    /// A single spin-J multiplet `|J, m⟩`, index 0 is `m = J`.
    SpinMultiplet { j: Spin },
    /// Jordan-Wigner Fock space of N modes (qubit encoding, `|↑⟩` occupied).
    FermionFock { n: usize },
    /// Generic tensor product with the given local dimensions.
    Product { dims: Vec<usize> },
}

impl BasisTag {
    /// Local dimensions of the tensor factors.
    pub fn dims(&self) -> Vec<usize> {
        match self {
            BasisTag::QubitChain { n } | BasisTag::FermionFock { n } => vec![2; *n],
            BasisTag::SpinChain { n, spin } => vec![spin.dim(); *n],
            BasisTag::SpinMultiplet { j } => vec![j.dim()],
            BasisTag::Product { dims } => dims.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    pub fn is_qubit_chain(&self) -> bool {
        matches!(
            self,
            BasisTag::QubitChain { .. } | BasisTag::FermionFock { .. }
        ) || matches!(self, BasisTag::SpinChain { spin, .. } if *spin == Spin::HALF)
            || matches!(self, BasisTag::Product { dims } if dims.iter().all(|&d| d == 2))
    }
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    tag: BasisTag,
}

impl StateVector {
    /// Wraps amplitudes that are already normalized to 1e-12.
    pub fn new(amplitudes: Vec<C64>, tag: BasisTag) -> Result<Self> {
        if amplitudes.len() != tag.dim() {
            return Err(Error::DimensionMismatch {
                expected: tag.dim(),
                found: amplitudes.len(),
            });
        }
        let norm = l2(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, tag })
    }

    /// Rescales to unit norm; zero and non-finite vectors are rejected.
    pub fn normalized(mut amplitudes: Vec<C64>, tag: BasisTag) -> Result<Self> {
        let norm = l2(&amplitudes);
        if !(norm.is_finite() && norm > 1e-300) {
            return Err(Error::NotNormalized(norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes, tag)
    }

    pub fn from_real(amplitudes: &[f64], tag: BasisTag) -> Result<Self> {
        Self::normalized(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect(), tag)
    }

    /// Computational basis state `index`.
    pub fn basis_state(index: usize, tag: BasisTag) -> Result<Self> {
        let mut v = vec![ZERO; tag.dim()];
        *v.get_mut(index)
            .ok_or_else(|| invalid(format!("basis index {index} out of range")))? =
            C64::new(1.0, 0.0);
        Self::new(v, tag)
    }

    /// Tensor product of normalized local states.
    pub fn product(sites: &[Vec<C64>], tag: BasisTag) -> Result<Self> {
        let dims = tag.dims();
        if dims.len() != sites.len() {
            return Err(Error::DimensionMismatch {
                expected: dims.len(),
                found: sites.len(),
            });
        }
        let mut amps = vec![C64::new(1.0, 0.0)];
        for (site, &d) in sites.iter().zip(&dims) {
            if site.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: site.len(),
                });
            }
            let n = l2(site);
            if n < 1e-300 {
                return Err(Error::NotNormalized(n));
            }
            amps = amps
                .iter()
                .flat_map(|&a| site.iter().map(move |&b| a * b / n))
                .collect();
        }
        Self::normalized(amps, tag)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tag(&self) -> &BasisTag {
        &self.tag
    }

    pub fn with_tag(mut self, tag: BasisTag) -> Result<Self> {
        if tag.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: tag.dim(),
            });
        }
        self.tag = tag;
        Ok(self)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|ψ⟩⟨ψ|` as a Hermitian operator.
    pub fn density(&self) -> HermitianOperator {
        let nz: Vec<(usize, C64)> = self
            .amplitudes
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .collect();
        let mut entries = Vec::with_capacity(nz.len() * nz.len());
        for &(i, a) in &nz {
            for &(j, b) in &nz {
                entries.push((i, j, a * b.conj()));
            }
        }
        HermitianOperator::new(crate::sparse::CsrMatrix::from_triplets(
            self.dim(),
            self.dim(),
            entries,
        ))
        .expect("outer product is Hermitian")
    }
}

fn l2(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `⟨ψ|A|ψ⟩`, rejecting a non-negligible imaginary part.
pub fn expectation(op: &HermitianOperator, psi: &StateVector) -> Result<f64> {
    check_dim(op.dim(), psi.dim())?;
    let v = op.matrix().quadratic_form(psi.amplitudes());
    if v.im.abs() > 1e-12 * op.max_abs().max(1.0) {
        return Err(Error::ComplexExpectation(v.im));
    }
    Ok(v.re)
}

/// Relative purity with its per-generator expectations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityReport {
    pub value: f64,
    pub per_generator: Vec<f64>,
    pub k_used: f64,
}

/// `P = K Σ_α ⟨A_α⟩²`.
pub fn relative_purity(basis: &ObservableBasis, psi: &StateVector) -> Result<PurityReport> {
    check_dim(basis.dim(), psi.dim())?;
    let per_generator = basis
        .ops()
        .iter()
        .map(|a| expectation(a, psi))
        .collect::<Result<Vec<_>>>()?;
    let value = basis.k() * per_generator.iter().map(|x| x * x).sum::<f64>();
    Ok(PurityReport {
        value,
        per_generator,
        k_used: basis.k(),
    })
}

/// Checks trace one and positivity of a density operator.
pub fn validate_density(rho: &HermitianOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::NotDensity(format!("trace {tr}")));
    }
    if rho.dim() > DENSE_LIMIT {
        return Err(Error::Resource {
            what: "density positivity check",
            dim: rho.dim(),
            limit: DENSE_LIMIT,
        });
    }
    let (vals, _) = hermitian_eigen(&rho.to_dense());
    if let Some(&min) = vals.first() {
        if min < -1e-10 {
            return Err(Error::NotDensity(format!("eigenvalue {min:.3e}")));
        }
    }
    Ok(())
}

/// Orthogonal projection `Σ_α Tr(A_α ρ) A_α / Tr(A_α²)` of a density
/// operator onto the span of `basis`. For a uniform norm `c`,
/// `K c Tr(P²)` equals the relative purity of a pure `ρ`.
pub fn project_onto_algebra(
    rho: &HermitianOperator,
    basis: &ObservableBasis,
) -> Result<HermitianOperator> {
    check_dim(basis.dim(), rho.dim())?;
    validate_density(rho)?;
    let mut out = HermitianOperator::zeros(rho.dim());
    for (a, &c) in basis.ops().iter().zip(basis.norms()) {
        let coeff = a.trace_product(rho) / c;
        if coeff != 0.0 {
            out = out.combine(1.0, a, coeff);
        }
    }
    Ok(out)
}

/// `Σ_α (⟨A_α²⟩ - ⟨A_α⟩²)`, evaluated as `Σ_α (‖A_α ψ‖² - ⟨A_α⟩²)`.
pub fn invariant_uncertainty(basis: &ObservableBasis, psi: &StateVector) -> Result<f64> {
    check_dim(basis.dim(), psi.dim())?;
    let mut total = 0.0;
    for a in basis.ops() {
        let av = a.apply(psi.amplitudes());
        let second = l2(&av).powi(2);
        let first: f64 = psi
            .amplitudes()
            .iter()
            .zip(&av)
            .map(|(p, q)| p.conj() * q)
            .sum::<C64>()
            .re;
        total += second - first * first;
    }
    Ok(total)
}

/// The same quantity through the Casimir operator, `⟨C₂⟩ - Σ_α ⟨A_α⟩²`.
pub fn invariant_uncertainty_casimir(basis: &ObservableBasis, psi: &StateVector) -> Result<f64> {
    let c2 = expectation(&basis.casimir(), psi)?;
    let report = relative_purity(basis, psi)?;
    Ok(c2 - report.per_generator.iter().map(|x| x * x).sum::<f64>())
}

fn check_dims(psi: &StateVector, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(invalid("empty or zero subsystem dimension"));
    }
    check_dim(psi.dim(), dims.iter().product())
}

/// Reduced density matrix on the sites `keep` (in the given order).
pub fn reduced_density(psi: &StateVector, dims: &[usize], keep: &[usize]) -> Result<DMatrix<C64>> {
    check_dims(psi, dims)?;
    let n = dims.len();
    let mut seen = vec![false; n];
    for &k in keep {
        if k >= n || seen[k] {
            return Err(invalid(format!("invalid subsystem list {keep:?}")));
        }
        seen[k] = true;
    }
    let rest: Vec<usize> = (0..n).filter(|i| !seen[*i]).collect();
    let dk: usize = keep.iter().map(|&i| dims[i]).product();
    let dr: usize = rest.iter().map(|&i| dims[i]).product();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    // Reshape ψ into an (dk × dr) matrix M so that ρ = M M†.
    let offsets = |sites: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for &s in sites.iter().rev() {
                    off += (idx % dims[s]) * strides[s];
                    idx /= dims[s];
                }
                off
            })
            .collect()
    };
    let ko = offsets(keep, dk);
    let ro = offsets(&rest, dr);
    let amps = psi.amplitudes();
    let m = DMatrix::from_fn(dk, dr, |a, b| amps[ko[a] + ro[b]]);
    Ok(&m * m.adjoint())
}

/// Local (subsystem) purity `K' Σ_j (Tr ρ_j² - 1/d_j)`, `K' = 1/(N - Σ 1/d_j)`.
pub fn local_purity(psi: &StateVector, dims: &[usize]) -> Result<f64> {
    check_dims(psi, dims)?;
    if dims.iter().any(|&d| d < 2) {
        return Err(invalid("local dimensions must be at least 2"));
    }
    let mut sum = 0.0;
    let mut denom = 0.0;
    for (j, &d) in dims.iter().enumerate() {
        let rho = reduced_density(psi, dims, &[j])?;
        let tr2: f64 = rho.iter().map(|v| v.norm_sqr()).sum();
        sum += tr2 - 1.0 / d as f64;
        denom += 1.0 - 1.0 / d as f64;
    }
    Ok(sum / denom)
}

/// Meyer-Wallach `Q = (4/N) Σ_j D(ι_j(0)ψ, ι_j(1)ψ)` with
/// `D(u, v) = ½ Σ_{i,i'} |u_i v_i' - u_i' v_i|²`.
pub fn meyer_wallach_q(psi: &StateVector) -> Result<f64> {
    if !psi.tag().is_qubit_chain() {
        return Err(invalid("Meyer-Wallach Q is defined for qubit states"));
    }
    let n = psi.tag().dims().len();
    let amps = psi.amplitudes();
    let half = amps.len() / 2;
    let mut total = 0.0;
    for j in 0..n {
        let bit = n - 1 - j;
        let low = (1usize << bit) - 1;
        let mut u = Vec::with_capacity(half);
        let mut v = Vec::with_capacity(half);
        for k in 0..half {
            // Insert digit b at position `bit` of the reduced index k.
            let base = ((k & !low) << 1) | (k & low);
            u.push(amps[base]);
            v.push(amps[base | 1 << bit]);
        }
        let mut d = 0.0;
        for i in 0..half {
            for ip in i + 1..half {
                d += (u[i] * v[ip] - u[ip] * v[i]).norm_sqr();
            }
        }
        total += d;
    }
    Ok(4.0 / n as f64 * total)
}

/// Haar-random pure state drawn from complex Gaussians.
pub fn random_state<R: Rng + ?Sized>(tag: BasisTag, rng: &mut R) -> StateVector {
    let dim = tag.dim();
    let amps = (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps, tag).expect("Gaussian vector is nonzero")
}

/// Applies `exp(i Σ_β t_β A_β)` to a state.
pub fn rotate(basis: &ObservableBasis, t: &[f64], psi: &StateVector) -> Result<StateVector> {
    check_dim(basis.len(), t.len())?;
    check_dim(basis.dim(), psi.dim())?;
    if psi.dim() > DENSE_LIMIT {
        return Err(Error::Resource {
            what: "group rotation",
            dim: psi.dim(),
            limit: DENSE_LIMIT,
        });
    }
    let mut gen = HermitianOperator::zeros(psi.dim());
    for (a, &ti) in basis.ops().iter().zip(t) {
        gen = gen.combine(1.0, a, ti);
    }
    let u = expi_hermitian(&gen.to_dense());
    let out = u * DVector::from_column_slice(psi.amplitudes());
    StateVector::normalized(out.iter().copied().collect(), psi.tag().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{
        collective_spin_basis, local_algebra_basis, local_spin_basis, pauli_basis, pauli_z,
        su_basis,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn qubits(n: usize) -> BasisTag {
        BasisTag::QubitChain { n }
    }

    fn bell() -> StateVector {
        StateVector::from_real(&[1.0, 0.0, 0.0, 1.0], qubits(2)).unwrap()
    }

    #[test]
    fn pauli_expectations() {
        let up = StateVector::basis_state(0, qubits(1)).unwrap();
        let b = pauli_basis(1).unwrap();
        assert_eq!(expectation(&b.ops()[2], &up).unwrap(), 1.0);
        assert_eq!(expectation(&b.ops()[0], &up).unwrap(), 0.0);
    }

    #[test]
    fn product_states_have_unit_purity() {
        let b = pauli_basis(3).unwrap();
        let up = StateVector::basis_state(0, qubits(3)).unwrap();
        assert!((relative_purity(&b, &up).unwrap().value - 1.0).abs() < 1e-14);
        let loc = local_algebra_basis(&[2, 2]).unwrap();
        let up2 = StateVector::basis_state(0, qubits(2)).unwrap();
        assert!((relative_purity(&loc, &up2).unwrap().value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let loc = local_algebra_basis(&[2, 2]).unwrap();
        let r = relative_purity(&loc, &bell()).unwrap();
        assert!(r.value.abs() < 1e-15);
        let p = project_onto_algebra(&bell().density(), &loc).unwrap();
        assert!(p.max_abs() < 1e-15);
    }

    #[test]
    fn spin_one_zero_state_has_zero_local_spin_purity() {
        let b = local_spin_basis(2, Spin::ONE).unwrap();
        let tag = BasisTag::SpinChain {
            n: 2,
            spin: Spin::ONE,
        };
        let psi = StateVector::basis_state(4, tag).unwrap();
        assert!(relative_purity(&b, &psi).unwrap().value.abs() < 1e-15);
    }

    #[test]
    fn w_state_four_qubits() {
        let mut amps = vec![0.0; 16];
        for j in 0..4 {
            amps[1 << j] = 1.0;
        }
        // One flip away from |↓↓↓↓⟩ is the same as three flips from |↑↑↑↑⟩;
        // the local purity only sees ⟨σ_z⟩ = ±(N-2)/N.
        let psi = StateVector::from_real(&amps, qubits(4)).unwrap();
        let loc = local_algebra_basis(&[2; 4]).unwrap();
        let p = relative_purity(&loc, &psi).unwrap().value;
        assert!((p - 0.25).abs() < 1e-14);
    }

    #[test]
    fn projection_of_pure_qubit() {
        let su2 = su_basis(2).unwrap();
        let up = StateVector::basis_state(0, qubits(1)).unwrap();
        let p = project_onto_algebra(&up.density(), &su2).unwrap();
        let expected = pauli_z() * c(0.5);
        assert!((p.to_dense() - expected).iter().all(|v| v.norm() < 1e-15));
        let mixed = HermitianOperator::identity(2).scale(0.5);
        assert!(project_onto_algebra(&mixed, &su2).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn projection_rejects_non_density() {
        let su2 = su_basis(2).unwrap();
        assert!(project_onto_algebra(&HermitianOperator::identity(2), &su2).is_err());
    }

    #[test]
    fn triplet_and_singlet_uncertainty() {
        let b = collective_spin_basis(2).unwrap();
        let r = 1.0 / 2f64.sqrt();
        let cases = [
            (StateVector::basis_state(0, qubits(2)).unwrap(), 1.0),
            (
                StateVector::from_real(&[0.0, r, r, 0.0], qubits(2)).unwrap(),
                2.0,
            ),
            (
                StateVector::from_real(&[0.0, r, -r, 0.0], qubits(2)).unwrap(),
                0.0,
            ),
        ];
        for (psi, expected) in cases {
            let direct = invariant_uncertainty(&b, &psi).unwrap();
            let casimir = invariant_uncertainty_casimir(&b, &psi).unwrap();
            assert!((direct - expected).abs() < 1e-14, "{direct} vs {expected}");
            assert!((casimir - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn ghz_local_purity_and_q() {
        let mut amps = vec![0.0; 8];
        amps[0] = 1.0;
        amps[7] = 1.0;
        let ghz = StateVector::from_real(&amps, qubits(3)).unwrap();
        assert!(local_purity(&ghz, &[2, 2, 2]).unwrap().abs() < 1e-15);
        assert!((meyer_wallach_q(&ghz).unwrap() - 1.0).abs() < 1e-14);
        let prod = StateVector::basis_state(5, qubits(3)).unwrap();
        assert!(meyer_wallach_q(&prod).unwrap().abs() < 1e-15);
        assert!((local_purity(&prod, &[2, 2, 2]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn q_matches_local_purity_on_random_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = random_state(qubits(8), &mut rng);
        let q = meyer_wallach_q(&psi).unwrap();
        let p = local_purity(&psi, &[2; 8]).unwrap();
        assert!((q - (1.0 - p)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            StateVector::new(vec![c(1.0), c(1.0)], qubits(1)),
            Err(Error::NotNormalized(_))
        ));
        assert!(StateVector::normalized(vec![c(0.0); 2], qubits(1)).is_err());
        let b = pauli_basis(2).unwrap();
        let psi = StateVector::basis_state(0, qubits(1)).unwrap();
        assert!(matches!(
            relative_purity(&b, &psi),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(local_purity(&psi, &[3]).is_err());
        let qutrit = StateVector::basis_state(0, BasisTag::Product { dims: vec![3] }).unwrap();
        assert!(meyer_wallach_q(&qutrit).is_err());
    }
}
