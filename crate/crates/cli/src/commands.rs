//! Command implementations, independent of argument parsing.

use std::path::{Path, PathBuf};
use std::time::Instant;

use genent::ed_oracle::{
    ed_spin_correlators, lmg_collective, lmg_collective_unchecked, sigma_z, xy_ed_sector,
};
use genent::fit::{fit_exponent, ExponentFit, FitModel};
use genent::lmg::{lmg_sweep, solve, LmgParams, DEFAULT_JUMP_THRESHOLD};
use genent::operators::*;
use genent::purity::{local_purity, relative_purity, BasisTag, StateVector};
use genent::states::{
    aklt_vbs, bcs_vector, cluster_state, named_state, Boundary, SpinChainSpec, StateKind,
};
use genent::xy_chain::*;
use serde::{Deserialize, Serialize};

use crate::error::{spec, CliError, Result};
use crate::output::{emit, emit_json, Table};
use crate::spec::{select_columns, Model, Range, SweepSpec};

/// Builds the selected columns of a sweep, plus model-specific extras (the
/// first-order transition scan for LMG). XY sweeps compute only the
/// selected quantities.
pub fn sweep_table(s: &SweepSpec) -> Result<(Table, Option<serde_json::Value>)> {
    s.validate()?;
    let keep = s.selected_columns()?;
    match s.model {
        Model::Lmg => {
            let (vs, ws) = (s.grid("v")?, s.grid("w")?);
            let sweep = lmg_sweep(&vs, &ws, s.n, s.threshold.unwrap_or(DEFAULT_JUMP_THRESHOLD))?;
            let mut t = Table::new(&genent::lmg::LMG_COLUMNS, &["N"]);
            t.rows = sweep.rows.iter().map(|r| r.values().to_vec()).collect();
            let extra = serde_json::json!({ "transitions": sweep.transitions });
            Ok((t.select(&keep), Some(extra)))
        }
        Model::Xy => {
            let (gammas, gs) = (s.grid("gamma")?, s.grid("g")?);
            let mut t = Table::new(&XY_COLUMNS, &["N"]).select(&keep);
            for gamma in gammas {
                t.rows.extend(xy_sweep_columns(gamma, &gs, s.n, &keep)?);
            }
            Ok((t, None))
        }
    }
}

pub fn run_sweep(s: &SweepSpec) -> Result<()> {
    let start = Instant::now();
    let (table, extra) = sweep_table(s)?;
    emit(
        &table,
        s.out.as_deref(),
        s,
        extra,
        start.elapsed().as_secs_f64(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistSpec {
    #[serde(rename = "N")]
    pub n: usize,
    pub g: f64,
    pub gamma: f64,
}

pub fn dist_table(d: &DistSpec) -> Result<Table> {
    let dist = number_distribution(&XyParams::new(d.n, d.g, d.gamma)?)?;
    let mut t = Table::new(&["n", "prob"], &["n"]);
    t.rows = dist
        .probs
        .iter()
        .enumerate()
        .map(|(k, &p)| vec![k as f64, p])
        .collect();
    Ok(t)
}

pub fn run_dist(d: &DistSpec, out: Option<&Path>) -> Result<()> {
    let start = Instant::now();
    let t = dist_table(d)?;
    emit(&t, out, d, None::<()>, start.elapsed().as_secs_f64())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpec {
    pub model: Model,
    #[serde(rename = "N")]
    pub n: usize,
    /// `g, gamma` for the XY chain, `v, w` for LMG.
    pub first: Range,
    pub second: Range,
    pub columns: Vec<String>,
    pub unchecked: bool,
}

fn max_diff(pairs: &[(f64, f64)]) -> f64 {
    pairs.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Exact-diagonalization results side by side with the analytic or
/// collective-spin values. XY rows use the even-parity sector, which is
/// the sector the quasiparticle vacuum describes.
pub fn oracle_table(o: &OracleSpec) -> Result<Table> {
    match o.model {
        Model::Xy => oracle_xy(o),
        Model::Lmg => oracle_lmg(o),
    }
}

fn oracle_xy(o: &OracleSpec) -> Result<Table> {
    let mut columns = vec!["N", "g", "gamma", "residual"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>();
    let mut names = vec!["energy".to_string(), "purity_uN".into(), "mz".into()];
    for r in 1..=3 {
        for c in ["xx", "yy", "zz"] {
            names.push(format!("{c}{r}"));
        }
    }
    names.extend(["c1".to_string(), "c2".into()]);
    for q in &names {
        columns.push(format!("{q}_ed"));
        columns.push(format!("{q}_analytic"));
    }
    columns.push("max_abs_diff".into());
    let un = un_basis(&jw_fermion_ops(o.n)?)?;
    let mut rows = Vec::new();
    for g in o.first.values() {
        for gamma in o.second.values() {
            let p = XyParams::new(o.n, g, gamma)?;
            let ed = xy_ed_sector(o.n, g, gamma, 1)?;
            let psi = &ed.ground_state;
            let mut pairs = vec![
                (ed.ground_energy, bogoliubov_solve(&p)?.ground_energy()),
                (relative_purity(&un, psi)?.value, purity_un_finite(&p)?),
                (sigma_z(psi, 0)?, magnetization_z(&p)?),
            ];
            for r in 1..=3 {
                let (a, b) = (ed_spin_correlators(psi, r)?, spin_correlators(&p, r)?);
                pairs.extend([(a.xx, b.xx), (a.yy, b.yy), (a.zz, b.zz)]);
            }
            let dims = vec![2; o.n];
            let (c1, c2) = pair_concurrences(&p)?;
            pairs.push((
                concurrence(&genent::purity::reduced_density(psi, &dims, &[0, 1])?)?,
                c1,
            ));
            pairs.push((
                concurrence(&genent::purity::reduced_density(psi, &dims, &[0, 2])?)?,
                c2,
            ));
            let mut row = vec![o.n as f64, g, gamma, ed.residual];
            row.extend(pairs.iter().flat_map(|&(a, b)| [a, b]));
            row.push(max_diff(&pairs));
            rows.push(row);
        }
    }
    finish_table(columns, rows, &o.columns)
}

fn oracle_lmg(o: &OracleSpec) -> Result<Table> {
    let columns: Vec<String> = [
        "N",
        "V",
        "W",
        "residual",
        "energy_ed",
        "energy_collective",
        "jz_ed",
        "jz_collective",
        "purity_jz_ed",
        "purity_jz_collective",
        "j_squared",
        "max_abs_diff",
    ]
    .into_iter()
    .map(String::from)
    .collect();
    let nf = o.n as f64;
    let mut rows = Vec::new();
    for v in o.first.values() {
        for w in o.second.values() {
            let ed = if o.unchecked {
                lmg_collective_unchecked(o.n, v, w)?
            } else {
                lmg_collective(o.n, v, w)?
            };
            let sol = solve(&LmgParams::new(o.n, v, w)?)?;
            let pairs = [
                (ed.ed.ground_energy, sol.ground_energy()),
                (ed.jz, sol.jz_expect),
                (4.0 * ed.jz * ed.jz / (nf * nf), sol.purity_jz),
            ];
            let mut row = vec![nf, v, w, ed.ed.residual];
            row.extend(pairs.iter().flat_map(|&(a, b)| [a, b]));
            row.push(ed.j_squared);
            row.push(max_diff(&pairs));
            rows.push(row);
        }
    }
    finish_table(columns, rows, &o.columns)
}

fn finish_table(columns: Vec<String>, rows: Vec<Vec<f64>>, wanted: &[String]) -> Result<Table> {
    let schema: Vec<&str> = columns.iter().map(String::as_str).collect();
    let keep = select_columns(&schema, wanted)?;
    let t = Table {
        columns,
        rows,
        integer_columns: vec!["N"],
    };
    Ok(t.select(&keep))
}

pub fn run_oracle(o: &OracleSpec, out: Option<&Path>) -> Result<()> {
    let start = Instant::now();
    let t = oracle_table(o)?;
    emit(&t, out, o, None::<()>, start.elapsed().as_secs_f64())
}

/// State kinds accepted by `state make`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MakeKind {
    F,
    W,
    Ghz,
    Bell,
    Cluster,
    Product,
    Aklt,
    Bcs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MakeSpec {
    pub kind: MakeKind,
    pub n: usize,
    pub spin: Option<Spin>,
    /// Real local amplitudes shared by every site of a product state.
    pub local: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub index: usize,
    pub re: f64,
    pub im: f64,
}

/// JSON form of a state: the nonzero amplitudes of the computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub kind: String,
    pub tag: BasisTag,
    pub dim: usize,
    pub amplitudes: Vec<Amplitude>,
}

impl StateFile {
    pub fn from_state(kind: &str, psi: &StateVector) -> Self {
        Self {
            kind: kind.to_string(),
            tag: psi.tag().clone(),
            dim: psi.dim(),
            amplitudes: psi
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.re != 0.0 || a.im != 0.0)
                .map(|(index, a)| Amplitude {
                    index,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.tag.dim() != self.dim {
            return Err(spec(format!(
                "state dim {} does not match its tag ({})",
                self.dim,
                self.tag.dim()
            )));
        }
        if self.dim > MAX_DIM {
            return Err(genent::Error::Resource {
                what: "state vector",
                dim: self.dim,
                limit: MAX_DIM,
            }
            .into());
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.dim];
        for a in &self.amplitudes {
            let slot = amps
                .get_mut(a.index)
                .ok_or_else(|| spec(format!("amplitude index {} out of range", a.index)))?;
            *slot = C64::new(a.re, a.im);
        }
        Ok(StateVector::new(amps, self.tag.clone())?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let read_err = |e: &dyn ToString| CliError::Input {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let text = if path == Path::new("-") {
            std::io::read_to_string(std::io::stdin()).map_err(|e| read_err(&e))?
        } else {
            std::fs::read_to_string(path).map_err(|e| read_err(&e))?
        };
        serde_json::from_str(&text).map_err(|e| spec(format!("state file {}: {e}", path.display())))
    }
}

pub fn make_state(m: &MakeSpec) -> Result<StateVector> {
    let need = |x: Option<f64>, name: &str| {
        x.ok_or_else(|| spec(format!("--{name} is required for this kind")))
    };
    let spin = m.spin.unwrap_or(Spin::HALF);
    let chain = || SpinChainSpec::new(m.n, spin, Boundary::Open);
    let named = |kind| -> Result<StateVector> { Ok(named_state(kind, &chain()?, None)?) };
    match m.kind {
        MakeKind::F => named(StateKind::F),
        MakeKind::W => named(StateKind::W),
        MakeKind::Ghz => named(StateKind::Ghz),
        MakeKind::Bell => named(StateKind::Bell),
        MakeKind::Cluster => {
            if spin != Spin::HALF {
                return Err(spec("cluster states are defined for S = 1/2"));
            }
            Ok(cluster_state(m.n)?)
        }
        MakeKind::Product => {
            let local = m
                .local
                .as_ref()
                .ok_or_else(|| spec("--local is required for product states"))?;
            if local.len() != spin.dim() {
                return Err(spec(format!(
                    "--local needs {} amplitudes for S = {spin}",
                    spin.dim()
                )));
            }
            let norm = local.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(spec("--local must be a nonzero finite vector"));
            }
            let site: Vec<C64> = local.iter().map(|&x| C64::new(x / norm, 0.0)).collect();
            let spec_ = chain()?;
            Ok(named_state(
                StateKind::Product,
                &spec_,
                Some(&vec![site; m.n]),
            )?)
        }
        MakeKind::Aklt => {
            if m.spin.is_some_and(|s| s != Spin::ONE) {
                return Err(spec("the AKLT state is a spin-1 chain"));
            }
            Ok(aklt_vbs(m.n, Boundary::Periodic)?)
        }
        MakeKind::Bcs => Ok(bcs_vector(m.n, need(m.g, "g")?, need(m.gamma, "gamma")?)?),
    }
}

pub fn run_make(m: &MakeSpec, out: Option<&Path>) -> Result<()> {
    let psi = make_state(m)?;
    let name = serde_json::to_value(m.kind)
        .ok()
        .and_then(|v| v.as_str().map(String::from))
        .unwrap_or_default();
    emit_json(&StateFile::from_state(&name, &psi), out)
}

/// Observable sets accepted by `purity compute`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    /// Local su(d) algebra of every site.
    Local,
    /// Raw Pauli operators of a qubit chain.
    Pauli,
    /// Full su(D) of the whole space.
    Su,
    /// Fermionic u(N) of a qubit chain via Jordan-Wigner.
    Un,
    /// u(N) extended by pairing operators to so(2N).
    So2n,
    /// Collective spin of a qubit chain, or the spin of a multiplet.
    Collective,
    /// J_z alone, for a spin multiplet.
    Jz,
}

pub fn build_basis(choice: BasisChoice, tag: &BasisTag) -> Result<ObservableBasis> {
    let dims = tag.dims();
    let qubits = || -> Result<usize> {
        if tag.is_qubit_chain() {
            Ok(dims.len())
        } else {
            Err(spec(format!(
                "basis {choice:?} needs a qubit chain, state is {tag:?}"
            )))
        }
    };
    Ok(match (choice, tag) {
        (BasisChoice::Local, _) => local_algebra_basis(&dims)?,
        (BasisChoice::Pauli, _) => pauli_basis(qubits()?)?,
        (BasisChoice::Su, _) => su_basis(tag.dim())?,
        (BasisChoice::Un, _) => un_basis(&jw_fermion_ops(qubits()?)?)?,
        (BasisChoice::So2n, _) => so2n_extension(&jw_fermion_ops(qubits()?)?)?,
        (BasisChoice::Collective, BasisTag::SpinMultiplet { j }) => multiplet_spin_basis(*j)?,
        (BasisChoice::Collective, _) => collective_spin_basis(qubits()?)?,
        (BasisChoice::Jz, BasisTag::SpinMultiplet { j }) => jz_basis(*j)?,
        (BasisChoice::Jz, _) => return Err(spec("basis jz needs a spin-multiplet state")),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityOutput {
    pub basis: String,
    pub purity: f64,
    pub k: f64,
    pub generators: usize,
    /// Mean single-site purity, reported for tensor-product states.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local_purity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_generator: Option<Vec<f64>>,
}

pub fn compute_purity(
    state: &StateFile,
    choice: BasisChoice,
    per_generator: bool,
) -> Result<PurityOutput> {
    let psi = state.to_state()?;
    let basis = build_basis(choice, psi.tag())?;
    let report = relative_purity(&basis, &psi)?;
    let dims = psi.tag().dims();
    let local = if choice == BasisChoice::Local && dims.len() > 1 {
        Some(local_purity(&psi, &dims)?)
    } else {
        None
    };
    Ok(PurityOutput {
        basis: basis.name().to_string(),
        purity: report.value,
        k: report.k_used,
        generators: basis.len(),
        local_purity: local,
        per_generator: per_generator.then_some(report.per_generator),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSpec {
    pub csv: PathBuf,
    pub x: String,
    pub y: String,
    /// Inclusive window on the transformed abscissa.
    pub window: (f64, f64),
    pub model: FitModel,
    /// When set, the abscissa is `|x - center|`.
    pub center: Option<f64>,
    /// Added to every ordinate before fitting.
    pub y_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutput {
    pub spec: FitSpec,
    pub fit: ExponentFit,
}

pub fn parse_window(s: &str) -> Result<(f64, f64)> {
    let bad = || spec(format!("window '{s}' must be 'lo:hi' with lo < hi"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn run_fit_spec(f: &FitSpec) -> Result<FitOutput> {
    let read_err = |e: csv::Error| CliError::Input {
        path: f.csv.clone(),
        message: e.to_string(),
    };
    let mut reader = csv::Reader::from_path(&f.csv).map_err(read_err)?;
    let headers = reader.headers().map_err(read_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| spec(format!("unknown column '{name}' in {}", f.csv.display())))
    };
    let (ix, iy) = (col(&f.x)?, col(&f.y)?);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(read_err)?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse()
                .map_err(|_| spec(format!("row {}: '{}' is not a number", line + 1, &rec[i])))
        };
        let x = match f.center {
            Some(c) => (num(ix)? - c).abs(),
            None => num(ix)?,
        };
        if x >= f.window.0 && x <= f.window.1 {
            xs.push(x);
            ys.push(num(iy)? + f.y_offset);
        }
    }
    let fit = fit_exponent(&xs, &ys, f.model)?;
    Ok(FitOutput {
        spec: f.clone(),
        fit,
    })
}
