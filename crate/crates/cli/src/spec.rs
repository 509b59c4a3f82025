//! Sweep specifications, their range syntax and the TOML config format.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use genent::lmg::LMG_COLUMNS;
use genent::xy_chain::XY_COLUMNS;
use serde::{Deserialize, Serialize};

use crate::error::{spec, CliError, Result};

/// An inclusive grid `start, ..., stop` of `steps` points. A single value
/// has `steps = 1` and `start == stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RangeRepr")]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RangeRepr {
    Text(String),
    Value(f64),
    Table { start: f64, stop: f64, steps: usize },
}

impl TryFrom<RangeRepr> for Range {
    type Error = CliError;

    fn try_from(r: RangeRepr) -> Result<Self> {
        match r {
            RangeRepr::Text(s) => s.parse(),
            RangeRepr::Value(x) => Range::single(x),
            RangeRepr::Table { start, stop, steps } => Range::new(start, stop, steps),
        }
    }
}

impl Range {
    pub fn new(start: f64, stop: f64, steps: usize) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(spec(format!(
                "range bounds must be finite, got {start}:{stop}"
            )));
        }
        if steps == 0 {
            return Err(spec("a range needs at least one step"));
        }
        if steps == 1 && start != stop {
            return Err(spec(format!("swept range {start}:{stop} needs steps >= 2")));
        }
        Ok(Self { start, stop, steps })
    }

    pub fn single(x: f64) -> Result<Self> {
        Self::new(x, x, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| spec(format!("'{t}' is not a number in range '{s}'")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Range::single(num(x)?),
            [a, b, n] => {
                let steps = n
                    .trim()
                    .parse()
                    .map_err(|_| spec(format!("'{n}' is not a step count in range '{s}'")))?;
                Range::new(num(a)?, num(b)?, steps)
            }
            _ => Err(spec(format!(
                "range '{s}' must be 'value' or 'start:stop:steps'"
            ))),
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.steps == 1 {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}:{}:{}", self.start, self.stop, self.steps)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Lmg,
    Xy,
}

impl Model {
    /// Grid axes in output order (outer axis first).
    pub fn axes(self) -> [&'static str; 2] {
        match self {
            Model::Lmg => ["w", "v"],
            Model::Xy => ["gamma", "g"],
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Model::Lmg => &LMG_COLUMNS,
            Model::Xy => &XY_COLUMNS,
        }
    }
}

/// A complete sweep request, as read from a config file and flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: Model,
    #[serde(rename = "N")]
    pub n: usize,
    pub grids: BTreeMap<String, Range>,
    /// Output columns; empty means the full schema.
    #[serde(default)]
    pub columns: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// First-order detection threshold (LMG only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let axes = self.model.axes();
        for key in self.grids.keys() {
            if !axes.contains(&key.as_str()) {
                return Err(spec(format!(
                    "unknown grid '{key}' for this model, expected {axes:?}"
                )));
            }
        }
        for axis in axes {
            if !self.grids.contains_key(axis) {
                return Err(spec(format!("missing grid '{axis}'")));
            }
        }
        self.selected_columns()?;
        if self.threshold.is_some() && self.model != Model::Lmg {
            return Err(spec("threshold applies to LMG sweeps only"));
        }
        Ok(())
    }

    pub fn grid(&self, axis: &str) -> Result<Vec<f64>> {
        self.grids
            .get(axis)
            .map(Range::values)
            .ok_or_else(|| spec(format!("missing grid '{axis}'")))
    }

    /// Indices into the model schema of the requested columns.
    pub fn selected_columns(&self) -> Result<Vec<usize>> {
        select_columns(self.model.columns(), &self.columns)
    }
}

pub fn select_columns(schema: &[&str], wanted: &[String]) -> Result<Vec<usize>> {
    if wanted.is_empty() {
        return Ok((0..schema.len()).collect());
    }
    wanted
        .iter()
        .map(|w| {
            schema.iter().position(|c| c == w).ok_or_else(|| {
                spec(format!(
                    "unknown column '{w}', available: {}",
                    schema.join(",")
                ))
            })
        })
        .collect()
}

/// Partial spec as written in a config file; flags fill or override it.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub model: Option<Model>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(default)]
    pub grids: BTreeMap<String, Range>,
    pub columns: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub threshold: Option<f64>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        toml::from_str(&text).map_err(|e| spec(format!("config {}: {e}", path.display())))
    }
}

/// Command-line values for a sweep; any `Some` wins over the config.
#[derive(Debug, Default, Clone)]
pub struct SweepFlags {
    pub n: Option<usize>,
    pub grids: Vec<(&'static str, Option<Range>)>,
    pub columns: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub threshold: Option<f64>,
}

pub fn merge(model: Model, config: Option<SweepConfig>, flags: SweepFlags) -> Result<SweepSpec> {
    let config = config.unwrap_or_default();
    if let Some(m) = config.model {
        if m != model {
            return Err(spec(format!("config is for model {m:?}, not {model:?}")));
        }
    }
    let mut grids = config.grids;
    for (axis, r) in flags.grids {
        if let Some(r) = r {
            grids.insert(axis.to_string(), r);
        }
    }
    let s = SweepSpec {
        model,
        n: flags
            .n
            .or(config.n)
            .ok_or_else(|| spec("system size N is required"))?,
        grids,
        columns: flags.columns.or(config.columns).unwrap_or_default(),
        out: flags.out.or(config.out),
        threshold: flags.threshold.or(config.threshold),
    };
    s.validate()?;
    Ok(s)
}
