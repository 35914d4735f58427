//! Scenario files: one JSON document with field, spec, gamma and run blocks.

use std::path::{Path, PathBuf};

use btchar_building::{parse_entry, QpMatrix, DEFAULT_PRECISION};
use btchar_charformula::{DiscreteSeriesSpec, ExtendedAction, Route, TableOptions, Twist};
use btchar_finite_gl::{resolve_cache_dir, DEFAULT_BUDGET};
use btchar_padic::{FieldBlock, LocalFieldDesc};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub name: Option<String>,
    pub field: FieldBlock,
    #[serde(default)]
    pub spec: Option<SpecBlock>,
    /// A single element; shorthand for a one-element `gammas` list.
    #[serde(default)]
    pub gamma: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub gammas: Vec<GammaBlock>,
    pub run: RunBlock,
}

/// `N`, `e`, `ρ₀` by finite-gl label, twist, extended action and level; `p` comes from
/// the field block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecBlock {
    pub n: usize,
    pub e: usize,
    pub rho0: String,
    #[serde(default)]
    pub twist: Option<Twist>,
    #[serde(default)]
    pub extension: Option<ExtendedAction>,
    #[serde(default)]
    pub level: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaBlock {
    #[serde(default)]
    pub label: Option<String>,
    pub matrix: Vec<Vec<Entry>>,
}

/// A matrix entry: an integer, or a string `"a"`, `"a/b"` or `"padic(d0 d1 …)"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub radius: Option<usize>,
    #[serde(default)]
    pub radii: Option<Vec<usize>>,
    /// Bound on `|GL(n, q)|` for finite-gl tables.
    #[serde(default)]
    pub budget: Option<u64>,
    /// Bound on the number of vertices of a patch.
    #[serde(default)]
    pub ball_budget: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub q: Option<u32>,
    /// Composition of the base simplex of the patch.
    #[serde(default)]
    pub base: Option<Vec<usize>>,
    #[serde(default)]
    pub routes: Option<Vec<Route>>,
    #[serde(default)]
    pub output: Option<OutputBlock>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

/// Command-line values that take precedence over the scenario.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub radius: Option<usize>,
    pub precision: Option<u32>,
    pub budget: Option<u64>,
    pub cache_dir: Option<PathBuf>,
}

pub const COMMANDS: &[&str] = &["building-ball", "elliptic-analyze", "fgl-table", "coeffsys-build", "char-eval", "ep-check"];

/// A scenario validated against the schema, with overrides applied.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub name: String,
    pub command: String,
    pub p: u32,
    pub precision: u32,
    pub spec: Option<DiscreteSeriesSpec>,
    pub gammas: Vec<(String, QpMatrix)>,
    pub run: RunBlock,
    pub radius: Option<usize>,
    pub tables: TableOptions,
    /// Directory that relative output paths are resolved against.
    pub dir: PathBuf,
}

pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn matrix(rows: &[Vec<Entry>], p: u32) -> Result<QpMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::Schema("a gamma matrix must be square and nonempty".into()));
    }
    let mut m = QpMatrix::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            let v = match x {
                Entry::Int(k) => btchar_building::q(*k),
                Entry::Text(s) => parse_entry(s, p).map_err(|e| CliError::Schema(format!("entry ({i}, {j}): {e}")))?,
            };
            m.set(i, j, v);
        }
    }
    Ok(m)
}

/// Validates a scenario for `command` (which must match `run.command` when that is set).
pub fn resolve(sc: &Scenario, command: Option<&str>, ov: &Overrides, path: &Path) -> Result<Resolved> {
    let command = match (command, sc.run.command.as_deref()) {
        (Some(c), Some(s)) if c != s => {
            return Err(CliError::Schema(format!("scenario is for `{s}`, invoked as `{c}`")));
        }
        (Some(c), _) | (None, Some(c)) => c.to_string(),
        (None, None) => return Err(CliError::Schema("run.command is required".into())),
    };
    if !COMMANDS.contains(&command.as_str()) {
        return Err(CliError::Schema(format!("unknown command `{command}`")));
    }
    let field = FieldBlock { precision: ov.precision.or(sc.field.precision), ..sc.field.clone() };
    let desc = LocalFieldDesc::from_block(&field)?;
    if desc.extension.is_some() {
        return Err(CliError::Schema("the building layer works over Q_p; extension_poly is not supported here".into()));
    }
    let p = desc.p;
    let spec = sc
        .spec
        .as_ref()
        .map(|s| {
            let mut d = DiscreteSeriesSpec::new(s.n, s.e, p, &s.rho0);
            d.twist = s.twist.unwrap_or_default();
            d.extension = s.extension.unwrap_or_default();
            d.level = s.level.unwrap_or(0);
            d.validate().map(|_| d)
        })
        .transpose()?;
    let mut gammas = Vec::new();
    if let Some(g) = &sc.gamma {
        gammas.push(("gamma".to_string(), matrix(g, p)?));
    }
    for (i, g) in sc.gammas.iter().enumerate() {
        gammas.push((g.label.clone().unwrap_or_else(|| format!("gamma{i}")), matrix(&g.matrix, p)?));
    }
    let mut labels: Vec<&String> = gammas.iter().map(|(l, _)| l).collect();
    labels.sort();
    if labels.windows(2).any(|w| w[0] == w[1]) {
        return Err(CliError::Schema("gamma labels must be distinct".into()));
    }
    if let Some(s) = &spec {
        if let Some((l, _)) = gammas.iter().find(|(_, g)| g.rows != s.n) {
            return Err(CliError::Schema(format!("{l} is not {0}×{0}", s.n)));
        }
    }
    let name = sc.name.clone().unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    Ok(Resolved {
        name,
        command,
        p,
        precision: field.precision.unwrap_or(DEFAULT_PRECISION),
        spec,
        gammas,
        radius: ov.radius.or(sc.run.radius),
        tables: TableOptions {
            budget: ov.budget.or(sc.run.budget).unwrap_or(DEFAULT_BUDGET),
            cache_dir: resolve_cache_dir(ov.cache_dir.as_deref()),
        },
        run: sc.run.clone(),
        dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}

impl Resolved {
    pub fn spec(&self) -> Result<&DiscreteSeriesSpec> {
        self.spec.as_ref().ok_or_else(|| CliError::Schema(format!("`{}` needs a spec block", self.command)))
    }

    pub fn radius(&self) -> Result<usize> {
        self.radius.ok_or_else(|| CliError::Schema(format!("`{}` needs a radius", self.command)))
    }

    /// `N` from the run block, the spec, or the gammas.
    pub fn n(&self) -> Result<usize> {
        self.run
            .n
            .or(self.spec.as_ref().map(|s| s.n))
            .or(self.gammas.first().map(|(_, g)| g.rows))
            .ok_or_else(|| CliError::Schema(format!("`{}` needs run.n or a spec block", self.command)))
    }
}
