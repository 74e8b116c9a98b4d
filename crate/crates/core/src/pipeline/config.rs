//! JSON run configuration.
//!
//! ```json
//! {
//!   "name": "square_robin",
//!   "manifold": { "kind": "plane" },
//!   "domain": { "shape": "polygon", "vertices": [[0,0],[1,0],[1,1],[0,1]] },
//!   "source": { "type": "constant", "value": 1.0 },
//!   "beta": { "type": "constant", "value": 1.0 },
//!   "h": 0.025,
//!   "refinements": 1
//! }
//! ```

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::expr::Expr;
use crate::compare::{ALL_CHECKS, CONSTANT_SOURCE_CHECKS};
use crate::error::{Error, Result};
use crate::geometry::Manifold;
use crate::mesh::DomainSpec;

pub const MAX_REFINEMENTS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldSpec {
    Plane,
    Sphere { kappa: f64 },
    Cone { fraction: f64 },
}

impl ManifoldSpec {
    pub fn build(&self) -> Result<Manifold> {
        match *self {
            ManifoldSpec::Plane => Ok(Manifold::plane()),
            ManifoldSpec::Sphere { kappa } => {
                Manifold::sphere(kappa).map_err(|e| Error::config("manifold.kappa", e.to_string()))
            }
            ManifoldSpec::Cone { fraction } => {
                Manifold::cone(fraction).map_err(|e| Error::config("manifold.fraction", e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    Constant { value: f64 },
    /// Expression in `x`, `y`, `z`, `r`.
    Expression { expr: String },
    /// One value per vertex of the unrefined mesh, one per line.
    NodalFile { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    /// Polar angles around the domain center, radians, `from < to`.
    pub from: f64,
    pub to: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BetaSpec {
    Constant { value: f64 },
    /// Piecewise constant on polar-angle arcs that tile the full circle.
    Arcs { arcs: Vec<ArcSpec> },
    /// One value per boundary edge of the unrefined mesh, one per line.
    EdgeFile { path: PathBuf },
}

impl BetaSpec {
    /// Coefficient at polar angle `phi`; `None` for file-based specs.
    pub fn at_angle(&self, phi: f64) -> Option<f64> {
        match self {
            BetaSpec::Constant { value } => Some(*value),
            BetaSpec::Arcs { arcs } => {
                let hit = arcs.iter().find(|a| (phi - a.from).rem_euclid(TAU) < a.to - a.from);
                // rounding at the seam can miss every arc; fall back to the first
                Some(hit.unwrap_or(&arcs[0]).value)
            }
            BetaSpec::EdgeFile { .. } => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            BetaSpec::Constant { .. } => true,
            BetaSpec::Arcs { arcs } => arcs.iter().all(|a| a.value == arcs[0].value),
            BetaSpec::EdgeFile { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    pub manifold: ManifoldSpec,
    pub domain: DomainSpec,
    pub source: SourceSpec,
    pub beta: BetaSpec,
    pub h: f64,
    #[serde(default)]
    pub refinements: u32,
    /// Checks to run; all applicable checks when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Directory that relative file paths are resolved against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Parses and validates a JSON document; errors carry the key path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "<root>".to_string() } else { path };
            Error::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn source_is_constant(&self) -> bool {
        matches!(self.source, SourceSpec::Constant { .. })
    }

    /// Requested checks, or every check applicable to this source.
    pub fn check_names(&self) -> Vec<String> {
        match &self.checks {
            Some(c) => c.clone(),
            None => ALL_CHECKS
                .iter()
                .filter(|c| self.source_is_constant() || !CONSTANT_SOURCE_CHECKS.contains(c))
                .map(|c| c.to_string())
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::config("name", "must be non-empty and use only [A-Za-z0-9_-]"));
        }
        let m = self.manifold.build()?;
        self.domain
            .validate(&m)
            .map_err(|e| Error::config("domain", e.to_string()))?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::config("h", format!("must be positive and finite, got {}", self.h)));
        }
        if self.refinements > MAX_REFINEMENTS {
            return Err(Error::config(
                "refinements",
                format!("must be at most {MAX_REFINEMENTS}, got {}", self.refinements),
            ));
        }
        match &self.source {
            SourceSpec::Constant { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(Error::config("source.value", format!("must be positive, got {value}")));
                }
            }
            SourceSpec::Expression { expr } => {
                Expr::parse(expr).map_err(|e| Error::config("source.expr", e.to_string()))?;
            }
            SourceSpec::NodalFile { .. } => {}
        }
        match &self.beta {
            BetaSpec::Constant { value } => {
                if !(*value > 0.0 && value.is_finite()) {
                    return Err(Error::config("beta.value", format!("must be positive, got {value}")));
                }
            }
            BetaSpec::Arcs { arcs } => validate_arcs(arcs)?,
            BetaSpec::EdgeFile { .. } => {}
        }
        if let Some(checks) = &self.checks {
            for (i, c) in checks.iter().enumerate() {
                if !ALL_CHECKS.contains(&c.as_str()) {
                    return Err(Error::config(
                        format!("checks[{i}]"),
                        format!("unknown check `{c}`; known: {}", ALL_CHECKS.join(", ")),
                    ));
                }
                if !self.source_is_constant() && CONSTANT_SOURCE_CHECKS.contains(&c.as_str()) {
                    return Err(Error::config(
                        format!("checks[{i}]"),
                        format!("check `{c}` requires a constant source"),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn validate_arcs(arcs: &[ArcSpec]) -> Result<()> {
    if arcs.is_empty() {
        return Err(Error::config("beta.arcs", "at least one arc is required"));
    }
    for (i, a) in arcs.iter().enumerate() {
        if !(a.value > 0.0 && a.value.is_finite()) {
            return Err(Error::config(
                format!("beta.arcs[{i}].value"),
                format!("must be positive, got {}", a.value),
            ));
        }
        if !(a.to > a.from && a.from.is_finite() && a.to.is_finite()) {
            return Err(Error::config(format!("beta.arcs[{i}]"), "requires from < to"));
        }
        if i > 0 && (a.from - arcs[i - 1].to).abs() > 1e-9 {
            return Err(Error::config(
                format!("beta.arcs[{i}].from"),
                "arcs must be contiguous: each must start where the previous one ends",
            ));
        }
    }
    let span = arcs[arcs.len() - 1].to - arcs[0].from;
    if (span - TAU).abs() > 1e-9 {
        return Err(Error::config("beta.arcs", format!("arcs must cover exactly 2π, cover {span}")));
    }
    Ok(())
}
