//! JSON problem, ideal, and catalog files.
//!
//! A problem file names the variables and ring kind and optionally
//! carries a bracket, a torus action (identity weights by default), and
//! explicit derivations for core testing:
//!
//! ```json
//! {
//!   "variables": ["x1", "x2", "x3"],
//!   "ring": "polynomial",
//!   "bracket": {"kind": "log_canonical", "pi": [["0","1"],["-1","0"]]},
//!   "torus": {"rank": 2, "weights": [[1,0],[0,1]]},
//!   "derivations": [["x1", "0"]]
//! }
//! ```
//!
//! Ideal files list monomial and polynomial generators as expressions:
//! `{"monomial_generators": ["x1"], "polynomial_generators": ["x1*x3 - 2*x2"]}`.
//! A catalog file is a JSON array of ideal objects.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::bracket::BracketSpec;
use crate::ideals::{DerivationSet, IdealSpec};
use crate::polyring::{parse, LaurentPoly, RingKind, VarContext};
use crate::strata::ProblemSpec;
use crate::torus::TorusAction;

#[derive(Clone, Debug)]
pub struct ConfigError {
    pub file: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.file, self.message)
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn new(file: &Path, message: impl Into<String>) -> Self {
        ConfigError {
            file: file.display().to_string(),
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket: Option<BracketFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivations: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "kind")]
pub enum BracketFile {
    #[serde(rename = "log_canonical")]
    LogCanonical { pi: Vec<Vec<String>> },
    #[serde(rename = "table")]
    Table { entries: Vec<TableEntryFile> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableEntryFile {
    pub i: String,
    pub j: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TorusFile {
    pub rank: usize,
    pub weights: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, Default)]
pub struct IdealFile {
    #[serde(default)]
    pub monomial_generators: Vec<String>,
    #[serde(default)]
    pub polynomial_generators: Vec<String>,
    #[serde(default)]
    pub assert_prime: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealOrCatalog {
    Single(IdealFile),
    Catalog(Vec<IdealFile>),
}

/// A parsed and validated problem: ring context, optional bracket,
/// torus (identity when omitted), optional explicit derivations.
#[derive(Clone, Debug)]
pub struct LoadedProblem {
    pub ctx: Arc<VarContext>,
    pub bracket: Option<BracketSpec>,
    pub torus: TorusAction,
    pub derivations: Option<DerivationSet>,
}

impl LoadedProblem {
    /// The full problem triple; errors when the file had no bracket.
    pub fn problem_spec(&self, file: &Path) -> Result<ProblemSpec, ConfigError> {
        let bracket = self
            .bracket
            .clone()
            .ok_or_else(|| ConfigError::new(file, "this command needs a \"bracket\" entry"))?;
        ProblemSpec::new(&self.ctx, bracket, self.torus.clone())
            .map_err(|e| ConfigError::new(file, e.to_string()))
    }

    /// Explicit derivations if configured, else the variable
    /// Hamiltonians of the bracket.
    pub fn derivation_set(&self, file: &Path) -> Result<DerivationSet, ConfigError> {
        if let Some(d) = &self.derivations {
            return Ok(d.clone());
        }
        let bracket = self.bracket.clone().ok_or_else(|| {
            ConfigError::new(
                file,
                "this command needs either \"derivations\" or a \"bracket\" entry",
            )
        })?;
        Ok(DerivationSet::Hamiltonians(bracket))
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new(path, format!("cannot read file: {e}")))?;
    serde_json::from_str(&text).map_err(|e| {
        ConfigError::new(
            path,
            format!("line {}, column {}: {}", e.line(), e.column(), e),
        )
    })
}

fn parse_rational_str(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("bad rational '{s}': {e}"))
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    parse_rational_str(s)
}

/// Comma-separated rationals, as used by `--point` and `--alpha`.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational_str).collect()
}

pub fn load_problem(path: &Path) -> Result<LoadedProblem, ConfigError> {
    let file: ProblemFile = read_json(path)?;
    let kind = match file.ring.as_str() {
        "polynomial" => RingKind::Polynomial,
        "laurent" => RingKind::Laurent,
        other => {
            return Err(ConfigError::new(
                path,
                format!("ring must be \"polynomial\" or \"laurent\", got \"{other}\""),
            ))
        }
    };
    let ctx = VarContext::new(file.variables.clone(), kind)
        .map_err(|e| ConfigError::new(path, e.to_string()))?;
    let n = ctx.arity();

    let bracket = match &file.bracket {
        None => None,
        Some(BracketFile::LogCanonical { pi }) => {
            let mut rows = Vec::with_capacity(pi.len());
            for (i, row) in pi.iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for (j, entry) in row.iter().enumerate() {
                    out.push(parse_rational_str(entry).map_err(|e| {
                        ConfigError::new(path, format!("bracket.pi[{i}][{j}]: {e}"))
                    })?);
                }
                rows.push(out);
            }
            Some(
                BracketSpec::log_canonical(&ctx, rows)
                    .map_err(|e| ConfigError::new(path, e.to_string()))?,
            )
        }
        Some(BracketFile::Table { entries }) => {
            let mut table = Vec::with_capacity(entries.len());
            for (k, entry) in entries.iter().enumerate() {
                let i = ctx.index_of(&entry.i).ok_or_else(|| {
                    ConfigError::new(
                        path,
                        format!("bracket.entries[{k}]: unknown variable '{}'", entry.i),
                    )
                })?;
                let j = ctx.index_of(&entry.j).ok_or_else(|| {
                    ConfigError::new(
                        path,
                        format!("bracket.entries[{k}]: unknown variable '{}'", entry.j),
                    )
                })?;
                let value = parse(&entry.value, &ctx).map_err(|e| {
                    ConfigError::new(path, format!("bracket.entries[{k}].value: {e}"))
                })?;
                table.push((i, j, value));
            }
            Some(
                BracketSpec::table(&ctx, table)
                    .map_err(|e| ConfigError::new(path, e.to_string()))?,
            )
        }
    };

    let torus = match &file.torus {
        None => TorusAction::identity(n),
        Some(t) => TorusAction::new(t.rank, t.weights.clone(), n)
            .map_err(|e| ConfigError::new(path, e.to_string()))?,
    };

    let derivations = match &file.derivations {
        None => None,
        Some(rows) => {
            let mut derivs = Vec::with_capacity(rows.len());
            for (d, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(ConfigError::new(
                        path,
                        format!(
                            "derivations[{d}]: expected {n} coefficient entries, got {}",
                            row.len()
                        ),
                    ));
                }
                let mut coeffs = Vec::with_capacity(n);
                for (c, text) in row.iter().enumerate() {
                    coeffs.push(parse(text, &ctx).map_err(|e| {
                        ConfigError::new(path, format!("derivations[{d}][{c}]: {e}"))
                    })?);
                }
                derivs.push(coeffs);
            }
            Some(
                DerivationSet::explicit(derivs, &ctx)
                    .map_err(|e| ConfigError::new(path, e.to_string()))?,
            )
        }
    };

    Ok(LoadedProblem {
        ctx,
        bracket,
        torus,
        derivations,
    })
}

/// Build an [`IdealSpec`] from its file form. Monomial generators must
/// be single-term expressions; their coefficients are dropped.
pub fn ideal_from_file(
    file: &IdealFile,
    ctx: &Arc<VarContext>,
    path: &Path,
) -> Result<IdealSpec, ConfigError> {
    let mut monomials = Vec::with_capacity(file.monomial_generators.len());
    for (k, text) in file.monomial_generators.iter().enumerate() {
        let p: LaurentPoly = parse(text, ctx)
            .map_err(|e| ConfigError::new(path, format!("monomial_generators[{k}]: {e}")))?;
        if p.term_count() != 1 {
            return Err(ConfigError::new(
                path,
                format!("monomial_generators[{k}]: '{text}' is not a monomial"),
            ));
        }
        let (exps, _) = p.terms().next().expect("one term");
        monomials.push(exps.clone());
    }
    let mut polys = Vec::with_capacity(file.polynomial_generators.len());
    for (k, text) in file.polynomial_generators.iter().enumerate() {
        polys.push(
            parse(text, ctx)
                .map_err(|e| ConfigError::new(path, format!("polynomial_generators[{k}]: {e}")))?,
        );
    }
    let ideal =
        IdealSpec::new(ctx, monomials, polys).map_err(|e| ConfigError::new(path, e.to_string()))?;
    Ok(ideal.with_assert_prime(file.assert_prime))
}

/// Load one ideal or a whole catalog; a single object becomes a
/// one-entry catalog.
pub fn load_ideals(path: &Path, ctx: &Arc<VarContext>) -> Result<Vec<IdealSpec>, ConfigError> {
    let parsed: IdealOrCatalog = read_json(path)?;
    let files = match parsed {
        IdealOrCatalog::Single(f) => vec![f],
        IdealOrCatalog::Catalog(fs) => fs,
    };
    files
        .iter()
        .map(|f| ideal_from_file(f, ctx, path))
        .collect()
}
