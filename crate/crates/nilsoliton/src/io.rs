//! The algebra file format: a single JSON document with 1-based indices.
//!
//! ```json
//! {
//!   "dim": 6,
//!   "params": { "t": 1.0 },
//!   "brackets": [ { "i": 1, "j": 2, "k": 4, "c": "-2*t" } ],
//!   "omega": "canonical",
//!   "metric": [1, 1, 1, 1, 1, 1]
//! }
//! ```
//!
//! Coefficients are JSON numbers or expression strings over the declared
//! `params` (see [`crate::expr`]). `omega` is either the string "canonical"
//! or a list of `{i, j, c}` entries; `metric` is an optional diagonal.

use crate::bracket::LieBracket;
use crate::error::Error;
use crate::expr;
use crate::symplectic::{Metric, TwoForm};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Coefficient: a plain number or an expression string.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Coeff {
    Number(f64),
    Expr(String),
}

impl Coeff {
    pub fn eval(&self, params: &BTreeMap<String, f64>) -> Result<f64, Error> {
        match self {
            Coeff::Number(v) => Ok(*v),
            Coeff::Expr(s) => expr::eval(s, params),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntrySpec {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Coeff,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FormEntrySpec {
    pub i: usize,
    pub j: usize,
    pub c: Coeff,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OmegaSpec {
    Named(String),
    Entries(Vec<FormEntrySpec>),
}

impl Default for OmegaSpec {
    fn default() -> Self {
        OmegaSpec::Named("canonical".into())
    }
}

/// One algebra-with-structure input document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    pub brackets: Vec<BracketEntrySpec>,
    #[serde(default)]
    pub omega: OmegaSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<f64>>,
}

/// A parsed and instantiated algebra file.
#[derive(Debug, Clone)]
pub struct AlgebraInput {
    pub bracket: LieBracket,
    pub omega: TwoForm,
    pub metric: Metric,
}

impl AlgebraFile {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::parse("algebra file", e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Instantiate with the file's own parameter values.
    pub fn instantiate(&self) -> Result<AlgebraInput, Error> {
        self.instantiate_with(&self.params)
    }

    /// Instantiate with explicit parameter bindings (overriding the file's).
    pub fn instantiate_with(&self, params: &BTreeMap<String, f64>) -> Result<AlgebraInput, Error> {
        if self.dim == 0 {
            return Err(Error::parse("dim", "dimension must be positive"));
        }
        let mut entries = Vec::with_capacity(self.brackets.len());
        for (n, e) in self.brackets.iter().enumerate() {
            let ctx = format!("brackets[{n}] = ({},{},{})", e.i, e.j, e.k);
            if e.i == 0 || e.j == 0 || e.k == 0 {
                return Err(Error::parse(ctx, "indices are 1-based"));
            }
            if e.i >= e.j {
                return Err(Error::parse(ctx, "needs i < j"));
            }
            if e.j > self.dim || e.k > self.dim {
                return Err(Error::parse(ctx, format!("index exceeds dim = {}", self.dim)));
            }
            let c = e.c.eval(params).map_err(|err| Error::parse(ctx.clone(), err.to_string()))?;
            if c != 0.0 {
                entries.push((e.i - 1, e.j - 1, e.k - 1, c));
            }
        }
        let bracket = LieBracket::from_entries(self.dim, &entries)?;
        let omega = match &self.omega {
            OmegaSpec::Named(name) if name == "canonical" => TwoForm::canonical_for_dim(self.dim)?,
            OmegaSpec::Named(other) => {
                return Err(Error::parse("omega", format!("unknown named form '{other}'")))
            }
            OmegaSpec::Entries(list) => {
                let mut fe = Vec::with_capacity(list.len());
                for (n, e) in list.iter().enumerate() {
                    let ctx = format!("omega[{n}] = ({},{})", e.i, e.j);
                    if e.i == 0 || e.j == 0 {
                        return Err(Error::parse(ctx, "indices are 1-based"));
                    }
                    if e.i >= e.j {
                        return Err(Error::parse(ctx, "needs i < j"));
                    }
                    if e.j > self.dim {
                        return Err(Error::parse(ctx, format!("index exceeds dim = {}", self.dim)));
                    }
                    let c = e.c.eval(params).map_err(|err| Error::parse(ctx.clone(), err.to_string()))?;
                    if c != 0.0 {
                        fe.push((e.i - 1, e.j - 1, c));
                    }
                }
                TwoForm::from_entries(self.dim, &fe)?
            }
        };
        let metric = match &self.metric {
            None => Metric::Canonical,
            Some(d) => {
                if d.len() != self.dim {
                    return Err(Error::parse(
                        "metric",
                        format!("expected {} diagonal entries, got {}", self.dim, d.len()),
                    ));
                }
                Metric::Diagonal(DVector::from_column_slice(d))
            }
        };
        Ok(AlgebraInput { bracket, omega, metric })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_instantiate() {
        let text = r#"{
            "dim": 6,
            "params": {"t": 1.0},
            "brackets": [
                {"i": 1, "j": 2, "k": 4, "c": "-2*t"},
                {"i": 1, "j": 3, "k": 5, "c": "-t"},
                {"i": 1, "j": 3, "k": 6, "c": 1},
                {"i": 2, "j": 3, "k": 5, "c": 1},
                {"i": 2, "j": 3, "k": 6, "c": "t"}
            ],
            "omega": "canonical"
        }"#;
        let file = AlgebraFile::from_json(text).unwrap();
        let input = file.instantiate().unwrap();
        assert_eq!(input.bracket.dim(), 6);
        assert_eq!(input.bracket.entries().len(), 5);
        assert!(input.omega.closedness_defect(&input.bracket) < 1e-15);
        assert!(input.metric.is_canonical());
    }

    #[test]
    fn duplicate_keys_are_a_parse_error() {
        let text = r#"{
            "dim": 4,
            "brackets": [
                {"i": 1, "j": 2, "k": 3, "c": 1},
                {"i": 1, "j": 2, "k": 3, "c": 2}
            ]
        }"#;
        let file = AlgebraFile::from_json(text).unwrap();
        assert!(matches!(file.instantiate(), Err(Error::DuplicateEntry { .. })));
    }

    #[test]
    fn index_errors_carry_context() {
        let text = r#"{"dim": 4, "brackets": [{"i": 2, "j": 1, "k": 3, "c": 1}]}"#;
        let file = AlgebraFile::from_json(text).unwrap();
        let err = file.instantiate().unwrap_err().to_string();
        assert!(err.contains("brackets[0]"), "{err}");
    }

    #[test]
    fn explicit_omega_and_metric() {
        let text = r#"{
            "dim": 2,
            "brackets": [],
            "omega": [{"i": 1, "j": 2, "c": "1/2"}],
            "metric": [2.0, 3.0]
        }"#;
        let input = AlgebraFile::from_json(text).unwrap().instantiate().unwrap();
        assert!((input.omega.matrix()[(0, 1)] - 0.5).abs() < 1e-15);
        assert!(!input.metric.is_canonical());
    }
}
