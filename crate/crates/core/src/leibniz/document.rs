//! JSON algebra definition documents.
//!
//! ```json
//! {
//!   "name": "n2",
//!   "dim": 2,
//!   "basis": ["x", "y"],
//!   "brackets": [{"l": 0, "r": 0, "out": [[1, "1"]]}],
//!   "form": [["0", "0"], ["0", "0"]],
//!   "module": "adjoint"
//! }
//! ```
//!
//! Omitted bracket pairs are zero. The optional `module` value is interpreted
//! by [`crate::loopmod::ModuleSpec::from_document`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::LeibnizAlgebra;
use crate::error::{Result, VlaError};
use crate::exactlin::{format_rational, parse_rational, Matrix, Rational, SparseVec};

/// A scalar written either as `"p/q"` or as a bare integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Text(String),
    Int(i64),
}

impl Scalar {
    pub fn value(&self) -> Result<Rational> {
        match self {
            Scalar::Text(s) => parse_rational(s).map_err(|e| VlaError::Document(e.to_string())),
            Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
        }
    }

    pub fn from_rational(q: &Rational) -> Self {
        Scalar::Text(format_rational(q))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEntry {
    pub l: usize,
    pub r: usize,
    pub out: Vec<(usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<Value>,
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VlaError::Document(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn algebra(&self) -> Result<LeibnizAlgebra> {
        let dim = self.dim;
        if dim == 0 {
            return Err(VlaError::Document("\"dim\" must be positive".into()));
        }
        if self.basis.len() != dim {
            return Err(VlaError::Document(format!(
                "\"basis\" has {} names but \"dim\" is {dim}",
                self.basis.len()
            )));
        }
        let mut table = vec![SparseVec::new(); dim * dim];
        let mut seen = vec![false; dim * dim];
        for (pos, entry) in self.brackets.iter().enumerate() {
            if entry.l >= dim || entry.r >= dim {
                return Err(VlaError::Document(format!(
                    "brackets[{pos}]: index out of range for dim {dim}"
                )));
            }
            let slot = entry.l * dim + entry.r;
            if seen[slot] {
                return Err(VlaError::Document(format!(
                    "brackets[{pos}]: pair ({}, {}) given twice",
                    entry.l, entry.r
                )));
            }
            seen[slot] = true;
            for (k, c) in &entry.out {
                if *k >= dim {
                    return Err(VlaError::Document(format!(
                        "brackets[{pos}]: output index {k} out of range"
                    )));
                }
                table[slot].add_term(*k, &c.value()?);
            }
        }
        let form = match &self.form {
            None => None,
            Some(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(VlaError::Document(format!("\"form\" must be {dim}x{dim}")));
                }
                let parsed: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|r| r.iter().map(Scalar::value).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                let m = Matrix::from_rows(parsed);
                if m != m.transpose() {
                    return Err(VlaError::Document("\"form\" must be symmetric".into()));
                }
                Some(m)
            }
        };
        let name = self.name.clone().unwrap_or_else(|| "g".to_string());
        LeibnizAlgebra::new(name, self.basis.clone(), table, form)
    }

    /// The document describing `g` (without a module entry).
    pub fn from_algebra(g: &LeibnizAlgebra) -> Self {
        let dim = g.dim();
        let mut brackets = Vec::new();
        for l in 0..dim {
            for r in 0..dim {
                let out = g.bracket_basis(l, r);
                if !out.is_zero() {
                    brackets.push(BracketEntry {
                        l,
                        r,
                        out: out.iter().map(|(&k, c)| (k, Scalar::from_rational(c))).collect(),
                    });
                }
            }
        }
        let form = g.form().map(|m| {
            (0..dim)
                .map(|i| (0..dim).map(|j| Scalar::from_rational(m.get(i, j))).collect())
                .collect()
        });
        Self {
            name: Some(g.name().to_string()),
            dim,
            basis: g.basis().to_vec(),
            brackets,
            form,
            module: None,
        }
    }
}
