//! JSON file formats for table algebras and partial-function algebras.
//!
//! An algebra file names its elements and gives the three tables by name:
//!
//! ```json
//! {"elements": ["0", "1"],
//!  "compose": [["0", "0"], ["0", "1"]],
//!  "meet": [["0", "0"], ["0", "1"]],
//!  "antidomain": ["1", "0"]}
//! ```
//!
//! A partial-function file lists base points and named graphs:
//!
//! ```json
//! {"base": ["a", "b"], "functions": {"f": [["a", "b"]]}}
//! ```
//!
//! Output is pretty-printed with a trailing newline and keys in the order
//! above, so emitting the same value twice gives the same bytes.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra};
use crate::pfun::{ConcreteAlgebra, PartialFunction, PfunError, Representation, Signature};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: unknown element {name:?}")]
    UnknownElement { path: String, name: String },
    #[error("{path}: unknown base point {name:?}")]
    UnknownPoint { path: String, name: String },
    #[error("{path}: expected {expected} entries, found {found}")]
    Ragged {
        path: String,
        expected: usize,
        found: usize,
    },
    #[error("{path}: duplicate name {name:?}")]
    Duplicate { path: String, name: String },
    #[error("{path}: {source}")]
    Function { path: String, source: PfunError },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Pfun(#[from] PfunError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub elements: Vec<String>,
    pub compose: Vec<Vec<String>>,
    pub meet: Vec<Vec<String>>,
    pub antidomain: Vec<String>,
}

impl AlgebraFile {
    pub fn from_algebra(alg: &FiniteAlgebra) -> Self {
        let n = alg.len();
        let name = |a: usize| alg.name(a).to_string();
        let table = |op: &dyn Fn(usize, usize) -> usize| {
            (0..n)
                .map(|a| (0..n).map(|b| name(op(a, b))).collect())
                .collect()
        };
        AlgebraFile {
            elements: alg.names().to_vec(),
            compose: table(&|a, b| alg.compose(a, b)),
            meet: table(&|a, b| alg.meet(a, b)),
            antidomain: (0..n).map(|a| name(alg.antidomain(a))).collect(),
        }
    }

    pub fn to_algebra(&self) -> Result<FiniteAlgebra, FormatError> {
        let n = self.elements.len();
        let mut index = IndexMap::with_capacity(n);
        for (i, e) in self.elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(FormatError::Duplicate {
                    path: format!("elements[{i}]"),
                    name: e.clone(),
                });
            }
        }
        let lookup = |path: String, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| FormatError::UnknownElement {
                    path,
                    name: name.to_string(),
                })
        };
        let ragged = |path: String, found: usize| FormatError::Ragged {
            path,
            expected: n,
            found,
        };
        let binary = |table: &str, rows: &[Vec<String>]| -> Result<Vec<usize>, FormatError> {
            if rows.len() != n {
                return Err(ragged(table.to_string(), rows.len()));
            }
            let mut flat = Vec::with_capacity(n * n);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(ragged(format!("{table}[{i}]"), row.len()));
                }
                for (j, e) in row.iter().enumerate() {
                    flat.push(lookup(format!("{table}[{i}][{j}]"), e)?);
                }
            }
            Ok(flat)
        };
        let compose = binary("compose", &self.compose)?;
        let meet = binary("meet", &self.meet)?;
        if self.antidomain.len() != n {
            return Err(ragged("antidomain".into(), self.antidomain.len()));
        }
        let antidomain = self
            .antidomain
            .iter()
            .enumerate()
            .map(|(i, e)| lookup(format!("antidomain[{i}]"), e))
            .collect::<Result<_, _>>()?;
        Ok(FiniteAlgebra::from_flat(
            self.elements.clone(),
            compose,
            meet,
            antidomain,
        )?)
    }
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra, FormatError> {
    serde_json::from_str::<AlgebraFile>(text)?.to_algebra()
}

pub fn emit_algebra(alg: &FiniteAlgebra) -> String {
    pretty(&AlgebraFile::from_algebra(alg))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PfunFile {
    pub base: Vec<String>,
    pub functions: IndexMap<String, Vec<(String, String)>>,
}

/// Named functions read from a [`PfunFile`], in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFunctions {
    pub base: Vec<String>,
    pub names: Vec<String>,
    pub functions: Vec<PartialFunction>,
}

impl NamedFunctions {
    pub fn get(&self, name: &str) -> Option<&PartialFunction> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.functions[i])
    }

    /// Wraps the functions as an algebra, checking closure under
    /// `signature`.
    pub fn into_algebra(self, signature: Signature) -> Result<ConcreteAlgebra, PfunError> {
        ConcreteAlgebra::from_functions(self.base, self.names, self.functions, signature)
    }
}

impl PfunFile {
    pub fn new<'a>(
        base: &[String],
        functions: impl IntoIterator<Item = (&'a str, &'a PartialFunction)>,
    ) -> Self {
        let functions = functions
            .into_iter()
            .map(|(name, f)| {
                let pairs = f
                    .pairs()
                    .map(|(x, y)| (base[x].clone(), base[y].clone()))
                    .collect();
                (name.to_string(), pairs)
            })
            .collect();
        PfunFile {
            base: base.to_vec(),
            functions,
        }
    }

    pub fn from_algebra(alg: &ConcreteAlgebra) -> Self {
        PfunFile::new(
            alg.base(),
            alg.names().iter().map(String::as_str).zip(alg.functions()),
        )
    }

    pub fn from_representation(rep: &Representation) -> Self {
        PfunFile::new(
            &rep.base,
            rep.source
                .names()
                .iter()
                .map(String::as_str)
                .zip(&rep.assignment),
        )
    }

    pub fn resolve(&self) -> Result<NamedFunctions, FormatError> {
        let mut points = IndexMap::with_capacity(self.base.len());
        for (i, p) in self.base.iter().enumerate() {
            if points.insert(p.as_str(), i).is_some() {
                return Err(FormatError::Duplicate {
                    path: format!("base[{i}]"),
                    name: p.clone(),
                });
            }
        }
        let mut names = Vec::with_capacity(self.functions.len());
        let mut functions = Vec::with_capacity(self.functions.len());
        for (name, pairs) in &self.functions {
            let mut resolved = Vec::with_capacity(pairs.len());
            for (k, (x, y)) in pairs.iter().enumerate() {
                let point = |p: &String, side: usize| {
                    points
                        .get(p.as_str())
                        .copied()
                        .ok_or_else(|| FormatError::UnknownPoint {
                            path: format!("functions.{name}[{k}][{side}]"),
                            name: p.clone(),
                        })
                };
                resolved.push((point(x, 0)?, point(y, 1)?));
            }
            let f = PartialFunction::from_pairs(self.base.len(), resolved).map_err(|source| {
                FormatError::Function {
                    path: format!("functions.{name}"),
                    source,
                }
            })?;
            names.push(name.clone());
            functions.push(f);
        }
        Ok(NamedFunctions {
            base: self.base.clone(),
            names,
            functions,
        })
    }
}

pub fn parse_pfun(text: &str) -> Result<NamedFunctions, FormatError> {
    serde_json::from_str::<PfunFile>(text)?.resolve()
}

pub fn emit_pfun(file: &PfunFile) -> String {
    pretty(file)
}

fn pretty(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}
