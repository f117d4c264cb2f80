//! The JSON problem schema and its conversion into validated engine objects.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;

use charsub::algebra::{Flavor, StructureAlgebra};
use charsub::certificate::ClassTag;
use charsub::engine::series::{LevelRequirement, SeriesSpec, SeriesWitness};
use charsub::field::FieldPrime;
use charsub::morphisms::{validate_morphism, Morphism, MorphismKind};
use charsub::subspace::{Row, Subspace};
use charsub::words::{parse_word, MultilinearElement};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldDoc {
    p: u64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum LevelDoc {
    Identity { word: String },
    Class { tag: ClassTag },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesDoc {
    levels: Vec<LevelDoc>,
    witness: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemDocument {
    field: FieldDoc,
    dimension: usize,
    #[serde(default)]
    flavor: Option<Flavor>,
    #[serde(default)]
    product: Vec<(usize, usize, usize, i64)>,
    #[serde(default)]
    subspaces: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    automorphisms: BTreeMap<String, Vec<Vec<i64>>>,
    #[serde(default)]
    words: BTreeMap<String, String>,
    #[serde(default)]
    series: Option<SeriesDoc>,
}

/// The series block, resolved against the named objects.
#[derive(Clone, Debug)]
pub struct SeriesBlock {
    pub spec: SeriesSpec,
    pub witness_names: Vec<String>,
    pub witness: SeriesWitness,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub algebra: StructureAlgebra,
    /// Canonical subspaces together with the rows as written.
    pub subspaces: BTreeMap<String, (Subspace, Vec<Row>)>,
    pub automorphisms: BTreeMap<String, Vec<Row>>,
    pub words: BTreeMap<String, MultilinearElement>,
    pub series: Option<SeriesBlock>,
}

fn schema(msg: String) -> CliError {
    CliError::Schema(msg)
}

fn reduce_rows(f: FieldPrime, d: usize, at: &str, rows: &[Vec<i64>]) -> Result<Vec<Row>, CliError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != d {
                return Err(schema(format!(
                    "{at}[{i}]: expected {d} coordinates, found {}",
                    r.len()
                )));
            }
            Ok(r.iter().map(|&x| f.from_i64(x)).collect())
        })
        .collect()
}

impl Problem {
    pub fn load(path: &Path) -> Result<Problem, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Problem::parse(&text).map_err(|e| match e {
            CliError::Json { source, .. } => CliError::Json {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Problem, CliError> {
        let doc: ProblemDocument = serde_json::from_str(text).map_err(|source| CliError::Json {
            path: "<input>".into(),
            source,
        })?;
        let f = FieldPrime::new(doc.field.p).map_err(|e| schema(format!("field.p: {e}")))?;
        let d = doc.dimension;
        if d == 0 {
            return Err(schema("dimension: must be at least 1".into()));
        }
        let entries: Vec<(usize, usize, usize, u64)> = doc
            .product
            .iter()
            .map(|&(i, j, k, c)| (i, j, k, f.from_i64(c)))
            .collect();
        let algebra = StructureAlgebra::new(f, d, &entries, doc.flavor.unwrap_or(Flavor::General))
            .map_err(|e| schema(format!("product: {e}")))?;

        let mut subspaces = BTreeMap::new();
        for (name, rows) in &doc.subspaces {
            let at = format!("subspaces.{name}");
            let rows = reduce_rows(f, d, &at, rows)?;
            let s = Subspace::span(f, d, &rows).map_err(|e| schema(format!("{at}: {e}")))?;
            subspaces.insert(name.clone(), (s, rows));
        }
        let mut automorphisms = BTreeMap::new();
        for (name, rows) in &doc.automorphisms {
            let at = format!("automorphisms.{name}");
            if rows.len() != d {
                return Err(schema(format!("{at}: expected {d} rows, found {}", rows.len())));
            }
            automorphisms.insert(name.clone(), reduce_rows(f, d, &at, rows)?);
        }
        let mut words = BTreeMap::new();
        for (name, text) in &doc.words {
            let w = parse_word(text, f).map_err(|e| schema(format!("words.{name}: {e}")))?;
            words.insert(name.clone(), w);
        }

        let series = match &doc.series {
            None => None,
            Some(s) => {
                let mut levels = Vec::new();
                for (i, l) in s.levels.iter().enumerate() {
                    levels.push(match l {
                        LevelDoc::Class { tag } => LevelRequirement::Class(*tag),
                        LevelDoc::Identity { word } => {
                            let w = match words.get(word) {
                                Some(w) => w.clone(),
                                None => parse_word(word, f).map_err(|e| {
                                    schema(format!(
                                        "series.levels[{i}].word: '{word}' is neither a named word nor an s-expression ({e})"
                                    ))
                                })?,
                            };
                            LevelRequirement::Identity {
                                name: word.clone(),
                                word: w,
                            }
                        }
                    });
                }
                let spec = SeriesSpec::new(levels).map_err(|e| schema(format!("series.levels: {e}")))?;
                let mut chain = Vec::new();
                for (i, name) in s.witness.iter().enumerate() {
                    let (sub, _) = subspaces
                        .get(name)
                        .ok_or_else(|| schema(format!("series.witness[{i}]: unknown subspace '{name}'")))?;
                    chain.push(sub.clone());
                }
                if chain.len() != spec.len() {
                    return Err(schema(format!(
                        "series.witness: {} names for {} levels",
                        chain.len(),
                        spec.len()
                    )));
                }
                let witness = SeriesWitness::from_levels(chain).map_err(|e| schema(format!("series.witness: {e}")))?;
                Some(SeriesBlock {
                    spec,
                    witness_names: s.witness.clone(),
                    witness,
                })
            }
        };
        Ok(Problem {
            algebra,
            subspaces,
            automorphisms,
            words,
            series,
        })
    }

    pub fn subspace(&self, name: &str) -> Result<&Subspace, CliError> {
        self.subspaces
            .get(name)
            .map(|(s, _)| s)
            .ok_or_else(|| CliError::Request(format!("unknown subspace '{name}'")))
    }

    pub fn word(&self, name: &str) -> Result<&MultilinearElement, CliError> {
        self.words
            .get(name)
            .ok_or_else(|| CliError::Request(format!("unknown word '{name}'")))
    }

    /// The selected automorphism names, all of them by default, in name order.
    pub fn automorphism_names(&self, selected: &[String]) -> Result<Vec<String>, CliError> {
        if selected.is_empty() {
            return Ok(self.automorphisms.keys().cloned().collect());
        }
        for name in selected {
            if !self.automorphisms.contains_key(name) {
                return Err(CliError::Request(format!("unknown automorphism '{name}'")));
            }
        }
        Ok(selected.to_vec())
    }

    pub fn matrices(&self, names: &[String]) -> Vec<Vec<Row>> {
        names.iter().map(|n| self.automorphisms[n].clone()).collect()
    }

    /// Validated automorphisms; a failing matrix names itself in the error.
    pub fn generators(&self, names: &[String]) -> Result<Vec<Morphism>, CliError> {
        names
            .iter()
            .map(|n| {
                validate_morphism(&self.algebra, &self.automorphisms[n], MorphismKind::Automorphism)
                    .map_err(|e| CliError::Engine(format!("automorphism {n}"), e))
            })
            .collect()
    }
}
