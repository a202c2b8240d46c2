//! JSON instance and result files. Box indices in files are 1-based.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boxset::BoxSet;
use crate::error::{Error, Result};
use crate::game::{self, GameInstance, HiderStrategy, Hypergraph, Method, SearcherStrategy, Solution};
use crate::rational::{self, Rational};

fn field_error(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::InvalidInstance(format!("{path}: {msg}"))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<GameInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

/// Parses an instance document, reporting the offending field path or the
/// line and column of a syntax error.
pub fn parse_instance(text: &str) -> Result<GameInstance> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInstance(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = doc.as_object().ok_or_else(|| field_error("$", "expected an object"))?;

    let rewards = obj
        .get("rewards")
        .ok_or_else(|| field_error("rewards", "missing"))?
        .as_array()
        .ok_or_else(|| field_error("rewards", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| parse_reward(v).map_err(|m| field_error(&format!("rewards[{i}]"), m)))
        .collect::<Result<Vec<_>>>()?;
    let n = rewards.len();

    let k = obj
        .get("k")
        .ok_or_else(|| field_error("k", "missing"))?
        .as_u64()
        .ok_or_else(|| field_error("k", "expected a nonnegative integer"))? as usize;

    let hypergraph = match obj.get("hypergraph") {
        None => return Err(field_error("hypergraph", "missing")),
        Some(h) => parse_hypergraph(h, n)?,
    };
    GameInstance::new(rewards, k, hypergraph)
}

fn parse_reward(v: &Value) -> std::result::Result<Rational, String> {
    let text = match v {
        Value::Number(x) => x.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err("expected a number or a numeric string".into()),
    };
    rational::parse(&text).map_err(|e| e.to_string())
}

fn parse_hypergraph(h: &Value, n: usize) -> Result<Hypergraph> {
    let kind = h
        .get("kind")
        .ok_or_else(|| field_error("hypergraph.kind", "missing"))?
        .as_str()
        .ok_or_else(|| field_error("hypergraph.kind", "expected a string"))?;
    match kind {
        "complete" => Ok(Hypergraph::Complete),
        "one_uniform" => {
            let boxes = h.get("boxes").ok_or_else(|| field_error("hypergraph.boxes", "missing"))?;
            Ok(Hypergraph::OneUniform(parse_index_set(boxes, n, "hypergraph.boxes")?))
        }
        "explicit" => {
            let edges = h
                .get("edges")
                .ok_or_else(|| field_error("hypergraph.edges", "missing"))?
                .as_array()
                .ok_or_else(|| field_error("hypergraph.edges", "expected an array of arrays"))?;
            let edges = edges
                .iter()
                .enumerate()
                .map(|(i, e)| parse_index_set(e, n, &format!("hypergraph.edges[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Hypergraph::Explicit(edges))
        }
        other => Err(field_error(
            "hypergraph.kind",
            format!("unknown kind {other:?} (expected complete, one_uniform or explicit)"),
        )),
    }
}

fn parse_index_set(v: &Value, n: usize, path: &str) -> Result<BoxSet> {
    let items = v.as_array().ok_or_else(|| field_error(path, "expected an array of box indices"))?;
    let mut set = BoxSet::EMPTY;
    for (i, item) in items.iter().enumerate() {
        let at = format!("{path}[{i}]");
        let idx = item.as_u64().ok_or_else(|| field_error(&at, "expected a positive integer"))?;
        if idx == 0 || idx as usize > n {
            return Err(field_error(&at, format!("box index {idx} is outside 1..={n}")));
        }
        let b = idx as usize - 1;
        if set.contains(b) {
            return Err(field_error(&at, format!("box {idx} repeated")));
        }
        set.insert(b);
    }
    Ok(set)
}

/// The inverse of [`parse_instance`].
pub fn instance_to_json(instance: &GameInstance) -> Value {
    let one_based = |s: BoxSet| s.iter().map(|i| i + 1).collect::<Vec<_>>();
    let hypergraph = match instance.hypergraph() {
        Hypergraph::Complete => serde_json::json!({"kind": "complete"}),
        Hypergraph::OneUniform(a) => serde_json::json!({"kind": "one_uniform", "boxes": one_based(*a)}),
        Hypergraph::Explicit(edges) => serde_json::json!({
            "kind": "explicit",
            "edges": edges.iter().map(|e| one_based(*e)).collect::<Vec<_>>(),
        }),
    };
    serde_json::json!({
        "rewards": instance.rewards().iter().map(rational::format).collect::<Vec<_>>(),
        "k": instance.k(),
        "hypergraph": hypergraph,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    /// Exact value as `num/den`.
    pub value: String,
    /// Informational only.
    pub value_float: f64,
    pub method: Method,
    pub searcher_strategy: Vec<EdgeWeight>,
    pub hider_strategy: Vec<TrapWeight>,
    pub certificates: Option<CertificateSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeWeight {
    pub edge: Vec<usize>,
    pub prob: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrapWeight {
    pub boxes: Vec<usize>,
    pub prob: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub searcher_guarantee: String,
    pub hider_guarantee: String,
}

fn to_one_based(s: BoxSet) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn from_one_based(v: &[usize], what: &str) -> Result<BoxSet> {
    let mut set = BoxSet::EMPTY;
    for &i in v {
        if i == 0 || i > crate::boxset::MAX_BOXES {
            return Err(Error::InvalidStrategy(format!("{what}: box index {i} out of range")));
        }
        set.insert(i - 1);
    }
    Ok(set)
}

impl ResultFile {
    pub fn from_solution(solution: &Solution) -> Self {
        ResultFile {
            value: rational::format(&solution.value),
            value_float: rational::to_f64(&solution.value),
            method: solution.method,
            searcher_strategy: solution
                .searcher
                .atoms()
                .iter()
                .map(|(s, p)| EdgeWeight { edge: to_one_based(*s), prob: rational::format(p) })
                .collect(),
            hider_strategy: solution
                .hider
                .atoms()
                .iter()
                .map(|(h, p)| TrapWeight { boxes: to_one_based(*h), prob: rational::format(p) })
                .collect(),
            certificates: solution.certificates.as_ref().map(|c| CertificateSummary {
                searcher_guarantee: rational::format(&c.searcher_guarantee),
                hider_guarantee: rational::format(&c.hider_guarantee),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidStrategy(format!("malformed result file: {e}")))
    }

    pub fn exact_value(&self) -> Result<Rational> {
        rational::parse(&self.value)
    }

    pub fn searcher(&self) -> Result<SearcherStrategy> {
        SearcherStrategy::new(
            self.searcher_strategy
                .iter()
                .map(|a| Ok((from_one_based(&a.edge, "searcher_strategy")?, rational::parse(&a.prob)?)))
                .collect::<Result<_>>()?,
        )
    }

    pub fn hider(&self) -> Result<HiderStrategy> {
        HiderStrategy::new(
            self.hider_strategy
                .iter()
                .map(|a| Ok((from_one_based(&a.boxes, "hider_strategy")?, rational::parse(&a.prob)?)))
                .collect::<Result<_>>()?,
        )
    }

    /// Re-runs both guarantee sweeps against `instance` and checks that they
    /// reproduce the stored certificates (when present) and bracket the value.
    pub fn verify(&self, instance: &GameInstance) -> Result<(Rational, Rational)> {
        let value = self.exact_value()?;
        let lower = game::guarantee_of_searcher(instance, &self.searcher()?)?;
        let upper = game::guarantee_of_hider(instance, &self.hider()?)?;
        if let Some(c) = &self.certificates {
            let stored = (rational::parse(&c.searcher_guarantee)?, rational::parse(&c.hider_guarantee)?);
            if stored != (lower.clone(), upper.clone()) {
                return Err(Error::Domain(format!(
                    "stored guarantees {}/{} differ from recomputed {}/{}",
                    c.searcher_guarantee,
                    c.hider_guarantee,
                    rational::format(&lower),
                    rational::format(&upper)
                )));
            }
        }
        if !(lower <= value && value <= upper) {
            return Err(Error::Domain(format!(
                "guarantees [{}, {}] do not bracket the value {}",
                rational::format(&lower),
                rational::format(&upper),
                self.value
            )));
        }
        Ok((lower, upper))
    }
}
