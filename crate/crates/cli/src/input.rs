//! Tensor ingestion.
//!
//! Accepted documents:
//!
//! * JSON `{"dim": n, "entries": [{"index": [i, j, k, l], "value": "p/q"}, ...]}`
//!   with 1-based indices in any order; unlisted slots are zero.
//! * JSON shorthand `{"binary": [a0, .., a4]}`, `{"cyclic": [a, b, c, d, e]}`
//!   or `{"relaxed": [a, b, c, d, e123, e223, e233]}`.
//! * Plain text starting with `binary`, `cyclic` or `relaxed` followed by the
//!   values, or with `dim n` followed by `i j k l value` lines. `#` starts a
//!   comment.
//!
//! Values may be JSON strings or numbers; both go through the exact decimal
//! parser.

use std::collections::BTreeMap;
use std::fmt;

use quartic_core::scalar::{format_rational, parse_rational, Rational};
use quartic_core::tensor::CanonicalIndex;
use quartic_core::{BinaryQuartic, CyclicTernary, ExactTensor, RelaxedCyclicTernary};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Malformed input, naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for InputError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Tensor,
    Binary,
    Cyclic,
    Relaxed,
}

impl Kind {
    pub fn label(self) -> &'static str {
        match self {
            Kind::Tensor => "tensor",
            Kind::Binary => "binary",
            Kind::Cyclic => "cyclic",
            Kind::Relaxed => "relaxed",
        }
    }

    fn arity(self) -> usize {
        match self {
            Kind::Binary | Kind::Cyclic => 5,
            Kind::Relaxed => 7,
            Kind::Tensor => 0,
        }
    }

    fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "binary" => Some(Kind::Binary),
            "cyclic" => Some(Kind::Cyclic),
            "relaxed" => Some(Kind::Relaxed),
            _ => None,
        }
    }
}

/// A parsed input tensor plus how it was given.
#[derive(Debug, Clone, PartialEq)]
pub struct Input {
    pub kind: Kind,
    pub tensor: ExactTensor,
    /// Largest gap between a listed entry and its symmetrized value.
    pub max_deviation: Rational,
}

impl Input {
    pub fn from_shorthand(kind: Kind, values: Vec<Rational>) -> Result<Self, InputError> {
        if values.len() != kind.arity() {
            return Err(InputError::new(
                kind.label(),
                format!("expected {} values, found {}", kind.arity(), values.len()),
            ));
        }
        let tensor = match kind {
            Kind::Binary => BinaryQuartic::from_coefficients(to_array(values)).to_tensor(),
            Kind::Cyclic => CyclicTernary::from_values(to_array(values)).embed(),
            Kind::Relaxed => RelaxedCyclicTernary::from_values(to_array(values)).embed(),
            Kind::Tensor => unreachable!("shorthand kinds only"),
        };
        Ok(Self {
            kind,
            tensor,
            max_deviation: Rational::default(),
        })
    }

    /// Sha-256 of the canonical entry listing, independent of input syntax.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("dim {}\n", self.tensor.dim()));
        for (idx, v) in self.tensor.nonzero_entries() {
            h.update(format!("{idx} {}\n", format_rational(v)));
        }
        hex::encode(h.finalize())
    }
}

fn to_array<const N: usize>(v: Vec<Rational>) -> [Rational; N] {
    v.try_into().expect("length checked")
}

fn parse_value(field: &str, v: &Value) -> Result<Rational, InputError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(InputError::new(field, format!("expected a rational, found {other}"))),
    };
    parse_rational(&text).map_err(|e| InputError::new(field, e.to_string()))
}

pub fn parse_values(field: &str, items: &[&str]) -> Result<Vec<Rational>, InputError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| InputError::new(format!("{field}[{i}]"), e.to_string())))
        .collect()
}

/// Collects listed entries; several orderings of one slot are averaged.
struct EntryTable {
    dim: usize,
    listed: BTreeMap<CanonicalIndex, BTreeMap<[usize; 4], Rational>>,
}

impl EntryTable {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            listed: BTreeMap::new(),
        }
    }

    fn insert(&mut self, field: &str, one_based: [usize; 4], value: Rational) -> Result<(), InputError> {
        let idx = CanonicalIndex::from_one_based(one_based, self.dim).map_err(|e| InputError::new(field, e.to_string()))?;
        let zero_based = one_based.map(|i| i - 1);
        let slot = self.listed.entry(idx).or_default();
        if slot.insert(zero_based, value).is_some() {
            return Err(InputError::new(field, format!("index {one_based:?} listed twice")));
        }
        Ok(())
    }

    /// Unlisted orderings of a listed slot take the mean of the listed ones,
    /// then the dense array is symmetrized.
    fn finish(self) -> Result<Input, InputError> {
        let n = self.dim;
        let mut raw = vec![Rational::default(); n.pow(4)];
        let flat = |[i, j, k, l]: [usize; 4]| ((i * n + j) * n + k) * n + l;
        for (idx, given) in &self.listed {
            let mean = given.values().cloned().sum::<Rational>() / Rational::from_integer(given.len().into());
            for p in permutations(idx.as_array()) {
                raw[flat(p)] = given.get(&p).cloned().unwrap_or_else(|| mean.clone());
            }
        }
        let (tensor, max_deviation) =
            ExactTensor::symmetrize(n, &raw).map_err(|e| InputError::new("entries", e.to_string()))?;
        Ok(Input {
            kind: Kind::Tensor,
            tensor,
            max_deviation,
        })
    }
}

fn permutations(idx: [usize; 4]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut seen = [a, b, c, d];
                    seen.sort();
                    if seen == [0, 1, 2, 3] {
                        let p = [idx[a], idx[b], idx[c], idx[d]];
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    out
}

fn parse_json(text: &str) -> Result<Input, InputError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| InputError::new("document", e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| InputError::new("document", "expected a JSON object"))?;
    for kind in [Kind::Binary, Kind::Cyclic, Kind::Relaxed] {
        if let Some(v) = obj.get(kind.label()) {
            let arr = v
                .as_array()
                .ok_or_else(|| InputError::new(kind.label(), "expected an array"))?;
            let values = arr
                .iter()
                .enumerate()
                .map(|(i, x)| parse_value(&format!("{}[{i}]", kind.label()), x))
                .collect::<Result<Vec<_>, _>>()?;
            return Input::from_shorthand(kind, values);
        }
    }
    let dim = obj
        .get("dim")
        .ok_or_else(|| InputError::new("dim", "missing"))?
        .as_u64()
        .filter(|d| *d > 0)
        .ok_or_else(|| InputError::new("dim", "expected a positive integer"))? as usize;
    let entries = obj
        .get("entries")
        .ok_or_else(|| InputError::new("entries", "missing"))?
        .as_array()
        .ok_or_else(|| InputError::new("entries", "expected an array"))?;
    let mut table = EntryTable::new(dim);
    for (k, e) in entries.iter().enumerate() {
        let field = format!("entries[{k}]");
        let index = e
            .get("index")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 4)
            .ok_or_else(|| InputError::new(format!("{field}.index"), "expected four indices"))?;
        let mut idx = [0usize; 4];
        for (slot, v) in idx.iter_mut().zip(index) {
            *slot = v
                .as_u64()
                .filter(|i| *i >= 1)
                .ok_or_else(|| InputError::new(format!("{field}.index"), "indices are 1-based positive integers"))?
                as usize;
        }
        let value = e
            .get("value")
            .ok_or_else(|| InputError::new(format!("{field}.value"), "missing"))?;
        let value = parse_value(&format!("{field}.value"), value)?;
        table.insert(&format!("{field}.index"), idx, value)?;
    }
    table.finish()
}

fn parse_text(text: &str) -> Result<Input, InputError> {
    let lines: Vec<(usize, Vec<&str>)> = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let Some((_, first)) = lines.first() else {
        return Err(InputError::new("document", "empty input"));
    };
    if let Some(kind) = Kind::from_keyword(first[0]) {
        let tokens: Vec<&str> = lines.iter().flat_map(|(_, t)| t.iter().copied()).skip(1).collect();
        return Input::from_shorthand(kind, parse_values(kind.label(), &tokens)?);
    }
    if first[0] != "dim" || first.len() != 2 {
        return Err(InputError::new("line 1", "expected `binary`, `cyclic`, `relaxed` or `dim <n>`"));
    }
    let dim: usize = first[1]
        .parse()
        .ok()
        .filter(|d| *d > 0)
        .ok_or_else(|| InputError::new("dim", "expected a positive integer"))?;
    let mut table = EntryTable::new(dim);
    for (n, tokens) in &lines[1..] {
        let field = format!("line {n}");
        if tokens.len() != 5 {
            return Err(InputError::new(field, "expected `i j k l value`"));
        }
        let mut idx = [0usize; 4];
        for (slot, t) in idx.iter_mut().zip(tokens) {
            *slot = t
                .parse()
                .ok()
                .filter(|i| *i >= 1)
                .ok_or_else(|| InputError::new(&field, format!("bad index {t:?}")))?;
        }
        let value = parse_rational(tokens[4]).map_err(|e| InputError::new(&field, e.to_string()))?;
        table.insert(&field, idx, value)?;
    }
    table.finish()
}

/// Parse a document in any accepted format.
pub fn parse_document(text: &str) -> Result<Input, InputError> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

/// Parse a whitespace or comma separated shorthand argument.
pub fn parse_shorthand(kind: Kind, arg: &str) -> Result<Input, InputError> {
    let tokens: Vec<&str> = arg.split([' ', ',', '\t']).filter(|s| !s.is_empty()).collect();
    Input::from_shorthand(kind, parse_values(kind.label(), &tokens)?)
}
