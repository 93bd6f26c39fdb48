//! Text and JSON forms of the four object kinds.
//!
//! Sequences, permutations and posets are one object per line, entries
//! separated by spaces. Matrices are one row per line with a blank line
//! between matrices. Any object may also be given as a JSON object on a
//! single line, and a whole input may be a JSON array of such objects.

use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrices::TriMatrix;
use crate::permutations::Permutation;
use crate::posets::FactorialPoset;
use crate::sequences::DSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Sequence,
    Permutation,
    Poset,
    Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Object {
    Sequence(DSequence),
    Permutation(Permutation),
    Poset(FactorialPoset),
    Matrix(TriMatrix),
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Sequence(_) => Kind::Sequence,
            Object::Permutation(_) => Kind::Permutation,
            Object::Poset(_) => Kind::Poset,
            Object::Matrix(_) => Kind::Matrix,
        }
    }

    /// Line form; matrices span several lines.
    pub fn to_text(&self) -> String {
        match self {
            Object::Sequence(x) => x.to_string(),
            Object::Permutation(p) => p.to_string(),
            Object::Poset(p) => p.to_string(),
            Object::Matrix(a) => a.to_string(),
        }
    }

    /// JSON form. `d` is recorded on sequences; `with_covers` adds the
    /// Hasse diagram to posets.
    pub fn to_json(&self, d: u32, with_covers: bool) -> Value {
        match self {
            Object::Sequence(x) => json!({ "d": d, "values": x.values() }),
            Object::Permutation(p) => json!({ "values": p.values() }),
            Object::Poset(p) => {
                let mut v = json!({ "n": p.len(), "omega": p.omega() });
                if with_covers {
                    let covers: Vec<[usize; 2]> =
                        p.covers().into_iter().map(|(u, w)| [u, w]).collect();
                    v["covers"] = json!(covers);
                }
                v
            }
            Object::Matrix(a) => serde_json::to_value(a).expect("matrix serializes"),
        }
    }
}

fn parse_numbers<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>()
                .map_err(|_| Error::Parse(format!("`{tok}` is not a valid integer")))
        })
        .collect()
}

pub fn parse_sequence(line: &str) -> Result<DSequence> {
    DSequence::new(parse_numbers(line)?)
}

pub fn parse_permutation(line: &str) -> Result<Permutation> {
    Permutation::new(parse_numbers(line)?)
}

pub fn parse_poset(line: &str) -> Result<FactorialPoset> {
    FactorialPoset::new(parse_numbers(line)?)
}

/// One matrix given as rows of text.
pub fn parse_matrix(lines: &[&str]) -> Result<TriMatrix> {
    let rows = lines
        .iter()
        .map(|l| parse_numbers::<u32>(l))
        .collect::<Result<Vec<_>>>()?;
    TriMatrix::new(rows)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field `{key}`")))
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads one object from its JSON form (bare arrays are accepted for the
/// line-oriented kinds).
pub fn object_from_json(v: &Value, kind: Kind) -> Result<Object> {
    let list = |key: &str| -> Result<&Value> {
        if v.is_array() {
            Ok(v)
        } else {
            field(v, key)
        }
    };
    Ok(match kind {
        Kind::Sequence => Object::Sequence(DSequence::new(from_value(list("values")?)?)?),
        Kind::Permutation => Object::Permutation(Permutation::new(from_value(list("values")?)?)?),
        Kind::Poset => Object::Poset(FactorialPoset::new(from_value(list("omega")?)?)?),
        Kind::Matrix => Object::Matrix(from_value(v)?),
    })
}

fn parse_line_object(line: &str, kind: Kind) -> Result<Object> {
    if line.starts_with('{') {
        let v: Value = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
        return object_from_json(&v, kind);
    }
    Ok(match kind {
        Kind::Sequence => Object::Sequence(parse_sequence(line)?),
        Kind::Permutation => Object::Permutation(parse_permutation(line)?),
        Kind::Poset => Object::Poset(parse_poset(line)?),
        Kind::Matrix => Object::Matrix(parse_matrix(&[line])?),
    })
}

/// A parsed input object with the 1-based line where it starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputItem {
    pub line: usize,
    pub object: Result<Object>,
}

/// Splits an input stream into objects of `kind`. Parse failures are kept
/// per item so the caller can report them and continue.
pub fn read_items(input: &str, kind: Kind) -> Vec<InputItem> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('[') {
        let first_line = input.len() - trimmed.len();
        let line = input[..first_line].matches('\n').count() + 1;
        return match serde_json::from_str::<Vec<Value>>(input) {
            Ok(values) => values
                .iter()
                .map(|v| InputItem {
                    line,
                    object: object_from_json(v, kind),
                })
                .collect(),
            Err(e) => vec![InputItem {
                line,
                object: Err(Error::Parse(e.to_string())),
            }],
        };
    }

    let numbered: Vec<(usize, &str)> = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .collect();
    if kind != Kind::Matrix {
        return numbered
            .into_iter()
            .filter(|(_, l)| !l.is_empty())
            .map(|(line, l)| InputItem {
                line,
                object: parse_line_object(l, kind),
            })
            .collect();
    }

    let mut items = Vec::new();
    for (blank, group) in &numbered.into_iter().chunk_by(|(_, l)| l.is_empty()) {
        if blank {
            continue;
        }
        let group: Vec<(usize, &str)> = group.collect();
        let line = group[0].0;
        if group[0].1.starts_with('{') {
            items.extend(group.iter().map(|&(line, l)| InputItem {
                line,
                object: parse_line_object(l, kind),
            }));
        } else {
            let rows: Vec<&str> = group.iter().map(|(_, l)| *l).collect();
            items.push(InputItem {
                line,
                object: parse_matrix(&rows).map(Object::Matrix),
            });
        }
    }
    items
}

/// Output encodings shared by the CLI subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Lines,
    Json,
}

/// Renders a stream of objects. Lines mode puts one object per line (a
/// blank line between matrices); JSON mode wraps everything in one array
/// with one object per line.
pub fn render(objects: &[Object], format: Format, d: u32, with_covers: bool) -> String {
    match format {
        Format::Lines => {
            let sep = if objects.iter().any(|o| o.kind() == Kind::Matrix) {
                "\n\n"
            } else {
                "\n"
            };
            let mut s = objects.iter().map(Object::to_text).join(sep);
            if !objects.is_empty() {
                s.push('\n');
            }
            s
        }
        Format::Json => render_json(objects.iter().map(|o| o.to_json(d, with_covers))),
    }
}

/// `[` / one compact value per line / `]`.
pub fn render_json(values: impl IntoIterator<Item = Value>) -> String {
    let body = values.into_iter().map(|v| v.to_string()).join(",\n");
    if body.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{body}\n]\n")
    }
}
