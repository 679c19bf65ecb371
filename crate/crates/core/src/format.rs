//! Text and JSON encodings of BH matrices and perfect arrays.
//!
//! Matrix files:
//!
//! ```text
//! bh h=<H> order=<N>
//! cyclic n | abelian n1,n2,... | semidirect m,k,t | table <path>
//! <N rows of N space-separated exponents>
//! ```
//!
//! Array files replace the group line with `dims n1,...,nk` and list the
//! entries row-major, `n_k` per line.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrays::PerfectArray;
use crate::group::{make_abelian, make_from_table, make_semidirect, parse_table, FiniteGroup, GroupError, GroupLaw};
use crate::verify::{BhMatrix, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("cannot describe a table group without its source file")]
    NoTableSource,
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

fn parse_list(s: &str, line: usize) -> Result<Vec<usize>, FormatError> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err(line, format!("bad integer {t:?}"))))
        .collect()
}

/// How a group is named in files and on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Cyclic(usize),
    Abelian(Vec<usize>),
    Semidirect { m: usize, k: usize, t: usize },
    Table(PathBuf),
}

impl GroupSpec {
    /// `cyclic 8`, `abelian 2,4`, `semidirect 4,2,3` or `table q8.table`;
    /// a `:` may replace the space.
    pub fn parse(s: &str) -> Result<Self, FormatError> {
        Self::parse_at(s, 0)
    }

    fn parse_at(s: &str, line: usize) -> Result<Self, FormatError> {
        let s = s.trim();
        let (kind, rest) = s
            .split_once(|c: char| c == ':' || c.is_whitespace())
            .ok_or_else(|| parse_err(line, format!("bad group descriptor {s:?}")))?;
        let rest = rest.trim();
        match kind {
            "cyclic" => {
                let n = parse_list(rest, line)?;
                match n[..] {
                    [n] => Ok(GroupSpec::Cyclic(n)),
                    _ => Err(parse_err(line, "cyclic takes one order")),
                }
            }
            "abelian" => Ok(GroupSpec::Abelian(parse_list(rest, line)?)),
            "semidirect" => match parse_list(rest, line)?[..] {
                [m, k, t] => Ok(GroupSpec::Semidirect { m, k, t }),
                _ => Err(parse_err(line, "semidirect takes m,k,t")),
            },
            "table" if !rest.is_empty() => Ok(GroupSpec::Table(PathBuf::from(rest))),
            _ => Err(parse_err(line, format!("unknown group descriptor {s:?}"))),
        }
    }

    /// Build the group. Relative table paths are tried against `base` first.
    pub fn build(&self, base: Option<&Path>) -> Result<FiniteGroup, FormatError> {
        Ok(match self {
            GroupSpec::Cyclic(n) => make_abelian(&[*n])?,
            GroupSpec::Abelian(f) => make_abelian(f)?,
            GroupSpec::Semidirect { m, k, t } => make_semidirect(*m, *k, *t)?,
            GroupSpec::Table(path) => {
                let resolved = match base {
                    Some(b) if path.is_relative() && b.join(path).exists() => b.join(path),
                    _ => path.clone(),
                };
                let text = std::fs::read_to_string(&resolved).map_err(|e| FormatError::Io {
                    path: resolved.display().to_string(),
                    msg: e.to_string(),
                })?;
                make_from_table(&parse_table(&text)?, Some(path.display().to_string()))?
            }
        })
    }

    pub fn of_group(g: &FiniteGroup) -> Result<Self, FormatError> {
        Ok(match g.law() {
            GroupLaw::Abelian(f) if f.len() == 1 => GroupSpec::Cyclic(f[0]),
            GroupLaw::Abelian(f) => GroupSpec::Abelian(f.clone()),
            GroupLaw::Semidirect { m, k, t } => GroupSpec::Semidirect { m: *m, k: *k, t: *t },
            GroupLaw::Table { source: Some(s) } => GroupSpec::Table(PathBuf::from(s)),
            GroupLaw::Table { source: None } => return Err(FormatError::NoTableSource),
        })
    }

    /// The descriptor line.
    pub fn describe(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            GroupSpec::Cyclic(n) => format!("cyclic {n}"),
            GroupSpec::Abelian(f) => format!("abelian {}", join(f)),
            GroupSpec::Semidirect { m, k, t } => format!("semidirect {m},{k},{t}"),
            GroupSpec::Table(p) => format!("table {}", p.display()),
        }
    }
}

/// The same fields as the text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub h: usize,
    pub order: usize,
    pub group: String,
    pub exponents: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayDoc {
    pub h: usize,
    pub order: usize,
    pub dims: Vec<usize>,
    pub exponents: Vec<usize>,
}

fn join_row(row: &[usize]) -> String {
    row.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn matrix_doc(m: &BhMatrix) -> Result<MatrixDoc, FormatError> {
    Ok(MatrixDoc {
        h: m.h(),
        order: m.order(),
        group: GroupSpec::of_group(m.group())?.describe(),
        exponents: m.rows().to_vec(),
    })
}

pub fn write_matrix(m: &BhMatrix) -> Result<String, FormatError> {
    let doc = matrix_doc(m)?;
    let mut out = format!("bh h={} order={}\n{}\n", doc.h, doc.order, doc.group);
    for row in &doc.exponents {
        out.push_str(&join_row(row));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_matrix_json(m: &BhMatrix) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(&matrix_doc(m)?).map_err(|e| FormatError::Json(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

/// `key=value` pairs of a header line after its leading tag.
fn header_fields(line: &str, lineno: usize, tag: &str) -> Result<(usize, usize), FormatError> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(parse_err(lineno, format!("expected header starting with `{tag}`")));
    }
    let (mut h, mut order) = (None, None);
    for p in parts {
        let (k, v) = p.split_once('=').ok_or_else(|| parse_err(lineno, format!("bad header field {p:?}")))?;
        let v: usize = v.parse().map_err(|_| parse_err(lineno, format!("bad integer {v:?}")))?;
        match k {
            "h" => h = Some(v),
            "order" => order = Some(v),
            _ => return Err(parse_err(lineno, format!("unknown header field {k:?}"))),
        }
    }
    match (h, order) {
        (Some(h), Some(o)) => Ok((h, o)),
        _ => Err(parse_err(lineno, "header needs h= and order=")),
    }
}

fn parse_row(line: &str, lineno: usize) -> Result<Vec<usize>, FormatError> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(lineno, format!("bad exponent {t:?}"))))
        .collect()
}

/// Parse a matrix in either the text or the JSON encoding.
pub fn read_matrix(text: &str, base: Option<&Path>) -> Result<BhMatrix, FormatError> {
    let doc = if text.trim_start().starts_with('{') {
        serde_json::from_str::<MatrixDoc>(text).map_err(|e| FormatError::Json(e.to_string()))?
    } else {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let (h, order) = header_fields(header, ln, "bh")?;
        let (gl, group) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing group line"))?;
        GroupSpec::parse_at(group, gl)?;
        let exponents = lines.map(|(i, l)| parse_row(l, i)).collect::<Result<Vec<_>, _>>()?;
        MatrixDoc { h, order, group: group.to_string(), exponents }
    };
    let group = Arc::new(GroupSpec::parse(&doc.group)?.build(base)?);
    if group.order() != doc.order {
        return Err(parse_err(2, format!("group has order {}, header says {}", group.order(), doc.order)));
    }
    Ok(BhMatrix::new(doc.h, group, doc.exponents)?)
}

pub fn array_doc(a: &PerfectArray) -> ArrayDoc {
    ArrayDoc { h: a.h(), order: a.len(), dims: a.dims().to_vec(), exponents: a.exponents().to_vec() }
}

pub fn write_array(a: &PerfectArray) -> String {
    let dims: Vec<String> = a.dims().iter().map(usize::to_string).collect();
    let mut out = format!("array h={} order={}\ndims {}\n", a.h(), a.len(), dims.join(","));
    let width = *a.dims().last().expect("at least one dimension");
    for row in a.exponents().chunks(width) {
        out.push_str(&join_row(row));
        out.push('\n');
    }
    out
}

pub fn write_array_json(a: &PerfectArray) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(&array_doc(a)).map_err(|e| FormatError::Json(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_array(text: &str) -> Result<PerfectArray, FormatError> {
    let doc = if text.trim_start().starts_with('{') {
        serde_json::from_str::<ArrayDoc>(text).map_err(|e| FormatError::Json(e.to_string()))?
    } else {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
        let (h, order) = header_fields(header, ln, "array")?;
        let (dl, dims) = lines.next().ok_or_else(|| parse_err(ln + 1, "missing dims line"))?;
        let dims = dims.strip_prefix("dims").ok_or_else(|| parse_err(dl, "expected `dims n1,...,nk`"))?;
        let dims = parse_list(dims.trim(), dl)?;
        let mut exponents = Vec::new();
        for (i, l) in lines {
            let row = parse_row(l, i)?;
            if Some(&row.len()) != dims.last() {
                return Err(parse_err(i, format!("rows must have {} entries", dims.last().unwrap_or(&0))));
            }
            exponents.extend(row);
        }
        ArrayDoc { h, order, dims, exponents }
    };
    if doc.dims.iter().product::<usize>() != doc.order {
        return Err(parse_err(2, "dims do not multiply to the order"));
    }
    PerfectArray::new(doc.dims, doc.h, doc.exponents).map_err(|e| parse_err(3, e.to_string()))
}
