//! JSON input files for charts, vector fields, chart maps and Lie algebra actions.
//!
//! Chart:
//! ```json
//! {"dimension": 1, "order": 4, "u": [["w1/(1+z1*w1)"]],
//!  "corrections": [{"order": 1, "u": ["..."]}], "v": [["z1/(1+z1*w1)"]]}
//! ```
//! `u` and `v` list one tuple per order starting at 0; corrections are added on top.
//! Field: `{"hol": ["i*z1"], "antihol": ["-i*w1"]}`.
//! Map: `{"hol": [..], "antihol": [..], "inverse": {"hol": [..], "antihol": [..]}}`,
//! where a missing `antihol` means the conjugate images.
//! Action: `{"dim": 3, "structure": [[1, 2, 3, "1"]], "fields": [field, ..]}` with
//! 1-based indices; `[i, j, k, c]` says `[xi_i, xi_j]` contains `c xi_k`.

use serde::Deserialize;

use crate::calculus::{ChartMap, VectorField};
use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exactnum::{parse_expr, RationalFunction, Scalar};
use crate::momentum::LieAction;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChartFile {
    dimension: usize,
    #[serde(default)]
    order: Option<usize>,
    u: Vec<Vec<String>>,
    #[serde(default)]
    v: Option<Vec<Vec<String>>>,
    #[serde(default)]
    corrections: Vec<CorrectionFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CorrectionFile {
    order: usize,
    u: Vec<String>,
    #[serde(default)]
    v: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    hol: Vec<String>,
    antihol: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapImages {
    hol: Vec<String>,
    #[serde(default)]
    antihol: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapFile {
    hol: Vec<String>,
    #[serde(default)]
    antihol: Option<Vec<String>>,
    inverse: MapImages,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    dim: usize,
    #[serde(default)]
    structure: Vec<(usize, usize, usize, String)>,
    fields: Vec<FieldFile>,
}

fn from_json<'a, T: Deserialize<'a>>(src: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(src).map_err(|e| {
        Error::InvalidInput(format!(
            "{what} file, line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn exprs(list: &[String], n: usize) -> Result<Vec<RationalFunction>> {
    list.iter().map(|s| parse_expr(s, n)).collect()
}

fn tuple(list: &[String], n: usize, what: &str) -> Result<Vec<RationalFunction>> {
    if list.len() != n {
        return Err(Error::InvalidInput(format!(
            "{what} has {} entries, expected {n}",
            list.len()
        )));
    }
    exprs(list, n)
}

/// Parse and validate a chart. `order` overrides the truncation order in the file.
pub fn parse_chart(src: &str, order: Option<usize>) -> Result<Chart> {
    let f: ChartFile = from_json(src, "chart")?;
    let n = f.dimension;
    if n == 0 || n > crate::exactnum::MAX_DIM {
        return Err(Error::InvalidInput(format!("unsupported dimension {n}")));
    }
    let mut u =
        f.u.iter()
            .enumerate()
            .map(|(s, t)| tuple(t, n, &format!("u at order {s}")))
            .collect::<Result<Vec<_>>>()?;
    let mut v =
        f.v.as_ref()
            .map(|vs| {
                vs.iter()
                    .enumerate()
                    .map(|(s, t)| tuple(t, n, &format!("v at order {s}")))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
    for c in &f.corrections {
        let du = tuple(&c.u, n, &format!("correction u at order {}", c.order))?;
        add_at(&mut u, c.order, &du, n);
        match (&mut v, &c.v) {
            (Some(v), Some(dv)) => add_at(v, c.order, &tuple(dv, n, "correction v")?, n),
            (Some(_), None) => {
                return Err(Error::InvalidInput(format!(
                    "correction at order {} lacks v data while the chart carries v",
                    c.order
                )))
            }
            (None, Some(_)) => {
                return Err(Error::InvalidInput(
                    "correction carries v data but the chart does not".to_string(),
                ))
            }
            (None, None) => {}
        }
    }
    let data_order = u.len().saturating_sub(1);
    let order = order.or(f.order).unwrap_or(data_order.max(4));
    Chart::new(n, order, u, v)
}

fn add_at(tuples: &mut Vec<Vec<RationalFunction>>, s: usize, d: &[RationalFunction], n: usize) {
    while tuples.len() <= s {
        tuples.push(vec![RationalFunction::zero(); n]);
    }
    for (k, c) in d.iter().enumerate() {
        tuples[s][k] = tuples[s][k].add(c);
    }
}

fn field_from(f: &FieldFile, n: usize) -> Result<VectorField> {
    Ok(VectorField::new(
        tuple(&f.hol, n, "hol")?,
        tuple(&f.antihol, n, "antihol")?,
    ))
}

/// Parse a vector field on an `n`-dimensional chart.
pub fn parse_field(src: &str, n: usize) -> Result<VectorField> {
    field_from(&from_json(src, "field")?, n)
}

/// Parse a chart map and verify its stated inverse.
pub fn parse_map(src: &str, n: usize) -> Result<ChartMap> {
    let f: MapFile = from_json(src, "map")?;
    let build = |hol: &[String], antihol: &Option<Vec<String>>| -> Result<ChartMap> {
        let h = tuple(hol, n, "hol")?;
        let a = antihol
            .as_ref()
            .map(|a| tuple(a, n, "antihol"))
            .transpose()?;
        ChartMap::new(h, a)
    };
    let map = build(&f.hol, &f.antihol)?;
    let inverse = build(&f.inverse.hol, &f.inverse.antihol)?;
    map.verify_inverse(&inverse)?;
    Ok(map)
}

/// Parse an action; structure constants are checked for consistency, not for the Lie axioms.
pub fn parse_action(src: &str, n: usize) -> Result<LieAction> {
    let f: ActionFile = from_json(src, "action")?;
    let mut entries = Vec::with_capacity(f.structure.len());
    for (i, j, k, c) in &f.structure {
        if *i == 0 || *j == 0 || *k == 0 {
            return Err(Error::InvalidInput(
                "structure indices are 1-based".to_string(),
            ));
        }
        let value = parse_expr(c, n)?.constant_value().ok_or_else(|| {
            Error::InvalidInput(format!("structure constant {c} is not a number"))
        })?;
        entries.push((i - 1, j - 1, k - 1, value));
    }
    let fields = f
        .fields
        .iter()
        .map(|x| field_from(x, n))
        .collect::<Result<Vec<_>>>()?;
    if fields.len() != f.dim {
        return Err(Error::InvalidInput(format!(
            "{} fields for an algebra of dimension {}",
            fields.len(),
            f.dim
        )));
    }
    LieAction::new(f.dim, &entries, fields)
}

/// Parse a constant such as `-2*i` or `1/2`.
pub fn parse_scalar(src: &str) -> Result<Scalar> {
    parse_expr(src, 0)?
        .constant_value()
        .ok_or_else(|| Error::InvalidInput(format!("{src} is not a number")))
}
