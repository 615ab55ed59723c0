//! Text and JSON forms of a plane partition.
//!
//! Text: a header line `a b c`, then `a` lines of `b` space-separated
//! entries, each line newline-terminated. JSON: `{"a":..,"b":..,"c":..,"z":[[..],..]}`
//! with no whitespace. Both writers produce the only byte sequence their
//! parser will reproduce verbatim.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{BoxDims, PlanePartition};

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    a: usize,
    b: usize,
    c: u32,
    z: Vec<Vec<i64>>,
}

pub fn to_text(p: &PlanePartition) -> String {
    let d = p.dims();
    let mut out = format!("{} {} {}\n", d.a, d.b, d.c);
    for row in p.rows() {
        let cells: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn from_text(text: &str) -> Result<PlanePartition> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::Parse(format!(
            "header must be `a b c`, got {header:?}"
        )));
    }
    let a = parse_field::<usize>(fields[0], "a")?;
    let b = parse_field::<usize>(fields[1], "b")?;
    let c = parse_field::<u32>(fields[2], "c")?;
    let dims = BoxDims::new(a, b, c)?;
    let rows = lines
        .map(|line| {
            line.split_whitespace()
                .map(|t| parse_field::<i64>(t, "entry"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PlanePartition::validate(&rows, dims)
}

pub fn to_json(p: &PlanePartition) -> String {
    let d = p.dims();
    serde_json::to_string(&PartitionJson {
        a: d.a,
        b: d.b,
        c: d.c,
        z: p.to_rows(),
    })
    .expect("plain struct serializes")
}

pub fn from_json(text: &str) -> Result<PlanePartition> {
    let raw: PartitionJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let dims = BoxDims::new(raw.a, raw.b, raw.c)?;
    PlanePartition::validate(&raw.z, dims)
}

/// Accepts either form, deciding by the first non-blank character.
pub fn parse_any(text: &str) -> Result<PlanePartition> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        from_text(text)
    }
}

fn parse_field<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
}
