//! JSON interchange for matrices, ideals and chains of maps.
//!
//! Matrix: `{"vars": [..], "matrix": [[entry, ..], ..], "structure":
//! "general|sym|skew|upper", "blocks": {"rows": [..], "cols": [..]}}`.
//! Entries are polynomial strings or integers. Ideal: `{"vars": [..],
//! "generators": [..]}`. Chain: `{"vars": [..], "maps": [[[..]], ..]}`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideals::Ideal;
use crate::localalg::{poly_parse, Poly};
use crate::matrixops::{PolyMatrix, Structure};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixInput {
    pub names: Vec<String>,
    pub matrix: PolyMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealInput {
    pub names: Vec<String>,
    pub ideal: Ideal,
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Input(format!("missing field \"{key}\"")))
}

pub fn vars_from_value(v: &Value) -> Result<Vec<String>> {
    let arr = field(v, "vars")?.as_array().ok_or_else(|| Error::Input("\"vars\" must be an array".into()))?;
    let names: Vec<String> = arr
        .iter()
        .map(|n| n.as_str().map(str::to_string).ok_or_else(|| Error::Input("variable names must be strings".into())))
        .collect::<Result<_>>()?;
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || !n.chars().next().unwrap().is_alphabetic() || !n.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::Input(format!("invalid variable name \"{n}\"")));
        }
        if names[..i].contains(n) {
            return Err(Error::Input(format!("duplicate variable \"{n}\"")));
        }
    }
    Ok(names)
}

fn poly_from_value(v: &Value, names: &[String], what: impl Fn() -> String) -> Result<Poly> {
    match v {
        Value::String(s) => poly_parse(s, names).map_err(|e| Error::Input(format!("{}: {e}", what()))),
        Value::Number(n) => poly_parse(&n.to_string(), names).map_err(|e| Error::Input(format!("{}: {e}", what()))),
        _ => Err(Error::Input(format!("{}: expected a polynomial string or a number", what()))),
    }
}

fn rows_from_value(v: &Value, names: &[String]) -> Result<Vec<Vec<Poly>>> {
    let rows = v.as_array().ok_or_else(|| Error::Input("matrix must be an array of rows".into()))?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let r = r.as_array().ok_or_else(|| Error::Input(format!("row {i} is not an array")))?;
            r.iter()
                .enumerate()
                .map(|(j, e)| poly_from_value(e, names, || format!("entry ({i}, {j})")))
                .collect()
        })
        .collect()
}

fn usize_list(v: &Value, key: &str) -> Result<Vec<usize>> {
    field(v, key)?
        .as_array()
        .and_then(|a| a.iter().map(|x| x.as_u64().map(|x| x as usize)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| Error::Input(format!("\"blocks.{key}\" must be a list of sizes")))
}

pub fn matrix_from_value(v: &Value) -> Result<MatrixInput> {
    let names = vars_from_value(v)?;
    let rows = rows_from_value(field(v, "matrix")?, &names)?;
    let structure = match v.get("structure").map(|s| s.as_str()) {
        None | Some(Some("general")) => Structure::General,
        Some(Some("sym")) => Structure::Symmetric,
        Some(Some("skew")) => Structure::SkewSymmetric,
        Some(Some("upper")) => {
            let blocks = field(v, "blocks")?;
            Structure::UpperBlockTriangular { row_blocks: usize_list(blocks, "rows")?, col_blocks: usize_list(blocks, "cols")? }
        }
        Some(other) => return Err(Error::Input(format!("unknown structure {other:?}"))),
    };
    let matrix = PolyMatrix::new(names.len(), rows, structure)?;
    Ok(MatrixInput { names, matrix })
}

pub fn parse_matrix_json(text: &str) -> Result<MatrixInput> {
    matrix_from_value(&parse_json(text)?)
}

pub fn matrix_to_json(names: &[String], a: &PolyMatrix) -> Value {
    let mut out = json!({
        "vars": names,
        "matrix": a.to_strings(names),
        "structure": a.structure().name(),
    });
    if let Structure::UpperBlockTriangular { row_blocks, col_blocks } = a.structure() {
        out["blocks"] = json!({ "rows": row_blocks, "cols": col_blocks });
    }
    out
}

fn ideal_list(v: &Value, names: &[String], key: &str) -> Result<Ideal> {
    let gens = field(v, key)?.as_array().ok_or_else(|| Error::Input(format!("\"{key}\" must be an array")))?;
    let polys: Vec<Poly> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| poly_from_value(g, names, || format!("{key}[{i}]")))
        .collect::<Result<_>>()?;
    Ok(Ideal::new(names.len(), polys))
}

pub fn ideal_from_value(v: &Value) -> Result<IdealInput> {
    let names = vars_from_value(v)?;
    let ideal = ideal_list(v, &names, "generators")?;
    Ok(IdealInput { names, ideal })
}

pub fn parse_ideal_json(text: &str) -> Result<IdealInput> {
    ideal_from_value(&parse_json(text)?)
}

/// An optional second ideal stored under `key` next to the generators.
pub fn extra_ideal(v: &Value, names: &[String], key: &str) -> Result<Option<Ideal>> {
    if v.get(key).is_none() {
        return Ok(None);
    }
    ideal_list(v, names, key).map(Some)
}

pub fn ideal_to_json(names: &[String], i: &Ideal) -> Value {
    json!({ "vars": names, "generators": i.to_strings(names) })
}

pub fn parse_chain_json(text: &str) -> Result<(Vec<String>, Vec<PolyMatrix>)> {
    let v = parse_json(text)?;
    let names = vars_from_value(&v)?;
    let maps = field(&v, "maps")?.as_array().ok_or_else(|| Error::Input("\"maps\" must be an array".into()))?;
    let maps = maps
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let rows = rows_from_value(m, &names).map_err(|e| Error::Input(format!("map {k}: {e}")))?;
            PolyMatrix::general(names.len(), rows)
        })
        .collect::<Result<_>>()?;
    Ok((names, maps))
}
