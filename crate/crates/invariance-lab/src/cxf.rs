//! CXF, the chain exchange format: a JSON object with a `degrees` map from
//! degree to basis labels and a `d` map giving each generator's boundary as
//! a sparse label-to-coefficient object. Keys serialize sorted; integers
//! stay unquoted.

use std::collections::BTreeMap;

use chain_core::ChainComplex;
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{Map, Number, Value};

use crate::Error;

fn as_i64(v: &Value, what: &str) -> Result<i64, Error> {
    v.as_i64()
        .ok_or_else(|| Error::Format(format!("{} must be an integer, got {}", what, v)))
}

fn degree_key(s: &str) -> Result<i64, Error> {
    s.parse()
        .map_err(|_| Error::Format(format!("bad degree key {:?}", s)))
}

/// Parse a CXF value into a chain complex.
pub fn parse_complex(v: &Value) -> Result<ChainComplex, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("complex must be a JSON object".into()))?;
    let degrees = obj
        .get("degrees")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing degrees object".into()))?;
    let mut labels: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (k, names) in degrees {
        let d = degree_key(k)?;
        let names = names
            .as_array()
            .ok_or_else(|| Error::Format(format!("degree {} must list labels", d)))?
            .iter()
            .map(|n| {
                n.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Format(format!("non-string label in degree {}", d)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        labels.insert(d, names);
    }
    let index_of = |d: i64, name: &str| -> Result<usize, Error> {
        labels
            .get(&d)
            .and_then(|ns| ns.iter().position(|n| n == name))
            .ok_or_else(|| Error::Format(format!("unknown label {:?} in degree {}", name, d)))
    };

    let mut diffs: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    if let Some(d_obj) = obj.get("d") {
        let d_obj = d_obj
            .as_object()
            .ok_or_else(|| Error::Format("d must be an object".into()))?;
        for (k, cols) in d_obj {
            let d = degree_key(k)?;
            let rows = labels.get(&(d - 1)).map_or(0, |v| v.len());
            let ncols = labels.get(&d).map_or(0, |v| v.len());
            let mut m = IntegerMatrix::zeros(rows, ncols);
            let cols = cols
                .as_object()
                .ok_or_else(|| Error::Format(format!("d[{}] must be an object", d)))?;
            for (src, entries) in cols {
                let col = index_of(d, src)?;
                let entries = entries
                    .as_object()
                    .ok_or_else(|| Error::Format(format!("boundary of {:?} must be an object", src)))?;
                for (dst, coeff) in entries {
                    let row = index_of(d - 1, dst)?;
                    m.set(row, col, BigInt::from(as_i64(coeff, "boundary coefficient")?));
                }
            }
            diffs.insert(d, m);
        }
    }

    let label_refs: Vec<(i64, Vec<&str>)> = labels
        .iter()
        .map(|(d, ns)| (*d, ns.iter().map(String::as_str).collect()))
        .collect();
    let degree_slices: Vec<(i64, &[&str])> =
        label_refs.iter().map(|(d, ns)| (*d, ns.as_slice())).collect();
    let diff_vec: Vec<(i64, IntegerMatrix)> = diffs.into_iter().collect();
    Ok(ChainComplex::build(&degree_slices, &diff_vec)?)
}

fn bigint_number(v: &BigInt) -> Result<Number, Error> {
    let as_i64: i64 = v
        .try_into()
        .map_err(|_| Error::Format(format!("coefficient {} exceeds the integer range", v)))?;
    Ok(Number::from(as_i64))
}

/// Serialize a chain complex as a CXF value with sorted keys.
pub fn complex_to_value(c: &ChainComplex) -> Result<Value, Error> {
    let mut degrees = Map::new();
    let mut d_map = Map::new();
    for d in c.degrees() {
        degrees.insert(
            d.to_string(),
            Value::Array(
                c.labels(d)
                    .iter()
                    .map(|l| Value::String(l.clone()))
                    .collect(),
            ),
        );
        let m = c.differential(d);
        if m.is_zero() {
            continue;
        }
        let mut cols = Map::new();
        for (j, src) in c.labels(d).iter().enumerate() {
            let mut entries = Map::new();
            for (i, dst) in c.labels(d - 1).iter().enumerate() {
                let e = m.get(i, j);
                if !e.is_zero() {
                    entries.insert(dst.clone(), Value::Number(bigint_number(e)?));
                }
            }
            if !entries.is_empty() {
                cols.insert(src.clone(), Value::Object(entries));
            }
        }
        if !cols.is_empty() {
            d_map.insert(d.to_string(), Value::Object(cols));
        }
    }
    let mut out = Map::new();
    out.insert("degrees".into(), Value::Object(degrees));
    if !d_map.is_empty() {
        out.insert("d".into(), Value::Object(d_map));
    }
    Ok(Value::Object(out))
}

/// Parse a dense integer matrix given as a JSON array of rows.
pub fn parse_matrix(v: &Value) -> Result<IntegerMatrix, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Format("matrix must be an array of rows".into()))?;
    let mut data: Vec<Vec<i64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Format("matrix row must be an array".into()))?;
        data.push(
            row.iter()
                .map(|e| as_i64(e, "matrix entry"))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if data.is_empty() {
        return Ok(IntegerMatrix::zeros(0, 0));
    }
    let cols = data[0].len();
    if data.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("ragged matrix rows".into()));
    }
    Ok(IntegerMatrix::from_rows(&data))
}

/// Serialize a dense integer matrix as an array of rows.
pub fn matrix_to_value(m: &IntegerMatrix) -> Result<Value, Error> {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            row.push(Value::Number(bigint_number(m.get(i, j))?));
        }
        rows.push(Value::Array(row));
    }
    Ok(Value::Array(rows))
}
