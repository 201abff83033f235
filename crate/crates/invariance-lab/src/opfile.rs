//! Operad exchange format: per-arity CXF component complexes with their
//! adjacent-transposition action matrices, the unit vector, optional
//! augmentations, and sparse composition tables keyed `"m,x,n"`.

use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::tensor::tensor_many;
use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use operad_core::TruncatedOperad;
use serde_json::{Map, Number, Value};
use setf_sym::SymmetricComplex;

use crate::cxf::{complex_to_value, matrix_to_value, parse_complex, parse_matrix};
use crate::Error;

fn parse_graded_map(
    v: &Value,
    source: &Arc<ChainComplex>,
    target: &Arc<ChainComplex>,
) -> Result<ChainMap, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("graded map must be an object of degree blocks".into()))?;
    let mut f = ChainMap::zero(source.clone(), target.clone(), 0);
    for (k, block) in obj {
        let d: i64 = k
            .parse()
            .map_err(|_| Error::Format(format!("bad degree key {:?}", k)))?;
        f.set_block(d, parse_matrix(block)?)?;
    }
    Ok(f)
}

fn graded_map_to_value(f: &ChainMap) -> Result<Value, Error> {
    let mut obj = Map::new();
    for d in f.source.degrees() {
        let b = f.block(d);
        if b.rows() > 0 && b.cols() > 0 && !b.is_zero() {
            obj.insert(d.to_string(), matrix_to_value(&b)?);
        }
    }
    Ok(Value::Object(obj))
}

/// Parse an operad file value into a truncated operad.
pub fn parse_operad(v: &Value) -> Result<TruncatedOperad, Error> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Format("operad must be a JSON object".into()))?;
    let n_max = obj
        .get("N")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Format("missing arity bound N".into()))? as usize;
    let unital = obj.get("unital").and_then(Value::as_bool).unwrap_or(false);

    let comps_obj = obj
        .get("components")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing components".into()))?;
    let mut components: BTreeMap<usize, SymmetricComplex> = BTreeMap::new();
    let mut augmentations: BTreeMap<usize, ChainMap> = BTreeMap::new();
    let one = ChainComplex::unit().shared();
    for (k, comp) in comps_obj {
        let n: usize = k
            .parse()
            .map_err(|_| Error::Format(format!("bad arity key {:?}", k)))?;
        let comp = comp
            .as_object()
            .ok_or_else(|| Error::Format(format!("component {} must be an object", n)))?;
        let complex = Arc::new(parse_complex(
            comp.get("complex")
                .ok_or_else(|| Error::Format(format!("component {} misses its complex", n)))?,
        )?);
        let gens_v = comp
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format(format!("component {} misses generators", n)))?;
        let gens = gens_v
            .iter()
            .map(|g| parse_graded_map(g, &complex, &complex))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(aug) = comp.get("augmentation") {
            let row = parse_matrix(aug)?;
            let mut f = ChainMap::zero(complex.clone(), one.clone(), 0);
            f.set_block(0, row)?;
            augmentations.insert(n, f);
        }
        components.insert(n, SymmetricComplex::new(complex, n, gens)?);
    }

    let unit_coeffs = obj
        .get("unit")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Format("missing unit vector".into()))?
        .iter()
        .map(|e| {
            e.as_i64()
                .map(BigInt::from)
                .ok_or_else(|| Error::Format("unit entries must be integers".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let compose_obj = obj
        .get("compose")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Format("missing compose tables".into()))?;
    let mut compositions: BTreeMap<(usize, usize, usize), ChainMap> = BTreeMap::new();
    for (key, table) in compose_obj {
        let parts: Vec<usize> = key
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| Error::Format(format!("bad compose key {:?}", key)))?;
        let [m, x, n] = parts[..] else {
            return Err(Error::Format(format!("compose key {:?} is not m,x,n", key)));
        };
        let cm = components
            .get(&m)
            .ok_or_else(|| Error::Format(format!("compose references missing arity {}", m)))?;
        let cn = components
            .get(&n)
            .ok_or_else(|| Error::Format(format!("compose references missing arity {}", n)))?;
        let out = components
            .get(&(m + n - 1))
            .ok_or_else(|| Error::Format(format!("compose lands past the bound at {}", m + n - 1)))?;
        let pair = tensor_many(&[cm.complex.clone(), cn.complex.clone()]);
        let mut f = ChainMap::zero(pair.complex.clone(), out.complex.clone(), 0);
        let table = table
            .as_object()
            .ok_or_else(|| Error::Format(format!("compose table {:?} must be an object", key)))?;
        for (dk, triples) in table {
            let d: i64 = dk
                .parse()
                .map_err(|_| Error::Format(format!("bad degree key {:?}", dk)))?;
            let mut block = IntegerMatrix::zeros(out.complex.rank(d), pair.complex.rank(d));
            let triples = triples
                .as_array()
                .ok_or_else(|| Error::Format("compose entries must be [row, col, value] triples".into()))?;
            for t in triples {
                let t = t
                    .as_array()
                    .filter(|t| t.len() == 3)
                    .ok_or_else(|| Error::Format("compose entries must be [row, col, value] triples".into()))?;
                let row = t[0]
                    .as_u64()
                    .ok_or_else(|| Error::Format("bad compose row".into()))? as usize;
                let col = t[1]
                    .as_u64()
                    .ok_or_else(|| Error::Format("bad compose column".into()))? as usize;
                let val = t[2]
                    .as_i64()
                    .ok_or_else(|| Error::Format("bad compose value".into()))?;
                block.set(row, col, BigInt::from(val));
            }
            f.set_block(d, block)?;
        }
        compositions.insert((m, x, n), f);
    }

    Ok(TruncatedOperad::new(
        n_max,
        unital,
        components,
        unit_coeffs,
        compositions,
        augmentations,
    )?)
}

/// Serialize a truncated operad; inverse to `parse_operad` for operads with
/// small enough coefficients.
pub fn operad_to_value(op: &TruncatedOperad) -> Result<Value, Error> {
    let mut comps = Map::new();
    for n in 1..=op.max_arity {
        let c = op.component(n)?;
        let mut comp = Map::new();
        comp.insert("complex".into(), complex_to_value(&c.complex)?);
        comp.insert(
            "generators".into(),
            Value::Array(
                c.generators()
                    .iter()
                    .map(graded_map_to_value)
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        );
        if let Some(aug) = op.augmentation(n) {
            comp.insert("augmentation".into(), matrix_to_value(&aug.block(0))?);
        }
        comps.insert(n.to_string(), Value::Object(comp));
    }

    let mut compose = Map::new();
    for m in 1..=op.max_arity {
        for n in 1..=op.max_arity {
            if m + n - 1 > op.max_arity {
                continue;
            }
            for x in 0..m {
                let f = op.composition(m, x, n)?;
                let mut table = Map::new();
                for d in f.source.degrees() {
                    let b = f.block(d);
                    let mut triples = Vec::new();
                    for i in 0..b.rows() {
                        for j in 0..b.cols() {
                            let e = b.get(i, j);
                            if !e.is_zero() {
                                let v: i64 = e.try_into().map_err(|_| {
                                    Error::Format("composition entry exceeds the integer range".into())
                                })?;
                                triples.push(Value::Array(vec![
                                    Value::Number(Number::from(i as u64)),
                                    Value::Number(Number::from(j as u64)),
                                    Value::Number(Number::from(v)),
                                ]));
                            }
                        }
                    }
                    if !triples.is_empty() {
                        table.insert(d.to_string(), Value::Array(triples));
                    }
                }
                compose.insert(format!("{},{},{}", m, x, n), Value::Object(table));
            }
        }
    }

    let unit = op
        .unit()
        .coeffs
        .iter()
        .map(|c| {
            let v: i64 = c
                .try_into()
                .map_err(|_| Error::Format("unit entry exceeds the integer range".into()))?;
            Ok(Value::Number(Number::from(v)))
        })
        .collect::<Result<Vec<_>, Error>>()?;

    let mut out = Map::new();
    out.insert("N".into(), Value::Number(Number::from(op.max_arity as u64)));
    out.insert("unital".into(), Value::Bool(op.unital));
    out.insert("components".into(), Value::Object(comps));
    out.insert("unit".into(), Value::Array(unit));
    out.insert("compose".into(), Value::Object(compose));
    Ok(Value::Object(out))
}
