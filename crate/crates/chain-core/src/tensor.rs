use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::sign::{koszul_sign, permutation_sign_graded};
use crate::{ChainComplex, ChainMap, Error};

/// A tuple entry records which factor basis element occupies a slot:
/// `(degree within that factor, basis index at that degree)`.
pub type TensorTuple = Vec<(i64, usize)>;

/// Tensor product of an ordered list of complexes, with the dictionary
/// between flat basis indices and per-factor tuples kept alongside.
#[derive(Clone)]
pub struct TensorComplex {
    pub complex: Arc<ChainComplex>,
    pub factors: Vec<Arc<ChainComplex>>,
    tuples: BTreeMap<i64, Vec<TensorTuple>>,
    index: BTreeMap<i64, BTreeMap<TensorTuple, usize>>,
}

impl TensorComplex {
    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn tuples(&self, d: i64) -> &[TensorTuple] {
        static EMPTY: &[TensorTuple] = &[];
        self.tuples.get(&d).map_or(EMPTY, |v| v.as_slice())
    }

    pub fn index_of(&self, d: i64, tuple: &TensorTuple) -> Option<usize> {
        self.index.get(&d)?.get(tuple).copied()
    }

    pub fn tuple_of(&self, d: i64, idx: usize) -> &TensorTuple {
        &self.tuples[&d][idx]
    }
}

fn tuple_label(factors: &[Arc<ChainComplex>], tuple: &TensorTuple) -> String {
    if tuple.is_empty() {
        return "()".to_string();
    }
    tuple
        .iter()
        .enumerate()
        .map(|(i, (d, b))| format!("({})", factors[i].labels(*d)[*b]))
        .collect::<Vec<_>>()
        .join("\u{2297}")
}

/// Ordered tensor product. The empty product is the rank-one unit complex.
pub fn tensor_many(factors: &[Arc<ChainComplex>]) -> TensorComplex {
    // Enumerate tuples in lexicographic order of per-factor (degree, index).
    let mut tuples_flat: Vec<TensorTuple> = vec![Vec::new()];
    for f in factors {
        let mut next = Vec::new();
        for t in &tuples_flat {
            for d in f.degrees() {
                for b in 0..f.rank(d) {
                    let mut t2 = t.clone();
                    t2.push((d, b));
                    next.push(t2);
                }
            }
        }
        tuples_flat = next;
    }

    let mut tuples: BTreeMap<i64, Vec<TensorTuple>> = BTreeMap::new();
    for t in tuples_flat {
        let deg: i64 = t.iter().map(|(d, _)| d).sum();
        tuples.entry(deg).or_default().push(t);
    }
    let mut index: BTreeMap<i64, BTreeMap<TensorTuple, usize>> = BTreeMap::new();
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (deg, ts) in &tuples {
        let mut m = BTreeMap::new();
        let mut labels = Vec::new();
        for (i, t) in ts.iter().enumerate() {
            m.insert(t.clone(), i);
            labels.push(tuple_label(factors, t));
        }
        index.insert(*deg, m);
        basis.insert(*deg, labels);
    }

    // Leibniz differential with the sign of moving d past earlier factors.
    let mut diff: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for (deg, ts) in &tuples {
        let rows = tuples.get(&(deg - 1)).map_or(0, |v| v.len());
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, t) in ts.iter().enumerate() {
            let mut prefix = 0i64;
            for (slot, (fd, fb)) in t.iter().enumerate() {
                let dmat = factors[slot].differential(*fd);
                for r in 0..dmat.rows() {
                    let e = dmat.get(r, *fb);
                    if e.is_zero() {
                        continue;
                    }
                    let mut t2 = t.clone();
                    t2[slot] = (fd - 1, r);
                    let row = index[&(deg - 1)][&t2];
                    let sign = koszul_sign(1, prefix);
                    let v = m.get(row, col) + e * BigInt::from(sign);
                    m.set(row, col, v);
                }
                prefix += fd;
            }
        }
        if !m.is_zero() {
            diff.insert(*deg, m);
        }
    }

    let complex = ChainComplex::new(basis, diff)
        .expect("tensor differential squares to zero")
        .shared();
    TensorComplex {
        complex,
        factors: factors.to_vec(),
        tuples,
        index,
    }
}

pub fn tensor_unit() -> TensorComplex {
    tensor_many(&[])
}

pub fn tensor_power(c: &Arc<ChainComplex>, n: usize) -> TensorComplex {
    tensor_many(&vec![c.clone(); n])
}

/// Tensor product of maps, between already-built tensor complexes.
/// `(f_1 (x) ... (x) f_n)(w_1 (x) ... (x) w_n)` picks up the Koszul sign of
/// moving each `f_j` past `w_1 ... w_{j-1}`.
pub fn map_tensor_into(
    source: &TensorComplex,
    target: &TensorComplex,
    maps: &[&ChainMap],
) -> Result<ChainMap, Error> {
    if maps.len() != source.arity() || maps.len() != target.arity() {
        return Err(Error::Shape("map_tensor: arity mismatch".into()));
    }
    for (i, f) in maps.iter().enumerate() {
        if *f.source != *source.factors[i] || *f.target != *target.factors[i] {
            return Err(Error::Shape(format!(
                "map_tensor: factor {} does not match",
                i
            )));
        }
    }
    let total_shift: i64 = maps.iter().map(|f| f.degree).sum();
    let mut blocks = BTreeMap::new();
    for d in source.complex.degrees() {
        let ts = source.tuples(d);
        let out_deg = d + total_shift;
        let rows = target.complex.rank(out_deg);
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, t) in ts.iter().enumerate() {
            // terms: partial target tuples with accumulated coefficients
            let mut terms: Vec<(TensorTuple, BigInt)> =
                vec![(Vec::new(), BigInt::from(1))];
            let mut prefix = 0i64;
            for (slot, (fd, fb)) in t.iter().enumerate() {
                let f = maps[slot];
                let sign = koszul_sign(f.degree, prefix);
                let block = f.block(*fd);
                let mut next = Vec::new();
                for r in 0..block.rows() {
                    let e = block.get(r, *fb);
                    if e.is_zero() {
                        continue;
                    }
                    let coeff = e * BigInt::from(sign);
                    for (pt, c) in &terms {
                        let mut pt2 = pt.clone();
                        pt2.push((fd + f.degree, r));
                        next.push((pt2, c * &coeff));
                    }
                }
                terms = next;
                if terms.is_empty() {
                    break;
                }
                prefix += fd;
            }
            for (pt, c) in terms {
                let row = target
                    .index_of(out_deg, &pt)
                    .expect("target tuple exists");
                let v = m.get(row, col) + c;
                m.set(row, col, v);
            }
        }
        if !m.is_zero() {
            blocks.insert(d, m);
        }
    }
    ChainMap::new(
        source.complex.clone(),
        target.complex.clone(),
        total_shift,
        blocks,
    )
}

/// Flattening `A_0 (x) ... (x) A_{x-1} (x) B (x) A_{x+1} (x) ... ` where the
/// slot-`x` factor of `mid` is itself the tensor complex `inner`: splice the
/// inner tuple into the outer one. Reassociation never crosses factors, so
/// all coefficients are `+1`.
pub fn splice_map(
    mid: &TensorComplex,
    x: usize,
    inner: &TensorComplex,
    out: &TensorComplex,
) -> Result<ChainMap, Error> {
    let mut blocks = BTreeMap::new();
    for d in mid.complex.degrees() {
        let ts = mid.tuples(d);
        let rows = out.complex.rank(d);
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, tup) in ts.iter().enumerate() {
            let mut big: TensorTuple = Vec::new();
            for (slot, entry) in tup.iter().enumerate() {
                if slot == x {
                    big.extend(inner.tuple_of(entry.0, entry.1).iter().copied());
                } else {
                    big.push(*entry);
                }
            }
            let row = out
                .index_of(d, &big)
                .ok_or_else(|| Error::Shape("spliced tuple missing".into()))?;
            m.set(row, col, BigInt::from(1));
        }
        blocks.insert(d, m);
    }
    ChainMap::new(mid.complex.clone(), out.complex.clone(), 0, blocks)
}

/// Tensor product of maps; builds both tensor complexes.
pub fn map_tensor(maps: &[&ChainMap]) -> Result<(TensorComplex, TensorComplex, ChainMap), Error> {
    let source = tensor_many(&maps.iter().map(|f| f.source.clone()).collect::<Vec<_>>());
    let target = tensor_many(&maps.iter().map(|f| f.target.clone()).collect::<Vec<_>>());
    let map = map_tensor_into(&source, &target, maps)?;
    Ok((source, target, map))
}

/// Reorder tensor factors. Output slot `i` holds input factor `perm[i]`;
/// the map carries the graded sign of the crossing.
pub fn permute_factors(
    t: &TensorComplex,
    perm: &[usize],
) -> Result<(TensorComplex, ChainMap), Error> {
    if perm.len() != t.arity() {
        return Err(Error::Shape("permute_factors: length mismatch".into()));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::Shape("permute_factors: not a permutation".into()));
        }
        seen[p] = true;
    }
    let out_factors: Vec<_> = perm.iter().map(|&p| t.factors[p].clone()).collect();
    let out = tensor_many(&out_factors);
    let mut blocks = BTreeMap::new();
    for d in t.complex.degrees() {
        let ts = t.tuples(d);
        let rows = out.complex.rank(d);
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, tup) in ts.iter().enumerate() {
            let degrees: Vec<i64> = tup.iter().map(|(fd, _)| *fd).collect();
            let sign = permutation_sign_graded(&degrees, perm);
            let out_tup: TensorTuple = perm.iter().map(|&p| tup[p]).collect();
            let row = out.index_of(d, &out_tup).expect("permuted tuple exists");
            m.set(row, col, BigInt::from(sign));
        }
        blocks.insert(d, m);
    }
    let map = ChainMap::new(t.complex.clone(), out.complex.clone(), 0, blocks)?;
    Ok((out, map))
}

/// Group consecutive factors into sub-tensors. Returns the per-group tensor
/// complexes, the grouped tensor, and the basis-matching isomorphism (all
/// coefficients `+1`: reassociation never crosses factors).
pub fn reassociate(
    t: &TensorComplex,
    groups: &[std::ops::Range<usize>],
) -> Result<(Vec<TensorComplex>, TensorComplex, ChainMap), Error> {
    let mut at = 0;
    for g in groups {
        if g.start != at {
            return Err(Error::Shape("reassociate: groups must tile 0..n".into()));
        }
        at = g.end;
    }
    if at != t.arity() {
        return Err(Error::Shape("reassociate: groups must tile 0..n".into()));
    }
    let group_tensors: Vec<TensorComplex> = groups
        .iter()
        .map(|g| tensor_many(&t.factors[g.clone()]))
        .collect();
    let grouped = tensor_many(
        &group_tensors
            .iter()
            .map(|g| g.complex.clone())
            .collect::<Vec<_>>(),
    );
    let mut blocks = BTreeMap::new();
    for d in t.complex.degrees() {
        let ts = t.tuples(d);
        let rows = grouped.complex.rank(d);
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, tup) in ts.iter().enumerate() {
            let mut out_tup: TensorTuple = Vec::with_capacity(groups.len());
            for (gi, g) in groups.iter().enumerate() {
                let sub: TensorTuple = tup[g.clone()].to_vec();
                let gd: i64 = sub.iter().map(|(fd, _)| fd).sum();
                let idx = group_tensors[gi]
                    .index_of(gd, &sub)
                    .expect("sub-tuple exists in group tensor");
                out_tup.push((gd, idx));
            }
            let row = grouped.index_of(d, &out_tup).expect("grouped tuple exists");
            m.set(row, col, BigInt::from(1));
        }
        blocks.insert(d, m);
    }
    let map = ChainMap::new(t.complex.clone(), grouped.complex.clone(), 0, blocks)?;
    Ok((group_tensors, grouped, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::unit_interval;

    #[test]
    fn empty_tensor_is_unit() {
        let t = tensor_unit();
        assert_eq!(t.complex.rank(0), 1);
        assert_eq!(t.complex.total_rank(), 1);
    }

    #[test]
    fn interval_squared_ranks() {
        let i = unit_interval().shared();
        let t = tensor_power(&i, 2);
        assert_eq!(t.complex.rank(0), 4);
        assert_eq!(t.complex.rank(1), 4);
        assert_eq!(t.complex.rank(2), 1);
        // d^2 = 0 is enforced by construction; check d(q(x)q) explicitly:
        // d(q(x)q) = dq (x) q - q (x) dq.
        let d2 = t.complex.differential(2);
        let q = i.index_of_label(1, "q").unwrap();
        let col: Vec<BigInt> = (0..d2.rows()).map(|r| d2.get(r, 0).clone()).collect();
        let find = |a: (i64, usize), b: (i64, usize)| t.index_of(1, &vec![a, b]).unwrap();
        let p0 = (0i64, i.index_of_label(0, "p0").unwrap());
        let p1 = (0i64, i.index_of_label(0, "p1").unwrap());
        let qq = (1i64, q);
        assert_eq!(col[find(p1, qq)], BigInt::from(1));
        assert_eq!(col[find(p0, qq)], BigInt::from(-1));
        assert_eq!(col[find(qq, p1)], BigInt::from(-1));
        assert_eq!(col[find(qq, p0)], BigInt::from(1));
    }

    #[test]
    fn swap_on_top_degree_is_negative() {
        let i = unit_interval().shared();
        let t = tensor_power(&i, 2);
        let (_, swap) = permute_factors(&t, &[1, 0]).unwrap();
        assert!(swap.is_chain_map());
        // q(x)q maps to -q(x)q.
        assert_eq!(*swap.block(2).get(0, 0), BigInt::from(-1));
        // degree 0 part is an honest permutation matrix.
        assert_eq!(swap.block(0).mul(&swap.block(0)), IntegerMatrix::identity(4));
    }

    #[test]
    fn reassociation_is_sign_free_chain_iso() {
        let i = unit_interval().shared();
        let t = tensor_power(&i, 3);
        let (_, grouped, iso) = reassociate(&t, &[0..1, 1..3]).unwrap();
        assert!(iso.is_chain_map());
        for d in t.complex.degrees() {
            assert_eq!(t.complex.rank(d), grouped.complex.rank(d));
            let b = iso.block(d);
            // permutation matrix with all entries >= 0
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    assert!(*b.get(r, c) >= BigInt::from(0));
                }
            }
        }
    }

    #[test]
    fn map_tensor_respects_interchange_sign() {
        // f = g = the degree -1 map sending q to p0 on the interval.
        let i = unit_interval().shared();
        let mut f = ChainMap::zero(i.clone(), i.clone(), -1);
        f.set_block(1, IntegerMatrix::from_rows(&[vec![1], vec![0]]))
            .unwrap();
        let (src, tgt, fg) = map_tensor(&[&f, &f]).unwrap();
        // (f(x)g)(q(x)q) = (-1)^{|g||q|} f(q)(x)g(q) = -p0(x)p0.
        let col_idx = src.index_of(2, &vec![(1, 0), (1, 0)]).unwrap();
        let row_idx = tgt.index_of(0, &vec![(0, 0), (0, 0)]).unwrap();
        assert_eq!(*fg.block(2).get(row_idx, col_idx), BigInt::from(-1));
    }
}
