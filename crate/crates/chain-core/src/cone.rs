use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::IntegerMatrix;
use num_bigint::BigInt;

use crate::{ChainComplex, ChainMap, Error, Homotopy};

/// Cone and suspension of a complex, with the connecting maps.
pub struct ConeData {
    pub cone: Arc<ChainComplex>,
    pub suspension: Arc<ChainComplex>,
    /// `a -> a(x)p0`, a degree-0 chain map into the cone.
    pub inclusion: ChainMap,
    /// The quotient by the image of the inclusion, onto the suspension.
    pub projection: ChainMap,
}

/// The cone on `a`: basis `{x(x)p0} u {x(x)q}` with
/// `d(x(x)q) = dx(x)q + (-1)^{|x|+1} x(x)p0`. Always acyclic. The
/// suspension keeps only the `q` part: same boundary matrices, degrees
/// shifted up by one.
pub fn cone_and_suspension(a: &Arc<ChainComplex>) -> Result<ConeData, Error> {
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for d in a.degrees() {
        for l in a.labels(d) {
            basis.entry(d).or_default().push(format!("({})\u{2297}p0", l));
        }
        for l in a.labels(d) {
            basis
                .entry(d + 1)
                .or_default()
                .push(format!("({})\u{2297}q", l));
        }
    }
    // In each cone degree d the p0-part (rank a_d) comes first, then the
    // q-part (rank a_{d-1}).
    let rank_p = |d: i64| a.rank(d);
    let rank_q = |d: i64| a.rank(d - 1);
    let mut diff: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for (&d, ls) in &basis {
        let rows = rank_p(d - 1) + rank_q(d - 1);
        let cols = ls.len();
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, cols);
        let da = a.differential(d);
        for c in 0..rank_p(d) {
            for r in 0..da.rows() {
                m.set(r, c, da.get(r, c).clone());
            }
        }
        let da1 = a.differential(d - 1);
        let edge = BigInt::from(if d % 2 == 0 { 1 } else { -1 });
        for c in 0..rank_q(d) {
            // x in degree d-1: d(x(x)q) = dx(x)q - (-1)^{d-1} x(x)p0
            m.set(c, rank_p(d) + c, edge.clone());
            for r in 0..da1.rows() {
                m.set(rank_p(d - 1) + r, rank_p(d) + c, da1.get(r, c).clone());
            }
        }
        diff.insert(d, m);
    }
    let cone = ChainComplex::new(basis, diff)?.shared();

    let suspension = a
        .relabel(|_, l| format!("({})\u{2297}q", l))
        .shift(1)
        .shared();

    let inclusion = ChainMap::from_fn(a.clone(), cone.clone(), 0, |d| {
        let mut m = IntegerMatrix::zeros(rank_p(d) + rank_q(d), a.rank(d));
        for i in 0..a.rank(d) {
            m.set(i, i, BigInt::from(1));
        }
        m
    })?;
    let projection = ChainMap::from_fn(cone.clone(), suspension.clone(), 0, |d| {
        let mut m = IntegerMatrix::zeros(rank_q(d), rank_p(d) + rank_q(d));
        for i in 0..rank_q(d) {
            m.set(i, rank_p(d) + i, BigInt::from(1));
        }
        m
    })?;
    Ok(ConeData {
        cone,
        suspension,
        inclusion,
        projection,
    })
}

/// Mapping cone of a degree-0 chain map `f: A -> B`; degree `d` is
/// `B_d (+) A_{d-1}` with `d(a) = da + (-1)^d f(a)` on the shifted part.
pub fn mapping_cone(f: &ChainMap) -> Result<Arc<ChainComplex>, Error> {
    if f.degree != 0 {
        return Err(Error::Shape("mapping cone needs a degree-0 map".into()));
    }
    if !f.is_chain_map() {
        return Err(Error::NotChainMap("mapping cone input".into()));
    }
    let a = &f.source;
    let b = &f.target;
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut degs = b.degrees();
    for d in a.degrees() {
        degs.push(d + 1);
    }
    degs.sort_unstable();
    degs.dedup();
    for &d in &degs {
        let mut ls: Vec<String> = b.labels(d).iter().map(|l| format!("B:{}", l)).collect();
        ls.extend(a.labels(d - 1).iter().map(|l| format!("A:{}", l)));
        if !ls.is_empty() {
            basis.insert(d, ls);
        }
    }
    let mut diff = BTreeMap::new();
    for &d in &degs {
        let rows = b.rank(d - 1) + a.rank(d - 2);
        let cols = b.rank(d) + a.rank(d - 1);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, cols);
        let db = b.differential(d);
        for c in 0..b.rank(d) {
            for r in 0..db.rows() {
                m.set(r, c, db.get(r, c).clone());
            }
        }
        let da = a.differential(d - 1);
        let fb = f.block(d - 1);
        let edge = BigInt::from(if d % 2 == 0 { 1 } else { -1 });
        for c in 0..a.rank(d - 1) {
            for r in 0..fb.rows() {
                m.set(r, b.rank(d) + c, fb.get(r, c) * &edge);
            }
            for r in 0..da.rows() {
                m.set(b.rank(d - 1) + r, b.rank(d) + c, da.get(r, c).clone());
            }
        }
        diff.insert(d, m);
    }
    Ok(ChainComplex::new(basis, diff)?.shared())
}

/// A degree-0 chain map induces isomorphisms on all integral homology iff
/// its mapping cone is acyclic.
pub fn is_homology_equivalence(f: &ChainMap) -> Result<bool, Error> {
    let cone = mapping_cone(f)?;
    Ok(cone.degrees().iter().all(|&d| cone.homology(d).is_trivial()))
}

/// Split a chain map `F: A(x)I -> B` off the cylinder into its two ends and
/// the homotopy connecting them. Requires the tensor ordering produced by
/// `tensor_many(&[a, interval])`.
pub fn homotopy_from_cylinder_map(
    cyl: &crate::tensor::TensorComplex,
    big_f: &ChainMap,
) -> Result<(ChainMap, ChainMap, Homotopy), Error> {
    let (a, f0, f1, phi) = split_cylinder(cyl, big_f)?;
    let _ = a;
    Ok((f0, f1, Homotopy::new(phi)?))
}

fn split_cylinder(
    cyl: &crate::tensor::TensorComplex,
    big_f: &ChainMap,
) -> Result<(Arc<ChainComplex>, ChainMap, ChainMap, ChainMap), Error> {
    if cyl.arity() != 2 || *cyl.factors[1] != crate::interval::unit_interval() {
        return Err(Error::Shape("expected A (x) interval".into()));
    }
    if *big_f.source != *cyl.complex || big_f.degree != 0 {
        return Err(Error::Shape("map must be degree 0 out of the cylinder".into()));
    }
    let a = cyl.factors[0].clone();
    let b = big_f.target.clone();
    let mut f0 = ChainMap::zero(a.clone(), b.clone(), 0);
    let mut f1 = ChainMap::zero(a.clone(), b.clone(), 0);
    let mut phi = ChainMap::zero(a.clone(), b.clone(), 1);
    for d in a.degrees() {
        let n = a.rank(d);
        let mut m0 = IntegerMatrix::zeros(b.rank(d), n);
        let mut m1 = IntegerMatrix::zeros(b.rank(d), n);
        let mut mq = IntegerMatrix::zeros(b.rank(d + 1), n);
        let fd = big_f.block(d);
        let fdq = big_f.block(d + 1);
        // Phi(x) = (-1)^{|x|} F(x (x) q)
        let sgn = BigInt::from(if d % 2 == 0 { 1 } else { -1 });
        for i in 0..n {
            if let Some(c0) = cyl.index_of(d, &vec![(d, i), (0, 0)]) {
                for r in 0..m0.rows() {
                    m0.set(r, i, fd.get(r, c0).clone());
                }
            }
            if let Some(c1) = cyl.index_of(d, &vec![(d, i), (0, 1)]) {
                for r in 0..m1.rows() {
                    m1.set(r, i, fd.get(r, c1).clone());
                }
            }
            if let Some(cq) = cyl.index_of(d + 1, &vec![(d, i), (1, 0)]) {
                for r in 0..mq.rows() {
                    mq.set(r, i, fdq.get(r, cq) * &sgn);
                }
            }
        }
        f0.set_block(d, m0)?;
        f1.set_block(d, m1)?;
        phi.set_block(d, mq)?;
    }
    Ok((a, f0, f1, phi))
}

/// Assemble a chain map `A(x)I -> B` out of two ends and a connecting
/// homotopy; inverse to `homotopy_from_cylinder_map`.
pub fn cylinder_map_from_homotopy(
    cyl: &crate::tensor::TensorComplex,
    f0: &ChainMap,
    f1: &ChainMap,
    h: &Homotopy,
) -> Result<ChainMap, Error> {
    if cyl.arity() != 2 || *cyl.factors[1] != crate::interval::unit_interval() {
        return Err(Error::Shape("expected A (x) interval".into()));
    }
    let a = cyl.factors[0].clone();
    let b = f0.target.clone();
    let mut big = ChainMap::zero(cyl.complex.clone(), b.clone(), 0);
    for d in cyl.complex.degrees() {
        let mut m = IntegerMatrix::zeros(b.rank(d), cyl.complex.rank(d));
        for (col, tup) in cyl.tuples(d).iter().enumerate() {
            let (ad, ai) = tup[0];
            let (id, ii) = tup[1];
            match (id, ii) {
                (0, 0) => {
                    let blk = f0.block(ad);
                    for r in 0..m.rows() {
                        m.set(r, col, blk.get(r, ai).clone());
                    }
                }
                (0, 1) => {
                    let blk = f1.block(ad);
                    for r in 0..m.rows() {
                        m.set(r, col, blk.get(r, ai).clone());
                    }
                }
                (1, 0) => {
                    // F(x (x) q) = (-1)^{|x|} Phi(x)
                    let sgn = BigInt::from(if ad % 2 == 0 { 1 } else { -1 });
                    let blk = h.phi.block(ad);
                    for r in 0..m.rows() {
                        m.set(r, col, blk.get(r, ai) * &sgn);
                    }
                }
                _ => unreachable!("interval has no other generators"),
            }
        }
        big.set_block(d, m)?;
    }
    let _ = a;
    Ok(big)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::unit_interval;
    use crate::tensor::tensor_many;

    fn sample() -> Arc<ChainComplex> {
        ChainComplex::build(
            &[(0, &["y", "z"]), (1, &["x"])],
            &[(1, IntegerMatrix::from_rows(&[vec![2], vec![-2]]))],
        )
        .unwrap()
        .shared()
    }

    #[test]
    fn cone_is_acyclic() {
        let a = sample();
        let c = cone_and_suspension(&a).unwrap();
        for d in c.cone.degrees() {
            assert!(c.cone.homology(d).is_trivial(), "H_{} of cone nontrivial", d);
        }
    }

    #[test]
    fn cone_maps_compose_to_zero() {
        let a = sample();
        let c = cone_and_suspension(&a).unwrap();
        assert!(c.inclusion.is_chain_map());
        assert!(c.projection.is_chain_map());
        assert!(c.projection.compose(&c.inclusion).is_zero());
    }

    #[test]
    fn suspension_shifts_homology() {
        let a = sample();
        let c = cone_and_suspension(&a).unwrap();
        for d in a.degrees() {
            assert_eq!(a.homology(d), c.suspension.homology(d + 1));
        }
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let a = sample();
        let id = ChainMap::identity(a);
        let cone = mapping_cone(&id).unwrap();
        assert!(cone.degrees().iter().all(|&d| cone.homology(d).is_trivial()));
        assert!(is_homology_equivalence(&id).unwrap());
    }

    #[test]
    fn cone_detects_non_equivalence() {
        let a = sample();
        let z = ChainMap::zero(a.clone(), a, 0);
        assert!(!is_homology_equivalence(&z).unwrap());
    }

    #[test]
    fn cylinder_roundtrip_yields_homotopy() {
        let a = sample();
        let i = unit_interval().shared();
        let cyl = tensor_many(&[a.clone(), i]);
        // Project the cylinder to A by collapsing the interval to a point.
        let mut blocks = BTreeMap::new();
        for d in cyl.complex.degrees() {
            let mut m = IntegerMatrix::zeros(a.rank(d), cyl.complex.rank(d));
            for (col, tup) in cyl.tuples(d).iter().enumerate() {
                let ((ad, ai), (id, _)) = (tup[0], tup[1]);
                if id == 0 {
                    debug_assert_eq!(ad, d);
                    m.set(ai, col, BigInt::from(1));
                }
            }
            blocks.insert(d, m);
        }
        let big = ChainMap::new(cyl.complex.clone(), a.clone(), 0, blocks).unwrap();
        assert!(big.is_chain_map());
        let (f0, f1, h) = homotopy_from_cylinder_map(&cyl, &big).unwrap();
        assert!(f0.is_chain_map() && f1.is_chain_map());
        assert!(h.connects(&f0, &f1));
        let back = cylinder_map_from_homotopy(&cyl, &f0, &f1, &h).unwrap();
        assert!(back.eq_blocks(&big));
    }
}
