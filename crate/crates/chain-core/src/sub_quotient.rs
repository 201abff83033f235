use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::{smith_normal_form, solve, IntegerMatrix};
use num_traits::One;

use crate::{ChainComplex, ChainMap, Error};

/// Subcomplex spanned by the given column lattices (one per degree; missing
/// degrees mean the zero lattice). Fails unless the boundary of each lattice
/// lands back inside the lattice one degree down.
pub fn subcomplex_from_lattices(
    c: &Arc<ChainComplex>,
    lattices: &BTreeMap<i64, IntegerMatrix>,
) -> Result<(Arc<ChainComplex>, ChainMap), Error> {
    for (d, l) in lattices {
        if l.rows() != c.rank(*d) {
            return Err(Error::Shape(format!(
                "lattice at degree {} has {} rows, complex has rank {}",
                d,
                l.rows(),
                c.rank(*d)
            )));
        }
    }
    let gen_count = |d: i64| lattices.get(&d).map_or(0, |l| l.cols());
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut diff: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for (&d, l) in lattices {
        if l.cols() == 0 {
            continue;
        }
        basis.insert(d, (0..l.cols()).map(|i| format!("s{}_{}", d, i)).collect());
        let image = c.differential(d).mul(l);
        let below = match lattices.get(&(d - 1)) {
            Some(b) => b.clone(),
            None => IntegerMatrix::zeros(c.rank(d - 1), 0),
        };
        if image.is_zero() {
            continue;
        }
        let induced = solve(&below, &image).ok_or_else(|| {
            Error::NotSubcomplex(format!("boundary escapes the lattice at degree {}", d))
        })?;
        diff.insert(d, induced);
    }
    // prune differentials into degrees with no generators
    diff.retain(|d, _| gen_count(*d) > 0 && gen_count(*d - 1) > 0);
    let sub = ChainComplex::new(basis, diff)?.shared();
    let inclusion = ChainMap::new(
        sub.clone(),
        c.clone(),
        0,
        lattices
            .iter()
            .filter(|(_, l)| l.cols() > 0)
            .map(|(d, l)| (*d, l.clone()))
            .collect(),
    )?;
    debug_assert!(inclusion.is_chain_map());
    Ok((sub, inclusion))
}

/// Quotient of `c` by a per-degree sublattice, which must be saturated
/// (all invariant factors 1) so the quotient is free. Returns the quotient,
/// the projection, and a degreewise splitting of the projection.
pub fn quotient_by_lattice(
    c: &Arc<ChainComplex>,
    lattices: &BTreeMap<i64, IntegerMatrix>,
) -> Result<(Arc<ChainComplex>, ChainMap, ChainMap), Error> {
    let mut proj_blocks: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    let mut sect_blocks: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for d in c.degrees() {
        let n = c.rank(d);
        let (proj, sect, q_rank) = match lattices.get(&d) {
            None => (
                IntegerMatrix::identity(n),
                IntegerMatrix::identity(n),
                n,
            ),
            Some(l) => {
                if l.rows() != n {
                    return Err(Error::Shape(format!(
                        "lattice at degree {} has wrong row count",
                        d
                    )));
                }
                let s = smith_normal_form(l);
                if s.invariant_factors.iter().any(|f| !f.is_one()) {
                    return Err(Error::NotSaturated(d));
                }
                let r = s.rank();
                // rows r.. of U span the quotient coordinates; the matching
                // columns of U^{-1} give a section.
                let rows: Vec<usize> = (r..n).collect();
                let proj = IntegerMatrix::from_fn(n - r, n, |i, j| s.u.get(rows[i], j).clone());
                let sect = s.u_inv.submatrix_columns(&rows);
                (proj, sect, n - r)
            }
        };
        if q_rank > 0 {
            basis.insert(d, (0..q_rank).map(|i| format!("q{}_{}", d, i)).collect());
        }
        proj_blocks.insert(d, proj);
        sect_blocks.insert(d, sect);
    }
    let rank_of = |d: i64| basis.get(&d).map_or(0, |v| v.len());
    let mut diff = BTreeMap::new();
    for d in c.degrees() {
        if rank_of(d) == 0 || rank_of(d - 1) == 0 {
            continue;
        }
        let induced = proj_blocks[&(d - 1)]
            .mul(&c.differential(d))
            .mul(&sect_blocks[&d]);
        if !induced.is_zero() {
            diff.insert(d, induced);
        }
    }
    let q = ChainComplex::new(basis, diff).map_err(|e| match e {
        // d^2 != 0 here means the lattice was not closed under the boundary
        Error::NotAComplex(d) => Error::NotSubcomplex(format!(
            "lattice is not boundary-closed near degree {}",
            d
        )),
        other => other,
    })?;
    let q = q.shared();
    let proj_blocks: BTreeMap<i64, IntegerMatrix> = proj_blocks
        .into_iter()
        .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
        .collect();
    let sect_blocks: BTreeMap<i64, IntegerMatrix> = sect_blocks
        .into_iter()
        .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
        .collect();
    let projection = ChainMap::new(c.clone(), q.clone(), 0, proj_blocks)?;
    let section = ChainMap::new(q.clone(), c.clone(), 0, sect_blocks)?;
    if !projection.is_chain_map() {
        return Err(Error::NotSubcomplex(
            "lattice is not closed under the boundary".into(),
        ));
    }
    Ok((q, projection, section))
}

/// Direct sum with inclusions and projections; labels get an `i{k}:` prefix.
pub fn direct_sum(
    summands: &[Arc<ChainComplex>],
) -> Result<(Arc<ChainComplex>, Vec<ChainMap>, Vec<ChainMap>), Error> {
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    let mut all_degs: Vec<i64> = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        for d in s.degrees() {
            all_degs.push(d);
            basis
                .entry(d)
                .or_default()
                .extend(s.labels(d).iter().map(|l| format!("i{}:{}", k, l)));
        }
    }
    all_degs.sort_unstable();
    all_degs.dedup();
    let offset = |d: i64, k: usize| -> usize {
        summands[..k].iter().map(|s| s.rank(d)).sum()
    };
    let total = |d: i64| -> usize { summands.iter().map(|s| s.rank(d)).sum() };
    let mut diff = BTreeMap::new();
    for &d in &all_degs {
        let rows = total(d - 1);
        let cols = total(d);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, cols);
        for (k, s) in summands.iter().enumerate() {
            let b = s.differential(d);
            let ro = offset(d - 1, k);
            let co = offset(d, k);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m.set(ro + r, co + c, b.get(r, c).clone());
                }
            }
        }
        if !m.is_zero() {
            diff.insert(d, m);
        }
    }
    let sum = ChainComplex::new(basis, diff)?.shared();
    let mut incls = Vec::new();
    let mut projs = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        let incl = ChainMap::from_fn(s.clone(), sum.clone(), 0, |d| {
            let mut m = IntegerMatrix::zeros(total(d), s.rank(d));
            for i in 0..s.rank(d) {
                m.set(offset(d, k) + i, i, num_bigint::BigInt::from(1));
            }
            m
        })?;
        let proj = ChainMap::from_fn(sum.clone(), s.clone(), 0, |d| {
            let mut m = IntegerMatrix::zeros(s.rank(d), total(d));
            for i in 0..s.rank(d) {
                m.set(i, offset(d, k) + i, num_bigint::BigInt::from(1));
            }
            m
        })?;
        incls.push(incl);
        projs.push(proj);
    }
    Ok((sum, incls, projs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::unit_interval;
    use exact_linear::HomologyGroup;
    use num_bigint::BigInt;

    #[test]
    fn interval_endpoint_subcomplex() {
        let i = unit_interval().shared();
        let mut lat = BTreeMap::new();
        // span{p0} in degree 0
        lat.insert(0, IntegerMatrix::from_rows(&[vec![1], vec![0]]));
        let (sub, incl) = subcomplex_from_lattices(&i, &lat).unwrap();
        assert_eq!(sub.total_rank(), 1);
        assert!(incl.is_chain_map());
    }

    #[test]
    fn degree_one_span_is_not_a_subcomplex() {
        let i = unit_interval().shared();
        let mut lat = BTreeMap::new();
        lat.insert(1, IntegerMatrix::from_rows(&[vec![1]]));
        assert!(matches!(
            subcomplex_from_lattices(&i, &lat),
            Err(Error::NotSubcomplex(_))
        ));
    }

    #[test]
    fn quotient_interval_by_endpoint() {
        let i = unit_interval().shared();
        let mut lat = BTreeMap::new();
        lat.insert(0, IntegerMatrix::from_rows(&[vec![0], vec![1]]));
        let (q, proj, sect) = quotient_by_lattice(&i, &lat).unwrap();
        assert_eq!(q.rank(0), 1);
        assert_eq!(q.rank(1), 1);
        assert!(proj.is_chain_map());
        // section splits the projection degreewise
        for d in q.degrees() {
            assert_eq!(
                proj.block(d).mul(&sect.block(d)),
                IntegerMatrix::identity(q.rank(d))
            );
        }
        // quotient of the interval by one endpoint is acyclic
        assert!(q.degrees().iter().all(|&d| q.homology(d).is_trivial()));
    }

    #[test]
    fn non_saturated_lattice_rejected() {
        let i = unit_interval().shared();
        let mut lat = BTreeMap::new();
        lat.insert(0, IntegerMatrix::from_rows(&[vec![0], vec![2]]));
        assert!(matches!(
            quotient_by_lattice(&i, &lat),
            Err(Error::NotSaturated(0))
        ));
    }

    #[test]
    fn direct_sum_homology_adds() {
        let i = unit_interval().shared();
        let u = ChainComplex::unit().shared();
        let (s, incls, projs) = direct_sum(&[i.clone(), u.clone()]).unwrap();
        assert_eq!(s.homology(0), HomologyGroup::free(2));
        for (incl, proj) in incls.iter().zip(&projs) {
            assert!(incl.is_chain_map() && proj.is_chain_map());
            assert!(proj
                .compose(incl)
                .eq_blocks(&ChainMap::identity(incl.source.clone())));
        }
        assert_eq!(
            *projs[1].compose(&incls[0]).block(0).get(0, 0),
            BigInt::from(0)
        );
    }
}
