use std::sync::Arc;

use chain_core::{ChainComplex, ChainMap};
use coalgebra_core::{
    classifying_is_unique, classifying_map, cofree_coalgebra, induced_map, truncated_cofree,
    validate_coalgebra, CofreeVariant,
};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use operad_core::s0;
use proptest::prelude::*;

/// Two-degree cogenerator complex with an arbitrary degree-1 differential
/// (nothing in degree 2, so any matrix closes).
fn cogenerators() -> impl Strategy<Value = Arc<ChainComplex>> {
    (1usize..=2, 0usize..=2).prop_flat_map(|(r0, r1)| {
        prop::collection::vec(-2i64..=2, r0 * r1).prop_map(move |entries| {
            let l0: Vec<String> = (0..r0).map(|i| format!("c{}", i)).collect();
            let l1: Vec<String> = (0..r1).map(|i| format!("e{}", i)).collect();
            let l0: Vec<&str> = l0.iter().map(|s| s.as_str()).collect();
            let l1: Vec<&str> = l1.iter().map(|s| s.as_str()).collect();
            let mut rows = Vec::new();
            for i in 0..r0 {
                rows.push((0..r1).map(|j| entries[i * r1 + j]).collect::<Vec<_>>());
            }
            let degrees: Vec<(i64, &[&str])> = if r1 == 0 {
                vec![(0, &l0[..])]
            } else {
                vec![(0, &l0[..]), (1, &l1[..])]
            };
            let diffs = if r1 == 0 {
                vec![]
            } else {
                vec![(1, IntegerMatrix::from_rows(&rows))]
            };
            ChainComplex::build(&degrees, &diffs).unwrap().shared()
        })
    })
}

fn degree_zero_map(c: &Arc<ChainComplex>, entries: &[i64]) -> ChainMap {
    let r = c.rank(0);
    let mut f = ChainMap::zero(c.clone(), c.clone(), 0);
    let mut b = IntegerMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            b.set(i, j, BigInt::from(entries[(i * r + j) % entries.len()]));
        }
    }
    f.set_block(0, b).unwrap();
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The materialized cofree structure always satisfies the coalgebra
    /// axioms, the counit classifies the identity, and the classifying
    /// system pins morphisms down.
    #[test]
    fn cofree_laws_hold(c in cogenerators()) {
        let op = Arc::new(s0(2).unwrap());
        let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
        let xw = cofree_coalgebra(&w).unwrap();
        let report = validate_coalgebra(&xw).unwrap();
        prop_assert!(report.is_ok(), "violations: {:?}", report.violations);
        let g = classifying_map(&xw, &w.counit, &w).unwrap();
        prop_assert!(g.map.eq_blocks(&ChainMap::identity(w.carrier.clone())));
        prop_assert!(classifying_is_unique(&xw, &w).unwrap());
    }

    /// Induced maps between cofree coalgebras compose functorially.
    #[test]
    fn induced_maps_compose(
        r in 1usize..=2,
        fe in prop::collection::vec(-2i64..=2, 4),
        ge in prop::collection::vec(-2i64..=2, 4),
    ) {
        let op = Arc::new(s0(2).unwrap());
        let labels: Vec<String> = (0..r).map(|i| format!("c{}", i)).collect();
        let labels: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let c = ChainComplex::build(&[(0, &labels)], &[]).unwrap().shared();
        let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
        let f = degree_zero_map(&c, &fe);
        let g = degree_zero_map(&c, &ge);
        let lhs = induced_map(&w, &w, &g.compose(&f)).unwrap();
        let rhs = induced_map(&w, &w, &g).unwrap().map
            .compose(&induced_map(&w, &w, &f).unwrap().map);
        prop_assert!(lhs.map.eq_blocks(&rhs));
    }
}
