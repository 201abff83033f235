use chain_core::interval::unit_interval;
use chain_core::sign::koszul_sign;
use chain_core::tensor::{map_tensor, permute_factors, tensor_many, tensor_power};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;
use std::sync::Arc;

/// Arbitrary graded map (not necessarily a chain map) on the interval,
/// entries drawn from a pool.
fn graded_map(i: &Arc<ChainComplex>, degree: i64, pool: &[i64]) -> ChainMap {
    let mut next = 0usize;
    let mut take = || {
        let v = pool[next % pool.len()];
        next += 1;
        BigInt::from(v)
    };
    ChainMap::from_fn(i.clone(), i.clone(), degree, |d| {
        IntegerMatrix::from_fn(i.rank(d + degree), i.rank(d), |_, _| take())
    })
    .unwrap()
}

proptest! {
    /// (f1 (x) g1) o (f2 (x) g2) = (-1)^{|f2||g1|} (f1 o f2) (x) (g1 o g2)
    #[test]
    fn tensor_interchange_law(
        df1 in -1i64..=1, dg1 in -1i64..=1, df2 in -1i64..=1, dg2 in -1i64..=1,
        pool in prop::collection::vec(-2i64..=2, 8..=16),
    ) {
        let i = unit_interval().shared();
        let f1 = graded_map(&i, df1, &pool);
        let g1 = graded_map(&i, dg1, &pool[1..]);
        let f2 = graded_map(&i, df2, &pool[2..]);
        let g2 = graded_map(&i, dg2, &pool[3..]);
        let (_, _, top) = map_tensor(&[&f1, &g1]).unwrap();
        let (_, _, bot) = map_tensor(&[&f2, &g2]).unwrap();
        let lhs = top.compose(&bot);
        let (_, _, rhs) = map_tensor(&[&f1.compose(&f2), &g1.compose(&g2)]).unwrap();
        let rhs = rhs.scale(&BigInt::from(koszul_sign(df2, dg1)));
        prop_assert!(lhs.eq_blocks(&rhs));
    }

    /// The boundary of the boundary of any graded map vanishes.
    #[test]
    fn hom_differential_squares_to_zero(k in -1i64..=2, pool in prop::collection::vec(-3i64..=3, 6..=12)) {
        let i = unit_interval().shared();
        let f = graded_map(&i, k, &pool);
        prop_assert!(f.hom_differential().hom_differential().is_zero());
    }

    /// Factor permutations compose contravariantly with the stored signs.
    #[test]
    fn permutation_action_composes(seed in 0usize..6, seed2 in 0usize..6) {
        let perms3 = [
            [0usize, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0],
        ];
        let p = perms3[seed];
        let r = perms3[seed2];
        let i = unit_interval().shared();
        let t = tensor_power(&i, 3);
        let (tp, mp) = permute_factors(&t, &p).unwrap();
        let (_, mr) = permute_factors(&tp, &r).unwrap();
        let q: Vec<usize> = (0..3).map(|x| p[r[x]]).collect();
        let (_, mq) = permute_factors(&t, &q).unwrap();
        prop_assert!(mr.compose(&mp).eq_blocks(&mq));
    }

    /// Tensor of identities is the identity.
    #[test]
    fn tensor_of_identities(n in 1usize..=3) {
        let i = unit_interval().shared();
        let ids: Vec<ChainMap> = (0..n).map(|_| ChainMap::identity(i.clone())).collect();
        let refs: Vec<&ChainMap> = ids.iter().collect();
        let (src, _, m) = map_tensor(&refs).unwrap();
        prop_assert!(m.eq_blocks(&ChainMap::identity(src.complex.clone())));
    }

    /// Tensoring chain maps gives a chain map.
    #[test]
    fn tensor_of_chain_maps_is_chain_map(pool in prop::collection::vec(-2i64..=2, 4..=8)) {
        let i = unit_interval().shared();
        // Degree-0 chain maps on the interval: endpoints map to endpoints
        // compatibly with q |-> c q.
        let c = pool[0];
        let f = ChainMap::from_fn(i.clone(), i.clone(), 0, |d| {
            if d == 1 {
                IntegerMatrix::from_rows(&[vec![c]])
            } else {
                IntegerMatrix::from_rows(&[vec![c, 0], vec![0, c]])
            }
        })
        .unwrap();
        prop_assert!(f.is_chain_map());
        let (_, _, ff) = map_tensor(&[&f, &f]).unwrap();
        prop_assert!(ff.is_chain_map());
    }
}

#[test]
fn unordered_pair_coherence() {
    // Tensoring in either order is isomorphic via the signed swap, and the
    // swap squares to the identity.
    let i = unit_interval().shared();
    let u = ChainComplex::unit().shared();
    let t = tensor_many(&[i.clone(), u.clone()]);
    let (t2, swap) = permute_factors(&t, &[1, 0]).unwrap();
    let (_, back) = permute_factors(&t2, &[1, 0]).unwrap();
    assert!(back.compose(&swap).eq_blocks(&ChainMap::identity(t.complex.clone())));
}
