use proptest::prelude::*;
use setf_sym::FiniteSetObj;

fn disjoint_triple() -> impl Strategy<Value = (FiniteSetObj, FiniteSetObj, FiniteSetObj)> {
    (1usize..=4, 1usize..=4, 0usize..=4).prop_map(|(a, b, c)| {
        let mk = |prefix: &str, n: usize| {
            FiniteSetObj::new((0..n).map(|i| format!("{}{}", prefix, i)).collect()).unwrap()
        };
        (mk("a", a), mk("b", b), mk("c", c))
    })
}

proptest! {
    /// X u_x (Y u_y Z) = (X u_x Y) u_y Z for x in X, y in Y (disjoint labels).
    #[test]
    fn graft_is_associative((x, y, z) in disjoint_triple(), xi in 0usize..4, yi in 0usize..4) {
        let xl = x.labels()[xi % x.len()].clone();
        let yl = y.labels()[yi % y.len()].clone();
        let lhs = x.graft(&xl, &y.graft(&yl, &z).unwrap()).unwrap();
        let rhs = x.graft(&xl, &y).unwrap().graft(&yl, &z).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Grafting at distinct slots of the same set commutes.
    #[test]
    fn graft_commutes_across_slots((x, y, z) in disjoint_triple(), i in 0usize..4, j in 0usize..4) {
        prop_assume!(x.len() >= 2);
        let xi = x.labels()[i % x.len()].clone();
        let xj = x.labels()[j % x.len()].clone();
        prop_assume!(xi != xj);
        let lhs = x.graft(&xi, &y).unwrap().graft(&xj, &z).unwrap();
        let rhs = x.graft(&xj, &z).unwrap().graft(&xi, &y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
