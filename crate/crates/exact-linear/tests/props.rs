use exact_linear::{
    homology_group, kernel_basis, lattices_equal, rank, smith_normal_form, solve, IntegerMatrix,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn small_matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(-5i64..=5, r * c).prop_map(move |v| {
            let entries = v.into_iter().map(BigInt::from).collect();
            IntegerMatrix::from_entries(r, c, entries).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn snf_decomposition_holds(m in small_matrix()) {
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(m.rows()));
        prop_assert_eq!(s.u_inv.mul(&s.u), IntegerMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(m.cols()));
        prop_assert_eq!(s.v_inv.mul(&s.v), IntegerMatrix::identity(m.cols()));
        for w in s.invariant_factors.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        // Off-diagonal of D is zero.
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_is_deterministic(m in small_matrix()) {
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        prop_assert_eq!(a.u, b.u);
        prop_assert_eq!(a.v, b.v);
        prop_assert_eq!(a.d, b.d);
    }

    #[test]
    fn kernel_annihilates_and_has_full_count(m in small_matrix()) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(k.cols(), m.cols() - rank(&m));
        // Kernel basis columns are independent: their matrix has full rank.
        prop_assert_eq!(rank(&k), k.cols());
    }

    #[test]
    fn solve_finds_constructed_solutions(m in small_matrix(), xv in prop::collection::vec(-4i64..=4, 1..=4)) {
        let x = IntegerMatrix::from_columns(
            m.cols(),
            &[xv.iter().take(m.cols()).chain(std::iter::repeat(&0)).take(m.cols()).map(|v| BigInt::from(*v)).collect()],
        );
        let b = m.mul(&x);
        let y = solve(&m, &b).expect("constructed system must be solvable");
        prop_assert_eq!(m.mul(&y), b);
    }

    #[test]
    fn kernel_lattice_matches_transpose_route(m in small_matrix()) {
        // Lattice equality is insensitive to the generator choice.
        let k = kernel_basis(&m);
        let mut shuffled = k.clone();
        if shuffled.cols() >= 2 {
            shuffled.swap_cols(0, 1);
            shuffled.add_col_multiple(0, 1, &BigInt::from(3));
        }
        prop_assert!(lattices_equal(&k, &shuffled));
    }

    #[test]
    fn homology_of_zero_maps_is_free(n in 0usize..5) {
        let d_out = IntegerMatrix::zeros(0, n);
        let d_in = IntegerMatrix::zeros(n, 0);
        let h = homology_group(&d_out, &d_in).unwrap();
        prop_assert_eq!(h.free_rank, n);
        prop_assert!(h.torsion.is_empty());
    }
}
