use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::interval::unit_interval;
use chain_core::tensor::{tensor_many, tensor_power};
use chain_core::{ChainComplex, ChainMap};
use coalgebra_core::{
    check_coalgebra_morphism, classifying_is_unique, classifying_map, cofree_coalgebra,
    cofree_homotopy_lift, cylinder_coalgebra, cylinder_restricts_to_ends, group_like_elements,
    ideal_kernel, induced_map, is_coideal, truncated_cofree, validate_coalgebra, CofreeVariant,
    OperadCoalgebra,
};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use operad_core::{
    free_operad, ideal_and_quotient, s0, sigma_diagonal, DiagonalSource, GeneratorSymbol,
    TruncatedOperad,
};

fn points(labels: &[&str]) -> Arc<ChainComplex> {
    ChainComplex::build(&[(0, labels)], &[]).unwrap().shared()
}

/// Each basis point of a degree-0 carrier goes to its own diagonal power.
fn diagonal_coalgebra(op: &Arc<TruncatedOperad>, c: &Arc<ChainComplex>) -> OperadCoalgebra {
    let r = c.rank(0);
    let mut structure = BTreeMap::new();
    for n in 1..=op.max_arity {
        let power = tensor_power(c, n);
        let mut f = ChainMap::zero(c.clone(), power.complex.clone(), 0);
        let mut b = IntegerMatrix::zeros(power.complex.rank(0), r);
        for i in 0..r {
            let row = power.index_of(0, &vec![(0, i); n]).unwrap();
            b.set(row, i, BigInt::one());
        }
        f.set_block(0, b).unwrap();
        let count = op.component(n).unwrap().complex.rank(0);
        structure.insert(n, vec![f; count]);
    }
    OperadCoalgebra::new(op.clone(), c.clone(), structure).unwrap()
}

#[test]
fn diagonal_coalgebra_validates() {
    let op = Arc::new(s0(2).unwrap());
    let x = diagonal_coalgebra(&op, &points(&["x", "y"]));
    let report = validate_coalgebra(&x).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);
    assert!(report.checks > 0);
}

#[test]
fn scaled_structure_map_is_rejected() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["x"]);
    let good = diagonal_coalgebra(&op, &c);
    let mut structure = BTreeMap::new();
    for (n, maps) in &good.structure {
        structure.insert(*n, maps.clone());
    }
    structure.get_mut(&2).unwrap()[0] = good.structure[&2][0].scale(&BigInt::from(2));
    let bad = OperadCoalgebra::new(op, c, structure).unwrap();
    let report = validate_coalgebra(&bad).unwrap();
    assert!(!report.is_ok());
}

#[test]
fn coordinate_inclusion_is_a_morphism() {
    let op = Arc::new(s0(2).unwrap());
    let small = diagonal_coalgebra(&op, &points(&["x"]));
    let big = diagonal_coalgebra(&op, &points(&["x", "y"]));
    let mut g = ChainMap::zero(small.carrier.clone(), big.carrier.clone(), 0);
    let mut b = IntegerMatrix::zeros(2, 1);
    b.set(0, 0, BigInt::one());
    g.set_block(0, b).unwrap();
    let report = check_coalgebra_morphism(&small, &big, &g).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);
}

#[test]
fn cofree_structure_validates_and_counit_classifies_the_identity() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["c0", "c1"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
    let xw = cofree_coalgebra(&w).unwrap();
    let report = validate_coalgebra(&xw).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);

    let g = classifying_map(&xw, &w.counit, &w).unwrap();
    assert!(g.map.eq_blocks(&ChainMap::identity(w.carrier.clone())));
    assert!(classifying_is_unique(&xw, &w).unwrap());
}

#[test]
fn cofree_over_a_complex_with_differential_validates() {
    let op = Arc::new(s0(2).unwrap());
    let c = Arc::new(unit_interval());
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
    let xw = cofree_coalgebra(&w).unwrap();
    let report = validate_coalgebra(&xw).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);
    assert!(classifying_is_unique(&xw, &w).unwrap());
}

#[test]
fn classifying_triangle_commutes() {
    let op = Arc::new(s0(2).unwrap());
    let d = diagonal_coalgebra(&op, &points(&["x"]));
    let c = points(&["c0", "c1"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();

    let mut f = ChainMap::zero(d.carrier.clone(), c.clone(), 0);
    let mut b = IntegerMatrix::zeros(2, 1);
    b.set(0, 0, BigInt::one());
    b.set(1, 0, BigInt::from(2));
    f.set_block(0, b).unwrap();

    let g = classifying_map(&d, &f, &w).unwrap();
    assert!(g.map.is_chain_map());
    assert!(w.counit.compose(&g.map).eq_blocks(&f));
}

/// A source whose higher structure vanishes classifies into the arity-1
/// factor alone, where truncation cannot interfere, so the classifying map
/// is a morphism on the nose.
#[test]
fn classifying_a_conilpotent_source_is_a_morphism() {
    let op = Arc::new(s0(2).unwrap());
    let c0 = points(&["x"]);
    let power1 = tensor_power(&c0, 1);
    let mut one = ChainMap::zero(c0.clone(), power1.complex.clone(), 0);
    let mut b = IntegerMatrix::zeros(1, 1);
    b.set(power1.index_of(0, &vec![(0, 0)]).unwrap(), 0, BigInt::one());
    one.set_block(0, b).unwrap();
    let zero2 = ChainMap::zero(c0.clone(), tensor_power(&c0, 2).complex.clone(), 0);
    let structure = BTreeMap::from([(1, vec![one]), (2, vec![zero2.clone(), zero2])]);
    let d = OperadCoalgebra::new(op.clone(), c0.clone(), structure).unwrap();
    let report = validate_coalgebra(&d).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);

    let c = points(&["c0", "c1"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
    let mut f = ChainMap::zero(c0.clone(), c.clone(), 0);
    let mut fb = IntegerMatrix::zeros(2, 1);
    fb.set(0, 0, BigInt::one());
    fb.set(1, 0, BigInt::from(2));
    f.set_block(0, fb).unwrap();

    let g = classifying_map(&d, &f, &w).unwrap();
    assert!(w.counit.compose(&g.map).eq_blocks(&f));
    let xw = cofree_coalgebra(&w).unwrap();
    let morphism = check_coalgebra_morphism(&d, &xw, &g.map).unwrap();
    assert!(morphism.is_ok(), "violations: {:?}", morphism.violations);
}

#[test]
fn induced_maps_are_functorial() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["c0", "c1"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();

    let id = ChainMap::identity(c.clone());
    let ind = induced_map(&w, &w, &id).unwrap();
    assert!(ind.map.eq_blocks(&ChainMap::identity(w.carrier.clone())));

    let mut f = ChainMap::zero(c.clone(), c.clone(), 0);
    f.set_block(0, IntegerMatrix::from_rows(&[
        vec![1, 2],
        vec![0, -1],
    ]))
    .unwrap();
    let mut g = ChainMap::zero(c.clone(), c.clone(), 0);
    g.set_block(0, IntegerMatrix::from_rows(&[
        vec![0, 1],
        vec![3, 1],
    ]))
    .unwrap();
    let lhs = induced_map(&w, &w, &g.compose(&f)).unwrap();
    let rhs = induced_map(&w, &w, &g).unwrap().map.compose(&induced_map(&w, &w, &f).unwrap().map);
    assert!(lhs.map.eq_blocks(&rhs));
}

#[test]
fn induced_map_agrees_with_its_classifying_description() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["c0", "c1"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
    let mut f = ChainMap::zero(c.clone(), c.clone(), 0);
    f.set_block(0, IntegerMatrix::from_rows(&[
        vec![2, -1],
        vec![1, 1],
    ]))
    .unwrap();
    let xw = cofree_coalgebra(&w).unwrap();
    let direct = induced_map(&w, &w, &f).unwrap();
    let classified = classifying_map(&xw, &f.compose(&w.counit), &w).unwrap();
    assert!(direct.map.eq_blocks(&classified.map));
}

#[test]
fn pointed_basepoint_is_group_like() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["c0"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::Pointed).unwrap();
    let xw = cofree_coalgebra(&w).unwrap();

    let base = w.base_inclusion.as_ref().unwrap().block(0).column(0);
    let found = group_like_elements(&xw, 1).unwrap();
    assert!(found.contains(&base), "group-likes: {:?}", found);
}

#[test]
fn coideal_detection_separates_summands_from_slants() {
    let op = Arc::new(s0(2).unwrap());
    let x = diagonal_coalgebra(&op, &points(&["x", "y"]));

    let axis = BTreeMap::from([(
        0i64,
        IntegerMatrix::from_columns(2, &[vec![BigInt::one(), BigInt::zero()]]),
    )]);
    assert!(is_coideal(&x, &axis).unwrap());

    let slant = BTreeMap::from([(
        0i64,
        IntegerMatrix::from_columns(2, &[vec![BigInt::one(), BigInt::one()]]),
    )]);
    assert!(!is_coideal(&x, &slant).unwrap());
}

#[test]
fn kernel_of_a_principal_ideal_matches_the_quotient_cofree() {
    let f = free_operad(&[GeneratorSymbol::new("g", 2)], 2).unwrap();
    let op = Arc::new(f.operad.clone());
    let c = points(&["c0"]);
    let w = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();

    let gen = op.basis_element(2, 0, 0);
    let iq = ideal_and_quotient(&op, &[gen]).unwrap();
    let k = ideal_kernel(&w, iq).unwrap();

    let report = validate_coalgebra(&k.coalgebra).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);

    // splitting: constraints plus kernel fill the carrier, degree by degree
    for d in w.carrier.degrees() {
        assert_eq!(w.carrier.rank(d), k.complex.rank(d) + k.evaluation_ranks[&d]);
    }

    // everything above the surviving unit arity dies
    let wq = truncated_cofree(&k.quotient, &c, CofreeVariant::General).unwrap();
    for d in wq.carrier.degrees() {
        assert_eq!(wq.carrier.rank(d), k.complex.rank(d), "degree {}", d);
    }
    assert_eq!(k.complex.rank(0), 1);
}

#[test]
fn cylinder_validates_and_restricts_to_its_ends() {
    let op = Arc::new(s0(2).unwrap());
    let x = diagonal_coalgebra(&op, &points(&["x"]));
    let sd = sigma_diagonal(DiagonalSource::Plain(op.as_ref())).unwrap();
    let cyl = cylinder_coalgebra(&x, &sd).unwrap();
    let report = validate_coalgebra(&cyl.coalgebra).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);
    assert!(cylinder_restricts_to_ends(&x, &cyl).unwrap());
}

#[test]
fn homotopy_lift_restricts_to_the_classified_ends() {
    let op = Arc::new(s0(2).unwrap());
    let c = points(&["c0"]);
    let d = points(&["d0"]);
    let wc = truncated_cofree(&op, &c, CofreeVariant::General).unwrap();
    let wd = truncated_cofree(&op, &d, CofreeVariant::General).unwrap();
    let sd = sigma_diagonal(DiagonalSource::Plain(op.as_ref())).unwrap();

    let interval = Arc::new(unit_interval());
    let base = tensor_many(&[c.clone(), interval.clone()]);
    // a constant homotopy between two copies of the same cogeneration map
    let mut f = ChainMap::zero(base.complex.clone(), d.clone(), 0);
    let mut b0 = IntegerMatrix::zeros(1, base.complex.rank(0));
    for col in 0..base.complex.rank(0) {
        b0.set(0, col, BigInt::one());
    }
    f.set_block(0, b0).unwrap();
    assert!(f.is_chain_map());

    let lift = cofree_homotopy_lift(&wc, &wd, &sd, &base, &f).unwrap();
    let xd = cofree_coalgebra(&wd).unwrap();
    let report =
        check_coalgebra_morphism(&lift.cylinder.coalgebra, &xd, &lift.map.map).unwrap();
    assert!(report.is_ok(), "violations: {:?}", report.violations);

    for (i, label) in ["p0", "p1"].iter().enumerate() {
        let p = interval.index_of_label(0, label).unwrap();
        let mut end = ChainMap::zero(c.clone(), base.complex.clone(), 0);
        let mut b = IntegerMatrix::zeros(base.complex.rank(0), 1);
        b.set(base.index_of(0, &vec![(0, 0), (0, p)]).unwrap(), 0, BigInt::one());
        end.set_block(0, b).unwrap();
        let lhs = wd
            .counit
            .compose(&lift.map.map)
            .compose(&lift.cylinder.end_maps[i]);
        let rhs = f.compose(&end).compose(&wc.counit);
        assert!(lhs.eq_blocks(&rhs), "end {}", label);
    }
}
