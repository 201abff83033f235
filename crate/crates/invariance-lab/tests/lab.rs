use std::process::Command;
use std::sync::Arc;

use chain_core::cone::is_homology_equivalence;
use chain_core::interval::unit_interval;
use chain_core::{ChainComplex, ChainMap};
use invariance_lab::{
    colimit_commutation_check, com_counterexample, complex_to_value, invariance_experiment,
    make_homology_equivalence, parse_complex, random_chain_map, random_complex,
    random_filtration, splitting_check,
};
use operad_core::{check_operad_axioms, free_operad, s0, GeneratorSymbol, OperadElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const INTERVAL_FIXTURE: &str = r#"{"degrees": {"0": ["p0","p1"], "1": ["q"]}, "d": {"1": {"q": {"p1": 1, "p0": -1}}}}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_invariance-lab"))
}

#[test]
fn interval_fixture_parses_to_the_unit_interval() {
    let v: serde_json::Value = serde_json::from_str(INTERVAL_FIXTURE).unwrap();
    let c = parse_complex(&v).unwrap();
    let i = unit_interval();
    assert_eq!(c.labels(0), i.labels(0));
    assert_eq!(c.labels(1), i.labels(1));
    assert_eq!(c.differential(1), i.differential(1));
}

#[test]
fn complex_serialization_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let c = random_complex(&mut rng, 4, 4);
        let v = complex_to_value(&c).unwrap();
        let back = parse_complex(&v).unwrap();
        assert_eq!(*c, back);
        // canonical bytes are stable under a second round trip
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            serde_json::to_string(&complex_to_value(&back).unwrap()).unwrap()
        );
    }
}

#[test]
fn operad_serialization_round_trips() {
    let op = s0(3).unwrap();
    let v = invariance_lab::operad_to_value(&op).unwrap();
    let back = invariance_lab::parse_operad(&v).unwrap();
    assert_eq!(back.max_arity, 3);
    assert!(check_operad_axioms(&back).unwrap().is_ok());
    for m in 1..=3usize {
        for n in 1..=3usize {
            if m + n - 1 > 3 {
                continue;
            }
            for x in 0..m {
                assert!(back
                    .composition(m, x, n)
                    .unwrap()
                    .eq_blocks(op.composition(m, x, n).unwrap()));
            }
        }
    }
}

#[test]
fn random_complexes_are_seed_deterministic() {
    let draw = |seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(&mut rng, 4, 4);
        serde_json::to_string(&complex_to_value(&c).unwrap()).unwrap()
    };
    assert_eq!(draw(11), draw(11));
    assert_ne!(draw(11), draw(12));
}

#[test]
fn random_chain_maps_are_chain_maps() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let c = random_complex(&mut rng, 3, 3);
        let d = random_complex(&mut rng, 3, 3);
        let f = random_chain_map(&mut rng, &c, &d).unwrap();
        assert!(f.is_chain_map());
    }
}

#[test]
fn cone_projections_are_homology_equivalences() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..15 {
        let d = random_complex(&mut rng, 3, 3);
        let a = random_complex(&mut rng, 2, 2);
        let (source, f) = make_homology_equivalence(&d, &a).unwrap();
        assert!(is_homology_equivalence(&f).unwrap());
        for deg in source.degrees() {
            assert_eq!(source.homology(deg), d.homology(deg));
        }
    }
    // the degenerate acyclic part leaves the projection an isomorphism
    let d = random_complex(&mut rng, 2, 2);
    let zero = ChainComplex::zero().shared();
    let (source, f) = make_homology_equivalence(&d, &zero).unwrap();
    assert_eq!(source.total_rank(), d.total_rank());
    assert!(is_homology_equivalence(&f).unwrap());
}

#[test]
fn filtrations_are_genuine_subcomplex_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let c = random_complex(&mut rng, 4, 3);
        let (stages, maps) = random_filtration(&mut rng, &c, 3).unwrap();
        assert_eq!(stages.len(), 3);
        assert_eq!(*stages[2], *c);
        for (i, f) in maps.iter().enumerate() {
            assert!(f.is_chain_map());
            for d in stages[i].degrees() {
                assert_eq!(exact_linear::kernel_basis(&f.block(d)).cols(), 0);
            }
        }
    }
}

#[test]
fn identity_map_is_trivially_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let c = random_complex(&mut rng, 2, 2);
    let f = ChainMap::identity(c);
    let v = Arc::new(s0(2).unwrap());
    let report = invariance_experiment(&v, &f, 2, None).unwrap();
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn seeded_invariance_experiment_passes_over_the_group_ring_operad() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let d = random_complex(&mut rng, 2, 2);
    let a = random_complex(&mut rng, 1, 2);
    let (_, f) = make_homology_equivalence(&d, &a).unwrap();
    let v = Arc::new(s0(2).unwrap());
    let report = invariance_experiment(&v, &f, 2, None).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    assert_eq!(report.checks["projectivity hypothesis"], "pass");
}

#[test]
fn counterexample_reports_two_torsion_at_arity_two() {
    let report = com_counterexample().unwrap();
    assert!(!report.passed());
    assert_eq!(report.checks["cogenerator map is a homology equivalence"], "pass");
    assert_eq!(report.checks["projectivity hypothesis"], "fail");
    assert_eq!(report.checks["arity 2 factor homology equivalence"], "fail");
    let row = &report.tables["factor arity 2"]["0"];
    assert_eq!(row.source.free_rank, 0);
    assert_eq!(row.source.torsion, vec![2]);
    assert_eq!(row.target.free_rank, 0);
    assert!(row.target.torsion.is_empty());
    assert!(report.witnesses["projectivity hypothesis"].contains("no equivariant splitting"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = com_counterexample().unwrap();
    let b = com_counterexample().unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
}

#[test]
fn one_stage_colimit_is_a_tautology() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = random_complex(&mut rng, 3, 2);
    let v = Arc::new(s0(2).unwrap());
    let report = colimit_commutation_check(&[c], &[], &v, 2).unwrap();
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn colimit_rejects_non_subcomplex_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_complex(&mut rng, 2, 1);
    let d = random_complex(&mut rng, 2, 1);
    let v = Arc::new(s0(2).unwrap());
    // a zero map is a chain map but never an inclusion of a nonzero stage
    let f = ChainMap::zero(c.clone(), d.clone(), 0);
    assert!(colimit_commutation_check(&[c, d], &[f], &v, 2).is_err());
}

#[test]
fn splitting_with_zero_ideal_keeps_everything() {
    let h = free_operad(&[GeneratorSymbol::new("m", 2)], 2).unwrap();
    let c = ChainComplex::build(&[(0, &["x"])], &[]).unwrap().shared();
    let report = splitting_check(&h, &[], &c).unwrap();
    assert!(report.passed(), "{}", report.to_text());
}

#[test]
fn splitting_with_the_principal_ideal_cuts_down_to_the_cogenerators() {
    let h = free_operad(&[GeneratorSymbol::new("m", 2)], 2).unwrap();
    let rank2 = h.operad.component(2).unwrap().complex.rank(0);
    let g = OperadElement::basis(2, 0, rank2, 0);
    let c = ChainComplex::build(&[(0, &["x", "y"])], &[]).unwrap().shared();
    let report = splitting_check(&h, &[g], &c).unwrap();
    assert!(report.passed(), "{}", report.to_text());
    // the kernel over the full arity-2 ideal is the cogenerator summand
    let row = &report.tables["kernel vs quotient cofree"]["0"];
    assert_eq!(row.source.free_rank, 2);
}

#[test]
fn cli_snf_prints_the_fixture_factors() {
    let out = bin().arg("snf").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("invariant factors: 2 4"), "{}", text);
}

#[test]
fn cli_coend_interval_reports_six_paths_at_arity_three() {
    let out = bin().args(["coend-interval", "--n", "3"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("arity 3 degree 0 rank: 6"), "{}", text);
    assert!(text.contains("arity 3 orbit free transitive: true"), "{}", text);
}

#[test]
fn cli_counterexample_is_deterministic() {
    let run = || {
        let out = bin()
            .args(["counterexample-com", "--format", "structured"])
            .output()
            .unwrap();
        assert!(out.status.success());
        String::from_utf8(out.stdout).unwrap()
    };
    let first = run();
    assert!(first.contains("\"verdict\": \"fail\""), "{}", first);
    assert_eq!(first, run());
}

#[test]
fn cli_usage_errors_exit_nonzero() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert!(!out.status.success());
    let out = bin().args(["coend-interval"]).output().unwrap();
    assert!(!out.status.success());
}

#[test]
fn cli_invariance_runs_from_a_bare_seed() {
    let out = bin().args(["invariance", "--seed", "5"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: pass"), "{}", text);
}
