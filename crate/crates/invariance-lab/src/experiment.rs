//! The experiments: homology invariance of cofree carriers and their
//! equivariant hom factors under a homology equivalence of cogenerators, the
//! commutative-operad counterexample, colimit commutation for filtrations,
//! and the kernel/quotient splitting identity.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use chain_core::cone::is_homology_equivalence;
use chain_core::sub_quotient::{direct_sum, quotient_by_lattice};
use chain_core::tensor::{map_tensor_into, TensorComplex};
use chain_core::{ChainComplex, ChainMap};
use coalgebra_core::{ideal_kernel, induced_map, truncated_cofree, CofreeVariant};
use exact_linear::{smith_normal_form, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use operad_core::{
    com, free_operad, ideal_and_quotient, s0, FreeOperad, GeneratorSymbol, OperadElement,
    TruncatedOperad,
};
use rand::Rng;
use serde::{Deserialize, Serialize};
use setf_sym::{equivariant_hom, tensor_power_symmetric, EquivariantHom, GroupRingModule, Perm};

use crate::random::random_complex;
use crate::report::{HomologyComparison, HomologySummary, Report};
use crate::Error;

/// Which operad an experiment runs over.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperadSpec {
    S0,
    Com,
    Free { generators: Vec<(String, usize)> },
    File { path: String },
}

impl Default for OperadSpec {
    fn default() -> Self {
        OperadSpec::S0
    }
}

/// Where a cogenerating complex comes from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ComplexSpec {
    Random { max_rank: usize, max_degrees: usize },
    Cxf { value: serde_json::Value },
    File { path: String },
    Zero,
}

impl Default for ComplexSpec {
    fn default() -> Self {
        ComplexSpec::Random {
            max_rank: 2,
            max_degrees: 2,
        }
    }
}

fn default_arity() -> usize {
    2
}

fn default_steps() -> usize {
    3
}

/// Everything a seeded experiment needs; the seed fixes all randomness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub operad: OperadSpec,
    #[serde(default = "default_arity")]
    pub arity: usize,
    #[serde(default)]
    pub source: ComplexSpec,
    #[serde(default)]
    pub acyclic: ComplexSpec,
    #[serde(default)]
    pub window: Option<(i64, i64)>,
    #[serde(default)]
    pub seed: u64,
    /// number of filtration stages for colimit checks
    #[serde(default = "default_steps")]
    pub steps: usize,
    /// ideal generators for splitting checks, as degree-0 basis picks
    #[serde(default)]
    pub ideal: Vec<(usize, usize)>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            operad: OperadSpec::default(),
            arity: default_arity(),
            source: ComplexSpec::default(),
            acyclic: ComplexSpec::Random {
                max_rank: 1,
                max_degrees: 2,
            },
            window: None,
            seed: 0,
            steps: default_steps(),
            ideal: Vec::new(),
        }
    }
}

/// Build the operad named by a spec at the given truncation; free specs also
/// return the tree presentation.
pub fn resolve_operad(
    spec: &OperadSpec,
    n: usize,
) -> Result<(Arc<TruncatedOperad>, Option<FreeOperad>), Error> {
    match spec {
        OperadSpec::S0 => Ok((Arc::new(s0(n)?), None)),
        OperadSpec::Com => Ok((Arc::new(com(n)?), None)),
        OperadSpec::Free { generators } => {
            let symbols: Vec<GeneratorSymbol> = generators
                .iter()
                .map(|(name, arity)| GeneratorSymbol::new(name, *arity))
                .collect();
            let f = free_operad(&symbols, n)?;
            Ok((Arc::new(f.operad.clone()), Some(f)))
        }
        OperadSpec::File { path } => {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            let op = crate::opfile::parse_operad(&value)?;
            if op.max_arity != n {
                return Err(Error::Input(format!(
                    "operad file truncates at {}, experiment wants {}",
                    op.max_arity, n
                )));
            }
            Ok((Arc::new(op), None))
        }
    }
}

/// Materialize a complex spec, drawing from the RNG when it is random.
pub fn resolve_complex<R: Rng>(
    spec: &ComplexSpec,
    rng: &mut R,
) -> Result<Arc<ChainComplex>, Error> {
    match spec {
        ComplexSpec::Random {
            max_rank,
            max_degrees,
        } => Ok(random_complex(rng, *max_rank, *max_degrees)),
        ComplexSpec::Cxf { value } => Ok(Arc::new(crate::cxf::parse_complex(value)?)),
        ComplexSpec::File { path } => {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            Ok(Arc::new(crate::cxf::parse_complex(&value)?))
        }
        ComplexSpec::Zero => Ok(ChainComplex::zero().shared()),
    }
}

/// Search the bounded coefficient box for an equivariant splitting of the
/// augmentation onto the trivial module; `None` means none exists in the
/// box. For the trivial module any splitting satisfies `n! * c = 1`, so the
/// box is conclusive.
pub fn equivariant_splitting_search(n: usize, bound: i64) -> Option<Vec<BigInt>> {
    let perms = Perm::all(n);
    let order = perms.len();
    // equivariance forces a constant vector; scan the constant's box
    for c in -bound..=bound {
        let total = BigInt::from(c) * BigInt::from(order as i64);
        if total.is_one() {
            return Some(vec![BigInt::from(c); order]);
        }
    }
    None
}

enum Hypothesis {
    Free,
    Violated { arity: usize, witness: String },
}

/// Free components are accepted by building the cofree carrier over a point;
/// the trivial rank-one component gets the stronger certificate that no
/// equivariant splitting of the augmentation exists.
fn hypothesis_status(v: &Arc<TruncatedOperad>) -> Result<Hypothesis, Error> {
    let probe = ChainComplex::build(&[(0, &["pt"])], &[])
        .expect("point complex")
        .shared();
    match truncated_cofree(v, &probe, CofreeVariant::General) {
        Ok(_) => Ok(Hypothesis::Free),
        Err(coalgebra_core::Error::NotFree(arity, msg)) => {
            let comp = v.component(arity)?;
            let trivial_rank_one = comp.complex.total_rank() == 1
                && comp.complex.rank(0) == 1
                && comp.generators().iter().all(|g| {
                    g.block(0).get(0, 0).is_one()
                });
            let witness = if trivial_rank_one && equivariant_splitting_search(arity, 3).is_none() {
                format!(
                    "arity-{} component is the trivial rank-one module; no equivariant \
                     splitting of the augmentation exists in the coefficient box [-3,3]",
                    arity
                )
            } else {
                format!("arity-{} component is not free: {}", arity, msg)
            };
            Ok(Hypothesis::Violated { arity, witness })
        }
        Err(e) => Err(e.into()),
    }
}

/// The map `Hom(V(n), f^n)` between equivariant hom factors, in the
/// subcomplex bases.
fn induced_factor_map(
    hs: &EquivariantHom,
    ht: &EquivariantHom,
    source_power: &TensorComplex,
    target_power: &TensorComplex,
    f: &ChainMap,
    n: usize,
) -> Result<ChainMap, Error> {
    let fpow = map_tensor_into(source_power, target_power, &vec![f; n])?;
    let mut g = ChainMap::zero(hs.complex.clone(), ht.complex.clone(), 0);
    for k in hs.complex.degrees() {
        let mut m = IntegerMatrix::zeros(ht.complex.rank(k), hs.complex.rank(k));
        for i in 0..hs.complex.rank(k) {
            let moved = fpow.compose(&hs.basis_map(k, i));
            let coords = ht.map_to_element(&moved).ok_or_else(|| {
                Error::Input(format!("arity-{} factor image is not equivariant", n))
            })?;
            for (r, e) in coords.iter().enumerate() {
                if !e.is_zero() {
                    m.set(r, i, e.clone());
                }
            }
        }
        g.set_block(k, m)?;
    }
    Ok(g)
}

fn window_degrees(
    a: &Arc<ChainComplex>,
    b: &Arc<ChainComplex>,
    window: Option<(i64, i64)>,
) -> Vec<i64> {
    let mut degs: BTreeSet<i64> = a.degrees().into_iter().chain(b.degrees()).collect();
    if let Some((lo, hi)) = window {
        degs.retain(|d| (lo..=hi).contains(d));
    }
    degs.into_iter().collect()
}

fn compare_homology(
    report: &mut Report,
    table: &str,
    a: &Arc<ChainComplex>,
    b: &Arc<ChainComplex>,
    window: Option<(i64, i64)>,
) -> Result<bool, Error> {
    let mut agree = true;
    for d in window_degrees(a, b, window) {
        let row = HomologyComparison {
            source: HomologySummary::from_group(&a.homology(d))?,
            target: HomologySummary::from_group(&b.homology(d))?,
        };
        agree &= row.agree();
        report.insert_row(table, d, row);
    }
    Ok(agree)
}

/// Run the invariance experiment: per arity, compare the homology of the
/// equivariant hom factors over source and target powers under the induced
/// map, then compare the truncated cofree carriers when the components are
/// free. The verdict is "pass" exactly when every comparison is an
/// isomorphism; a violated hypothesis is reported but does not stop the run.
pub fn invariance_experiment(
    v: &Arc<TruncatedOperad>,
    f: &ChainMap,
    nmax: usize,
    window: Option<(i64, i64)>,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut report = Report::new("invariance");
    if f.degree != 0 {
        return Err(Error::Input("the cogenerator map must have degree 0".into()));
    }
    if nmax > v.max_arity {
        return Err(Error::Input(format!(
            "arity bound {} exceeds the operad truncation {}",
            nmax, v.max_arity
        )));
    }
    let source = f.source.clone();
    let target = f.target.clone();

    report.set_check(
        "cogenerator map is a homology equivalence",
        is_homology_equivalence(f)?,
        false,
        None,
    );

    let hypothesis = hypothesis_status(v)?;
    let components_free = match &hypothesis {
        Hypothesis::Free => {
            report.set_check("projectivity hypothesis", true, true, None);
            true
        }
        Hypothesis::Violated { arity, witness } => {
            report.set_check(
                "projectivity hypothesis",
                false,
                true,
                Some(format!("arity {}: {}", arity, witness)),
            );
            false
        }
    };

    for n in 1..=nmax {
        let module = GroupRingModule::new(v.component(n)?.clone(), BTreeMap::new(), None)?;
        let (sp, ss) = tensor_power_symmetric(&source, n);
        let (tp, ts) = tensor_power_symmetric(&target, n);
        let hs = equivariant_hom(&module, &ss)?;
        let ht = equivariant_hom(&module, &ts)?;
        let induced = induced_factor_map(&hs, &ht, &sp, &tp, f, n)?;
        let tables_agree = compare_homology(
            &mut report,
            &format!("factor arity {}", n),
            &hs.complex,
            &ht.complex,
            window,
        )?;
        let bijective = is_homology_equivalence(&induced)?;
        report.set_check(
            &format!("arity {} factor homology equivalence", n),
            tables_agree && bijective,
            false,
            (!tables_agree || !bijective).then(|| {
                format!(
                    "homology tables agree: {}, induced factor map has acyclic cone: {}",
                    tables_agree, bijective
                )
            }),
        );
    }

    if components_free {
        let ws = truncated_cofree(v, &source, CofreeVariant::General)?;
        let wt = truncated_cofree(v, &target, CofreeVariant::General)?;
        let g = induced_map(&ws, &wt, f)?;
        let tables_agree =
            compare_homology(&mut report, "carrier", &ws.carrier, &wt.carrier, window)?;
        let bijective = is_homology_equivalence(&g.map)?;
        report.set_check(
            "cofree carrier homology equivalence",
            tables_agree && bijective,
            false,
            (!tables_agree || !bijective).then(|| {
                format!(
                    "homology tables agree: {}, induced carrier map has acyclic cone: {}",
                    tables_agree, bijective
                )
            }),
        );
    }

    report.elapsed = Some(start.elapsed());
    Ok(report)
}

/// The canned non-projectivity counterexample: over the commutative operad
/// the contraction of `Z -> Z` (identity boundary) onto the zero complex is
/// a homology equivalence of cogenerators, yet the arity-2 invariants
/// complex of the source has 2-torsion in degree 0 while the target side
/// vanishes identically.
pub fn com_counterexample() -> Result<Report, Error> {
    let v = Arc::new(com(2)?);
    let c = ChainComplex::build(
        &[(0, &["z0"]), (1, &["z1"])],
        &[(1, IntegerMatrix::from_rows(&[vec![1]]))],
    )?
    .shared();
    let zero = ChainComplex::zero().shared();
    let f = ChainMap::zero(c, zero, 0);
    let mut report = invariance_experiment(&v, &f, 2, None)?;
    report.name = "counterexample-com".into();
    Ok(report)
}

/// Check that the colimit of the truncated cofree coalgebras over a
/// filtration has the same carrier as the truncated cofree over the union:
/// form the coequalizer of the stagewise carriers, then verify the canonical
/// map from the last stage is a degreewise unimodular chain isomorphism.
pub fn colimit_commutation_check(
    stages: &[Arc<ChainComplex>],
    maps: &[ChainMap],
    v: &Arc<TruncatedOperad>,
    _n: usize,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut report = Report::new("colimit");
    if stages.is_empty() || maps.len() + 1 != stages.len() {
        return Err(Error::Input(
            "a filtration is stages C1..Cm with one map per consecutive pair".into(),
        ));
    }
    for (i, f) in maps.iter().enumerate() {
        if *f.source != *stages[i] || *f.target != *stages[i + 1] || f.degree != 0 {
            return Err(Error::Input(format!("map {} does not connect its stages", i)));
        }
        if !f.is_chain_map() {
            return Err(Error::Input(format!("stage map {} is not a chain map", i)));
        }
        for d in stages[i].degrees() {
            if exact_linear::kernel_basis(&f.block(d)).cols() > 0 {
                return Err(Error::Input(format!(
                    "stage map {} is not injective in degree {}",
                    i, d
                )));
            }
        }
    }

    let cofrees: Vec<_> = stages
        .iter()
        .map(|c| truncated_cofree(v, c, CofreeVariant::General))
        .collect::<Result<Vec<_>, _>>()?;
    let carriers: Vec<Arc<ChainComplex>> = cofrees.iter().map(|w| w.carrier.clone()).collect();
    let induced: Vec<ChainMap> = (0..maps.len())
        .map(|i| Ok(induced_map(&cofrees[i], &cofrees[i + 1], &maps[i])?.map))
        .collect::<Result<Vec<_>, Error>>()?;

    let (sum, inclusions, _) = direct_sum(&carriers)?;
    let mut lattices: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for d in sum.degrees() {
        let mut rel = IntegerMatrix::zeros(sum.rank(d), 0);
        for i in 0..induced.len() {
            if carriers[i].rank(d) == 0 {
                continue;
            }
            let pushed = inclusions[i + 1].block(d).mul(&induced[i].block(d));
            let mut cols = inclusions[i].block(d);
            for r in 0..cols.rows() {
                for c in 0..cols.cols() {
                    let e = cols.get(r, c) - pushed.get(r, c);
                    cols.set(r, c, e);
                }
            }
            rel = rel.hstack(&cols);
        }
        if rel.cols() > 0 {
            lattices.insert(d, rel);
        }
    }
    let (colim, projection, _) = quotient_by_lattice(&sum, &lattices)?;
    let canonical = projection.compose(inclusions.last().expect("at least one stage"));
    let last = carriers.last().expect("at least one stage");

    let mut ranks_equal = true;
    let mut unimodular = true;
    for d in window_degrees(&colim, last, None) {
        if colim.rank(d) != last.rank(d) {
            ranks_equal = false;
            continue;
        }
        let s = smith_normal_form(&canonical.block(d));
        if s.rank() != colim.rank(d) || s.invariant_factors.iter().any(|f| !f.is_one()) {
            unimodular = false;
        }
    }
    report.set_check("per-degree rank equality", ranks_equal, false, None);
    report.set_check(
        "canonical map is a chain-level isomorphism",
        unimodular && canonical.is_chain_map(),
        false,
        None,
    );
    compare_homology(&mut report, "carrier", &colim, last, None)?;
    report.elapsed = Some(start.elapsed());
    Ok(report)
}

/// Check the splitting identity for an ideal in a free operad: the kernel of
/// evaluation against the ideal matches the cofree carrier over the quotient
/// per degree in rank and torsion, it is closed under the structure maps,
/// and its rank plus the evaluation rank recovers the whole carrier.
pub fn splitting_check(
    h: &FreeOperad,
    gens: &[OperadElement],
    c: &Arc<ChainComplex>,
) -> Result<Report, Error> {
    let start = Instant::now();
    let mut report = Report::new("splitting");
    let op = Arc::new(h.operad.clone());
    let iq = ideal_and_quotient(&h.operad, gens)?;
    let w = truncated_cofree(&op, c, CofreeVariant::General)?;
    let k = match ideal_kernel(&w, iq) {
        Ok(k) => k,
        Err(e) => {
            report.set_check(
                "kernel closed under structure maps",
                false,
                false,
                Some(e.to_string()),
            );
            report.elapsed = Some(start.elapsed());
            return Ok(report);
        }
    };
    report.set_check("kernel closed under structure maps", true, false, None);

    let wq = truncated_cofree(&k.quotient, c, CofreeVariant::General)?;
    let mut ranks_match = true;
    for d in window_degrees(&k.complex, &wq.carrier, None) {
        ranks_match &= k.complex.rank(d) == wq.carrier.rank(d);
    }
    let homology_match = compare_homology(
        &mut report,
        "kernel vs quotient cofree",
        &k.complex,
        &wq.carrier,
        None,
    )?;
    report.set_check(
        "kernel matches the quotient cofree",
        ranks_match && homology_match,
        false,
        None,
    );

    let mut split = true;
    for d in w.carrier.degrees() {
        let eval = k.evaluation_ranks.get(&d).copied().unwrap_or(0);
        split &= w.carrier.rank(d) == k.complex.rank(d) + eval;
    }
    report.set_check("splitting rank identity", split, false, None);
    report.elapsed = Some(start.elapsed());
    Ok(report)
}
