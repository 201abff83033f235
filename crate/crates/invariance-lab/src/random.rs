//! Seeded generators for the experiment harness. Everything is driven by a
//! caller-supplied RNG so one seed fixes every byte of a run.

use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::cone::mapping_cone;
use chain_core::hom::hom_complex;
use chain_core::sub_quotient::{direct_sum, subcomplex_from_lattices};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::{kernel_basis, solve, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::Error;

/// A random bounded complex: ranks up to `max_rank` over up to `max_degrees`
/// consecutive degrees, entries in `[-3, 3]`. The boundary factors through a
/// random chain of coordinate projections: each degree picks a "cycle" mask,
/// rows of the differential land inside the mask one degree down while
/// masked columns are killed, so consecutive boundaries compose to zero.
pub fn random_complex<R: Rng>(rng: &mut R, max_rank: usize, max_degrees: usize) -> Arc<ChainComplex> {
    let count = rng.gen_range(1..=max_degrees.max(1));
    let base: i64 = rng.gen_range(0..=1);
    let ranks: Vec<usize> = (0..count).map(|_| rng.gen_range(1..=max_rank.max(1))).collect();
    let masks: Vec<Vec<bool>> = ranks
        .iter()
        .map(|&r| (0..r).map(|_| rng.gen_bool(0.5)).collect())
        .collect();

    let labels: Vec<Vec<String>> = ranks
        .iter()
        .enumerate()
        .map(|(k, &r)| (0..r).map(|i| format!("g{}_{}", base + k as i64, i)).collect())
        .collect();
    let label_refs: Vec<Vec<&str>> = labels
        .iter()
        .map(|ns| ns.iter().map(String::as_str).collect())
        .collect();
    let degrees: Vec<(i64, &[&str])> = label_refs
        .iter()
        .enumerate()
        .map(|(k, ns)| (base + k as i64, ns.as_slice()))
        .collect();

    let mut diffs = Vec::new();
    for k in 1..count {
        let mut m = IntegerMatrix::zeros(ranks[k - 1], ranks[k]);
        for i in 0..ranks[k - 1] {
            for j in 0..ranks[k] {
                if masks[k - 1][i] && !masks[k][j] {
                    m.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)));
                }
            }
        }
        if !m.is_zero() {
            diffs.push((base + k as i64, m));
        }
    }
    ChainComplex::build(&degrees, &diffs)
        .expect("masked boundaries square to zero")
        .shared()
}

/// A random degree-0 chain map: an integer combination of a basis of the
/// cycle space of the hom complex in degree 0.
pub fn random_chain_map<R: Rng>(
    rng: &mut R,
    source: &Arc<ChainComplex>,
    target: &Arc<ChainComplex>,
) -> Result<ChainMap, Error> {
    let hom = hom_complex(source.clone(), target.clone());
    let n = hom.complex.rank(0);
    if n == 0 {
        return Ok(ChainMap::zero(source.clone(), target.clone(), 0));
    }
    let cycles = kernel_basis(&hom.complex.differential(0));
    let mut coords = vec![BigInt::zero(); n];
    for j in 0..cycles.cols() {
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        if c.is_zero() {
            continue;
        }
        for (i, coord) in coords.iter_mut().enumerate() {
            *coord += cycles.get(i, j) * &c;
        }
    }
    Ok(hom.element_to_map(0, &coords)?)
}

/// The canonical homology equivalence off an acyclic cone: the projection
/// `D (+) cone(id_A) -> D`. The cone of an identity is contractible, so the
/// projection is always a homology equivalence between free complexes.
pub fn make_homology_equivalence(
    d: &Arc<ChainComplex>,
    a: &Arc<ChainComplex>,
) -> Result<(Arc<ChainComplex>, ChainMap), Error> {
    let cone = mapping_cone(&ChainMap::identity(a.clone()))?;
    let (sum, _inclusions, projections) = direct_sum(&[d.clone(), cone])?;
    Ok((sum, projections[0].clone()))
}

/// A random `steps`-stage filtration of `c` by coordinate subcomplexes, the
/// last stage being `c` itself. Stages are assigned per basis element and
/// then closed downward under the boundary so every stage is a genuine
/// subcomplex. Returns the stages and the inclusion of each into the next.
pub fn random_filtration<R: Rng>(
    rng: &mut R,
    c: &Arc<ChainComplex>,
    steps: usize,
) -> Result<(Vec<Arc<ChainComplex>>, Vec<ChainMap>), Error> {
    if steps == 0 {
        return Err(Error::Input("a filtration needs at least one stage".into()));
    }
    // stage number per (degree, index); boundary targets inherit the minimum
    let mut stage: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for d in c.degrees() {
        for i in 0..c.rank(d) {
            stage.insert((d, i), rng.gen_range(1..=steps));
        }
    }
    let mut degrees = c.degrees();
    degrees.sort_unstable();
    for &d in degrees.iter().rev() {
        let m = c.differential(d);
        for j in 0..c.rank(d) {
            let s = stage[&(d, j)];
            for i in 0..c.rank(d - 1) {
                if !m.get(i, j).is_zero() {
                    let t = stage.get_mut(&(d - 1, i)).expect("basis element");
                    *t = (*t).min(s);
                }
            }
        }
    }

    let coordinate_lattice = |d: i64, upto: usize| -> IntegerMatrix {
        let picked: Vec<usize> = (0..c.rank(d)).filter(|&i| stage[&(d, i)] <= upto).collect();
        let mut l = IntegerMatrix::zeros(c.rank(d), picked.len());
        for (col, &i) in picked.iter().enumerate() {
            l.set(i, col, BigInt::one());
        }
        l
    };

    let mut stages: Vec<Arc<ChainComplex>> = Vec::new();
    let mut lattices: Vec<BTreeMap<i64, IntegerMatrix>> = Vec::new();
    for k in 1..steps {
        let lat: BTreeMap<i64, IntegerMatrix> = c
            .degrees()
            .into_iter()
            .map(|d| (d, coordinate_lattice(d, k)))
            .collect();
        let (sub, _) = subcomplex_from_lattices(c, &lat)?;
        stages.push(sub);
        lattices.push(lat);
    }
    stages.push(c.clone());
    lattices.push(
        c.degrees()
            .into_iter()
            .map(|d| (d, IntegerMatrix::identity(c.rank(d))))
            .collect(),
    );

    let mut maps = Vec::new();
    for k in 0..steps - 1 {
        let mut f = ChainMap::zero(stages[k].clone(), stages[k + 1].clone(), 0);
        for d in stages[k].degrees() {
            let this = &lattices[k][&d];
            let next = &lattices[k + 1][&d];
            let x = solve(next, this).ok_or_else(|| {
                Error::Input(format!("stage {} escapes stage {} in degree {}", k, k + 1, d))
            })?;
            f.set_block(d, x)?;
        }
        maps.push(f);
    }
    Ok((stages, maps))
}
