use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::hom::{hom_complex, HomComplex};
use chain_core::interval::unit_interval;
use chain_core::sub_quotient::subcomplex_from_lattices;
use chain_core::tensor::{
    map_tensor_into, splice_map, tensor_many, tensor_power, TensorComplex, TensorTuple,
};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::{
    column_hermite_form, kernel_basis, lattices_equal, smith_normal_form, solve, IntegerMatrix,
    SmithDecomposition,
};
use num_bigint::BigInt;
use num_traits::Zero;
use setf_sym::{tensor_power_symmetric, Perm};

use crate::operad::composition_table;
use crate::{Error, OperadElement, OperadMorphism, TruncatedOperad};

/// Coendomorphism operad of a bounded complex `C`: `component(n)` is
/// `Hom(C, C^n)` (or the subcomplex of maps carrying each preserved
/// subcomplex `D` into `D^n`), the action post-composes with the signed
/// factor permutation, and `o_x` is evaluation-by-insertion.
pub struct CoendOperad {
    pub operad: TruncatedOperad,
    pub complex: Arc<ChainComplex>,
    pub homs: BTreeMap<usize, HomComplex>,
    pub powers: BTreeMap<usize, TensorComplex>,
    /// inclusion of each component carrier into the full hom complex
    pub inclusions: BTreeMap<usize, ChainMap>,
    restricted: bool,
    solvers: BTreeMap<(usize, i64), SmithDecomposition>,
}

impl CoendOperad {
    /// The honest graded map `C -> C^n` behind an element.
    pub fn element_to_map(&self, e: &OperadElement) -> Result<ChainMap, Error> {
        let incl = &self.inclusions[&e.arity];
        let coords = incl.block(e.degree).apply(&e.coeffs);
        Ok(self.homs[&e.arity].element_to_map(e.degree, &coords)?)
    }

    /// Coordinates of a graded map `C -> C^n` in the component basis, when
    /// it satisfies the preservation constraints.
    pub fn map_to_element(&self, n: usize, f: &ChainMap) -> Result<OperadElement, Error> {
        let coords = self.homs[&n].map_to_element(f)?;
        let coeffs = self.restrict(n, f.degree, &coords)?;
        Ok(OperadElement {
            arity: n,
            degree: f.degree,
            coeffs,
        })
    }

    fn restrict(&self, n: usize, k: i64, coords: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        if !self.restricted {
            return Ok(coords.to_vec());
        }
        if coords.iter().all(|c| c.is_zero()) {
            let rank = self.operad.component(n)?.complex.rank(k);
            return Ok(vec![BigInt::zero(); rank]);
        }
        let snf = self
            .solvers
            .get(&(n, k))
            .ok_or_else(|| Error::Shape(format!("no carrier basis at arity {} degree {}", n, k)))?;
        let b = IntegerMatrix::from_columns(coords.len(), &[coords.to_vec()]);
        let x = snf.solve(&b).ok_or_else(|| {
            Error::NotSubcomplex(format!(
                "map at arity {} degree {} violates the preservation constraints",
                n, k
            ))
        })?;
        Ok(x.column(0))
    }
}

/// Lift a degree-0 endomorphism of the target to post-composition on the
/// hom complex.
fn postcompose_on_hom(hom: &HomComplex, g: &ChainMap) -> Result<ChainMap, Error> {
    let mut blocks = BTreeMap::new();
    for k in hom.complex.degrees() {
        let pairs = hom.pairs(k);
        let n = pairs.len();
        let mut m = IntegerMatrix::zeros(n, n);
        for (col, (d, i, j)) in pairs.iter().enumerate() {
            let gb = g.block(d + k);
            for j2 in 0..gb.rows() {
                let e = gb.get(j2, *j);
                if e.is_zero() {
                    continue;
                }
                let row = hom
                    .pair_index(k, (*d, *i, j2))
                    .ok_or_else(|| Error::Shape("hom pair missing".into()))?;
                m.set(row, col, e.clone());
            }
        }
        blocks.insert(k, m);
    }
    Ok(ChainMap::new(hom.complex.clone(), hom.complex.clone(), 0, blocks)?)
}

/// Coendomorphism operad of `C`, optionally relative to a family of
/// subcomplexes given as per-degree column lattices: elements must carry
/// each `D` into `D^n`.
pub fn coend_operad(
    c: &Arc<ChainComplex>,
    preserved: &[BTreeMap<i64, IntegerMatrix>],
    max_arity: usize,
) -> Result<CoendOperad, Error> {
    build_coend(c, preserved, max_arity, false)
}

/// Like [`coend_operad`] with `degree_zero` set: components keep only the
/// degree-0 chain maps (cycles of the hom complex), so each carrier is
/// concentrated in degree 0 with zero differential.
fn build_coend(
    c: &Arc<ChainComplex>,
    preserved: &[BTreeMap<i64, IntegerMatrix>],
    max_arity: usize,
    degree_zero: bool,
) -> Result<CoendOperad, Error> {
    if max_arity == 0 {
        return Err(Error::Shape("arity bound must be at least 1".into()));
    }
    // validate the preserved families and build their tensor-power lattices
    let mut sub_data = Vec::new();
    for lattices in preserved {
        for (d, l) in lattices {
            if l.rows() != c.rank(*d) {
                return Err(Error::NotSubcomplex(format!(
                    "lattice at degree {} has {} rows, complex has rank {}",
                    d,
                    l.rows(),
                    c.rank(*d)
                )));
            }
            let img = c.differential(*d).mul(l);
            if !img.is_zero() {
                let below = lattices
                    .get(&(d - 1))
                    .cloned()
                    .unwrap_or_else(|| IntegerMatrix::zeros(c.rank(d - 1), 0));
                if solve(&below, &img).is_none() {
                    return Err(Error::NotSubcomplex(format!(
                        "family not closed under the boundary at degree {}",
                        d
                    )));
                }
            }
        }
        let (sub, incl) = subcomplex_from_lattices(c, lattices)?;
        sub_data.push((sub, incl));
    }
    let restricted = !preserved.is_empty();

    let mut powers = BTreeMap::new();
    let mut homs = BTreeMap::new();
    for n in 1..=max_arity {
        let p = tensor_power(c, n);
        homs.insert(n, hom_complex(c.clone(), p.complex.clone()));
        powers.insert(n, p);
    }

    let mut components = BTreeMap::new();
    let mut inclusions = BTreeMap::new();
    let mut solvers: BTreeMap<(usize, i64), SmithDecomposition> = BTreeMap::new();
    for n in 1..=max_arity {
        let hom = &homs[&n];
        let power = &powers[&n];
        // the full action: post-compose with the signed factor permutation
        let (_, sym_full) = tensor_power_symmetric(c, n);
        let mut full_gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            full_gens.push(postcompose_on_hom(hom, sym_full.generator(i))?);
        }

        if !restricted {
            let carrier =
                setf_sym::SymmetricComplex::new(hom.complex.clone(), n, full_gens)?;
            inclusions.insert(n, ChainMap::identity(hom.complex.clone()));
            components.insert(n, carrier);
            continue;
        }

        // cut out the maps with f(D) inside D^n, one hom degree at a time
        let mut lattices: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
        for k in hom.complex.degrees() {
            let nk = hom.complex.rank(k);
            let mut a_rows: Vec<IntegerMatrix> = Vec::new();
            let mut k_blocks: Vec<IntegerMatrix> = Vec::new();
            for (sub, incl) in &sub_data {
                let sub_pow = tensor_power(sub, n);
                let incl_pow = map_tensor_into(&sub_pow, power, &vec![incl; n])?;
                for d in sub.degrees() {
                    let w = incl.block(d);
                    if w.cols() == 0 {
                        continue;
                    }
                    let out_rank = power.complex.rank(d + k);
                    let kb = incl_pow.block(d + k);
                    for wc in 0..w.cols() {
                        let mut am = IntegerMatrix::zeros(out_rank, nk);
                        for (col, (pd, pi, pj)) in hom.pairs(k).iter().enumerate() {
                            if *pd != d {
                                continue;
                            }
                            let e = w.get(*pi, wc);
                            if !e.is_zero() {
                                am.set(*pj, col, e.clone());
                            }
                        }
                        a_rows.push(am);
                        k_blocks.push(kb.clone());
                    }
                }
            }
            let lattice = if a_rows.is_empty() {
                IntegerMatrix::identity(nk)
            } else {
                let total_rows: usize = a_rows.iter().map(|m| m.rows()).sum();
                let aux_cols: usize = k_blocks.iter().map(|m| m.cols()).sum();
                let mut big = IntegerMatrix::zeros(total_rows, nk + aux_cols);
                let mut r0 = 0;
                let mut c0 = nk;
                for (am, kb) in a_rows.iter().zip(&k_blocks) {
                    for r in 0..am.rows() {
                        for cc in 0..nk {
                            let e = am.get(r, cc);
                            if !e.is_zero() {
                                big.set(r0 + r, cc, e.clone());
                            }
                        }
                        for cc in 0..kb.cols() {
                            let e = kb.get(r, cc);
                            if !e.is_zero() {
                                big.set(r0 + r, c0 + cc, -e.clone());
                            }
                        }
                    }
                    r0 += am.rows();
                    c0 += kb.cols();
                }
                let ker = kernel_basis(&big);
                let keep: Vec<Vec<BigInt>> = (0..ker.cols())
                    .map(|j| (0..nk).map(|i| ker.get(i, j).clone()).collect())
                    .collect();
                column_hermite_form(&IntegerMatrix::from_columns(nk, &keep))
            };
            if lattice.cols() > 0 {
                lattices.insert(k, lattice);
            }
        }
        if degree_zero {
            // keep only degree-0 cycles: chain maps respecting the constraints
            let mut only = BTreeMap::new();
            if let Some(l0) = lattices.get(&0) {
                let d0 = hom.complex.differential(0);
                let cycles = l0.mul(&kernel_basis(&d0.mul(l0)));
                let l = column_hermite_form(&cycles);
                if l.cols() > 0 {
                    only.insert(0, l);
                }
            }
            lattices = only;
        }
        let (carrier, incl) = subcomplex_from_lattices(&hom.complex, &lattices)?;
        for k in carrier.degrees() {
            solvers.insert((n, k), smith_normal_form(&incl.block(k)));
        }
        let mut gens = Vec::new();
        for g in &full_gens {
            let mut rg = ChainMap::zero(carrier.clone(), carrier.clone(), 0);
            for k in carrier.degrees() {
                let b = g.compose(&incl).block(k);
                let x = solvers[&(n, k)].solve(&b).ok_or_else(|| {
                    Error::NotSubcomplex("carrier not stable under the action".into())
                })?;
                rg.set_block(k, x)?;
            }
            gens.push(rg);
        }
        components.insert(n, setf_sym::SymmetricComplex::new(carrier, n, gens)?);
        inclusions.insert(n, incl);
    }

    // compositions by insertion and evaluation
    let id_c = ChainMap::identity(c.clone());
    let mut compositions = BTreeMap::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 > max_arity {
                continue;
            }
            let out_arity = m + n - 1;
            for x in 0..m {
                let mid_factors: Vec<Arc<ChainComplex>> = (0..m)
                    .map(|s| {
                        if s == x {
                            powers[&n].complex.clone()
                        } else {
                            c.clone()
                        }
                    })
                    .collect();
                let mid = tensor_many(&mid_factors);
                let flat = splice_map(&mid, x, &powers[&n], &powers[&out_arity])?;
                let cm = &components[&m].complex;
                let cn = &components[&n].complex;
                let out = &components[&out_arity].complex;
                let comp = composition_table(cm, cn, out, |da, ia, db, ib| {
                    let fa = {
                        let coords = inclusions[&m].block(da).column(ia);
                        homs[&m].element_to_map(da, &coords)?
                    };
                    let gb = {
                        let coords = inclusions[&n].block(db).column(ib);
                        homs[&n].element_to_map(db, &coords)?
                    };
                    let maps: Vec<&ChainMap> =
                        (0..m).map(|s| if s == x { &gb } else { &id_c }).collect();
                    let ins = map_tensor_into(&powers[&m], &mid, &maps)?;
                    let composite = flat.compose(&ins).compose(&fa);
                    let coords = homs[&out_arity].map_to_element(&composite)?;
                    if restricted {
                        let snf = solvers.get(&(out_arity, da + db)).ok_or_else(|| {
                            Error::NotSubcomplex("composite escapes the carrier".into())
                        })?;
                        let b = IntegerMatrix::from_columns(coords.len(), &[coords]);
                        let sol = snf.solve(&b).ok_or_else(|| {
                            Error::NotSubcomplex("composite escapes the carrier".into())
                        })?;
                        Ok(sol.column(0))
                    } else {
                        Ok(coords)
                    }
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }

    // unit: the canonical isomorphism C -> C^1
    let unit_map = {
        let mut f = ChainMap::zero(c.clone(), powers[&1].complex.clone(), 0);
        for d in c.degrees() {
            let mut b = IntegerMatrix::zeros(powers[&1].complex.rank(d), c.rank(d));
            for i in 0..c.rank(d) {
                let row = powers[&1]
                    .index_of(d, &vec![(d, i)])
                    .ok_or_else(|| Error::Shape("power tuple missing".into()))?;
                b.set(row, i, BigInt::from(1));
            }
            f.set_block(d, b)?;
        }
        f
    };
    let unit_coords = homs[&1].map_to_element(&unit_map)?;
    let unit_coeffs = if restricted {
        let snf = solvers
            .get(&(1, 0))
            .ok_or_else(|| Error::NotSubcomplex("identity violates the constraints".into()))?;
        let b = IntegerMatrix::from_columns(unit_coords.len(), &[unit_coords]);
        snf.solve(&b)
            .ok_or_else(|| Error::NotSubcomplex("identity violates the constraints".into()))?
            .column(0)
    } else {
        unit_coords
    };

    let operad = TruncatedOperad::new(
        max_arity,
        true,
        components,
        unit_coeffs,
        compositions,
        BTreeMap::new(),
    )?;
    Ok(CoendOperad {
        operad,
        complex: c.clone(),
        homs,
        powers,
        inclusions,
        restricted,
        solvers,
    })
}

/// The relative coendomorphism operad of the unit interval with both
/// endpoints preserved, together with its lattice-path basis and the
/// induced identification with the group-ring operad.
pub struct IntervalCoend {
    pub coend: CoendOperad,
    pub s0: TruncatedOperad,
    /// per arity: the `n!` staircase paths, indexed like `perms`
    pub paths: BTreeMap<usize, Vec<OperadElement>>,
    pub perms: BTreeMap<usize, Vec<Perm>>,
    /// group-ring operad -> relative coend, permutation basis to path basis
    pub iso: OperadMorphism,
}

/// The staircase chain map `I -> I^n` that flips coordinate `j` at step
/// `sigma(j)`: vertices go to the diagonal vertices and the edge sweeps the
/// lattice path visiting the cube edges in the order prescribed by `sigma`.
/// `interval` must be the unit interval and `power` its `n`-th tensor power.
pub fn staircase_path(
    interval: &Arc<ChainComplex>,
    power: &TensorComplex,
    sigma: &Perm,
) -> Result<ChainMap, Error> {
    let n = power.arity();
    if sigma.n() != n {
        return Err(Error::Shape("permutation size does not match the power".into()));
    }
    let p0 = interval.index_of_label(0, "p0").ok_or_else(|| Error::Shape("no p0".into()))?;
    let p1 = interval.index_of_label(0, "p1").ok_or_else(|| Error::Shape("no p1".into()))?;
    let q = interval.index_of_label(1, "q").ok_or_else(|| Error::Shape("no q".into()))?;
    let mut f = ChainMap::zero(interval.clone(), power.complex.clone(), 0);
    let mut b0 = IntegerMatrix::zeros(power.complex.rank(0), interval.rank(0));
    let diag = |v: usize| -> usize {
        power
            .index_of(0, &vec![(0, v); n])
            .expect("diagonal vertex exists")
    };
    b0.set(diag(p0), p0, BigInt::from(1));
    b0.set(diag(p1), p1, BigInt::from(1));
    f.set_block(0, b0)?;
    let mut b1 = IntegerMatrix::zeros(power.complex.rank(1), interval.rank(1));
    for k in 0..n {
        let tuple: TensorTuple = (0..n)
            .map(|j| {
                if sigma.apply(j) == k {
                    (1, q)
                } else if sigma.apply(j) < k {
                    (0, p1)
                } else {
                    (0, p0)
                }
            })
            .collect();
        let row = power.index_of(1, &tuple).expect("edge tuple exists");
        b1.set(row, q, BigInt::from(1));
    }
    f.set_block(1, b1)?;
    Ok(f)
}

pub fn interval_coend(max_arity: usize) -> Result<IntervalCoend, Error> {
    let c = unit_interval().shared();
    let p0 = c.index_of_label(0, "p0").expect("interval basis");
    let p1 = c.index_of_label(0, "p1").expect("interval basis");
    let endpoint = |i: usize| {
        let mut l = BTreeMap::new();
        let mut m = IntegerMatrix::zeros(2, 1);
        m.set(i, 0, BigInt::from(1));
        l.insert(0, m);
        l
    };
    let preserved = vec![endpoint(p0), endpoint(p1)];
    let coend = build_coend(&c, &preserved, max_arity, true)?;
    let s0 = crate::builtins::s0(max_arity)?;

    let mut paths = BTreeMap::new();
    let mut perms = BTreeMap::new();
    let mut iso_maps = BTreeMap::new();
    for n in 1..=max_arity {
        let power = &coend.powers[&n];
        let all = Perm::all(n);
        let mut elems = Vec::new();
        for sigma in &all {
            let f = staircase_path(&c, power, sigma)?;
            elems.push(coend.map_to_element(n, &f)?);
        }
        let carrier = coend.operad.component(n)?.complex.clone();
        let cols: Vec<Vec<BigInt>> = elems.iter().map(|e| e.coeffs.clone()).collect();
        let mut iso_n = ChainMap::zero(s0.component(n)?.complex.clone(), carrier.clone(), 0);
        iso_n.set_block(0, IntegerMatrix::from_columns(carrier.rank(0), &cols))?;
        iso_maps.insert(n, iso_n);
        paths.insert(n, elems);
        perms.insert(n, all);
    }

    Ok(IntervalCoend {
        coend,
        s0,
        paths,
        perms,
        iso: OperadMorphism { maps: iso_maps },
    })
}

impl IntervalCoend {
    /// Ranks per degree of the arity-`n` component.
    pub fn component_ranks(&self, n: usize) -> Result<BTreeMap<i64, usize>, Error> {
        let c = &self.coend.operad.component(n)?.complex;
        Ok(c.degrees().into_iter().map(|d| (d, c.rank(d))).collect())
    }

    /// The component has rank `n!` in degree 0, nothing elsewhere, and the
    /// staircase paths form a basis.
    pub fn concentration_holds(&self, n: usize) -> Result<bool, Error> {
        let c = &self.coend.operad.component(n)?.complex;
        let fact: usize = (1..=n).product();
        for d in c.degrees() {
            let want = if d == 0 { fact } else { 0 };
            if c.rank(d) != want {
                return Ok(false);
            }
        }
        let path_cols: Vec<Vec<BigInt>> =
            self.paths[&n].iter().map(|e| e.coeffs.clone()).collect();
        let p = IntegerMatrix::from_columns(c.rank(0), &path_cols);
        if exact_linear::rank(&p) != fact {
            return Ok(false);
        }
        Ok(lattices_equal(&p, &IntegerMatrix::identity(c.rank(0))))
    }

    /// The action permutes the paths freely and transitively.
    pub fn orbit_is_free_transitive(&self, n: usize) -> Result<bool, Error> {
        let id_pos = self.perms[&n]
            .iter()
            .position(|p| p.is_identity())
            .expect("identity present");
        let base = &self.paths[&n][id_pos];
        let mut seen = vec![false; self.paths[&n].len()];
        for tau in &self.perms[&n] {
            let moved = self.coend.operad.act(tau, base)?;
            let Some(pos) = self.paths[&n].iter().position(|p| *p == moved) else {
                return Ok(false);
            };
            if seen[pos] {
                return Ok(false);
            }
            seen[pos] = true;
        }
        Ok(seen.iter().all(|s| *s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{check_operad_axioms, check_operad_morphism};

    #[test]
    fn coend_of_unit_is_rank_one() {
        let one = ChainComplex::unit().shared();
        let co = coend_operad(&one, &[], 3).unwrap();
        for n in 1..=3 {
            assert_eq!(co.operad.component(n).unwrap().complex.total_rank(), 1);
        }
        let report = check_operad_axioms(&co.operad).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn coend_of_interval_passes_axioms() {
        let i = unit_interval().shared();
        let co = coend_operad(&i, &[], 3).unwrap();
        let report = check_operad_axioms(&co.operad).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn interval_paths_match_the_group_ring()  {
        let ic = interval_coend(3).unwrap();
        for n in 1..=3usize {
            let fact: usize = (1..=n).product();
            assert_eq!(ic.paths[&n].len(), fact);
            assert!(ic.concentration_holds(n).unwrap(), "arity {}", n);
            assert!(ic.orbit_is_free_transitive(n).unwrap(), "arity {}", n);
        }
        let report = check_operad_morphism(&ic.s0, &ic.coend.operad, &ic.iso).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    // The 4-cube has 16 vertices and 32 edges, so its cycle space has rank
    // 17 and the 24 staircases, all sharing one boundary, span only rank 18.
    #[test]
    fn four_fold_paths_are_dependent() {
        let ic = interval_coend(4).unwrap();
        assert_eq!(ic.paths[&4].len(), 24);
        assert_eq!(ic.component_ranks(4).unwrap().get(&0), Some(&18));
        assert!(!ic.concentration_holds(4).unwrap());
        assert!(ic.orbit_is_free_transitive(4).unwrap());
    }

    #[test]
    fn swap_exchanges_the_two_paths() {
        let ic = interval_coend(2).unwrap();
        let swap = Perm::adjacent(2, 0);
        let a = &ic.paths[&2][0];
        let b = &ic.paths[&2][1];
        let moved = ic.coend.operad.act(&swap, a).unwrap();
        assert_eq!(moved, *b);
    }
}
