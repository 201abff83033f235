use std::collections::BTreeMap;

use chain_core::sub_quotient::quotient_by_lattice;
use exact_linear::{lattice_contains, saturate_lattice, IntegerMatrix};
use num_traits::Zero;
use setf_sym::SymmetricComplex;

use crate::operad::composition_table;
use crate::{Error, OperadElement, OperadMorphism, TruncatedOperad};

/// Two-sided operadic ideal as saturated column lattices per arity and
/// degree, closed under the boundary, the action, and composition with
/// arbitrary elements on either side.
pub struct OperadIdeal {
    pub lattices: BTreeMap<usize, BTreeMap<i64, IntegerMatrix>>,
}

impl OperadIdeal {
    pub fn contains(&self, e: &OperadElement) -> bool {
        if e.is_zero() {
            return true;
        }
        self.lattices
            .get(&e.arity)
            .and_then(|m| m.get(&e.degree))
            .map_or(false, |l| lattice_contains(l, &e.coeffs))
    }
}

pub struct IdealQuotient {
    pub ideal: OperadIdeal,
    pub quotient: TruncatedOperad,
    pub projection: OperadMorphism,
}

fn add_vector(
    lat: &mut BTreeMap<usize, BTreeMap<i64, IntegerMatrix>>,
    e: &OperadElement,
) -> bool {
    if e.coeffs.iter().all(|c| c.is_zero()) {
        return false;
    }
    let per_deg = lat.entry(e.arity).or_default();
    match per_deg.get_mut(&e.degree) {
        Some(l) => {
            if lattice_contains(l, &e.coeffs) {
                return false;
            }
            let ext = l.hstack(&IntegerMatrix::from_columns(e.coeffs.len(), &[e.coeffs.clone()]));
            *l = saturate_lattice(&ext);
            true
        }
        None => {
            let l = IntegerMatrix::from_columns(e.coeffs.len(), &[e.coeffs.clone()]);
            per_deg.insert(e.degree, saturate_lattice(&l));
            true
        }
    }
}

/// Smallest saturated ideal containing `gens`, with the quotient operad and
/// the projection onto it. Generators must live in arities 2 and up.
pub fn ideal_and_quotient(
    h: &TruncatedOperad,
    gens: &[OperadElement],
) -> Result<IdealQuotient, Error> {
    let nmax = h.max_arity;
    for g in gens {
        if g.arity < 2 {
            return Err(Error::UnitTouched);
        }
        if g.arity > nmax {
            return Err(Error::TruncationOverflow {
                needed: g.arity,
                max: nmax,
            });
        }
        if g.coeffs.len() != h.component(g.arity)?.complex.rank(g.degree) {
            return Err(Error::Shape("generator has the wrong coordinate length".into()));
        }
    }

    let mut lat: BTreeMap<usize, BTreeMap<i64, IntegerMatrix>> = BTreeMap::new();
    for g in gens {
        add_vector(&mut lat, g);
    }

    // fixed-point closure; saturation may enlarge the span, so every pass
    // reprocesses the canonical columns
    loop {
        let mut fresh: Vec<OperadElement> = Vec::new();
        for (&n, per_deg) in &lat {
            let comp = h.component(n)?;
            for (&d, l) in per_deg {
                for j in 0..l.cols() {
                    let v = OperadElement {
                        arity: n,
                        degree: d,
                        coeffs: l.column(j),
                    };
                    let dv = comp.complex.differential(d).apply(&v.coeffs);
                    fresh.push(OperadElement {
                        arity: n,
                        degree: d - 1,
                        coeffs: dv,
                    });
                    for i in 0..n.saturating_sub(1) {
                        fresh.push(OperadElement {
                            arity: n,
                            degree: d,
                            coeffs: comp.generator(i).block(d).apply(&v.coeffs),
                        });
                    }
                    for m in 1..=nmax {
                        if m + n - 1 > nmax {
                            continue;
                        }
                        for (db, ib) in h.basis(m) {
                            let b = h.basis_element(m, db, ib);
                            for x in 0..m {
                                fresh.push(h.compose(&b, x, &v)?);
                            }
                            for x in 0..n {
                                fresh.push(h.compose(&v, x, &b)?);
                            }
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for w in &fresh {
            changed |= add_vector(&mut lat, w);
        }
        if !changed {
            break;
        }
    }

    if lat.get(&1).map_or(false, |m| m.values().any(|l| l.cols() > 0)) {
        return Err(Error::UnitTouched);
    }

    // quotient carriers with induced action and compositions
    let empty = BTreeMap::new();
    let mut quotients = BTreeMap::new();
    for n in 1..=nmax {
        let comp = h.component(n)?;
        let lattices = lat.get(&n).unwrap_or(&empty);
        let (q, proj, sect) = quotient_by_lattice(&comp.complex, lattices)?;
        quotients.insert(n, (q, proj, sect));
    }

    let mut components = BTreeMap::new();
    for n in 1..=nmax {
        let comp = h.component(n)?;
        let (q, proj, sect) = &quotients[&n];
        let mut gens_q = Vec::new();
        for i in 0..n.saturating_sub(1) {
            gens_q.push(proj.compose(&comp.generator(i).compose(sect)));
        }
        components.insert(n, SymmetricComplex::new(q.clone(), n, gens_q)?);
    }

    let mut compositions = BTreeMap::new();
    for m in 1..=nmax {
        for n in 1..=nmax {
            if m + n - 1 > nmax {
                continue;
            }
            let out_arity = m + n - 1;
            let (qm, _, sect_m) = &quotients[&m];
            let (qn, _, sect_n) = &quotients[&n];
            let (qo, proj_o, _) = &quotients[&out_arity];
            for x in 0..m {
                let comp = composition_table(qm, qn, qo, |da, ia, db, ib| {
                    let a = OperadElement {
                        arity: m,
                        degree: da,
                        coeffs: sect_m.block(da).column(ia),
                    };
                    let b = OperadElement {
                        arity: n,
                        degree: db,
                        coeffs: sect_n.block(db).column(ib),
                    };
                    let c = h.compose(&a, x, &b)?;
                    Ok(proj_o.block(da + db).apply(&c.coeffs))
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }

    let unit_coeffs = quotients[&1].1.block(0).apply(&h.unit().coeffs);
    let quotient = TruncatedOperad::new(
        nmax,
        h.unital,
        components,
        unit_coeffs,
        compositions,
        BTreeMap::new(),
    )?;
    let projection = OperadMorphism {
        maps: (1..=nmax).map(|n| (n, quotients[&n].1.clone())).collect(),
    };
    Ok(IdealQuotient {
        ideal: OperadIdeal { lattices: lat },
        quotient,
        projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{free_operad, GeneratorSymbol};
    use crate::{check_operad_axioms, check_operad_morphism, s0};
    use num_bigint::BigInt;

    #[test]
    fn empty_generators_give_the_identity_quotient() {
        let o = s0(3).unwrap();
        let iq = ideal_and_quotient(&o, &[]).unwrap();
        assert!(iq.ideal.lattices.is_empty());
        for n in 1..=3 {
            assert_eq!(
                iq.quotient.component(n).unwrap().complex.total_rank(),
                o.component(n).unwrap().complex.total_rank()
            );
        }
        let report = check_operad_morphism(&o, &iq.quotient, &iq.projection).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn principal_ideal_in_the_free_operad_kills_everything_above_it() {
        let f = free_operad(&[GeneratorSymbol::new("g", 2)], 4).unwrap();
        let g = f.operad.basis_element(2, 0, 0);
        let iq = ideal_and_quotient(&f.operad, &[g.clone()]).unwrap();
        // one closure step reaches both graftings of g into itself
        for x in 0..2 {
            let c = f.operad.compose(&g, x, &g).unwrap();
            assert!(iq.ideal.contains(&c), "slot {}", x);
        }
        for n in 2..=4 {
            assert_eq!(iq.quotient.component(n).unwrap().complex.total_rank(), 0);
        }
        assert_eq!(iq.quotient.component(1).unwrap().complex.total_rank(), 1);
        let report = check_operad_axioms(&iq.quotient).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn permutation_differences_collapse_the_group_ring() {
        let o = s0(3).unwrap();
        // identity minus the transposition at arity 2
        let mut g = o.basis_element(2, 0, 0);
        let other = o.basis_element(2, 0, 1);
        for (a, b) in g.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= b;
        }
        let iq = ideal_and_quotient(&o, &[g]).unwrap();
        for n in 2..=3 {
            assert_eq!(iq.quotient.component(n).unwrap().complex.rank(0), 1, "arity {}", n);
        }
        let report = check_operad_axioms(&iq.quotient).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
        let morph = check_operad_morphism(&o, &iq.quotient, &iq.projection).unwrap();
        assert!(morph.is_ok(), "violations: {:?}", morph.violations);
    }

    #[test]
    fn unit_generators_are_rejected() {
        let o = s0(3).unwrap();
        let u = OperadElement {
            arity: 1,
            degree: 0,
            coeffs: vec![BigInt::from(1)],
        };
        assert!(matches!(ideal_and_quotient(&o, &[u]), Err(Error::UnitTouched)));
    }
}
