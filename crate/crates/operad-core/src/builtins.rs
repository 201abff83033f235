use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::sign::koszul_sign;
use chain_core::tensor::{map_tensor_into, tensor_many, TensorComplex};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use setf_sym::{Perm, SymmetricComplex};

use crate::operad::composition_table;
use crate::{Error, TruncatedOperad};

fn unit_complex() -> Arc<ChainComplex> {
    ChainComplex::unit().shared()
}

pub(crate) fn all_ones_augmentation(c: &Arc<ChainComplex>, unit: &Arc<ChainComplex>) -> ChainMap {
    let mut aug = ChainMap::zero(c.clone(), unit.clone(), 0);
    let n = c.rank(0);
    let mut m = IntegerMatrix::zeros(1, n);
    for j in 0..n {
        m.set(0, j, BigInt::one());
    }
    aug.set_block(0, m).expect("row shape");
    aug
}

/// The group-ring operad: `component(n) = ZS_n` in degree 0. A permutation
/// records the order in which the `n` slots are visited, so the `S_n` action
/// relabels slots on the right and `o_x` is block composition of the
/// relabelings. Augmentation sends every permutation to 1.
pub fn s0(max_arity: usize) -> Result<TruncatedOperad, Error> {
    let mut perms_by_arity: BTreeMap<usize, Vec<Perm>> = BTreeMap::new();
    let mut complexes: BTreeMap<usize, Arc<ChainComplex>> = BTreeMap::new();
    for n in 1..=max_arity {
        let perms = Perm::all(n);
        let labels: Vec<String> = perms.iter().map(|p| format!("{:?}", p)).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        complexes.insert(n, ChainComplex::build(&[(0, &refs)], &[])?.shared());
        perms_by_arity.insert(n, perms);
    }
    let index = |n: usize, p: &Perm| -> usize {
        perms_by_arity[&n].iter().position(|q| q == p).expect("perm in list")
    };

    let mut components = BTreeMap::new();
    for n in 1..=max_arity {
        let c = complexes[&n].clone();
        let perms = &perms_by_arity[&n];
        let gens = (0..n.saturating_sub(1))
            .map(|i| {
                let s = Perm::adjacent(n, i);
                let mut m = IntegerMatrix::zeros(perms.len(), perms.len());
                for (col, p) in perms.iter().enumerate() {
                    m.set(index(n, &p.compose(&s)), col, BigInt::one());
                }
                let mut g = ChainMap::zero(c.clone(), c.clone(), 0);
                g.set_block(0, m).expect("square block");
                g
            })
            .collect();
        components.insert(n, SymmetricComplex::new(c, n, gens)?);
    }

    let mut compositions = BTreeMap::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 > max_arity {
                continue;
            }
            let out = complexes[&(m + n - 1)].clone();
            for x in 0..m {
                let comp = composition_table(&complexes[&m], &complexes[&n], &out, |_, ia, _, ib| {
                    let sigma = &perms_by_arity[&m][ia];
                    let tau = &perms_by_arity[&n][ib];
                    let big = sigma.block_compose(x, tau);
                    let mut v = vec![BigInt::zero(); out.rank(0)];
                    v[index(m + n - 1, &big)] = BigInt::one();
                    Ok(v)
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }

    let one = unit_complex();
    let augmentations = (1..=max_arity)
        .map(|n| (n, all_ones_augmentation(&complexes[&n], &one)))
        .collect();
    TruncatedOperad::new(
        max_arity,
        true,
        components,
        vec![BigInt::one()],
        compositions,
        augmentations,
    )
}

/// The rank-one operad with trivial actions: every component is `Z` in
/// degree 0 and every composition is multiplication.
pub fn com(max_arity: usize) -> Result<TruncatedOperad, Error> {
    let mut components = BTreeMap::new();
    let mut complexes = BTreeMap::new();
    for n in 1..=max_arity {
        let c = ChainComplex::build(&[(0, &["e"])], &[])?.shared();
        components.insert(n, SymmetricComplex::with_trivial_action(c.clone(), n));
        complexes.insert(n, c);
    }
    let mut compositions = BTreeMap::new();
    for m in 1..=max_arity {
        for n in 1..=max_arity {
            if m + n - 1 > max_arity {
                continue;
            }
            let out = complexes[&(m + n - 1)].clone();
            for x in 0..m {
                let comp = composition_table(&complexes[&m], &complexes[&n], &out, |_, _, _, _| {
                    Ok(vec![BigInt::one()])
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }
    let one = unit_complex();
    let augmentations = (1..=max_arity)
        .map(|n| (n, all_ones_augmentation(&complexes[&n], &one)))
        .collect();
    TruncatedOperad::new(
        max_arity,
        true,
        components,
        vec![BigInt::one()],
        compositions,
        augmentations,
    )
}

/// Arity-wise tensor product of two operads with the diagonal action and
/// `(u1 (x) v1) o_x (u2 (x) v2) = (-1)^{|v1||u2|} (u1 o_x u2) (x) (v1 o_x v2)`.
/// Returns the operad together with the per-arity tensor dictionaries.
pub fn tensor_operads(
    u: &TruncatedOperad,
    v: &TruncatedOperad,
) -> Result<(TruncatedOperad, BTreeMap<usize, TensorComplex>), Error> {
    if u.max_arity != v.max_arity {
        return Err(Error::Shape("arity bounds differ".into()));
    }
    let nmax = u.max_arity;
    let mut carriers: BTreeMap<usize, TensorComplex> = BTreeMap::new();
    let mut components = BTreeMap::new();
    for n in 1..=nmax {
        let cu = u.component(n)?;
        let cv = v.component(n)?;
        let t = tensor_many(&[cu.complex.clone(), cv.complex.clone()]);
        let mut gens = Vec::new();
        for i in 0..n.saturating_sub(1) {
            gens.push(map_tensor_into(&t, &t, &[cu.generator(i), cv.generator(i)])?);
        }
        components.insert(n, SymmetricComplex::new(t.complex.clone(), n, gens)?);
        carriers.insert(n, t);
    }

    let mut compositions = BTreeMap::new();
    for m in 1..=nmax {
        for n in 1..=nmax {
            if m + n - 1 > nmax {
                continue;
            }
            let tm = carriers[&m].clone();
            let tn = carriers[&n].clone();
            let tout = carriers[&(m + n - 1)].clone();
            let out = tout.complex.clone();
            for x in 0..m {
                let comp = composition_table(&tm.complex, &tn.complex, &out, |da, ia, db, ib| {
                    let ((du1, iu1), (dv1, iv1)) = {
                        let tup = tm.tuple_of(da, ia);
                        (tup[0], tup[1])
                    };
                    let ((du2, iu2), (dv2, iv2)) = {
                        let tup = tn.tuple_of(db, ib);
                        (tup[0], tup[1])
                    };
                    let ua = u.basis_element(m, du1, iu1);
                    let ub = u.basis_element(n, du2, iu2);
                    let va = v.basis_element(m, dv1, iv1);
                    let vb = v.basis_element(n, dv2, iv2);
                    let uc = u.compose(&ua, x, &ub)?;
                    let vc = v.compose(&va, x, &vb)?;
                    let sign = BigInt::from(koszul_sign(dv1, du2));
                    let mut out_v = vec![BigInt::zero(); out.rank(da + db)];
                    for (ru, cu) in uc.coeffs.iter().enumerate() {
                        if cu.is_zero() {
                            continue;
                        }
                        for (rv, cv) in vc.coeffs.iter().enumerate() {
                            if cv.is_zero() {
                                continue;
                            }
                            let idx = tout
                                .index_of(da + db, &vec![(du1 + du2, ru), (dv1 + dv2, rv)])
                                .ok_or_else(|| Error::Shape("tensor tuple missing".into()))?;
                            out_v[idx] += &sign * cu * cv;
                        }
                    }
                    Ok(out_v)
                })?;
                compositions.insert((m, x, n), comp);
            }
        }
    }

    let t1 = &carriers[&1];
    let mut unit_coeffs = vec![BigInt::zero(); t1.complex.rank(0)];
    for (iu, cu) in u.unit().coeffs.iter().enumerate() {
        for (iv, cv) in v.unit().coeffs.iter().enumerate() {
            let c = cu * cv;
            if !c.is_zero() {
                let idx = t1
                    .index_of(0, &vec![(0, iu), (0, iv)])
                    .ok_or_else(|| Error::Shape("unit tuple missing".into()))?;
                unit_coeffs[idx] = c;
            }
        }
    }

    let one = unit_complex();
    let mut augmentations = BTreeMap::new();
    for n in 1..=nmax {
        let (Some(au), Some(av)) = (u.augmentation(n), v.augmentation(n)) else {
            continue;
        };
        let t = &carriers[&n];
        let c = &t.complex;
        let mut row = IntegerMatrix::zeros(1, c.rank(0));
        for (col, tup) in t.tuples(0).iter().enumerate() {
            let ((du, iu), (dv, iv)) = (tup[0], tup[1]);
            if du != 0 || dv != 0 {
                continue;
            }
            row.set(0, col, au.block(0).get(0, iu) * av.block(0).get(0, iv));
        }
        let mut aug = ChainMap::zero(c.clone(), one.clone(), 0);
        aug.set_block(0, row)?;
        augmentations.insert(n, aug);
    }

    let operad = TruncatedOperad::new(
        nmax,
        u.unital && v.unital,
        components,
        unit_coeffs,
        compositions,
        augmentations,
    )?;
    Ok((operad, carriers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check_operad_axioms;

    #[test]
    fn s0_component_ranks() {
        let o = s0(3).unwrap();
        assert_eq!(o.component(1).unwrap().complex.rank(0), 1);
        assert_eq!(o.component(2).unwrap().complex.rank(0), 2);
        assert_eq!(o.component(3).unwrap().complex.rank(0), 6);
    }

    #[test]
    fn s0_passes_axioms_at_4() {
        let o = s0(4).unwrap();
        let report = check_operad_axioms(&o).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn com_passes_axioms() {
        let o = com(4).unwrap();
        let report = check_operad_axioms(&o).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
        for n in 1..=4 {
            assert_eq!(o.component(n).unwrap().complex.total_rank(), 1);
        }
    }

    #[test]
    fn tensor_of_group_rings() {
        let a = s0(3).unwrap();
        let b = s0(3).unwrap();
        let (t, _) = tensor_operads(&a, &b).unwrap();
        assert_eq!(t.component(2).unwrap().complex.rank(0), 4);
        let report = check_operad_axioms(&t).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn truncation_overflow_is_an_error() {
        let o = s0(3).unwrap();
        let a = o.basis_element(3, 0, 0);
        let b = o.basis_element(2, 0, 0);
        assert!(matches!(
            o.compose(&a, 0, &b),
            Err(Error::TruncationOverflow { needed: 4, max: 3 })
        ));
    }

    #[test]
    fn fault_injection_is_detected_with_witness() {
        let o = s0(3).unwrap();
        let faulty = o.negate_composition_entry(2, 0, 2, 0, 0, 0).unwrap();
        let report = check_operad_axioms(&faulty).unwrap();
        assert!(!report.is_ok());
        assert!(report.violations.iter().all(|v| !v.witness.is_empty()));
    }
}
