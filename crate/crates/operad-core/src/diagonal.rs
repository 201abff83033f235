use std::collections::BTreeMap;

use chain_core::tensor::TensorComplex;
use chain_core::ChainMap;
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::One;
use setf_sym::Perm;

use crate::builtins::{s0, tensor_operads};
use crate::free::FreeOperad;
use crate::{Error, OperadMorphism, TruncatedOperad};

/// A diagonal `delta: O -> O (x) S0` together with its target.
pub struct SigmaDiagonal {
    pub target: TruncatedOperad,
    pub carriers: BTreeMap<usize, TensorComplex>,
    pub group_ring: TruncatedOperad,
    pub delta: OperadMorphism,
}

pub enum DiagonalSource<'a> {
    /// basis tree goes to itself tensored with its leaf-order permutation
    Free(&'a FreeOperad),
    /// must be the group-ring operad; a permutation goes to its double
    Plain(&'a TruncatedOperad),
}

fn is_group_ring(o: &TruncatedOperad) -> Result<bool, Error> {
    let model = s0(o.max_arity)?;
    for n in 1..=o.max_arity {
        let a = o.component(n)?;
        let b = model.component(n)?;
        if a.complex.rank(0) != b.complex.rank(0) || a.complex.total_rank() != b.complex.total_rank()
        {
            return Ok(false);
        }
        for i in 0..n.saturating_sub(1) {
            if !a.generator(i).eq_blocks(b.generator(i)) {
                return Ok(false);
            }
        }
    }
    for m in 1..=o.max_arity {
        for n in 1..=o.max_arity {
            if m + n - 1 > o.max_arity {
                continue;
            }
            for x in 0..m {
                if !o.composition(m, x, n)?.eq_blocks(model.composition(m, x, n)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(o.unit().coeffs == model.unit().coeffs)
}

pub fn sigma_diagonal(src: DiagonalSource) -> Result<SigmaDiagonal, Error> {
    let (o, perm_of): (&TruncatedOperad, Box<dyn Fn(usize, i64, usize) -> Result<Perm, Error>>) =
        match src {
            DiagonalSource::Free(f) => {
                let trees = f.trees.clone();
                (
                    &f.operad,
                    Box::new(move |n: usize, d: i64, i: usize| {
                        if d != 0 {
                            return Err(Error::Shape("tree basis lives in degree 0".into()));
                        }
                        let t = &trees[&n][i];
                        let order = Perm::from_one_line(t.leaves())
                            .ok_or_else(|| Error::Shape("leaf labels not bijective".into()))?;
                        Ok(order.inverse())
                    }),
                )
            }
            DiagonalSource::Plain(o) => {
                if !is_group_ring(o)? {
                    return Err(Error::Unsupported(
                        "no canonical diagonal for this operad".into(),
                    ));
                }
                let perms: BTreeMap<usize, Vec<Perm>> =
                    (1..=o.max_arity).map(|n| (n, Perm::all(n))).collect();
                (
                    o,
                    Box::new(move |n: usize, _d: i64, i: usize| Ok(perms[&n][i].clone())),
                )
            }
        };

    let group_ring = s0(o.max_arity)?;
    let (target, carriers) = tensor_operads(o, &group_ring)?;
    let all: BTreeMap<usize, Vec<Perm>> = (1..=o.max_arity).map(|n| (n, Perm::all(n))).collect();

    let mut maps = BTreeMap::new();
    for n in 1..=o.max_arity {
        let c = &o.component(n)?.complex;
        let t = &carriers[&n];
        let mut delta_n = ChainMap::zero(c.clone(), t.complex.clone(), 0);
        for d in c.degrees() {
            let mut m = IntegerMatrix::zeros(t.complex.rank(d), c.rank(d));
            for i in 0..c.rank(d) {
                let p = perm_of(n, d, i)?;
                let pi = all[&n]
                    .iter()
                    .position(|q| *q == p)
                    .ok_or_else(|| Error::Shape("permutation outside the basis".into()))?;
                let row = t
                    .index_of(d, &vec![(d, i), (0, pi)])
                    .ok_or_else(|| Error::Shape("tensor tuple missing".into()))?;
                m.set(row, i, BigInt::one());
            }
            delta_n.set_block(d, m)?;
        }
        maps.insert(n, delta_n);
    }
    Ok(SigmaDiagonal {
        target,
        carriers,
        group_ring,
        delta: OperadMorphism { maps },
    })
}

/// Collapsing the group-ring factor with its augmentation undoes `delta`.
pub fn diagonal_triangle_commutes(o: &TruncatedOperad, sd: &SigmaDiagonal) -> Result<bool, Error> {
    for n in 1..=o.max_arity {
        let c = &o.component(n)?.complex;
        let t = &sd.carriers[&n];
        let mut proj = ChainMap::zero(t.complex.clone(), c.clone(), 0);
        for d in t.complex.degrees() {
            let mut m = IntegerMatrix::zeros(c.rank(d), t.complex.rank(d));
            for (col, tup) in t.tuples(d).iter().enumerate() {
                let ((da, ia), (db, _)) = (tup[0], tup[1]);
                if db != 0 || da != d {
                    continue;
                }
                m.set(ia, col, BigInt::one());
            }
            proj.set_block(d, m)?;
        }
        let round = proj.compose(&sd.delta.maps[&n]);
        if !round.eq_blocks(&ChainMap::identity(c.clone())) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{free_operad, GeneratorSymbol};
    use crate::{check_operad_morphism, com};

    #[test]
    fn group_ring_diagonal_is_a_morphism() {
        let o = s0(3).unwrap();
        let sd = sigma_diagonal(DiagonalSource::Plain(&o)).unwrap();
        let report = check_operad_morphism(&o, &sd.target, &sd.delta).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
        assert!(diagonal_triangle_commutes(&o, &sd).unwrap());
    }

    #[test]
    fn free_diagonal_is_a_morphism() {
        let f = free_operad(&[GeneratorSymbol::new("g", 2)], 3).unwrap();
        let sd = sigma_diagonal(DiagonalSource::Free(&f)).unwrap();
        let report = check_operad_morphism(&f.operad, &sd.target, &sd.delta).unwrap();
        assert!(report.is_ok(), "violations: {:?}", report.violations);
        assert!(diagonal_triangle_commutes(&f.operad, &sd).unwrap());
    }

    #[test]
    fn diagonal_preserves_units() {
        let o = s0(2).unwrap();
        let sd = sigma_diagonal(DiagonalSource::Plain(&o)).unwrap();
        let u = sd.delta.maps[&1].block(0).apply(&o.unit().coeffs);
        assert_eq!(u, sd.target.unit().coeffs);
    }

    #[test]
    fn rank_one_operads_have_no_canonical_diagonal() {
        let o = com(3).unwrap();
        assert!(matches!(
            sigma_diagonal(DiagonalSource::Plain(&o)),
            Err(Error::Unsupported(_))
        ));
    }
}
