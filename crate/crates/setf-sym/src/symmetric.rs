use std::sync::Arc;

use chain_core::tensor::{permute_factors, tensor_many, TensorComplex};
use chain_core::{ChainComplex, ChainMap};

use crate::{Error, FiniteSetObj, Perm};

/// Chain complex with an `S_n` action given by the images of the adjacent
/// transpositions `s_0, .., s_{n-2}` as degree-0 chain automorphisms.
#[derive(Clone)]
pub struct SymmetricComplex {
    pub complex: Arc<ChainComplex>,
    pub arity: usize,
    gens: Vec<ChainMap>,
}

impl SymmetricComplex {
    pub fn new(complex: Arc<ChainComplex>, arity: usize, gens: Vec<ChainMap>) -> Result<Self, Error> {
        let expected = arity.saturating_sub(1);
        if gens.len() != expected {
            return Err(Error::Shape(format!(
                "arity {} needs {} generator actions, got {}",
                arity,
                expected,
                gens.len()
            )));
        }
        for g in &gens {
            if *g.source != *complex || *g.target != *complex || g.degree != 0 {
                return Err(Error::Shape("action generator is not an endo-map".into()));
            }
        }
        Ok(SymmetricComplex {
            complex,
            arity,
            gens,
        })
    }

    /// Trivial action in any arity.
    pub fn with_trivial_action(complex: Arc<ChainComplex>, arity: usize) -> Self {
        let gens = (0..arity.saturating_sub(1))
            .map(|_| ChainMap::identity(complex.clone()))
            .collect();
        SymmetricComplex {
            complex,
            arity,
            gens,
        }
    }

    pub fn generator(&self, i: usize) -> &ChainMap {
        &self.gens[i]
    }

    pub fn generators(&self) -> &[ChainMap] {
        &self.gens
    }

    /// The action of an arbitrary permutation, assembled from the adjacent
    /// generators so that `action(p o q) = action(p) o action(q)`.
    pub fn action(&self, p: &Perm) -> Result<ChainMap, Error> {
        if p.n() != self.arity {
            return Err(Error::Shape(format!(
                "permutation of {} letters on arity {}",
                p.n(),
                self.arity
            )));
        }
        let mut m = ChainMap::identity(self.complex.clone());
        for i in p.adjacent_decomposition() {
            m = m.compose(&self.gens[i]);
        }
        Ok(m)
    }

    /// Checks that the generators are chain automorphisms satisfying the
    /// involution, commutation, and braid relations of `S_n`.
    pub fn validate(&self) -> Result<(), Error> {
        let id = ChainMap::identity(self.complex.clone());
        for (i, g) in self.gens.iter().enumerate() {
            if !g.is_chain_map() {
                return Err(Error::ActionRelation(format!(
                    "generator {} does not commute with the differential",
                    i
                )));
            }
            if !g.compose(g).eq_blocks(&id) {
                return Err(Error::ActionRelation(format!(
                    "generator {} is not an involution",
                    i
                )));
            }
        }
        for i in 0..self.gens.len() {
            for j in i + 1..self.gens.len() {
                let gi = &self.gens[i];
                let gj = &self.gens[j];
                if j == i + 1 {
                    let lhs = gi.compose(gj).compose(gi);
                    let rhs = gj.compose(gi).compose(gj);
                    if !lhs.eq_blocks(&rhs) {
                        return Err(Error::ActionRelation(format!(
                            "braid relation fails for generators {}, {}",
                            i, j
                        )));
                    }
                } else if !gi.compose(gj).eq_blocks(&gj.compose(gi)) {
                    return Err(Error::ActionRelation(format!(
                        "distant generators {}, {} do not commute",
                        i, j
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `C^n` with the signed permutation action: the generator `s_i` swaps
/// adjacent factors and multiplies by the Koszul sign.
pub fn tensor_power_symmetric(c: &Arc<ChainComplex>, n: usize) -> (TensorComplex, SymmetricComplex) {
    let t = chain_core::tensor::tensor_power(c, n);
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        let (_, m) = permute_factors(&t, &perm).expect("valid swap");
        // the permuted tensor is the same complex by value; retarget blocks
        let mut g = ChainMap::zero(t.complex.clone(), t.complex.clone(), 0);
        for d in t.complex.degrees() {
            g.set_block(d, m.block(d)).expect("same shape");
        }
        gens.push(g);
    }
    let sym = SymmetricComplex::new(t.complex.clone(), n, gens).expect("shapes agree");
    (t, sym)
}

/// The coherence automorphism for an arbitrary permutation of the factors of
/// a tensor power; agrees with `SymmetricComplex::action` on the same data.
pub fn signed_permutation_action(t: &TensorComplex, p: &Perm) -> Result<ChainMap, Error> {
    if p.n() != t.arity() {
        return Err(Error::Shape("permutation size mismatch".into()));
    }
    // Sending slot i to slot p(i) reads back as: output slot j receives
    // input factor p^{-1}(j).
    let inv = p.inverse();
    let (_, m) = permute_factors(t, inv.one_line())?;
    let mut g = ChainMap::zero(t.complex.clone(), t.complex.clone(), 0);
    for d in t.complex.degrees() {
        g.set_block(d, m.block(d))
            .map_err(|e| Error::Chain(e.to_string()))?;
    }
    Ok(g)
}

/// Unordered tensor product of a family of complexes indexed by a finite
/// set, realized as the ordered product in canonical label order.
pub struct UnorderedTensor {
    pub set: FiniteSetObj,
    pub tensor: TensorComplex,
}

pub fn unordered_tensor(
    set: &FiniteSetObj,
    mut assignment: impl FnMut(&str) -> Arc<ChainComplex>,
) -> UnorderedTensor {
    let factors: Vec<Arc<ChainComplex>> =
        set.labels().iter().map(|l| assignment(l)).collect();
    UnorderedTensor {
        set: set.clone(),
        tensor: tensor_many(&factors),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chain_core::interval::unit_interval;
    use num_bigint::BigInt;

    #[test]
    fn tensor_power_action_is_valid() {
        let i = unit_interval().shared();
        for n in 1..=3 {
            let (_, sym) = tensor_power_symmetric(&i, n);
            sym.validate().unwrap();
        }
    }

    #[test]
    fn swap_sends_qq_to_minus_qq() {
        let i = unit_interval().shared();
        let (t, sym) = tensor_power_symmetric(&i, 2);
        let s = sym.generator(0);
        let top = t.complex.max_degree().unwrap();
        assert_eq!(top, 2);
        assert_eq!(*s.block(2).get(0, 0), BigInt::from(-1));
    }

    #[test]
    fn action_is_a_homomorphism() {
        let i = unit_interval().shared();
        let (_, sym) = tensor_power_symmetric(&i, 3);
        for p in Perm::all(3) {
            for q in Perm::all(3) {
                let lhs = sym.action(&p.compose(&q)).unwrap();
                let rhs = sym.action(&p).unwrap().compose(&sym.action(&q).unwrap());
                assert!(lhs.eq_blocks(&rhs), "failed at {:?} {:?}", p, q);
            }
        }
    }

    #[test]
    fn direct_action_matches_generator_assembly() {
        let i = unit_interval().shared();
        let (t, sym) = tensor_power_symmetric(&i, 3);
        for p in Perm::all(3) {
            let direct = signed_permutation_action(&t, &p).unwrap();
            let assembled = sym.action(&p).unwrap();
            assert!(direct.eq_blocks(&assembled), "mismatch at {:?}", p);
        }
    }

    #[test]
    fn empty_unordered_tensor_is_unit() {
        let u = unordered_tensor(&FiniteSetObj::empty(), |_| unreachable!());
        assert_eq!(u.tensor.complex.total_rank(), 1);
        assert_eq!(u.tensor.complex.rank(0), 1);
    }
}
