use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::IntegerMatrix;
use num_bigint::BigInt;

use crate::{ChainComplex, Error};

/// Graded map of complexes of degree `degree`: the block at degree `d` sends
/// source degree `d` to target degree `d + degree`.
#[derive(Clone)]
pub struct ChainMap {
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    pub degree: i64,
    blocks: BTreeMap<i64, IntegerMatrix>,
}

impl ChainMap {
    pub fn new(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        degree: i64,
        blocks: BTreeMap<i64, IntegerMatrix>,
    ) -> Result<Self, Error> {
        for (d, m) in &blocks {
            let want_rows = target.rank(d + degree);
            let want_cols = source.rank(*d);
            if m.rows() != want_rows || m.cols() != want_cols {
                return Err(Error::Shape(format!(
                    "map block at degree {} is {}x{}, expected {}x{}",
                    d,
                    m.rows(),
                    m.cols(),
                    want_rows,
                    want_cols
                )));
            }
        }
        Ok(ChainMap {
            source,
            target,
            degree,
            blocks,
        })
    }

    pub fn zero(source: Arc<ChainComplex>, target: Arc<ChainComplex>, degree: i64) -> Self {
        ChainMap {
            source,
            target,
            degree,
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(c: Arc<ChainComplex>) -> Self {
        let blocks = c
            .degrees()
            .into_iter()
            .map(|d| (d, IntegerMatrix::identity(c.rank(d))))
            .collect();
        ChainMap {
            source: c.clone(),
            target: c,
            degree: 0,
            blocks,
        }
    }

    /// Build blocks degree by degree from a closure.
    pub fn from_fn(
        source: Arc<ChainComplex>,
        target: Arc<ChainComplex>,
        degree: i64,
        mut f: impl FnMut(i64) -> IntegerMatrix,
    ) -> Result<Self, Error> {
        let blocks = source.degrees().into_iter().map(|d| (d, f(d))).collect();
        Self::new(source, target, degree, blocks)
    }

    pub fn block(&self, d: i64) -> IntegerMatrix {
        match self.blocks.get(&d) {
            Some(m) => m.clone(),
            None => IntegerMatrix::zeros(self.target.rank(d + self.degree), self.source.rank(d)),
        }
    }

    pub fn set_block(&mut self, d: i64, m: IntegerMatrix) -> Result<(), Error> {
        if m.rows() != self.target.rank(d + self.degree) || m.cols() != self.source.rank(d) {
            return Err(Error::Shape(format!("bad block shape at degree {}", d)));
        }
        self.blocks.insert(d, m);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|m| m.is_zero())
    }

    pub fn apply(&self, d: i64, v: &[BigInt]) -> Vec<BigInt> {
        self.block(d).apply(v)
    }

    /// Boundary in the mapping complex:
    /// `(Df) = f o d_src - (-1)^{|f|} d_tgt o f`, a map of degree `|f| - 1`.
    pub fn hom_differential(&self) -> ChainMap {
        let sign = if self.degree.rem_euclid(2) == 1 { -1 } else { 1 };
        let mut blocks = BTreeMap::new();
        let mut degs = self.source.degrees();
        for d in self.source.degrees() {
            degs.push(d + 1);
        }
        degs.sort_unstable();
        degs.dedup();
        for d in degs {
            let a = self.block(d - 1).mul(&self.source.differential(d));
            let b = self
                .target
                .differential(d + self.degree)
                .mul(&self.block(d));
            let m = if sign == 1 { a.sub(&b) } else { a.add(&b) };
            if !m.is_zero() {
                blocks.insert(d, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree - 1,
            blocks,
        }
    }

    /// True when the boundary of `self` in the mapping complex vanishes. For
    /// degree 0 this is the usual commuting-square condition.
    pub fn is_chain_map(&self) -> bool {
        self.hom_differential().is_zero()
    }

    /// `self o other`, degrees add, no extra sign.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        assert!(
            *self.source == *other.target,
            "compose: inner complexes disagree"
        );
        let mut blocks = BTreeMap::new();
        for d in other.source.degrees() {
            let m = self.block(d + other.degree).mul(&other.block(d));
            if !m.is_zero() {
                blocks.insert(d, m);
            }
        }
        ChainMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            blocks,
        }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        assert!(*self.source == *other.source && *self.target == *other.target);
        assert_eq!(self.degree, other.degree);
        let mut blocks = BTreeMap::new();
        for d in self.source.degrees() {
            let m = self.block(d).add(&other.block(d));
            if !m.is_zero() {
                blocks.insert(d, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks,
        }
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> ChainMap {
        let blocks = self
            .blocks
            .iter()
            .map(|(d, m)| (*d, m.scale(c)))
            .collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            blocks,
        }
    }

    pub fn eq_blocks(&self, other: &ChainMap) -> bool {
        if self.degree != other.degree {
            return false;
        }
        let mut degs = self.source.degrees();
        degs.extend(other.source.degrees());
        degs.sort_unstable();
        degs.dedup();
        degs.into_iter().all(|d| self.block(d) == other.block(d))
    }
}

impl std::fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ChainMap(degree {}) {{", self.degree)?;
        for (d, m) in &self.blocks {
            if !m.is_zero() {
                writeln!(f, "  at {}: {:?}", d, m)?;
            }
        }
        write!(f, "}}")
    }
}

/// Degree `+1` map `phi` with `d o phi + phi o d = f1 - f0`.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub phi: ChainMap,
}

impl Homotopy {
    pub fn new(phi: ChainMap) -> Result<Self, Error> {
        if phi.degree != 1 {
            return Err(Error::Shape(format!(
                "homotopy must have degree 1, got {}",
                phi.degree
            )));
        }
        Ok(Homotopy { phi })
    }

    pub fn connects(&self, f0: &ChainMap, f1: &ChainMap) -> bool {
        self.phi.hom_differential().eq_blocks(&f1.sub(f0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term() -> Arc<ChainComplex> {
        // x in degree 1, y in degree 0, dx = y.
        ChainComplex::build(
            &[(0, &["y"]), (1, &["x"])],
            &[(1, IntegerMatrix::from_rows(&[vec![1]]))],
        )
        .unwrap()
        .shared()
    }

    #[test]
    fn identity_is_chain_map() {
        let c = two_term();
        assert!(ChainMap::identity(c).is_chain_map());
    }

    #[test]
    fn degree_zero_commutation() {
        let c = two_term();
        // Multiplication by 3 in both degrees commutes with d.
        let f = ChainMap::from_fn(c.clone(), c.clone(), 0, |_| {
            IntegerMatrix::from_rows(&[vec![3]])
        })
        .unwrap();
        assert!(f.is_chain_map());
        // Mismatched scalars do not.
        let mut g = f.clone();
        g.set_block(0, IntegerMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(!g.is_chain_map());
    }

    #[test]
    fn homotopy_between_identity_and_zero() {
        let c = two_term();
        // phi(y) = x contracts the complex: d phi + phi d = id - 0.
        let mut phi = ChainMap::zero(c.clone(), c.clone(), 1);
        phi.set_block(0, IntegerMatrix::from_rows(&[vec![1]])).unwrap();
        let h = Homotopy::new(phi).unwrap();
        let id = ChainMap::identity(c.clone());
        let z = ChainMap::zero(c.clone(), c, 0);
        assert!(h.connects(&z, &id));
        assert!(!h.connects(&id, &z));
    }
}
