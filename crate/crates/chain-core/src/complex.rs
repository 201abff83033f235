use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::{homology_group, HomologyGroup, IntegerMatrix};

use crate::Error;

/// Bounded chain complex of finitely generated free abelian groups, with a
/// named basis in each degree. `diff[d]` maps degree `d` to degree `d - 1`
/// and has `rank(d - 1)` rows and `rank(d)` columns.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainComplex {
    basis: BTreeMap<i64, Vec<String>>,
    diff: BTreeMap<i64, IntegerMatrix>,
}

impl ChainComplex {
    pub fn new(
        basis: BTreeMap<i64, Vec<String>>,
        diff: BTreeMap<i64, IntegerMatrix>,
    ) -> Result<Self, Error> {
        let basis: BTreeMap<i64, Vec<String>> =
            basis.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let c = ChainComplex { basis, diff };
        c.validate()?;
        Ok(c)
    }

    /// Complex with no generators at all.
    pub fn zero() -> Self {
        ChainComplex {
            basis: BTreeMap::new(),
            diff: BTreeMap::new(),
        }
    }

    /// One generator named `1` in degree 0, zero differential.
    pub fn unit() -> Self {
        let mut basis = BTreeMap::new();
        basis.insert(0, vec!["1".to_string()]);
        ChainComplex {
            basis,
            diff: BTreeMap::new(),
        }
    }

    /// Convenience constructor from literal data.
    pub fn build(degrees: &[(i64, &[&str])], diffs: &[(i64, IntegerMatrix)]) -> Result<Self, Error> {
        let basis = degrees
            .iter()
            .map(|(d, ls)| (*d, ls.iter().map(|s| s.to_string()).collect()))
            .collect();
        let diff = diffs.iter().map(|(d, m)| (*d, m.clone())).collect();
        Self::new(basis, diff)
    }

    fn validate(&self) -> Result<(), Error> {
        for (d, m) in &self.diff {
            if m.rows() != self.rank(d - 1) || m.cols() != self.rank(*d) {
                return Err(Error::Shape(format!(
                    "differential at degree {} is {}x{}, expected {}x{}",
                    d,
                    m.rows(),
                    m.cols(),
                    self.rank(d - 1),
                    self.rank(*d)
                )));
            }
        }
        for d in self.degrees() {
            let dd = self.differential(d - 1).mul(&self.differential(d));
            if !dd.is_zero() {
                return Err(Error::NotAComplex(d));
            }
        }
        Ok(())
    }

    pub fn rank(&self, d: i64) -> usize {
        self.basis.get(&d).map_or(0, |v| v.len())
    }

    pub fn total_rank(&self) -> usize {
        self.basis.values().map(|v| v.len()).sum()
    }

    pub fn labels(&self, d: i64) -> &[String] {
        self.basis.get(&d).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of_label(&self, d: i64, label: &str) -> Option<usize> {
        self.labels(d).iter().position(|l| l == label)
    }

    /// Degrees with at least one generator, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        self.basis.keys().copied().collect()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.basis.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.basis.keys().next_back().copied()
    }

    /// The boundary matrix out of degree `d` (zeros when absent).
    pub fn differential(&self, d: i64) -> IntegerMatrix {
        match self.diff.get(&d) {
            Some(m) => m.clone(),
            None => IntegerMatrix::zeros(self.rank(d - 1), self.rank(d)),
        }
    }

    pub fn homology(&self, d: i64) -> HomologyGroup {
        homology_group(&self.differential(d), &self.differential(d + 1))
            .expect("validated complex has composable differentials")
    }

    /// Homology in every degree touched by the support, as a sorted map.
    pub fn all_homology(&self) -> BTreeMap<i64, HomologyGroup> {
        self.degrees()
            .into_iter()
            .map(|d| (d, self.homology(d)))
            .filter(|(_, h)| !h.is_trivial())
            .collect()
    }

    pub fn shared(self) -> Arc<ChainComplex> {
        Arc::new(self)
    }

    /// Same complex with every label passed through `f`.
    pub fn relabel(&self, mut f: impl FnMut(i64, &str) -> String) -> ChainComplex {
        let basis = self
            .basis
            .iter()
            .map(|(d, ls)| (*d, ls.iter().map(|l| f(*d, l)).collect()))
            .collect();
        ChainComplex {
            basis,
            diff: self.diff.clone(),
        }
    }

    /// Same differentials, every degree shifted up by `k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex {
            basis: self.basis.iter().map(|(d, ls)| (d + k, ls.clone())).collect(),
            diff: self.diff.iter().map(|(d, m)| (d + k, m.clone())).collect(),
        }
    }
}

impl std::fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ChainComplex {{")?;
        for (d, ls) in &self.basis {
            writeln!(f, "  deg {}: {:?}", d, ls)?;
        }
        for (d, m) in &self.diff {
            if !m.is_zero() {
                writeln!(f, "  d[{}] = {:?}", d, m)?;
            }
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_square() {
        let m1 = IntegerMatrix::from_rows(&[vec![1]]);
        let c = ChainComplex::build(&[(0, &["a"]), (1, &["b"]), (2, &["c"])], &[(1, m1.clone()), (2, m1)]);
        assert!(matches!(c, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn unit_homology() {
        let u = ChainComplex::unit();
        assert_eq!(u.homology(0), HomologyGroup::free(1));
        assert_eq!(u.homology(1), HomologyGroup::free(0));
    }

    #[test]
    fn shift_moves_degrees() {
        let u = ChainComplex::unit().shift(3);
        assert_eq!(u.rank(3), 1);
        assert_eq!(u.rank(0), 0);
    }
}
