use std::collections::BTreeMap;
use std::sync::Arc;

use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::sign::koszul_sign;
use crate::tensor::{tensor_many, TensorComplex};
use crate::{ChainComplex, ChainMap, Error};

/// Internal hom complex. A degree-`k` basis element is the elementary map
/// sending one source generator (degree `d`) to one target generator
/// (degree `d + k`); the boundary is `f o d - (-1)^{|f|} d o f`.
#[derive(Clone)]
pub struct HomComplex {
    pub complex: Arc<ChainComplex>,
    pub source: Arc<ChainComplex>,
    pub target: Arc<ChainComplex>,
    /// degree k -> list of (source degree d, source index, target index)
    pairs: BTreeMap<i64, Vec<(i64, usize, usize)>>,
    index: BTreeMap<i64, BTreeMap<(i64, usize, usize), usize>>,
}

impl HomComplex {
    pub fn pairs(&self, k: i64) -> &[(i64, usize, usize)] {
        static EMPTY: &[(i64, usize, usize)] = &[];
        self.pairs.get(&k).map_or(EMPTY, |v| v.as_slice())
    }

    pub fn pair_index(&self, k: i64, pair: (i64, usize, usize)) -> Option<usize> {
        self.index.get(&k)?.get(&pair).copied()
    }

    /// Reconstitute the graded map encoded by a coefficient vector in
    /// degree `k` of the hom complex.
    pub fn element_to_map(&self, k: i64, coeffs: &[BigInt]) -> Result<ChainMap, Error> {
        let basis = self.pairs(k);
        if coeffs.len() != basis.len() {
            return Err(Error::Shape(format!(
                "element of hom degree {}: expected {} coefficients, got {}",
                k,
                basis.len(),
                coeffs.len()
            )));
        }
        let mut f = ChainMap::zero(self.source.clone(), self.target.clone(), k);
        let mut blocks: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
        for (c, (d, i, j)) in coeffs.iter().zip(basis) {
            if c.is_zero() {
                continue;
            }
            let b = blocks.entry(*d).or_insert_with(|| {
                IntegerMatrix::zeros(self.target.rank(d + k), self.source.rank(*d))
            });
            let v = b.get(*j, *i) + c;
            b.set(*j, *i, v);
        }
        for (d, b) in blocks {
            f.set_block(d, b)?;
        }
        Ok(f)
    }

    /// Coordinates of a graded map in the degree-`|f|` hom basis.
    pub fn map_to_element(&self, f: &ChainMap) -> Result<Vec<BigInt>, Error> {
        if *f.source != *self.source || *f.target != *self.target {
            return Err(Error::Shape("map does not live in this hom complex".into()));
        }
        Ok(self
            .pairs(f.degree)
            .iter()
            .map(|(d, i, j)| f.block(*d).get(*j, *i).clone())
            .collect())
    }
}

/// Build `Hom(source, target)` with its mapping-complex differential.
pub fn hom_complex(source: Arc<ChainComplex>, target: Arc<ChainComplex>) -> HomComplex {
    let mut pairs: BTreeMap<i64, Vec<(i64, usize, usize)>> = BTreeMap::new();
    for d in source.degrees() {
        for td in target.degrees() {
            let k = td - d;
            for i in 0..source.rank(d) {
                for j in 0..target.rank(td) {
                    pairs.entry(k).or_default().push((d, i, j));
                }
            }
        }
    }
    let mut index = BTreeMap::new();
    let mut basis: BTreeMap<i64, Vec<String>> = BTreeMap::new();
    for (k, ps) in &pairs {
        let mut m = BTreeMap::new();
        let mut labels = Vec::new();
        for (n, p) in ps.iter().enumerate() {
            m.insert(*p, n);
            labels.push(format!(
                "[{}\u{2192}{}]",
                source.labels(p.0)[p.1],
                target.labels(p.0 + k)[p.2]
            ));
        }
        index.insert(*k, m);
        basis.insert(*k, labels);
    }

    let shell = HomComplex {
        complex: ChainComplex::zero().shared(),
        source,
        target,
        pairs,
        index,
    };

    let mut diff: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for (&k, ps) in &shell.pairs {
        let rows = shell.pairs(k - 1).len();
        if rows == 0 || ps.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ps.len());
        for (col, _) in ps.iter().enumerate() {
            let mut unit = vec![BigInt::zero(); ps.len()];
            unit[col] = BigInt::from(1);
            let f = shell.element_to_map(k, &unit).expect("unit vector fits");
            let df = f.hom_differential();
            for (row, v) in shell.map_to_element(&df).expect("same hom").iter().enumerate() {
                if !v.is_zero() {
                    m.set(row, col, v.clone());
                }
            }
        }
        if !m.is_zero() {
            diff.insert(k, m);
        }
    }
    let complex = ChainComplex::new(basis, diff)
        .expect("hom differential squares to zero")
        .shared();
    HomComplex { complex, ..shell }
}

/// The interchange `Hom(A1,B1) (x) ... (x) Hom(An,Bn) ->
/// Hom(A1 (x) ... (x) An, B1 (x) ... (x) Bn)` with Koszul signs. Injective
/// with unit coefficients, so membership in its image is solvable exactly.
pub struct HomInterchange {
    pub hom_tensor: TensorComplex,
    pub source_tensor: TensorComplex,
    pub target_tensor: TensorComplex,
    pub big_hom: HomComplex,
    pub map: ChainMap,
}

pub fn hom_tensor_interchange(homs: &[&HomComplex]) -> Result<HomInterchange, Error> {
    let hom_tensor = tensor_many(
        &homs
            .iter()
            .map(|h| h.complex.clone())
            .collect::<Vec<_>>(),
    );
    let source_tensor = tensor_many(&homs.iter().map(|h| h.source.clone()).collect::<Vec<_>>());
    let target_tensor = tensor_many(&homs.iter().map(|h| h.target.clone()).collect::<Vec<_>>());
    let big_hom = hom_complex(source_tensor.complex.clone(), target_tensor.complex.clone());

    let mut blocks = BTreeMap::new();
    for k in hom_tensor.complex.degrees() {
        let ts = hom_tensor.tuples(k);
        let rows = big_hom.complex.rank(k);
        if rows == 0 || ts.is_empty() {
            continue;
        }
        let mut m = IntegerMatrix::zeros(rows, ts.len());
        for (col, tup) in ts.iter().enumerate() {
            // tuple entry (k_i, idx_i) names an elementary hom in factor i
            let mut src_tup = Vec::with_capacity(tup.len());
            let mut tgt_tup = Vec::with_capacity(tup.len());
            let mut sign = 1i64;
            let mut prefix = 0i64;
            let mut hom_prefix = 0i64;
            for (slot, (ki, idx)) in tup.iter().enumerate() {
                let (d, i, j) = homs[slot].pairs(*ki)[*idx];
                // Koszul sign of moving f_i past earlier arguments, plus the
                // convention sign forced by `Df = f d - (-1)^{|f|} d f`:
                // each pair of hom factors contributes (-1)^{k_i k_l}.
                sign *= koszul_sign(*ki, prefix) * koszul_sign(*ki, hom_prefix);
                src_tup.push((d, i));
                tgt_tup.push((d + ki, j));
                prefix += d;
                hom_prefix += ki;
            }
            let src_deg: i64 = src_tup.iter().map(|(d, _)| d).sum();
            let si = source_tensor
                .index_of(src_deg, &src_tup)
                .expect("source tuple exists");
            let ti = target_tensor
                .index_of(src_deg + k, &tgt_tup)
                .expect("target tuple exists");
            let row = big_hom
                .pair_index(k, (src_deg, si, ti))
                .expect("big hom pair exists");
            m.set(row, col, BigInt::from(sign));
        }
        blocks.insert(k, m);
    }
    let map = ChainMap::new(
        hom_tensor.complex.clone(),
        big_hom.complex.clone(),
        0,
        blocks,
    )?;
    Ok(HomInterchange {
        hom_tensor,
        source_tensor,
        target_tensor,
        big_hom,
        map,
    })
}
