use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::hom::{hom_complex, HomComplex};
use chain_core::sub_quotient::subcomplex_from_lattices;
use chain_core::{ChainComplex, ChainMap};
use exact_linear::{kernel_basis, solve, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::{Error, Perm, SymmetricComplex};

/// Finitely generated module over the group ring `ZS_n`, presented as a
/// carrier complex with an action plus a lattice of relations per degree.
/// `free_basis` optionally certifies freeness: basis positions whose `S_n`
/// orbit is a unimodular `Z`-basis of the carrier.
#[derive(Clone)]
pub struct GroupRingModule {
    pub carrier: SymmetricComplex,
    pub relations: BTreeMap<i64, IntegerMatrix>,
    pub free_basis: Option<Vec<(i64, usize)>>,
}

impl GroupRingModule {
    pub fn new(
        carrier: SymmetricComplex,
        relations: BTreeMap<i64, IntegerMatrix>,
        free_basis: Option<Vec<(i64, usize)>>,
    ) -> Result<Self, Error> {
        let m = GroupRingModule {
            carrier,
            relations,
            free_basis,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn arity(&self) -> usize {
        self.carrier.arity
    }

    fn validate(&self) -> Result<(), Error> {
        let c = &self.carrier.complex;
        for (d, l) in &self.relations {
            if l.rows() != c.rank(*d) {
                return Err(Error::Shape(format!(
                    "relation lattice at degree {} has wrong row count",
                    d
                )));
            }
            // boundary-closed
            let img = c.differential(*d).mul(l);
            if !img.is_zero() {
                let below = self
                    .relations
                    .get(&(d - 1))
                    .cloned()
                    .unwrap_or_else(|| IntegerMatrix::zeros(c.rank(d - 1), 0));
                if solve(&below, &img).is_none() {
                    return Err(Error::NotClosed(format!(
                        "relations escape under the boundary at degree {}",
                        d
                    )));
                }
            }
            // action-closed
            for g in self.carrier.generators() {
                let img = g.block(*d).mul(l);
                if solve(l, &img).is_none() {
                    return Err(Error::NotClosed(format!(
                        "relations not stable under the action at degree {}",
                        d
                    )));
                }
            }
        }
        if let Some(fb) = &self.free_basis {
            if !self.relations.values().all(|l| l.cols() == 0) {
                return Err(Error::Shape(
                    "free basis certificate requires no relations".into(),
                ));
            }
            self.check_free_basis(fb)?;
        }
        Ok(())
    }

    fn check_free_basis(&self, fb: &[(i64, usize)]) -> Result<(), Error> {
        let c = &self.carrier.complex;
        let perms = Perm::all(self.arity());
        for d in c.degrees() {
            let gens_here: Vec<usize> = fb
                .iter()
                .filter(|(fd, _)| *fd == d)
                .map(|(_, i)| *i)
                .collect();
            let mut cols: Vec<Vec<BigInt>> = Vec::new();
            for p in &perms {
                let a = self
                    .carrier
                    .action(p)
                    .map_err(|e| Error::Shape(e.to_string()))?;
                for &g in &gens_here {
                    cols.push(a.block(d).column(g));
                }
            }
            if cols.len() != c.rank(d) {
                return Err(Error::NotFree(format!(
                    "orbit size {} does not match rank {} in degree {}",
                    cols.len(),
                    c.rank(d),
                    d
                )));
            }
            let m = IntegerMatrix::from_columns(c.rank(d), &cols);
            let s = exact_linear::smith_normal_form(&m);
            if s.rank() != c.rank(d) || s.invariant_factors.iter().any(|f| !f.is_one()) {
                return Err(Error::NotFree(format!(
                    "orbit is not a unimodular basis in degree {}",
                    d
                )));
            }
        }
        Ok(())
    }

    /// The regular representation `ZS_n` in degree 0.
    pub fn free_regular(n: usize) -> Self {
        let perms = Perm::all(n);
        let labels: Vec<String> = perms.iter().map(|p| format!("{:?}", p)).collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let complex = ChainComplex::build(&[(0, &label_refs)], &[])
            .expect("degree-0 complex")
            .shared();
        let index: BTreeMap<&Perm, usize> = perms.iter().zip(0..).collect();
        let gens = (0..n.saturating_sub(1))
            .map(|i| {
                let s = Perm::adjacent(n, i);
                let mut m = IntegerMatrix::zeros(perms.len(), perms.len());
                for (col, p) in perms.iter().enumerate() {
                    let row = index[&s.compose(p)];
                    m.set(row, col, BigInt::one());
                }
                let mut g = ChainMap::zero(complex.clone(), complex.clone(), 0);
                g.set_block(0, m).expect("square block");
                g
            })
            .collect();
        let carrier = SymmetricComplex::new(complex, n, gens).expect("shapes agree");
        let id_pos = perms.iter().position(|p| p.is_identity()).unwrap();
        GroupRingModule {
            carrier,
            relations: BTreeMap::new(),
            free_basis: Some(vec![(0, id_pos)]),
        }
    }

    /// The trivial module `Z` in degree 0 (not free for `n >= 2`).
    pub fn trivial(n: usize) -> Self {
        let complex = ChainComplex::unit().shared();
        let carrier = SymmetricComplex::with_trivial_action(complex, n);
        GroupRingModule {
            carrier,
            relations: BTreeMap::new(),
            free_basis: if n <= 1 { Some(vec![(0, 0)]) } else { None },
        }
    }

    /// Projective module presented by an equivariant idempotent on the
    /// regular representation: the module is `im(e)`, presented as the
    /// carrier modulo the image of `1 - e`.
    pub fn projective_from_idempotent(n: usize, e: &ChainMap) -> Result<Self, Error> {
        let reg = Self::free_regular(n);
        if *e.source != *reg.carrier.complex || *e.target != *reg.carrier.complex || e.degree != 0 {
            return Err(Error::Shape("idempotent must be an endo-map of ZS_n".into()));
        }
        if !e.compose(e).eq_blocks(e) {
            return Err(Error::NotIdempotent);
        }
        for g in reg.carrier.generators() {
            if !e.compose(g).eq_blocks(&g.compose(e)) {
                return Err(Error::NotClosed("idempotent is not equivariant".into()));
            }
        }
        let id = ChainMap::identity(reg.carrier.complex.clone());
        let complement = id.sub(e);
        let mut relations = BTreeMap::new();
        relations.insert(0, complement.block(0));
        GroupRingModule::new(reg.carrier, relations, None)
    }
}

/// The equivariant maps `Hom_{ZS_n}(M, T)` as a subcomplex of the full hom
/// complex, cut out by exact integer linear constraints.
pub struct EquivariantHom {
    pub hom: HomComplex,
    pub complex: Arc<ChainComplex>,
    /// inclusion of the equivariant subcomplex into `hom.complex`
    pub inclusion: ChainMap,
}

impl EquivariantHom {
    /// The `idx`-th basis element of degree `k` as an honest graded map.
    pub fn basis_map(&self, k: i64, idx: usize) -> ChainMap {
        let coords = self.inclusion.block(k).column(idx);
        self.hom
            .element_to_map(k, &coords)
            .expect("inclusion column fits the hom basis")
    }

    pub fn element_to_map(&self, k: i64, coeffs: &[BigInt]) -> Result<ChainMap, Error> {
        let coords = self.inclusion.block(k).apply(coeffs);
        self.hom
            .element_to_map(k, &coords)
            .map_err(|e| Error::Chain(e.to_string()))
    }

    /// Coordinates of an equivariant map in the subcomplex basis, if it
    /// lies in the subcomplex.
    pub fn map_to_element(&self, f: &ChainMap) -> Option<Vec<BigInt>> {
        let k = f.degree;
        let target = self.hom.map_to_element(f).ok()?;
        let b = IntegerMatrix::from_columns(target.len(), &[target]);
        let x = solve(&self.inclusion.block(k), &b)?;
        Some(x.column(0))
    }
}

pub fn equivariant_hom(m: &GroupRingModule, t: &SymmetricComplex) -> Result<EquivariantHom, Error> {
    if m.arity() != t.arity {
        return Err(Error::ArityMismatch(m.arity(), t.arity));
    }
    let hom = hom_complex(m.carrier.complex.clone(), t.complex.clone());
    let mut lattices: BTreeMap<i64, IntegerMatrix> = BTreeMap::new();
    for k in hom.complex.degrees() {
        let n = hom.complex.rank(k);
        let mut constraint_rows: Vec<IntegerMatrix> = Vec::new();
        // equivariance: F o A_i - B_i o F = 0 for each generator
        for (a, b) in m.carrier.generators().iter().zip(t.generators()) {
            let mut cm = IntegerMatrix::zeros(n, n);
            for col in 0..n {
                let mut unit = vec![BigInt::zero(); n];
                unit[col] = BigInt::one();
                let f = hom.element_to_map(k, &unit).expect("unit fits");
                let dv = f.compose(a).sub(&b.compose(&f));
                for (row, v) in hom
                    .map_to_element(&dv)
                    .expect("same hom")
                    .into_iter()
                    .enumerate()
                {
                    if !v.is_zero() {
                        cm.set(row, col, v);
                    }
                }
            }
            constraint_rows.push(cm);
        }
        // relations: F vanishes on the relation lattice
        for (d, l) in &m.relations {
            if l.cols() == 0 {
                continue;
            }
            let out_rank = t.complex.rank(d + k);
            if out_rank == 0 {
                continue;
            }
            let mut cm = IntegerMatrix::zeros(out_rank * l.cols(), n);
            for (col, (pd, pi, pj)) in hom.pairs(k).iter().enumerate() {
                if pd != d {
                    continue;
                }
                for rc in 0..l.cols() {
                    let v = l.get(*pi, rc);
                    if !v.is_zero() {
                        cm.set(rc * out_rank + pj, col, v.clone());
                    }
                }
            }
            constraint_rows.push(cm);
        }
        let full = match constraint_rows.len() {
            0 => IntegerMatrix::zeros(0, n),
            _ => {
                let mut acc = constraint_rows[0].clone();
                for c in &constraint_rows[1..] {
                    acc = acc.vstack(c);
                }
                acc
            }
        };
        let kernel = kernel_basis(&full);
        if kernel.cols() > 0 {
            lattices.insert(k, kernel);
        }
    }
    let (complex, inclusion) = subcomplex_from_lattices(&hom.complex, &lattices)
        .map_err(|e| Error::Chain(e.to_string()))?;
    Ok(EquivariantHom {
        hom,
        complex,
        inclusion,
    })
}
