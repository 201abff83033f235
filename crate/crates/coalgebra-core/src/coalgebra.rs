use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::tensor::{map_tensor_into, splice_map, tensor_many, tensor_power, TensorComplex};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use operad_core::TruncatedOperad;
use setf_sym::tensor_power_symmetric;

use crate::Error;

/// Coalgebra over a truncated operad whose components are concentrated in
/// degree 0: the structure morphism into the coendomorphism operad is stored
/// evaluated, one chain map `carrier -> carrier^n` per degree-0 basis vector
/// of each component.
pub struct OperadCoalgebra {
    pub operad: Arc<TruncatedOperad>,
    pub carrier: Arc<ChainComplex>,
    pub powers: BTreeMap<usize, TensorComplex>,
    pub structure: BTreeMap<usize, Vec<ChainMap>>,
}

/// A degree-0 chain map between carriers commuting with the structure maps.
pub struct CoalgebraMorphism {
    pub map: ChainMap,
}

pub(crate) fn require_degree_zero(operad: &TruncatedOperad) -> Result<(), Error> {
    for n in 1..=operad.max_arity {
        let c = &operad.component(n)?.complex;
        if c.degrees().iter().any(|&d| d != 0 && c.rank(d) > 0) {
            return Err(Error::Unsupported(format!(
                "arity-{} component is not concentrated in degree 0",
                n
            )));
        }
    }
    Ok(())
}

/// The canonical isomorphism `C -> C^1` onto the first tensor power.
pub(crate) fn power_one_iso(c: &Arc<ChainComplex>, power: &TensorComplex) -> ChainMap {
    let mut blocks = BTreeMap::new();
    for d in c.degrees() {
        let mut b = IntegerMatrix::zeros(power.complex.rank(d), c.rank(d));
        for i in 0..c.rank(d) {
            let row = power.index_of(d, &vec![(d, i)]).expect("power tuple");
            b.set(row, i, BigInt::from(1));
        }
        blocks.insert(d, b);
    }
    ChainMap::new(c.clone(), power.complex.clone(), 0, blocks).expect("iso shape")
}

impl OperadCoalgebra {
    pub fn new(
        operad: Arc<TruncatedOperad>,
        carrier: Arc<ChainComplex>,
        structure: BTreeMap<usize, Vec<ChainMap>>,
    ) -> Result<Self, Error> {
        require_degree_zero(&operad)?;
        let mut powers = BTreeMap::new();
        for n in 1..=operad.max_arity {
            powers.insert(n, tensor_power(&carrier, n));
        }
        for n in 1..=operad.max_arity {
            let rank = operad.component(n)?.complex.rank(0);
            let maps = structure
                .get(&n)
                .ok_or_else(|| Error::Shape(format!("no structure maps at arity {}", n)))?;
            if maps.len() != rank {
                return Err(Error::Shape(format!(
                    "arity {} has {} structure maps for rank {}",
                    n,
                    maps.len(),
                    rank
                )));
            }
            for f in maps {
                if *f.source != *carrier || *f.target != *powers[&n].complex || f.degree != 0 {
                    return Err(Error::Shape(format!(
                        "structure map at arity {} has the wrong shape",
                        n
                    )));
                }
            }
        }
        Ok(OperadCoalgebra {
            operad,
            carrier,
            powers,
            structure,
        })
    }

    /// The evaluated structure map at an arbitrary degree-0 element of the
    /// arity-`n` component.
    pub fn structure_map(&self, n: usize, coeffs: &[BigInt]) -> Result<ChainMap, Error> {
        let maps = self
            .structure
            .get(&n)
            .ok_or_else(|| Error::Shape(format!("no structure maps at arity {}", n)))?;
        if coeffs.len() != maps.len() {
            return Err(Error::Shape("coefficient length mismatch".into()));
        }
        let mut acc = ChainMap::zero(self.carrier.clone(), self.powers[&n].complex.clone(), 0);
        for (c, f) in coeffs.iter().zip(maps) {
            if !c.is_zero() {
                acc = acc.add(&f.scale(c));
            }
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone)]
pub struct CoalgebraViolation {
    pub law: String,
    pub witness: String,
}

#[derive(Debug, Default)]
pub struct CoalgebraReport {
    pub violations: Vec<CoalgebraViolation>,
    pub checks: usize,
}

impl CoalgebraReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, law: &str, witness: String) {
        self.checks += 1;
        if !ok {
            self.violations.push(CoalgebraViolation {
                law: law.to_string(),
                witness,
            });
        }
    }
}

/// Check that the evaluated structure maps define an operad morphism into
/// the coendomorphism operad of the carrier: chain maps, equivariance with
/// respect to the signed factor permutations, the unit law, and
/// compatibility with every partial composition within truncation.
pub fn validate_coalgebra(x: &OperadCoalgebra) -> Result<CoalgebraReport, Error> {
    let op = &x.operad;
    let mut report = CoalgebraReport::default();

    for (n, maps) in &x.structure {
        for (i, f) in maps.iter().enumerate() {
            report.record(
                f.is_chain_map(),
                "chain map",
                format!("arity {} basis {}", n, i),
            );
        }
    }

    // equivariance against the adjacent transpositions generating S_n
    for n in 1..=op.max_arity {
        let comp = op.component(n)?;
        let (_, sym) = tensor_power_symmetric(&x.carrier, n);
        for i in 0..n.saturating_sub(1) {
            let act = comp.generator(i).block(0);
            let post = sym.generator(i);
            for iv in 0..comp.complex.rank(0) {
                let lhs = x.structure_map(n, &act.column(iv))?;
                let rhs = post.compose(&x.structure[&n][iv]);
                report.record(
                    lhs.eq_blocks(&rhs),
                    "equivariance",
                    format!("arity {} generator {} basis {}", n, i, iv),
                );
            }
        }
    }

    if op.unital {
        let unit = op.unit();
        let lhs = x.structure_map(1, &unit.coeffs)?;
        let iso = power_one_iso(&x.carrier, &x.powers[&1]);
        report.record(lhs.eq_blocks(&iso), "unit", "structure of the unit".into());
    }

    // compatibility with partial composition: evaluate-by-insertion
    let id = ChainMap::identity(x.carrier.clone());
    for m in 1..=op.max_arity {
        for n in 1..=op.max_arity {
            if m + n - 1 > op.max_arity {
                continue;
            }
            let out = m + n - 1;
            let rm = op.component(m)?.complex.rank(0);
            let rn = op.component(n)?.complex.rank(0);
            for slot in 0..m {
                let mid_factors: Vec<Arc<ChainComplex>> = (0..m)
                    .map(|s| {
                        if s == slot {
                            x.powers[&n].complex.clone()
                        } else {
                            x.carrier.clone()
                        }
                    })
                    .collect();
                let mid = tensor_many(&mid_factors);
                let flat = splice_map(&mid, slot, &x.powers[&n], &x.powers[&out])?;
                for iv in 0..rm {
                    for iu in 0..rn {
                        let a = op.basis_element(m, 0, iv);
                        let b = op.basis_element(n, 0, iu);
                        let c = op.compose(&a, slot, &b)?;
                        let lhs = x.structure_map(out, &c.coeffs)?;
                        let maps: Vec<&ChainMap> = (0..m)
                            .map(|s| if s == slot { &x.structure[&n][iu] } else { &id })
                            .collect();
                        let ins = map_tensor_into(&x.powers[&m], &mid, &maps)?;
                        let rhs = flat.compose(&ins).compose(&x.structure[&m][iv]);
                        report.record(
                            lhs.eq_blocks(&rhs),
                            "composition",
                            format!("({} o_{} {}) at ({}, {})", m, slot, n, iv, iu),
                        );
                    }
                }
            }
        }
    }

    Ok(report)
}

/// Check that `g` is a coalgebra morphism from `x` to `y`: a degree-0 chain
/// map between the carriers intertwining every structure map.
pub fn check_coalgebra_morphism(
    x: &OperadCoalgebra,
    y: &OperadCoalgebra,
    g: &ChainMap,
) -> Result<CoalgebraReport, Error> {
    if x.operad.max_arity != y.operad.max_arity {
        return Err(Error::Shape("truncation bounds differ".into()));
    }
    let mut report = CoalgebraReport::default();
    report.record(
        g.degree == 0 && *g.source == *x.carrier && *g.target == *y.carrier,
        "shape",
        "degree-0 map between the carriers".into(),
    );
    report.record(g.is_chain_map(), "chain map", "the morphism itself".into());
    for n in 1..=x.operad.max_arity {
        if x.structure[&n].len() != y.structure[&n].len() {
            return Err(Error::Shape(format!("component ranks differ at arity {}", n)));
        }
        let gpow = map_tensor_into(&x.powers[&n], &y.powers[&n], &vec![g; n])?;
        for iv in 0..x.structure[&n].len() {
            let lhs = y.structure[&n][iv].compose(g);
            let rhs = gpow.compose(&x.structure[&n][iv]);
            report.record(
                lhs.eq_blocks(&rhs),
                "intertwines structure",
                format!("arity {} basis {}", n, iv),
            );
        }
    }
    Ok(report)
}
