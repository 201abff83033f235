use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::sub_quotient::subcomplex_from_lattices;
use chain_core::tensor::{map_tensor_into, tensor_power};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::{kernel_basis, solve, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::One;
use operad_core::{IdealQuotient, TruncatedOperad};

use crate::coalgebra::OperadCoalgebra;
use crate::cofree::{cofree_coalgebra, TruncatedCofree};
use crate::Error;

/// The subcomplex of a cofree carrier annihilated by evaluation against an
/// operadic ideal, with the coalgebra structure it inherits over the
/// quotient operad.
pub struct IdealKernel {
    pub quotient: Arc<TruncatedOperad>,
    pub complex: Arc<ChainComplex>,
    /// inclusion of the kernel into the cofree carrier
    pub inclusion: ChainMap,
    pub coalgebra: OperadCoalgebra,
    /// per-degree rank of the evaluation constraints, for splitting
    /// bookkeeping
    pub evaluation_ranks: BTreeMap<i64, usize>,
}

/// Cut out the elements of the cofree carrier whose evaluations against the
/// ideal vanish, check the structure maps restrict to the cut, and transport
/// them along the projection to the quotient operad.
pub fn ideal_kernel(w: &TruncatedCofree, iq: IdealQuotient) -> Result<IdealKernel, Error> {
    for per_deg in iq.ideal.lattices.values() {
        if per_deg.keys().any(|&d| d != 0) {
            return Err(Error::Unsupported(
                "ideal lattices must live in degree 0".into(),
            ));
        }
    }

    // vanishing constraints: one block of rows per arity with an ideal
    // lattice, one row per (ideal column, tensor power basis vector)
    let mut lattices = BTreeMap::new();
    let mut evaluation_ranks = BTreeMap::new();
    for d in w.carrier.degrees() {
        let cols = w.carrier.rank(d);
        let mut offsets = Vec::new();
        let mut total = 0usize;
        for (&n, per_deg) in &iq.ideal.lattices {
            let Some(l) = per_deg.get(&0) else { continue };
            if l.cols() == 0 {
                continue;
            }
            offsets.push((n, l, total));
            total += l.cols() * w.c_powers[&n].complex.rank(d);
        }
        let mut a = IntegerMatrix::zeros(total, cols);
        for &(n, l, off) in &offsets {
            let prank = w.c_powers[&n].complex.rank(d);
            for j in 0..w.factors[&n].complex.rank(d) {
                let vals = w.factors[&n].basis_map(d, j).block(0).mul(l);
                let col = w.slot(n, d, j);
                for lc in 0..vals.cols() {
                    for r in 0..prank {
                        a.set(off + lc * prank + r, col, vals.get(r, lc).clone());
                    }
                }
            }
        }
        let null = kernel_basis(&a);
        evaluation_ranks.insert(d, cols - null.cols());
        lattices.insert(d, null);
    }
    let (kernel, inclusion) = subcomplex_from_lattices(&w.carrier, &lattices)?;

    // the full structure must kill the kernel against every ideal element;
    // this also makes the lifted structure below independent of the lift
    let xw = cofree_coalgebra(w)?;
    for (&n, per_deg) in &iq.ideal.lattices {
        let Some(l) = per_deg.get(&0) else { continue };
        for lc in 0..l.cols() {
            if !xw.structure_map(n, &l.column(lc))?.compose(&inclusion).is_zero() {
                return Err(Error::NotClosed(format!(
                    "structure of ideal column {} at arity {} does not vanish on the kernel",
                    lc, n
                )));
            }
        }
    }

    // lift each quotient basis vector through the projection, restrict its
    // structure to the kernel, and solve it into kernel tensor coordinates
    let quotient = Arc::new(iq.quotient);
    let mut structure: BTreeMap<usize, Vec<ChainMap>> = BTreeMap::new();
    for n in 1..=quotient.max_arity {
        let kpow = tensor_power(&kernel, n);
        let incn = map_tensor_into(&kpow, &xw.powers[&n], &vec![&inclusion; n])?;
        let projn = iq
            .projection
            .maps
            .get(&n)
            .ok_or_else(|| Error::Shape(format!("projection misses arity {}", n)))?
            .block(0);
        let rq = quotient.component(n)?.complex.rank(0);
        let mut maps = Vec::with_capacity(rq);
        for u in 0..rq {
            let mut e = IntegerMatrix::zeros(rq, 1);
            e.set(u, 0, BigInt::one());
            let lift = solve(&projn, &e)
                .ok_or_else(|| Error::Solve(format!("projection not onto at arity {}", n)))?;
            let restricted = xw.structure_map(n, &lift.column(0))?.compose(&inclusion);
            let mut f = ChainMap::zero(kernel.clone(), kpow.complex.clone(), 0);
            for d in kernel.degrees() {
                let x = solve(&incn.block(d), &restricted.block(d)).ok_or_else(|| {
                    Error::NotClosed(format!(
                        "structure at arity {} leaves the kernel powers in degree {}",
                        n, d
                    ))
                })?;
                f.set_block(d, x)?;
            }
            maps.push(f);
        }
        structure.insert(n, maps);
    }

    let coalgebra = OperadCoalgebra::new(quotient.clone(), kernel.clone(), structure)?;
    Ok(IdealKernel {
        quotient,
        complex: kernel,
        inclusion,
        coalgebra,
        evaluation_ranks,
    })
}
