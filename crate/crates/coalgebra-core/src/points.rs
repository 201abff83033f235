use std::collections::BTreeMap;

use chain_core::sub_quotient::{quotient_by_lattice, subcomplex_from_lattices};
use chain_core::tensor::{map_tensor_into, tensor_power};
use exact_linear::{saturate_lattice, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::coalgebra::OperadCoalgebra;
use crate::Error;

/// All group-like elements of the coalgebra with coordinates in the box
/// `[-bound, bound]` over the degree-0 basis: elements whose every structure
/// value is the augmentation times the diagonal power. The defining
/// equations are polynomial, so this is a bounded search; boxes over two
/// million candidates are rejected.
pub fn group_like_elements(x: &OperadCoalgebra, bound: i64) -> Result<Vec<Vec<BigInt>>, Error> {
    let op = &x.operad;
    for n in 1..=op.max_arity {
        if op.augmentation(n).is_none() {
            return Err(Error::Unsupported(format!(
                "group-like elements need an augmentation at arity {}",
                n
            )));
        }
    }
    let r = x.carrier.rank(0);
    let width = 2 * bound as u128 + 1;
    let candidates = width.checked_pow(r as u32).ok_or(Error::SearchTooLarge(u128::MAX))?;
    if candidates > 2_000_000 {
        return Err(Error::SearchTooLarge(candidates));
    }

    // structure and augmentation matrices at degree 0, once
    let mut data: BTreeMap<usize, (Vec<IntegerMatrix>, Vec<BigInt>)> = BTreeMap::new();
    for n in 1..=op.max_arity {
        let mats: Vec<IntegerMatrix> = x.structure[&n].iter().map(|f| f.block(0)).collect();
        let aug = op.augmentation(n).expect("checked above").block(0);
        let augs: Vec<BigInt> = (0..mats.len()).map(|i| aug.get(0, i).clone()).collect();
        data.insert(n, (mats, augs));
    }

    let diagonal = |c: &[BigInt], n: usize| -> Vec<BigInt> {
        let pw = &x.powers[&n];
        let mut out = vec![BigInt::zero(); pw.complex.rank(0)];
        let mut stack: Vec<(Vec<(i64, usize)>, BigInt)> = vec![(Vec::new(), BigInt::from(1))];
        for _ in 0..n {
            let mut next = Vec::new();
            for (t, e) in &stack {
                for (j, cj) in c.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    let mut t2 = t.clone();
                    t2.push((0, j));
                    next.push((t2, e * cj));
                }
            }
            stack = next;
        }
        for (t, e) in stack {
            if let Some(idx) = pw.index_of(0, &t) {
                out[idx] += e;
            }
        }
        out
    };

    let mut found = Vec::new();
    let mut counter = vec![-bound; r];
    loop {
        let c: Vec<BigInt> = counter.iter().map(|&v| BigInt::from(v)).collect();
        if counter.iter().any(|&v| v != 0) {
            let mut ok = true;
            'outer: for n in 1..=op.max_arity {
                let (mats, augs) = &data[&n];
                let diag = diagonal(&c, n);
                for (mat, a) in mats.iter().zip(augs) {
                    let lhs = mat.apply(&c);
                    for (l, d) in lhs.iter().zip(&diag) {
                        if *l != a * d {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
            }
            if ok {
                found.push(c);
            }
        }
        // odometer over the box
        let mut i = 0;
        loop {
            if i == r {
                return Ok(found);
            }
            counter[i] += 1;
            if counter[i] <= bound {
                break;
            }
            counter[i] = -bound;
            i += 1;
        }
    }
}

/// Is the summand spanned by the given per-degree column lattices a coideal:
/// does projecting every structure value to the tensor powers of the
/// quotient kill it?
pub fn is_coideal(
    x: &OperadCoalgebra,
    lattices: &BTreeMap<i64, IntegerMatrix>,
) -> Result<bool, Error> {
    let saturated: BTreeMap<i64, IntegerMatrix> = lattices
        .iter()
        .map(|(d, l)| (*d, saturate_lattice(l)))
        .collect();
    let (_, incl) = subcomplex_from_lattices(&x.carrier, &saturated)?;
    let (quot, proj, _) = quotient_by_lattice(&x.carrier, &saturated)?;
    for n in 1..=x.operad.max_arity {
        let qpow = tensor_power(&quot, n);
        let ppow = map_tensor_into(&x.powers[&n], &qpow, &vec![&proj; n])?;
        for f in &x.structure[&n] {
            if !ppow.compose(f).compose(&incl).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
