use std::collections::BTreeMap;

use chain_core::tensor::map_tensor_into;
use chain_core::ChainMap;
use exact_linear::{kernel_basis, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use operad_core::OperadMorphism;

use crate::coalgebra::{CoalgebraMorphism, OperadCoalgebra};
use crate::cofree::{CofreeVariant, TruncatedCofree};
use crate::Error;

/// The classifying morphism of `f` into the cofree coalgebra: the arity-`n`
/// component of the image of `c` is the equivariant map `v -> f^n(a_v(c))`.
pub fn classifying_map(
    d: &OperadCoalgebra,
    f: &ChainMap,
    w: &TruncatedCofree,
) -> Result<CoalgebraMorphism, Error> {
    if w.variant != CofreeVariant::General {
        return Err(Error::Unsupported(
            "classifying maps target the general variant".into(),
        ));
    }
    if d.operad.max_arity != w.operad.max_arity {
        return Err(Error::Shape("truncation bounds differ".into()));
    }
    if f.degree != 0 || *f.source != *d.carrier || *f.target != *w.cogenerators {
        return Err(Error::Shape(
            "the cogeneration map must be a degree-0 map from the carrier".into(),
        ));
    }
    let nmax = d.operad.max_arity;

    // f^n composed with the evaluated structure maps, per arity
    let mut composed: BTreeMap<usize, Vec<ChainMap>> = BTreeMap::new();
    for n in 1..=nmax {
        let fpow = map_tensor_into(&d.powers[&n], &w.c_powers[&n], &vec![f; n])?;
        composed.insert(
            n,
            d.structure[&n].iter().map(|a| fpow.compose(a)).collect(),
        );
    }

    let mut blocks = BTreeMap::new();
    for dd in d.carrier.degrees() {
        let cols = d.carrier.rank(dd);
        let rows = w.carrier.rank(dd);
        let mut m = IntegerMatrix::zeros(rows, cols);
        for n in 1..=nmax {
            let rn = d.structure[&n].len();
            if rn == 0 || w.factors[&n].complex.rank(dd) == 0 {
                continue;
            }
            let prank = w.c_powers[&n].complex.rank(dd);
            for cidx in 0..cols {
                let mut hom = IntegerMatrix::zeros(prank, rn);
                for iv in 0..rn {
                    let v = composed[&n][iv].block(dd).column(cidx);
                    for (r, e) in v.iter().enumerate() {
                        if !e.is_zero() {
                            hom.set(r, iv, e.clone());
                        }
                    }
                }
                let graded = ChainMap::new(
                    d.operad.component(n)?.complex.clone(),
                    w.c_powers[&n].complex.clone(),
                    dd,
                    BTreeMap::from([(0, hom)]),
                )?;
                let coords = w.factors[&n].map_to_element(&graded).ok_or_else(|| {
                    Error::Solve(format!("arity-{} component is not equivariant", n))
                })?;
                // carrier coordinates carry the alternating hom sign
                for (j, e) in coords.iter().enumerate() {
                    if !e.is_zero() {
                        m.set(w.slot(n, dd, j), cidx, e * crate::cofree::hom_sign(dd));
                    }
                }
            }
        }
        blocks.insert(dd, m);
    }
    let map = ChainMap::new(d.carrier.clone(), w.carrier.clone(), 0, blocks)?;
    Ok(CoalgebraMorphism { map })
}

/// The linear system every coalgebra morphism lifting `f` must satisfy:
/// chain-map equations, the counit triangle, and the evaluation equations
/// against every component basis vector. True when it pins the morphism
/// down, i.e. the homogeneous system has only the zero solution.
pub fn classifying_is_unique(d: &OperadCoalgebra, w: &TruncatedCofree) -> Result<bool, Error> {
    let degrees = d.carrier.degrees();
    // unknown layout: one column per (degree, target row, source column)
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut total = 0usize;
    for &dd in &degrees {
        offsets.insert(dd, total);
        total += w.carrier.rank(dd) * d.carrier.rank(dd);
    }
    let unknown = |dd: i64, wr: usize, dc: usize| -> Option<usize> {
        let off = offsets.get(&dd)?;
        Some(off + wr * d.carrier.rank(dd) + dc)
    };

    let mut rows: Vec<Vec<(usize, BigInt)>> = Vec::new();
    // chain-map equations
    for &dd in &degrees {
        let dw = w.carrier.differential(dd);
        let dd_mat = d.carrier.differential(dd);
        for r in 0..w.carrier.rank(dd - 1) {
            for dc in 0..d.carrier.rank(dd) {
                let mut row = Vec::new();
                for wr in 0..w.carrier.rank(dd) {
                    let e = dw.get(r, wr);
                    if !e.is_zero() {
                        if let Some(u) = unknown(dd, wr, dc) {
                            row.push((u, e.clone()));
                        }
                    }
                }
                for dc2 in 0..d.carrier.rank(dd - 1) {
                    let e = dd_mat.get(dc2, dc);
                    if !e.is_zero() {
                        if let Some(u) = unknown(dd - 1, r, dc2) {
                            row.push((u, -e.clone()));
                        }
                    }
                }
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
    }
    // counit and evaluation equations share the shape "post-compose a fixed
    // map out of the carrier of the cofree object"
    let mut post: Vec<ChainMap> = vec![w.counit.clone()];
    for n in 1..=d.operad.max_arity {
        let rn = d.operad.component(n)?.complex.rank(0);
        for iv in 0..rn {
            let mut coeffs = vec![BigInt::zero(); rn];
            coeffs[iv] = BigInt::one();
            post.push(w.evaluation_map(n, &coeffs)?);
        }
    }
    for p in &post {
        for &dd in &degrees {
            let b = p.block(dd);
            for r in 0..b.rows() {
                for dc in 0..d.carrier.rank(dd) {
                    let mut row = Vec::new();
                    for wr in 0..w.carrier.rank(dd) {
                        let e = b.get(r, wr);
                        if !e.is_zero() {
                            if let Some(u) = unknown(dd, wr, dc) {
                                row.push((u, e.clone()));
                            }
                        }
                    }
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
        }
    }

    let mut a = IntegerMatrix::zeros(rows.len(), total);
    for (r, row) in rows.iter().enumerate() {
        for (u, e) in row {
            let v = a.get(r, *u) + e;
            a.set(r, *u, v);
        }
    }
    Ok(kernel_basis(&a).cols() == 0)
}

/// The functorial map between cofree coalgebras over the same operad
/// induced by a map of cogenerating complexes: post-compose every hom
/// factor with the tensor power of `f`.
pub fn induced_map(
    ws: &TruncatedCofree,
    wt: &TruncatedCofree,
    f: &ChainMap,
) -> Result<CoalgebraMorphism, Error> {
    if ws.operad.max_arity != wt.operad.max_arity || ws.variant != wt.variant {
        return Err(Error::Shape("cofree shapes differ".into()));
    }
    if f.degree != 0 || *f.source != *ws.cogenerators || *f.target != *wt.cogenerators {
        return Err(Error::Shape("need a degree-0 map between the cogenerators".into()));
    }
    let nmax = ws.operad.max_arity;
    let mut blocks = BTreeMap::new();
    for dd in ws.carrier.degrees() {
        blocks.insert(
            dd,
            IntegerMatrix::zeros(wt.carrier.rank(dd), ws.carrier.rank(dd)),
        );
    }
    if let (Some(bs), Some(bt)) = (&ws.base_inclusion, &wt.base_inclusion) {
        let src = ws.slot_of(bs);
        let dst = wt.slot_of(bt);
        blocks.get_mut(&0).expect("degree 0").set(dst, src, BigInt::one());
    }
    for n in 1..=nmax {
        let fpow = map_tensor_into(&ws.c_powers[&n], &wt.c_powers[&n], &vec![f; n])?;
        for dd in ws.factors[&n].complex.degrees() {
            for j in 0..ws.factors[&n].complex.rank(dd) {
                let moved = fpow.compose(&ws.factors[&n].basis_map(dd, j));
                let coords = wt.factors[&n].map_to_element(&moved).ok_or_else(|| {
                    Error::Solve(format!("image at arity {} is not equivariant", n))
                })?;
                let src = ws.slot(n, dd, j);
                let b = blocks.get_mut(&dd).expect("degree present");
                for (k, e) in coords.iter().enumerate() {
                    if !e.is_zero() {
                        b.set(wt.slot(n, dd, k), src, e.clone());
                    }
                }
            }
        }
    }
    let map = ChainMap::new(ws.carrier.clone(), wt.carrier.clone(), 0, blocks)?;
    Ok(CoalgebraMorphism { map })
}

/// Pullback along an operad morphism `phi: U -> V`: a cofree coalgebra over
/// `V` becomes one over `U` by pre-composing every hom factor with `phi`.
pub fn pullback_map(
    wv: &TruncatedCofree,
    wu: &TruncatedCofree,
    phi: &OperadMorphism,
) -> Result<CoalgebraMorphism, Error> {
    if wv.operad.max_arity != wu.operad.max_arity || wv.variant != wu.variant {
        return Err(Error::Shape("cofree shapes differ".into()));
    }
    if *wv.cogenerators != *wu.cogenerators {
        return Err(Error::Shape("cogenerators differ".into()));
    }
    let nmax = wv.operad.max_arity;
    let mut blocks = BTreeMap::new();
    for dd in wv.carrier.degrees() {
        blocks.insert(
            dd,
            IntegerMatrix::zeros(wu.carrier.rank(dd), wv.carrier.rank(dd)),
        );
    }
    if let (Some(bv), Some(bu)) = (&wv.base_inclusion, &wu.base_inclusion) {
        let src = wv.slot_of(bv);
        let dst = wu.slot_of(bu);
        blocks.get_mut(&0).expect("degree 0").set(dst, src, BigInt::one());
    }
    for n in 1..=nmax {
        let phi_n = phi
            .maps
            .get(&n)
            .ok_or_else(|| Error::Shape(format!("morphism misses arity {}", n)))?;
        for dd in wv.factors[&n].complex.degrees() {
            for j in 0..wv.factors[&n].complex.rank(dd) {
                let wmap = wv.factors[&n].basis_map(dd, j);
                let pulled = ChainMap::new(
                    wu.operad.component(n)?.complex.clone(),
                    wv.c_powers[&n].complex.clone(),
                    dd,
                    BTreeMap::from([(0, wmap.block(0).mul(&phi_n.block(0)))]),
                )?;
                let coords = wu.factors[&n].map_to_element(&pulled).ok_or_else(|| {
                    Error::Solve(format!("pullback at arity {} is not equivariant", n))
                })?;
                let src = wv.slot(n, dd, j);
                let b = blocks.get_mut(&dd).expect("degree present");
                for (k, e) in coords.iter().enumerate() {
                    if !e.is_zero() {
                        b.set(wu.slot(n, dd, k), src, e.clone());
                    }
                }
            }
        }
    }
    let map = ChainMap::new(wv.carrier.clone(), wu.carrier.clone(), 0, blocks)?;
    Ok(CoalgebraMorphism { map })
}
