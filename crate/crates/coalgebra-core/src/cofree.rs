use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::sub_quotient::direct_sum;
use chain_core::tensor::{tensor_power, TensorComplex};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::{smith_normal_form, IntegerMatrix};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use operad_core::{generalized_composition, Slot, TruncatedOperad};
use setf_sym::{equivariant_hom, tensor_power_symmetric, EquivariantHom, GroupRingModule, Perm, SymmetricComplex};

use crate::coalgebra::{require_degree_zero, OperadCoalgebra};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofreeVariant {
    General,
    Pointed,
}

/// The cofree coalgebra over a truncated operad cogenerated by a bounded
/// complex `C`: the carrier is the direct sum over arities of the
/// equivariant hom complexes into the tensor powers of `C`, with the pointed
/// variant adding a rank-one basepoint summand in degree 0. The structure
/// maps are built separately by [`cofree_coalgebra`].
pub struct TruncatedCofree {
    pub operad: Arc<TruncatedOperad>,
    pub cogenerators: Arc<ChainComplex>,
    pub carrier: Arc<ChainComplex>,
    /// projection onto the cogenerators through the arity-1 factor
    pub counit: ChainMap,
    pub variant: CofreeVariant,
    pub factors: BTreeMap<usize, EquivariantHom>,
    pub modules: BTreeMap<usize, GroupRingModule>,
    pub c_powers: BTreeMap<usize, TensorComplex>,
    pub inclusions: BTreeMap<usize, ChainMap>,
    pub projections: BTreeMap<usize, ChainMap>,
    pub base_inclusion: Option<ChainMap>,
}

/// Greedy certificate that the degree-0 permutation module with the given
/// action matrices is free: pick generators whose combined orbit stays a
/// unimodular basis until it exhausts the rank.
fn greedy_free_basis(acts: &[IntegerMatrix], rank: usize) -> Option<Vec<usize>> {
    let fact = acts.len();
    if rank % fact != 0 {
        return None;
    }
    let mut chosen: Vec<usize> = Vec::new();
    for i in 0..rank {
        if chosen.len() * fact == rank {
            break;
        }
        let mut cols = Vec::new();
        for a in acts {
            for &g in chosen.iter().chain(std::iter::once(&i)) {
                cols.push(a.column(g));
            }
        }
        let m = IntegerMatrix::from_columns(rank, &cols);
        let s = smith_normal_form(&m);
        if s.rank() == cols.len() && s.invariant_factors.iter().all(|f| f.is_one()) {
            chosen.push(i);
        }
    }
    if chosen.len() * fact == rank {
        Some(chosen)
    } else {
        None
    }
}

/// All ordered ways to write `total` as a sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

pub fn truncated_cofree(
    operad: &Arc<TruncatedOperad>,
    c: &Arc<ChainComplex>,
    variant: CofreeVariant,
) -> Result<TruncatedCofree, Error> {
    require_degree_zero(operad)?;
    let nmax = operad.max_arity;
    let one = operad.component(1)?;
    if one.complex.rank(0) != 1 {
        return Err(Error::Unsupported(
            "the arity-1 component must have rank one".into(),
        ));
    }
    let u0 = &operad.unit().coeffs[0];
    if u0 * u0 != BigInt::one() {
        return Err(Error::Unsupported("the operad unit must be a basis vector".into()));
    }
    if variant == CofreeVariant::Pointed {
        for n in 1..=nmax {
            if operad.augmentation(n).is_none() {
                return Err(Error::Unsupported(format!(
                    "pointed variant needs an augmentation at arity {}",
                    n
                )));
            }
        }
    }

    // certify freeness of every component and build the hom factors
    let mut modules = BTreeMap::new();
    let mut factors = BTreeMap::new();
    let mut c_powers = BTreeMap::new();
    for n in 1..=nmax {
        let comp = operad.component(n)?;
        let rank = comp.complex.rank(0);
        let mut acts = Vec::new();
        for p in Perm::all(n) {
            acts.push(comp.action(&p)?.block(0));
        }
        let chosen = greedy_free_basis(&acts, rank).ok_or_else(|| {
            Error::NotFree(n, "no generating orbit forms a unimodular basis".into())
        })?;
        let carrier = SymmetricComplex::new(comp.complex.clone(), n, comp.generators().to_vec())?;
        let module = GroupRingModule::new(
            carrier,
            BTreeMap::new(),
            Some(chosen.into_iter().map(|i| (0, i)).collect()),
        )?;
        let (power, sym) = tensor_power_symmetric(c, n);
        factors.insert(n, equivariant_hom(&module, &sym)?);
        modules.insert(n, module);
        c_powers.insert(n, power);
    }

    // carrier: basepoint (pointed only), then the hom factors in arity order
    let mut summands: Vec<Arc<ChainComplex>> = Vec::new();
    if variant == CofreeVariant::Pointed {
        summands.push(ChainComplex::unit().shared());
    }
    for n in 1..=nmax {
        summands.push(factors[&n].complex.clone());
    }
    let (carrier, incls, projs) = direct_sum(&summands)?;
    let shift = if variant == CofreeVariant::Pointed { 1 } else { 0 };
    let base_inclusion = if variant == CofreeVariant::Pointed {
        Some(incls[0].clone())
    } else {
        None
    };
    let inclusions: BTreeMap<usize, ChainMap> =
        (1..=nmax).map(|n| (n, incls[n - 1 + shift].clone())).collect();
    let projections: BTreeMap<usize, ChainMap> =
        (1..=nmax).map(|n| (n, projs[n - 1 + shift].clone())).collect();

    // counit: evaluate the arity-1 factor at the operad unit
    let e1 = &factors[&1];
    let mut eval_blocks = BTreeMap::new();
    for k in e1.complex.degrees() {
        let mut m = IntegerMatrix::zeros(c.rank(k), e1.complex.rank(k));
        for i in 0..e1.complex.rank(k) {
            let v = e1.basis_map(k, i).block(0).apply(&operad.unit().coeffs);
            for (j, e) in v.iter().enumerate() {
                if !e.is_zero() {
                    let (_, ci) = c_powers[&1].tuple_of(k, j)[0];
                    m.set(ci, i, m.get(ci, i) + e * hom_sign(k));
                }
            }
        }
        eval_blocks.insert(k, m);
    }
    let eval = ChainMap::new(e1.complex.clone(), c.clone(), 0, eval_blocks)?;
    let counit = eval.compose(&projections[&1]);

    Ok(TruncatedCofree {
        operad: operad.clone(),
        cogenerators: c.clone(),
        carrier,
        counit,
        variant,
        factors,
        modules,
        c_powers,
        inclusions,
        projections,
        base_inclusion,
    })
}

impl TruncatedCofree {
    /// Position of the `i`-th arity-`n` factor basis vector inside the
    /// carrier at degree `d`.
    pub(crate) fn slot(&self, n: usize, d: i64, i: usize) -> usize {
        let b = self.inclusions[&n].block(d);
        let col = b.column(i);
        col.iter()
            .position(|e| !e.is_zero())
            .expect("inclusion columns are unit vectors")
    }

    /// Position of the basepoint (or any rank-one summand) inside the
    /// carrier at degree 0.
    pub(crate) fn slot_of(&self, inc: &ChainMap) -> usize {
        inc.block(0)
            .column(0)
            .iter()
            .position(|e| !e.is_zero())
            .expect("summand columns are unit vectors")
    }

    /// Evaluation at a degree-0 element of the arity-`n` component: the map
    /// `carrier -> C^n` sending a hom element to its value.
    pub fn evaluation_map(&self, n: usize, coeffs: &[BigInt]) -> Result<ChainMap, Error> {
        let en = &self.factors[&n];
        let pw = &self.c_powers[&n];
        let mut blocks = BTreeMap::new();
        for k in en.complex.degrees() {
            let mut m = IntegerMatrix::zeros(pw.complex.rank(k), en.complex.rank(k));
            for i in 0..en.complex.rank(k) {
                let v = en.basis_map(k, i).block(0).apply(coeffs);
                for (j, e) in v.iter().enumerate() {
                    if !e.is_zero() {
                        m.set(j, i, e * hom_sign(k));
                    }
                }
            }
            blocks.insert(k, m);
        }
        let eval = ChainMap::new(en.complex.clone(), pw.complex.clone(), 0, blocks)?;
        Ok(eval.compose(&self.projections[&n]))
    }
}

/// The hom boundary is `f o d - (-1)^{|f|} d o f`; relative to the plain
/// `d o f` convention the factor differentials alternate, so structure and
/// evaluation data built by pairing must be transported along the diagonal
/// isomorphism `w -> hom_sign(|w|) w`.
pub(crate) fn hom_sign(k: i64) -> i64 {
    // (-1)^{k(k+3)/2}, the product of the degree-wise sign ratios
    if (k * (k + 3) / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn block_entry<'a>(
    blocks: &'a mut [BTreeMap<i64, IntegerMatrix>],
    iv: usize,
    d: i64,
    rows: usize,
    cols: usize,
) -> &'a mut IntegerMatrix {
    blocks[iv]
        .entry(d)
        .or_insert_with(|| IntegerMatrix::zeros(rows, cols))
}

/// Materialize the structure maps of the cofree coalgebra: the component of
/// `alpha(v)` across a tuple of factor arities is the unique integer
/// solution of the evaluation equations `y(u_1, ..., u_m) = w(gamma(v; u_1,
/// ..., u_m))` over all basis operands. Feasible when the carrier is small;
/// the carrier itself never needs this.
pub fn cofree_coalgebra(w: &TruncatedCofree) -> Result<OperadCoalgebra, Error> {
    let op = &w.operad;
    let nmax = op.max_arity;
    let carrier = w.carrier.clone();
    let mut powers = BTreeMap::new();
    for m in 1..=nmax {
        powers.insert(m, tensor_power(&carrier, m));
    }

    let base_slot = w.base_inclusion.as_ref().map(|inc| {
        let col = inc.block(0).column(0);
        col.iter().position(|e| !e.is_zero()).expect("basepoint column")
    });

    let mut structure = BTreeMap::new();
    for m in 1..=nmax {
        let rm = op.component(m)?.complex.rank(0);
        let wp = &powers[&m];
        let mut blocks: Vec<BTreeMap<i64, IntegerMatrix>> = vec![BTreeMap::new(); rm];

        if let Some(bs) = base_slot {
            // the basepoint is group-like up to the augmentation
            let aug = op
                .augmentation(m)
                .ok_or_else(|| Error::Unsupported(format!("no augmentation at arity {}", m)))?
                .block(0);
            let row = wp
                .index_of(0, &vec![(0, bs); m])
                .ok_or_else(|| Error::Shape("basepoint power tuple missing".into()))?;
            for iv in 0..rm {
                let e = aug.get(0, iv);
                if !e.is_zero() {
                    let (rows, cols) = (wp.complex.rank(0), carrier.rank(0));
                    let entry = e.clone();
                    let b = block_entry(&mut blocks, iv, 0, rows, cols);
                    b.set(row, bs, entry);
                }
            }
        }

        for n0 in 1..=nmax {
            let en0 = &w.factors[&n0];
            for dw in en0.complex.degrees() {
                let re = en0.complex.rank(dw);
                if re == 0 {
                    continue;
                }
                for parts in compositions(n0, m) {
                    let t = chain_core::tensor::tensor_many(
                        &parts
                            .iter()
                            .map(|k| w.factors[k].complex.clone())
                            .collect::<Vec<_>>(),
                    );
                    let tcols = t.complex.rank(dw);
                    if tcols == 0 {
                        continue;
                    }
                    // operand tuples over the component bases
                    let ranks: Vec<usize> =
                        parts.iter().map(|k| op.component(*k).map(|c| c.complex.rank(0))).collect::<Result<_, _>>()?;
                    if ranks.iter().any(|&r| r == 0) {
                        continue;
                    }
                    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
                    for &r in &ranks {
                        let mut next = Vec::new();
                        for tpl in &tuples {
                            for u in 0..r {
                                let mut t2 = tpl.clone();
                                t2.push(u);
                                next.push(t2);
                            }
                        }
                        tuples = next;
                    }
                    let prow = w.c_powers[&n0].complex.rank(dw);
                    let rows = tuples.len() * prow;

                    // evaluation matrix of the factor tensor basis
                    let mut mm = IntegerMatrix::zeros(rows, tcols);
                    for col in 0..tcols {
                        let tup = t.tuple_of(dw, col);
                        let vals: Vec<IntegerMatrix> = tup
                            .iter()
                            .zip(&parts)
                            .map(|((dd, ee), k)| w.factors[k].basis_map(*dd, *ee).block(0))
                            .collect();
                        for (ui, utuple) in tuples.iter().enumerate() {
                            // tensor of the per-factor values, spliced into C^{n0};
                            // no Koszul signs: the operands sit in degree 0
                            let mut terms: Vec<(Vec<(i64, usize)>, BigInt)> =
                                vec![(Vec::new(), BigInt::one())];
                            for slot in 0..parts.len() {
                                let (dd, _) = tup[slot];
                                let k = parts[slot];
                                let vcol = vals[slot].column(utuple[slot]);
                                let mut next = Vec::new();
                                for (ri, e) in vcol.iter().enumerate() {
                                    if e.is_zero() {
                                        continue;
                                    }
                                    let sub = w.c_powers[&k].tuple_of(dd, ri);
                                    for (pt, cc) in &terms {
                                        let mut p2 = pt.clone();
                                        p2.extend(sub.iter().copied());
                                        next.push((p2, cc * e));
                                    }
                                }
                                terms = next;
                                if terms.is_empty() {
                                    break;
                                }
                            }
                            for (pt, cc) in terms {
                                let r = w.c_powers[&n0]
                                    .index_of(dw, &pt)
                                    .ok_or_else(|| Error::Shape("power tuple missing".into()))?;
                                let at = ui * prow + r;
                                let v = mm.get(at, col) + cc;
                                mm.set(at, col, v);
                            }
                        }
                    }

                    // right-hand sides: w evaluated on generalized compositions
                    let mut bb = IntegerMatrix::zeros(rows, rm * re);
                    for iv in 0..rm {
                        let v = op.basis_element(m, 0, iv);
                        for (ui, utuple) in tuples.iter().enumerate() {
                            let slots: Vec<Slot> = utuple
                                .iter()
                                .zip(&parts)
                                .map(|(&u, k)| Slot::Arg(op.basis_element(*k, 0, u)))
                                .collect();
                            let g = generalized_composition(op, &v, &slots)?;
                            for j in 0..re {
                                let val = en0.basis_map(dw, j).block(0).apply(&g.coeffs);
                                for (r, e) in val.iter().enumerate() {
                                    if !e.is_zero() {
                                        bb.set(ui * prow + r, iv * re + j, e.clone());
                                    }
                                }
                            }
                        }
                    }

                    let yy = smith_normal_form(&mm).solve(&bb).ok_or_else(|| {
                        Error::Solve(format!(
                            "structure component ({} -> {:?}) has no integer solution",
                            n0, parts
                        ))
                    })?;

                    // scatter into the carrier power
                    let rows_out = wp.complex.rank(dw);
                    let cols_out = carrier.rank(dw);
                    for col in 0..tcols {
                        let tup = t.tuple_of(dw, col);
                        let wtuple: Vec<(i64, usize)> = tup
                            .iter()
                            .zip(&parts)
                            .map(|((dd, ee), k)| (*dd, w.slot(*k, *dd, *ee)))
                            .collect();
                        let row = wp
                            .index_of(dw, &wtuple)
                            .ok_or_else(|| Error::Shape("carrier power tuple missing".into()))?;
                        // transport the plain-convention solution into the
                        // alternating hom signs of the carrier
                        let mut sign = hom_sign(dw);
                        for (fd, _) in tup {
                            sign *= hom_sign(*fd);
                        }
                        for iv in 0..rm {
                            for j in 0..re {
                                let e = yy.get(col, iv * re + j);
                                if e.is_zero() {
                                    continue;
                                }
                                let wcol = w.slot(n0, dw, j);
                                let entry = e * sign;
                                let b = block_entry(&mut blocks, iv, dw, rows_out, cols_out);
                                let v = b.get(row, wcol) + entry;
                                b.set(row, wcol, v);
                            }
                        }
                    }
                }
            }
        }

        let mut maps = Vec::new();
        for bl in blocks {
            let mut f = ChainMap::zero(carrier.clone(), wp.complex.clone(), 0);
            for (d, m2) in bl {
                f.set_block(d, m2)?;
            }
            maps.push(f);
        }
        structure.insert(m, maps);
    }

    OperadCoalgebra::new(op.clone(), carrier, structure)
}
