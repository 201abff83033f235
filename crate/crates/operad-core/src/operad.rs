use std::collections::BTreeMap;

use chain_core::tensor::{tensor_many, TensorComplex};
use chain_core::ChainMap;
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use setf_sym::{Perm, SymmetricComplex};

use crate::{Error, OperadElement};

/// Operad truncated at arity `max_arity`: components for arities
/// `1..=max_arity` with their `S_n` actions, a unit in `component(1)`, and
/// partial composition tables for every `(m, x, n)` with `m + n - 1` within
/// the bound. Compositions landing beyond the bound are errors, never
/// silently dropped.
#[derive(Clone)]
pub struct TruncatedOperad {
    pub max_arity: usize,
    pub unital: bool,
    components: BTreeMap<usize, SymmetricComplex>,
    unit: OperadElement,
    /// `(m, x, n)` with `x` a 0-based slot of the arity-`m` factor
    compositions: BTreeMap<(usize, usize, usize), ChainMap>,
    pair_tensors: BTreeMap<(usize, usize), TensorComplex>,
    /// optional per-arity augmentations to the rank-one unit complex
    augmentations: BTreeMap<usize, ChainMap>,
}

impl TruncatedOperad {
    pub fn new(
        max_arity: usize,
        unital: bool,
        components: BTreeMap<usize, SymmetricComplex>,
        unit_coeffs: Vec<BigInt>,
        compositions: BTreeMap<(usize, usize, usize), ChainMap>,
        augmentations: BTreeMap<usize, ChainMap>,
    ) -> Result<Self, Error> {
        if max_arity == 0 {
            return Err(Error::Shape("arity bound must be at least 1".into()));
        }
        for n in 1..=max_arity {
            let c = components.get(&n).ok_or(Error::MissingComponent(n))?;
            if c.arity != n {
                return Err(Error::Shape(format!(
                    "component at key {} has action arity {}",
                    n, c.arity
                )));
            }
        }
        let one = &components[&1];
        if unit_coeffs.len() != one.complex.rank(0) {
            return Err(Error::Shape("unit must live in degree 0 of component 1".into()));
        }
        let unit = OperadElement {
            arity: 1,
            degree: 0,
            coeffs: unit_coeffs,
        };
        let mut pair_tensors = BTreeMap::new();
        for m in 1..=max_arity {
            for n in 1..=max_arity {
                if m + n - 1 > max_arity {
                    continue;
                }
                let t = tensor_many(&[
                    components[&m].complex.clone(),
                    components[&n].complex.clone(),
                ]);
                for x in 0..m {
                    let comp = compositions
                        .get(&(m, x, n))
                        .ok_or(Error::MissingComposition(m, x, n))?;
                    if *comp.source != *t.complex
                        || *comp.target != *components[&(m + n - 1)].complex
                        || comp.degree != 0
                    {
                        return Err(Error::Shape(format!(
                            "composition ({}, {}, {}) has wrong source, target, or degree",
                            m, x, n
                        )));
                    }
                }
                pair_tensors.insert((m, n), t);
            }
        }
        for (n, aug) in &augmentations {
            if *n > max_arity
                || *aug.source != *components[n].complex
                || aug.target.total_rank() != 1
                || aug.target.rank(0) != 1
                || aug.degree != 0
            {
                return Err(Error::Shape(format!("augmentation at arity {} malformed", n)));
            }
        }
        Ok(TruncatedOperad {
            max_arity,
            unital,
            components,
            unit,
            compositions,
            pair_tensors,
            augmentations,
        })
    }

    pub fn component(&self, n: usize) -> Result<&SymmetricComplex, Error> {
        self.components.get(&n).ok_or(Error::MissingComponent(n))
    }

    pub fn unit(&self) -> &OperadElement {
        &self.unit
    }

    pub fn pair_tensor(&self, m: usize, n: usize) -> Result<&TensorComplex, Error> {
        self.pair_tensors.get(&(m, n)).ok_or(Error::TruncationOverflow {
            needed: m + n - 1,
            max: self.max_arity,
        })
    }

    pub fn composition(&self, m: usize, x: usize, n: usize) -> Result<&ChainMap, Error> {
        if m + n - 1 > self.max_arity {
            return Err(Error::TruncationOverflow {
                needed: m + n - 1,
                max: self.max_arity,
            });
        }
        if x >= m {
            return Err(Error::BadSlot { slot: x, arity: m });
        }
        self.compositions
            .get(&(m, x, n))
            .ok_or(Error::MissingComposition(m, x, n))
    }

    pub fn augmentation(&self, n: usize) -> Option<&ChainMap> {
        self.augmentations.get(&n)
    }

    /// Partial composition `a o_x b`, bilinear over the composition table.
    pub fn compose(&self, a: &OperadElement, x: usize, b: &OperadElement) -> Result<OperadElement, Error> {
        let block = self.composition(a.arity, x, b.arity)?.block(a.degree + b.degree);
        self.compose_in_block(&block, a, x, b)
    }

    /// As `compose`, against a caller-held block of the composition table
    /// (lets hot loops avoid re-cloning the block).
    pub(crate) fn compose_in_block(
        &self,
        block: &IntegerMatrix,
        a: &OperadElement,
        x: usize,
        b: &OperadElement,
    ) -> Result<OperadElement, Error> {
        let (m, n) = (a.arity, b.arity);
        let _ = self.composition(m, x, n)?;
        let t = self.pair_tensor(m, n)?;
        let deg = a.degree + b.degree;
        let out_rank = self.components[&(m + n - 1)].complex.rank(deg);
        let mut coeffs = vec![BigInt::zero(); out_rank];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let idx = t
                    .index_of(deg, &vec![(a.degree, i), (b.degree, j)])
                    .ok_or_else(|| Error::Shape("pair tuple missing".into()))?;
                let c = ca * cb;
                for (r, out) in coeffs.iter_mut().enumerate() {
                    let v = block.get(r, idx);
                    if !v.is_zero() {
                        *out += &c * v;
                    }
                }
            }
        }
        Ok(OperadElement {
            arity: m + n - 1,
            degree: deg,
            coeffs,
        })
    }

    /// Action of a permutation on an element of `component(arity)`.
    pub fn act(&self, p: &Perm, a: &OperadElement) -> Result<OperadElement, Error> {
        let c = self.component(a.arity)?;
        let m = c.action(p)?;
        Ok(OperadElement {
            arity: a.arity,
            degree: a.degree,
            coeffs: m.block(a.degree).apply(&a.coeffs),
        })
    }

    /// All basis elements of `component(n)` as `(degree, index)` pairs.
    pub fn basis(&self, n: usize) -> Vec<(i64, usize)> {
        let c = &self.components[&n].complex;
        c.degrees()
            .into_iter()
            .flat_map(|d| (0..c.rank(d)).map(move |i| (d, i)))
            .collect()
    }

    pub fn basis_element(&self, n: usize, d: i64, idx: usize) -> OperadElement {
        OperadElement::basis(n, d, self.components[&n].complex.rank(d), idx)
    }

    pub fn element_label(&self, e: &OperadElement) -> String {
        let c = &self.components[&e.arity].complex;
        let labels = c.labels(e.degree);
        let terms: Vec<String> = e
            .coeffs
            .iter()
            .zip(labels)
            .filter(|(v, _)| !v.is_zero())
            .map(|(v, l)| {
                if v.is_one() {
                    l.clone()
                } else {
                    format!("{}*{}", v, l)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            format!("{} (arity {}, degree {})", terms.join(" + "), e.arity, e.degree)
        }
    }

    /// Copy of the operad with one composition-table entry negated; used to
    /// exercise fault detection in the axiom checker.
    pub fn negate_composition_entry(
        &self,
        m: usize,
        x: usize,
        n: usize,
        degree: i64,
        row: usize,
        col: usize,
    ) -> Result<Self, Error> {
        let mut compositions = self.compositions.clone();
        let comp = compositions
            .get_mut(&(m, x, n))
            .ok_or(Error::MissingComposition(m, x, n))?;
        let mut block = comp.block(degree);
        let v = block.get(row, col).clone();
        if v.is_zero() {
            return Err(Error::Shape("entry is zero; negating it changes nothing".into()));
        }
        block.set(row, col, -v);
        comp.set_block(degree, block)?;
        Ok(TruncatedOperad {
            max_arity: self.max_arity,
            unital: self.unital,
            components: self.components.clone(),
            unit: self.unit.clone(),
            compositions,
            pair_tensors: self.pair_tensors.clone(),
            augmentations: self.augmentations.clone(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub law: String,
    pub witness: String,
}

#[derive(Debug, Default)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub checks: usize,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, law: &str, witness: String) {
        self.violations.push(AxiomViolation {
            law: law.to_string(),
            witness,
        });
    }
}

struct Checker<'a> {
    op: &'a TruncatedOperad,
    blocks: BTreeMap<(usize, usize, usize, i64), IntegerMatrix>,
    actions: BTreeMap<(usize, Vec<usize>), ChainMap>,
}

impl<'a> Checker<'a> {
    fn new(op: &'a TruncatedOperad) -> Self {
        Checker {
            op,
            blocks: BTreeMap::new(),
            actions: BTreeMap::new(),
        }
    }

    fn compose(
        &mut self,
        a: &OperadElement,
        x: usize,
        b: &OperadElement,
    ) -> Result<OperadElement, Error> {
        let key = (a.arity, x, b.arity, a.degree + b.degree);
        if !self.blocks.contains_key(&key) {
            let block = self.op.composition(a.arity, x, b.arity)?.block(key.3);
            self.blocks.insert(key.clone(), block);
        }
        self.op.compose_in_block(&self.blocks[&key], a, x, b)
    }

    fn act(&mut self, p: &Perm, a: &OperadElement) -> Result<OperadElement, Error> {
        let key = (a.arity, p.one_line().to_vec());
        if !self.actions.contains_key(&key) {
            let m = self.op.component(a.arity)?.action(p)?;
            self.actions.insert(key.clone(), m);
        }
        let m = &self.actions[&key];
        Ok(OperadElement {
            arity: a.arity,
            degree: a.degree,
            coeffs: m.block(a.degree).apply(&a.coeffs),
        })
    }
}

/// Exhaustive verification of the operad axioms on all basis elements within
/// the truncation: actions, chain-map compositions, unit laws, both
/// associativity shapes (including the sign-twisted parallel one), and
/// equivariance. Failures are reported with located witnesses.
pub fn check_operad_axioms(op: &TruncatedOperad) -> Result<AxiomReport, Error> {
    let mut report = AxiomReport::default();
    let mut cx = Checker::new(op);
    let nmax = op.max_arity;

    for n in 1..=nmax {
        if let Err(e) = op.component(n)?.validate() {
            report.fail("action", format!("arity {}: {}", n, e));
        }
        report.checks += 1;
    }

    for ((m, x, n), comp) in &op.compositions {
        if !comp.is_chain_map() {
            report.fail(
                "composition_chain_map",
                format!("composition ({}, {}, {}) does not commute with the boundary", m, x, n),
            );
        }
        report.checks += 1;
    }

    if op.unital {
        let unit = op.unit().clone();
        for n in 1..=nmax {
            for (d, i) in op.basis(n) {
                let a = op.basis_element(n, d, i);
                let left = cx.compose(&unit, 0, &a)?;
                if left != a {
                    report.fail(
                        "left_unit",
                        format!("unit o_0 {} = {}", op.element_label(&a), op.element_label(&left)),
                    );
                }
                for x in 0..n {
                    let right = cx.compose(&a, x, &unit)?;
                    if right != a {
                        report.fail(
                            "right_unit",
                            format!(
                                "{} o_{} unit = {}",
                                op.element_label(&a),
                                x,
                                op.element_label(&right)
                            ),
                        );
                    }
                }
                report.checks += 1;
            }
        }
    }

    // sequential associativity: (a o_x b) o_{x+y} c = a o_x (b o_y c)
    for m in 1..=nmax {
        for n in 1..=nmax {
            for p in 1..=nmax {
                if m + n - 1 > nmax || n + p - 1 > nmax || m + n + p - 2 > nmax {
                    continue;
                }
                for (da, ia) in op.basis(m) {
                    let a = op.basis_element(m, da, ia);
                    for (db, ib) in op.basis(n) {
                        let b = op.basis_element(n, db, ib);
                        for (dc, ic) in op.basis(p) {
                            let c = op.basis_element(p, dc, ic);
                            for x in 0..m {
                                for y in 0..n {
                                    let ab = cx.compose(&a, x, &b)?;
                                    let lhs = cx.compose(&ab, x + y, &c)?;
                                    let bc = cx.compose(&b, y, &c)?;
                                    let rhs = cx.compose(&a, x, &bc)?;
                                    if lhs != rhs {
                                        report.fail(
                                            "sequential_associativity",
                                            format!(
                                                "a = {}, b = {}, c = {}, x = {}, y = {}: {} vs {}",
                                                op.element_label(&a),
                                                op.element_label(&b),
                                                op.element_label(&c),
                                                x,
                                                y,
                                                op.element_label(&lhs),
                                                op.element_label(&rhs)
                                            ),
                                        );
                                    }
                                    report.checks += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // parallel associativity with the Koszul twist:
    // (a o_{x1} b) o_{x2+n-1} c = (-1)^{|b||c|} (a o_{x2} c) o_{x1} b
    for m in 2..=nmax {
        for n in 1..=nmax {
            for p in 1..=nmax {
                if m + n - 1 > nmax || m + p - 1 > nmax || m + n + p - 2 > nmax {
                    continue;
                }
                for (da, ia) in op.basis(m) {
                    let a = op.basis_element(m, da, ia);
                    for (db, ib) in op.basis(n) {
                        let b = op.basis_element(n, db, ib);
                        for (dc, ic) in op.basis(p) {
                            let c = op.basis_element(p, dc, ic);
                            let sign = chain_core::sign::koszul_sign(db, dc);
                            for x1 in 0..m {
                                for x2 in x1 + 1..m {
                                    let ab = cx.compose(&a, x1, &b)?;
                                    let lhs = cx.compose(&ab, x2 + n - 1, &c)?;
                                    let ac = cx.compose(&a, x2, &c)?;
                                    let rhs = cx.compose(&ac, x1, &b)?.scale(&BigInt::from(sign));
                                    if lhs != rhs {
                                        report.fail(
                                            "parallel_associativity",
                                            format!(
                                                "a = {}, b = {}, c = {}, x1 = {}, x2 = {}: {} vs {}",
                                                op.element_label(&a),
                                                op.element_label(&b),
                                                op.element_label(&c),
                                                x1,
                                                x2,
                                                op.element_label(&lhs),
                                                op.element_label(&rhs)
                                            ),
                                        );
                                    }
                                    report.checks += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // equivariance: (sigma a) o_{sigma(x)} (tau b) =
    // block_compose(sigma, x, tau) . (a o_x b)
    for m in 1..=nmax {
        for n in 1..=nmax {
            if m + n - 1 > nmax {
                continue;
            }
            let mut sigmas = vec![Perm::identity(m)];
            sigmas.extend((0..m.saturating_sub(1)).map(|i| Perm::adjacent(m, i)));
            let mut taus = vec![Perm::identity(n)];
            taus.extend((0..n.saturating_sub(1)).map(|i| Perm::adjacent(n, i)));
            for sigma in &sigmas {
                for tau in &taus {
                    for (da, ia) in op.basis(m) {
                        let a = op.basis_element(m, da, ia);
                        let sa = cx.act(sigma, &a)?;
                        for (db, ib) in op.basis(n) {
                            let b = op.basis_element(n, db, ib);
                            let tb = cx.act(tau, &b)?;
                            for x in 0..m {
                                let lhs = cx.compose(&sa, sigma.apply(x), &tb)?;
                                let big = sigma.block_compose(x, tau);
                                let rhs = {
                                    let ab = cx.compose(&a, x, &b)?;
                                    cx.act(&big, &ab)?
                                };
                                if lhs != rhs {
                                    report.fail(
                                        "equivariance",
                                        format!(
                                            "sigma = {:?}, tau = {:?}, a = {}, b = {}, x = {}: {} vs {}",
                                            sigma,
                                            tau,
                                            op.element_label(&a),
                                            op.element_label(&b),
                                            x,
                                            op.element_label(&lhs),
                                            op.element_label(&rhs)
                                        ),
                                    );
                                }
                                report.checks += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    // augmentations, when present: chain maps, equivariant, multiplicative
    for (n, aug) in &op.augmentations {
        if !aug.is_chain_map() {
            report.fail("augmentation", format!("arity {}: not a chain map", n));
        }
        for g in op.component(*n)?.generators() {
            if !aug.compose(g).eq_blocks(aug) {
                report.fail("augmentation", format!("arity {}: not equivariant", n));
            }
        }
        report.checks += 1;
    }
    let aug_scalar = |aug: &ChainMap, e: &OperadElement| -> BigInt {
        if e.degree != 0 {
            return BigInt::zero();
        }
        aug.block(0)
            .apply(&e.coeffs)
            .first()
            .cloned()
            .unwrap_or_else(BigInt::zero)
    };
    for m in 1..=nmax {
        for n in 1..=nmax {
            if m + n - 1 > nmax {
                continue;
            }
            let (Some(am), Some(an), Some(ao)) = (
                op.augmentation(m),
                op.augmentation(n),
                op.augmentation(m + n - 1),
            ) else {
                continue;
            };
            let (am, an, ao) = (am.clone(), an.clone(), ao.clone());
            for (da, ia) in op.basis(m) {
                let a = op.basis_element(m, da, ia);
                for (db, ib) in op.basis(n) {
                    let b = op.basis_element(n, db, ib);
                    for x in 0..m {
                        let ab = cx.compose(&a, x, &b)?;
                        if aug_scalar(&ao, &ab) != aug_scalar(&am, &a) * aug_scalar(&an, &b) {
                            report.fail(
                                "augmentation_multiplicative",
                                format!(
                                    "a = {}, b = {}, x = {}",
                                    op.element_label(&a),
                                    op.element_label(&b),
                                    x
                                ),
                            );
                        }
                        report.checks += 1;
                    }
                }
            }
        }
    }
    if op.unital {
        if let Some(a1) = op.augmentation(1) {
            if aug_scalar(a1, op.unit()) != BigInt::one() {
                report.fail("augmentation_unit", "augmentation of the unit is not 1".into());
            }
            report.checks += 1;
        }
    }

    Ok(report)
}

/// Build a composition table as a chain map out of the pair tensor, from a
/// closure giving the value on each basis pair as a coefficient vector in
/// degree `da + db` of `out`.
pub(crate) fn composition_table(
    cm: &std::sync::Arc<chain_core::ChainComplex>,
    cn: &std::sync::Arc<chain_core::ChainComplex>,
    out: &std::sync::Arc<chain_core::ChainComplex>,
    mut f: impl FnMut(i64, usize, i64, usize) -> Result<Vec<BigInt>, Error>,
) -> Result<ChainMap, Error> {
    let t = tensor_many(&[cm.clone(), cn.clone()]);
    let mut blocks = BTreeMap::new();
    for d in t.complex.degrees() {
        let rows = out.rank(d);
        let tuples = t.tuples(d);
        if rows == 0 || tuples.is_empty() {
            continue;
        }
        let mut mtx = IntegerMatrix::zeros(rows, tuples.len());
        for (col, tup) in tuples.iter().enumerate() {
            let ((da, ia), (db, ib)) = (tup[0], tup[1]);
            let v = f(da, ia, db, ib)?;
            if v.len() != rows {
                return Err(Error::Shape("composition value has wrong rank".into()));
            }
            for (r, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    mtx.set(r, col, c);
                }
            }
        }
        blocks.insert(d, mtx);
    }
    Ok(ChainMap::new(t.complex, out.clone(), 0, blocks)?)
}

/// Morphism of truncated operads: per-arity degree-0 chain maps.
pub struct OperadMorphism {
    pub maps: BTreeMap<usize, ChainMap>,
}

impl OperadMorphism {
    pub fn apply(&self, e: &OperadElement) -> Result<OperadElement, Error> {
        let f = self
            .maps
            .get(&e.arity)
            .ok_or(Error::MissingComponent(e.arity))?;
        Ok(OperadElement {
            arity: e.arity,
            degree: e.degree,
            coeffs: f.block(e.degree).apply(&e.coeffs),
        })
    }
}

/// Verifies that `phi` is an operad morphism `src -> tgt` within truncation:
/// chain maps, equivariance, unit preservation, and compatibility with every
/// composition on all basis pairs.
pub fn check_operad_morphism(
    src: &TruncatedOperad,
    tgt: &TruncatedOperad,
    phi: &OperadMorphism,
) -> Result<AxiomReport, Error> {
    let mut report = AxiomReport::default();
    if src.max_arity != tgt.max_arity {
        return Err(Error::Shape("operads have different arity bounds".into()));
    }
    for n in 1..=src.max_arity {
        let f = phi.maps.get(&n).ok_or(Error::MissingComponent(n))?;
        if *f.source != *src.component(n)?.complex
            || *f.target != *tgt.component(n)?.complex
            || f.degree != 0
        {
            return Err(Error::Shape(format!("morphism component {} malformed", n)));
        }
        if !f.is_chain_map() {
            report.fail("morphism_chain_map", format!("arity {}", n));
        }
        for (i, (gs, gt)) in src
            .component(n)?
            .generators()
            .iter()
            .zip(tgt.component(n)?.generators())
            .enumerate()
        {
            if !f.compose(gs).eq_blocks(&gt.compose(f)) {
                report.fail("morphism_equivariance", format!("arity {}, generator {}", n, i));
            }
        }
        report.checks += 1;
    }
    if src.unital && tgt.unital {
        let u = phi.apply(src.unit())?;
        if u != *tgt.unit() {
            report.fail("morphism_unit", format!("unit maps to {}", tgt.element_label(&u)));
        }
        report.checks += 1;
    }
    for m in 1..=src.max_arity {
        for n in 1..=src.max_arity {
            if m + n - 1 > src.max_arity {
                continue;
            }
            for (da, ia) in src.basis(m) {
                let a = src.basis_element(m, da, ia);
                let fa = phi.apply(&a)?;
                for (db, ib) in src.basis(n) {
                    let b = src.basis_element(n, db, ib);
                    let fb = phi.apply(&b)?;
                    for x in 0..m {
                        let lhs = phi.apply(&src.compose(&a, x, &b)?)?;
                        let rhs = tgt.compose(&fa, x, &fb)?;
                        if lhs != rhs {
                            report.fail(
                                "morphism_composition",
                                format!(
                                    "a = {}, b = {}, x = {}: {} vs {}",
                                    src.element_label(&a),
                                    src.element_label(&b),
                                    x,
                                    tgt.element_label(&lhs),
                                    tgt.element_label(&rhs)
                                ),
                            );
                        }
                        report.checks += 1;
                    }
                }
            }
        }
    }
    Ok(report)
}
