use std::collections::BTreeMap;
use std::sync::Arc;

use chain_core::interval::unit_interval;
use chain_core::sign::permutation_sign_graded;
use chain_core::tensor::{map_tensor_into, tensor_many, tensor_power, TensorComplex};
use chain_core::{ChainComplex, ChainMap};
use exact_linear::IntegerMatrix;
use num_bigint::BigInt;
use num_traits::Zero;
use operad_core::{staircase_path, SigmaDiagonal};
use setf_sym::Perm;

use crate::classify::classifying_map;
use crate::coalgebra::{check_coalgebra_morphism, CoalgebraMorphism, OperadCoalgebra};
use crate::cofree::{cofree_coalgebra, TruncatedCofree};
use crate::Error;

/// The carrier tensored with the unit interval, made a coalgebra again by
/// routing the interval factor through a diagonal on the operad: the
/// group-ring leg picks the lattice path along which the interval power is
/// spread.
pub struct CylinderCoalgebra {
    pub coalgebra: OperadCoalgebra,
    /// the carrier as a two-factor tensor, carrier then interval
    pub tensor: TensorComplex,
    pub interval: Arc<ChainComplex>,
    /// inclusions of the two ends, `c -> c (x) p0` and `c -> c (x) p1`
    pub end_maps: [ChainMap; 2],
}

/// A classifying morphism out of a cylinder, together with the cylinder it
/// lives on.
pub struct HomotopyLift {
    pub cylinder: CylinderCoalgebra,
    pub map: CoalgebraMorphism,
}

/// Interleave `C^m (x) I^m` into `(C (x) I)^m` with the graded crossing
/// sign, entering through the canonical unpacking of the two composite
/// factors.
fn interleave(
    carrier_power: &TensorComplex,
    interval_power: &TensorComplex,
    tensor: &TensorComplex,
    cyl_power: &TensorComplex,
) -> Result<ChainMap, Error> {
    let m = carrier_power.arity();
    let pair = tensor_many(&[
        carrier_power.complex.clone(),
        interval_power.complex.clone(),
    ]);
    let flat_factors: Vec<Arc<ChainComplex>> = carrier_power
        .factors
        .iter()
        .chain(interval_power.factors.iter())
        .cloned()
        .collect();
    let flat = tensor_many(&flat_factors);

    let mut unpack = ChainMap::zero(pair.complex.clone(), flat.complex.clone(), 0);
    for d in pair.complex.degrees() {
        let ts = pair.tuples(d);
        let mut b = IntegerMatrix::zeros(flat.complex.rank(d), ts.len());
        for (col, tup) in ts.iter().enumerate() {
            let ((da, ia), (db, ib)) = (tup[0], tup[1]);
            let mut whole = carrier_power.tuple_of(da, ia).clone();
            whole.extend_from_slice(interval_power.tuple_of(db, ib));
            let row = flat.index_of(d, &whole).expect("flattened tuple exists");
            b.set(row, col, BigInt::from(1));
        }
        unpack.set_block(d, b)?;
    }

    // output slot 2k takes carrier factor k, slot 2k+1 takes interval
    // factor m+k
    let mut perm = Vec::with_capacity(2 * m);
    for k in 0..m {
        perm.push(k);
        perm.push(m + k);
    }
    let mut chi = ChainMap::zero(flat.complex.clone(), cyl_power.complex.clone(), 0);
    for d in flat.complex.degrees() {
        let ts = flat.tuples(d);
        let mut b = IntegerMatrix::zeros(cyl_power.complex.rank(d), ts.len());
        for (col, tup) in ts.iter().enumerate() {
            let degrees: Vec<i64> = tup.iter().map(|(fd, _)| *fd).collect();
            let sign = permutation_sign_graded(&degrees, &perm);
            let mut out = Vec::with_capacity(m);
            for k in 0..m {
                let dd = tup[k].0 + tup[m + k].0;
                let idx = tensor
                    .index_of(dd, &vec![tup[k], tup[m + k]])
                    .expect("cylinder tuple exists");
                out.push((dd, idx));
            }
            let row = cyl_power.index_of(d, &out).expect("power tuple exists");
            b.set(row, col, BigInt::from(sign));
        }
        chi.set_block(d, b)?;
    }
    Ok(chi.compose(&unpack))
}

/// Build the cylinder coalgebra of `x` along the diagonal `sd`, whose
/// source operad must be the operad of `x`.
pub fn cylinder_coalgebra(
    x: &OperadCoalgebra,
    sd: &SigmaDiagonal,
) -> Result<CylinderCoalgebra, Error> {
    let op = &x.operad;
    let interval = Arc::new(unit_interval());
    let tensor = tensor_many(&[x.carrier.clone(), interval.clone()]);
    let cyl = tensor.complex.clone();

    let mut structure: BTreeMap<usize, Vec<ChainMap>> = BTreeMap::new();
    for m in 1..=op.max_arity {
        let comp = op.component(m)?;
        let delta = sd
            .delta
            .maps
            .get(&m)
            .ok_or_else(|| Error::Shape(format!("diagonal misses arity {}", m)))?;
        if *delta.source != *comp.complex {
            return Err(Error::Shape(format!(
                "diagonal source differs from the operad at arity {}",
                m
            )));
        }
        let interval_power = tensor_power(&interval, m);
        let cyl_power = tensor_power(&cyl, m);
        let pair = tensor_many(&[
            x.powers[&m].complex.clone(),
            interval_power.complex.clone(),
        ]);
        let weave = interleave(&x.powers[&m], &interval_power, &tensor, &cyl_power)?;
        let stairs: Vec<ChainMap> = Perm::all(m)
            .iter()
            .map(|s| staircase_path(&interval, &interval_power, s))
            .collect::<Result<_, _>>()?;

        let car = &sd.carriers[&m];
        let db = delta.block(0);
        let mut maps = Vec::with_capacity(comp.complex.rank(0));
        for iv in 0..comp.complex.rank(0) {
            let mut acc = ChainMap::zero(cyl.clone(), cyl_power.complex.clone(), 0);
            for (row, coeff) in db.column(iv).iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let tup = car.tuple_of(0, row);
                let ((_, ivp), (_, isig)) = (tup[0], tup[1]);
                let spread = map_tensor_into(
                    &tensor,
                    &pair,
                    &[&x.structure[&m][ivp], &stairs[isig]],
                )?;
                acc = acc.add(&weave.compose(&spread).scale(coeff));
            }
            maps.push(acc);
        }
        structure.insert(m, maps);
    }

    let mut ends = Vec::with_capacity(2);
    for label in ["p0", "p1"] {
        let p = interval
            .index_of_label(0, label)
            .expect("interval vertex label");
        let mut e = ChainMap::zero(x.carrier.clone(), cyl.clone(), 0);
        for d in x.carrier.degrees() {
            let mut b = IntegerMatrix::zeros(cyl.rank(d), x.carrier.rank(d));
            for i in 0..x.carrier.rank(d) {
                let row = tensor
                    .index_of(d, &vec![(d, i), (0, p)])
                    .expect("end tuple exists");
                b.set(row, i, BigInt::from(1));
            }
            e.set_block(d, b)?;
        }
        ends.push(e);
    }
    let end_maps = [ends.remove(0), ends.remove(0)];

    let coalgebra = OperadCoalgebra::new(op.clone(), cyl, structure)?;
    Ok(CylinderCoalgebra {
        coalgebra,
        tensor,
        interval,
        end_maps,
    })
}

/// Do both end inclusions carry `x` into the cylinder as coalgebra
/// morphisms?
pub fn cylinder_restricts_to_ends(
    x: &OperadCoalgebra,
    cyl: &CylinderCoalgebra,
) -> Result<bool, Error> {
    for e in &cyl.end_maps {
        let report = check_coalgebra_morphism(x, &cyl.coalgebra, e)?;
        if !report.is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Lift a homotopy of cogeneration maps to the cofree coalgebras: classify
/// `f` composed with the counit on the carrier leg of the cylinder over the
/// cofree coalgebra of `wc`. `base_cylinder` is the two-factor tensor of the
/// cogenerators of `wc` with the interval, and `f` maps it into the
/// cogenerators of `wd`.
pub fn cofree_homotopy_lift(
    wc: &TruncatedCofree,
    wd: &TruncatedCofree,
    sd: &SigmaDiagonal,
    base_cylinder: &TensorComplex,
    f: &ChainMap,
) -> Result<HomotopyLift, Error> {
    let xw = cofree_coalgebra(wc)?;
    let cyl = cylinder_coalgebra(&xw, sd)?;
    let id_interval = ChainMap::identity(cyl.interval.clone());
    let collapse = map_tensor_into(&cyl.tensor, base_cylinder, &[&wc.counit, &id_interval])?;
    let map = classifying_map(&cyl.coalgebra, &f.compose(&collapse), wd)?;
    Ok(HomotopyLift { cylinder: cyl, map })
}
