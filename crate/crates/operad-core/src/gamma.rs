use crate::{Error, OperadElement, TruncatedOperad};

/// One entry of a generalized-composition shape: either a unit insertion
/// (allowed only for unital operads) or an honest operand.
#[derive(Clone, Debug)]
pub enum Slot {
    Bullet,
    Arg(OperadElement),
}

/// Generalized composition: plug the operands into the slots of `root`,
/// left to right, inserting the unit at each bullet. Equals the iterated
/// `compose` with slot offsets accumulated as earlier operands expand.
pub fn generalized_composition(
    op: &TruncatedOperad,
    root: &OperadElement,
    slots: &[Slot],
) -> Result<OperadElement, Error> {
    if slots.len() != root.arity {
        return Err(Error::Shape(format!(
            "{} slots for arity {}",
            slots.len(),
            root.arity
        )));
    }
    if !op.unital && slots.iter().any(|s| matches!(s, Slot::Bullet)) {
        return Err(Error::NotUnital);
    }
    let mut acc = root.clone();
    let mut offset = 0usize;
    for (i, slot) in slots.iter().enumerate() {
        let operand = match slot {
            Slot::Bullet => op.unit().clone(),
            Slot::Arg(b) => b.clone(),
        };
        acc = op.compose(&acc, i + offset, &operand)?;
        offset += operand.arity - 1;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::s0;
    use chain_core::sign::koszul_sign;
    use num_bigint::BigInt;

    /// independent right-to-left fold; the parallel associativity axiom
    /// forces the pairwise Koszul sign between the operand degrees
    fn gamma_right_to_left(
        op: &TruncatedOperad,
        root: &OperadElement,
        slots: &[Slot],
    ) -> Result<OperadElement, Error> {
        let operands: Vec<OperadElement> = slots
            .iter()
            .map(|s| match s {
                Slot::Bullet => op.unit().clone(),
                Slot::Arg(b) => b.clone(),
            })
            .collect();
        let mut sign = 1i64;
        for i in 0..operands.len() {
            for j in i + 1..operands.len() {
                sign *= koszul_sign(operands[i].degree, operands[j].degree);
            }
        }
        let mut acc = root.clone();
        for (i, b) in operands.iter().enumerate().rev() {
            acc = op.compose(&acc, i, b)?;
        }
        Ok(acc.scale(&BigInt::from(sign)))
    }

    #[test]
    fn all_bullets_is_the_identity() {
        let o = s0(3).unwrap();
        for (d, i) in o.basis(3) {
            let a = o.basis_element(3, d, i);
            let g = generalized_composition(&o, &a, &[Slot::Bullet, Slot::Bullet, Slot::Bullet])
                .unwrap();
            assert_eq!(g, a);
        }
    }

    #[test]
    fn single_operand_is_plain_composition() {
        let o = s0(4).unwrap();
        for (da, ia) in o.basis(2) {
            let a = o.basis_element(2, da, ia);
            for (db, ib) in o.basis(3) {
                let b = o.basis_element(3, db, ib);
                let g =
                    generalized_composition(&o, &a, &[Slot::Bullet, Slot::Arg(b.clone())]).unwrap();
                assert_eq!(g, o.compose(&a, 1, &b).unwrap());
            }
        }
    }

    #[test]
    fn folds_agree_in_both_directions() {
        let o = s0(4).unwrap();
        for (da, ia) in o.basis(2) {
            let a = o.basis_element(2, da, ia);
            for (db, ib) in o.basis(2) {
                let b = o.basis_element(2, db, ib);
                for (dc, ic) in o.basis(2) {
                    let c = o.basis_element(2, dc, ic);
                    let slots = [Slot::Arg(b.clone()), Slot::Arg(c.clone())];
                    let left = generalized_composition(&o, &a, &slots).unwrap();
                    let right = gamma_right_to_left(&o, &a, &slots).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}
