use num_bigint::BigInt;
use num_traits::One;

use crate::{kernel_basis, smith_normal_form, solve, Error, IntegerMatrix};

/// Finitely generated abelian group `Z^free_rank (+) Z/t_1 (+) ... (+) Z/t_k`,
/// torsion coefficients in a divisibility chain with each `t_i > 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology at the middle of `. --d_in--> Z^n --d_out--> .`:
/// `ker(d_out) / im(d_in)`. Requires `d_out * d_in = 0`.
pub fn homology_group(d_out: &IntegerMatrix, d_in: &IntegerMatrix) -> Result<HomologyGroup, Error> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::Shape(format!(
            "middle dimension mismatch: d_out is {}x{}, d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::NotAComplex);
    }
    let k = kernel_basis(d_out);
    // im(d_in) lies in ker(d_out); express it in the kernel basis.
    let x = solve(&k, d_in).ok_or(Error::NoSolution)?;
    let snf = smith_normal_form(&x);
    let free_rank = k.cols() - snf.rank();
    let torsion: Vec<BigInt> = snf
        .invariant_factors
        .iter()
        .filter(|t| !t.is_one())
        .cloned()
        .collect();
    Ok(HomologyGroup { free_rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_boundaries_give_free_group() {
        let d_out = IntegerMatrix::zeros(0, 3);
        let d_in = IntegerMatrix::zeros(3, 0);
        let h = homology_group(&d_out, &d_in).unwrap();
        assert_eq!(h, HomologyGroup::free(3));
    }

    #[test]
    fn torsion_from_multiplication_by_two() {
        let d_out = IntegerMatrix::zeros(0, 1);
        let d_in = IntegerMatrix::from_rows(&[vec![2]]);
        let h = homology_group(&d_out, &d_in).unwrap();
        assert_eq!(h.free_rank, 0);
        assert_eq!(h.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn circle_like_complex() {
        // 0 -> Z --0--> Z -> 0 at both spots.
        let zero_out = IntegerMatrix::zeros(0, 1);
        let zero_in = IntegerMatrix::zeros(1, 0);
        let h = homology_group(&zero_out, &zero_in).unwrap();
        assert_eq!(h, HomologyGroup::free(1));
    }

    #[test]
    fn interval_is_contractible_in_degree_zero() {
        // d_in sends q to p1 - p0; H_0 = Z^2 / im = Z.
        let d_out = IntegerMatrix::zeros(0, 2);
        let d_in = IntegerMatrix::from_rows(&[vec![-1], vec![1]]);
        let h = homology_group(&d_out, &d_in).unwrap();
        assert_eq!(h, HomologyGroup::free(1));
    }

    #[test]
    fn rejects_non_complex() {
        let d_out = IntegerMatrix::from_rows(&[vec![1]]);
        let d_in = IntegerMatrix::from_rows(&[vec![1]]);
        assert!(matches!(
            homology_group(&d_out, &d_in),
            Err(Error::NotAComplex)
        ));
    }

    #[test]
    fn display_formatting() {
        let h = HomologyGroup {
            free_rank: 2,
            torsion: vec![BigInt::from(2), BigInt::from(4)],
        };
        assert_eq!(h.to_string(), "Z^2 + Z/2 + Z/4");
        assert_eq!(HomologyGroup::free(0).to_string(), "0");
    }
}
