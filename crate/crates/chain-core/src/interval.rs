use exact_linear::IntegerMatrix;

use crate::ChainComplex;

/// The unit interval: generators `p0`, `p1` in degree 0, `q` in degree 1,
/// with `dq = p1 - p0`.
pub fn unit_interval() -> ChainComplex {
    ChainComplex::build(
        &[(0, &["p0", "p1"]), (1, &["q"])],
        &[(1, IntegerMatrix::from_rows(&[vec![-1], vec![1]]))],
    )
    .expect("interval is a complex")
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_linear::HomologyGroup;

    #[test]
    fn interval_is_contractible() {
        let i = unit_interval();
        assert_eq!(i.homology(0), HomologyGroup::free(1));
        assert_eq!(i.homology(1), HomologyGroup::free(0));
    }
}
