use num_bigint::BigInt;
use num_traits::Zero;

/// Element of one operad component: a coefficient vector over the basis of
/// `component(arity)` in a single degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OperadElement {
    pub arity: usize,
    pub degree: i64,
    pub coeffs: Vec<BigInt>,
}

impl OperadElement {
    pub fn zero(arity: usize, degree: i64, rank: usize) -> Self {
        OperadElement {
            arity,
            degree,
            coeffs: vec![BigInt::zero(); rank],
        }
    }

    pub fn basis(arity: usize, degree: i64, rank: usize, idx: usize) -> Self {
        let mut e = Self::zero(arity, degree, rank);
        e.coeffs[idx] = BigInt::from(1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        OperadElement {
            arity: self.arity,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.arity, self.degree), (other.arity, other.degree));
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        OperadElement {
            arity: self.arity,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }
}
