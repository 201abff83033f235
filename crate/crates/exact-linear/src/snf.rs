use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::IntegerMatrix;

/// Smith normal form `U * M * V = D` with unimodular `U`, `V` and diagonal `D`
/// whose nonzero entries form a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Solve `M * x = b` for the decomposed matrix `M`; cheaper than the free
    /// function when many right-hand sides share one decomposition.
    pub fn solve(&self, b: &IntegerMatrix) -> Option<IntegerMatrix> {
        let rows = self.u.rows();
        let cols = self.v.rows();
        assert_eq!(rows, b.rows(), "solve: row mismatch");
        let ub = self.u.mul(b);
        let r = self.rank();
        let mut z = IntegerMatrix::zeros(cols, b.cols());
        for j in 0..b.cols() {
            for i in 0..rows {
                let rhs = ub.get(i, j);
                if i < r {
                    let d = self.d.get(i, i);
                    let (q, rem) = num_integer::Integer::div_rem(rhs, d);
                    if !rem.is_zero() {
                        return None;
                    }
                    if i < cols {
                        z.set(i, j, q);
                    }
                } else if !rhs.is_zero() {
                    return None;
                }
            }
        }
        Some(self.v.mul(&z))
    }
}

/// Deterministic pivot: smallest nonzero absolute value in the trailing
/// submatrix, ties broken by lowest row index, then lowest column index.
fn find_pivot(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            let abs = e.abs();
            match &best {
                Some((b, _, _)) if *b <= abs => {}
                _ => best = Some((abs, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut u_inv = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let mut v_inv = IntegerMatrix::identity(cols);

    // Row op on `a` is mirrored on `u`; inverse op goes into `u_inv` (columns).
    let mut t = 0;
    while t < rows && t < cols {
        let Some((pi, pj)) = find_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            // Clear column t below the pivot.
            let mut progressed = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = div_round(a.get(i, t), a.get(t, t));
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                    u_inv.add_col_multiple(t, i, &q);
                }
                if !a.get(i, t).is_zero() {
                    // Remainder became the new, strictly smaller pivot.
                    a.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    progressed = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = div_round(a.get(t, j), a.get(t, t));
                if !q.is_zero() {
                    let nq = -&q;
                    a.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                    v_inv.add_row_multiple(t, j, &q);
                }
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    progressed = true;
                }
            }
            if !progressed {
                let col_clear = (t + 1..rows).all(|i| a.get(i, t).is_zero());
                let row_clear = (t + 1..cols).all(|j| a.get(t, j).is_zero());
                if col_clear && row_clear {
                    break;
                }
            }
        }

        // Enforce divisibility: the pivot must divide every trailing entry.
        let mut fixed = true;
        'check: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(a.get(i, j) % a.get(t, t)).is_zero() {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                    let neg_one = -BigInt::one();
                    u_inv.add_col_multiple(i, t, &neg_one);
                    fixed = false;
                    break 'check;
                }
            }
        }
        if !fixed {
            continue; // redo elimination at the same t
        }

        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        t += 1;
    }

    let mut invariant_factors = Vec::new();
    for k in 0..rows.min(cols) {
        let e = a.get(k, k);
        if !e.is_zero() {
            invariant_factors.push(e.clone());
        }
    }
    debug_assert!(check_chain(&invariant_factors));
    SmithDecomposition {
        u,
        u_inv,
        v,
        v_inv,
        d: a,
        invariant_factors,
    }
}

fn check_chain(factors: &[BigInt]) -> bool {
    factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
}

/// Round-toward-nearest quotient, so remainders satisfy |r| <= |b|/2.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = num_integer::Integer::div_rem(a, b);
    let two_r = BigInt::from(2) * r.abs();
    if two_r > b.abs() {
        if (a.is_negative()) != (b.is_negative()) {
            q -= 1;
        } else {
            q += 1;
        }
    }
    q
}

pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank()
}

/// Basis of the full integer kernel of `m` (saturated), as matrix columns.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let cols: Vec<usize> = (r..m.cols()).collect();
    snf.v.submatrix_columns(&cols)
}

/// Solve `m * x = b` exactly over the integers, if a solution exists.
pub fn solve(m: &IntegerMatrix, b: &IntegerMatrix) -> Option<IntegerMatrix> {
    assert_eq!(m.rows(), b.rows(), "solve: row mismatch");
    smith_normal_form(m).solve(b)
}

/// Smallest saturated (division-closed) lattice containing the columns of
/// `l`, in column Hermite form: the double integer kernel recovers the
/// rational span intersected with the integer lattice.
pub fn saturate_lattice(l: &IntegerMatrix) -> IntegerMatrix {
    if l.cols() == 0 {
        return l.clone();
    }
    let ortho = kernel_basis(&l.transpose());
    column_hermite_form(&kernel_basis(&ortho.transpose()))
}

/// Does the column lattice of `lattice` contain the vector `v`?
pub fn lattice_contains(lattice: &IntegerMatrix, v: &[BigInt]) -> bool {
    let b = IntegerMatrix::from_columns(v.len(), &[v.to_vec()]);
    solve(lattice, &b).is_some()
}

/// Canonical column-style Hermite form of the column lattice of `m`.
///
/// Zero columns are dropped; pivots are positive and entries to the right of
/// each pivot (within its row) are reduced into [0, pivot). Two matrices span
/// the same column lattice iff their Hermite forms are equal.
pub fn column_hermite_form(m: &IntegerMatrix) -> IntegerMatrix {
    let mut a = m.clone();
    let rows = a.rows();
    let mut pivot_col = 0;
    for row in 0..rows {
        if pivot_col >= a.cols() {
            break;
        }
        // Euclid across columns pivot_col.. on this row.
        loop {
            let mut best: Option<(BigInt, usize)> = None;
            for j in pivot_col..a.cols() {
                let e = a.get(row, j);
                if e.is_zero() {
                    continue;
                }
                let abs = e.abs();
                match &best {
                    Some((b, _)) if *b <= abs => {}
                    _ => best = Some((abs, j)),
                }
            }
            let Some((_, j)) = best else {
                break;
            };
            a.swap_cols(pivot_col, j);
            let mut done = true;
            for j in pivot_col + 1..a.cols() {
                if a.get(row, j).is_zero() {
                    continue;
                }
                let q = div_round(a.get(row, j), a.get(row, pivot_col));
                let nq = -&q;
                a.add_col_multiple(j, pivot_col, &nq);
                if !a.get(row, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(row, pivot_col).is_zero() {
            continue;
        }
        if a.get(row, pivot_col).is_negative() {
            a.negate_col(pivot_col);
        }
        // Reduce earlier columns' entries in this row into [0, pivot).
        let p = a.get(row, pivot_col).clone();
        for j in 0..pivot_col {
            let e = a.get(row, j);
            let q = num_integer::Integer::div_floor(e, &p);
            let nq = -&q;
            a.add_col_multiple(j, pivot_col, &nq);
        }
        pivot_col += 1;
    }
    // Keep the pivot columns only (columns past pivot_col are zero).
    let keep: Vec<usize> = (0..pivot_col).collect();
    let mut h = a.submatrix_columns(&keep);
    // Canonical column order: sort by first nonzero row.
    let mut cols: Vec<Vec<BigInt>> = h.columns();
    cols.sort_by_key(|c| c.iter().position(|e| !e.is_zero()).unwrap_or(usize::MAX));
    h = IntegerMatrix::from_columns(rows, &cols);
    h
}

/// Do two column lattices coincide?
pub fn lattices_equal(a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
    assert_eq!(a.rows(), b.rows());
    column_hermite_form(a) == column_hermite_form(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntegerMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D for {:?}", m);
        assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(m.cols()));
        for w in s.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility broken");
        }
    }

    #[test]
    fn identity_case() {
        let s = smith_normal_form(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
        assert_eq!(
            s.invariant_factors,
            vec![BigInt::one(), BigInt::one(), BigInt::one()]
        );
    }

    #[test]
    fn two_by_two() {
        // d1 = gcd of entries = 2; d1*d2 = |det| = 8, so d2 = 4.
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        check_snf(&m);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn zero_matrix() {
        let m = IntegerMatrix::zeros(2, 3);
        let s = smith_normal_form(&m);
        assert!(s.invariant_factors.is_empty());
        check_snf(&m);
    }

    #[test]
    fn kernel_cases() {
        assert_eq!(kernel_basis(&IntegerMatrix::identity(3)).cols(), 0);
        let m = IntegerMatrix::from_rows(&[vec![1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).is_zero());
        let z = IntegerMatrix::zeros(2, 2);
        assert_eq!(kernel_basis(&z).cols(), 2);
    }

    #[test]
    fn solve_roundtrip() {
        let m = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let b = IntegerMatrix::from_rows(&[vec![4], vec![9]]);
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.mul(&x), b);
        let bad = IntegerMatrix::from_rows(&[vec![1], vec![1]]);
        assert!(solve(&m, &bad).is_none());
    }

    #[test]
    fn hermite_is_lattice_invariant() {
        let l = IntegerMatrix::from_rows(&[vec![2, 1], vec![0, 3]]);
        // Same lattice, different generators (unimodular column mix).
        let g = IntegerMatrix::from_rows(&[vec![1, 1], vec![0, 1]]);
        let l2 = l.mul(&g);
        assert!(lattices_equal(&l, &l2));
        let other = IntegerMatrix::from_rows(&[vec![1, 0], vec![0, 1]]);
        assert!(!lattices_equal(&l, &other));
    }
}
