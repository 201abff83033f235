//! Sign conventions for graded objects live here and nowhere else.
//! Every module that needs a sign calls into these functions.

/// Sign picked up when a degree-`dg` symbol moves past a degree-`da` symbol.
pub fn koszul_sign(dg: i64, da: i64) -> i64 {
    if (dg & 1) == 1 && (da & 1) == 1 {
        -1
    } else {
        1
    }
}

/// Sign of reordering graded factors. `perm[i]` is the input position whose
/// factor lands in output slot `i`; `degrees[j]` is the degree of input
/// factor `j`. Each pair of factors that crosses contributes a Koszul sign.
pub fn permutation_sign_graded(degrees: &[i64], perm: &[usize]) -> i64 {
    assert_eq!(degrees.len(), perm.len());
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign *= koszul_sign(degrees[perm[i]], degrees[perm[j]]);
            }
        }
    }
    sign
}

/// Plain (ungraded) sign of a permutation in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i64 {
    let mut sign = 1;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                sign = -sign;
            }
        }
    }
    sign
}
