//! Reduced column echelon (Hermite) form of a lattice generating set.

use crate::fgab::matrix::IntMatrix;
use crate::scalar::{ext_gcd, IntScalar};

/// Canonical basis of the lattice spanned by the columns of `gens`.
///
/// Columns of the result have strictly increasing pivot rows, positive
/// pivots, zeros above each pivot, and entries in later pivot rows reduced
/// into `[0, pivot)`. Two generating sets span the same lattice iff their
/// forms agree.
pub fn column_hermite_form<T: IntScalar>(gens: &IntMatrix<T>) -> IntMatrix<T> {
    let mut a = gens.clone();
    let (rows, cols) = a.shape();
    let mut c = 0;
    let mut pivots: Vec<usize> = Vec::new();
    for i in 0..rows {
        if c == cols {
            break;
        }
        // fold every column >= c with a nonzero in row i into column c
        for j in c + 1..cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            if a[(i, c)].is_zero() {
                a.swap_cols(c, j);
                continue;
            }
            let (g, x, y) = ext_gcd(&a[(i, c)], &a[(i, j)]);
            let p = a[(i, c)].clone() / g.clone();
            let q = a[(i, j)].clone() / g;
            a.combine_cols(c, j, &x, &y, &-q, &p);
        }
        if a[(i, c)].is_zero() {
            continue;
        }
        if a[(i, c)].is_negative() {
            a.negate_col(c);
        }
        let piv = a[(i, c)].clone();
        for prev in 0..c {
            let e = a[(i, prev)].clone();
            let k = e.div_floor(&piv);
            if !k.is_zero() {
                a.add_col_multiple(prev, c, &-k);
            }
        }
        pivots.push(i);
        c += 1;
    }
    let keep: Vec<usize> = (0..c).collect();
    let all_rows: Vec<usize> = (0..rows).collect();
    a.select(&all_rows, &keep)
}
