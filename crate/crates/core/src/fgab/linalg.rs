//! Integer linear algebra built on the Smith form: kernels, solvability, spans.

use crate::fgab::hermite::column_hermite_form;
use crate::fgab::matrix::IntMatrix;
use crate::fgab::snf::{smith_normal_form, SmithDecomposition};
use crate::scalar::IntScalar;

/// A ℤ-basis of `{v : a v = 0}` as columns, in canonical (Hermite) form.
pub fn kernel<T: IntScalar>(a: &IntMatrix<T>) -> IntMatrix<T> {
    let s = smith_normal_form(a);
    kernel_from_snf(a.cols(), &s)
}

pub fn kernel_from_snf<T: IntScalar>(cols: usize, s: &SmithDecomposition<T>) -> IntMatrix<T> {
    let keep: Vec<usize> = (s.rank..cols).collect();
    let all: Vec<usize> = (0..cols).collect();
    column_hermite_form(&s.v.select(&all, &keep))
}

/// Some integer solution of `a x = b`, if one exists.
pub fn solve<T: IntScalar>(a: &IntMatrix<T>, b: &[T]) -> Option<Vec<T>> {
    solve_with(&smith_normal_form(a), a.cols(), b)
}

pub fn solve_with<T: IntScalar>(s: &SmithDecomposition<T>, cols: usize, b: &[T]) -> Option<Vec<T>> {
    let y = s.u.mul_vec(b).ok()?;
    let mut z = vec![T::zero(); cols];
    for (i, yi) in y.iter().enumerate() {
        if i < s.rank {
            let d = &s.invariant_factors[i];
            if !(yi.clone() % d.clone()).is_zero() {
                return None;
            }
            z[i] = yi.clone() / d.clone();
        } else if !yi.is_zero() {
            return None;
        }
    }
    s.v.mul_vec(&z).ok()
}

/// Rank over ℚ.
pub fn rank<T: IntScalar>(a: &IntMatrix<T>) -> usize {
    smith_normal_form(a).rank
}

/// Canonical basis of the column span.
pub fn column_span_basis<T: IntScalar>(a: &IntMatrix<T>) -> IntMatrix<T> {
    column_hermite_form(a)
}
