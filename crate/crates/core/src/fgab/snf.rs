//! Smith normal form with unimodular transforms and their inverses.

use crate::fgab::matrix::IntMatrix;
use crate::scalar::{ext_gcd, IntScalar};

/// `u * a * v = d`, with `d` diagonal, `d[i] | d[i+1]`, `d[i] >= 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition<T> {
    pub u: IntMatrix<T>,
    pub u_inv: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
    pub d: IntMatrix<T>,
    /// Diagonal of `d`, length `min(rows, cols)`.
    pub invariant_factors: Vec<T>,
    /// Number of nonzero invariant factors.
    pub rank: usize,
}

struct Reducer<T> {
    a: IntMatrix<T>,
    u: IntMatrix<T>,
    u_inv: IntMatrix<T>,
    v: IntMatrix<T>,
    v_inv: IntMatrix<T>,
}

impl<T: IntScalar> Reducer<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    // Rows (a, b) <- (p*a + q*b, r*a + s*b) with p*s - q*r = 1.
    fn combine_rows(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) {
        self.a.combine_rows(a, b, p, q, r, s);
        self.u.combine_rows(a, b, p, q, r, s);
        self.u_inv.combine_cols(a, b, s, &-r.clone(), &-q.clone(), p);
    }

    fn combine_cols(&mut self, a: usize, b: usize, p: &T, q: &T, r: &T, s: &T) {
        self.a.combine_cols(a, b, p, q, r, s);
        self.v.combine_cols(a, b, p, q, r, s);
        self.v_inv.combine_rows(a, b, s, &-r.clone(), &-q.clone(), p);
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &T) {
        self.a.add_row_multiple(dst, src, c);
        self.u.add_row_multiple(dst, src, c);
        // inverse of R_dst += c R_src is C_src -= c C_dst on the right
        self.u_inv.add_col_multiple(src, dst, &-c.clone());
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let v = self.a[(i, j)].abs();
                if v.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(_, _, b)| v < *b) {
                    let one = v.is_one();
                    best = Some((i, j, v));
                    if one {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn clear_cross(&mut self, t: usize) -> bool {
        let mut changed = false;
        for i in t + 1..self.a.rows() {
            let below = self.a[(i, t)].clone();
            if below.is_zero() {
                continue;
            }
            let piv = self.a[(t, t)].clone();
            if (below.clone() % piv.clone()).is_zero() {
                let c = -(below / piv);
                self.add_row_multiple(i, t, &c);
            } else {
                let (g, x, y) = ext_gcd(&piv, &below);
                let a = piv / g.clone();
                let b = below / g;
                self.combine_rows(t, i, &x, &y, &-b, &a);
            }
            changed = true;
        }
        for j in t + 1..self.a.cols() {
            let right = self.a[(t, j)].clone();
            if right.is_zero() {
                continue;
            }
            let piv = self.a[(t, t)].clone();
            let (g, x, y) = ext_gcd(&piv, &right);
            let a = piv / g.clone();
            let b = right / g;
            self.combine_cols(t, j, &x, &y, &-b, &a);
            changed = true;
        }
        changed
    }

    fn cross_clear(&self, t: usize) -> bool {
        (t + 1..self.a.rows()).all(|i| self.a[(i, t)].is_zero())
            && (t + 1..self.a.cols()).all(|j| self.a[(t, j)].is_zero())
    }

    fn run(&mut self) {
        let steps = self.a.rows().min(self.a.cols());
        for t in 0..steps {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                while !self.cross_clear(t) {
                    self.clear_cross(t);
                }
                // divisibility of the trailing block by the pivot
                let piv = self.a[(t, t)].clone();
                let bad = (t + 1..self.a.rows())
                    .find(|&i| (t + 1..self.a.cols()).any(|j| !(self.a[(i, j)].clone() % piv.clone()).is_zero()));
                match bad {
                    Some(i) => self.add_row_multiple(t, i, &T::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form<T: IntScalar>(a: &IntMatrix<T>) -> SmithDecomposition<T> {
    let (m, n) = a.shape();
    let mut r = Reducer {
        a: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    r.run();
    let invariant_factors: Vec<T> = (0..m.min(n)).map(|i| r.a[(i, i)].clone()).collect();
    let rank = invariant_factors.iter().filter(|d| !d.is_zero()).count();
    SmithDecomposition { u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv, d: r.a, invariant_factors, rank }
}
