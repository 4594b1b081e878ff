use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::fgab::IntMatrix;
use crate::scalar::IntScalar;

/// A nonnegative rational solution of `a·x = b`, if one exists.
///
/// Phase-one simplex over exact rationals with Bland's rule, so it always terminates.
pub fn nonnegative_solution<T: IntScalar>(a: &IntMatrix<T>, b: &[T]) -> Option<Vec<Ratio<T>>> {
    let (m, n) = a.shape();
    assert_eq!(b.len(), m, "right-hand side length");
    let width = n + m + 1;
    let mut tab: Vec<Vec<Ratio<T>>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = b[i].is_negative();
        let sign = |v: &T| if flip { -v.clone() } else { v.clone() };
        let mut row: Vec<Ratio<T>> = (0..n).map(|j| Ratio::from_integer(sign(&a[(i, j)]))).collect();
        row.extend((0..m).map(|k| if k == i { Ratio::one() } else { Ratio::zero() }));
        row.push(Ratio::from_integer(sign(&b[i])));
        tab.push(row);
    }
    // objective: minimize the sum of artificials, written as reduced costs
    let mut obj = vec![Ratio::zero(); width];
    for row in &tab {
        for j in 0..n {
            obj[j] = obj[j].clone() - row[j].clone();
        }
        obj[width - 1] = obj[width - 1].clone() - row[width - 1].clone();
    }
    tab.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let costs = &tab[m];
        let Some(enter) = (0..n + m).find(|&j| costs[j].is_negative()) else { break };
        let mut leave: Option<(usize, Ratio<T>)> = None;
        for i in 0..m {
            let coef = &tab[i][enter];
            if coef.is_positive() {
                let ratio = tab[i][width - 1].clone() / coef.clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else { break };
        pivot(&mut tab, r, enter);
        basis[r] = enter;
    }
    if !tab[m][width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Ratio::zero(); n];
    for (i, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = tab[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot<T: IntScalar>(tab: &mut [Vec<Ratio<T>>], r: usize, c: usize) {
    let p = tab[r][c].clone();
    for v in tab[r].iter_mut() {
        *v = v.clone() / p.clone();
    }
    let prow = tab[r].clone();
    for (i, row) in tab.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (v, pv) in row.iter_mut().zip(&prow) {
            *v = v.clone() - f.clone() * pv.clone();
        }
    }
}

/// Clears denominators of a nonnegative rational vector.
pub fn clear_denominators<T: IntScalar>(x: &[Ratio<T>]) -> Vec<T> {
    let l = x.iter().fold(T::one(), |acc, v| acc.lcm(v.denom()));
    x.iter().map(|v| v.numer().clone() * (l.clone() / v.denom().clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> IntMatrix<BigInt> {
        IntMatrix::from_i64_rows(rows)
    }

    fn check(a: &IntMatrix<BigInt>, b: &[i64], expect: bool) {
        let bb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
        let x = nonnegative_solution(a, &bb);
        assert_eq!(x.is_some(), expect);
        if let Some(x) = x {
            assert!(x.iter().all(|v| !v.is_negative()));
            for i in 0..a.rows() {
                let s: Ratio<BigInt> =
                    (0..a.cols()).map(|j| Ratio::from_integer(a[(i, j)].clone()) * x[j].clone()).sum();
                assert_eq!(s, Ratio::from_integer(bb[i].clone()));
            }
        }
    }

    #[test]
    fn small_systems() {
        check(&m(&[&[1, 1]]), &[3], true);
        check(&m(&[&[1, -1]]), &[-2], true);
        check(&m(&[&[1, 1]]), &[-1], false);
        check(&m(&[&[2, -2], &[1, -1]]), &[0, 0], true);
        check(&m(&[&[1, 0], &[0, 1], &[1, 1]]), &[1, 1, 3], false);
        check(&m(&[&[2, 3]]), &[1], true);
        check(&IntMatrix::zeros(0, 2), &[], true);
        check(&IntMatrix::zeros(1, 0), &[0], true);
        check(&IntMatrix::zeros(1, 0), &[1], false);
    }

    #[test]
    fn degenerate_cycling_candidate() {
        // a classic degenerate system; Bland's rule must terminate
        let a = m(&[&[1, -1, 0, 1], &[0, 1, -1, 1], &[-1, 0, 1, 1]]);
        check(&a, &[0, 0, 0], true);
        check(&a, &[1, 1, 1], true);
    }
}
