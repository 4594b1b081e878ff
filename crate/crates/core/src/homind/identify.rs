use std::fmt;

use crate::error::Result;
use crate::fgab::{kernel, smith_normal_form, GroupHom, IntMatrix};
use crate::homind::system::IndSystem;
use crate::scalar::IntScalar;

/// `⊕ᵢ ℤ[1/sᵢ] ⊕ torsion`, with the basis (at the first constant stage) realizing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedLimit<T> {
    /// Diagonal of the triangularized bond, one entry per basis vector (may contain 0, ±1).
    pub diagonal: Vec<T>,
    /// Columns: the basis, in the stage group's generator coordinates.
    pub basis: IntMatrix<T>,
    /// Torsion invariant factors carried along unchanged (identity bonds only).
    pub torsion: Vec<T>,
    /// Stage at which `basis` lives.
    pub stage: usize,
}

impl<T: IntScalar> LocalizedLimit<T> {
    /// `|sᵢ|` for the summands that survive, sorted; 1 stands for ℤ.
    pub fn localizations(&self) -> Vec<T> {
        let mut v: Vec<T> = self.diagonal.iter().filter(|s| !s.is_zero()).map(|s| s.abs()).collect();
        v.sort();
        v
    }
}

impl<T: IntScalar> fmt::Display for LocalizedLimit<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .localizations()
            .iter()
            .map(|s| if s.is_one() { "Z".to_string() } else { format!("Z[1/{s}]") })
            .collect();
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

const DIVISOR_SEARCH_LIMIT: i64 = 1_000_000;

/// Identifies the colimit of an eventually constant system, when the constant bond
/// is the identity or is triangularizable over ℤ with off-diagonal entries removable by
/// elementary conjugation. `None` means "unidentified".
pub fn identify_localized_limit<T: IntScalar>(sys: &IndSystem<T>) -> Result<Option<LocalizedLimit<T>>> {
    let Some(c) = sys.constant_from() else { return Ok(None) };
    let bond = sys.bond(c)?;
    let next = sys.bond(c + 1)?;
    if bond.matrix() != next.matrix() || bond.source().relations() != next.source().relations() {
        return Ok(None);
    }
    let g = bond.source();
    if bond.source().generators() != bond.target().generators() {
        return Ok(None);
    }
    if bond.equals(&GroupHom::identity(g))? {
        let rank = g.rank();
        // free part in SNF coordinates
        let orders = g.coordinate_orders().to_vec();
        let free_cols: Vec<Vec<T>> = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_zero())
            .map(|(i, _)| {
                let mut e = vec![T::zero(); orders.len()];
                e[i] = T::one();
                g.from_normal_coordinates(&e).expect("length")
            })
            .collect();
        let basis = IntMatrix::from_columns(g.generators(), &free_cols)?;
        return Ok(Some(LocalizedLimit { diagonal: vec![T::one(); rank], basis, torsion: g.torsion(), stage: c }));
    }
    if !g.relations().is_zero() {
        return Ok(None);
    }
    let Some((q, t)) = triangularize(bond.matrix()) else { return Ok(None) };
    let Some((q2, d)) = eliminate(&t) else { return Ok(None) };
    let basis = q.mul(&q2)?;
    Ok(Some(LocalizedLimit { diagonal: d, basis, torsion: Vec::new(), stage: c }))
}

fn divisors<T: IntScalar>(n: &T) -> Option<Vec<T>> {
    let n = n.abs();
    let small = n.to_i64()?;
    if small > DIVISOR_SEARCH_LIMIT * DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1i64;
    while d * d <= small {
        if small % d == 0 {
            out.push(T::int(d));
            if d != small / d {
                out.push(T::int(small / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// Characteristic polynomial coefficients via Faddeev–LeVerrier, `c[k]` of `λ^k`.
fn char_poly<T: IntScalar>(m: &IntMatrix<T>) -> Vec<T> {
    let n = m.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&mk).expect("square");
        let c_prev = coeffs[n - k + 1].clone();
        for i in 0..n {
            next[(i, i)] = next[(i, i)].clone() + c_prev.clone();
        }
        mk = next;
        let am = m.mul(&mk).expect("square");
        let tr = (0..n).fold(T::zero(), |acc, i| acc + am[(i, i)].clone());
        coeffs[n - k] = -tr / T::count(k);
    }
    coeffs
}

fn eval_poly<T: IntScalar>(c: &[T], x: &T) -> T {
    c.iter().rev().fold(T::zero(), |acc, a| acc * x.clone() + a.clone())
}

fn integer_eigenvalue<T: IntScalar>(m: &IntMatrix<T>) -> Option<T> {
    let c = char_poly(m);
    if c[0].is_zero() {
        return Some(T::zero());
    }
    for d in divisors(&c[0])? {
        for cand in [d.clone(), -d] {
            if eval_poly(&c, &cand).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// Unimodular `q` with `q⁻¹ m q` upper triangular, found one integer eigenvector at a time.
pub(crate) fn triangularize<T: IntScalar>(m: &IntMatrix<T>) -> Option<(IntMatrix<T>, IntMatrix<T>)> {
    let (q, q_inv) = triangularizing_basis(m)?;
    let t = q_inv.mul(m).ok()?.mul(&q).ok()?;
    Some((q, t))
}

fn triangularizing_basis<T: IntScalar>(m: &IntMatrix<T>) -> Option<(IntMatrix<T>, IntMatrix<T>)> {
    let n = m.rows();
    if n == 0 {
        return Some((IntMatrix::identity(0), IntMatrix::identity(0)));
    }
    let lambda = integer_eigenvalue(m)?;
    let shifted = m.sub(&IntMatrix::scalar(n, lambda)).ok()?;
    let eig = kernel(&shifted).column(0);
    // eig is primitive, so u·eig = ±e₁ and u⁻¹ (sign-fixed) has eig as first column
    let s = smith_normal_form(&IntMatrix::column_vector(&eig));
    let sign = s.d[(0, 0)].clone() * s.v[(0, 0)].clone();
    let mut q1 = s.u_inv.clone();
    let mut q1_inv = s.u.clone();
    if sign.is_negative() {
        q1.negate_col(0);
        q1_inv.negate_row(0);
    }
    let conj = q1_inv.mul(m).ok()?.mul(&q1).ok()?;
    let rest_idx: Vec<usize> = (1..n).collect();
    let (q_rest, q_rest_inv) = triangularizing_basis(&conj.select(&rest_idx, &rest_idx))?;
    let q = q1.mul(&IntMatrix::identity(1).block_diag(&q_rest)).ok()?;
    let q_inv = IntMatrix::identity(1).block_diag(&q_rest_inv).mul(&q1_inv).ok()?;
    Some((q, q_inv))
}

/// Conjugates an upper-triangular `t` by elementary matrices to clear entries between
/// distinct diagonal values; returns the accumulated basis change and the diagonal.
pub(crate) fn eliminate<T: IntScalar>(t: &IntMatrix<T>) -> Option<(IntMatrix<T>, Vec<T>)> {
    let n = t.rows();
    let mut t = t.clone();
    let mut q = IntMatrix::identity(n);
    for dist in 1..n {
        for i in 0..n - dist {
            let j = i + dist;
            if t[(i, j)].is_zero() {
                continue;
            }
            let gap = t[(i, i)].clone() - t[(j, j)].clone();
            if gap.is_zero() {
                continue;
            }
            if !t[(i, j)].is_multiple_of(&gap) {
                return None;
            }
            let x = -(t[(i, j)].clone() / gap);
            // t ← (I − x E_ij) t (I + x E_ij)
            t.add_col_multiple(j, i, &x);
            t.add_row_multiple(i, j, &(-x.clone()));
            q.add_col_multiple(j, i, &x);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if !t[(i, j)].is_zero() && t[(i, i)] != t[(j, j)] {
                return None;
            }
        }
    }
    Some((q, (0..n).map(|i| t[(i, i)].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgGroup;
    use num_bigint::BigInt;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn constant(rows: &[&[i64]]) -> IndSystem<BigInt> {
        let m = IntMatrix::from_i64_rows(rows);
        let g = FgGroup::free(m.rows());
        IndSystem::constant(GroupHom::new(g.clone(), g, m).unwrap())
    }

    fn check_similarity(m: &IntMatrix<BigInt>) {
        let (q, t) = triangularize(m).unwrap();
        assert!(q.is_unimodular());
        assert_eq!(m.mul(&q).unwrap(), q.mul(&t).unwrap());
        for i in 0..t.rows() {
            for j in 0..i {
                assert!(t[(i, j)] == b(0));
            }
        }
    }

    #[test]
    fn triangularizes() {
        check_similarity(&IntMatrix::from_i64_rows(&[&[3, 0], &[1, 2]]));
        check_similarity(&IntMatrix::from_i64_rows(&[&[5, 0], &[2, 3]]));
        check_similarity(&IntMatrix::from_i64_rows(&[&[2, 1, 0], &[0, 2, 0], &[1, 1, 3]]));
        assert!(triangularize(&IntMatrix::<BigInt>::from_i64_rows(&[&[0, 1], &[2, 0]])).is_none());
    }

    #[test]
    fn paper_style_limits() {
        let l = identify_localized_limit(&constant(&[&[3, 0], &[1, 2]])).unwrap().unwrap();
        assert_eq!(l.localizations(), vec![b(2), b(3)]);
        assert_eq!(l.to_string(), "Z[1/2] + Z[1/3]");
        let l = identify_localized_limit(&constant(&[&[2]])).unwrap().unwrap();
        assert_eq!(l.to_string(), "Z[1/2]");
        let l = identify_localized_limit(&constant(&[&[1]])).unwrap().unwrap();
        assert_eq!(l.to_string(), "Z");
        let l = identify_localized_limit(&constant(&[&[5, 0], &[2, 3]])).unwrap().unwrap();
        assert_eq!(l.localizations(), vec![b(3), b(5)]);
    }

    #[test]
    fn basis_diagonalizes() {
        let m = IntMatrix::from_i64_rows(&[&[3, 0], &[1, 2]]);
        let l = identify_localized_limit(&constant(&[&[3, 0], &[1, 2]])).unwrap().unwrap();
        let lhs = m.mul(&l.basis).unwrap();
        for (i, s) in l.diagonal.iter().enumerate() {
            let col: Vec<BigInt> = l.basis.column(i).iter().map(|v| v * s).collect();
            assert_eq!(lhs.column(i), col);
        }
    }

    #[test]
    fn unidentified_cases() {
        assert!(identify_localized_limit(&constant(&[&[0, 1], &[2, 0]])).unwrap().is_none());
        // diagonal 3 and 1 with off-diagonal 1: 2 ∤ 1
        assert!(identify_localized_limit(&constant(&[&[3, 1], &[0, 1]])).unwrap().is_none());
        let g = FgGroup::<BigInt>::free(1);
        let sys = IndSystem::new(move |_| Ok(GroupHom::identity(&g)), None);
        assert!(identify_localized_limit(&sys).unwrap().is_none());
    }

    #[test]
    fn torsion_with_identity_bond() {
        let g = FgGroup::<BigInt>::cyclic(b(4)).direct_sum(&FgGroup::free(1));
        let l = identify_localized_limit(&IndSystem::constant(GroupHom::identity(&g))).unwrap().unwrap();
        assert_eq!(l.to_string(), "Z + Z_4");
    }
}
