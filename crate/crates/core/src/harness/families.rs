//! Stage families of the built-in constructions, materialized with exact integers.

use crate::error::{Error, Result};
use crate::fgab::IntMatrix;
use crate::homind::{Assignment, ComplexSystem, Degree, Eval, MapDescription};
use crate::nccw::NccwComplex;
use crate::scalar::IntScalar;

use Eval::{AtInterior as I, AtPoint as P, FullPath as F};

fn pow<T: IntScalar>(base: i64, e: usize) -> T {
    T::int(base).pow_u32(e as u32)
}

fn terms<T: IntScalar>(items: &[(i64, Eval)]) -> Assignment<T> {
    items.iter().map(|&(m, e)| (T::int(m), e)).collect()
}

fn scaled<T: IntScalar>(base: &[i64], s: &T) -> Vec<T> {
    base.iter().map(|&v| T::int(v) * s.clone()).collect()
}

fn mat<T: IntScalar>(rows: &[&[i64]]) -> IntMatrix<T> {
    IntMatrix::from_i64_rows(rows)
}

const C_ALPHA: [&[i64]; 2] = [&[2, 0, 0], &[1, 0, 1]];
const C_BETA: [&[i64]; 2] = [&[0, 2, 0], &[0, 1, 1]];

/// `C_n`: `k = 3ⁿ(1,1,1)`, `h = 3ⁿ(2,2)`.
pub fn c_n<T: IntScalar>(n: usize) -> NccwComplex<T> {
    let s = pow::<T>(3, n);
    NccwComplex::new(scaled(&[1, 1, 1], &s), scaled(&[2, 2], &s), mat(&C_ALPHA), mat(&C_BETA), true)
        .expect("C_n is valid")
}

/// Dimension drop algebra `Ĩ_q`: `k = (1,1)`, `h = q`, `α = (q,0)`, `β = (0,q)`.
pub fn dimension_drop<T: IntScalar>(q: i64) -> NccwComplex<T> {
    NccwComplex::from_i64(&[1, 1], &[q], &[&[q, 0]], &[&[0, q]], true).expect("dimension drop algebra")
}

fn psi_points<T: IntScalar>() -> Vec<Assignment<T>> {
    vec![terms(&[(1, P(0)), (1, I(0))]), terms(&[(1, P(1)), (1, I(0))]), terms(&[(1, P(2)), (1, I(1))])]
}

fn psi_intervals<T: IntScalar>() -> Vec<Assignment<T>> {
    vec![terms(&[(1, F(0)), (2, I(0))]), terms(&[(1, F(1)), (1, I(0)), (1, I(1))])]
}

/// `ψ_{n,n+1}: C_n → C_{n+1}`.
pub fn psi<T: IntScalar>(n: usize) -> MapDescription<T> {
    MapDescription::new(c_n(n), c_n(n + 1), psi_points(), psi_intervals(), true).expect("psi is valid")
}

/// The stationary system `(C_n, ψ_{n,n+1})` with the ideal at `θ₃`.
pub fn thm33_system<T: IntScalar>() -> ComplexSystem<T> {
    ComplexSystem::new(|n| Ok(psi(n)), Some(0), Some(vec![2]))
}

/// Full matrix algebras `M_{s₁} ⊕ … ⊕ M_{s_r}` as a complex with no intervals.
pub fn matrix_sum<T: IntScalar>(sizes: Vec<T>) -> NccwComplex<T> {
    let p = sizes.len();
    NccwComplex::new(sizes, Vec::new(), IntMatrix::zeros(0, p), IntMatrix::zeros(0, p), true).expect("matrix algebras")
}

/// `D_n = M_{3ⁿ} ⊕ … ⊕ M_3 ⊕ ℂ ⊕ M_3 ⊕ … ⊕ M_{3ⁿ}`.
pub fn d_n<T: IntScalar>(n: usize) -> NccwComplex<T> {
    matrix_sum((0..2 * n + 1).map(|i| pow(3, i.abs_diff(n))).collect())
}

/// `D'_n`: `2n+1` copies of `M_{3ⁿ}`.
pub fn d_prime_n<T: IntScalar>(n: usize) -> NccwComplex<T> {
    matrix_sum(vec![pow(3, n); 2 * n + 1])
}

/// Stage `n` of the matrix-tail constructions: `C_{n+1} ⊕ D_n` (or `D'_n` when `uhf`).
pub fn tail_stage<T: IntScalar>(n: usize, uhf: bool) -> NccwComplex<T> {
    c_n(n + 1).direct_sum(&if uhf { d_prime_n(n) } else { d_n(n) })
}

/// `ρ_{n,n+1}` (`primed = false`) or `ρ'_{n,n+1}`; with `uhf`, the variants with `x^{~3}`.
pub fn rho<T: IntScalar>(n: usize, primed: bool, uhf: bool) -> MapDescription<T> {
    let mult = if uhf { 3 } else { 1 };
    let mut points = psi_points();
    points.push(terms(&[(1, P(0))]));
    for m in 0..2 * n + 1 {
        points.push(terms(&[(mult, P(3 + m))]));
    }
    points.push(terms(&[(1, P(if primed { 1 } else { 0 }))]));
    MapDescription::new(tail_stage(n, uhf), tail_stage(n + 1, uhf), points, psi_intervals(), true)
        .expect("rho is valid")
}

pub fn rho_system<T: IntScalar>(primed: bool, uhf: bool) -> ComplexSystem<T> {
    ComplexSystem::new(move |n| Ok(rho(n, primed, uhf)), None, Some(vec![2])).with_constant_from(Degree::K1, Some(0))
}

/// `l_n` for `n ≥ 1`: `l₁ = 9`, `l_{n+1} = 2l_n + 3^{n+1} + 2·4^{n−1} + (3+…+3ⁿ)·4ⁿ`.
pub fn l_seq<T: IntScalar>(n: usize) -> Result<T> {
    if n == 0 {
        return Err(Error::InvalidArgument("l_n is defined for n >= 1".into()));
    }
    let mut l = T::int(9);
    for m in 1..n {
        let geometric = (1..=m).fold(T::zero(), |acc, e| acc + pow::<T>(3, e));
        l = T::int(2) * l + pow(3, m + 1) + T::int(2) * pow(4, m - 1) + geometric * pow(4, m);
    }
    Ok(l)
}

/// `C'_n` (`n ≥ 1`): `k = (3ⁿ, 3ⁿ, l_n)`, `h = (2·3ⁿ, l_n + 3ⁿ)`.
pub fn c_prime_n<T: IntScalar>(n: usize) -> Result<NccwComplex<T>> {
    let s = pow::<T>(3, n);
    let l = l_seq::<T>(n)?;
    NccwComplex::new(
        vec![s.clone(), s.clone(), l.clone()],
        vec![T::int(2) * s.clone(), l + s],
        mat(&C_ALPHA),
        mat(&C_BETA),
        true,
    )
}

/// Stage `s` of the full-extension construction: `C'_{s+2} ⊕ D_{s+1}` (paper index `n = s + 1`).
pub fn sec5_stage<T: IntScalar>(s: usize) -> Result<NccwComplex<T>> {
    Ok(c_prime_n(s + 2)?.direct_sum(&d_n(s + 1)))
}

/// `τ_{n,n+1}` or `τ'_{n,n+1}` at stage `s` (paper `n = s + 1`), non-unital: the target
/// blocks `θ₃` and the second interval keep the slack left by the size recursion.
pub fn tau<T: IntScalar>(s: usize, primed: bool) -> Result<MapDescription<T>> {
    let n = s + 1;
    let copies = T::int(2) * pow::<T>(4, n - 1);
    let d_points: Vec<(T, Eval)> = (0..2 * n + 1).map(|m| (copies.clone(), P(3 + m))).collect();
    let mut theta3: Assignment<T> = terms(&[(1, P(2)), (1, I(1))]);
    theta3.extend(d_points.iter().cloned());
    let mut points = vec![terms(&[(1, P(0)), (1, I(0))]), terms(&[(1, P(1)), (1, I(0))]), theta3];
    points.push(terms(&[(1, P(0))]));
    for m in 0..2 * n + 1 {
        points.push(terms(&[(1, P(3 + m))]));
    }
    points.push(terms(&[(1, P(if primed { 1 } else { 0 }))]));
    let mut block2: Assignment<T> = terms(&[(1, F(1)), (1, I(0)), (1, I(1))]);
    block2.extend(d_points);
    let intervals = vec![terms(&[(1, F(0)), (2, I(0))]), block2];
    MapDescription::new(sec5_stage(s)?, sec5_stage(s + 1)?, points, intervals, false)
}

pub fn tau_system<T: IntScalar>(primed: bool) -> ComplexSystem<T> {
    ComplexSystem::new(move |s| tau(s, primed), None, Some(vec![2])).with_constant_from(Degree::K1, Some(0))
}

/// The full size consumed in `θ₃` of stage `s + 1` by `τ`, and the resulting slack.
pub fn tau_slack<T: IntScalar>(s: usize) -> Result<(T, T)> {
    let d = tau::<T>(s, false)?;
    let (pts, _) = d.slack();
    let k3 = d.target().k()[2].clone();
    Ok((k3.clone() - pts[2].clone(), pts[2].clone()))
}

/// `E_n = M_{5^{n−1}}(F)`, `n ≥ 1`.
pub fn e_n<T: IntScalar>(n: usize) -> Result<NccwComplex<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("E_n is defined for n >= 1".into()));
    }
    let s = pow::<T>(5, n - 1);
    NccwComplex::new(
        scaled(&[1, 2, 1, 2], &s),
        scaled(&[4, 4], &s),
        mat(&[&[4, 0, 0, 0], &[0, 1, 2, 0]]),
        mat(&[&[0, 2, 0, 0], &[0, 0, 0, 2]]),
        true,
    )
}

/// `F'`: `f(0) = λ^{~4}`, `f(1) = μ^{~2}`.
pub fn f_prime<T: IntScalar>() -> NccwComplex<T> {
    NccwComplex::from_i64(&[1, 2], &[4], &[&[4, 0]], &[&[0, 2]], true).expect("F' is valid")
}

/// `φ_{n,n+1}: E_n → E_{n+1}` at stage `s` (`n = s + 1`).
pub fn phi<T: IntScalar>(s: usize) -> Result<MapDescription<T>> {
    let points = vec![
        terms(&[(1, P(0)), (1, I(0))]),
        terms(&[(1, P(1)), (2, I(0))]),
        terms(&[(1, P(2)), (1, I(1))]),
        terms(&[(1, P(3)), (1, I(0)), (1, I(1))]),
    ];
    let intervals = vec![terms(&[(1, F(0)), (4, I(0))]), terms(&[(1, F(1)), (2, I(0)), (2, I(1))])];
    MapDescription::new(e_n(s + 1)?, e_n(s + 2)?, points, intervals, true)
}

/// `(E_n, φ_{n,n+1})` with the ideal generated by the projection of class `(0,0,1,1)`.
pub fn sec6_system<T: IntScalar>() -> ComplexSystem<T> {
    ComplexSystem::new(phi, Some(0), Some(vec![2, 3]))
}
