use std::fmt;

use crate::error::{Error, Result};
use crate::fgab::{cokernel, kernel, solve, FgGroup, IntMatrix};
use crate::scalar::IntScalar;

/// A 1-dimensional NCCW complex `A(F₁, F₂, φ₀, φ₁)` given by block sizes and
/// the multiplicity matrices of the two endpoint maps.
///
/// `F₁ = ⊕ M_{k_j}` (p points), `F₂ = ⊕ M_{h_i}` (l intervals), and the
/// `l × p` matrices `alpha`, `beta` record how often `θ_j` appears at the
/// left and right endpoint of interval `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NccwComplex<T> {
    k: Vec<T>,
    h: Vec<T>,
    alpha: IntMatrix<T>,
    beta: IntMatrix<T>,
    unital: bool,
}

impl<T: IntScalar> NccwComplex<T> {
    pub fn new(k: Vec<T>, h: Vec<T>, alpha: IntMatrix<T>, beta: IntMatrix<T>, unital: bool) -> Result<Self> {
        let (p, l) = (k.len(), h.len());
        for (name, m) in [("alpha", &alpha), ("beta", &beta)] {
            if m.shape() != (l, p) {
                return Err(Error::Dimension(format!("{name} is {}x{}, expected {l}x{p} (l x p)", m.rows(), m.cols())));
            }
            if m.entries().any(|v| v.is_negative()) {
                return Err(Error::InvalidComplex(format!("multiplicities must be nonnegative ({name})")));
            }
        }
        if let Some(j) = k.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidComplex(format!("block size k{} must be positive", j + 1)));
        }
        if let Some(i) = h.iter().position(|v| !v.is_positive()) {
            return Err(Error::InvalidComplex(format!("block size h{} must be positive", i + 1)));
        }
        let a = Self { k, h, alpha, beta, unital };
        for (name, m) in [("alpha", &a.alpha), ("beta", &a.beta)] {
            let used = m.mul_vec(&a.k)?;
            for (i, (u, hi)) in used.iter().zip(&a.h).enumerate() {
                if u > hi {
                    return Err(Error::InvalidComplex(format!(
                        "size accounting: {name} row {} uses {u} > h{} = {hi}",
                        i + 1,
                        i + 1
                    )));
                }
                if unital && u != hi {
                    return Err(Error::InvalidComplex(format!(
                        "size accounting: unital complex needs {name} row {} to fill h{} = {hi}, got {u}",
                        i + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(a)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(k: &[i64], h: &[i64], alpha: &[&[i64]], beta: &[&[i64]], unital: bool) -> Result<Self> {
        let p = k.len();
        let mat = |rows: &[&[i64]]| -> Result<IntMatrix<T>> {
            let rows = rows.iter().map(|r| r.iter().map(|&v| T::int(v)).collect()).collect();
            IntMatrix::from_rows(rows, p)
        };
        Self::new(
            k.iter().map(|&v| T::int(v)).collect(),
            h.iter().map(|&v| T::int(v)).collect(),
            mat(alpha)?,
            mat(beta)?,
            unital,
        )
    }

    pub fn p(&self) -> usize {
        self.k.len()
    }

    pub fn l(&self) -> usize {
        self.h.len()
    }

    pub fn k(&self) -> &[T] {
        &self.k
    }

    pub fn h(&self) -> &[T] {
        &self.h
    }

    pub fn alpha(&self) -> &IntMatrix<T> {
        &self.alpha
    }

    pub fn beta(&self) -> &IntMatrix<T> {
        &self.beta
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    /// `α − β`.
    pub fn difference(&self) -> IntMatrix<T> {
        self.alpha.sub(&self.beta).expect("same shape")
    }

    /// Restriction of all data to the points `s` and intervals `t`.
    pub fn restrict(&self, s: &[usize], t: &[usize], unital: bool) -> Result<Self> {
        Self::new(
            s.iter().map(|&j| self.k[j].clone()).collect(),
            t.iter().map(|&i| self.h[i].clone()).collect(),
            self.alpha.select(t, s),
            self.beta.select(t, s),
            unital,
        )
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut k = self.k.clone();
        k.extend(other.k.iter().cloned());
        let mut h = self.h.clone();
        h.extend(other.h.iter().cloned());
        Self {
            k,
            h,
            alpha: self.alpha.block_diag(&other.alpha),
            beta: self.beta.block_diag(&other.beta),
            unital: self.unital && other.unital,
        }
    }

    /// Intervals touching some point of `s` at either endpoint.
    pub fn adjacent(&self, s: &[usize]) -> Vec<usize> {
        (0..self.l())
            .filter(|&i| s.iter().any(|&j| !self.alpha[(i, j)].is_zero() || !self.beta[(i, j)].is_zero()))
            .collect()
    }

    pub fn k_theory(&self) -> KData<T> {
        KData::new(self)
    }
}

impl<T: IntScalar> fmt::Display for NccwComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[T]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "k=({}) h=({}) alpha={} beta={}{}",
            list(&self.k),
            list(&self.h),
            self.alpha,
            self.beta,
            if self.unital { " unital" } else { "" }
        )
    }
}

/// `K₀ = Ker(α−β)` with positive cone `Ker ∩ ℤ₊ᵖ`, and `K₁ = ℤˡ / Im(α−β)`.
#[derive(Clone, Debug)]
pub struct KData<T> {
    k0_basis: IntMatrix<T>,
    k0: FgGroup<T>,
    k1: FgGroup<T>,
}

impl<T: IntScalar> KData<T> {
    pub fn new(a: &NccwComplex<T>) -> Self {
        let d = a.difference();
        let basis = kernel(&d);
        let k0 = FgGroup::free(basis.cols());
        KData { k0_basis: basis, k0, k1: cokernel(&d) }
    }

    /// Columns are the chosen ℤ-basis of `Ker(α−β) ⊂ ℤᵖ` (column Hermite form).
    pub fn k0_basis(&self) -> &IntMatrix<T> {
        &self.k0_basis
    }

    pub fn k0(&self) -> &FgGroup<T> {
        &self.k0
    }

    pub fn k1(&self) -> &FgGroup<T> {
        &self.k1
    }

    /// Rank vector in `ℤᵖ` of an element given in basis coordinates.
    pub fn rank_vector(&self, coords: &[T]) -> Result<Vec<T>> {
        self.k0_basis.mul_vec(coords)
    }

    /// Basis coordinates of a rank vector; errors if it is not in the kernel.
    pub fn coordinates(&self, rank_vector: &[T]) -> Result<Vec<T>> {
        if rank_vector.len() != self.k0_basis.rows() {
            return Err(Error::Dimension(format!(
                "rank vector of length {}, expected {}",
                rank_vector.len(),
                self.k0_basis.rows()
            )));
        }
        solve(&self.k0_basis, rank_vector)
            .ok_or_else(|| Error::NotWellDefined("rank vector is not in Ker(alpha - beta)".into()))
    }

    /// Membership in `K₀⁺`: the rank vector is nonnegative.
    pub fn is_positive(&self, coords: &[T]) -> Result<bool> {
        Ok(self.rank_vector(coords)?.iter().all(|v| !v.is_negative()))
    }
}
