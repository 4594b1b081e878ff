use crate::error::{Error, Result};
use crate::fgab::group::{exact_at, FgGroup, GroupHom};
use crate::fgab::linalg::solve;
use crate::fgab::matrix::IntMatrix;
use crate::scalar::IntScalar;

/// `0 → left →inj→ mid →surj→ right → 0`, not yet known to be exact.
#[derive(Clone, Debug)]
pub struct ShortExactSeq<T> {
    pub inj: GroupHom<T>,
    pub surj: GroupHom<T>,
}

impl<T: IntScalar> ShortExactSeq<T> {
    pub fn new(inj: GroupHom<T>, surj: GroupHom<T>) -> Result<Self> {
        if inj.target().generators() != surj.source().generators() {
            return Err(Error::Dimension("the two maps do not share a middle group".into()));
        }
        Ok(ShortExactSeq { inj, surj })
    }

    pub fn left(&self) -> &FgGroup<T> {
        self.inj.source()
    }

    pub fn mid(&self) -> &FgGroup<T> {
        self.inj.target()
    }

    pub fn right(&self) -> &FgGroup<T> {
        self.surj.target()
    }

    pub fn is_exact(&self) -> Result<bool> {
        Ok(self.inj.is_injective()? && self.surj.is_surjective()? && exact_at(&self.inj, &self.surj)?)
    }

    /// A matrix `S` (mid × right generators) with `surj ∘ S = id`, if the sequence splits.
    pub fn section(&self) -> Result<Option<IntMatrix<T>>> {
        if !self.is_exact()? {
            return Err(Error::NotExact("purity is only defined for short exact sequences".into()));
        }
        find_section(self.surj.matrix(), self.mid().relations(), self.right().relations())
    }

    /// Pure ⟺ split, since the quotient is finitely generated.
    pub fn is_pure(&self) -> Result<bool> {
        Ok(self.section()?.is_some())
    }
}

pub fn is_exact<T: IntScalar>(s: &ShortExactSeq<T>) -> Result<bool> {
    s.is_exact()
}

pub fn is_pure<T: IntScalar>(s: &ShortExactSeq<T>) -> Result<bool> {
    s.is_pure()
}

/// Kronecker product `a ⊗ b`.
pub fn kronecker<T: IntScalar>(a: &IntMatrix<T>, b: &IntMatrix<T>) -> IntMatrix<T> {
    let mut out = IntMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a[(i, j)].is_zero() {
                continue;
            }
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out[(i * b.rows() + r, j * b.cols() + c)] = a[(i, j)].clone() * b[(r, c)].clone();
                }
            }
        }
    }
    out
}

/// Solves `S·R_H = R_G·W₁`, `P·S − I = R_H·W₂` for integer `S, W₁, W₂` (column-major vectorization).
fn find_section<T: IntScalar>(
    p: &IntMatrix<T>,
    rel_g: &IntMatrix<T>,
    rel_h: &IntMatrix<T>,
) -> Result<Option<IntMatrix<T>>> {
    let gg = rel_g.rows();
    let gh = rel_h.rows();
    let rg = rel_g.cols();
    let rh = rel_h.cols();
    let ns = gg * gh;
    let nw1 = rg * rh;
    let nw2 = rh * gh;

    let top = kronecker(&rel_h.transpose(), &IntMatrix::identity(gg))
        .hstack(&kronecker(&IntMatrix::identity(rh), rel_g).neg())?
        .hstack(&IntMatrix::zeros(gg * rh, nw2))?;
    let bottom = kronecker(&IntMatrix::identity(gh), p)
        .hstack(&IntMatrix::zeros(gh * gh, nw1))?
        .hstack(&kronecker(&IntMatrix::identity(gh), rel_h).neg())?;
    let system = top.vstack(&bottom)?;

    let mut rhs = vec![T::zero(); gg * rh];
    for c in 0..gh {
        for r in 0..gh {
            rhs.push(if r == c { T::one() } else { T::zero() });
        }
    }
    let Some(x) = solve(&system, &rhs) else { return Ok(None) };
    let mut s = IntMatrix::zeros(gg, gh);
    for c in 0..gh {
        for r in 0..gg {
            s[(r, c)] = x[c * gg + r].clone();
        }
    }
    debug_assert_eq!(x.len(), ns + nw1 + nw2);
    Ok(Some(s))
}

/// Both squares of
/// ```text
/// 0 → A  → B  → C  → 0
///     ↓a   ↓b   ↓c
/// 0 → A' → B' → C' → 0
/// ```
/// commute as maps of presented groups.
pub fn check_ladder<T: IntScalar>(
    top: &ShortExactSeq<T>,
    bottom: &ShortExactSeq<T>,
    verticals: (&GroupHom<T>, &GroupHom<T>, &GroupHom<T>),
) -> Result<bool> {
    let (a, b, c) = verticals;
    let shape_ok = a.source().generators() == top.left().generators()
        && a.target().generators() == bottom.left().generators()
        && b.source().generators() == top.mid().generators()
        && b.target().generators() == bottom.mid().generators()
        && c.source().generators() == top.right().generators()
        && c.target().generators() == bottom.right().generators();
    if !shape_ok {
        return Err(Error::Dimension("ladder verticals do not match the rows".into()));
    }
    let left = top.inj.then(b)?.equals(&a.then(&bottom.inj)?)?;
    let right = top.surj.then(c)?.equals(&b.then(&bottom.surj)?)?;
    Ok(left && right)
}
