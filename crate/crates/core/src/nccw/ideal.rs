use std::fmt;

use crate::error::{Error, Result};
use crate::fgab::{GroupHom, IntMatrix, ShortExactSeq};
use crate::nccw::complex::{KData, NccwComplex};
use crate::nccw::lp::{clear_denominators, nonnegative_solution};
use crate::scalar::IntScalar;

/// Support of a compact ideal: points `s` and the adjacent intervals `t` (0-based, sorted).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactIdealSpec {
    s: Vec<usize>,
    t: Vec<usize>,
}

impl CompactIdealSpec {
    pub fn points(&self) -> &[usize] {
        &self.s
    }

    pub fn intervals(&self) -> &[usize] {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_empty()
    }

    /// Points as 1-based labels.
    pub fn labels(&self) -> Vec<usize> {
        self.s.iter().map(|j| j + 1).collect()
    }
}

impl fmt::Display for CompactIdealSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "S={{{}}} T={{{}}}", set(&self.s), set(&self.t))
    }
}

/// A nonnegative `v ∈ Ker((α−β)[T×S])` with every coordinate positive, if any.
///
/// Such a `v` is the rank vector of a projection whose ideal has support exactly `S`.
pub fn generating_projection<T: IntScalar>(a: &NccwComplex<T>, s: &[usize], t: &[usize]) -> Option<Vec<T>> {
    let d = a.difference().select(t, s);
    // v = 1 + w with w ≥ 0
    let ones = vec![T::one(); s.len()];
    let rhs: Vec<T> = d.mul_vec(&ones).expect("shape").into_iter().map(|v| -v).collect();
    let w = nonnegative_solution(&d, &rhs)?;
    let w = clear_denominators(&w.iter().map(|x| x + num_rational::Ratio::from_integer(T::one())).collect::<Vec<_>>());
    Some(w)
}

/// Validates `S` (0-based point indices) and forms the spec with `T = adj(S)`.
pub fn make_ideal_spec<T: IntScalar>(a: &NccwComplex<T>, s: &[usize]) -> Result<CompactIdealSpec> {
    let mut s = s.to_vec();
    s.sort_unstable();
    s.dedup();
    if let Some(&j) = s.iter().find(|&&j| j >= a.p()) {
        return Err(Error::InvalidIdeal(format!("point {} does not exist (p = {})", j + 1, a.p())));
    }
    let t = a.adjacent(&s);
    if !s.is_empty() && generating_projection(a, &s, &t).is_none() {
        let spec = CompactIdealSpec { s, t };
        return Err(Error::InvalidIdeal(format!("no projection-generated ideal has exactly the support {spec}")));
    }
    Ok(CompactIdealSpec { s, t })
}

/// `S ⊆ {1..p}` given as 1-based labels.
pub fn make_ideal_spec_labels<T: IntScalar>(a: &NccwComplex<T>, labels: &[usize]) -> Result<CompactIdealSpec> {
    if labels.contains(&0) {
        return Err(Error::InvalidIdeal("point labels start at 1".into()));
    }
    make_ideal_spec(a, &labels.iter().map(|j| j - 1).collect::<Vec<_>>())
}

fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|x| !set.contains(x)).collect()
}

pub fn ideal_complex<T: IntScalar>(a: &NccwComplex<T>, spec: &CompactIdealSpec) -> Result<NccwComplex<T>> {
    a.restrict(&spec.s, &spec.t, false)
}

pub fn quotient_complex<T: IntScalar>(a: &NccwComplex<T>, spec: &CompactIdealSpec) -> Result<NccwComplex<T>> {
    a.restrict(&complement(a.p(), &spec.s), &complement(a.l(), &spec.t), a.is_unital())
}

/// The extension `0 → I → A → A/I → 0` together with its K-theory rows.
#[derive(Clone, Debug)]
pub struct IdealExtension<T> {
    pub spec: CompactIdealSpec,
    pub ideal: NccwComplex<T>,
    pub quotient: NccwComplex<T>,
    pub k_ideal: KData<T>,
    pub k_algebra: KData<T>,
    pub k_quotient: KData<T>,
    /// `K₀(I) → K₀(A) → K₀(A/I)`.
    pub k0_row: ShortExactSeq<T>,
    /// `K₁(I) → K₁(A) → K₁(A/I)`.
    pub k1_row: ShortExactSeq<T>,
}

fn pad<T: IntScalar>(n: usize, positions: &[usize]) -> IntMatrix<T> {
    let mut m = IntMatrix::zeros(n, positions.len());
    for (c, &r) in positions.iter().enumerate() {
        m[(r, c)] = T::one();
    }
    m
}

/// `K₀(ι)`: zero-pad the rank vector, then re-express in `A`'s kernel basis.
fn k0_pushforward<T: IntScalar>(from: &KData<T>, to: &KData<T>, embed: &IntMatrix<T>) -> Result<GroupHom<T>> {
    let images = embed.mul(from.k0_basis())?;
    let mut cols = Vec::with_capacity(images.cols());
    for c in images.columns() {
        cols.push(
            to.coordinates(&c)
                .map_err(|_| Error::NotWellDefined("induced rank vector leaves Ker(alpha - beta)".into()))?,
        );
    }
    let m = IntMatrix::from_columns(to.k0().generators(), &cols)?;
    GroupHom::new(from.k0().clone(), to.k0().clone(), m)
}

pub fn inclusion_k_maps<T: IntScalar>(
    a: &NccwComplex<T>,
    spec: &CompactIdealSpec,
) -> Result<(GroupHom<T>, GroupHom<T>)> {
    let ideal = ideal_complex(a, spec)?;
    let (ki, ka) = (ideal.k_theory(), a.k_theory());
    let k0 = k0_pushforward(&ki, &ka, &pad(a.p(), &spec.s))?;
    let k1 = GroupHom::new(ki.k1().clone(), ka.k1().clone(), pad(a.l(), &spec.t))?;
    Ok((k0, k1))
}

pub fn quotient_k_maps<T: IntScalar>(
    a: &NccwComplex<T>,
    spec: &CompactIdealSpec,
) -> Result<(GroupHom<T>, GroupHom<T>)> {
    let quotient = quotient_complex(a, spec)?;
    let (ka, kq) = (a.k_theory(), quotient.k_theory());
    let k0 = k0_pushforward(&ka, &kq, &pad(a.p(), &complement(a.p(), &spec.s)).transpose())?;
    let k1 = GroupHom::new(ka.k1().clone(), kq.k1().clone(), pad(a.l(), &complement(a.l(), &spec.t)).transpose())?;
    Ok((k0, k1))
}

impl<T: IntScalar> IdealExtension<T> {
    pub fn new(a: &NccwComplex<T>, spec: &CompactIdealSpec) -> Result<Self> {
        let ideal = ideal_complex(a, spec)?;
        let quotient = quotient_complex(a, spec)?;
        let (i0, i1) = inclusion_k_maps(a, spec)?;
        let (q0, q1) = quotient_k_maps(a, spec)?;
        Ok(IdealExtension {
            spec: spec.clone(),
            k_ideal: ideal.k_theory(),
            k_algebra: a.k_theory(),
            k_quotient: quotient.k_theory(),
            ideal,
            quotient,
            k0_row: ShortExactSeq::new(i0, q0)?,
            k1_row: ShortExactSeq::new(i1, q1)?,
        })
    }

    /// Both boundary maps vanish, i.e. both K-rows are short exact.
    pub fn boundary_trivial(&self) -> Result<bool> {
        Ok(self.k0_row.is_exact()? && self.k1_row.is_exact()?)
    }

    pub fn is_k_pure(&self) -> Result<bool> {
        if !self.boundary_trivial()? {
            return Err(Error::NotExact(format!("{}: a boundary map is nonzero", self.spec)));
        }
        Ok(self.k0_row.is_pure()? && self.k1_row.is_pure()?)
    }
}

pub fn boundary_trivial<T: IntScalar>(a: &NccwComplex<T>, spec: &CompactIdealSpec) -> Result<bool> {
    IdealExtension::new(a, spec)?.boundary_trivial()
}

pub fn extension_k_pure<T: IntScalar>(a: &NccwComplex<T>, spec: &CompactIdealSpec) -> Result<bool> {
    IdealExtension::new(a, spec)?.is_k_pure()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn c0() -> NccwComplex<BigInt> {
        NccwComplex::from_i64(&[1, 1, 1], &[2, 2], &[&[2, 0, 0], &[1, 0, 1]], &[&[0, 2, 0], &[0, 1, 1]], true).unwrap()
    }

    #[test]
    fn ideal_at_theta3() {
        let a = c0();
        let spec = make_ideal_spec_labels(&a, &[3]).unwrap();
        assert_eq!(spec.intervals(), &[1]);
        let ext = IdealExtension::new(&a, &spec).unwrap();
        assert_eq!(ext.ideal.alpha(), &IntMatrix::from_i64_rows(&[&[1]]));
        assert_eq!(ext.k_ideal.k0().invariants(), (1, vec![]));
        assert_eq!(ext.k_ideal.k1().invariants(), (1, vec![]));
        assert_eq!(ext.k_quotient.k0().invariants(), (1, vec![]));
        assert_eq!(ext.k_quotient.k1().invariants(), (0, vec![b(2)]));
        assert_eq!(ext.k0_row.inj.matrix(), &IntMatrix::from_i64_rows(&[&[0], &[1]]));
        let cok = ext.k1_row.inj.cokernel().unwrap();
        assert_eq!(cok.invariants(), (0, vec![b(2)]));
        assert!(ext.boundary_trivial().unwrap());
        assert!(!ext.is_k_pure().unwrap());
    }

    #[test]
    fn invalid_supports() {
        let a = c0();
        for s in [vec![1], vec![2], vec![1, 3], vec![2, 3]] {
            assert!(matches!(make_ideal_spec_labels(&a, &s), Err(Error::InvalidIdeal(_))), "{s:?}");
        }
        let spec = make_ideal_spec_labels(&a, &[1, 2]).unwrap();
        assert!(extension_k_pure(&a, &spec).unwrap());
        let full = make_ideal_spec_labels(&a, &[1, 2, 3]).unwrap();
        assert!(extension_k_pure(&a, &full).unwrap());
    }

    #[test]
    fn zero_ideal() {
        let a = c0();
        let spec = make_ideal_spec(&a, &[]).unwrap();
        assert!(spec.intervals().is_empty());
        let (i0, i1) = inclusion_k_maps(&a, &spec).unwrap();
        assert!(i0.source().is_trivial() && i1.source().is_trivial());
        assert!(boundary_trivial(&a, &spec).unwrap());
        assert!(extension_k_pure(&a, &spec).unwrap());
    }

    #[test]
    fn composites_vanish() {
        let a = c0();
        let spec = make_ideal_spec_labels(&a, &[3]).unwrap();
        let (i0, i1) = inclusion_k_maps(&a, &spec).unwrap();
        let (q0, q1) = quotient_k_maps(&a, &spec).unwrap();
        assert!(i0.then(&q0).unwrap().is_zero());
        assert!(i1.then(&q1).unwrap().is_zero());
    }
}
