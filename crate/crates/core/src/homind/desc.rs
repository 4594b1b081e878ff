use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fgab::{GroupHom, IntMatrix};
use crate::nccw::{CompactIdealSpec, NccwComplex};
use crate::scalar::IntScalar;

/// One constituent of a target block: where a source element is evaluated.
///
/// Indices are 0-based; `Display` prints them 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Eval {
    /// `a ↦ a(θ_j)`, a constant of size `k_j`.
    AtPoint(usize),
    /// `f ↦ f_i(t)` at some interior `t`, a constant of size `h_i`.
    AtInterior(usize),
    /// `f ↦ f_i` along the whole interval (only in interval assignments).
    FullPath(usize),
}

impl fmt::Display for Eval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eval::AtPoint(j) => write!(f, "point {}", j + 1),
            Eval::AtInterior(i) => write!(f, "interior {}", i + 1),
            Eval::FullPath(i) => write!(f, "path {}", i + 1),
        }
    }
}

/// Assignment of one target block: a multiset of evaluations.
pub type Assignment<T> = Vec<(T, Eval)>;

/// Sorted, merged, zero-free form of an assignment.
pub fn normalize<T: IntScalar>(terms: &[(T, Eval)]) -> Assignment<T> {
    let mut acc: BTreeMap<Eval, T> = BTreeMap::new();
    for (m, e) in terms {
        let slot = acc.entry(*e).or_insert_with(T::zero);
        *slot = slot.clone() + m.clone();
    }
    acc.into_iter().filter(|(_, m)| !m.is_zero()).map(|(e, m)| (m, e)).collect()
}

/// Symbolic description of a homomorphism between two complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDescription<T> {
    source: NccwComplex<T>,
    target: NccwComplex<T>,
    points: Vec<Assignment<T>>,
    intervals: Vec<Assignment<T>>,
    unital: bool,
}

impl<T: IntScalar> MapDescription<T> {
    /// Validates and normalizes. A unital description must fill every target block exactly.
    pub fn new(
        source: NccwComplex<T>,
        target: NccwComplex<T>,
        points: Vec<Assignment<T>>,
        intervals: Vec<Assignment<T>>,
        unital: bool,
    ) -> Result<Self> {
        let d = MapDescription {
            points: points.iter().map(|a| normalize(a)).collect(),
            intervals: intervals.iter().map(|a| normalize(a)).collect(),
            source,
            target,
            unital,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn source(&self) -> &NccwComplex<T> {
        &self.source
    }

    pub fn target(&self) -> &NccwComplex<T> {
        &self.target
    }

    pub fn point_assignments(&self) -> &[Assignment<T>] {
        &self.points
    }

    pub fn interval_assignments(&self) -> &[Assignment<T>] {
        &self.intervals
    }

    pub fn is_unital(&self) -> bool {
        self.unital
    }

    fn size_of(&self, e: &Eval) -> T {
        match *e {
            Eval::AtPoint(j) => self.source.k()[j].clone(),
            Eval::AtInterior(i) | Eval::FullPath(i) => self.source.h()[i].clone(),
        }
    }

    fn consumed(a: &Assignment<T>, size: impl Fn(&Eval) -> T) -> T {
        a.iter().fold(T::zero(), |acc, (m, e)| acc + m.clone() * size(e))
    }

    /// Unused size per target point and per target interval.
    pub fn slack(&self) -> (Vec<T>, Vec<T>) {
        let pts = self
            .points
            .iter()
            .zip(self.target.k())
            .map(|(a, k)| k.clone() - Self::consumed(a, |e| self.size_of(e)))
            .collect();
        let ivs = self
            .intervals
            .iter()
            .zip(self.target.h())
            .map(|(a, h)| h.clone() - Self::consumed(a, |e| self.size_of(e)))
            .collect();
        (pts, ivs)
    }

    fn validate(&self) -> Result<()> {
        let (p, l) = (self.source.p(), self.source.l());
        if self.points.len() != self.target.p() || self.intervals.len() != self.target.l() {
            return Err(Error::InvalidMap(format!(
                "need {} point and {} interval assignments, got {} and {}",
                self.target.p(),
                self.target.l(),
                self.points.len(),
                self.intervals.len()
            )));
        }
        if self.unital && !self.source.is_unital() {
            return Err(Error::InvalidMap("a unital map needs a unital source".into()));
        }
        let check_terms = |a: &Assignment<T>, what: String, allow_path: bool| -> Result<()> {
            for (m, e) in a {
                if m.is_negative() {
                    return Err(Error::InvalidMap(format!("{what}: multiplicities must be nonnegative")));
                }
                let ok = match *e {
                    Eval::AtPoint(j) => j < p,
                    Eval::AtInterior(i) => i < l,
                    Eval::FullPath(i) => allow_path && i < l,
                };
                if !ok {
                    return Err(Error::InvalidMap(format!("{what}: `{e}` is not available in the source")));
                }
            }
            Ok(())
        };
        for (j, a) in self.points.iter().enumerate() {
            check_terms(a, format!("target point {}", j + 1), false)?;
        }
        for (i, a) in self.intervals.iter().enumerate() {
            check_terms(a, format!("target interval {}", i + 1), true)?;
        }
        let (sp, si) = self.slack();
        for (what, slack) in [("point", &sp), ("interval", &si)] {
            for (x, s) in slack.iter().enumerate() {
                if s.is_negative() {
                    return Err(Error::InvalidMap(format!(
                        "size accounting: target {what} {} is overfilled by {}",
                        x + 1,
                        -s.clone()
                    )));
                }
                if self.unital && !s.is_zero() {
                    return Err(Error::InvalidMap(format!(
                        "size accounting: unital map leaves {s} unused in target {what} {}",
                        x + 1
                    )));
                }
            }
        }
        self.check_endpoints()
    }

    /// Rank vectors at the target points for a source kernel vector `v ∈ ℤᵖ`.
    pub fn point_ranks(&self, v: &[T]) -> Result<Vec<T>> {
        let av = self.source.alpha().mul_vec(v)?;
        Ok(self
            .points
            .iter()
            .map(|a| {
                a.iter().fold(T::zero(), |acc, (m, e)| {
                    let r = match *e {
                        Eval::AtPoint(j) => v[j].clone(),
                        Eval::AtInterior(i) | Eval::FullPath(i) => av[i].clone(),
                    };
                    acc + m.clone() * r
                })
            })
            .collect())
    }

    /// Evaluations seen at one endpoint of a target interval: a full path contributes
    /// the source endpoint data (`alpha` at 0, `beta` at 1).
    fn endpoint_terms(&self, a: &Assignment<T>, at_one: bool) -> Assignment<T> {
        let ends = if at_one { self.source.beta() } else { self.source.alpha() };
        let mut out = Vec::new();
        for (m, e) in a {
            match *e {
                Eval::FullPath(i) => {
                    for j in 0..self.source.p() {
                        if !ends[(i, j)].is_zero() {
                            out.push((m.clone() * ends[(i, j)].clone(), Eval::AtPoint(j)));
                        }
                    }
                }
                other => out.push((m.clone(), other)),
            }
        }
        normalize(&out)
    }

    /// Each target interval must restrict at its endpoints to exactly the evaluations
    /// prescribed by the target point assignments through `alpha'` and `beta'`.
    fn check_endpoints(&self) -> Result<()> {
        for (i, a) in self.intervals.iter().enumerate() {
            for (at_one, ends) in [(false, self.target.alpha()), (true, self.target.beta())] {
                let mut expected = Vec::new();
                for (j, pa) in self.points.iter().enumerate() {
                    let c = &ends[(i, j)];
                    expected.extend(pa.iter().map(|(m, e)| (m.clone() * c.clone(), *e)));
                }
                let expected = normalize(&expected);
                let got = self.endpoint_terms(a, at_one);
                if got != expected {
                    return Err(Error::InvalidMap(format!(
                        "target interval {} at t={}: evaluations {} do not match the endpoint data {}",
                        i + 1,
                        u8::from(at_one),
                        render_assignment(&got),
                        render_assignment(&expected)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn induced_k0(&self) -> Result<GroupHom<T>> {
        let ks = self.source.k_theory();
        let kt = self.target.k_theory();
        let mut cols = Vec::new();
        for v in ks.k0_basis().columns() {
            let w = self.point_ranks(&v)?;
            cols.push(kt.coordinates(&w).map_err(|_| {
                Error::InvalidMap("image of a K0 class escapes Ker(alpha - beta) of the target".into())
            })?);
        }
        let m = IntMatrix::from_columns(kt.k0().generators(), &cols)?;
        GroupHom::new(ks.k0().clone(), kt.k0().clone(), m)
    }

    /// `FullPath` multiplicities, pushed through the cokernel presentations.
    pub fn induced_k1(&self) -> Result<GroupHom<T>> {
        let mut m: IntMatrix<T> = IntMatrix::zeros(self.target.l(), self.source.l());
        for (r, a) in self.intervals.iter().enumerate() {
            for (mult, e) in a {
                if let Eval::FullPath(i) = *e {
                    m[(r, i)] = m[(r, i)].clone() + mult.clone();
                }
            }
        }
        GroupHom::new(self.source.k_theory().k1().clone(), self.target.k_theory().k1().clone(), m)
    }

    /// `next ∘ self`, by substituting this map's assignments into `next`.
    pub fn then(&self, next: &MapDescription<T>) -> Result<Self> {
        if next.source != self.target {
            return Err(Error::Dimension("composed maps must share the middle complex".into()));
        }
        let collapse = |a: &Assignment<T>| -> Assignment<T> {
            a.iter()
                .map(|(m, e)| match *e {
                    Eval::FullPath(i) => (m.clone(), Eval::AtInterior(i)),
                    other => (m.clone(), other),
                })
                .collect()
        };
        let substitute = |a: &Assignment<T>| -> Assignment<T> {
            let mut out = Vec::new();
            for (m, e) in a {
                let inner = match *e {
                    Eval::AtPoint(j) => self.points[j].clone(),
                    Eval::AtInterior(i) => collapse(&self.intervals[i]),
                    Eval::FullPath(i) => self.intervals[i].clone(),
                };
                out.extend(inner.into_iter().map(|(m2, e2)| (m.clone() * m2, e2)));
            }
            out
        };
        MapDescription::new(
            self.source.clone(),
            next.target.clone(),
            next.points.iter().map(substitute).collect(),
            next.intervals.iter().map(substitute).collect(),
            self.unital && next.unital,
        )
    }

    fn touches(e: &Eval, spec: &CompactIdealSpec) -> bool {
        match *e {
            Eval::AtPoint(j) => spec.points().contains(&j),
            Eval::AtInterior(i) | Eval::FullPath(i) => spec.intervals().contains(&i),
        }
    }

    fn check_preserves(&self, src: &CompactIdealSpec, tgt: &CompactIdealSpec) -> Result<()> {
        let leaks_pt = (0..self.target.p())
            .filter(|j| !tgt.points().contains(j))
            .any(|j| self.points[j].iter().any(|(_, e)| Self::touches(e, src)));
        let leaks_iv = (0..self.target.l())
            .filter(|i| !tgt.intervals().contains(i))
            .any(|i| self.intervals[i].iter().any(|(_, e)| Self::touches(e, src)));
        if leaks_pt || leaks_iv {
            return Err(Error::InvalidMap(format!("map does not preserve ideal ({src} into {tgt})")));
        }
        Ok(())
    }

    fn reindex(e: &Eval, pts: &[usize], ivs: &[usize]) -> Eval {
        let pos = |v: &[usize], x: usize| v.iter().position(|&y| y == x).expect("kept index");
        match *e {
            Eval::AtPoint(j) => Eval::AtPoint(pos(pts, j)),
            Eval::AtInterior(i) => Eval::AtInterior(pos(ivs, i)),
            Eval::FullPath(i) => Eval::FullPath(pos(ivs, i)),
        }
    }

    /// The map between the ideals, dropping evaluations outside the source ideal.
    pub fn restrict_to_ideals(&self, src: &CompactIdealSpec, tgt: &CompactIdealSpec) -> Result<Self> {
        self.check_preserves(src, tgt)?;
        let keep = |a: &Assignment<T>| -> Assignment<T> {
            a.iter()
                .filter(|(_, e)| Self::touches(e, src))
                .map(|(m, e)| (m.clone(), Self::reindex(e, src.points(), src.intervals())))
                .collect()
        };
        MapDescription::new(
            crate::nccw::ideal_complex(&self.source, src)?,
            crate::nccw::ideal_complex(&self.target, tgt)?,
            tgt.points().iter().map(|&j| keep(&self.points[j])).collect(),
            tgt.intervals().iter().map(|&i| keep(&self.intervals[i])).collect(),
            false,
        )
    }

    /// The induced map between the quotients.
    pub fn restrict_to_quotients(&self, src: &CompactIdealSpec, tgt: &CompactIdealSpec) -> Result<Self> {
        self.check_preserves(src, tgt)?;
        let sp: Vec<usize> = (0..self.source.p()).filter(|j| !src.points().contains(j)).collect();
        let si: Vec<usize> = (0..self.source.l()).filter(|i| !src.intervals().contains(i)).collect();
        let map = |a: &Assignment<T>| -> Assignment<T> {
            a.iter().map(|(m, e)| (m.clone(), Self::reindex(e, &sp, &si))).collect()
        };
        let tp = (0..self.target.p()).filter(|j| !tgt.points().contains(j));
        let ti = (0..self.target.l()).filter(|i| !tgt.intervals().contains(i));
        MapDescription::new(
            crate::nccw::quotient_complex(&self.source, src)?,
            crate::nccw::quotient_complex(&self.target, tgt)?,
            tp.map(|j| map(&self.points[j])).collect(),
            ti.map(|i| map(&self.intervals[i])).collect(),
            self.unital,
        )
    }
}

/// Induced K₀ and K₁ maps agree as homomorphisms.
pub fn maps_equal_on_k<T: IntScalar>(m1: &MapDescription<T>, m2: &MapDescription<T>) -> Result<bool> {
    if m1.source() != m2.source() || m1.target() != m2.target() {
        return Err(Error::Dimension("maps between different complexes".into()));
    }
    Ok(m1.induced_k0()?.equals(&m2.induced_k0()?)? && m1.induced_k1()?.equals(&m2.induced_k1()?)?)
}

impl<T: IntScalar> fmt::Display for MapDescription<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, list) in [("point", &self.points), ("interval", &self.intervals)] {
            for (x, a) in list.iter().enumerate() {
                writeln!(f, "{label} {} <- {}", x + 1, render_assignment(a))?;
            }
        }
        Ok(())
    }
}

pub fn render_assignment<T: IntScalar>(a: &Assignment<T>) -> String {
    if a.is_empty() {
        return "0".into();
    }
    a.iter().map(|(m, e)| if m.is_one() { e.to_string() } else { format!("{m}*{e}") }).collect::<Vec<_>>().join(" + ")
}
