use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::fgab::GroupHom;
use crate::homind::desc::MapDescription;
use crate::homind::system::{limit_ses_purity, IndSystem, LimitPurity};
use crate::nccw::{inclusion_k_maps, make_ideal_spec, quotient_k_maps, CompactIdealSpec, NccwComplex};
use crate::scalar::IntScalar;

type DescFn<T> = dyn Fn(usize) -> Result<MapDescription<T>> + Send + Sync;

/// `A₀ → A₁ → …` given by map descriptions, optionally with a compact ideal of
/// fixed support at every stage.
#[derive(Clone)]
pub struct ComplexSystem<T> {
    bond: Arc<DescFn<T>>,
    cache: Arc<Mutex<BTreeMap<usize, MapDescription<T>>>>,
    constant_k_from: [Option<usize>; 2],
    ideal: Option<Vec<usize>>,
}

/// Which K-group a derived system tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    K0,
    K1,
}

impl Degree {
    fn index(self) -> usize {
        match self {
            Degree::K0 => 0,
            Degree::K1 => 1,
        }
    }
}

/// Which part of the extension a derived system tracks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Ideal,
    Algebra,
    Quotient,
}

impl<T: IntScalar> ComplexSystem<T> {
    /// `constant_k_from` declares that the induced K-matrices repeat from that stage on.
    pub fn new(
        bond: impl Fn(usize) -> Result<MapDescription<T>> + Send + Sync + 'static,
        constant_k_from: Option<usize>,
        ideal: Option<Vec<usize>>,
    ) -> Self {
        ComplexSystem {
            bond: Arc::new(bond),
            cache: Arc::new(Mutex::new(BTreeMap::new())),
            constant_k_from: [constant_k_from; 2],
            ideal,
        }
    }

    /// Overrides the constant-tail declaration for one degree.
    pub fn with_constant_from(mut self, degree: Degree, from: Option<usize>) -> Self {
        self.constant_k_from[degree.index()] = from;
        self
    }

    pub fn bond(&self, n: usize) -> Result<MapDescription<T>> {
        if let Some(d) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(d.clone());
        }
        let d = (self.bond)(n)?;
        self.cache.lock().expect("cache lock").entry(n).or_insert_with(|| d.clone());
        Ok(d)
    }

    pub fn complex(&self, n: usize) -> Result<NccwComplex<T>> {
        Ok(self.bond(n)?.source().clone())
    }

    pub fn constant_k_from(&self, degree: Degree) -> Option<usize> {
        self.constant_k_from[degree.index()]
    }

    pub fn ideal_support(&self) -> Option<&[usize]> {
        self.ideal.as_deref()
    }

    /// Composite description from stage `from` to stage `to`.
    pub fn composite(&self, from: usize, to: usize) -> Result<MapDescription<T>> {
        let mut d = self.bond(from)?;
        for n in from + 1..to {
            d = d.then(&self.bond(n)?)?;
        }
        Ok(d)
    }

    pub fn ideal_spec(&self, n: usize) -> Result<CompactIdealSpec> {
        make_ideal_spec(&self.complex(n)?, self.ideal.as_deref().unwrap_or(&[]))
    }

    fn part_bond(&self, n: usize, part: Part) -> Result<MapDescription<T>> {
        let d = self.bond(n)?;
        match part {
            Part::Algebra => Ok(d),
            Part::Ideal => {
                let (s, t) = (self.ideal_spec(n)?, make_ideal_spec(d.target(), self.ideal.as_deref().unwrap_or(&[]))?);
                d.restrict_to_ideals(&s, &t)
            }
            Part::Quotient => {
                let (s, t) = (self.ideal_spec(n)?, make_ideal_spec(d.target(), self.ideal.as_deref().unwrap_or(&[]))?);
                d.restrict_to_quotients(&s, &t)
            }
        }
    }

    /// The induced system of K-groups for one part of the extension.
    pub fn k_system(&self, part: Part, degree: Degree) -> IndSystem<T> {
        let me = self.clone();
        IndSystem::new(
            move |n| {
                let d = me.part_bond(n, part)?;
                match degree {
                    Degree::K0 => d.induced_k0(),
                    Degree::K1 => d.induced_k1(),
                }
            },
            self.constant_k_from[degree.index()],
        )
    }

    /// `(K_j(I_n) → K_j(A_n), K_j(A_n) → K_j(A_n/I_n))`.
    pub fn ladder(&self, n: usize, degree: Degree) -> Result<(GroupHom<T>, GroupHom<T>)> {
        let a = self.complex(n)?;
        let spec = self.ideal_spec(n)?;
        let (i0, i1) = inclusion_k_maps(&a, &spec)?;
        let (q0, q1) = quotient_k_maps(&a, &spec)?;
        Ok(match degree {
            Degree::K0 => (i0, q0),
            Degree::K1 => (i1, q1),
        })
    }

    pub fn limit_purity(&self, degree: Degree, n: usize) -> Result<LimitPurity> {
        let me = self.clone();
        limit_ses_purity(
            &self.k_system(Part::Ideal, degree),
            &self.k_system(Part::Algebra, degree),
            &self.k_system(Part::Quotient, degree),
            &move |s| me.ladder(s, degree),
            n,
        )
    }
}

impl<T> fmt::Debug for ComplexSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexSystem")
            .field("constant_k_from", &self.constant_k_from)
            .field("ideal", &self.ideal)
            .finish_non_exhaustive()
    }
}
