//! Positivity cones as membership oracles, stage-wise dominance along inductive
//! systems, sampled unperforation checks and perforation witnesses.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homind::{ComplexSystem, IndSystem, LimitElement, Part};
use crate::scalar::IntScalar;

/// Elements that can be multiplied by a positive integer.
pub trait Scalable: Clone {
    fn scale(&self, n: u32) -> Self;
}

impl Scalable for BigInt {
    fn scale(&self, n: u32) -> Self {
        self * n
    }
}

impl Scalable for Vec<BigRational> {
    fn scale(&self, n: u32) -> Self {
        self.iter().map(|x| x * BigRational::from_integer(n.into())).collect()
    }
}

/// A positivity cone given by an exact membership predicate.
pub trait ConeOracle<E>: Sync {
    fn contains(&self, e: &E) -> Result<bool>;

    fn description(&self) -> Option<String> {
        None
    }
}

type Predicate<E> = dyn Fn(&E) -> Result<bool> + Send + Sync;

/// A cone from a closure and an optional closed-form description.
pub struct PredicateCone<E> {
    predicate: Box<Predicate<E>>,
    text: Option<String>,
}

impl<E> PredicateCone<E> {
    pub fn new(predicate: impl Fn(&E) -> Result<bool> + Send + Sync + 'static, text: Option<&str>) -> Self {
        PredicateCone { predicate: Box::new(predicate), text: text.map(str::to_owned) }
    }
}

impl<E> ConeOracle<E> for PredicateCone<E> {
    fn contains(&self, e: &E) -> Result<bool> {
        (self.predicate)(e)
    }

    fn description(&self) -> Option<String> {
        self.text.clone()
    }
}

/// The cone of a stage group of an inductive system.
pub trait StageCone<T>: Sync {
    fn contains(&self, stage: usize, v: &[T]) -> Result<bool>;
}

/// Nonnegative coordinates in the stage basis.
pub struct CoordinateCone;

impl<T: IntScalar> StageCone<T> for CoordinateCone {
    fn contains(&self, _stage: usize, v: &[T]) -> Result<bool> {
        Ok(v.iter().all(|x| !x.is_negative()))
    }
}

/// `K₀⁺` of each stage algebra: the rank vector over the points is nonnegative.
pub struct RankCone<'a, T> {
    pub system: &'a ComplexSystem<T>,
    pub part: Part,
}

impl<T: IntScalar> StageCone<T> for RankCone<'_, T> {
    fn contains(&self, stage: usize, v: &[T]) -> Result<bool> {
        let a = self.system.complex(stage)?;
        let a = match (self.part, self.system.ideal_spec(stage)) {
            (Part::Algebra, _) => a,
            (Part::Ideal, Ok(spec)) => crate::nccw::ideal_complex(&a, &spec)?,
            (Part::Quotient, Ok(spec)) => crate::nccw::quotient_complex(&a, &spec)?,
            (_, Err(e)) => return Err(e),
        };
        a.k_theory().is_positive(v)
    }
}

/// Whether the image of `u − v` at `stage` is positive; `u`, `v` live at stage 0.
pub fn stage_dominates<T: IntScalar>(
    sys: &IndSystem<T>,
    cone: &dyn StageCone<T>,
    u: &[T],
    v: &[T],
    stage: usize,
) -> Result<bool> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!("elements of length {} and {}", u.len(), v.len())));
    }
    let diff: Vec<T> = u.iter().zip(v).map(|(a, b)| a.clone() - b.clone()).collect();
    let image = sys.push(&LimitElement::new(0, diff), stage)?;
    cone.contains(stage, &image)
}

/// The first stage `≤ bound` at which `u` dominates `v`.
pub fn eventual_dominates<T: IntScalar>(
    sys: &IndSystem<T>,
    cone: &dyn StageCone<T>,
    u: &[T],
    v: &[T],
    bound: usize,
) -> Result<Option<usize>> {
    for s in 0..=bound {
        if stage_dominates(sys, cone, u, v, s)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// The first sample `g` (in sample order) and `2 ≤ n ≤ nmax` with `n·g ∈ cone`, `g ∉ cone`.
pub fn check_unperforated<E: Scalable + Send + Sync>(
    cone: &dyn ConeOracle<E>,
    samples: &[E],
    nmax: u32,
) -> Result<Option<(E, u32)>> {
    let hits: Vec<Option<(E, u32)>> = samples
        .par_iter()
        .map(|g| -> Result<Option<(E, u32)>> {
            if cone.contains(g)? {
                return Ok(None);
            }
            for n in 2..=nmax {
                if cone.contains(&g.scale(n))? {
                    return Ok(Some((g.clone(), n)));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    Ok(hits.into_iter().flatten().next())
}

/// `n·g ∈ cone` and `g ∉ cone`.
pub fn verify_perforation_witness<E: Scalable>(cone: &dyn ConeOracle<E>, g: &E, n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("perforation witness needs n ≥ 2, got {n}")));
    }
    Ok(cone.contains(&g.scale(n))? && !cone.contains(g)?)
}

/// `K₀(E)⁺ = {(x,y) : x > 0 or (x = 0 and y ≥ 0)}` on `ℤ[1/3] ⊕ ℤ[1/2]`.
pub fn e_cone() -> PredicateCone<Vec<BigRational>> {
    PredicateCone::new(
        |g: &Vec<BigRational>| {
            if g.len() != 2 {
                return Err(Error::Dimension(format!("expected a pair, got {} entries", g.len())));
            }
            Ok(g[0].is_positive() || (g[0].is_zero() && !g[1].is_negative()))
        },
        Some("{(x,y) : x > 0 or (x = 0 and y >= 0)}"),
    )
}

fn localized(rng: &mut ChaCha8Rng, base: u32) -> BigRational {
    let num: i64 = rng.gen_range(-60..=60);
    let exp: u32 = rng.gen_range(0..=5);
    BigRational::new(num.into(), BigInt::from(base).pow(exp))
}

/// Deterministic samples of `ℤ[1/3] ⊕ ℤ[1/2]`; about a quarter lie on the line `x = 0`.
pub fn e_cone_samples(count: usize, seed: u64) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = if rng.gen_bool(0.25) { BigRational::zero() } else { localized(&mut rng, 3) };
            vec![x, localized(&mut rng, 2)]
        })
        .collect()
}

/// `(g₀, g₁) ∈ K₀(E) ⊕ K₁(E)` with `K₀(E) = ℤ[1/3] ⊕ ℤ[1/2]` and `K₁(E) = ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElement {
    pub g0: Vec<BigRational>,
    pub g1: BigInt,
}

impl GradedElement {
    pub fn new(g0: Vec<BigRational>, g1: BigInt) -> Self {
        GradedElement { g0, g1 }
    }

    /// Reads `((x, y), z)` with rational `x`, `y` and integer `z`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected ((x,y),z), got {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact.strip_prefix("((").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (pair, g1) = inner.split_once("),").ok_or_else(bad)?;
        let g0 = pair.split(',').map(|x| x.parse::<BigRational>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        if g0.len() != 2 {
            return Err(bad());
        }
        Ok(GradedElement { g0, g1: g1.parse().map_err(|_| bad())? })
    }
}

impl Scalable for GradedElement {
    fn scale(&self, n: u32) -> Self {
        GradedElement { g0: self.g0.scale(n), g1: self.g1.scale(n) }
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({},{}),{})", self.g0[0], self.g0[1], self.g1)
    }
}

/// The graded cone of `K_*(E)`, known only where membership is asserted: the two
/// named elements, and `K₀(E)⁺` on elements with zero `K₁` part.
pub fn graded_e_cone() -> PredicateCone<GradedElement> {
    let k0 = e_cone();
    PredicateCone::new(
        move |g: &GradedElement| {
            let half = BigRational::new(1.into(), 2.into());
            let known = [
                (GradedElement::new(vec![BigRational::zero(), BigRational::from_integer(1.into())], 2.into()), true),
                (GradedElement::new(vec![BigRational::zero(), half], 1.into()), false),
            ];
            if let Some((_, member)) = known.iter().find(|(e, _)| e == g) {
                return Ok(*member);
            }
            if g.g1.is_zero() {
                return k0.contains(&g.g0);
            }
            Err(Error::ConeUndefined(format!("graded cone of K_*(E) is not known at {g}")))
        },
        Some("((0,1),2) positive; ((0,1/2),1) not positive; K0(E)+ on K1 part 0"),
    )
}
