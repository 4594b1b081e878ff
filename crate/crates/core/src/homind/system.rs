use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fgab::{check_ladder, FgGroup, GroupHom, ShortExactSeq};
use crate::scalar::IntScalar;

type BondFn<T> = dyn Fn(usize) -> Result<GroupHom<T>> + Send + Sync;

/// `G₀ → G₁ → G₂ → …`, generated lazily from the bonding map at each stage.
#[derive(Clone)]
pub struct IndSystem<T> {
    bond: Arc<BondFn<T>>,
    cache: Arc<Mutex<BTreeMap<usize, GroupHom<T>>>>,
    constant_from: Option<usize>,
}

/// An element of the stage-`stage` group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitElement<T> {
    pub stage: usize,
    pub vector: Vec<T>,
}

impl<T> LimitElement<T> {
    pub fn new(stage: usize, vector: Vec<T>) -> Self {
        LimitElement { stage, vector }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitEquality {
    /// Images agree from this stage on.
    Equal(usize),
    /// Images differ at every stage and all later bonds are injective.
    Distinct,
    Unknown(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility<T> {
    /// Divisible at this stage, with a witness `x` there (`n·x` = image).
    Yes {
        stage: usize,
        witness: Vec<T>,
    },
    NotByBound(usize),
}

/// The stages `0..=n` and bonds `0..n` of a system.
#[derive(Clone, Debug)]
pub struct Truncation<T> {
    pub groups: Vec<FgGroup<T>>,
    pub bonds: Vec<GroupHom<T>>,
}

impl<T: IntScalar> IndSystem<T> {
    /// `bond(n)` is the map from stage `n` to stage `n + 1`. `constant_from` declares
    /// that bonds (groups and matrices) repeat from that stage on.
    pub fn new(
        bond: impl Fn(usize) -> Result<GroupHom<T>> + Send + Sync + 'static,
        constant_from: Option<usize>,
    ) -> Self {
        IndSystem { bond: Arc::new(bond), cache: Arc::new(Mutex::new(BTreeMap::new())), constant_from }
    }

    /// The system with the same group and bond at every stage.
    pub fn constant(bond: GroupHom<T>) -> Self {
        Self::new(move |_| Ok(bond.clone()), Some(0))
    }

    pub fn constant_from(&self) -> Option<usize> {
        self.constant_from
    }

    pub fn bond(&self, n: usize) -> Result<GroupHom<T>> {
        if let Some(h) = self.cache.lock().expect("cache lock").get(&n) {
            return Ok(h.clone());
        }
        let h = (self.bond)(n)?;
        if n > 0 {
            let prev = self.bond(n - 1)?;
            if prev.target().generators() != h.source().generators() {
                return Err(Error::Dimension(format!("bonds {} and {n} are not composable", n - 1)));
            }
        }
        self.cache.lock().expect("cache lock").entry(n).or_insert_with(|| h.clone());
        Ok(h)
    }

    pub fn group(&self, n: usize) -> Result<FgGroup<T>> {
        Ok(self.bond(n)?.source().clone())
    }

    pub fn truncate(&self, n: usize) -> Result<Truncation<T>> {
        if n == 0 {
            return Err(Error::InvalidArgument("truncate needs at least one bond".into()));
        }
        let bonds: Vec<GroupHom<T>> = (0..n).map(|i| self.bond(i)).collect::<Result<_>>()?;
        let mut groups: Vec<FgGroup<T>> = bonds.iter().map(|b| b.source().clone()).collect();
        groups.push(bonds[n - 1].target().clone());
        Ok(Truncation { groups, bonds })
    }

    /// Image of `x` at stage `to ≥ x.stage`.
    pub fn push(&self, x: &LimitElement<T>, to: usize) -> Result<Vec<T>> {
        if to < x.stage {
            return Err(Error::StageOutOfRange(to));
        }
        let mut v = x.vector.clone();
        for n in x.stage..to {
            v = self.bond(n)?.apply(&v)?;
        }
        Ok(v)
    }

    /// Orbit of `x` through stages `x.stage..=to`.
    pub fn orbit(&self, x: &LimitElement<T>, to: usize) -> Result<Vec<Vec<T>>> {
        let mut out = vec![x.vector.clone()];
        for n in x.stage..to {
            let next = self.bond(n)?.apply(out.last().expect("nonempty"))?;
            out.push(next);
        }
        Ok(out)
    }

    fn injective_from(&self, start: usize, bound: usize) -> Result<bool> {
        let Some(c) = self.constant_from else { return Ok(false) };
        let last = c.max(start).max(bound);
        for n in start..=last {
            if !self.bond(n)?.is_injective()? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn limit_equal(&self, x: &LimitElement<T>, y: &LimitElement<T>, bound: usize) -> Result<LimitEquality> {
        let start = x.stage.max(y.stage);
        if start > bound {
            return Err(Error::StageOutOfRange(start));
        }
        let mut a = self.push(x, start)?;
        let mut b = self.push(y, start)?;
        for n in start..=bound {
            if self.group(n)?.elements_equal(&a, &b)? {
                return Ok(LimitEquality::Equal(n));
            }
            if n < bound {
                let h = self.bond(n)?;
                a = h.apply(&a)?;
                b = h.apply(&b)?;
            }
        }
        if self.injective_from(start, bound)? {
            Ok(LimitEquality::Distinct)
        } else {
            Ok(LimitEquality::Unknown(bound))
        }
    }

    pub fn divisible_in_limit(&self, x: &LimitElement<T>, n: &T, bound: usize) -> Result<Divisibility<T>> {
        if !n.is_positive() {
            return Err(Error::InvalidArgument(format!("divisor must be positive, got {n}")));
        }
        let mut v = x.vector.clone();
        for s in x.stage..=bound {
            if let Some(w) = self.group(s)?.divide_element(&v, n)? {
                return Ok(Divisibility::Yes { stage: s, witness: w });
            }
            if s < bound {
                v = self.bond(s)?.apply(&v)?;
            }
        }
        Ok(Divisibility::NotByBound(bound))
    }

    /// First stage from which every bond is the identity, when the constant tail
    /// starts by `bound`.
    pub fn stationary_from(&self, bound: usize) -> Result<Option<usize>> {
        let Some(c) = self.constant_from else { return Ok(None) };
        if c > bound || !self.is_identity_at(c)? {
            return Ok(None);
        }
        let mut s = c;
        while s > 0 && self.is_identity_at(s - 1)? {
            s -= 1;
        }
        Ok(Some(s))
    }

    fn is_identity_at(&self, n: usize) -> Result<bool> {
        let h = self.bond(n)?;
        Ok(h.source().generators() == h.target().generators() && h.equals(&GroupHom::identity(h.source()))?)
    }
}

impl<T> fmt::Debug for IndSystem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndSystem").field("constant_from", &self.constant_from).finish_non_exhaustive()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitPurity {
    /// Every stage sequence `0 ≤ n ≤ N` is pure.
    PureThroughN(usize),
    /// Stage sequence not pure, and no stationary tail to conclude from.
    NonPureWitness(usize),
    /// The three systems are stationary from `stage`; the limit sequence is that stage's sequence.
    StationaryExactVerdict { stage: usize, pure: bool },
}

impl fmt::Display for LimitPurity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitPurity::PureThroughN(n) => write!(f, "pure at stages 0..={n}"),
            LimitPurity::NonPureWitness(s) => write!(f, "not pure at stage {s}, limit undecided"),
            LimitPurity::StationaryExactVerdict { stage, pure } => {
                write!(f, "stationary from stage {stage}, limit sequence {}", if *pure { "pure" } else { "not pure" })
            }
        }
    }
}

/// Maps `I_n → E_n` and `E_n → Q_n` at each stage.
pub type LadderFn<T> = dyn Fn(usize) -> Result<(GroupHom<T>, GroupHom<T>)> + Send + Sync;

pub fn limit_ses_purity<T: IntScalar>(
    ideal: &IndSystem<T>,
    algebra: &IndSystem<T>,
    quotient: &IndSystem<T>,
    ladder: &LadderFn<T>,
    n: usize,
) -> Result<LimitPurity> {
    let mut rows = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let (inj, surj) = ladder(s)?;
        let row = ShortExactSeq::new(inj, surj)?;
        if !row.is_exact()? {
            return Err(Error::NotExact(format!("stage {s} sequence is not exact")));
        }
        rows.push(row);
    }
    for s in 0..n {
        let verticals = (ideal.bond(s)?, algebra.bond(s)?, quotient.bond(s)?);
        if !check_ladder(&rows[s], &rows[s + 1], (&verticals.0, &verticals.1, &verticals.2))? {
            return Err(Error::NonCommuting(format!("ladder square between stages {s} and {}", s + 1)));
        }
    }
    let mut first_bad = None;
    for (s, row) in rows.iter().enumerate() {
        if !row.is_pure()? {
            first_bad = Some(s);
            break;
        }
    }
    let Some(bad) = first_bad else { return Ok(LimitPurity::PureThroughN(n)) };
    let stationary = [ideal, algebra, quotient].iter().map(|sys| sys.stationary_from(n)).collect::<Result<Vec<_>>>()?;
    if stationary.iter().all(Option::is_some) {
        let stage = stationary.iter().flatten().copied().max().expect("three systems");
        return Ok(LimitPurity::StationaryExactVerdict { stage, pure: rows[stage].is_pure()? });
    }
    Ok(LimitPurity::NonPureWitness(bad))
}
