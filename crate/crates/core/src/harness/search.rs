//! Exhaustive search for odd blocks among small complexes.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fgab::{IntMatrix, ShortExactSeq};
use crate::nccw::{
    classify_block, ideal_complex, inclusion_k_maps, quotient_complex, quotient_k_maps, BlockKind, CompactIdealSpec,
    NccwComplex,
};

/// Bounds on the enumerated complexes: `p`, `l`, multiplicities, and block sizes `k`, `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_p: usize,
    pub max_l: usize,
    pub max_mult: i64,
    pub max_size: i64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_p: 3, max_l: 2, max_mult: 2, max_size: 2 }
    }
}

#[derive(Clone, Debug)]
pub struct OddBlock {
    pub complex: NccwComplex<BigInt>,
    pub witness: CompactIdealSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Census {
    /// Complexes up to block permutation.
    pub complexes: usize,
    /// Distinct `(α, β)` pairs classified.
    pub classified: usize,
    pub nice: usize,
    pub odd: usize,
    pub other: usize,
}

/// Data of a complex as one integer vector: `k`, `h`, `α`, `β` (row-major).
type Key = Vec<i64>;

#[derive(Clone, Debug)]
struct Candidate {
    p: usize,
    l: usize,
    key: Key,
}

impl Candidate {
    fn parts(&self) -> (&[i64], &[i64], &[i64], &[i64]) {
        let (p, l) = (self.p, self.l);
        let (k, rest) = self.key.split_at(p);
        let (h, rest) = rest.split_at(l);
        let (alpha, beta) = rest.split_at(l * p);
        (k, h, alpha, beta)
    }

    fn multiplicities(&self) -> (usize, usize, Key) {
        let (_, _, a, b) = self.parts();
        (self.p, self.l, [a, b].concat())
    }

    fn unital(&self) -> bool {
        let (k, h, a, b) = self.parts();
        (0..self.l).all(|i| {
            let row = |m: &[i64]| (0..self.p).map(|j| m[i * self.p + j] * k[j]).sum::<i64>();
            row(a) == h[i] && row(b) == h[i]
        })
    }

    fn complex(&self) -> Result<NccwComplex<BigInt>> {
        let (k, h, a, b) = self.parts();
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        NccwComplex::new(
            big(k),
            big(h),
            IntMatrix::from_vec(self.l, self.p, big(a))?,
            IntMatrix::from_vec(self.l, self.p, big(b))?,
            self.unital(),
        )
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Least relabeling of the data under permutations of points and of intervals.
fn canonical(p: usize, l: usize, key: &[i64], perms: &(Vec<Vec<usize>>, Vec<Vec<usize>>)) -> Key {
    let (k, rest) = key.split_at(p);
    let (h, rest) = rest.split_at(l);
    let (a, b) = rest.split_at(l * p);
    let mut best: Option<Key> = None;
    for sigma in &perms.0 {
        for pi in &perms.1 {
            let mut v: Key = sigma.iter().map(|&j| k[j]).collect();
            v.extend(pi.iter().map(|&i| h[i]));
            for m in [a, b] {
                for &i in pi {
                    v.extend(sigma.iter().map(|&j| m[i * p + j]));
                }
            }
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
        }
    }
    best.expect("at least one permutation")
}

/// All vectors of length `len` with entries in `lo..=hi`, in lexicographic order.
fn tuples(len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

/// Canonical candidates of shape `(p, l)`, in a fixed order.
fn candidates(p: usize, l: usize, b: &SearchBounds) -> Vec<Candidate> {
    let perms = (permutations(p), permutations(l));
    let rows = tuples(p, 0, b.max_mult);
    let mut out = Vec::new();
    for k in tuples(p, 1, b.max_size) {
        let weight = |r: &[i64]| r.iter().zip(&k).map(|(x, y)| x * y).sum::<i64>();
        let fitting: Vec<&Vec<i64>> = rows.iter().filter(|r| weight(r) <= b.max_size).collect();
        let stacks: Vec<Vec<i64>> = (0..l).fold(vec![Vec::new()], |acc, _| {
            acc.into_iter().flat_map(|v| fitting.iter().map(move |r| [v.clone(), (*r).clone()].concat())).collect()
        });
        let per_k: Vec<Candidate> = stacks
            .par_iter()
            .flat_map_iter(|alpha| {
                let (k, stacks, perms) = (&k, &stacks, &perms);
                stacks.iter().flat_map(move |beta| {
                    let floor: Vec<i64> = (0..l)
                        .map(|i| weight(&alpha[i * p..(i + 1) * p]).max(weight(&beta[i * p..(i + 1) * p])).max(1))
                        .collect();
                    let ranges: Vec<Vec<i64>> = floor.iter().map(|&f| (f..=b.max_size).collect()).collect();
                    let hs = ranges.iter().fold(vec![Vec::new()], |acc, r| {
                        acc.into_iter().flat_map(|v| r.iter().map(move |&x| [v.clone(), vec![x]].concat())).collect()
                    });
                    hs.into_iter().filter_map(move |h| {
                        let key: Key = [k.as_slice(), &h, alpha, beta].concat();
                        (canonical(p, l, &key, perms) == key).then_some(Candidate { p, l, key })
                    })
                })
            })
            .collect();
        out.extend(per_k);
    }
    out
}

/// Enumerates complexes within `bounds` (up to block permutation) and returns the odd
/// ones with their witnesses, each re-verified independently, plus a census.
pub fn search_odd_blocks(bounds: &SearchBounds) -> Result<(Vec<OddBlock>, Census)> {
    if bounds.max_mult < 0 || bounds.max_size < 1 {
        return Err(Error::InvalidArgument("search needs max_mult >= 0 and max_size >= 1".into()));
    }
    let mut census = Census::default();
    let mut blocks = Vec::new();
    for p in 1..=bounds.max_p {
        for l in 1..=bounds.max_l {
            let cands = candidates(p, l, bounds);
            census.complexes += cands.len();
            let mut firsts: BTreeMap<Key, &Candidate> = BTreeMap::new();
            for c in &cands {
                firsts.entry(c.multiplicities().2).or_insert(c);
            }
            let reps: Vec<(&Key, &&Candidate)> = firsts.iter().collect();
            let verdicts: Vec<(Key, BlockKind, Option<CompactIdealSpec>)> = reps
                .par_iter()
                .map(|(key, c)| {
                    let cl = classify_block(&c.complex()?)?;
                    Ok(((*key).clone(), cl.kind, cl.odd_witness))
                })
                .collect::<Result<_>>()?;
            census.classified += verdicts.len();
            let by_data: BTreeMap<Key, (BlockKind, Option<CompactIdealSpec>)> =
                verdicts.into_iter().map(|(k, kind, w)| (k, (kind, w))).collect();
            for c in &cands {
                let (kind, witness) = &by_data[&c.multiplicities().2];
                match kind {
                    BlockKind::Nice => census.nice += 1,
                    BlockKind::Other => census.other += 1,
                    BlockKind::Odd => {
                        census.odd += 1;
                        let complex = c.complex()?;
                        let witness = witness.clone().expect("odd blocks carry a witness");
                        if !reverify_witness(&complex, &witness)? {
                            return Err(Error::InvalidIdeal(format!("witness {witness} failed re-verification")));
                        }
                        blocks.push(OddBlock { complex, witness });
                    }
                }
            }
        }
    }
    Ok((blocks, census))
}

/// Rebuilds the extension of `witness` from scratch: both K-rows exact, one not pure.
pub fn reverify_witness(a: &NccwComplex<BigInt>, witness: &CompactIdealSpec) -> Result<bool> {
    ideal_complex(a, witness)?;
    quotient_complex(a, witness)?;
    let (i0, i1) = inclusion_k_maps(a, witness)?;
    let (q0, q1) = quotient_k_maps(a, witness)?;
    let rows = [ShortExactSeq::new(i0, q0)?, ShortExactSeq::new(i1, q1)?];
    for row in &rows {
        if !row.is_exact()? {
            return Ok(false);
        }
    }
    let mut pure = true;
    for row in &rows {
        pure &= row.is_pure()?;
    }
    Ok(!pure)
}

/// Whether two complexes agree up to permutation of points and intervals.
pub fn same_up_to_permutation(a: &NccwComplex<BigInt>, b: &NccwComplex<BigInt>) -> bool {
    if (a.p(), a.l()) != (b.p(), b.l()) {
        return false;
    }
    let key = |c: &NccwComplex<BigInt>| -> Option<Key> {
        let to = |v: &BigInt| i64::try_from(v).ok();
        let mut v = Vec::new();
        for x in c.k().iter().chain(c.h()).chain(c.alpha().entries()).chain(c.beta().entries()) {
            v.push(to(x)?);
        }
        Some(v)
    };
    let perms = (permutations(a.p()), permutations(a.l()));
    match (key(a), key(b)) {
        (Some(x), Some(y)) => canonical(a.p(), a.l(), &x, &perms) == canonical(b.p(), b.l(), &y, &perms),
        _ => false,
    }
}

/// The distinct multiplicity shapes `(p, l)` of the blocks found.
pub fn shapes(blocks: &[OddBlock]) -> BTreeSet<(usize, usize)> {
    blocks.iter().map(|b| (b.complex.p(), b.complex.l())).collect()
}
