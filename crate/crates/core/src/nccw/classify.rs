use std::fmt;

use crate::error::Result;
use crate::nccw::complex::NccwComplex;
use crate::nccw::ideal::{make_ideal_spec, CompactIdealSpec, IdealExtension};
use crate::scalar::IntScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockKind {
    /// Every compact-ideal extension has trivial boundary and is K-pure.
    Nice,
    /// Some compact-ideal extension has trivial boundary but is not K-pure.
    Odd,
    /// Neither: some boundary map is nonzero and no odd witness exists.
    Other,
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockKind::Nice => "nice",
            BlockKind::Odd => "odd",
            BlockKind::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: BlockKind,
    /// First valid support (in bitmask order) with exact but non-pure rows.
    pub odd_witness: Option<CompactIdealSpec>,
    /// Valid supports with a nonzero boundary map.
    pub non_exact: Vec<CompactIdealSpec>,
    /// Number of valid nonzero supports examined.
    pub valid_ideals: usize,
}

/// The valid nonzero compact-ideal supports, enumerated by bitmask.
pub fn compact_ideals<T: IntScalar>(a: &NccwComplex<T>) -> Vec<CompactIdealSpec> {
    let p = a.p();
    (1u64..(1u64 << p))
        .filter_map(|mask| {
            let s: Vec<usize> = (0..p).filter(|j| mask >> j & 1 == 1).collect();
            make_ideal_spec(a, &s).ok()
        })
        .collect()
}

pub fn classify_block<T: IntScalar>(a: &NccwComplex<T>) -> Result<Classification> {
    let specs = compact_ideals(a);
    let mut odd_witness = None;
    let mut non_exact = Vec::new();
    for spec in &specs {
        let ext = IdealExtension::new(a, spec)?;
        if !ext.boundary_trivial()? {
            non_exact.push(spec.clone());
        } else if odd_witness.is_none() && !ext.is_k_pure()? {
            odd_witness = Some(spec.clone());
        }
    }
    let kind = match (&odd_witness, non_exact.is_empty()) {
        (Some(_), _) => BlockKind::Odd,
        (None, true) => BlockKind::Nice,
        (None, false) => BlockKind::Other,
    };
    Ok(Classification { kind, odd_witness, non_exact, valid_ideals: specs.len() })
}
