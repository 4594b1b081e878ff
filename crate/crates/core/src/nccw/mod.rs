//! 1-NCCW complexes, their K-theory, compact ideals and the nice/odd classifier.

mod classify;
mod complex;
mod ideal;
mod lp;

pub use classify::{classify_block, compact_ideals, BlockKind, Classification};
pub use complex::{KData, NccwComplex};
pub use ideal::{
    boundary_trivial, extension_k_pure, generating_projection, ideal_complex, inclusion_k_maps, make_ideal_spec,
    make_ideal_spec_labels, quotient_complex, quotient_k_maps, CompactIdealSpec, IdealExtension,
};
pub use lp::{clear_denominators, nonnegative_solution};
