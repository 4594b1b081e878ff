//! Exact K-theory of 1-dimensional NCCW complexes.

pub mod coeff;
pub mod error;
pub mod fgab;
pub mod harness;
pub mod homind;
pub mod nccw;
pub mod order;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::IntScalar;

use num_bigint::BigInt;

pub type Matrix = fgab::IntMatrix<BigInt>;
pub type Group = fgab::FgGroup<BigInt>;
pub type Hom = fgab::GroupHom<BigInt>;
pub type Sequence = fgab::ShortExactSeq<BigInt>;
pub type Complex = nccw::NccwComplex<BigInt>;
pub type KTheory = nccw::KData<BigInt>;
pub type Description = homind::MapDescription<BigInt>;
pub type System = homind::IndSystem<BigInt>;
