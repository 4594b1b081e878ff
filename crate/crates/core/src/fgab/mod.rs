//! Finitely generated abelian groups over an exact integer scalar.

mod exact;
mod group;
mod hermite;
mod linalg;
mod matrix;
mod snf;

pub use exact::kronecker;
pub use exact::{check_ladder, is_exact, is_pure, ShortExactSeq};
pub use group::{cokernel, exact_at, FgGroup, GroupHom};
pub use hermite::column_hermite_form;
pub use linalg::{column_span_basis, kernel, kernel_from_snf, rank, solve, solve_with};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};
