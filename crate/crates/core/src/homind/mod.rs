//! Map descriptions between complexes, induced K-maps, and inductive systems.

mod complex_system;
mod desc;
mod identify;
mod system;

pub use complex_system::{ComplexSystem, Degree, Part};
pub use desc::{maps_equal_on_k, normalize, render_assignment, Assignment, Eval, MapDescription};
pub use identify::{identify_localized_limit, LocalizedLimit};
pub use system::{
    limit_ses_purity, Divisibility, IndSystem, LadderFn, LimitElement, LimitEquality, LimitPurity, Truncation,
};
