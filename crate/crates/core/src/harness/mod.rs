//! Built-in constructions, scenario reports, the input format and the odd-block search.

pub mod families;
pub mod input;
pub mod report;
pub mod scenarios;
pub mod search;

pub use report::{Claim, Format, Provenance, ScenarioReport};
pub use scenarios::{run_scenario, SCENARIOS};
pub use search::{search_odd_blocks, Census, OddBlock, SearchBounds};
