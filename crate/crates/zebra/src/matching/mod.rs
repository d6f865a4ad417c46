//! Maximum matchings, the surplus sets `A_G(v)` and the first construction phase.

pub mod bipartite;
mod blossom;
mod incremental;
mod phase1;
mod surplus;

pub use blossom::{gallai_edmonds, maximum_matching, maximum_matching_from, Label};
pub(crate) use blossom::{forest_search_blocked, Outcome};
pub use incremental::IncrementalMatching;
pub use phase1::{build_phase1_workspace, phase1_matching, Phase1Failure, Phase1Success, Phase1Workspace};
pub use surplus::{is_deficient, surplus_set};
