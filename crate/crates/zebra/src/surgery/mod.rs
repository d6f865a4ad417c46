//! Small-cycle elimination by rotations and reassembly into a Hamilton cycle.

mod phase2;
mod phase3;
mod pipeline;
mod pn2f;
mod tranches;

pub use phase2::{
    eliminate_small_cycles, merge_cycles_by_rotation, small_cycles, stage2_endpoint_levels, Phase2Failure, Phase2Options, Phase2Reason,
    Phase2Stats, Phase2Success,
};
pub use phase2::supply_adjacency;
pub use phase3::{
    close_to_hamilton, compose, find_rejoin, is_cyclic, r_phi_count, segment_system, Phase3Failure, Phase3Method,
    Phase3Options, Phase3Success, SegmentSystem,
};
pub use pipeline::{
    hamilton_through_matching, surgery_from_factor, FailureStage, PipelineFailure, PipelineOptions, PipelineStats,
    PipelineSuccess,
};
pub use pn2f::{acceptable, Pn2f, Rotation, RotationPreview};
pub use tranches::{split_tranches, EdgeTranches};
