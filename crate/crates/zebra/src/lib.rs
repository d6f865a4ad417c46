//! Constructive procedures for Hamilton cycles that contain a prescribed perfect
//! matching, and for color-alternating Hamilton cycles, in random graph
//! processes. Exact solvers cover small instances.

pub mod certify;
pub mod error;
pub mod factor;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod process;
pub mod rzebraic;
pub mod schedule;
pub mod surgery;
pub mod textio;
pub mod zebraic;

pub use error::{Result, ZebraError};
pub use graph::{edge, ColoredGraph, Edge, Graph, Matching};
