//! Seeded Monte Carlo experiments over the `zebra` library, with CSV/JSON
//! output, summaries and a certificate auditor.

pub mod audit;
pub mod config;
pub mod experiments;
pub mod output;
pub mod record;
pub mod summary;

pub use config::{derive_seed, Experiment, ExperimentConfig, Format};
pub use experiments::{run, RunOutput};
pub use record::TrialRecord;
pub use summary::{summarize, SummaryRow};
