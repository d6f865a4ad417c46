use serde::{Deserialize, Serialize};

use crate::config::Experiment;

/// One trial's measurements. Fields an experiment does not measure stay `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub experiment: Experiment,
    pub n: usize,
    pub trial: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// First step with minimum degree one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<usize>,
    /// First step with a Hamilton cycle through `M0`.
    #[serde(default, rename = "tauH", skip_serializing_if = "Option::is_none")]
    pub tau_h: Option<usize>,
    /// First step at which every vertex sees both colors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau11: Option<usize>,
    /// First step with an alternating Hamilton cycle.
    #[serde(default, rename = "tauZH", skip_serializing_if = "Option::is_none")]
    pub tau_zh: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_exceeded: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bad: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disjoint: Option<bool>,
    /// Length of the `M0 ∪ M1` cycle through vertex 0; a shared edge counts as length 2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle0: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub success: Option<bool>,
    /// Pipeline stage that failed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    /// SHA-256 of the certificate dump of a successful cycle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<f64>,
    /// Library error that ended the trial early.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TrialRecord {
    pub fn new(experiment: Experiment, n: usize, trial: u64, seed: u64) -> Self {
        TrialRecord {
            experiment,
            n,
            trial,
            seed,
            r: None,
            c: None,
            p: None,
            tau1: None,
            tau_h: None,
            tau11: None,
            tau_zh: None,
            equal: None,
            budget_exceeded: None,
            connected: None,
            bad: None,
            poor: None,
            disjoint: None,
            cycle0: None,
            components: None,
            success: None,
            stage: None,
            certificate: None,
            ms: None,
            error: None,
        }
    }

    pub fn censored(&self) -> bool {
        self.budget_exceeded == Some(true)
    }
}

/// CSV columns per experiment, in output order.
pub fn record_columns(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::HittingCoincidence => {
            &["experiment", "n", "trial", "seed", "tau1", "tauH", "equal", "budgetExceeded", "ms", "error"]
        }
        Experiment::ZebraicCoincidence => {
            &["experiment", "n", "trial", "seed", "tau11", "tauZH", "equal", "budgetExceeded", "ms", "error"]
        }
        Experiment::ZebraicConnect => &["experiment", "n", "trial", "seed", "tau1", "connected", "ms", "error"],
        Experiment::RzebraicSweep => &[
            "experiment", "r", "n", "c", "p", "trial", "seed", "bad", "poor", "success", "stage", "certificate", "ms",
            "error",
        ],
        Experiment::MatchingStats => {
            &["experiment", "n", "trial", "seed", "disjoint", "cycle0", "components", "ms", "error"]
        }
        Experiment::PipelineDemo => {
            &["experiment", "n", "trial", "seed", "tau1", "success", "stage", "certificate", "ms", "error"]
        }
    }
}
