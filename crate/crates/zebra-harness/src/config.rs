use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use zebra::schedule::OVERRIDE_KEYS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    HittingCoincidence,
    ZebraicCoincidence,
    ZebraicConnect,
    RzebraicSweep,
    MatchingStats,
    PipelineDemo,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [
        Experiment::HittingCoincidence,
        Experiment::ZebraicCoincidence,
        Experiment::ZebraicConnect,
        Experiment::RzebraicSweep,
        Experiment::MatchingStats,
        Experiment::PipelineDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::HittingCoincidence => "hitting-coincidence",
            Experiment::ZebraicCoincidence => "zebraic-coincidence",
            Experiment::ZebraicConnect => "zebraic-connect",
            Experiment::RzebraicSweep => "rzebraic-sweep",
            Experiment::MatchingStats => "matching-stats",
            Experiment::PipelineDemo => "pipeline-demo",
        }
    }

    fn needs_even_n(self) -> bool {
        !matches!(self, Experiment::ZebraicConnect | Experiment::RzebraicSweep)
    }

    fn min_n(self) -> usize {
        match self {
            Experiment::PipelineDemo => 4,
            Experiment::ZebraicConnect | Experiment::MatchingStats => 2,
            _ => 4,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_C_GRID: [f64; 6] = [0.6, 0.8, 1.0, 1.2, 1.5, 2.0];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: Vec<usize>,
    pub r: usize,
    pub eps: f64,
    pub trials: u64,
    pub master_seed: u64,
    /// Schedule overrides; for the r-zebraic sweep they shape the contracted graph's schedule.
    pub overrides: BTreeMap<String, f64>,
    /// Oracle node-expansion cap per query.
    pub budget: u64,
    pub format: Format,
    /// Rayon threads; 0 picks the rayon default.
    pub workers: usize,
    /// Density multipliers `c` in `p = c * p_r` for the r-zebraic sweep.
    pub c_grid: Vec<f64>,
    /// Sample `G_{n,p1}` plus two `G_{n,p2}` layers and classify on the first.
    pub layered: bool,
    /// Attempt the r-zebraic pipeline on sweep instances without bad vertices.
    pub pipeline: bool,
    /// Fill the `ms` column. Off by default so outputs are reproducible byte for byte.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, n: Vec<usize>) -> Self {
        ExperimentConfig {
            experiment,
            n,
            r: 3,
            eps: 0.1,
            trials: 100,
            master_seed: 0,
            overrides: BTreeMap::new(),
            budget: DEFAULT_BUDGET,
            format: Format::Csv,
            workers: 0,
            c_grid: DEFAULT_C_GRID.to_vec(),
            layered: false,
            pipeline: true,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let e = self.experiment;
        if self.n.is_empty() {
            return Err(ConfigError::NoSizes);
        }
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.budget == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        for &n in &self.n {
            if n < e.min_n() {
                return Err(ConfigError::TooSmall { n, min: e.min_n() });
            }
            if e.needs_even_n() && n % 2 == 1 {
                return Err(ConfigError::OddN { experiment: e, n });
            }
            if e == Experiment::RzebraicSweep && n % self.r != 0 {
                return Err(ConfigError::RDoesNotDivide { r: self.r, n });
            }
        }
        if e == Experiment::RzebraicSweep {
            if self.r < 2 {
                return Err(ConfigError::BadR(self.r));
            }
            if !(self.eps > 0.0 && self.eps < 0.5) {
                return Err(ConfigError::BadEps(self.eps));
            }
            if self.c_grid.is_empty() || self.c_grid.iter().any(|&c| !(c.is_finite() && c > 0.0)) {
                return Err(ConfigError::BadGrid);
            }
        }
        for (key, &value) in &self.overrides {
            if !OVERRIDE_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::BadOverride(format!("unknown schedule field '{key}'")));
            }
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::BadOverride(format!("{key}={value} must be finite and non-negative")));
            }
        }
        Ok(())
    }

    /// `c` values a size is run at: the grid for the sweep, a single `None` otherwise.
    pub fn c_values(&self) -> Vec<Option<f64>> {
        if self.experiment == Experiment::RzebraicSweep {
            self.c_grid.iter().map(|&c| Some(c)).collect()
        } else {
            vec![None]
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("at least one --n value is required")]
    NoSizes,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("oracle budget must be positive")]
    ZeroBudget,
    #[error("n = {n} is below the minimum {min}")]
    TooSmall { n: usize, min: usize },
    #[error("{experiment} needs even n, got {n}")]
    OddN { experiment: Experiment, n: usize },
    #[error("r = {r} does not divide n = {n}")]
    RDoesNotDivide { r: usize, n: usize },
    #[error("r must be at least 2, got {0}")]
    BadR(usize),
    #[error("eps must lie in (0, 0.5), got {0}")]
    BadEps(f64),
    #[error("the c grid needs positive finite values")]
    BadGrid,
    #[error("bad override: {0}")]
    BadOverride(String),
}

/// The splitmix64 output function.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of trial `index`: `splitmix64(master ^ splitmix64(index))`. Depends
/// only on the two inputs, never on which worker runs the trial.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}
