use serde::{Deserialize, Serialize};

use crate::config::Experiment;
use crate::record::TrialRecord;

/// Aggregates over one `(n, c)` group. Rates exclude censored trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryRow {
    pub experiment: Experiment,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub trials: usize,
    pub censored: usize,
    /// Trials that stopped on a library error.
    pub errors: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_equal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_equal: Option<f64>,
    /// Trials where the structural hitting time came before the degree one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_connected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_connected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_no_bad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_no_bad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_bad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_bad: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_poor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_pipeline_success: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_pipeline_success: Option<f64>,
    /// Successes that carry a certificate hash.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_disjoint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub se_disjoint: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_components: Option<f64>,
    /// Fraction of trials with at most `10 log2 n` components.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frac_within_bound: Option<f64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SummaryError {
    #[error("no records to summarize")]
    Empty,
    #[error("records mix experiments {0} and {1}")]
    Mixed(Experiment, Experiment),
}

/// Fraction of `true` among the present flags, with its binomial standard error.
pub fn fraction(flags: impl IntoIterator<Item = bool>) -> Option<(f64, f64)> {
    let (mut hits, mut k) = (0usize, 0usize);
    for f in flags {
        k += 1;
        hits += f as usize;
    }
    if k == 0 {
        return None;
    }
    let f = hits as f64 / k as f64;
    Some((f, (f * (1.0 - f) / k as f64).sqrt()))
}

/// Sample mean with the standard error of the mean.
pub fn mean(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    let xs: Vec<f64> = values.into_iter().collect();
    let k = xs.len();
    if k == 0 {
        return None;
    }
    let m = xs.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return Some((m, 0.0));
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1) as f64;
    Some((m, (var / k as f64).sqrt()))
}

fn split(v: Option<(f64, f64)>) -> (Option<f64>, Option<f64>) {
    (v.map(|x| x.0), v.map(|x| x.1))
}

/// Per-`(n, c)` aggregates in order of first appearance.
pub fn summarize(records: &[TrialRecord]) -> Result<Vec<SummaryRow>, SummaryError> {
    let first = records.first().ok_or(SummaryError::Empty)?.experiment;
    if let Some(other) = records.iter().find(|r| r.experiment != first) {
        return Err(SummaryError::Mixed(first, other.experiment));
    }
    let mut keys: Vec<(usize, Option<u64>)> = Vec::new();
    for rec in records {
        let key = (rec.n, rec.c.map(f64::to_bits));
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let rows = keys
        .into_iter()
        .map(|key| {
            let group: Vec<&TrialRecord> = records.iter().filter(|r| (r.n, r.c.map(f64::to_bits)) == key).collect();
            summarize_group(first, &group)
        })
        .collect();
    Ok(rows)
}

fn summarize_group(experiment: Experiment, group: &[&TrialRecord]) -> SummaryRow {
    let head = group[0];
    let live: Vec<&TrialRecord> = group.iter().copied().filter(|r| !r.censored() && r.error.is_none()).collect();
    let (frac_equal, se_equal) = split(fraction(live.iter().filter_map(|r| r.equal)));
    let (frac_connected, se_connected) = split(fraction(live.iter().filter_map(|r| r.connected)));
    let (frac_no_bad, se_no_bad) = split(fraction(live.iter().filter_map(|r| r.bad.map(|b| b == 0))));
    let (mean_bad, se_bad) = split(mean(live.iter().filter_map(|r| r.bad.map(|b| b as f64))));
    let mean_poor = mean(live.iter().filter_map(|r| r.poor.map(|b| b as f64))).map(|m| m.0);
    let (frac_pipeline_success, se_pipeline_success) = split(fraction(live.iter().filter_map(|r| r.success)));
    let (frac_disjoint, se_disjoint) = split(fraction(live.iter().filter_map(|r| r.disjoint)));
    let mean_components = mean(live.iter().filter_map(|r| r.components.map(|c| c as f64))).map(|m| m.0);
    let bound = 10.0 * (head.n as f64).log2();
    let frac_within_bound = fraction(live.iter().filter_map(|r| r.components.map(|c| c as f64 <= bound))).map(|f| f.0);
    let coincidence = matches!(experiment, Experiment::HittingCoincidence | Experiment::ZebraicCoincidence);
    let violations = coincidence.then(|| {
        group
            .iter()
            .filter(|r| match (r.tau1.or(r.tau11), r.tau_h.or(r.tau_zh)) {
                (Some(deg), Some(structural)) => structural < deg,
                _ => false,
            })
            .count()
    });
    let has_success = group.iter().any(|r| r.success.is_some());
    SummaryRow {
        experiment,
        n: head.n,
        r: head.r,
        c: head.c,
        p: head.p,
        trials: group.len(),
        censored: group.iter().filter(|r| r.censored()).count(),
        errors: group.iter().filter(|r| r.error.is_some()).count(),
        frac_equal,
        se_equal,
        violations,
        frac_connected,
        se_connected,
        frac_no_bad,
        se_no_bad,
        mean_bad,
        se_bad,
        mean_poor,
        frac_pipeline_success,
        se_pipeline_success,
        certified: has_success
            .then(|| group.iter().filter(|r| r.success == Some(true) && r.certificate.is_some()).count()),
        frac_disjoint,
        se_disjoint,
        mean_components,
        frac_within_bound,
    }
}

pub fn summary_columns(e: Experiment) -> &'static [&'static str] {
    match e {
        Experiment::HittingCoincidence | Experiment::ZebraicCoincidence => {
            &["experiment", "n", "trials", "censored", "errors", "fracEqual", "seEqual", "violations"]
        }
        Experiment::ZebraicConnect => &["experiment", "n", "trials", "errors", "fracConnected", "seConnected"],
        Experiment::RzebraicSweep => &["r", "n", "c", "p", "trials", "fracNoBad", "fracPipelineSuccess", "meanBad"],
        Experiment::MatchingStats => {
            &["experiment", "n", "trials", "fracDisjoint", "seDisjoint", "meanComponents", "fracWithinBound"]
        }
        Experiment::PipelineDemo => {
            &["experiment", "n", "trials", "errors", "fracPipelineSuccess", "sePipelineSuccess", "certified"]
        }
    }
}
