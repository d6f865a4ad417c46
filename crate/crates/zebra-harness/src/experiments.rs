use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use zebra::process::{
    color_process, hitting_time, random_perfect_matching, sample_process, snapshot, snapshot_colored, HittingCriterion,
    ProcessModel,
};
use zebra::rzebraic::{bad_vertices, poor_vertices, r_params, r_params_at, r_zebraic_hamilton, sample_layered, RInstance};
use zebra::schedule::{build_schedule, desk_overrides, surgery_desk_overrides};
use zebra::surgery::{hamilton_through_matching, PipelineOptions};
use zebra::textio::CertificateDump;
use zebra::zebraic::{exact_tau_pair, zebraic_connected, TauMode};
use zebra::Matching;

use crate::config::{derive_seed, splitmix64, Experiment, ExperimentConfig};
use crate::record::TrialRecord;

/// Salts for the secondary random streams of a trial.
const COLOR_SALT: u64 = 0xC0105;
const SECOND_MATCHING_SALT: u64 = 0x3A7C4;

/// Records in `(n, c, trial)` order and the certificate dumps of every success.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub records: Vec<TrialRecord>,
    /// `(sha256 hex, dump text)` pairs.
    pub certificates: Vec<(String, String)>,
}

struct TrialOutput {
    record: TrialRecord,
    certificate: Option<(String, String)>,
}

pub fn certificate_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs every trial of a validated config. Output order depends only on the
/// config, never on the worker count.
pub fn run(cfg: &ExperimentConfig) -> anyhow::Result<RunOutput> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &n in &cfg.n {
        for c in cfg.c_values() {
            for trial in 0..cfg.trials {
                jobs.push((n, c, trial));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.workers).build()?;
    let outputs: Vec<TrialOutput> = pool.install(|| jobs.par_iter().map(|&(n, c, trial)| run_trial(cfg, n, c, trial)).collect());
    let mut out = RunOutput::default();
    for o in outputs {
        out.records.push(o.record);
        out.certificates.extend(o.certificate);
    }
    Ok(out)
}

fn run_trial(cfg: &ExperimentConfig, n: usize, c: Option<f64>, trial: u64) -> TrialOutput {
    let seed = derive_seed(cfg.master_seed, trial);
    let mut rec = TrialRecord::new(cfg.experiment, n, trial, seed);
    let start = Instant::now();
    let result = match cfg.experiment {
        Experiment::HittingCoincidence => hitting_coincidence(cfg, &mut rec).map(|()| None),
        Experiment::ZebraicCoincidence => zebraic_coincidence(cfg, &mut rec).map(|()| None),
        Experiment::ZebraicConnect => zebraic_connect(&mut rec).map(|()| None),
        Experiment::RzebraicSweep => rzebraic_sweep(cfg, c.expect("sweep trials carry c"), &mut rec),
        Experiment::MatchingStats => matching_stats(&mut rec).map(|()| None),
        Experiment::PipelineDemo => pipeline_demo(cfg, &mut rec),
    };
    let certificate = match result {
        Ok(cert) => cert,
        Err(e) => {
            rec.error = Some(e.to_string());
            None
        }
    };
    if cfg.timing {
        rec.ms = Some((start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
    }
    TrialOutput {
        record: rec,
        certificate,
    }
}

fn hitting_coincidence(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> zebra::Result<()> {
    let m0 = random_perfect_matching(rec.n, rec.seed)?;
    let trace = sample_process(rec.n, ProcessModel::UniformExcludingM0, Some(&m0), rec.seed, None)?;
    let t = exact_tau_pair(&trace, TauMode::ThroughMatching(&m0), cfg.budget, false)?;
    rec.tau1 = t.m_deg;
    rec.tau_h = t.m_struct;
    rec.budget_exceeded = Some(t.censored);
    if !t.censored {
        rec.equal = Some(t.m_deg.is_some() && t.m_deg == t.m_struct);
    }
    Ok(())
}

fn zebraic_coincidence(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> zebra::Result<()> {
    let plain = sample_process(rec.n, ProcessModel::UniformWithoutReplacement, None, rec.seed, None)?;
    let colored = color_process(&plain, 2, splitmix64(rec.seed ^ COLOR_SALT), false)?;
    let t = exact_tau_pair(&colored, TauMode::Zebraic, cfg.budget, false)?;
    rec.tau11 = t.m_deg;
    rec.tau_zh = t.m_struct;
    rec.budget_exceeded = Some(t.censored);
    if !t.censored {
        rec.equal = Some(t.m_deg.is_some() && t.m_deg == t.m_struct);
    }
    Ok(())
}

fn zebraic_connect(rec: &mut TrialRecord) -> zebra::Result<()> {
    let n = rec.n;
    // Minimum degree one arrives near (n/2) ln n edges; fall back to the whole process.
    let guess = (n as f64 * (n as f64).ln()).ceil() as usize + n;
    let mut trace = sample_process(n, ProcessModel::UniformWithoutReplacement, None, rec.seed, Some(guess))?;
    let mut tau1 = hitting_time(&trace, HittingCriterion::MinDegreeOne)?;
    if tau1.is_none() {
        trace = sample_process(n, ProcessModel::UniformWithoutReplacement, None, rec.seed, None)?;
        tau1 = hitting_time(&trace, HittingCriterion::MinDegreeOne)?;
    }
    let Some(tau1) = tau1 else {
        return Err(zebra::ZebraError::InvalidInput("process never reaches minimum degree one".into()));
    };
    rec.tau1 = Some(tau1);
    let colored = color_process(&trace.truncated(tau1), 2, splitmix64(rec.seed ^ COLOR_SALT), false)?;
    let g = snapshot_colored(&colored, tau1)?;
    rec.connected = Some(zebraic_connected(&g)?.connected);
    Ok(())
}

fn rzebraic_sweep(cfg: &ExperimentConfig, c: f64, rec: &mut TrialRecord) -> zebra::Result<Option<(String, String)>> {
    let (n, r) = (rec.n, cfg.r);
    let threshold = r_params(n, r, cfg.eps)?;
    let params = r_params_at(n, r, cfg.eps, Some((c * threshold.p_r).min(1.0)))?;
    rec.r = Some(r);
    rec.c = Some(c);
    rec.p = Some(params.p);
    let layered = sample_layered(&params, rec.seed);
    let inst = if cfg.layered { layered } else { RInstance::single(layered.graph) };
    let bad = bad_vertices(&inst.graph, r)?.len();
    rec.bad = Some(bad);
    rec.poor = Some(poor_vertices(&inst.base, &params)?.len());
    if !cfg.pipeline {
        return Ok(None);
    }
    let mut overrides = surgery_desk_overrides(2 * n / r);
    overrides.extend(cfg.overrides.clone());
    match r_zebraic_hamilton(&inst, &params, &overrides, rec.seed, &desk_options()) {
        Ok(ok) => {
            let dump = CertificateDump {
                graph: inst.graph.clone(),
                m0: None,
                zebraic2: false,
                r_pattern: Some(r),
                cycle: ok.cycle,
            };
            Ok(Some(succeed(rec, &dump)))
        }
        Err(f) => {
            rec.success = Some(false);
            rec.stage = Some(stage_name(&f.stage));
            Ok(None)
        }
    }
}

fn matching_stats(rec: &mut TrialRecord) -> zebra::Result<()> {
    let m0 = random_perfect_matching(rec.n, rec.seed)?;
    let m1 = random_perfect_matching(rec.n, splitmix64(rec.seed ^ SECOND_MATCHING_SALT))?;
    rec.disjoint = Some(m1.is_disjoint_from(&m0));
    let (cycle0, components) = union_cycles(&m0, &m1);
    rec.cycle0 = Some(cycle0);
    rec.components = Some(components);
    Ok(())
}

/// Length of the cycle of `m0 ∪ m1` through vertex 0 and the number of cycles,
/// with a shared edge forming a cycle of length 2.
pub fn union_cycles(m0: &Matching, m1: &Matching) -> (usize, usize) {
    let n = m0.n();
    let (a, b) = (m0.mates(), m1.mates());
    let mut seen = vec![false; n];
    let mut through0 = 0;
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut len = 0;
        let mut v = s;
        loop {
            seen[v] = true;
            let w = a[v];
            seen[w] = true;
            len += 2;
            v = b[w];
            if v == s {
                break;
            }
        }
        if s == 0 {
            through0 = len;
        }
    }
    (through0, count)
}

/// Trace length used by the pipeline demo: `t1` if overridden, else `(n/2)(ln n + 6)`.
pub fn demo_length(n: usize, overrides: &BTreeMap<String, f64>) -> usize {
    match overrides.get("t1") {
        Some(&t1) => t1 as usize,
        None => (n as f64 / 2.0 * ((n as f64).ln() + 6.0)).ceil() as usize,
    }
}

fn pipeline_demo(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> zebra::Result<Option<(String, String)>> {
    let n = rec.n;
    let len = demo_length(n, &cfg.overrides);
    let m0 = random_perfect_matching(n, rec.seed)?;
    let trace = sample_process(n, ProcessModel::UniformExcludingM0, Some(&m0), rec.seed, Some(len))?;
    rec.tau1 = hitting_time(&trace, HittingCriterion::MinDegreeOne)?;
    let mut overrides = desk_overrides(n, trace.len());
    overrides.extend(cfg.overrides.clone());
    let s = build_schedule(n, &overrides)?;
    match hamilton_through_matching(&trace, &m0, &s, rec.seed, &desk_options()) {
        Ok(ok) => {
            let host = snapshot(&trace, trace.len())?;
            let dump = CertificateDump::from_plain(&host, Some(&m0), &ok.cycle);
            Ok(Some(succeed(rec, &dump)))
        }
        Err(f) => {
            rec.success = Some(false);
            rec.stage = Some(stage_name(&f.stage));
            Ok(None)
        }
    }
}

/// Pipeline options for desk-scale runs: the used set restarts for every eliminated cycle.
pub fn desk_options() -> PipelineOptions {
    let mut opts = PipelineOptions::default();
    opts.phase2.reset_used_per_cycle = true;
    opts
}

fn succeed(rec: &mut TrialRecord, dump: &CertificateDump) -> (String, String) {
    let text = dump.write();
    let hash = certificate_hash(&text);
    rec.success = Some(true);
    rec.certificate = Some(hash.clone());
    (hash, text)
}

fn stage_name<T: serde::Serialize>(stage: &T) -> String {
    match serde_json::to_value(stage) {
        Ok(serde_json::Value::String(s)) => s,
        _ => "unknown".into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_cycle_lengths() {
        let m0 = Matching::from_edges(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let m1 = Matching::from_edges(6, [(0, 1), (2, 5), (3, 4)]).unwrap();
        assert_eq!(union_cycles(&m0, &m1), (2, 2));
        let m2 = Matching::from_edges(6, [(1, 2), (3, 4), (0, 5)]).unwrap();
        assert_eq!(union_cycles(&m0, &m2), (6, 1));
    }

    #[test]
    fn known_hash() {
        assert_eq!(certificate_hash(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
