use serde::{Deserialize, Serialize};

use super::phase2::{eliminate_small_cycles, small_cycles, Phase2Options, Phase2Stats};
use super::phase3::{close_to_hamilton, Phase3Method, Phase3Options};
use super::tranches::{split_tranches, EdgeTranches};
use crate::certify::{certify, Checks, CycleCertificate, Host};
use crate::factor::{union_two_factor, TwoFactor};
use crate::graph::Matching;
use crate::matching::{build_phase1_workspace, phase1_matching};
use crate::process::{snapshot, ProcessTrace};
use crate::schedule::ParamSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureStage {
    Schedule,
    BadVertex,
    BlackMatching,
    Classification,
    ChainMatching,
    Phase1,
    Phase2,
    Phase3,
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineFailure {
    pub stage: FailureStage,
    pub detail: String,
}

impl PipelineFailure {
    pub fn new(stage: FailureStage, detail: impl Into<String>) -> Self {
        PipelineFailure {
            stage,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    pub phase2: Phase2Options,
    pub phase3: Phase3Options,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineStats {
    pub phase1_steps: usize,
    pub initial_cycles: usize,
    pub initial_small_cycles: usize,
    pub eb: usize,
    pub ec: usize,
    pub phase2: Phase2Stats,
    pub phase3: Option<Phase3Method>,
}

#[derive(Clone, Debug)]
pub struct PipelineSuccess {
    pub cycle: Vec<usize>,
    pub certificate: CycleCertificate,
    pub stats: PipelineStats,
}

/// Phases 2 and 3 from a 2-factor containing `M0`: returns the Hamilton cycle
/// (uncertified) and fills the phase statistics.
pub fn surgery_from_factor(
    pi0: &TwoFactor,
    tranches: &EdgeTranches,
    s: &ParamSchedule,
    seed: u64,
    opts: &PipelineOptions,
    stats: &mut PipelineStats,
) -> Result<Vec<usize>, PipelineFailure> {
    stats.initial_cycles = pi0.cycles.len();
    stats.initial_small_cycles = small_cycles(pi0, s.nc).len();
    stats.eb = tranches.eb.len();
    stats.ec = tranches.ec.len();
    let p2 = eliminate_small_cycles(pi0, tranches, s, &opts.phase2).map_err(|f| {
        stats.phase2 = f.stats.clone();
        PipelineFailure::new(
            FailureStage::Phase2,
            format!(
                "{:?} on a cycle of length {} ({} stage-1 and {} stage-2 nodes, {} closures rejected)",
                f.reason,
                f.cycle.len(),
                f.stats.stage1_nodes,
                f.stats.stage2_nodes,
                f.stats.rejected_closures
            ),
        )
    })?;
    stats.phase2 = p2.stats.clone();
    let p3 = close_to_hamilton(&p2.factor, &tranches.ec, &tranches.eb, &p2.used, s, seed, &opts.phase3).map_err(|f| {
        PipelineFailure::new(
            FailureStage::Phase3,
            format!(
                "{} cycles left after {} attempts (m = {}, connector density {:.4})",
                f.cycles_left, f.attempts, f.m, f.connector_density
            ),
        )
    })?;
    stats.phase3 = Some(p3.method);
    Ok(p3.cycle)
}

/// Runs the three phases on `trace` and returns a certified Hamilton cycle of
/// the trace prefix that contains every edge of `m0`.
pub fn hamilton_through_matching(
    trace: &ProcessTrace,
    m0: &Matching,
    s: &ParamSchedule,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<PipelineSuccess, PipelineFailure> {
    let sched_err = |e: crate::ZebraError| PipelineFailure::new(FailureStage::Schedule, e.to_string());
    if m0.n() != trace.n || !m0.is_perfect() {
        return Err(PipelineFailure::new(FailureStage::Schedule, "M0 is not a perfect matching of the vertex set"));
    }
    let ws = build_phase1_workspace(trace, s).map_err(sched_err)?;
    let tranches = split_tranches(trace, s, &ws).map_err(sched_err)?;
    let p1 = phase1_matching(&ws, m0, seed).map_err(|f| {
        PipelineFailure::new(
            FailureStage::Phase1,
            format!("matching of size {} leaves {} vertices exposed", f.size, f.exposed.len()),
        )
    })?;
    let mut stats = PipelineStats {
        phase1_steps: p1.steps,
        ..Default::default()
    };
    let pi0 = union_two_factor(m0, &p1.m1).map_err(|e| PipelineFailure::new(FailureStage::Phase1, e.to_string()))?;
    let cycle = surgery_from_factor(&pi0, &tranches, s, seed, opts, &mut stats)?;
    let host = snapshot(trace, s.t1.min(trace.len()).max(s.t0)).map_err(sched_err)?;
    let certificate = certify(
        &cycle,
        Host::Plain(&host),
        Checks {
            m0: Some(m0),
            ..Default::default()
        },
    );
    if !certificate.passed() {
        return Err(PipelineFailure::new(FailureStage::Certificate, "cycle failed certification"));
    }
    Ok(PipelineSuccess {
        cycle,
        certificate,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::ProcessModel;
    use crate::schedule::build_schedule;
    use std::collections::BTreeMap;

    #[test]
    fn four_vertices_unique_cycle() {
        let m0 = Matching::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let trace = ProcessTrace {
            n: 4,
            model: ProcessModel::UniformExcludingM0,
            edges: vec![(0, 2), (1, 3), (0, 3), (1, 2)],
            colors: None,
            r: 0,
            recolor_repeats: false,
            repeated: vec![],
            seed: 0,
        };
        let s = build_schedule(4, &BTreeMap::new()).unwrap();
        let ok = hamilton_through_matching(&trace, &m0, &s, 1, &PipelineOptions::default()).unwrap();
        assert!(ok.certificate.passed());
        assert_eq!(ok.cycle.len(), 4);
    }

    #[test]
    fn short_trace_is_schedule_failure() {
        let m0 = Matching::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let trace = ProcessTrace {
            n: 4,
            model: ProcessModel::UniformExcludingM0,
            edges: vec![],
            colors: None,
            r: 0,
            recolor_repeats: false,
            repeated: vec![],
            seed: 0,
        };
        let s = build_schedule(4, &BTreeMap::new()).unwrap();
        let err = hamilton_through_matching(&trace, &m0, &s, 1, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.stage, FailureStage::Schedule);
    }
}
