use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::incremental::IncrementalMatching;
use crate::error::{invalid, Result};
use crate::graph::{Edge, Graph, Matching, NONE};
use crate::process::{rng_from, ProcessTrace};
use crate::schedule::ParamSchedule;

/// Graphs and vertex sets feeding the first matching phase.
#[derive(Clone, Debug)]
pub struct Phase1Workspace {
    pub n: usize,
    /// `G_{t2}`.
    pub psi0: Graph,
    /// Vertices of degree at most `L0` in `psi0`.
    pub v0: Vec<usize>,
    /// `psi0` plus the edges of `E_{t1} \ E_{t2}` meeting `v0`.
    pub psi1: Graph,
    /// `E_{t3} \ E(psi1)` in stream order.
    pub ea: Vec<Edge>,
    /// Vertices of degree below `L0` in `G_{t1}`.
    pub vsigma: Vec<usize>,
    pub vlambda: Vec<usize>,
}

impl Phase1Workspace {
    pub fn in_v0(&self) -> Vec<bool> {
        let mut f = vec![false; self.n];
        for &v in &self.v0 {
            f[v] = true;
        }
        f
    }
}

pub fn build_phase1_workspace(trace: &ProcessTrace, s: &ParamSchedule) -> Result<Phase1Workspace> {
    let n = trace.n;
    if s.n != n {
        return invalid(format!("schedule is for n = {}, trace has n = {n}", s.n));
    }
    if !(s.t2 <= s.t3 && s.t3 <= s.t1) {
        return invalid("schedule needs t2 <= t3 <= t1");
    }
    if trace.len() < s.t3 {
        return invalid(format!("trace has {} edges, schedule needs t3 = {}", trace.len(), s.t3));
    }
    let t1 = s.t1.min(trace.len());
    let psi0 = Graph::from_edges(n, trace.edges[..s.t2].iter().copied());
    let v0: Vec<usize> = (0..n).filter(|&v| psi0.degree(v) <= s.l0).collect();
    let mut in_v0 = vec![false; n];
    for &v in &v0 {
        in_v0[v] = true;
    }
    let mut psi1 = psi0.clone();
    for &(u, v) in &trace.edges[s.t2..t1] {
        if in_v0[u] || in_v0[v] {
            psi1.add_edge(u, v);
        }
    }
    let mut seen: HashSet<Edge> = HashSet::new();
    let ea: Vec<Edge> = trace.edges[..s.t3]
        .iter()
        .copied()
        .filter(|&(u, v)| !psi1.has_edge(u, v) && seen.insert((u, v)))
        .collect();
    let g1 = Graph::from_edges(n, trace.edges[..t1].iter().copied());
    let (vsigma, vlambda): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| g1.degree(v) < s.l0);
    Ok(Phase1Workspace {
        n,
        psi0,
        v0,
        psi1,
        ea,
        vsigma,
        vlambda,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase1Failure {
    pub size: usize,
    pub exposed: Vec<usize>,
    /// Residual edges processed before giving up.
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct Phase1Success {
    pub m1: Matching,
    /// Residual edges consumed before the matching became perfect.
    pub steps: usize,
}

/// Builds a perfect matching avoiding `m0` from `psi1` and then the residual
/// edges one at a time, keeping a maximum matching throughout.
pub fn phase1_matching(
    ws: &Phase1Workspace,
    m0: &Matching,
    seed: u64,
) -> std::result::Result<Phase1Success, Phase1Failure> {
    let n = ws.n;
    let avoid = |&(u, v): &Edge| !m0.contains(u, v);
    let h0 = Graph::from_edges(n, ws.psi1.edges().into_iter().filter(avoid));
    let start = seeded_greedy(&h0, seed);
    let mut inc = IncrementalMatching::new(&h0, Some(&start));
    let mut steps = 0;
    for &(u, v) in &ws.ea {
        if inc.is_perfect() {
            break;
        }
        steps += 1;
        if !m0.contains(u, v) {
            inc.add_edge(u, v);
        }
    }
    if inc.is_perfect() && n > 0 {
        Ok(Phase1Success {
            m1: inc.matching(),
            steps,
        })
    } else {
        let m = inc.matching();
        Err(Phase1Failure {
            size: m.size(),
            exposed: m.exposed(),
            steps,
        })
    }
}

fn seeded_greedy(g: &Graph, seed: u64) -> Matching {
    let mut rng = rng_from(seed);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(&mut rng);
    let mut mate = vec![NONE; g.n()];
    for &v in &order {
        if mate[v] != NONE {
            continue;
        }
        let mut cands: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| mate[u] == NONE).collect();
        if cands.is_empty() {
            continue;
        }
        cands.sort_unstable();
        let u = *cands.choose(&mut rng).expect("nonempty");
        mate[v] = u;
        mate[u] = v;
    }
    Matching::from_mate(mate).expect("involution")
}
