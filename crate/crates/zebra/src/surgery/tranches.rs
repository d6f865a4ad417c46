use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{edge, Edge};
use crate::matching::Phase1Workspace;
use crate::process::ProcessTrace;
use crate::schedule::ParamSchedule;

/// Edge supplies for the rotation phase (`eb`) and the final reassembly (`ec`), both in stream order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeTranches {
    pub n: usize,
    pub eb: Vec<Edge>,
    pub ec: Vec<Edge>,
    pub deg_eb: Vec<usize>,
    /// Vertices outside `V0` with `deg_eb <= L0`.
    pub vtau: Vec<usize>,
    /// Low-degree vertices carried over from the first phase.
    pub vsigma: Vec<usize>,
    /// Vertices the tranches avoid.
    pub v0: Vec<usize>,
}

impl EdgeTranches {
    /// Assembles tranches from explicit edge lists; `excluded` vertices never enter `vtau`.
    pub fn new(n: usize, eb: Vec<Edge>, ec: Vec<Edge>, vsigma: Vec<usize>, excluded: &[bool], l0: usize) -> Self {
        let mut deg_eb = vec![0; n];
        for &(u, v) in &eb {
            deg_eb[u] += 1;
            deg_eb[v] += 1;
        }
        let vtau = (0..n)
            .filter(|&v| !excluded.get(v).copied().unwrap_or(false) && deg_eb[v] <= l0)
            .collect();
        EdgeTranches {
            n,
            eb,
            ec,
            deg_eb,
            vtau,
            vsigma,
            v0: (0..n).filter(|&v| excluded.get(v).copied().unwrap_or(false)).collect(),
        }
    }

    /// `vsigma ∪ vtau` as a flag vector: the initial used set of the rotation phase.
    pub fn initial_used(&self) -> Vec<bool> {
        let mut used = vec![false; self.n];
        for &v in self.vsigma.iter().chain(&self.vtau) {
            used[v] = true;
        }
        used
    }

    pub fn in_vtau(&self) -> Vec<bool> {
        let mut f = vec![false; self.n];
        for &v in &self.vtau {
            f[v] = true;
        }
        f
    }
}

pub fn split_tranches(trace: &ProcessTrace, s: &ParamSchedule, ws: &Phase1Workspace) -> Result<EdgeTranches> {
    let n = trace.n;
    if s.n != n || ws.n != n {
        return invalid("schedule, workspace and trace disagree on n");
    }
    if !(s.t3 <= s.t4 && s.t4 <= s.t0) {
        return invalid("schedule needs t3 <= t4 <= t0");
    }
    if trace.len() < s.t0 {
        return invalid(format!("trace has {} edges, schedule needs t0 = {}", trace.len(), s.t0));
    }
    let in_v0 = ws.in_v0();
    let avoids_v0 = |&(u, v): &Edge| !in_v0[u] && !in_v0[v];
    let mut seen: HashSet<Edge> = trace.edges[..s.t3].iter().map(|&(u, v)| edge(u, v)).collect();
    let mut eb = Vec::new();
    for &e in &trace.edges[s.t3..s.t4] {
        let e = edge(e.0, e.1);
        if seen.insert(e) && avoids_v0(&e) {
            eb.push(e);
        }
    }
    let mut ec = Vec::new();
    for &e in &trace.edges[s.t4..s.t0] {
        let e = edge(e.0, e.1);
        if seen.insert(e) && avoids_v0(&e) && !ws.psi1.has_edge(e.0, e.1) {
            ec.push(e);
        }
    }
    Ok(EdgeTranches::new(n, eb, ec, ws.vsigma.clone(), &in_v0, s.l0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::build_phase1_workspace;
    use crate::process::{sample_process, ProcessModel};
    use crate::schedule::{build_schedule, parse_overrides};

    #[test]
    fn v0_vertex_kept_out_of_eb() {
        // Vertex 7 has no edge before t2, so it lands in V0.
        let mut edges: Vec<Edge> = Vec::new();
        for u in 0..7 {
            for v in u + 1..7 {
                edges.push((u, v));
            }
        }
        edges.truncate(12);
        edges.extend([(1, 7), (6, 7), (2, 6), (3, 6)]);
        let trace = ProcessTrace {
            n: 8,
            model: ProcessModel::UniformWithoutReplacement,
            edges,
            colors: None,
            r: 0,
            recolor_repeats: false,
            repeated: vec![],
            seed: 0,
        };
        let o = parse_overrides(&["t2=12", "t3=12", "t4=15", "t0=16", "t1=16", "L0=1"]).unwrap();
        let s = build_schedule(8, &o).unwrap();
        let ws = build_phase1_workspace(&trace, &s).unwrap();
        let tr = split_tranches(&trace, &s, &ws).unwrap();
        assert!(ws.v0.contains(&7));
        assert_eq!(tr.eb, vec![(2, 6)]);
        assert_eq!(tr.ec, vec![(3, 6)]);
    }

    #[test]
    fn tranches_are_disjoint() {
        let n = 300;
        let trace = sample_process(n, ProcessModel::UniformWithoutReplacement, None, 5, Some(1500)).unwrap();
        let s = build_schedule(n, &crate::schedule::desk_overrides(n, 1500)).unwrap();
        let ws = build_phase1_workspace(&trace, &s).unwrap();
        let tr = split_tranches(&trace, &s, &ws).unwrap();
        let eb: HashSet<Edge> = tr.eb.iter().copied().collect();
        assert!(tr.ec.iter().all(|e| !eb.contains(e)));
        assert!(tr.eb.iter().chain(&tr.ec).all(|&(u, v)| !ws.psi1.has_edge(u, v)));
        let in_v0 = ws.in_v0();
        assert!(tr.eb.iter().chain(&tr.ec).all(|&(u, v)| !in_v0[u] && !in_v0[v]));
        assert!(tr.vtau.iter().all(|&v| tr.deg_eb[v] <= s.l0 && !in_v0[v]));
    }
}
