use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::pn2f::{acceptable_at, Pn2f, Rotation};
use super::tranches::EdgeTranches;
use crate::factor::TwoFactor;
use crate::graph::{edge, Edge, Matching, NONE};
use crate::schedule::ParamSchedule;

#[derive(Clone, Copy, Debug)]
pub struct Phase2Options {
    /// Depth of the endpoint trees grown from `u0`; defaults to `ell1`.
    pub stage2_depth: Option<usize>,
    /// Cap on endpoint-tree nodes per eliminated cycle.
    pub node_cap: usize,
    /// Restart `W` from its initial value for every eliminated cycle.
    pub reset_used_per_cycle: bool,
}

impl Default for Phase2Options {
    fn default() -> Self {
        Phase2Options {
            stage2_depth: None,
            node_cap: 200_000,
            reset_used_per_cycle: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase2Stats {
    pub eliminated: usize,
    pub stage1_nodes: usize,
    pub stage2_nodes: usize,
    pub premature_closures: usize,
    /// Closing edges found whose result would add a small cycle.
    pub rejected_closures: usize,
    pub used: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase2Reason {
    /// Every non-`M0` edge of the cycle touches `vtau` or `V0`.
    NoEligibleEdge,
    NoClosingEdge,
    UsedSetOverflow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase2Failure {
    pub cycle: Vec<usize>,
    pub reason: Phase2Reason,
    pub stats: Phase2Stats,
}

#[derive(Clone, Debug)]
pub struct Phase2Success {
    pub factor: TwoFactor,
    /// Final used set `W`.
    pub used: Vec<bool>,
    pub stats: Phase2Stats,
}

/// Cycles shorter than `nc`; a Hamilton cycle is never small.
pub fn small_cycles(f: &TwoFactor, nc: usize) -> Vec<Vec<usize>> {
    if f.cycles.len() <= 1 {
        return Vec::new();
    }
    f.cycles.iter().filter(|c| c.len() < nc).cloned().collect()
}

/// Supply adjacency without `M0` edges, in stream order.
pub fn supply_adjacency(n: usize, supply: &[Edge], m0: &Matching) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in supply {
        if !m0.contains(u, v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    adj
}

struct Ctx<'a> {
    m0: &'a Matching,
    adj: Vec<Vec<usize>>,
    eb: HashSet<Edge>,
    used: Vec<bool>,
    used_count: usize,
    nc: usize,
    stats: Phase2Stats,
}

impl Ctx<'_> {
    fn mark(&mut self, vs: &[usize]) {
        for &v in vs {
            if v != NONE && !self.used[v] {
                self.used[v] = true;
                self.used_count += 1;
            }
        }
    }
}

/// Removes every cycle shorter than `nc` by growing rotation trees over `EB`.
/// Deterministic given the stream order of `EB`.
pub fn eliminate_small_cycles(
    pi0: &TwoFactor,
    tranches: &EdgeTranches,
    s: &ParamSchedule,
    opts: &Phase2Options,
) -> Result<Phase2Success, Phase2Failure> {
    // `V0` vertices have no supply edges, so they cannot end a rotation path either.
    let mut ineligible = tranches.in_vtau();
    for &v in &tranches.v0 {
        ineligible[v] = true;
    }
    run(pi0, &tranches.eb, tranches.initial_used(), &ineligible, s, opts, false)
}

/// Merges all cycles into one with the same rotation trees, opening the
/// shortest remaining cycle each round. Closures must lower the cycle count
/// and may not create cycles shorter than `nc`.
pub fn merge_cycles_by_rotation(
    pi: &TwoFactor,
    supply: &[Edge],
    used: &[bool],
    s: &ParamSchedule,
    opts: &Phase2Options,
) -> Result<Phase2Success, Phase2Failure> {
    let m0 = pi.m0.as_ref().expect("two-factor must carry M0");
    let ineligible: Vec<bool> = supply_adjacency(pi.n, supply, m0).iter().map(Vec::is_empty).collect();
    run(pi, supply, used.to_vec(), &ineligible, s, opts, true)
}

fn run(
    pi0: &TwoFactor,
    supply: &[Edge],
    initial_used: Vec<bool>,
    ineligible: &[bool],
    s: &ParamSchedule,
    opts: &Phase2Options,
    merge_all: bool,
) -> Result<Phase2Success, Phase2Failure> {
    let m0 = pi0.m0.as_ref().expect("two-factor must carry M0");
    let mut ctx = Ctx {
        m0,
        adj: supply_adjacency(pi0.n, supply, m0),
        eb: supply.iter().map(|&(u, v)| edge(u, v)).collect(),
        used_count: initial_used.iter().filter(|&&u| u).count(),
        used: initial_used.clone(),
        nc: s.nc,
        stats: Phase2Stats::default(),
    };
    let mut factor = pi0.clone();
    loop {
        let small = small_cycles(&factor, s.nc);
        let target = if merge_all {
            if factor.cycles.len() > 1 {
                factor.cycles.iter().min_by_key(|c| c.len()).cloned()
            } else {
                None
            }
        } else {
            small.first().cloned()
        };
        let Some(target) = target else {
            ctx.stats.used = ctx.used_count;
            return Ok(Phase2Success {
                factor,
                used: ctx.used,
                stats: ctx.stats,
            });
        };
        let fail = |ctx: &Ctx, reason| Phase2Failure {
            cycle: target.clone(),
            reason,
            stats: Phase2Stats {
                used: ctx.used_count,
                ..ctx.stats.clone()
            },
        };
        if opts.reset_used_per_cycle {
            ctx.used_count = initial_used.iter().filter(|&&u| u).count();
            ctx.used = initial_used.clone();
        }
        let k = target.len();
        let Some((u0, v0)) = (0..k)
            .map(|i| (target[i], target[(i + 1) % k]))
            .filter(|&(a, b)| !m0.contains(a, b) && !ineligible[a] && !ineligible[b])
            .map(|(a, b)| edge(a, b))
            .min()
        else {
            return Err(fail(&ctx, Phase2Reason::NoEligibleEdge));
        };
        let root = Pn2f::open(&factor, u0, v0).expect("cycle edge");
        ctx.mark(&[u0, v0]);
        let goal = Goal {
            old_small: small.iter().map(|c| sorted(c)).collect(),
            old_cycles: if merge_all { factor.cycles.len() } else { usize::MAX },
        };
        let outcome = eliminate_one(&mut ctx, &root, &goal, s, opts);
        if ctx.used_count > s.w_budget {
            return Err(fail(&ctx, Phase2Reason::UsedSetOverflow));
        }
        match outcome {
            Some(f) => {
                factor = f;
                ctx.stats.eliminated += 1;
            }
            None => return Err(fail(&ctx, Phase2Reason::NoClosingEdge)),
        }
    }
}

struct Goal {
    old_small: HashSet<Vec<usize>>,
    /// In merge mode, the cycle count that a closure must beat.
    old_cycles: usize,
}

impl Goal {
    /// A closure may not create small cycles, and must remove one (or, in
    /// merge mode, lower the cycle count).
    fn met_by(&self, f: &TwoFactor, nc: usize) -> bool {
        let small = small_cycles(f, nc);
        if !small.iter().all(|c| self.old_small.contains(&sorted(c))) {
            return false;
        }
        if self.old_cycles == usize::MAX {
            small.len() < self.old_small.len()
        } else {
            f.cycles.len() < self.old_cycles
        }
    }
}

fn sorted(c: &[usize]) -> Vec<usize> {
    let mut v = c.to_vec();
    v.sort_unstable();
    v
}

fn eliminate_one(
    ctx: &mut Ctx,
    root: &Pn2f,
    goal: &Goal,
    s: &ParamSchedule,
    opts: &Phase2Options,
) -> Option<TwoFactor> {
    let m0 = ctx.m0;
    let mate = m0.mates();
    let mut level = vec![root.clone()];
    'stage1: for _ in 0..s.ell1 {
        let mut next = Vec::new();
        for g in &level {
            let pos = g.path_positions(m0);
            let v = g.moving();
            let mut taken = 0;
            let mut marks = Vec::new();
            for &w in &ctx.adj[v] {
                if taken >= s.ell0 || next.len() >= s.nu_l {
                    break;
                }
                if w == mate[v] {
                    continue;
                }
                let x = g.other(w);
                if x == NONE {
                    let closed = g.close(m0).ok();
                    if let Some(f) = closed.filter(|f| goal.met_by(f, ctx.nc)) {
                        ctx.stats.premature_closures += 1;
                        return Some(f);
                    }
                    continue;
                }
                if !acceptable_at(g, m0, w, &ctx.used, ctx.nc, &pos) {
                    continue;
                }
                let mut child = g.clone();
                child.rotate(m0, w).expect("acceptable rotation");
                marks.extend([v, w, x]);
                next.push(child);
                taken += 1;
            }
            ctx.mark(&marks);
            ctx.stats.stage1_nodes += taken;
            if next.len() >= s.nu_l {
                level = next;
                break 'stage1;
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    stage2(ctx, root, &level, goal, opts.stage2_depth.unwrap_or(s.ell1), opts.node_cap)
}

struct EndNode {
    end: usize,
    parent: usize,
    via: usize,
}

/// Grows one endpoint tree from the fixed end `u0`, shared by all Stage-1 leaves:
/// with `W` frozen during a level, a rotation at `u` only reads `other[w]` for
/// `w ∉ W`, which every leaf inherits unchanged from `root`.
fn stage2(
    ctx: &mut Ctx,
    root: &Pn2f,
    leaves: &[Pn2f],
    goal: &Goal,
    depth: usize,
    node_cap: usize,
) -> Option<TwoFactor> {
    let m0 = ctx.m0;
    let mate = m0.mates();
    let mut leaf_at: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, g) in leaves.iter().enumerate() {
        leaf_at.entry(g.moving()).or_default().push(i);
    }
    let leaf_ends: Vec<usize> = leaves.iter().map(Pn2f::moving).collect();
    let mut nodes = vec![EndNode {
        end: root.fixed(),
        parent: NONE,
        via: NONE,
    }];
    let mut current = vec![0usize];
    for level in 0..=depth {
        for &id in &current {
            let u = nodes[id].end;
            for (i, &vi) in leaf_ends.iter().enumerate() {
                if vi == u || mate[u] == vi || !ctx.eb.contains(&edge(u, vi)) {
                    continue;
                }
                if let Some(f) = replay_and_close(m0, &leaves[i], &nodes, id) {
                    if goal.met_by(&f, ctx.nc) {
                        return Some(f);
                    }
                    ctx.stats.rejected_closures += 1;
                }
            }
        }
        if level == depth {
            break;
        }
        let mut next = Vec::new();
        let mut marks = Vec::new();
        'grow: for &id in &current {
            let u = nodes[id].end;
            for &w in &ctx.adj[u] {
                if ctx.used[w] || w == mate[u] {
                    continue;
                }
                let x = root.other(w);
                if x == NONE || ctx.used[x] {
                    continue;
                }
                if nodes.len() >= node_cap {
                    break 'grow;
                }
                nodes.push(EndNode { end: x, parent: id, via: w });
                next.push(nodes.len() - 1);
                marks.extend([u, w, x]);
            }
        }
        ctx.stats.stage2_nodes += next.len();
        ctx.mark(&marks);
        if next.is_empty() {
            break;
        }
        current = next;
    }
    None
}

fn replay_and_close(m0: &Matching, leaf: &Pn2f, nodes: &[EndNode], id: usize) -> Option<TwoFactor> {
    let mut seq = Vec::new();
    let mut cur = id;
    while nodes[cur].parent != NONE {
        seq.push(nodes[cur].via);
        cur = nodes[cur].parent;
    }
    let mut g = leaf.reversed();
    for &w in seq.iter().rev() {
        match g.rotate(m0, w) {
            Ok(Rotation::Rotated { .. }) => {}
            _ => return None,
        }
    }
    debug_assert_eq!(g.moving(), nodes[id].end);
    g.close(m0).ok()
}

/// Per-tree endpoint sets `L_{i,ℓ}` obtained by rotating each leaf's own
/// structure at its `u0` end, with `used` frozen within a level and merged
/// between levels. Used to check that the shared tree is faithful.
pub fn stage2_endpoint_levels(
    leaves: &[Pn2f],
    m0: &Matching,
    supply_adj: &[Vec<usize>],
    used: &[bool],
    depth: usize,
) -> Vec<Vec<Vec<usize>>> {
    let mate = m0.mates();
    let mut used = used.to_vec();
    let mut frontier: Vec<Vec<Pn2f>> = leaves.iter().map(|g| vec![g.reversed()]).collect();
    let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); leaves.len()];
    for level in 0..=depth {
        for (i, f) in frontier.iter().enumerate() {
            let mut ends: Vec<usize> = f.iter().map(Pn2f::moving).collect();
            ends.sort_unstable();
            ends.dedup();
            out[i].push(ends);
        }
        if level == depth {
            break;
        }
        let mut marks = Vec::new();
        for f in frontier.iter_mut() {
            let mut next = Vec::new();
            for g in f.iter() {
                let u = g.moving();
                for &w in &supply_adj[u] {
                    if used[w] || w == mate[u] {
                        continue;
                    }
                    let x = g.other(w);
                    if x == NONE || used[x] {
                        continue;
                    }
                    let mut child = g.clone();
                    child.rotate(m0, w).expect("valid rotation");
                    marks.extend([u, w, x]);
                    next.push(child);
                }
            }
            *f = next;
        }
        for v in marks {
            used[v] = true;
        }
    }
    out
}
