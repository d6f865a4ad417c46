//! Two-colored machinery: alternating reachability and connectivity, the
//! alternating Hamilton pipeline, and exact hitting-time pairs on small traces.

use serde::{Deserialize, Serialize};

use crate::certify::{certify, Checks, CycleCertificate, Host};
use crate::error::{invalid, Result};
use crate::graph::{edge, ColoredGraph, Graph, Matching, NONE};
use crate::matching::{forest_search_blocked, maximum_matching, Label, Outcome};
use crate::oracle::{exact_hamilton, Constraint, ExactOutcome, ExactQuery, QueryGraph};
use crate::process::{hitting_time, HittingCriterion, ProcessModel, ProcessTrace};
use crate::schedule::ParamSchedule;
use crate::surgery::{hamilton_through_matching, FailureStage, PipelineFailure, PipelineOptions, PipelineStats};

pub const BLACK: usize = 1;
pub const WHITE: usize = 2;

fn flip(c: usize) -> usize {
    if c == BLACK {
        WHITE
    } else {
        BLACK
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorState {
    pub vertex: usize,
    pub last_color: usize,
}

/// States `(y, c)` such that some alternating path from the source ends at `y` with color `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachSet {
    source: usize,
    reached: Vec<[bool; 2]>,
}

impl ReachSet {
    pub fn source(&self) -> usize {
        self.source
    }

    pub fn contains(&self, v: usize, last_color: usize) -> bool {
        (last_color == BLACK || last_color == WHITE) && self.reached[v][last_color - 1]
    }

    pub fn reaches(&self, v: usize) -> bool {
        self.reached[v][0] || self.reached[v][1]
    }

    pub fn states(&self) -> Vec<ColorState> {
        let mut out = Vec::new();
        for (v, r) in self.reached.iter().enumerate() {
            for c in [BLACK, WHITE] {
                if r[c - 1] {
                    out.push(ColorState { vertex: v, last_color: c });
                }
            }
        }
        out
    }
}

fn require_two_colors(g: &ColoredGraph) -> Result<()> {
    if g.r() != 2 {
        return invalid(format!("alternating paths need r = 2, got r = {}", g.r()));
    }
    Ok(())
}

/// Each vertex `v` split into ports `2v` (black) and `2v + 1` (white) joined by
/// a matched edge; a colored edge joins the two ports of its color. Simple
/// alternating paths of `g` are exactly alternating paths of this graph that
/// start at a free port of the source.
struct PortGraph {
    adj: Vec<Vec<usize>>,
}

impl PortGraph {
    fn new(g: &ColoredGraph) -> Self {
        let n = g.n();
        let mut adj = vec![Vec::new(); 2 * n];
        for v in 0..n {
            adj[2 * v].push(2 * v + 1);
            adj[2 * v + 1].push(2 * v);
        }
        for &((u, v), c) in g.edges() {
            let off = c - 1;
            adj[2 * u + off].push(2 * v + off);
            adj[2 * v + off].push(2 * u + off);
        }
        PortGraph { adj }
    }

    fn reach(&self, n: usize, x: usize, first_color: Option<usize>) -> ReachSet {
        let mut reached = vec![[false; 2]; n];
        let firsts = match first_color {
            Some(c) => vec![c],
            None => vec![BLACK, WHITE],
        };
        for c in firsts {
            let root = 2 * x + (c - 1);
            let other = 2 * x + (flip(c) - 1);
            let mut mate: Vec<usize> = (0..2 * n).map(|p| p ^ 1).collect();
            mate[root] = NONE;
            mate[other] = NONE;
            let mut blocked = vec![false; 2 * n];
            blocked[other] = true;
            // The source is the only free port, so the search never augments.
            let labels = match forest_search_blocked(&self.adj, &mut mate, &[root], Some(&blocked)) {
                Outcome::Labels(l) => l,
                Outcome::Augmented => unreachable!("single free port"),
            };
            for y in (0..n).filter(|&y| y != x) {
                for last in [BLACK, WHITE] {
                    // Entering y on color `last` then crossing to its other port.
                    if labels[2 * y + (flip(last) - 1)] == Label::Even {
                        reached[y][last - 1] = true;
                    }
                }
            }
        }
        ReachSet { source: x, reached }
    }
}

/// Exact alternating reachability from `x` by simple paths, optionally fixing
/// the color of the first edge.
pub fn zebraic_reachable(g: &ColoredGraph, x: usize, first_color: Option<usize>) -> Result<ReachSet> {
    require_two_colors(g)?;
    if x >= g.n() {
        return invalid(format!("vertex {x} out of range"));
    }
    if matches!(first_color, Some(c) if c != BLACK && c != WHITE) {
        return invalid("first color must be 1 (black) or 2 (white)");
    }
    Ok(PortGraph::new(g).reach(g.n(), x, first_color))
}

/// Breadth-first layers over `(vertex, last color)` states: the alternating
/// walks from `x`. Every state reachable by a path appears here, not conversely.
pub fn zebraic_frontiers(g: &ColoredGraph, x: usize, first_color: Option<usize>) -> Result<Vec<Vec<ColorState>>> {
    require_two_colors(g)?;
    let n = g.n();
    let mut seen = vec![[false; 2]; n];
    let mut layers = Vec::new();
    let mut layer: Vec<ColorState> = Vec::new();
    for &(y, c) in g.neighbors(x) {
        if first_color.map_or(true, |f| f == c) && !seen[y][c - 1] {
            seen[y][c - 1] = true;
            layer.push(ColorState { vertex: y, last_color: c });
        }
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for st in &layer {
            for &(y, c) in g.neighbors(st.vertex) {
                if c != st.last_color && !seen[y][c - 1] {
                    seen[y][c - 1] = true;
                    next.push(ColorState { vertex: y, last_color: c });
                }
            }
        }
        layers.push(layer);
        layer = next;
    }
    Ok(layers)
}

/// A vertex not reached from `x` by any alternating path.
pub fn zebraic_unreachable_from(g: &ColoredGraph, x: usize) -> Result<Option<usize>> {
    require_two_colors(g)?;
    let n = g.n();
    let mut walk = vec![false; n];
    for layer in zebraic_frontiers(g, x, None)? {
        for st in layer {
            walk[st.vertex] = true;
        }
    }
    if let Some(y) = (0..n).find(|&y| y != x && !walk[y]) {
        return Ok(Some(y));
    }
    let reach = PortGraph::new(g).reach(n, x, None);
    Ok((0..n).find(|&y| y != x && !reach.reaches(y)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connectivity {
    pub connected: bool,
    /// `(x, y)` with no alternating path from `x` to `y`.
    pub witness: Option<(usize, usize)>,
}

/// Whether every ordered pair is joined by an alternating path.
pub fn zebraic_connected(g: &ColoredGraph) -> Result<Connectivity> {
    require_two_colors(g)?;
    let ports = PortGraph::new(g);
    let n = g.n();
    for x in 0..n {
        let reach = ports.reach(n, x, None);
        if let Some(y) = (0..n).find(|&y| y != x && !reach.reaches(y)) {
            return Ok(Connectivity {
                connected: false,
                witness: Some((x, y)),
            });
        }
    }
    Ok(Connectivity {
        connected: true,
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZebraicClassification {
    pub black_degree: Vec<usize>,
    pub white_degree: Vec<usize>,
    /// Both color degrees at least `L0`.
    pub large: Vec<bool>,
    pub small: Vec<usize>,
}

pub fn classify_zebraic(g: &ColoredGraph, l0: usize) -> Result<ZebraicClassification> {
    require_two_colors(g)?;
    let n = g.n();
    let black_degree: Vec<usize> = (0..n).map(|v| g.color_degree(v, BLACK)).collect();
    let white_degree: Vec<usize> = (0..n).map(|v| g.color_degree(v, WHITE)).collect();
    let large: Vec<bool> = (0..n).map(|v| black_degree[v] >= l0 && white_degree[v] >= l0).collect();
    let small = (0..n).filter(|&v| !large[v]).collect();
    Ok(ZebraicClassification {
        black_degree,
        white_degree,
        large,
        small,
    })
}

#[derive(Clone, Debug)]
pub struct ZebraicSuccess {
    pub cycle: Vec<usize>,
    pub m0: Matching,
    pub certificate: CycleCertificate,
    pub stats: PipelineStats,
}

/// White edges of `g` in insertion order, as an uncolored stream.
pub fn white_stream(g: &ColoredGraph) -> ProcessTrace {
    ProcessTrace {
        n: g.n(),
        model: ProcessModel::UniformWithoutReplacement,
        edges: g.edges().iter().filter(|&&(_, c)| c == WHITE).map(|&(e, _)| e).collect(),
        colors: None,
        r: 0,
        recolor_repeats: false,
        repeated: Vec::new(),
        seed: 0,
    }
}

/// Alternating Hamilton cycle: a black perfect matching plays `M0` and the
/// white edges, in insertion order, feed the three phases. `s` indexes the
/// white stream.
pub fn zebraic_hamilton(
    g: &ColoredGraph,
    s: &ParamSchedule,
    seed: u64,
    opts: &PipelineOptions,
) -> std::result::Result<ZebraicSuccess, PipelineFailure> {
    if g.r() != 2 || g.n() % 2 == 1 {
        return Err(PipelineFailure::new(FailureStage::Schedule, "needs r = 2 and even n"));
    }
    let m0 = maximum_matching(&g.color_class(BLACK));
    if !m0.is_perfect() {
        return Err(PipelineFailure::new(
            FailureStage::BlackMatching,
            format!("black subgraph has maximum matching of size {} < {}", m0.size(), g.n() / 2),
        ));
    }
    let white = white_stream(g);
    let ok = hamilton_through_matching(&white, &m0, s, seed, opts)?;
    let certificate = certify(
        &ok.cycle,
        Host::Colored(g),
        Checks {
            m0: Some(&m0),
            zebraic2: true,
            r_pattern: None,
        },
    );
    if !certificate.passed() {
        return Err(PipelineFailure::new(FailureStage::Certificate, "cycle is not alternating"));
    }
    Ok(ZebraicSuccess {
        cycle: ok.cycle,
        m0,
        certificate,
        stats: ok.stats,
    })
}

#[derive(Clone, Copy, Debug)]
pub enum TauMode<'a> {
    /// `(τ₁, τ_H)`: min degree one, then a Hamilton cycle through the matching.
    ThroughMatching(&'a Matching),
    /// `(τ₁,₁, τ_ZH)`: every vertex sees both colors, then an alternating Hamilton cycle.
    Zebraic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauPair {
    pub m_deg: Option<usize>,
    pub m_struct: Option<usize>,
    /// The oracle ran out of budget at step `checked_to + 1`.
    pub censored: bool,
    /// Last step known to have no cycle.
    pub checked_to: usize,
    pub oracle_calls: usize,
    /// Whether `G_{m_deg - 1}` was checked and found to have a cycle (a necessity violation).
    pub below_has_cycle: Option<bool>,
}

/// Exact hitting-time pair. Every step from `m_deg` on is checked with the
/// newest edge forced: the property is monotone and `G_{m-1}` had no cycle, so
/// any new cycle uses it. With `verify_below`, also asks the oracle about
/// `G_{m_deg - 1}` without forcing anything.
pub fn exact_tau_pair(trace: &ProcessTrace, mode: TauMode<'_>, budget: u64, verify_below: bool) -> Result<TauPair> {
    let n = trace.n;
    if n % 2 == 1 {
        return invalid("exact hitting times need even n");
    }
    if matches!(mode, TauMode::Zebraic) && (trace.r != 2 || trace.colors.is_none()) {
        return invalid("zebraic hitting times need a 2-colored trace");
    }
    if trace.recolor_repeats && !trace.repeated.is_empty() {
        return invalid("recolored repeats make the colored process non-monotone");
    }
    let criterion = match mode {
        TauMode::ThroughMatching(_) => HittingCriterion::MinDegreeOne,
        TauMode::Zebraic => HittingCriterion::AllColorsCover,
    };
    let m_deg = hitting_time(trace, criterion)?;
    let mut out = TauPair {
        m_deg,
        m_struct: None,
        censored: false,
        checked_to: 0,
        oracle_calls: 0,
        below_has_cycle: None,
    };
    let Some(m_deg) = m_deg else {
        return Ok(out);
    };
    let mut plain = Graph::new(n);
    let mut colored = ColoredGraph::new(n, trace.r.max(2));
    let add = |i: usize, plain: &mut Graph, colored: &mut ColoredGraph| -> bool {
        let (u, v) = trace.edges[i];
        match mode {
            TauMode::ThroughMatching(_) => plain.add_edge(u, v),
            TauMode::Zebraic => colored.add_edge(u, v, trace.colors.as_ref().expect("colored")[i]),
        }
    };
    let query = |plain: &Graph, colored: &ColoredGraph, forced| -> Result<ExactOutcome> {
        let (graph, constraint) = match mode {
            TauMode::ThroughMatching(m0) => (QueryGraph::Plain(plain.clone()), Constraint::WithMatching(m0.clone())),
            TauMode::Zebraic => (QueryGraph::Colored(colored.clone()), Constraint::Zebraic2),
        };
        exact_hamilton(&ExactQuery {
            graph,
            constraint,
            budget,
            forced_edge: forced,
        })
    };
    for i in 0..m_deg - 1 {
        add(i, &mut plain, &mut colored);
    }
    if verify_below {
        out.oracle_calls += 1;
        match query(&plain, &colored, None)? {
            ExactOutcome::Cycle(_) => out.below_has_cycle = Some(true),
            ExactOutcome::NoCycle => out.below_has_cycle = Some(false),
            ExactOutcome::BudgetExceeded { .. } => {}
        }
    }
    out.checked_to = m_deg - 1;
    for i in m_deg - 1..trace.len() {
        let fresh = add(i, &mut plain, &mut colored);
        let (u, v) = trace.edges[i];
        let useless = match mode {
            TauMode::ThroughMatching(m0) => m0.contains(u, v),
            TauMode::Zebraic => false,
        };
        if !fresh || useless {
            out.checked_to = i + 1;
            continue;
        }
        out.oracle_calls += 1;
        match query(&plain, &colored, Some(edge(u, v)))? {
            ExactOutcome::Cycle(_) => {
                out.m_struct = Some(i + 1);
                return Ok(out);
            }
            ExactOutcome::NoCycle => out.checked_to = i + 1,
            ExactOutcome::BudgetExceeded { .. } => {
                out.censored = true;
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Alternating path search used to cross-check reachability on tiny graphs.
pub fn brute_force_reachable(g: &ColoredGraph, x: usize, first_color: Option<usize>) -> ReachSet {
    let n = g.n();
    let mut reached = vec![[false; 2]; n];
    let mut on_path = vec![false; n];
    on_path[x] = true;
    fn dfs(g: &ColoredGraph, v: usize, last: usize, on_path: &mut [bool], reached: &mut [[bool; 2]]) {
        for &(y, c) in g.neighbors(v) {
            if c == last || on_path[y] {
                continue;
            }
            reached[y][c - 1] = true;
            on_path[y] = true;
            dfs(g, y, c, on_path, reached);
            on_path[y] = false;
        }
    }
    for &(y, c) in g.neighbors(x) {
        if first_color.map_or(true, |f| f == c) {
            reached[y][c - 1] = true;
            on_path[y] = true;
            dfs(g, y, c, &mut on_path, &mut reached);
            on_path[y] = false;
        }
    }
    ReachSet { source: x, reached }
}
