//! Exact exponential-time solvers for small instances.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{ColoredGraph, Edge, Graph, Matching, NONE};
use crate::matching::maximum_matching;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest `n` accepted by [`enumerate_maximum_matchings`].
pub const ENUMERATION_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub enum QueryGraph {
    Plain(Graph),
    Colored(ColoredGraph),
}

impl QueryGraph {
    pub fn n(&self) -> usize {
        match self {
            QueryGraph::Plain(g) => g.n(),
            QueryGraph::Colored(g) => g.n(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Constraint {
    None,
    /// Cycle must contain every edge of this perfect matching; its edges count as present.
    WithMatching(Matching),
    Zebraic2,
    RPattern(usize),
}

#[derive(Clone, Debug)]
pub struct ExactQuery {
    pub graph: QueryGraph,
    pub constraint: Constraint,
    /// Cap on search-node expansions.
    pub budget: u64,
    /// Restrict to cycles through this edge.
    pub forced_edge: Option<Edge>,
}

impl ExactQuery {
    pub fn new(graph: QueryGraph, constraint: Constraint) -> Self {
        ExactQuery {
            graph,
            constraint,
            budget: DEFAULT_BUDGET,
            forced_edge: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactOutcome {
    Cycle(Vec<usize>),
    NoCycle,
    BudgetExceeded { expanded: u64 },
}

impl ExactOutcome {
    pub fn cycle(&self) -> Option<&[usize]> {
        match self {
            ExactOutcome::Cycle(c) => Some(c),
            _ => None,
        }
    }
}

/// Edge classes: plain graphs use one class; the matching constraint uses
/// 0 = matching edge, 1 = other; colored constraints use `color - 1`.
struct Instance {
    n: usize,
    classes: usize,
    period: usize,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Instance {
    fn build(q: &ExactQuery) -> Result<Self> {
        let n = q.graph.n();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let (classes, period) = match (&q.constraint, &q.graph) {
            (Constraint::None, QueryGraph::Plain(g)) => {
                for (u, v) in g.edges() {
                    adj[u].push((v, 0));
                    adj[v].push((u, 0));
                }
                (1, 1)
            }
            (Constraint::None, QueryGraph::Colored(g)) => {
                for &((u, v), _) in g.edges() {
                    adj[u].push((v, 0));
                    adj[v].push((u, 0));
                }
                (1, 1)
            }
            (Constraint::WithMatching(m0), graph) => {
                if m0.n() != n || !m0.is_perfect() {
                    return invalid("matching constraint needs a perfect matching on the same vertices");
                }
                let edges: Vec<Edge> = match graph {
                    QueryGraph::Plain(g) => g.edges(),
                    QueryGraph::Colored(g) => g.edges().iter().map(|&(e, _)| e).collect(),
                };
                for (u, v) in edges {
                    if !m0.contains(u, v) {
                        adj[u].push((v, 1));
                        adj[v].push((u, 1));
                    }
                }
                for (u, v) in m0.edges() {
                    adj[u].push((v, 0));
                    adj[v].push((u, 0));
                }
                (2, 2)
            }
            (Constraint::Zebraic2, QueryGraph::Colored(g)) if g.r() == 2 => {
                for &((u, v), c) in g.edges() {
                    adj[u].push((v, c - 1));
                    adj[v].push((u, c - 1));
                }
                (2, 2)
            }
            (Constraint::RPattern(r), QueryGraph::Colored(g)) if g.r() == *r && *r >= 2 => {
                for &((u, v), c) in g.edges() {
                    adj[u].push((v, c - 1));
                    adj[v].push((u, c - 1));
                }
                (*r, *r)
            }
            _ => return invalid("constraint does not match the graph type"),
        };
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Instance {
            n,
            classes,
            period,
            adj,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Need {
    Two,
    EachClass,
    Consecutive,
}

struct Dfs<'a> {
    inst: &'a Instance,
    need: Need,
    offset: usize,
    visited: Vec<bool>,
    avail: Vec<usize>,
    path: Vec<usize>,
    expanded: u64,
    budget: u64,
    exceeded: bool,
}

impl Dfs<'_> {
    fn class_of(&self, i: usize) -> usize {
        (i + self.offset) % self.inst.period
    }

    fn count(&self, v: usize, k: usize) -> usize {
        self.avail[v * self.inst.classes + k]
    }

    fn satisfiable(&self, v: usize) -> bool {
        let k = self.inst.classes;
        match self.need {
            Need::Two => (0..k).map(|c| self.count(v, c)).sum::<usize>() >= 2,
            Need::EachClass => (0..k).all(|c| self.count(v, c) >= 1),
            Need::Consecutive => (0..k).any(|c| self.count(v, c) >= 1 && self.count(v, (c + 1) % k) >= 1),
        }
    }

    /// Removes `v` from the pool of available endpoints; false if a neighbour becomes stuck.
    fn retire(&mut self, v: usize) -> bool {
        let k = self.inst.classes;
        let mut ok = true;
        for &(w, c) in &self.inst.adj[v] {
            self.avail[w * k + c] -= 1;
            if ok && !self.visited[w] && !self.satisfiable(w) {
                ok = false;
            }
        }
        ok
    }

    fn restore(&mut self, v: usize) {
        let k = self.inst.classes;
        for &(w, c) in &self.inst.adj[v] {
            self.avail[w * k + c] += 1;
        }
    }

    fn extend(&mut self) -> bool {
        self.expanded += 1;
        if self.expanded > self.budget {
            self.exceeded = true;
            return false;
        }
        let n = self.inst.n;
        let len = self.path.len();
        let end = self.path[len - 1];
        let start = self.path[0];
        if len == n {
            let want = self.class_of(n - 1);
            return self.inst.adj[end].iter().any(|&(w, c)| w == start && c == want);
        }
        let want = self.class_of(len - 1);
        let mut cands: Vec<(usize, usize)> = self.inst.adj[end]
            .iter()
            .filter(|&&(w, c)| c == want && !self.visited[w])
            .map(|&(w, _)| {
                let deg: usize = (0..self.inst.classes).map(|c| self.count(w, c)).sum();
                (deg, w)
            })
            .collect();
        cands.sort_unstable();
        for (_, w) in cands {
            self.visited[w] = true;
            let ok = if end != start { self.retire(end) } else { true };
            if ok {
                self.path.push(w);
                if self.extend() {
                    return true;
                }
                self.path.pop();
            }
            if end != start {
                self.restore(end);
            }
            self.visited[w] = false;
            if self.exceeded {
                return false;
            }
        }
        false
    }
}

/// Decides whether a Hamilton cycle satisfying the constraint exists.
///
/// Depth-first search over vertex sequences. Each vertex needs enough unused
/// incident edges of the right classes among unvisited vertices and the path
/// ends; paths that leave some vertex short are cut. Matching edges are forced
/// in alternate positions and color patterns are tried from every offset.
pub fn exact_hamilton(q: &ExactQuery) -> Result<ExactOutcome> {
    if q.budget == 0 {
        return invalid("budget must be positive");
    }
    let inst = Instance::build(q)?;
    let n = inst.n;
    if n < 3 || n % inst.period != 0 {
        return Ok(ExactOutcome::NoCycle);
    }
    let need = match q.constraint {
        Constraint::None => Need::Two,
        Constraint::WithMatching(_) | Constraint::Zebraic2 => Need::EachClass,
        Constraint::RPattern(_) => Need::Consecutive,
    };
    if !static_checks(q) {
        return Ok(ExactOutcome::NoCycle);
    }
    let mut avail = vec![0usize; n * inst.classes];
    for v in 0..n {
        for &(_, c) in &inst.adj[v] {
            avail[v * inst.classes + c] += 1;
        }
    }
    let mut dfs = Dfs {
        inst: &inst,
        need,
        offset: 0,
        visited: vec![false; n],
        avail,
        path: Vec::with_capacity(n),
        expanded: 0,
        budget: q.budget,
        exceeded: false,
    };
    if (0..n).any(|v| !dfs.satisfiable(v)) {
        return Ok(ExactOutcome::NoCycle);
    }
    let (start, first, first_class) = match q.forced_edge {
        Some((u, v)) => {
            let Some(&(_, c)) = inst.adj[u].iter().find(|&&(w, _)| w == v) else {
                return Ok(ExactOutcome::NoCycle);
            };
            (u, Some(v), Some(c))
        }
        None => {
            let s = (0..n)
                .min_by_key(|&v| inst.adj[v].len())
                .expect("nonempty");
            (s, None, None)
        }
    };
    let offsets: Vec<usize> = match (&q.constraint, first_class) {
        (Constraint::None, _) => vec![0],
        (Constraint::WithMatching(_), None) => vec![0],
        (_, Some(c)) => (0..inst.period).filter(|&o| o % inst.period == c).collect(),
        (_, None) => (0..inst.period).collect(),
    };
    for off in offsets {
        dfs.offset = off;
        dfs.visited.iter_mut().for_each(|x| *x = false);
        dfs.path.clear();
        dfs.path.push(start);
        dfs.visited[start] = true;
        let found = match first {
            Some(v) => {
                dfs.visited[v] = true;
                dfs.path.push(v);
                dfs.extend()
            }
            None => dfs.extend(),
        };
        if found {
            return Ok(ExactOutcome::Cycle(dfs.path.clone()));
        }
        if dfs.exceeded {
            return Ok(ExactOutcome::BudgetExceeded {
                expanded: dfs.expanded,
            });
        }
    }
    Ok(ExactOutcome::NoCycle)
}

/// Perfect-matching conditions implied by each constraint.
fn static_checks(q: &ExactQuery) -> bool {
    match (&q.constraint, &q.graph) {
        (Constraint::WithMatching(m0), g) => {
            let others: Vec<Edge> = match g {
                QueryGraph::Plain(g) => g.edges(),
                QueryGraph::Colored(g) => g.edges().iter().map(|&(e, _)| e).collect(),
            };
            let h = Graph::from_edges(m0.n(), others.into_iter().filter(|&(u, v)| !m0.contains(u, v)));
            maximum_matching(&h).is_perfect()
        }
        (Constraint::Zebraic2, QueryGraph::Colored(g)) => {
            maximum_matching(&g.color_class(1)).is_perfect() && maximum_matching(&g.color_class(2)).is_perfect()
        }
        _ => true,
    }
}

/// All maximum matchings, for graphs with at most [`ENUMERATION_LIMIT`] vertices.
pub fn enumerate_maximum_matchings(g: &Graph) -> Result<Vec<Matching>> {
    let n = g.n();
    if n > ENUMERATION_LIMIT {
        return invalid(format!("enumeration is capped at n = {ENUMERATION_LIMIT}, got {n}"));
    }
    let best = maximum_matching(g).size();
    let mut out = Vec::new();
    let mut mate = vec![NONE; n];
    enumerate(g, 0, 0, best, &mut mate, &mut out);
    Ok(out)
}

fn enumerate(g: &Graph, v: usize, size: usize, best: usize, mate: &mut Vec<usize>, out: &mut Vec<Matching>) {
    let n = g.n();
    if size + (n - v) / 2 < best {
        return;
    }
    if v == n {
        if size == best {
            out.push(Matching::from_mate(mate.clone()).expect("involution"));
        }
        return;
    }
    if mate[v] != NONE {
        enumerate(g, v + 1, size, best, mate, out);
        return;
    }
    let mut nbrs: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w > v && mate[w] == NONE).collect();
    nbrs.sort_unstable();
    for w in nbrs {
        mate[v] = w;
        mate[w] = v;
        enumerate(g, v + 1, size + 1, best, mate, out);
        mate[v] = NONE;
        mate[w] = NONE;
    }
    enumerate(g, v + 1, size, best, mate, out);
}
