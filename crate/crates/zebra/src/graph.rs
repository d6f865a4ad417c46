use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub const NONE: usize = usize::MAX;

#[inline]
pub fn edge(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    edges: HashSet<Edge>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edges: HashSet::new(),
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Adds `{u,v}`; returns false for loops and duplicates.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        if u == v || !self.edges.insert(edge(u, v)) {
            return false;
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        true
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&edge(u, v))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut es: Vec<Edge> = self.edges.iter().copied().collect();
        es.sort_unstable();
        es
    }

    /// Vertices outside `set` adjacent to some member of `set`.
    pub fn neighborhood(&self, set: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for &v in set {
            for &w in &self.adj[v] {
                if !inside[w] && !seen[w] {
                    seen[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Edge-colored simple graph; colors are `1..=r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    r: usize,
    adj: Vec<Vec<(usize, usize)>>,
    edges: Vec<(Edge, usize)>,
    index: std::collections::HashMap<Edge, usize>,
}

impl ColoredGraph {
    pub fn new(n: usize, r: usize) -> Self {
        ColoredGraph {
            n,
            r,
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            index: Default::default(),
        }
    }

    pub fn from_edges(n: usize, r: usize, edges: impl IntoIterator<Item = (Edge, usize)>) -> Self {
        let mut g = ColoredGraph::new(n, r);
        for ((u, v), c) in edges {
            g.add_edge(u, v, c);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Adds `{u,v}` with color `c`. An edge already present keeps its color.
    pub fn add_edge(&mut self, u: usize, v: usize, c: usize) -> bool {
        assert!(u < self.n && v < self.n, "vertex out of range");
        assert!(c >= 1 && c <= self.r, "color out of range");
        let e = edge(u, v);
        if u == v || self.index.contains_key(&e) {
            return false;
        }
        self.index.insert(e, self.edges.len());
        self.edges.push((e, c));
        self.adj[u].push((v, c));
        self.adj[v].push((u, c));
        true
    }

    pub fn color(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&edge(u, v)).map(|&i| self.edges[i].1)
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// Edges with colors in insertion order.
    pub fn edges(&self) -> &[(Edge, usize)] {
        &self.edges
    }

    pub fn color_degree(&self, v: usize, c: usize) -> usize {
        self.adj[v].iter().filter(|&&(_, k)| k == c).count()
    }

    /// Subgraph formed by the edges of one color.
    pub fn color_class(&self, c: usize) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().filter(|(_, k)| *k == c).map(|(e, _)| *e))
    }

    pub fn uncolored(&self) -> Graph {
        Graph::from_edges(self.n, self.edges.iter().map(|(e, _)| *e))
    }

    /// Same graph with every color `c` replaced by `map(c)`.
    pub fn recolored(&self, map: impl Fn(usize) -> usize) -> ColoredGraph {
        ColoredGraph::from_edges(self.n, self.r, self.edges.iter().map(|&(e, c)| (e, map(c))))
    }
}

/// Partial matching stored as a mate array.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    mate: Vec<usize>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { mate: vec![NONE; n] }
    }

    pub fn from_mate(mate: Vec<usize>) -> Result<Self> {
        for (v, &w) in mate.iter().enumerate() {
            if w == NONE {
                continue;
            }
            if w >= mate.len() || w == v || mate[w] != v {
                return invalid(format!("mate array is not an involution at {v}"));
            }
        }
        Ok(Matching { mate })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut m = Matching::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v || m.mate[u] != NONE || m.mate[v] != NONE {
                return invalid(format!("edge ({u},{v}) is not vertex-disjoint from the rest"));
            }
            m.mate[u] = v;
            m.mate[v] = u;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        match self.mate[v] {
            NONE => None,
            w => Some(w),
        }
    }

    pub fn mates(&self) -> &[usize] {
        &self.mate
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&w| w != NONE).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(|&w| w != NONE)
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.mate[u] == v
    }

    pub fn edges(&self) -> Vec<Edge> {
        (0..self.mate.len())
            .filter(|&v| self.mate[v] != NONE && v < self.mate[v])
            .map(|v| (v, self.mate[v]))
            .collect()
    }

    pub fn exposed(&self) -> Vec<usize> {
        (0..self.mate.len()).filter(|&v| self.mate[v] == NONE).collect()
    }

    pub fn is_disjoint_from(&self, other: &Matching) -> bool {
        self.edges().iter().all(|&(u, v)| !other.contains(u, v))
    }

    /// True if every matched pair is an edge of `g`.
    pub fn is_matching_of(&self, g: &Graph) -> bool {
        self.edges().iter().all(|&(u, v)| g.has_edge(u, v))
    }
}
