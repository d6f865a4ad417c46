use std::collections::HashSet;

use super::blossom::{Forest, Label};
use crate::graph::{edge, Edge, Graph, Matching, NONE};

/// Maximum matching of a growing graph.
///
/// Keeps the alternating forest of the last search. An added edge only matters
/// when an endpoint is `Even`; the search then resumes from that endpoint, and
/// only an augmentation forces a fresh forest.
#[derive(Clone, Debug)]
pub struct IncrementalMatching {
    adj: Vec<Vec<usize>>,
    edges: HashSet<Edge>,
    mate: Vec<usize>,
    forest: Forest,
    searches: usize,
}

impl IncrementalMatching {
    pub fn new(g: &Graph, start: Option<&Matching>) -> Self {
        let adj: Vec<Vec<usize>> = (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect();
        let mate = start.map_or_else(|| vec![NONE; g.n()], |m| m.mates().to_vec());
        let mut inc = IncrementalMatching {
            adj,
            edges: g.edges().into_iter().collect(),
            mate,
            forest: Forest::new(g.n()),
            searches: 0,
        };
        inc.refresh();
        inc
    }

    /// Replants the forest at the exposed vertices and augments until none is left.
    fn refresh(&mut self) {
        loop {
            let roots: Vec<usize> = (0..self.mate.len()).filter(|&v| self.mate[v] == NONE).collect();
            self.forest.plant(&self.mate, &roots);
            self.searches += 1;
            if !self.forest.grow(&self.adj, &mut self.mate, None) {
                return;
            }
        }
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|&&w| w != NONE).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(|&w| w != NONE)
    }

    pub fn matching(&self) -> Matching {
        Matching::from_mate(self.mate.clone()).expect("involution")
    }

    /// Gallai-Edmonds labels of the current graph.
    pub fn labels(&self) -> Vec<Label> {
        self.forest.labels()
    }

    /// Number of fresh forests planted so far.
    pub fn searches(&self) -> usize {
        self.searches
    }

    /// Adds `{a,b}`; returns true if the maximum matching grew.
    pub fn add_edge(&mut self, a: usize, b: usize) -> bool {
        if a == b || !self.edges.insert(edge(a, b)) {
            return false;
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        if self.forest.label(a) != Label::Even && self.forest.label(b) != Label::Even {
            return false;
        }
        self.forest.rescan(a);
        self.forest.rescan(b);
        if self.forest.grow(&self.adj, &mut self.mate, None) {
            self.refresh();
            true
        } else {
            false
        }
    }
}
