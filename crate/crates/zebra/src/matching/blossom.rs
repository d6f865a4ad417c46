use std::collections::VecDeque;

use crate::graph::{Graph, Matching, NONE};

/// Label of a vertex in the alternating forest grown from a set of roots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Unreached,
    Even,
    Odd,
}

pub(crate) enum Outcome {
    Augmented,
    Labels(Vec<Label>),
}

/// Grows an Edmonds alternating forest from `roots` (all exposed), contracting
/// blossoms. Augments `mate` along the first augmenting path found; otherwise
/// returns the forest labels.
pub(crate) fn forest_search(adj: &[Vec<usize>], mate: &mut [usize], roots: &[usize]) -> Outcome {
    forest_search_blocked(adj, mate, roots, None)
}

/// As [`forest_search`], ignoring vertices flagged in `blocked`.
pub(crate) fn forest_search_blocked(
    adj: &[Vec<usize>],
    mate: &mut [usize],
    roots: &[usize],
    blocked: Option<&[bool]>,
) -> Outcome {
    let mut f = Forest::new(adj.len());
    f.plant(mate, roots);
    if f.grow(adj, mate, blocked) {
        Outcome::Augmented
    } else {
        Outcome::Labels(f.labels())
    }
}

/// Alternating forest that survives between calls, so a search can resume
/// after edges are added as long as no augmentation happened.
#[derive(Clone, Debug)]
pub(crate) struct Forest {
    parent: Vec<usize>,
    /// Union-find over blossom bases; a root is the base of its blossom.
    blossom: Vec<usize>,
    tree: Vec<usize>,
    even: Vec<bool>,
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<usize>,
}

impl Forest {
    pub(crate) fn new(n: usize) -> Self {
        Forest {
            parent: vec![NONE; n],
            blossom: (0..n).collect(),
            tree: vec![NONE; n],
            even: vec![false; n],
            stamp: vec![0; n],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    /// Clears the forest and makes each root a one-vertex tree.
    pub(crate) fn plant(&mut self, mate: &[usize], roots: &[usize]) {
        let n = self.parent.len();
        self.parent.fill(NONE);
        self.tree.fill(NONE);
        self.even.fill(false);
        for v in 0..n {
            self.blossom[v] = v;
        }
        self.queue.clear();
        for &r in roots {
            debug_assert_eq!(mate[r], NONE);
            self.even[r] = true;
            self.tree[r] = r;
            self.queue.push_back(r);
        }
    }

    /// Schedules an even vertex for rescanning, e.g. after it gained an edge.
    pub(crate) fn rescan(&mut self, v: usize) {
        if self.even[v] {
            self.queue.push_back(v);
        }
    }

    pub(crate) fn label(&self, v: usize) -> Label {
        if self.even[v] {
            Label::Even
        } else if self.parent[v] != NONE {
            Label::Odd
        } else {
            Label::Unreached
        }
    }

    pub(crate) fn labels(&self) -> Vec<Label> {
        (0..self.parent.len()).map(|v| self.label(v)).collect()
    }

    /// Runs the search until the queue empties; returns true after augmenting `mate`.
    pub(crate) fn grow(&mut self, adj: &[Vec<usize>], mate: &mut [usize], blocked: Option<&[bool]>) -> bool {
        let is_blocked = |v: usize| blocked.map_or(false, |b| b[v]);
        while let Some(v) = self.queue.pop_front() {
            for &u in &adj[v] {
                if is_blocked(u) || mate[v] == u || self.base(v) == self.base(u) {
                    continue;
                }
                if self.even[u] {
                    if self.tree[u] != self.tree[v] {
                        self.flip_to_root(mate, v);
                        self.flip_to_root(mate, u);
                        mate[v] = u;
                        mate[u] = v;
                        self.queue.clear();
                        return true;
                    }
                    let top = self.lca(mate, v, u);
                    let mut merged = Vec::new();
                    self.mark_path(mate, v, top, u, &mut merged);
                    self.mark_path(mate, u, top, v, &mut merged);
                    for b in merged {
                        self.blossom[b] = top;
                    }
                } else if self.parent[u] == NONE {
                    self.parent[u] = v;
                    self.tree[u] = self.tree[v];
                    let w = mate[u];
                    if w == NONE {
                        self.augment_from(mate, u);
                        self.queue.clear();
                        return true;
                    }
                    self.even[w] = true;
                    self.tree[w] = self.tree[v];
                    self.queue.push_back(w);
                }
            }
        }
        false
    }

    fn base(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.blossom[root] != root {
            root = self.blossom[root];
        }
        let mut cur = v;
        while self.blossom[cur] != root {
            let next = self.blossom[cur];
            self.blossom[cur] = root;
            cur = next;
        }
        root
    }

    fn lca(&mut self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        self.generation += 1;
        let g = self.generation;
        loop {
            a = self.base(a);
            self.stamp[a] = g;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base(b);
            if self.stamp[b] == g {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    /// Walks from `v` up to the blossom base `top`, collecting the bases to
    /// merge and turning the odd vertices on the way even. Merging waits until
    /// both sides are walked, since the walk stops at the first vertex whose
    /// base is `top`.
    fn mark_path(&mut self, mate: &[usize], mut v: usize, top: usize, mut child: usize, merged: &mut Vec<usize>) {
        while self.base(v) != top {
            let m = mate[v];
            let bv = self.base(v);
            let bm = self.base(m);
            merged.push(bv);
            merged.push(bm);
            self.parent[v] = child;
            if !self.even[m] {
                self.even[m] = true;
                self.queue.push_back(m);
            }
            child = m;
            v = self.parent[m];
        }
    }

    /// Rematches the tree path from an exposed, newly reached vertex back to its root.
    fn augment_from(&self, mate: &mut [usize], mut u: usize) {
        while u != NONE {
            let pv = self.parent[u];
            let next = mate[pv];
            mate[u] = pv;
            mate[pv] = u;
            u = next;
        }
    }

    /// Shifts the matching along the tree path from even `v` to its root, leaving `v` free.
    fn flip_to_root(&self, mate: &mut [usize], v: usize) {
        let mut y = mate[v];
        while y != NONE {
            let z = self.parent[y];
            let next = mate[z];
            mate[y] = z;
            mate[z] = y;
            y = next;
        }
    }
}

pub(crate) fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| g.neighbors(v).to_vec()).collect()
}

fn greedy(adj: &[Vec<usize>], mate: &mut [usize]) {
    for v in 0..adj.len() {
        if mate[v] != NONE {
            continue;
        }
        if let Some(&u) = adj[v].iter().find(|&&u| mate[u] == NONE && u != v) {
            mate[v] = u;
            mate[u] = v;
        }
    }
}

/// Augments `mate` to maximum cardinality and returns the final forest labels.
pub(crate) fn maximize(adj: &[Vec<usize>], mate: &mut [usize]) -> Vec<Label> {
    loop {
        let roots: Vec<usize> = (0..adj.len()).filter(|&v| mate[v] == NONE).collect();
        match forest_search(adj, mate, &roots) {
            Outcome::Augmented => continue,
            Outcome::Labels(l) => return l,
        }
    }
}

/// Maximum-cardinality matching of a general graph.
pub fn maximum_matching(g: &Graph) -> Matching {
    let adj = adjacency(g);
    let mut mate = vec![NONE; g.n()];
    greedy(&adj, &mut mate);
    maximize(&adj, &mut mate);
    Matching::from_mate(mate).expect("search keeps the mate array an involution")
}

/// Maximum matching that extends the given one; useful to avoid re-solving after edge additions.
pub fn maximum_matching_from(g: &Graph, start: &Matching) -> Matching {
    let adj = adjacency(g);
    let mut mate = start.mates().to_vec();
    maximize(&adj, &mut mate);
    Matching::from_mate(mate).expect("search keeps the mate array an involution")
}

/// Gallai-Edmonds labels: `Even` vertices are missed by some maximum matching.
pub fn gallai_edmonds(g: &Graph) -> (Matching, Vec<Label>) {
    let adj = adjacency(g);
    let mut mate = vec![NONE; g.n()];
    greedy(&adj, &mut mate);
    let labels = maximize(&adj, &mut mate);
    (Matching::from_mate(mate).expect("involution"), labels)
}
