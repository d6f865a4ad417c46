use super::blossom::{adjacency, forest_search, Label, Outcome};
use crate::error::{invalid, Result};
use crate::graph::{Graph, Matching, NONE};

/// `A_G(v)`: the other vertices exposed by `m`, plus every vertex reachable from
/// them by a non-empty even alternating path. Excludes `v` itself and is empty
/// when `v` is the only exposed vertex.
pub fn surplus_set(g: &Graph, m: &Matching, v: usize) -> Result<Vec<usize>> {
    if m.n() != g.n() || !m.is_matching_of(g) {
        return invalid("matching does not belong to the graph");
    }
    if v >= g.n() || m.mate(v).is_some() {
        return invalid(format!("vertex {v} is covered by the matching"));
    }
    let roots: Vec<usize> = (0..g.n()).filter(|&w| w != v && m.mates()[w] == NONE).collect();
    if roots.is_empty() {
        return Ok(Vec::new());
    }
    let adj = adjacency(g);
    let mut mate = m.mates().to_vec();
    match forest_search(&adj, &mut mate, &roots) {
        Outcome::Augmented => invalid("matching is not maximum"),
        Outcome::Labels(labels) => Ok((0..g.n()).filter(|&w| labels[w] == Label::Even).collect()),
    }
}

/// Whether `|N_G(A)| < |A|`.
pub fn is_deficient(g: &Graph, set: &[usize]) -> bool {
    g.neighborhood(set).len() < set.len()
}
