use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ZebraError};
use crate::graph::{edge, ColoredGraph, Edge, Graph, Matching};

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessModel {
    UniformWithoutReplacement,
    UniformExcludingM0,
    WithReplacement,
}

/// Ordered edge stream defining the graphs `G_0, G_1, ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProcessTrace {
    pub n: usize,
    pub model: ProcessModel,
    pub edges: Vec<Edge>,
    /// Colors in `1..=r`, one per stream entry, once colored.
    pub colors: Option<Vec<usize>>,
    pub r: usize,
    /// Whether a repeated edge takes the color of its latest draw.
    pub recolor_repeats: bool,
    /// Stream positions whose edge already occurred earlier.
    pub repeated: Vec<usize>,
    pub seed: u64,
}

impl ProcessTrace {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    /// Copy of the first `m` entries.
    pub fn truncated(&self, m: usize) -> ProcessTrace {
        let m = m.min(self.len());
        ProcessTrace {
            edges: self.edges[..m].to_vec(),
            colors: self.colors.as_ref().map(|c| c[..m].to_vec()),
            repeated: self.repeated.iter().copied().filter(|&i| i < m).collect(),
            ..self.clone()
        }
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Maps `0..n(n-1)/2` onto pairs `(u, v)`, `u < v`, column by column.
pub fn decode_pair(k: usize) -> Edge {
    let mut v = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as usize;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

pub fn encode_pair(u: usize, v: usize) -> usize {
    let (u, v) = edge(u, v);
    v * (v - 1) / 2 + u
}

/// Samples a random graph process.
///
/// Without replacement, the stream is a forward Fisher-Yates shuffle of all
/// pairs (M0 pairs skipped in the excluding model), so a prefix request of
/// length `k` returns exactly the first `k` entries of the full stream for the
/// same seed. With replacement, `len` i.i.d. uniform pairs are drawn.
pub fn sample_process(
    n: usize,
    model: ProcessModel,
    m0: Option<&Matching>,
    seed: u64,
    len: Option<usize>,
) -> Result<ProcessTrace> {
    if n < 2 {
        return invalid("process needs at least two vertices");
    }
    let total = pair_count(n);
    let mut rng = rng_from(seed);
    let mut edges = Vec::new();
    let mut repeated = Vec::new();
    match model {
        ProcessModel::WithReplacement => {
            let Some(len) = len else {
                return invalid("with-replacement model needs an explicit length");
            };
            let mut seen = HashSet::with_capacity(len);
            for i in 0..len {
                let e = decode_pair(rng.gen_range(0..total));
                if !seen.insert(e) {
                    repeated.push(i);
                }
                edges.push(e);
            }
        }
        ProcessModel::UniformWithoutReplacement | ProcessModel::UniformExcludingM0 => {
            let skip: Option<&Matching> = if model == ProcessModel::UniformExcludingM0 {
                let m0 = m0.ok_or(ZebraError::MissingMatching)?;
                if m0.n() != n || !m0.is_perfect() {
                    return Err(ZebraError::MissingMatching);
                }
                Some(m0)
            } else {
                None
            };
            let eligible = total - skip.map_or(0, |_| n / 2);
            let want = len.unwrap_or(eligible).min(eligible);
            edges.reserve(want);
            let keep = |e: Edge| skip.map_or(true, |m| !m.contains(e.0, e.1));
            if want * 4 >= total {
                let mut idx: Vec<usize> = (0..total).collect();
                for i in 0..total {
                    if edges.len() == want {
                        break;
                    }
                    let j = rng.gen_range(i..total);
                    idx.swap(i, j);
                    let e = decode_pair(idx[i]);
                    if keep(e) {
                        edges.push(e);
                    }
                }
            } else {
                let mut moved: HashMap<usize, usize> = HashMap::with_capacity(want * 2);
                let mut i = 0;
                while edges.len() < want {
                    let j = rng.gen_range(i..total);
                    let at_j = *moved.get(&j).unwrap_or(&j);
                    let at_i = *moved.get(&i).unwrap_or(&i);
                    moved.insert(j, at_i);
                    let e = decode_pair(at_j);
                    if keep(e) {
                        edges.push(e);
                    }
                    i += 1;
                }
            }
        }
    }
    Ok(ProcessTrace {
        n,
        model,
        edges,
        colors: None,
        r: 0,
        recolor_repeats: false,
        repeated,
        seed,
    })
}

/// Attaches i.i.d. uniform colors from `1..=r` to every stream entry.
///
/// With `recolor_repeats` a repeated edge shows the color of its latest draw in
/// snapshots; otherwise every occurrence carries the first draw's color.
pub fn color_process(
    trace: &ProcessTrace,
    r: usize,
    seed: u64,
    recolor_repeats: bool,
) -> Result<ProcessTrace> {
    if r < 2 {
        return invalid(format!("need at least two colors, got {r}"));
    }
    if trace.is_colored() {
        return invalid("trace is already colored");
    }
    let mut rng = rng_from(seed);
    let mut colors: Vec<usize> = (0..trace.len()).map(|_| rng.gen_range(1..=r)).collect();
    if !recolor_repeats && !trace.repeated.is_empty() {
        let mut first: HashMap<Edge, usize> = HashMap::new();
        for (i, &e) in trace.edges.iter().enumerate() {
            let c = *first.entry(e).or_insert(colors[i]);
            colors[i] = c;
        }
    }
    Ok(ProcessTrace {
        colors: Some(colors),
        r,
        recolor_repeats,
        ..trace.clone()
    })
}

pub fn snapshot(trace: &ProcessTrace, m: usize) -> Result<Graph> {
    if m > trace.len() {
        return Err(ZebraError::OutOfRange {
            index: m,
            len: trace.len(),
        });
    }
    Ok(Graph::from_edges(trace.n, trace.edges[..m].iter().copied()))
}

pub fn snapshot_colored(trace: &ProcessTrace, m: usize) -> Result<ColoredGraph> {
    if m > trace.len() {
        return Err(ZebraError::OutOfRange {
            index: m,
            len: trace.len(),
        });
    }
    let Some(colors) = &trace.colors else {
        return invalid("trace has no colors");
    };
    let mut order: Vec<Edge> = Vec::new();
    let mut current: HashMap<Edge, usize> = HashMap::new();
    for i in 0..m {
        let e = trace.edges[i];
        match current.get_mut(&e) {
            Some(c) => {
                if trace.recolor_repeats {
                    *c = colors[i];
                }
            }
            None => {
                current.insert(e, colors[i]);
                order.push(e);
            }
        }
    }
    Ok(ColoredGraph::from_edges(
        trace.n,
        trace.r,
        order.into_iter().map(|e| (e, current[&e])),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HittingCriterion {
    MinDegreeOne,
    AllColorsCover,
}

/// First `m` at which `G_m` meets the criterion, or `None` if the trace ends first.
pub fn hitting_time(trace: &ProcessTrace, criterion: HittingCriterion) -> Result<Option<usize>> {
    let n = trace.n;
    match criterion {
        HittingCriterion::MinDegreeOne => {
            let mut covered = vec![false; n];
            let mut missing = n;
            for (i, &(u, v)) in trace.edges.iter().enumerate() {
                for w in [u, v] {
                    if !covered[w] {
                        covered[w] = true;
                        missing -= 1;
                    }
                }
                if missing == 0 {
                    return Ok(Some(i + 1));
                }
            }
            Ok(None)
        }
        HittingCriterion::AllColorsCover => {
            let Some(colors) = &trace.colors else {
                return invalid("all-colors criterion needs a colored trace");
            };
            let r = trace.r;
            let mut count = vec![0usize; n * (r + 1)];
            let mut seen_colors = vec![0usize; n];
            let mut missing = n;
            let mut current: HashMap<Edge, usize> = HashMap::new();
            for (i, &(u, v)) in trace.edges.iter().enumerate() {
                let c = colors[i];
                let old = current.get(&(u, v)).copied();
                match old {
                    Some(old_c) if old_c == c || !trace.recolor_repeats => {}
                    _ => {
                        current.insert((u, v), c);
                        for w in [u, v] {
                            if let Some(oc) = old {
                                let slot = &mut count[w * (r + 1) + oc];
                                *slot -= 1;
                                if *slot == 0 {
                                    if seen_colors[w] == r {
                                        missing += 1;
                                    }
                                    seen_colors[w] -= 1;
                                }
                            }
                            let slot = &mut count[w * (r + 1) + c];
                            *slot += 1;
                            if *slot == 1 {
                                seen_colors[w] += 1;
                                if seen_colors[w] == r {
                                    missing -= 1;
                                }
                            }
                        }
                    }
                }
                if missing == 0 {
                    return Ok(Some(i + 1));
                }
            }
            Ok(None)
        }
    }
}

/// Uniform perfect matching of `K_n`.
pub fn random_perfect_matching(n: usize, seed: u64) -> Result<Matching> {
    if n % 2 == 1 {
        return invalid(format!("perfect matching needs even n, got {n}"));
    }
    let mut rng = rng_from(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    Matching::from_edges(n, perm.chunks(2).map(|c| edge(c[0], c[1])))
}

/// Binomial random graph `G(n,p)` with i.i.d. uniform colors from `1..=r`.
pub fn sample_gnp_colored(n: usize, p: f64, r: usize, seed: u64) -> Result<ColoredGraph> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("edge probability {p} outside [0,1]"));
    }
    if r < 1 {
        return invalid("need at least one color");
    }
    let mut rng = rng_from(seed);
    let edges = gnp_pairs(n, p, &mut rng);
    let colored: Vec<(Edge, usize)> = edges.into_iter().map(|e| (e, rng.gen_range(1..=r))).collect();
    Ok(ColoredGraph::from_edges(n, r, colored))
}

/// Pairs of `G(n,p)` in index order, via geometric skips.
pub fn gnp_pairs<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<Edge> {
    let total = pair_count(n);
    let mut out = Vec::new();
    if p <= 0.0 || total == 0 {
        return out;
    }
    if p >= 1.0 {
        return (0..total).map(decode_pair).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut k: usize = 0;
    loop {
        let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let skip = (u.ln() / log_q).floor();
        if !skip.is_finite() || skip >= (total - k) as f64 {
            break;
        }
        k += skip as usize;
        out.push(decode_pair(k));
        k += 1;
        if k >= total {
            break;
        }
    }
    out
}
