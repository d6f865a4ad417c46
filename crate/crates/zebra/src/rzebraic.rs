//! Cyclic `r`-color patterns: threshold parameters, bad and poor vertices,
//! the balanced partition, chained bipartite matchings and the Hamilton
//! construction on top of them.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{certify, Checks, CycleCertificate, Host};
use crate::error::{invalid, Result};
use crate::factor::union_two_factor;
use crate::graph::{edge, ColoredGraph, Edge, Matching, NONE};
use crate::matching::bipartite::{hall_violator, hopcroft_karp};
use crate::process::{gnp_pairs, rng_from};
use crate::schedule::build_schedule;
use crate::surgery::{surgery_from_factor, EdgeTranches, FailureStage, PipelineFailure, PipelineOptions, PipelineStats};

/// `i + 1` on colors `1..=r`.
pub fn succ(i: usize, r: usize) -> usize {
    i % r + 1
}

/// `i - 1` on colors `1..=r`.
pub fn pred(i: usize, r: usize) -> usize {
    (i + r - 2) % r + 1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RZebraicParams {
    pub n: usize,
    pub r: usize,
    pub epsilon: f64,
    pub alpha: usize,
    pub beta: usize,
    /// Threshold density `(r / alpha) ln n / n`.
    pub p_r: f64,
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
    pub eta0: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub eta: f64,
    pub theta: f64,
    pub mu0: usize,
}

/// Root of the increasing branch of `x ln(scale / x) = target` on `(0, scale / e]`.
fn solve_log_equation(scale: f64, target: f64) -> Result<f64> {
    let top = scale / std::f64::consts::E;
    let f = |x: f64| x * (scale / x).ln() - target;
    if !(target > 0.0) || f(top) < 0.0 {
        return invalid(format!("x ln({scale}/x) = {target} has no root below {top}"));
    }
    let (mut lo, mut hi) = (0.0_f64, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Parameters at the default density `p = (1 + 3ε) p_r`.
pub fn r_params(n: usize, r: usize, epsilon: f64) -> Result<RZebraicParams> {
    r_params_at(n, r, epsilon, None)
}

/// Parameters at an explicit density `p` (default `(1 + 3ε) p_r`).
pub fn r_params_at(n: usize, r: usize, epsilon: f64, p: Option<f64>) -> Result<RZebraicParams> {
    if r < 2 {
        return invalid(format!("need r >= 2, got {r}"));
    }
    if n == 0 || n % r != 0 {
        return invalid(format!("r = {r} must divide n = {n}"));
    }
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return invalid(format!("epsilon must lie in (0, 1/2), got {epsilon}"));
    }
    let nf = n as f64;
    let rf = r as f64;
    let alpha = r.div_ceil(2);
    let beta = r / 2 + 1;
    let af = alpha as f64;
    let p_r = rf / af * nf.ln() / nf;
    let p = p.unwrap_or((1.0 + 3.0 * epsilon) * p_r);
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("density {p} outside [0, 1]"));
    }
    let p1 = ((1.0 + epsilon) * p_r).min(1.0);
    let p2 = if p > p1 && p1 < 1.0 {
        1.0 - ((1.0 - p) / (1.0 - p1)).sqrt()
    } else {
        0.0
    };
    let e = std::f64::consts::E;
    let eta0 = epsilon * epsilon / rf;
    let eta1 = solve_log_equation(e * (1.0 + epsilon) / (rf * af), 1.0 / (rf * af))?;
    let eta2 = solve_log_equation(3.0 * e * rf * (1.0 + epsilon) / af, 1.0 / (3.0 * af))?;
    Ok(RZebraicParams {
        n,
        r,
        epsilon,
        alpha,
        beta,
        p_r,
        p,
        p1,
        p2,
        eta0,
        eta1,
        eta2,
        eta: eta0.min(eta1).min(eta2),
        theta: epsilon / (2.0 * rf * af),
        mu0: r * alpha,
    })
}

/// `n (1 - alpha p / r)^(n-1)`, a lower bound on the expected number of bad vertices.
pub fn bad_first_moment(n: usize, r: usize, p: f64) -> f64 {
    let alpha = r.div_ceil(2) as f64;
    n as f64 * (1.0 - alpha * p / r as f64).powi(n as i32 - 1)
}

fn check_colors(g: &ColoredGraph, r: usize) -> Result<()> {
    if r < 2 || g.r() > r {
        return invalid(format!("graph has {} colors, expected r = {r} >= 2", g.r()));
    }
    Ok(())
}

/// Colors seen at each vertex, as flags indexed `0..r`.
fn incident_colors(g: &ColoredGraph, r: usize) -> Vec<Vec<bool>> {
    let mut seen = vec![vec![false; r]; g.n()];
    for &((u, v), c) in g.edges() {
        seen[u][c - 1] = true;
        seen[v][c - 1] = true;
    }
    seen
}

/// Vertices that see no cyclically consecutive pair of colors.
pub fn bad_vertices(g: &ColoredGraph, r: usize) -> Result<Vec<usize>> {
    check_colors(g, r)?;
    let seen = incident_colors(g, r);
    Ok((0..g.n())
        .filter(|&v| !(1..=r).any(|i| seen[v][i - 1] && seen[v][succ(i, r) - 1]))
        .collect())
}

/// Per-vertex, per-color degrees, indexed `[v][c - 1]`.
fn color_degrees(g: &ColoredGraph, r: usize) -> Vec<Vec<usize>> {
    let mut d = vec![vec![0; r]; g.n()];
    for &((u, v), c) in g.edges() {
        d[u][c - 1] += 1;
        d[v][c - 1] += 1;
    }
    d
}

/// Colors with degree at least `eta0 ln n` at `v`, for every vertex.
pub fn heavy_colors(g: &ColoredGraph, params: &RZebraicParams) -> Result<Vec<Vec<usize>>> {
    check_colors(g, params.r)?;
    let threshold = params.eta0 * (g.n() as f64).ln();
    Ok(color_degrees(g, params.r)
        .into_iter()
        .map(|d| (1..=params.r).filter(|&i| d[i - 1] as f64 >= threshold).collect())
        .collect())
}

/// Vertices with fewer than `beta` heavy colors.
pub fn poor_vertices(g: &ColoredGraph, params: &RZebraicParams) -> Result<Vec<usize>> {
    Ok(heavy_colors(g, params)?
        .iter()
        .enumerate()
        .filter(|(_, j)| j.len() < params.beta)
        .map(|(v, _)| v)
        .collect())
}

/// Colors `i` with both `i` and `i + 1` heavy at `v`.
pub fn consecutive_heavy(g: &ColoredGraph, params: &RZebraicParams) -> Result<Vec<Vec<usize>>> {
    let r = params.r;
    Ok(heavy_colors(g, params)?
        .iter()
        .map(|j| (1..=r).filter(|&i| j.contains(&i) && j.contains(&succ(i, r))).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexClassification {
    pub r: usize,
    /// `[v][i - 1]`: color-`i` neighbours in block `i + 1`.
    pub d_plus: Vec<Vec<usize>>,
    /// `[v][i - 1]`: color-`(i - 1)` neighbours in block `i - 1`.
    pub d_minus: Vec<Vec<usize>>,
    pub large: Vec<bool>,
    /// Smallest `i` with `v` `i`-large, for small vertices.
    pub phi: Vec<Option<usize>>,
    /// Working sets before balancing, index `i - 1`.
    pub working: Vec<Vec<usize>>,
    /// Balanced sets of size `n / r`, index `i - 1`.
    pub parts: Vec<Vec<usize>>,
    /// `part_of[v]` is the color index `i` with `v` in `Z_i`.
    pub part_of: Vec<usize>,
    pub moved: usize,
    /// Colors `i` with `i` and `i + 1` both heavy at `v`; reported only.
    pub k_sets: Vec<Vec<usize>>,
}

impl VertexClassification {
    pub fn small(&self) -> Vec<usize> {
        (0..self.large.len()).filter(|&v| !self.large[v]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationFailure {
    /// Small vertices that are `i`-large for no `i`.
    pub stranded: Vec<usize>,
    pub detail: String,
}

/// Block of `v` in the fixed partition into consecutive runs of `n / r`.
pub fn block_of(v: usize, n: usize, r: usize) -> usize {
    v / (n / r) + 1
}

/// Degrees into the fixed blocks, the large/small split, working sets and
/// the random rebalancing into sets of size `n / r`.
pub fn classify_and_balance(
    g: &ColoredGraph,
    params: &RZebraicParams,
    seed: u64,
) -> std::result::Result<VertexClassification, ClassificationFailure> {
    let fail = |detail: String| ClassificationFailure {
        stranded: Vec::new(),
        detail,
    };
    let (n, r) = (g.n(), params.r);
    if n != params.n || n % r != 0 || g.r() > r {
        return Err(fail(format!("graph with n = {n}, {} colors does not fit r = {r}", g.r())));
    }
    let size = n / r;
    let k_sets = consecutive_heavy(g, params).map_err(|e| fail(e.to_string()))?;
    let mut d_plus = vec![vec![0usize; r]; n];
    let mut d_minus = vec![vec![0usize; r]; n];
    for &((a, b), c) in g.edges() {
        for (v, w) in [(a, b), (b, a)] {
            let bw = block_of(w, n, r);
            // v sits at position i = c with w ahead, or at i = c + 1 with w behind.
            if bw == succ(c, r) {
                d_plus[v][c - 1] += 1;
            }
            if bw == c {
                d_minus[v][succ(c, r) - 1] += 1;
            }
        }
    }
    let threshold = params.eta * (n as f64).ln();
    let i_large = |v: usize, i: usize| d_plus[v][i - 1] as f64 >= threshold && d_minus[v][i - 1] as f64 >= threshold;
    let large: Vec<bool> = (0..n).map(|v| (1..=r).all(|i| i_large(v, i))).collect();
    let phi: Vec<Option<usize>> = (0..n)
        .map(|v| if large[v] { None } else { (1..=r).find(|&i| i_large(v, i)) })
        .collect();
    let stranded: Vec<usize> = (0..n).filter(|&v| !large[v] && phi[v].is_none()).collect();
    if !stranded.is_empty() {
        return Err(ClassificationFailure {
            detail: format!("{} small vertices are i-large for no i", stranded.len()),
            stranded,
        });
    }
    let mut working = vec![Vec::new(); r];
    for v in 0..n {
        let i = if large[v] { block_of(v, n, r) } else { phi[v].expect("checked") };
        working[i - 1].push(v);
    }
    let mut rng = rng_from(seed);
    let mut parts = working.clone();
    let mut pool = Vec::new();
    for part in parts.iter_mut() {
        if part.len() <= size {
            continue;
        }
        let excess = part.len() - size;
        let mut big: Vec<usize> = part.iter().copied().filter(|&v| large[v]).collect();
        if big.len() < excess {
            return Err(fail(format!("a working set needs {excess} large vertices removed but has {}", big.len())));
        }
        big.shuffle(&mut rng);
        let drop: HashSet<usize> = big[..excess].iter().copied().collect();
        part.retain(|v| !drop.contains(v));
        pool.extend(big[..excess].iter().copied());
    }
    pool.sort_unstable();
    pool.shuffle(&mut rng);
    let moved = pool.len();
    for part in parts.iter_mut() {
        while part.len() < size {
            part.push(pool.pop().expect("sizes sum to n"));
        }
        part.sort_unstable();
    }
    let mut part_of = vec![0; n];
    for (i, part) in parts.iter().enumerate() {
        for &v in part {
            part_of[v] = i + 1;
        }
    }
    Ok(VertexClassification {
        r,
        d_plus,
        d_minus,
        large,
        phi,
        working,
        parts,
        part_of,
        moved,
        k_sets,
    })
}

/// Union of the chained matchings: every vertex of `Z_i` is joined by a
/// color-`i` edge to `next[v]` in `Z_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RFactor {
    pub r: usize,
    pub next: Vec<usize>,
    /// Each cycle starts in `Z_1` and follows `next`.
    pub cycles: Vec<Vec<usize>>,
}

impl RFactor {
    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainFailure {
    /// Color of the bipartite graph without a perfect matching.
    pub color: usize,
    /// Vertices of `Z_i` with too few neighbours in `Z_{i+1}`.
    pub violator: Vec<usize>,
    pub neighbours: Vec<usize>,
}

/// Perfect matchings between consecutive balanced sets in the matching color.
pub fn chain_matchings(
    g: &ColoredGraph,
    class: &VertexClassification,
) -> std::result::Result<RFactor, ChainFailure> {
    let (n, r) = (g.n(), class.r);
    let size = n / r;
    let mut local = vec![0usize; n];
    for part in &class.parts {
        for (k, &v) in part.iter().enumerate() {
            local[v] = k;
        }
    }
    let mut next = vec![NONE; n];
    for i in 1..=r {
        let j = succ(i, r);
        let mut adj = vec![Vec::new(); size];
        for &((a, b), c) in g.edges() {
            if c != i {
                continue;
            }
            for (u, w) in [(a, b), (b, a)] {
                if class.part_of[u] == i && class.part_of[w] == j {
                    adj[local[u]].push(local[w]);
                }
            }
        }
        let (ml, mr) = hopcroft_karp(size, &adj);
        if let Some(l) = (0..size).find(|&l| ml[l] == NONE) {
            let (s, t) = hall_violator(&adj, &ml, &mr, l);
            return Err(ChainFailure {
                color: i,
                violator: s.iter().map(|&k| class.parts[i - 1][k]).collect(),
                neighbours: t.iter().map(|&k| class.parts[j - 1][k]).collect(),
            });
        }
        for (l, &m) in ml.iter().enumerate() {
            next[class.parts[i - 1][l]] = class.parts[j - 1][m];
        }
    }
    let cycles = factor_cycles(&class.parts[0], &next, n);
    Ok(RFactor { r, next, cycles })
}

/// Swaps color-1 edges along alternating cycles between `Z_1` and `Z_2` until
/// no cycle of the factor has length `r`. Returns the number of swaps, or the
/// count of length-`r` cycles left when no swap helps.
pub fn repair_short_cycles(
    g: &ColoredGraph,
    class: &VertexClassification,
    factor: &mut RFactor,
) -> std::result::Result<usize, usize> {
    let (n, r) = (g.n(), factor.r);
    let mut adj = vec![Vec::new(); n];
    for &((a, b), c) in g.edges() {
        if c != 1 {
            continue;
        }
        match (class.part_of[a], class.part_of[b]) {
            (1, 2) => adj[a].push(b),
            (2, 1) => adj[b].push(a),
            _ => {}
        }
    }
    let run_end = |next: &[usize], y: usize| (1..r).fold(y, |v, _| next[v]);
    let short = |next: &[usize]| -> Vec<usize> {
        class.parts[0].iter().copied().filter(|&z| run_end(next, next[z]) == z).collect()
    };
    let mut swaps = 0;
    let mut stuck: HashSet<usize> = HashSet::new();
    loop {
        let fixed = short(&factor.next);
        let Some(&z) = fixed.iter().find(|z| !stuck.contains(z)) else {
            if fixed.is_empty() {
                break;
            }
            return Err(fixed.len());
        };
        let target = factor.next[z];
        let mut prev = vec![NONE; n];
        for &u in &class.parts[0] {
            prev[factor.next[u]] = u;
        }
        // Breadth-first over Z_1: from u, a free edge to y then y's matched partner.
        let mut from = vec![NONE; n];
        let mut queue = std::collections::VecDeque::from([z]);
        from[z] = z;
        let mut last = NONE;
        'search: while let Some(u) = queue.pop_front() {
            for &y in &adj[u] {
                if y == factor.next[u] {
                    continue;
                }
                if y == target && u != z {
                    last = u;
                    from[target] = u;
                    break 'search;
                }
                let w = prev[y];
                if from[w] == NONE {
                    from[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if last == NONE {
            stuck.insert(z);
            continue;
        }
        let before = fixed.len();
        let saved = factor.next.clone();
        // Walk back from the vertex that reached `target`, shifting each partner.
        let mut u = last;
        let mut y = target;
        loop {
            let old = factor.next[u];
            factor.next[u] = y;
            if u == z {
                break;
            }
            y = old;
            u = from[u];
        }
        if short(&factor.next).len() < before {
            swaps += 1;
            stuck.clear();
        } else {
            factor.next = saved;
            stuck.insert(z);
        }
    }
    factor.cycles = factor_cycles(&class.parts[0], &factor.next, n);
    Ok(swaps)
}

fn factor_cycles(z1: &[usize], next: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for &z in z1 {
        if seen[z] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut v = z;
        while !seen[v] {
            seen[v] = true;
            cyc.push(v);
            v = next[v];
        }
        cycles.push(cyc);
    }
    cycles
}

/// A colored graph together with the first of its three layers, which the
/// classification and the chained matchings read.
#[derive(Clone, Debug)]
pub struct RInstance {
    pub graph: ColoredGraph,
    pub base: ColoredGraph,
}

impl RInstance {
    /// Uses the whole graph as the base layer.
    pub fn single(g: ColoredGraph) -> Self {
        RInstance {
            base: g.clone(),
            graph: g,
        }
    }
}

/// `G(n,p1)` plus two independent `G(n,p2)` layers, colored uniformly; a
/// repeated pair keeps the color it got first. Below `p1` the base alone is
/// sampled at `p`.
pub fn sample_layered(params: &RZebraicParams, seed: u64) -> RInstance {
    let (n, r) = (params.n, params.r);
    let mut rng = rng_from(seed);
    let mut base = ColoredGraph::new(n, r);
    for e in gnp_pairs(n, params.p.min(params.p1), &mut rng) {
        base.add_edge(e.0, e.1, rng.gen_range(1..=r));
    }
    let mut graph = base.clone();
    for _ in 0..2 {
        for e in gnp_pairs(n, params.p2, &mut rng) {
            let c = rng.gen_range(1..=r);
            if graph.color(e.0, e.1).is_none() {
                graph.add_edge(e.0, e.1, c);
            }
        }
    }
    RInstance { graph, base }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RZebraicStats {
    pub small: usize,
    pub moved: usize,
    pub factor_cycles: usize,
    /// Alternating swaps that removed cycles of length `r`.
    pub repairs: usize,
    /// Vertices of the graph the surgery runs on, `2n / r`.
    pub contracted_n: usize,
    /// Unused color-1 edges between `Z_1` and `Z_2`.
    pub supply: usize,
    pub surgery: PipelineStats,
}

#[derive(Clone, Debug)]
pub struct RZebraicSuccess {
    pub cycle: Vec<usize>,
    pub certificate: CycleCertificate,
    pub stats: RZebraicStats,
}

/// Hamilton cycle whose colors read `1, 2, ..., r` repeatedly.
///
/// Each run `y, next(y), ..., ` from `y` in `Z_2` back to `Z_1` is contracted
/// to one matched edge, leaving a 2-factor on `Z_1 ∪ Z_2` made of that matching
/// and the color-1 matching. The two surgery phases then rewire only color-1
/// edges, drawn from two seeded halves of the unused color-1 edges between
/// `Z_1` and `Z_2`. `overrides` shape the schedule of the contracted graph.
pub fn r_zebraic_hamilton(
    inst: &RInstance,
    params: &RZebraicParams,
    overrides: &BTreeMap<String, f64>,
    seed: u64,
    opts: &PipelineOptions,
) -> std::result::Result<RZebraicSuccess, PipelineFailure> {
    let g = &inst.graph;
    let (n, r) = (g.n(), params.r);
    if n != params.n || n % r != 0 || n / r < 2 || inst.base.n() != n {
        return Err(PipelineFailure::new(FailureStage::Schedule, format!("n = {n} does not fit r = {r}")));
    }
    let bad = bad_vertices(g, r).map_err(|e| PipelineFailure::new(FailureStage::Schedule, e.to_string()))?;
    if let Some(&v) = bad.first() {
        return Err(PipelineFailure::new(
            FailureStage::BadVertex,
            format!("vertex {v} sees no consecutive pair of colors ({} bad vertices)", bad.len()),
        ));
    }
    let class = classify_and_balance(&inst.base, params, seed)
        .map_err(|f| PipelineFailure::new(FailureStage::Classification, f.detail))?;
    let mut factor = chain_matchings(&inst.base, &class).map_err(|f| {
        PipelineFailure::new(
            FailureStage::ChainMatching,
            format!("color {}: {} vertices have {} neighbours", f.color, f.violator.len(), f.neighbours.len()),
        )
    })?;
    let factor_cycles = factor.cycles.len();
    let repairs = repair_short_cycles(g, &class, &mut factor).map_err(|left| {
        PipelineFailure::new(FailureStage::ChainMatching, format!("{left} cycles of length {r} cannot be opened"))
    })?;
    let mut stats = RZebraicStats {
        small: class.small().len(),
        moved: class.moved,
        factor_cycles,
        repairs,
        ..Default::default()
    };

    let size = n / r;
    let (z1, z2) = (&class.parts[0], &class.parts[1]);
    let mut local = vec![NONE; n];
    for (k, &v) in z1.iter().enumerate() {
        local[v] = k;
    }
    for (k, &v) in z2.iter().enumerate() {
        local[v] = size + k;
    }
    let global: Vec<usize> = z1.iter().chain(z2).copied().collect();
    let n2 = 2 * size;
    stats.contracted_n = n2;
    let run_end = |y: usize| {
        let mut v = y;
        for _ in 1..r {
            v = factor.next[v];
        }
        v
    };
    let contracted_err = |e: crate::ZebraError| PipelineFailure::new(FailureStage::ChainMatching, e.to_string());
    let m0 = Matching::from_edges(n2, z2.iter().map(|&y| edge(local[y], local[run_end(y)]))).map_err(contracted_err)?;
    let m1 = Matching::from_edges(n2, z1.iter().map(|&z| edge(local[z], local[factor.next[z]]))).map_err(contracted_err)?;
    let pi0 = union_two_factor(&m0, &m1).map_err(contracted_err)?;

    let mut supply: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|&&((a, b), c)| c == 1 && (class.part_of[a] == 1) != (class.part_of[b] == 1))
        .filter(|&&((a, b), _)| {
            let pair = [class.part_of[a], class.part_of[b]];
            pair.contains(&1) && pair.contains(&2)
        })
        .map(|&((a, b), _)| edge(local[a], local[b]))
        .filter(|&(a, b)| !m0.contains(a, b) && !m1.contains(a, b))
        .collect();
    supply.sort_unstable();
    let mut rng = rng_from(seed ^ 0x5EED_0F_C0105);
    supply.shuffle(&mut rng);
    stats.supply = supply.len();
    let ec = supply.split_off(supply.len() / 2);
    let tranches = EdgeTranches::new(n2, supply, ec, Vec::new(), &[], 0);
    let s = build_schedule(n2, overrides).map_err(|e| PipelineFailure::new(FailureStage::Schedule, e.to_string()))?;
    let contracted = surgery_from_factor(&pi0, &tranches, &s, seed, opts, &mut stats.surgery)?;

    let cycle = expand(&contracted, &m0, &global, size, &factor.next, r);
    let certificate = certify(
        &cycle,
        Host::Colored(g),
        Checks {
            r_pattern: Some(r),
            ..Default::default()
        },
    );
    if !certificate.passed() {
        return Err(PipelineFailure::new(FailureStage::Certificate, "cycle does not follow the color pattern"));
    }
    Ok(RZebraicSuccess {
        cycle,
        certificate,
        stats,
    })
}

/// Replaces each contracted matched edge by its run of `r - 1` edges.
fn expand(contracted: &[usize], m0: &Matching, global: &[usize], size: usize, next: &[usize], r: usize) -> Vec<usize> {
    let k = contracted.len();
    let start = contracted.iter().position(|&v| v < size).expect("nonempty cycle");
    // Orient so that the first step out of Z_1 is a color-1 edge.
    let forward = !m0.contains(contracted[start], contracted[(start + 1) % k]);
    let at = |step: usize| {
        if forward {
            contracted[(start + step) % k]
        } else {
            contracted[(start + k - step % k) % k]
        }
    };
    let mut out = Vec::with_capacity(size * r);
    for step in (0..k).step_by(2) {
        out.push(global[at(step)]);
        let mut v = global[at(step + 1)];
        for _ in 1..r {
            out.push(v);
            v = next[v];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_index_arithmetic() {
        assert_eq!(succ(3, 3), 1);
        assert_eq!(pred(1, 3), 3);
        assert_eq!(pred(2, 4), 1);
    }

    #[test]
    fn alpha_beta_and_threshold() {
        let two = r_params(1000, 2, 0.1).unwrap();
        assert_eq!(two.alpha, 1);
        assert!((two.p_r - 2.0 * (1000f64).ln() / 1000.0).abs() < 1e-15);
        let three = r_params(999, 3, 0.1).unwrap();
        assert_eq!((three.alpha, three.beta), (2, 2));
        assert!(r_params(1000, 3, 0.1).is_err());
    }

    #[test]
    fn eta_roots_satisfy_their_equations() {
        let p = r_params(3000, 3, 0.1).unwrap();
        let (e, r, a, eps) = (std::f64::consts::E, 3.0, 2.0, 0.1);
        let lhs1 = p.eta1 * (e * (1.0 + eps) / (r * p.eta1 * a)).ln();
        let lhs2 = p.eta2 * (3.0 * e * r * (1.0 + eps) / (p.eta2 * a)).ln();
        assert!((lhs1 - 1.0 / (r * a)).abs() < 1e-10 * (1.0 / (r * a)));
        assert!((lhs2 - 1.0 / (3.0 * a)).abs() < 1e-10 * (1.0 / (3.0 * a)));
        assert!(p.eta <= p.eta0);
    }

    #[test]
    fn density_split() {
        let p = r_params(3000, 3, 0.1).unwrap();
        let lhs = 1.0 - p.p;
        let rhs = (1.0 - p.p1) * (1.0 - p.p2).powi(2);
        assert!((lhs - rhs).abs() < 1e-14);
        assert!(p.p2 > 0.0);
    }

    #[test]
    fn bad_means_no_consecutive_pair() {
        let g = ColoredGraph::from_edges(4, 4, [((0, 1), 1), ((0, 2), 3)]);
        assert!(bad_vertices(&g, 4).unwrap().contains(&0));
        let h = ColoredGraph::from_edges(3, 3, [((0, 1), 1), ((0, 2), 2)]);
        assert!(!bad_vertices(&h, 3).unwrap().contains(&0));
    }

    #[test]
    fn single_color_vertex_is_poor() {
        let edges: Vec<(Edge, usize)> = (1..30).map(|v| ((0, v), 1)).collect();
        let g = ColoredGraph::from_edges(30, 3, edges);
        let p = r_params(30, 3, 0.3).unwrap();
        assert!(poor_vertices(&g, &p).unwrap().contains(&0));
    }

    /// Gives every vertex except 0 a color-`c` neighbour in blocks `c` and
    /// `c + 1` for each color, so that all of them are large.
    fn all_large_but_zero(n: usize, r: usize) -> Vec<(Edge, usize)> {
        let mut g = ColoredGraph::new(n, r);
        for v in 1..n {
            for c in 1..=r {
                for b in [c, succ(c, r)] {
                    let has = g.neighbors(v).iter().any(|&(w, col)| col == c && block_of(w, n, r) == b);
                    if has {
                        continue;
                    }
                    let w = (1..n)
                        .filter(|&w| w != v && block_of(w, n, r) == b && g.color(v, w).is_none())
                        .min_by_key(|&w| g.neighbors(w).len())
                        .expect("room in block");
                    g.add_edge(v, w, c);
                }
            }
        }
        g.edges().to_vec()
    }

    #[test]
    fn small_vertex_goes_to_its_large_block() {
        // n = 24, r = 3: blocks of 8. Vertex 0 (block 1) keeps a color-1 edge
        // into block 1 and a color-2 edge into block 3: 2-large and nothing else.
        let (n, r) = (24, 3);
        let mut edges = all_large_but_zero(n, r);
        edges.extend([((0, 1), 1), ((0, 16), 2)]);
        let g = ColoredGraph::from_edges(n, r, edges);
        let p = r_params(n, r, 0.1).unwrap();
        let class = classify_and_balance(&g, &p, 3).unwrap();
        assert_eq!(class.small(), vec![0]);
        assert_eq!(class.phi[0], Some(2));
        assert!(class.working[1].contains(&0));
        assert_eq!(class.moved, 1);
        assert!(class.parts.iter().all(|z| z.len() == 8));
        assert!(class.parts[1].contains(&0));
    }

    #[test]
    fn chain_on_complete_blocks() {
        let n = 9;
        let r = 3;
        let mut edges: Vec<(Edge, usize)> = Vec::new();
        for u in 0..n {
            for w in u + 1..n {
                let (bu, bw) = (block_of(u, n, r), block_of(w, n, r));
                if bu != bw {
                    let c = if succ(bu, r) == bw { bu } else { bw };
                    edges.push((edge(u, w), c));
                }
            }
        }
        let g = ColoredGraph::from_edges(n, r, edges);
        let p = r_params(n, r, 0.1).unwrap();
        let class = classify_and_balance(&g, &p, 0).unwrap();
        assert_eq!(class.moved, 0);
        let f = chain_matchings(&g, &class).unwrap();
        assert!(f.cycle_lengths().iter().all(|l| l % 3 == 0));
        assert_eq!(f.cycle_lengths().iter().sum::<usize>(), 9);
    }

    #[test]
    fn bad_vertex_stops_the_pipeline() {
        let g = ColoredGraph::from_edges(6, 3, [((0, 1), 1), ((2, 3), 2)]);
        let p = r_params(6, 3, 0.1).unwrap();
        let err = r_zebraic_hamilton(&RInstance::single(g), &p, &BTreeMap::new(), 0, &PipelineOptions::default())
            .unwrap_err();
        assert_eq!(err.stage, FailureStage::BadVertex);
    }
}
