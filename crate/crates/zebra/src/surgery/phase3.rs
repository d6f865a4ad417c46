use std::collections::HashSet;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::phase2::{merge_cycles_by_rotation, Phase2Options};
use crate::factor::{walk_cycles, TwoFactor};
use crate::graph::{edge, Edge, Matching, NONE};
use crate::process::rng_from;
use crate::schedule::ParamSchedule;

#[derive(Clone, Copy, Debug)]
pub struct Phase3Options {
    pub max_retries: usize,
    /// Only accept rejoin permutations `rho` with `phi ∘ rho` cyclic.
    pub strict: bool,
    /// After the retries, merge cycles pairwise through `EC` edge pairs.
    pub guided_fallback: bool,
    /// Then merge what is left with rotation trees over `EC`.
    pub rotation_fallback: bool,
    /// Expansion cap for one rejoin search.
    pub search_budget: u64,
}

impl Default for Phase3Options {
    fn default() -> Self {
        Phase3Options {
            max_retries: 20,
            strict: false,
            guided_fallback: true,
            rotation_fallback: true,
            search_budget: 1_000_000,
        }
    }
}

/// Cycles cut at `m` broken non-`M0` arcs `(v_j, u_j)` into `m` segments.
#[derive(Clone, Debug)]
pub struct SegmentSystem {
    pub m_per_cycle: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
    /// `segments[j]` runs from `u_{phi[j]}` to `v_j`.
    pub phi: Vec<usize>,
    pub segments: Vec<Vec<usize>>,
}

impl SegmentSystem {
    pub fn m(&self) -> usize {
        self.arcs.len()
    }

    /// Whether `{v_i, u_{phi(j)}}` may join segment `i` to segment `j`.
    fn joinable(&self, i: usize, j: usize, ec: &HashSet<Edge>, m0: &Matching) -> bool {
        let v = self.arcs[i].0;
        let u = self.arcs[self.phi[j]].1;
        i != j && !m0.contains(u, v) && ec.contains(&edge(u, v))
    }

    /// Concatenates the segments in the cyclic order given by `rho`.
    pub fn assemble(&self, rho: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut j = 0;
        for _ in 0..self.m() {
            out.extend_from_slice(&self.segments[j]);
            j = rho[j];
        }
        out
    }
}

/// Picks `m_i = 2⌊c_i/a⌋ + 1` broken arcs per cycle uniformly among non-`M0`
/// arcs whose head is unused (all non-`M0` arcs if none qualifies), capped at
/// the largest odd count available.
pub fn segment_system<R: rand::Rng>(pi: &TwoFactor, used: &[bool], scale: usize, rng: &mut R) -> SegmentSystem {
    let scale = scale.max(1);
    let mut sys = SegmentSystem {
        m_per_cycle: Vec::new(),
        arcs: Vec::new(),
        phi: Vec::new(),
        segments: Vec::new(),
    };
    for c in &pi.cycles {
        let k = c.len();
        let non_m0: Vec<usize> = (0..k).filter(|&p| !pi.in_m0(c[p], c[(p + 1) % k])).collect();
        let mut eligible: Vec<usize> = non_m0.iter().copied().filter(|&p| !used[c[(p + 1) % k]]).collect();
        if eligible.is_empty() {
            eligible = non_m0;
        }
        let free = c.iter().filter(|&&v| !used[v]).count() / 2;
        let mut mi = 2 * (free / scale) + 1;
        let cap = if eligible.len() % 2 == 1 { eligible.len() } else { eligible.len() - 1 };
        mi = mi.min(cap);
        let mut picks: Vec<usize> = eligible.choose_multiple(rng, mi).copied().collect();
        picks.sort_unstable();
        let lead = (0..mi).min_by_key(|&t| c[picks[t]]).expect("at least one arc");
        picks.rotate_left(lead);
        let base = sys.arcs.len();
        for t in 0..mi {
            let p = picks[t];
            sys.arcs.push((c[p], c[(p + 1) % k]));
            sys.phi.push(base + (t + mi - 1) % mi);
            let start = (picks[(t + mi - 1) % mi] + 1) % k;
            let len = (p + k - start) % k + 1;
            sys.segments.push((0..len).map(|d| c[(start + d) % k]).collect());
        }
        sys.m_per_cycle.push(mi);
    }
    sys
}

pub fn is_cyclic(perm: &[usize]) -> bool {
    let m = perm.len();
    if m == 0 {
        return false;
    }
    let mut j = 0;
    for step in 1..=m {
        j = perm[j];
        if j == 0 {
            return step == m;
        }
    }
    false
}

/// `(phi ∘ rho)(i) = phi(rho(i))`.
pub fn compose(phi: &[usize], rho: &[usize]) -> Vec<usize> {
    rho.iter().map(|&j| phi[j]).collect()
}

/// `|{rho cyclic : phi ∘ rho cyclic}|` by enumerating all `(m-1)!` cyclic `rho`.
pub fn r_phi_count(phi: &[usize]) -> usize {
    let m = phi.len();
    let mut order: Vec<usize> = (1..m).collect();
    let mut count = 0;
    let mut rho = vec![0; m];
    permute(&mut order, 0, &mut |ord| {
        let mut prev = 0;
        for &j in ord {
            rho[prev] = j;
            prev = j;
        }
        rho[prev] = 0;
        if is_cyclic(&compose(phi, &rho)) {
            count += 1;
        }
    });
    count
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Searches for a cyclic `rho` whose join edges all lie in `ec`.
pub fn find_rejoin(
    sys: &SegmentSystem,
    ec: &HashSet<Edge>,
    m0: &Matching,
    strict: bool,
    budget: u64,
) -> Option<Vec<usize>> {
    let m = sys.m();
    let allowed: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| sys.joinable(i, j, ec, m0)).collect())
        .collect();
    let mut rho = vec![NONE; m];
    let mut visited = vec![false; m];
    visited[0] = true;
    let mut expanded = 0u64;
    if extend(0, 1, &allowed, &mut rho, &mut visited, &sys.phi, strict, &mut expanded, budget) {
        Some(rho)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    last: usize,
    depth: usize,
    allowed: &[Vec<usize>],
    rho: &mut [usize],
    visited: &mut [bool],
    phi: &[usize],
    strict: bool,
    expanded: &mut u64,
    budget: u64,
) -> bool {
    let m = rho.len();
    if depth == m {
        if !allowed[last].contains(&0) {
            return false;
        }
        rho[last] = 0;
        if !strict || is_cyclic(&compose(phi, rho)) {
            return true;
        }
        rho[last] = NONE;
        return false;
    }
    for &j in &allowed[last] {
        if visited[j] {
            continue;
        }
        *expanded += 1;
        if *expanded > budget {
            return false;
        }
        visited[j] = true;
        rho[last] = j;
        if extend(j, depth + 1, allowed, rho, visited, phi, strict, expanded, budget) {
            return true;
        }
        rho[last] = NONE;
        visited[j] = false;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase3Method {
    AlreadyHamiltonian,
    Segments { attempt: usize, m: usize },
    GuidedMerge { merges: usize },
    RotationMerge { merges: usize, rotations: usize },
}

#[derive(Clone, Debug)]
pub struct Phase3Success {
    pub cycle: Vec<usize>,
    pub method: Phase3Method,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase3Failure {
    pub attempts: usize,
    pub m: usize,
    /// Fraction of ordered segment pairs with a usable join edge, last attempt.
    pub connector_density: f64,
    pub cycles_left: usize,
}

/// Rejoins the cycles of `pi` through `EC`. The rotation fallback may also
/// draw on `spare` edges.
pub fn close_to_hamilton(
    pi: &TwoFactor,
    ec: &[Edge],
    spare: &[Edge],
    used: &[bool],
    s: &ParamSchedule,
    seed: u64,
    opts: &Phase3Options,
) -> Result<Phase3Success, Phase3Failure> {
    if pi.cycles.len() == 1 {
        return Ok(Phase3Success {
            cycle: pi.cycles[0].clone(),
            method: Phase3Method::AlreadyHamiltonian,
        });
    }
    let m0 = pi.m0.as_ref().expect("two-factor must carry M0");
    let ec_set: HashSet<Edge> = ec.iter().map(|&(u, v)| edge(u, v)).collect();
    let mut rng = rng_from(seed);
    let mut last_m = 0;
    let mut density = 0.0;
    for attempt in 1..=opts.max_retries {
        let sys = segment_system(pi, used, s.segment_scale, &mut rng);
        if let Some(rho) = find_rejoin(&sys, &ec_set, m0, opts.strict, opts.search_budget) {
            return Ok(Phase3Success {
                cycle: sys.assemble(&rho),
                method: Phase3Method::Segments { attempt, m: sys.m() },
            });
        }
        let m = sys.m();
        let links = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| sys.joinable(i, j, &ec_set, m0))
            .count();
        last_m = m;
        density = links as f64 / (m * (m - 1)) as f64;
    }
    let mut cycles_left = pi.cycles.len();
    let mut current = pi.clone();
    let mut merges = 0;
    if opts.guided_fallback {
        let (merged, count) = guided_merge(pi, m0, ec, &ec_set);
        merges = count;
        if merged.len() == 1 {
            return Ok(Phase3Success {
                cycle: merged.into_iter().next().expect("one cycle"),
                method: Phase3Method::GuidedMerge { merges },
            });
        }
        cycles_left = merged.len();
        current = TwoFactor {
            n: pi.n,
            cycles: merged,
            m0: pi.m0.clone(),
        };
    }
    if opts.rotation_fallback {
        let p2 = Phase2Options {
            reset_used_per_cycle: true,
            ..Default::default()
        };
        let supply: Vec<Edge> = ec.iter().chain(spare).copied().collect();
        match merge_cycles_by_rotation(&current, &supply, &vec![false; pi.n], s, &p2) {
            Ok(done) => {
                return Ok(Phase3Success {
                    cycle: done.factor.cycles[0].clone(),
                    method: Phase3Method::RotationMerge {
                        merges,
                        rotations: done.stats.eliminated,
                    },
                })
            }
            Err(f) => cycles_left -= f.stats.eliminated,
        }
    }
    Err(Phase3Failure {
        attempts: opts.max_retries,
        m: last_m,
        connector_density: density,
        cycles_left,
    })
}

/// Repeatedly joins two cycles through `EC` edges `{p, q}`, `{p', q'}` where
/// `p'`, `q'` are the non-`M0` cycle neighbours of `p`, `q`.
fn guided_merge(pi: &TwoFactor, m0: &Matching, ec: &[Edge], ec_set: &HashSet<Edge>) -> (Vec<Vec<usize>>, usize) {
    let n = pi.n;
    let mut other = pi.other_partner().expect("alternating two-factor");
    let mate = m0.mates();
    let mut cycles = pi.cycles.clone();
    let mut merges = 0;
    while cycles.len() > 1 {
        let mut id = vec![0; n];
        for (i, c) in cycles.iter().enumerate() {
            for &v in c {
                id[v] = i;
            }
        }
        let found = ec.iter().find(|&&(p, q)| {
            let (p2, q2) = (other[p], other[q]);
            id[p] != id[q] && !m0.contains(p, q) && !m0.contains(p2, q2) && ec_set.contains(&edge(p2, q2))
        });
        let Some(&(p, q)) = found else {
            break;
        };
        let (p2, q2) = (other[p], other[q]);
        other[p] = q;
        other[q] = p;
        other[p2] = q2;
        other[q2] = p2;
        merges += 1;
        cycles = walk_cycles(n, |v| mate[v], |v| other[v]);
    }
    (cycles, merges)
}
