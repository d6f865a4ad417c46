use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, ZebraError};
use crate::graph::{Matching, NONE};

/// Vertex-disjoint cycles covering `0..n`, optionally tagged with the matching `M0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoFactor {
    pub n: usize,
    pub cycles: Vec<Vec<usize>>,
    pub m0: Option<Matching>,
}

impl TwoFactor {
    pub fn new(n: usize, cycles: Vec<Vec<usize>>, m0: Option<Matching>) -> Result<Self> {
        let tf = TwoFactor { n, cycles, m0 };
        tf.validate()?;
        Ok(tf)
    }

    /// Checks that the cycles partition the vertex set and have length at least 3.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.n];
        for c in &self.cycles {
            if c.len() < 3 {
                return invalid(format!("cycle of length {} is not simple", c.len()));
            }
            for &v in c {
                if v >= self.n || seen[v] {
                    return invalid(format!("vertex {v} repeated or out of range"));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return invalid("cycles do not cover every vertex");
        }
        Ok(())
    }

    /// Whether the edge between consecutive cycle vertices `u`, `v` belongs to `M0`.
    pub fn in_m0(&self, u: usize, v: usize) -> bool {
        self.m0.as_ref().map_or(false, |m| m.contains(u, v))
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }

    /// Per-vertex cycle neighbours `(prev, next)`.
    pub fn neighbours(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(NONE, NONE); self.n];
        for c in &self.cycles {
            let k = c.len();
            for i in 0..k {
                out[c[i]] = (c[(i + k - 1) % k], c[(i + 1) % k]);
            }
        }
        out
    }

    /// For a factor containing `M0`, each vertex's cycle neighbour that is not its `M0` mate.
    pub fn other_partner(&self) -> Result<Vec<usize>> {
        let Some(m0) = &self.m0 else {
            return invalid("two-factor has no M0");
        };
        let nb = self.neighbours();
        let mut other = vec![NONE; self.n];
        for v in 0..self.n {
            let (a, b) = nb[v];
            let mate = m0.mate(v);
            other[v] = if mate == Some(a) {
                b
            } else if mate == Some(b) {
                a
            } else {
                return invalid(format!("vertex {v} does not use its M0 edge"));
            };
        }
        Ok(other)
    }

    /// Checks degree two everywhere and that cycles alternate `M0` and non-`M0` edges.
    pub fn is_alternating(&self) -> bool {
        self.cycles.iter().all(|c| {
            let k = c.len();
            k % 2 == 0
                && (0..k).all(|i| {
                    let a = self.in_m0(c[i], c[(i + 1) % k]);
                    let b = self.in_m0(c[(i + 1) % k], c[(i + 2) % k]);
                    a != b
                })
        })
    }
}

/// Cycle decomposition of `M0 ∪ M1`; each cycle starts at its least vertex with an `M0` edge.
pub fn union_two_factor(m0: &Matching, m1: &Matching) -> Result<TwoFactor> {
    let n = m0.n();
    if m1.n() != n || !m0.is_perfect() || !m1.is_perfect() {
        return invalid("union needs two perfect matchings on the same vertex set");
    }
    for (u, v) in m0.edges() {
        if m1.contains(u, v) {
            return Err(ZebraError::SharedEdge((u, v)));
        }
    }
    let cycles = walk_cycles(n, |v| m0.mates()[v], |v| m1.mates()[v]);
    Ok(TwoFactor {
        n,
        cycles,
        m0: Some(m0.clone()),
    })
}

/// Traces the cycles of the union of two perfect matchings given as mate maps.
pub(crate) fn walk_cycles(
    n: usize,
    first: impl Fn(usize) -> usize,
    second: impl Fn(usize) -> usize,
) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut v = s;
        let mut use_first = true;
        loop {
            seen[v] = true;
            cyc.push(v);
            v = if use_first { first(v) } else { second(v) };
            use_first = !use_first;
            if v == s {
                break;
            }
        }
        cycles.push(cyc);
    }
    cycles
}

/// Draws a uniform perfect matching disjoint from `m0` by rejection.
pub fn random_disjoint_matching(m0: &Matching, seed: u64) -> Result<(Matching, usize)> {
    let n = m0.n();
    if n < 4 {
        return invalid("no perfect matching disjoint from M0 exists below n = 4");
    }
    let mut attempts = 0usize;
    loop {
        let m1 = crate::process::random_perfect_matching(
            n,
            seed.wrapping_add((attempts as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        )?;
        attempts += 1;
        if m1.is_disjoint_from(m0) {
            return Ok((m1, attempts));
        }
    }
}
