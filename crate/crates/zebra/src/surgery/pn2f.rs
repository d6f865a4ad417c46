use crate::error::{invalid, Result};
use crate::factor::{walk_cycles, TwoFactor};
use crate::graph::{Matching, NONE};

/// Proper near 2-factor: a 2-factor containing `M0` with one non-`M0` edge
/// removed, leaving a single `M0`-alternating path. `other[v]` is the non-`M0`
/// neighbour of `v`, `NONE` at the two path ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pn2f {
    other: Vec<usize>,
    /// `[fixed, moving]`; rotations act at the moving end.
    ends: [usize; 2],
}

/// Result of [`Pn2f::rotate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    Rotated { new_end: usize },
    /// `w` is the fixed end; adding `{v, w}` would close the path into a cycle.
    Closes,
}

/// Shape of the structure a rotation would produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationPreview {
    /// Edge count of the new path (of the closed cycle on closure).
    pub path_edges: usize,
    /// Edge count of the cycle split off the path, if any.
    pub new_cycle: Option<usize>,
    pub closes: bool,
}

impl Pn2f {
    /// Opens the 2-factor by deleting its non-`M0` edge `{fixed, moving}`.
    pub fn open(f: &TwoFactor, fixed: usize, moving: usize) -> Result<Pn2f> {
        let mut other = f.other_partner()?;
        if fixed >= f.n || moving >= f.n || other[fixed] != moving {
            return invalid(format!("{{{fixed}, {moving}}} is not a non-M0 edge of the two-factor"));
        }
        other[fixed] = NONE;
        other[moving] = NONE;
        Ok(Pn2f {
            other,
            ends: [fixed, moving],
        })
    }

    pub fn n(&self) -> usize {
        self.other.len()
    }

    pub fn fixed(&self) -> usize {
        self.ends[0]
    }

    pub fn moving(&self) -> usize {
        self.ends[1]
    }

    pub fn other(&self, v: usize) -> usize {
        self.other[v]
    }

    /// Same structure with the roles of the two ends swapped.
    pub fn reversed(&self) -> Pn2f {
        Pn2f {
            other: self.other.clone(),
            ends: [self.ends[1], self.ends[0]],
        }
    }

    /// Path vertices from the fixed end to the moving end.
    pub fn path(&self, m0: &Matching) -> Vec<usize> {
        let mate = m0.mates();
        let mut out = Vec::new();
        let mut v = self.fixed();
        loop {
            out.push(v);
            let m = mate[v];
            out.push(m);
            if m == self.moving() {
                return out;
            }
            v = self.other[m];
        }
    }

    /// Index of each vertex on the path, `NONE` off it.
    pub fn path_positions(&self, m0: &Matching) -> Vec<usize> {
        let mut pos = vec![NONE; self.n()];
        for (i, v) in self.path(m0).into_iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// The cycles off the path.
    pub fn cycles(&self, m0: &Matching) -> Vec<Vec<usize>> {
        let pos = self.path_positions(m0);
        let mate = m0.mates();
        let mut seen: Vec<bool> = pos.iter().map(|&p| p != NONE).collect();
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut v = s;
            let mut via_m0 = true;
            loop {
                seen[v] = true;
                cyc.push(v);
                v = if via_m0 { mate[v] } else { self.other[v] };
                via_m0 = !via_m0;
                if v == s {
                    break;
                }
            }
            out.push(cyc);
        }
        out
    }

    /// Audits the invariants: two distinct ends, `other` an involution avoiding
    /// `M0` elsewhere, and an alternating path with `M0` edges at both ends.
    pub fn check(&self, m0: &Matching) -> Result<()> {
        let n = self.n();
        let [a, b] = self.ends;
        if m0.n() != n || !m0.is_perfect() || a == b || a >= n || b >= n {
            return invalid("bad ends or matching");
        }
        for v in 0..n {
            let o = self.other[v];
            let is_end = v == a || v == b;
            if is_end != (o == NONE) {
                return invalid(format!("vertex {v} has the wrong end status"));
            }
            if o != NONE && (o >= n || self.other[o] != v || m0.contains(v, o) || o == v) {
                return invalid(format!("vertex {v} has a bad non-M0 partner"));
            }
        }
        let path = self.path(m0);
        if path.len() % 2 != 0 || !m0.contains(path[0], path[1]) || !m0.contains(path[path.len() - 2], path[path.len() - 1]) {
            return invalid("path does not start and end with M0 edges");
        }
        let on_path = path.len();
        let off: usize = self.cycles(m0).iter().map(|c| c.len()).sum();
        if on_path + off != n {
            return invalid("path revisits a vertex");
        }
        Ok(())
    }

    /// What adding `{moving, w}` and dropping `w`'s non-`M0` edge would produce.
    /// `pos` must come from [`Pn2f::path_positions`].
    pub fn preview(&self, m0: &Matching, w: usize, pos: &[usize]) -> RotationPreview {
        let v = self.moving();
        let path_edges = pos[v];
        let x = self.other[w];
        if x == NONE {
            return RotationPreview {
                path_edges: path_edges + 1,
                new_cycle: None,
                closes: true,
            };
        }
        if pos[w] != NONE {
            let i = pos[w];
            if pos[x] == i + 1 {
                RotationPreview {
                    path_edges,
                    new_cycle: None,
                    closes: false,
                }
            } else {
                RotationPreview {
                    path_edges: i - 1,
                    new_cycle: Some(path_edges - i + 1),
                    closes: false,
                }
            }
        } else {
            let cycle = self.cycle_len_through(m0, w);
            RotationPreview {
                path_edges: path_edges + cycle,
                new_cycle: None,
                closes: false,
            }
        }
    }

    fn cycle_len_through(&self, m0: &Matching, w: usize) -> usize {
        let mate = m0.mates();
        let mut len = 0;
        let mut v = w;
        loop {
            v = self.other[mate[v]];
            len += 2;
            if v == w {
                return len;
            }
        }
    }

    /// Adds `{moving, w}` and removes `{w, x}`, `x` the non-`M0` neighbour of `w`;
    /// `x` becomes the moving end.
    pub fn rotate(&mut self, m0: &Matching, w: usize) -> Result<Rotation> {
        let v = self.moving();
        if w >= self.n() || w == v || m0.contains(v, w) {
            return invalid(format!("{{{v}, {w}}} cannot rotate the path"));
        }
        let x = self.other[w];
        if x == NONE {
            return Ok(Rotation::Closes);
        }
        self.other[w] = v;
        self.other[v] = w;
        self.other[x] = NONE;
        self.ends[1] = x;
        Ok(Rotation::Rotated { new_end: x })
    }

    /// The 2-factor obtained by joining the two path ends.
    pub fn close(&self, m0: &Matching) -> Result<TwoFactor> {
        let [a, b] = self.ends;
        if m0.contains(a, b) {
            return invalid("closing edge is an M0 edge");
        }
        let mut other = self.other.clone();
        other[a] = b;
        other[b] = a;
        let mate = m0.mates();
        let cycles = walk_cycles(self.n(), |v| mate[v], |v| other[v]);
        TwoFactor::new(self.n(), cycles, Some(m0.clone()))
    }
}

/// Whether rotating at `w` keeps `x` and `w` out of `used`, leaves a path of at
/// least `nc` edges and creates no cycle shorter than `nc`.
pub fn acceptable(gamma: &Pn2f, m0: &Matching, w: usize, used: &[bool], nc: usize) -> bool {
    let pos = gamma.path_positions(m0);
    acceptable_at(gamma, m0, w, used, nc, &pos)
}

pub(crate) fn acceptable_at(gamma: &Pn2f, m0: &Matching, w: usize, used: &[bool], nc: usize, pos: &[usize]) -> bool {
    let v = gamma.moving();
    if w == v || m0.contains(v, w) || used[w] {
        return false;
    }
    let x = gamma.other(w);
    if x == NONE || used[x] {
        return false;
    }
    let n = gamma.n();
    let p = gamma.preview(m0, w, pos);
    p.path_edges >= nc.min(n - 1) && p.new_cycle.map_or(true, |c| c >= nc.min(n))
}
