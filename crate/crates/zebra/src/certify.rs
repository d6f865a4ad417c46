use serde::{Deserialize, Serialize};

use crate::graph::{ColoredGraph, Graph, Matching};

/// Graph a cycle is checked against. `M0` edges count as present.
#[derive(Clone, Copy, Debug)]
pub enum Host<'a> {
    Plain(&'a Graph),
    Colored(&'a ColoredGraph),
}

impl Host<'_> {
    fn n(&self) -> usize {
        match self {
            Host::Plain(g) => g.n(),
            Host::Colored(g) => g.n(),
        }
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        match self {
            Host::Plain(g) => g.has_edge(u, v),
            Host::Colored(g) => g.color(u, v).is_some(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub cycle: Vec<usize>,
    pub is_hamiltonian: bool,
    pub contains_m0: Option<bool>,
    pub zebraic2: Option<bool>,
    /// `(r, holds)` when an r-periodic color pattern was requested.
    pub r_pattern: Option<(usize, bool)>,
}

impl CycleCertificate {
    /// All requested checks hold.
    pub fn passed(&self) -> bool {
        self.is_hamiltonian
            && self.contains_m0.unwrap_or(true)
            && self.zebraic2.unwrap_or(true)
            && self.r_pattern.map_or(true, |(_, ok)| ok)
    }
}

/// Which properties to verify besides Hamiltonicity.
#[derive(Clone, Copy, Debug, Default)]
pub struct Checks<'a> {
    pub m0: Option<&'a Matching>,
    pub zebraic2: bool,
    pub r_pattern: Option<usize>,
}

/// Verifies a cyclic vertex order. Color checks fail on an uncolored host.
pub fn certify(cycle: &[usize], host: Host<'_>, checks: Checks<'_>) -> CycleCertificate {
    let n = host.n();
    let k = cycle.len();
    let mut seen = vec![false; n];
    let mut ham = k == n && n >= 3;
    if ham {
        for &v in cycle {
            if v >= n || seen[v] {
                ham = false;
                break;
            }
            seen[v] = true;
        }
    }
    if ham {
        ham = (0..k).all(|i| {
            let (u, v) = (cycle[i], cycle[(i + 1) % k]);
            host.has_edge(u, v) || checks.m0.map_or(false, |m| m.contains(u, v))
        });
    }
    let contains_m0 = checks.m0.map(|m| {
        ham && m.n() == n
            && m.is_perfect()
            && (0..k).all(|i| {
                let v = cycle[i];
                let mate = m.mates()[v];
                mate == cycle[(i + 1) % k] || mate == cycle[(i + k - 1) % k]
            })
    });
    let colors = edge_colors(cycle, host);
    let zebraic2 = checks.zebraic2.then(|| {
        ham && matches!(host, Host::Colored(g) if g.r() == 2)
            && colors.as_ref().map_or(false, |cs| {
                k % 2 == 0 && (0..k).all(|i| cs[i] != cs[(i + 1) % k])
            })
    });
    let r_pattern = checks.r_pattern.map(|r| {
        let ok = ham && colors.as_ref().map_or(false, |cs| has_r_pattern(cs, r));
        (r, ok)
    });
    CycleCertificate {
        cycle: cycle.to_vec(),
        is_hamiltonian: ham,
        contains_m0,
        zebraic2,
        r_pattern,
    }
}

fn edge_colors(cycle: &[usize], host: Host<'_>) -> Option<Vec<usize>> {
    let Host::Colored(g) = host else {
        return None;
    };
    let k = cycle.len();
    (0..k).map(|i| g.color(cycle[i], cycle[(i + 1) % k])).collect()
}

/// Whether the cyclic color sequence reads `c, c+1, ..., r, 1, 2, ...` in either direction.
pub fn has_r_pattern(colors: &[usize], r: usize) -> bool {
    let k = colors.len();
    if r == 0 || k == 0 || k % r != 0 {
        return false;
    }
    let forward = |cs: &dyn Fn(usize) -> usize| {
        (0..r).any(|off| (0..k).all(|i| cs(i) == (i + off) % r + 1))
    };
    forward(&|i| colors[i]) || forward(&|i| colors[k - 1 - i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn colored(n: usize, r: usize, es: &[(Edge, usize)]) -> ColoredGraph {
        ColoredGraph::from_edges(n, r, es.iter().copied())
    }

    #[test]
    fn contains_m0_on_four_cycle() {
        let g = Graph::from_edges(4, [(0, 2), (1, 3)]);
        let m0 = Matching::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let cert = certify(&[0, 1, 3, 2], Host::Plain(&g), Checks { m0: Some(&m0), ..Default::default() });
        assert!(cert.passed());
        assert_eq!(cert.contains_m0, Some(true));
        let bad = certify(&[0, 2, 1, 3], Host::Plain(&g), Checks { m0: Some(&m0), ..Default::default() });
        assert!(!bad.passed());
    }

    #[test]
    fn zebraic_four_cycle() {
        let g = colored(4, 2, &[((0, 1), 1), ((1, 2), 2), ((2, 3), 1), ((0, 3), 2)]);
        let cert = certify(&[0, 1, 2, 3], Host::Colored(&g), Checks { zebraic2: true, ..Default::default() });
        assert_eq!(cert.zebraic2, Some(true));
        let g2 = colored(4, 2, &[((0, 1), 1), ((1, 2), 1), ((2, 3), 2), ((0, 3), 2)]);
        let cert = certify(&[0, 1, 2, 3], Host::Colored(&g2), Checks { zebraic2: true, ..Default::default() });
        assert!(!cert.passed());
    }

    #[test]
    fn three_pattern_six_cycle() {
        let es = [((0, 1), 1), ((1, 2), 2), ((2, 3), 3), ((3, 4), 1), ((4, 5), 2), ((0, 5), 3)];
        let g = colored(6, 3, &es);
        let cert = certify(&[0, 1, 2, 3, 4, 5], Host::Colored(&g), Checks { r_pattern: Some(3), ..Default::default() });
        assert_eq!(cert.r_pattern, Some((3, true)));
        let rev = certify(&[5, 4, 3, 2, 1, 0], Host::Colored(&g), Checks { r_pattern: Some(3), ..Default::default() });
        assert!(rev.passed());
    }

    #[test]
    fn pattern_rejects_wrong_order() {
        assert!(has_r_pattern(&[2, 3, 1, 2, 3, 1], 3));
        assert!(has_r_pattern(&[3, 2, 1, 3, 2, 1], 3));
        assert!(!has_r_pattern(&[1, 3, 2, 1, 2, 3], 3));
        assert!(!has_r_pattern(&[1, 2, 3, 1], 3));
    }

    #[test]
    fn non_hamiltonian_fails_closed() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 2)]);
        assert!(!certify(&[0, 1, 2], Host::Plain(&g), Checks::default()).passed());
    }
}
