use proptest::prelude::*;
use zebra::oracle::{exact_hamilton, Constraint, ExactQuery, QueryGraph};
use zebra::process::{color_process, random_perfect_matching, sample_process, snapshot, snapshot_colored, ProcessModel};
use zebra::schedule::{build_schedule, desk_overrides};
use zebra::surgery::PipelineOptions;
use zebra::zebraic::{
    exact_tau_pair, zebraic_connected, zebraic_frontiers, zebraic_hamilton, zebraic_reachable, TauMode, BLACK, WHITE,
};
use zebra::ColoredGraph;

/// `(y, c)` reachable from `x` by a simple alternating path whose last edge has color `c`.
fn paths_by_enumeration(g: &ColoredGraph, x: usize) -> Vec<[bool; 2]> {
    let n = g.n();
    let mut out = vec![[false; 2]; n];
    let mut on = vec![false; n];
    fn go(g: &ColoredGraph, v: usize, last: usize, on: &mut [bool], out: &mut [[bool; 2]]) {
        for &(w, c) in g.neighbors(v) {
            if on[w] || c == last {
                continue;
            }
            out[w][c - 1] = true;
            on[w] = true;
            go(g, w, c, on, out);
            on[w] = false;
        }
    }
    on[x] = true;
    go(g, x, 0, &mut on, &mut out);
    out
}

fn two_colored(n: usize, bits: &[u8]) -> ColoredGraph {
    let mut g = ColoredGraph::new(n, 2);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            let c = bits[k % bits.len()] as usize % 3;
            k += 1;
            if c > 0 {
                g.add_edge(u, v, c);
            }
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn reachability_equals_path_enumeration(n in 2usize..=8, bits in prop::collection::vec(any::<u8>(), 28), x in any::<usize>()) {
        let g = two_colored(n, &bits);
        let x = x % n;
        let reach = zebraic_reachable(&g, x, None).unwrap();
        let truth = paths_by_enumeration(&g, x);
        for y in 0..n {
            if y == x {
                continue;
            }
            for c in [BLACK, WHITE] {
                prop_assert_eq!(reach.contains(y, c), truth[y][c - 1], "y = {}, color {}", y, c);
            }
        }
        // Walk layers over-approximate paths.
        let walked: Vec<(usize, usize)> = zebraic_frontiers(&g, x, None).unwrap().concat().iter().map(|s| (s.vertex, s.last_color)).collect();
        for y in 0..n {
            for c in [BLACK, WHITE] {
                if y != x && truth[y][c - 1] {
                    prop_assert!(walked.contains(&(y, c)));
                }
            }
        }
    }

    #[test]
    fn connectivity_equals_enumeration(n in 2usize..=7, bits in prop::collection::vec(any::<u8>(), 21)) {
        let g = two_colored(n, &bits);
        let truth = (0..n).all(|x| {
            let t = paths_by_enumeration(&g, x);
            (0..n).all(|y| y == x || t[y][0] || t[y][1])
        });
        let got = zebraic_connected(&g).unwrap();
        prop_assert_eq!(got.connected, truth);
        if let Some((x, y)) = got.witness {
            let t = paths_by_enumeration(&g, x);
            prop_assert!(!t[y][0] && !t[y][1]);
        }
    }
}

/// First prefix length whose snapshot has the structure, by asking the oracle at every step.
fn first_structured(
    trace: &zebra::process::ProcessTrace,
    zebraic: bool,
    m0: Option<&zebra::Matching>,
) -> Option<usize> {
    (1..=trace.len()).find(|&m| {
        let (graph, constraint) = if zebraic {
            (QueryGraph::Colored(snapshot_colored(trace, m).unwrap()), Constraint::Zebraic2)
        } else {
            (QueryGraph::Plain(snapshot(trace, m).unwrap()), Constraint::WithMatching(m0.unwrap().clone()))
        };
        exact_hamilton(&ExactQuery::new(graph, constraint)).unwrap().cycle().is_some()
    })
}

#[test]
fn tau_pairs_match_stepwise_oracle() {
    for seed in 0..25u64 {
        let n = 8;
        let m0 = random_perfect_matching(n, seed).unwrap();
        let trace = sample_process(n, ProcessModel::UniformExcludingM0, Some(&m0), seed, None).unwrap();
        let t = exact_tau_pair(&trace, TauMode::ThroughMatching(&m0), 100_000_000, true).unwrap();
        assert!(!t.censored);
        assert_eq!(t.m_struct, first_structured(&trace, false, Some(&m0)), "seed {seed}");
        assert_eq!(t.below_has_cycle, Some(false));
        assert!(t.m_deg.unwrap() <= t.m_struct.unwrap());

        let plain = sample_process(n, ProcessModel::UniformWithoutReplacement, None, seed, None).unwrap();
        let colored = color_process(&plain, 2, seed ^ 77, false).unwrap();
        let z = exact_tau_pair(&colored, TauMode::Zebraic, 100_000_000, true).unwrap();
        assert_eq!(z.m_struct, first_structured(&colored, true, None), "seed {seed}");
        if let (Some(a), Some(b)) = (z.m_deg, z.m_struct) {
            assert!(a <= b);
        }
    }
}

#[test]
fn recolored_repeats_rejected() {
    let plain = sample_process(8, ProcessModel::WithReplacement, None, 3, Some(200)).unwrap();
    let colored = color_process(&plain, 2, 4, true).unwrap();
    assert!(!colored.repeated.is_empty());
    assert!(exact_tau_pair(&colored, TauMode::Zebraic, 1000, false).is_err());
}

#[test]
fn alternating_hamilton_on_random_graph() {
    let n = 2000;
    let len = (n as f64 / 2.0 * ((n as f64).ln() + 5.0)) as usize;
    let plain = sample_process(n, ProcessModel::UniformWithoutReplacement, None, 9, Some(2 * len)).unwrap();
    let colored = color_process(&plain, 2, 10, false).unwrap();
    let g = snapshot_colored(&colored, 2 * len).unwrap();
    let white = g.edges().iter().filter(|&&(_, c)| c == WHITE).count();
    let s = build_schedule(n, &desk_overrides(n, white)).unwrap();
    let mut opts = PipelineOptions::default();
    opts.phase2.reset_used_per_cycle = true;
    let mut wins = 0;
    for seed in 0..3 {
        if let Ok(ok) = zebraic_hamilton(&g, &s, seed, &opts) {
            assert!(ok.certificate.passed());
            assert_eq!(ok.certificate.zebraic2, Some(true));
            wins += 1;
        }
    }
    assert!(wins >= 1);
}
