use proptest::prelude::*;
use zebra::matching::{
    build_phase1_workspace, gallai_edmonds, is_deficient, maximum_matching, phase1_matching, surplus_set,
    IncrementalMatching, Label,
};
use zebra::oracle::enumerate_maximum_matchings;
use zebra::process::{random_perfect_matching, sample_process, ProcessModel};
use zebra::schedule::{build_schedule, parse_overrides};
use zebra::{edge, Edge, Graph, Matching};

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> (bit % 64) & 1 == 1 && bit < 64 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges)
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, any::<u64>(), 0u32..4).prop_map(|(n, mask, thin)| {
        // Sparser graphs by and-ing extra random words in.
        let mut m = mask;
        for k in 0..thin {
            m &= mask.rotate_left(7 * (k + 1));
        }
        graph_from_mask(n, m)
    })
}

/// Every matching of `edges[from..]` extending `chosen`, reported as sorted edge lists.
fn all_matchings(edges: &[Edge], from: usize, covered: &mut Vec<bool>, chosen: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
    out.push(chosen.clone());
    for i in from..edges.len() {
        let (u, v) = edges[i];
        if covered[u] || covered[v] {
            continue;
        }
        covered[u] = true;
        covered[v] = true;
        chosen.push((u, v));
        all_matchings(edges, i + 1, covered, chosen, out);
        chosen.pop();
        covered[u] = false;
        covered[v] = false;
    }
}

fn brute_maximum_matchings(g: &Graph) -> Vec<Vec<Edge>> {
    let mut all = Vec::new();
    all_matchings(&g.edges(), 0, &mut vec![false; g.n()], &mut Vec::new(), &mut all);
    let best = all.iter().map(Vec::len).max().unwrap_or(0);
    all.retain(|m| m.len() == best);
    all
}

/// `w != v` such that some maximum matching leaves both `v` and `w` exposed.
fn surplus_by_definition(g: &Graph, v: usize) -> Vec<usize> {
    let mut out = vec![false; g.n()];
    for m in brute_maximum_matchings(g) {
        let mut covered = vec![false; g.n()];
        for (a, b) in m {
            covered[a] = true;
            covered[b] = true;
        }
        if covered[v] {
            continue;
        }
        for w in 0..g.n() {
            if w != v && !covered[w] {
                out[w] = true;
            }
        }
    }
    (0..g.n()).filter(|&w| out[w]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn maximum_matching_is_optimal(g in arb_graph(10)) {
        let m = maximum_matching(&g);
        prop_assert!(m.is_matching_of(&g));
        let best = brute_maximum_matchings(&g)[0].len();
        prop_assert_eq!(m.size(), best);
    }

    #[test]
    fn surplus_set_matches_definition(g in arb_graph(10), pick in any::<usize>()) {
        let m = maximum_matching(&g);
        let exposed = m.exposed();
        prop_assume!(!exposed.is_empty());
        let v = exposed[pick % exposed.len()];
        let a = surplus_set(&g, &m, v).unwrap();
        prop_assert_eq!(&a, &surplus_by_definition(&g, v));
        if !a.is_empty() {
            prop_assert!(is_deficient(&g, &a), "|N(A)| >= |A| for A = {:?}", a);
        }
    }

    #[test]
    fn incremental_tracks_fresh_matching(n in 2usize..=12, order in any::<u64>(), keep in 0.1f64..0.9) {
        let mut rng_state = order;
        let mut pairs: Vec<Edge> = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if ((rng_state >> 33) as f64 / (1u64 << 31) as f64) < keep {
                    pairs.push((u, v));
                }
            }
        }
        let k = pairs.len();
        for i in (1..k).rev() {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            pairs.swap(i, (rng_state >> 33) as usize % (i + 1));
        }
        let mut inc = IncrementalMatching::new(&Graph::new(n), None);
        let mut g = Graph::new(n);
        for &(u, v) in &pairs {
            inc.add_edge(u, v);
            g.add_edge(u, v);
            let fresh = maximum_matching(&g);
            prop_assert_eq!(inc.size(), fresh.size());
            prop_assert!(inc.matching().is_matching_of(&g));
            let (_, labels) = gallai_edmonds(&g);
            let inc_labels = inc.labels();
            for w in 0..n {
                prop_assert_eq!(labels[w] == Label::Even, inc_labels[w] == Label::Even, "vertex {}", w);
                prop_assert_eq!(labels[w] == Label::Odd, inc_labels[w] == Label::Odd, "vertex {}", w);
            }
        }
    }
}

#[test]
fn library_enumeration_agrees_with_brute_force() {
    let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
    assert_eq!(enumerate_maximum_matchings(&k4).unwrap().len(), 3);
    let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
    assert_eq!(enumerate_maximum_matchings(&star).unwrap().len(), 3);
    let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]);
    let ms = enumerate_maximum_matchings(&p3).unwrap();
    assert_eq!(ms.len(), 2);
    for mask in [0x1234_5678_9abc_def0u64, 0xffff_0000_ffff, 0x0f0f_0f0f_0f0f] {
        let g = graph_from_mask(8, mask);
        let mut lib: Vec<Vec<Edge>> = enumerate_maximum_matchings(&g).unwrap().iter().map(Matching::edges).collect();
        let mut brute: Vec<Vec<Edge>> = brute_maximum_matchings(&g)
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m
            })
            .collect();
        lib.sort();
        brute.sort();
        assert_eq!(lib, brute);
    }
}

#[test]
fn star_surplus_example() {
    let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
    let m = Matching::from_edges(4, [(0, 2)]).unwrap();
    let a = surplus_set(&g, &m, 1).unwrap();
    assert_eq!(a, surplus_by_definition(&g, 1));
    assert!(is_deficient(&g, &a));
}

#[test]
fn phase1_on_random_trace_is_disjoint_and_perfect() {
    let n = 20;
    let m0 = random_perfect_matching(n, 5).unwrap();
    let trace = sample_process(n, ProcessModel::UniformExcludingM0, Some(&m0), 11, None).unwrap();
    let o = parse_overrides(&["t2=40", "t3=80", "t4=120", "t0=150", "t1=180", "L0=2"]).unwrap();
    let s = build_schedule(n, &o).unwrap();
    let ws = build_phase1_workspace(&trace, &s).unwrap();
    let in_v0 = ws.in_v0();
    assert!(ws.ea.iter().all(|&(u, v)| !in_v0[u] && !in_v0[v] && !ws.psi1.has_edge(u, v)));
    let ok = phase1_matching(&ws, &m0, 3).unwrap();
    assert!(ok.m1.is_perfect());
    assert!(ok.m1.is_disjoint_from(&m0));
    let mut allowed = ws.psi1.clone();
    for &(u, v) in &ws.ea {
        allowed.add_edge(u, v);
    }
    assert!(ok.m1.edges().iter().all(|&(u, v)| allowed.has_edge(u, v)));
    assert_eq!(ok.m1.edges().iter().filter(|&&(u, v)| u == v).count(), 0);
    let _ = edge(0, 1);
}
