use proptest::prelude::*;
use zebra::certify::{certify, Checks, Host};
use zebra::oracle::{exact_hamilton, Constraint, ExactOutcome, ExactQuery, QueryGraph};
use zebra::process::random_perfect_matching;
use zebra::{ColoredGraph, Graph, Matching};

/// Calls `f` on every cyclic order starting at vertex 0.
fn each_cycle(n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(order: &mut Vec<usize>, used: &mut [bool], n: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if order.len() == n {
            return f(order);
        }
        for v in 1..n {
            if !used[v] {
                used[v] = true;
                order.push(v);
                if go(order, used, n, f) {
                    return true;
                }
                order.pop();
                used[v] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, n, f)
}

fn brute(g: &ColoredGraph, constraint: &Constraint) -> bool {
    let n = g.n();
    if n < 3 {
        return false;
    }
    each_cycle(n, &mut |c: &[usize]| {
        let pairs: Vec<(usize, usize)> = (0..n).map(|i| (c[i], c[(i + 1) % n])).collect();
        match constraint {
            Constraint::None => pairs.iter().all(|&(a, b)| g.color(a, b).is_some()),
            Constraint::WithMatching(m0) => {
                pairs.iter().all(|&(a, b)| g.color(a, b).is_some() || m0.contains(a, b))
                    && (0..n).all(|v| {
                        let i = c.iter().position(|&x| x == v).unwrap();
                        let mate = m0.mate(v).unwrap();
                        c[(i + 1) % n] == mate || c[(i + n - 1) % n] == mate
                    })
            }
            Constraint::Zebraic2 => {
                let cols: Option<Vec<usize>> = pairs.iter().map(|&(a, b)| g.color(a, b)).collect();
                cols.map_or(false, |cs| (0..n).all(|i| cs[i] != cs[(i + 1) % n]))
            }
            Constraint::RPattern(r) => {
                let cols: Option<Vec<usize>> = pairs.iter().map(|&(a, b)| g.color(a, b)).collect();
                cols.map_or(false, |cs| (0..*r).any(|o| (0..n).all(|i| cs[i] == (i + o) % r + 1)))
            }
        }
    })
}

fn colored_from_bits(n: usize, r: usize, bits: &[u8]) -> ColoredGraph {
    let mut g = ColoredGraph::new(n, r);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            let b = bits[k % bits.len()] as usize;
            k += 1;
            // Colors 1..=r, or absent.
            let c = b % (r + 1);
            if c > 0 {
                g.add_edge(u, v, c);
            }
        }
    }
    g
}

fn plain(g: &ColoredGraph) -> Graph {
    g.uncolored()
}

fn ask(graph: QueryGraph, constraint: Constraint) -> ExactOutcome {
    exact_hamilton(&ExactQuery::new(graph, constraint)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn plain_hamiltonicity(n in 3usize..=8, bits in prop::collection::vec(any::<u8>(), 28)) {
        let g = colored_from_bits(n, 1, &bits);
        let out = ask(QueryGraph::Plain(plain(&g)), Constraint::None);
        prop_assert_eq!(out.cycle().is_some(), brute(&g, &Constraint::None));
        if let Some(c) = out.cycle() {
            prop_assert!(certify(c, Host::Plain(&plain(&g)), Checks::default()).passed());
        }
    }

    #[test]
    fn through_matching(half in 2usize..=4, seed in any::<u64>(), bits in prop::collection::vec(any::<u8>(), 28)) {
        let n = 2 * half;
        let g = colored_from_bits(n, 1, &bits);
        let m0 = random_perfect_matching(n, seed).unwrap();
        let out = ask(QueryGraph::Plain(plain(&g)), Constraint::WithMatching(m0.clone()));
        prop_assert_eq!(out.cycle().is_some(), brute(&g, &Constraint::WithMatching(m0.clone())));
        if let Some(c) = out.cycle() {
            let cert = certify(c, Host::Plain(&plain(&g)), Checks { m0: Some(&m0), ..Default::default() });
            prop_assert!(cert.passed());
        }
    }

    #[test]
    fn zebraic_two_colors(half in 2usize..=4, bits in prop::collection::vec(any::<u8>(), 28)) {
        let g = colored_from_bits(2 * half, 2, &bits);
        let out = ask(QueryGraph::Colored(g.clone()), Constraint::Zebraic2);
        prop_assert_eq!(out.cycle().is_some(), brute(&g, &Constraint::Zebraic2));
        if let Some(c) = out.cycle() {
            let checks = Checks { zebraic2: true, ..Default::default() };
            prop_assert!(certify(c, Host::Colored(&g), checks).passed());
        }
    }

    #[test]
    fn r_pattern_six_vertices(r in 2usize..=3, bits in prop::collection::vec(any::<u8>(), 15)) {
        let g = colored_from_bits(6, r, &bits);
        let out = ask(QueryGraph::Colored(g.clone()), Constraint::RPattern(r));
        prop_assert_eq!(out.cycle().is_some(), brute(&g, &Constraint::RPattern(r)));
        if let Some(c) = out.cycle() {
            let checks = Checks { r_pattern: Some(r), ..Default::default() };
            prop_assert!(certify(c, Host::Colored(&g), checks).passed());
        }
    }

    #[test]
    fn adding_an_edge_keeps_a_cycle(n in 4usize..=8, bits in prop::collection::vec(any::<u8>(), 28), extra in any::<(usize, usize)>()) {
        let g = plain(&colored_from_bits(n, 1, &bits));
        let before = ask(QueryGraph::Plain(g.clone()), Constraint::None).cycle().is_some();
        let (u, v) = (extra.0 % n, extra.1 % n);
        prop_assume!(u != v);
        let mut h = g.clone();
        h.add_edge(u, v);
        let after = ask(QueryGraph::Plain(h), Constraint::None).cycle().is_some();
        prop_assert!(!before || after);
    }
}

#[test]
fn four_vertex_examples() {
    let m0 = Matching::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    let g = Graph::from_edges(4, [(0, 2), (1, 3)]);
    let out = ask(QueryGraph::Plain(g), Constraint::WithMatching(m0.clone()));
    let c = out.cycle().unwrap().to_vec();
    assert_eq!(c.len(), 4);
    let lone = Graph::from_edges(4, [(0, 2)]);
    assert_eq!(ask(QueryGraph::Plain(lone), Constraint::WithMatching(m0)), ExactOutcome::NoCycle);
}

#[test]
fn budget_exceeded_is_not_no_cycle() {
    let n = 14;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (u + v) % 3 != 0 {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges);
    let mut q = ExactQuery::new(QueryGraph::Plain(g), Constraint::None);
    q.budget = 3;
    assert!(matches!(exact_hamilton(&q).unwrap(), ExactOutcome::BudgetExceeded { .. }));
}
