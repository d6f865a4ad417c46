use std::collections::VecDeque;

use crate::graph::NONE;

/// Maximum matching of a bipartite graph with `adj[l]` listing right neighbours of left vertex `l`.
/// Returns `(match_left, match_right)` with `NONE` for exposed vertices.
pub fn hopcroft_karp(right: usize, adj: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let left = adj.len();
    let mut ml = vec![NONE; left];
    let mut mr = vec![NONE; right];
    let mut dist = vec![usize::MAX; left];
    loop {
        let mut queue = VecDeque::new();
        for l in 0..left {
            if ml[l] == NONE {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                let next = mr[r];
                if next == NONE {
                    found = true;
                } else if dist[next] == usize::MAX {
                    dist[next] = dist[l] + 1;
                    queue.push_back(next);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; left];
        for l in 0..left {
            if ml[l] == NONE {
                augment(l, adj, &mut ml, &mut mr, &mut dist, &mut it);
            }
        }
    }
    (ml, mr)
}

fn augment(
    start: usize,
    adj: &[Vec<usize>],
    ml: &mut [usize],
    mr: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    // Iterative layered DFS to stay safe on long augmenting paths.
    let mut stack = vec![start];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&l) = stack.last() {
        if it[l] < adj[l].len() {
            let r = adj[l][it[l]];
            it[l] += 1;
            let next = mr[r];
            if next == NONE {
                via.push(r);
                for (i, &lv) in stack.iter().enumerate() {
                    let rv = via[i];
                    ml[lv] = rv;
                    mr[rv] = lv;
                }
                return true;
            }
            if dist[next] == dist[l] + 1 {
                via.push(r);
                stack.push(next);
            }
        } else {
            dist[l] = usize::MAX;
            stack.pop();
            via.pop();
        }
    }
    false
}

/// For an exposed left vertex, the left set reachable by alternating paths;
/// its neighbourhood is one smaller than itself (Hall violator).
pub fn hall_violator(adj: &[Vec<usize>], ml: &[usize], mr: &[usize], exposed: usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; mr.len()];
    let mut queue = VecDeque::from([exposed]);
    seen_l[exposed] = true;
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if !seen_r[r] {
                seen_r[r] = true;
                let next = mr[r];
                if next != NONE && !seen_l[next] {
                    seen_l[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    debug_assert!(ml[exposed] == NONE);
    let s: Vec<usize> = (0..adj.len()).filter(|&l| seen_l[l]).collect();
    let t: Vec<usize> = (0..mr.len()).filter(|&r| seen_r[r]).collect();
    (s, t)
}
