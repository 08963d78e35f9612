//! Brute-force oracles shared by the integration and acceptance suites.
//! These stay independent of the library's checker and algorithm paths.

use lcl_core::graph::Graph;
use lcl_core::problems::{Labeling, LclProblem};

/// Backtracking proper-coloring search over raw edges.
pub fn colorable(g: &Graph, k: usize) -> bool {
    fn go(g: &Graph, k: usize, colors: &mut Vec<usize>, v: usize) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 1..=k {
            if g.neighbors(v).iter().all(|&u| colors[u] != c) {
                colors[v] = c;
                if go(g, k, colors, v + 1) {
                    return true;
                }
                colors[v] = 0;
            }
        }
        false
    }
    go(g, k, &mut vec![0; g.n()], 0)
}

/// Least k for which a proper k-coloring exists.
pub fn chromatic_number(g: &Graph) -> usize {
    (1..).find(|&k| colorable(g, k)).unwrap()
}

/// Perfect-matching existence by direct pairing search.
pub fn matchable(g: &Graph) -> bool {
    fn go(g: &Graph, matched: &mut Vec<bool>) -> bool {
        let Some(v) = matched.iter().position(|&m| !m) else {
            return true;
        };
        matched[v] = true;
        for &u in g.neighbors(v) {
            if !matched[u] {
                matched[u] = true;
                if go(g, matched) {
                    return true;
                }
                matched[u] = false;
            }
        }
        matched[v] = false;
        false
    }
    go(g, &mut vec![false; g.n()])
}

/// Exhaustive solvability through the library checker.
pub fn solvable_by_check(problem: &LclProblem, g: &Graph) -> bool {
    let alphabet = problem.alphabet().to_vec();
    let n = g.n();
    let mut idx = vec![0usize; n];
    loop {
        let labeling = Labeling::new(idx.iter().map(|&i| alphabet[i]).collect());
        if problem.check(g, &labeling).unwrap().is_empty() {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == n {
                return false;
            }
            idx[pos] += 1;
            if idx[pos] < alphabet.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// All labeled graphs on exactly `n` vertices, optionally degree-capped.
pub fn graphs_on(n: usize, max_deg: Option<usize>) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        if max_deg.is_none_or(|d| g.degree_bound() <= d) {
            out.push(g);
        }
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    g.bfs_distances(0, usize::MAX)
        .iter()
        .all(|&d| d != usize::MAX)
}
