#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use fourlines_core::format::parse;
use fourlines_core::rational::int;
use fourlines_core::search::{search, Mode, SearchConfig};
use fourlines_core::{certify, Status, VisibleGraph, WeightSystem};

pub const FIXTURES: [&str; 4] = ["p78", "p60", "p462a", "p48983"];

pub fn fixture(name: &str) -> VisibleGraph {
    let path: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fixtures",
        &format!("{name}.graph"),
    ]
    .iter()
    .collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse(&text).unwrap()
}

/// Every graph reachable by at most `budget` literal insertions on any
/// edge, certified from scratch. Identical graphs (same vertex coordinates)
/// reached along different insertion orders are expanded once; no
/// isomorphism reduction is applied. Returns, for each `k <= budget`, the
/// canonical forms of certified graphs with at most `k` blowups.
pub fn brute_force(weights: [i64; 4], boundary: bool, budget: usize) -> Vec<BTreeSet<String>> {
    let base = VisibleGraph::new_base(weights.map(int), boundary.then_some(0)).unwrap();
    let key = |g: &VisibleGraph| {
        let mut k: Vec<[u64; 4]> = g.vertices().iter().map(|v| v.coords).collect();
        k.sort();
        k
    };
    let mut level = vec![base];
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    for depth in 0..=budget {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            if certify(g, &WeightSystem::of(g)).status >= Status::BigNef {
                found.insert(g.canonical_form());
            }
            if depth == budget {
                continue;
            }
            for u in g.ids() {
                for &v in g.neighbors(u) {
                    if u < v {
                        let mut h = g.clone();
                        h.insert_in_place(u, v, format!("v{}", g.vertices().len())).unwrap();
                        if seen.insert(key(&h)) {
                            next.push(h);
                        }
                    }
                }
            }
        }
        out.push(found.clone());
        level = next;
    }
    out
}

/// A pool of distinct certified graphs from CY searches with a boundary.
pub fn certified_pool() -> Vec<VisibleGraph> {
    let mut out = Vec::new();
    for w in [
        [0, 1, 1, 1],
        [0, 0, 1, 1],
        [1, 1, 1, 2],
        [1, 1, 2, 3],
        [0, 1, 1, 2],
        [0, 1, 2, 3],
        [1, 1, 1, 1],
    ] {
        let mut c = SearchConfig::new(w.map(int), true, 13, Mode::CyStepUp);
        c.keep = usize::MAX;
        out.extend(search(&c).best.into_iter().map(|f| f.graph));
    }
    out
}

/// Determinant of the tridiagonal matrix with `marks` on the diagonal and
/// -1 beside it, by fraction-free elimination.
pub fn bareiss_chain_det(marks: &[i64]) -> i128 {
    let n = marks.len();
    if n == 0 {
        return 1;
    }
    let mut a = vec![vec![0i128; n]; n];
    for i in 0..n {
        a[i][i] = marks[i] as i128;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// All edges `(u, v)` with `u < v`, in a fixed order.
pub fn graph_edges(g: &VisibleGraph) -> Vec<(fourlines_core::VertexId, fourlines_core::VertexId)> {
    let mut out = Vec::new();
    for u in g.ids() {
        for &v in g.neighbors(u) {
            if u < v {
                out.push((u, v));
            }
        }
    }
    out.sort();
    out
}

/// Insert on edge `pick % #edges` for each pick in turn.
pub fn random_graph(weights: [i64; 4], boundary: Option<usize>, picks: &[usize]) -> VisibleGraph {
    let mut g = VisibleGraph::new_base(weights.map(int), boundary).unwrap();
    for (i, &p) in picks.iter().enumerate() {
        let edges = graph_edges(&g);
        let (u, v) = edges[p % edges.len()];
        g.insert_in_place(u, v, format!("X{i}")).unwrap();
    }
    g
}
