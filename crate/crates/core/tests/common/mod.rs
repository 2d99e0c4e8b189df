//! Independent oracles shared by the integration tests and the acceptance
//! suite. Nothing here calls the solver it is meant to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gh_steiner::{MetricSpace, PointCloud, TreeTopology};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn space(rows: Vec<Vec<f64>>) -> MetricSpace<f64> {
    let labels = (0..rows.len()).map(|i| format!("p{i}")).collect();
    MetricSpace::new(labels, rows).unwrap()
}

pub fn triangle(a: f64, b: f64, c: f64) -> MetricSpace<f64> {
    space(vec![vec![0.0, a, b], vec![a, 0.0, c], vec![b, c, 0.0]])
}

/// Ten fixed spaces with at most three points. Every value is a dyadic
/// rational so floating-point comparisons below are exact.
pub fn corpus() -> Vec<MetricSpace<f64>> {
    vec![
        space(vec![vec![0.0]]),
        space(vec![vec![0.0, 1.0], vec![1.0, 0.0]]),
        space(vec![vec![0.0, 2.0], vec![2.0, 0.0]]),
        space(vec![vec![0.0, 3.5], vec![3.5, 0.0]]),
        triangle(1.0, 1.0, 1.0),
        triangle(2.0, 2.0, 2.0),
        triangle(3.0, 4.0, 5.0),
        triangle(1.0, 1.0, 1.5),
        triangle(1.0, 2.0, 2.5),
        triangle(0.5, 2.0, 2.25),
    ]
}

/// GH distance by scanning every subset of `X × Y`.
pub fn gh_by_all_relations(x: &MetricSpace<f64>, y: &MetricSpace<f64>) -> f64 {
    let (m, n) = (x.len(), y.len());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    assert!(cells.len() <= 16, "oracle is exponential in |X||Y|");
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << cells.len()) {
        let rel: Vec<(usize, usize)> = cells
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask & (1 << bit) != 0)
            .map(|(_, &c)| c)
            .collect();
        let covers_x = (0..m).all(|a| rel.iter().any(|&(p, _)| p == a));
        let covers_y = (0..n).all(|b| rel.iter().any(|&(_, q)| q == b));
        if !covers_x || !covers_y {
            continue;
        }
        let mut dis: f64 = 0.0;
        for &(a, b) in &rel {
            for &(c, d) in &rel {
                dis = dis.max((x.dist(a, c) - y.dist(b, d)).abs());
            }
        }
        best = best.min(dis);
    }
    best / 2.0
}

/// Prim's algorithm on the full matrix.
pub fn prim_length(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let mut in_tree = vec![false; n];
    let mut reach = vec![f64::INFINITY; n];
    reach[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| reach[a].partial_cmp(&reach[b]).unwrap())
            .unwrap();
        in_tree[v] = true;
        total += reach[v];
        for u in 0..n {
            if !in_tree[u] {
                reach[u] = reach[u].min(d[v][u]);
            }
        }
    }
    total
}

/// Nontrivial terminal splits of a tree, each written as the side that
/// excludes terminal 0. Leaf-labeled trees coincide iff their splits do.
pub fn splits(t: &TreeTopology) -> BTreeSet<u64> {
    let n = t.terminal_count();
    let v = t.vertex_count();
    let full: u64 = (1 << n) - 1;
    let mut out = BTreeSet::new();
    for (skip, &(a, _)) in t.edges().iter().enumerate() {
        let mut seen = vec![false; v];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(u) = stack.pop() {
            for (e, &(p, q)) in t.edges().iter().enumerate() {
                if e == skip {
                    continue;
                }
                let w = if p == u {
                    q
                } else if q == u {
                    p
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        let mask: u64 = (0..n).filter(|&i| seen[i]).fold(0, |m, i| m | 1 << i);
        let side = if mask & 1 == 1 { full & !mask } else { mask };
        let size = side.count_ones() as usize;
        if size >= 2 && size <= n - 2 {
            out.insert(side);
        }
    }
    out
}

pub fn double_factorial(k: i64) -> usize {
    if k <= 1 {
        1
    } else {
        k as usize * double_factorial(k - 2)
    }
}

/// `n` distinct points with coordinates in `[0, 10)^k`.
pub fn random_cloud(seed: u64, n: usize, k: usize) -> PointCloud<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let coords: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..k).map(|_| rng.gen_range(0.0..10.0)).collect())
            .collect();
        let labels = (0..n).map(|i| format!("t{i}")).collect();
        let cloud = PointCloud::new(labels, k, coords).unwrap();
        if cloud.induced_metric().is_ok() {
            return cloud;
        }
    }
}

/// A space induced by random points in ℓ∞^k, so always a metric.
pub fn random_space(seed: u64, n: usize, k: usize) -> MetricSpace<f64> {
    random_cloud(seed, n, k).induced_metric().unwrap()
}
