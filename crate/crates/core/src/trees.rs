//! Trees on metric spaces: combinatorial topologies, weighted trees, minimal
//! spanning trees and exhaustive enumeration of binary topologies.
//!
//! Vertex numbering is shared by every tree in the crate: terminals occupy
//! `0..n`, internal (Steiner) vertices follow at `n..n + internal_count`.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::scalar::{linf, Scalar};

/// A tree with labeled terminals and anonymous internal vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeTopology {
    terminal_labels: Vec<String>,
    internal_count: usize,
    edges: Vec<(usize, usize)>,
}

impl TreeTopology {
    /// Checks that the edges form a spanning tree and that internal vertices
    /// have degree at least three.
    pub fn new(
        terminal_labels: Vec<String>,
        internal_count: usize,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let topo = Self {
            terminal_labels,
            internal_count,
            edges,
        };
        let v = topo.vertex_count();
        if v == 0 {
            return Err(Error::EmptySet);
        }
        if topo.edges.len() + 1 != v {
            return Err(Error::TopologyMismatch(format!(
                "{} edges on {v} vertices",
                topo.edges.len()
            )));
        }
        if let Some(&(a, b)) = topo.edges.iter().find(|&&(a, b)| a >= v || b >= v || a == b) {
            return Err(Error::TopologyMismatch(format!("bad edge ({a}, {b})")));
        }
        if topo.bfs_order(0).len() != v {
            return Err(Error::TopologyMismatch("graph is disconnected".into()));
        }
        let deg = topo.degrees();
        if let Some(s) = (topo.terminal_count()..v).find(|&s| deg[s] < 3) {
            return Err(Error::TopologyMismatch(format!(
                "internal vertex {s} has degree {}",
                deg[s]
            )));
        }
        Ok(topo)
    }

    pub fn terminal_count(&self) -> usize {
        self.terminal_labels.len()
    }

    pub fn internal_count(&self) -> usize {
        self.internal_count
    }

    pub fn vertex_count(&self) -> usize {
        self.terminal_count() + self.internal_count
    }

    pub fn terminal_labels(&self) -> &[String] {
        &self.terminal_labels
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_terminal(&self, v: usize) -> bool {
        v < self.terminal_count()
    }

    /// Same shape, new terminal names.
    pub fn relabeled(&self, labels: &[String]) -> Result<Self> {
        if labels.len() != self.terminal_count() {
            return Err(Error::TopologyMismatch(format!(
                "{} labels for {} terminals",
                labels.len(),
                self.terminal_count()
            )));
        }
        Ok(Self {
            terminal_labels: labels.to_vec(),
            ..self.clone()
        })
    }

    /// Display names: terminal labels, then `s0, s1, ...` for internal
    /// vertices (prefixed with `_` until they no longer collide).
    pub fn vertex_labels(&self) -> Vec<String> {
        let mut prefix = String::from("s");
        while self
            .terminal_labels
            .iter()
            .any(|l| l.starts_with(&prefix) && l[prefix.len()..].parse::<usize>().is_ok())
        {
            prefix.insert(0, '_');
        }
        self.terminal_labels
            .iter()
            .cloned()
            .chain((0..self.internal_count).map(|i| format!("{prefix}{i}")))
            .collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// `adjacency[v]` lists `(neighbor, edge index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, e));
            adj[b].push((a, e));
        }
        adj
    }

    fn bfs_order(&self, root: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// `parents[root] = None`, otherwise `(parent, edge)` toward `root`.
    fn parents(&self, root: usize) -> Vec<Option<(usize, usize)>> {
        let adj = self.adjacency();
        let mut parent = vec![None; self.vertex_count()];
        let mut seen = vec![false; self.vertex_count()];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Edge indices on the unique path between `u` and `v`.
    pub fn path_edges(&self, u: usize, v: usize) -> Vec<usize> {
        let parent = self.parents(u);
        let mut path = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = parent[cur] {
            path.push(e);
            cur = p;
        }
        path
    }

    /// Paths between every unordered pair of terminals, lexicographic.
    pub fn terminal_paths(&self) -> Vec<((usize, usize), Vec<usize>)> {
        let n = self.terminal_count();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.path_edges(i, j)))
            .collect()
    }
}

/// All binary topologies on `n_terminals` leaves with `max_internal`
/// degree-3 internal vertices, built by stepwise leaf insertion.
///
/// Each labeled binary tree arises from exactly one insertion sequence, so the
/// output has no duplicates; there are `(2n - 5)!!` of them for `n >= 3`.
/// Leaves of degree one force `max_internal = n - 2`; any other value yields
/// nothing. Terminal labels are `"0"`, `"1"`, ...
pub fn enumerate_topologies(n_terminals: usize, max_internal: usize) -> Vec<TreeTopology> {
    let labels: Vec<String> = (0..n_terminals).map(|i| i.to_string()).collect();
    let n = n_terminals;
    match n {
        0 | 1 => return Vec::new(),
        2 if max_internal == 0 => {
            return vec![TreeTopology {
                terminal_labels: labels,
                internal_count: 0,
                edges: vec![(0, 1)],
            }]
        }
        _ if max_internal + 2 != n => return Vec::new(),
        _ => {}
    }
    let mut partial = vec![vec![(0, n), (1, n), (2, n)]];
    for leaf in 3..n {
        let fresh = n + leaf - 2;
        partial = partial
            .into_iter()
            .flat_map(|edges| {
                (0..edges.len()).map(move |idx| {
                    let mut next = edges.clone();
                    let (u, v) = next[idx];
                    next[idx] = (u, fresh);
                    next.push((fresh, v));
                    next.push((leaf, fresh));
                    next
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|edges| TreeTopology {
            terminal_labels: labels.clone(),
            internal_count: n - 2,
            edges,
        })
        .collect()
}

/// `(2n - 5)!!`, the number of binary topologies on `n >= 3` leaves.
pub fn binary_topology_count(n: usize) -> usize {
    if n < 3 {
        return 1;
    }
    (1..=2 * n - 5).step_by(2).product()
}

/// A topology with nonnegative edge lengths and optional ℓ∞ coordinates for
/// internal vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTree<T> {
    topology: TreeTopology,
    edge_lengths: Vec<T>,
    internal_coords: Option<Vec<Vec<T>>>,
}

impl<T: Scalar> WeightedTree<T> {
    pub fn new(
        topology: TreeTopology,
        edge_lengths: Vec<T>,
        internal_coords: Option<Vec<Vec<T>>>,
    ) -> Result<Self> {
        if edge_lengths.len() != topology.edges().len() {
            return Err(Error::TopologyMismatch(format!(
                "{} lengths for {} edges",
                edge_lengths.len(),
                topology.edges().len()
            )));
        }
        if edge_lengths.iter().any(|&w| w < T::zero()) {
            return Err(Error::InvalidParameter("negative edge length".into()));
        }
        if let Some(c) = &internal_coords {
            if c.len() != topology.internal_count() {
                return Err(Error::TopologyMismatch(format!(
                    "{} coordinate vectors for {} internal vertices",
                    c.len(),
                    topology.internal_count()
                )));
            }
        }
        Ok(Self {
            topology,
            edge_lengths,
            internal_coords,
        })
    }

    pub fn topology(&self) -> &TreeTopology {
        &self.topology
    }

    pub fn edge_lengths(&self) -> &[T] {
        &self.edge_lengths
    }

    pub fn internal_coords(&self) -> Option<&[Vec<T>]> {
        self.internal_coords.as_deref()
    }

    /// Sum of edge lengths.
    pub fn length(&self) -> T {
        self.edge_lengths
            .iter()
            .fold(T::zero(), |acc, &w| acc + w)
    }

    /// Positions of every vertex given the terminal positions.
    pub fn vertex_positions(&self, terminals: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
        let internal = self.internal_coords.as_ref()?;
        Some(terminals.iter().chain(internal).cloned().collect())
    }

    /// Largest gap between an edge length and the ℓ∞ distance of its endpoints.
    pub fn coordinate_mismatch(&self, terminals: &[Vec<T>]) -> Option<T> {
        let pos = self.vertex_positions(terminals)?;
        Some(
            self.topology
                .edges()
                .iter()
                .zip(&self.edge_lengths)
                .fold(T::zero(), |acc, (&(a, b), &w)| {
                    acc.max_of((linf(&pos[a], &pos[b]) - w).abs())
                }),
        )
    }

    /// Tree-path distances between all vertices.
    pub fn path_metric(&self) -> Vec<Vec<T>> {
        let v = self.topology.vertex_count();
        let adj = self.topology.adjacency();
        let mut out = vec![vec![T::zero(); v]; v];
        for (root, row) in out.iter_mut().enumerate() {
            let mut seen = vec![false; v];
            let mut stack = vec![root];
            seen[root] = true;
            while let Some(x) = stack.pop() {
                for &(y, e) in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        row[y] = row[x] + self.edge_lengths[e];
                        stack.push(y);
                    }
                }
            }
        }
        out
    }

    /// Merges the endpoints of every edge no longer than `threshold`.
    ///
    /// A terminal absorbs any internal vertex it merges with; two terminals are
    /// never merged. The total length changes by at most the dropped lengths.
    pub fn contract_short_edges(&self, threshold: T) -> Self {
        let topo = &self.topology;
        let n = topo.terminal_count();
        let v = topo.vertex_count();
        let mut rep: Vec<usize> = (0..v).collect();
        fn find(rep: &mut [usize], mut x: usize) -> usize {
            while rep[x] != x {
                rep[x] = rep[rep[x]];
                x = rep[x];
            }
            x
        }
        let mut dropped = vec![false; topo.edges().len()];
        for (e, &(a, b)) in topo.edges().iter().enumerate() {
            if self.edge_lengths[e] > threshold {
                continue;
            }
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            if ra < n && rb < n {
                continue;
            }
            // terminals have the smallest ids, so min() keeps them as representatives
            let (keep, gone) = (ra.min(rb), ra.max(rb));
            rep[gone] = keep;
            dropped[e] = true;
        }
        let roots: Vec<usize> = (0..v).map(|x| find(&mut rep, x)).collect();
        let mut new_id = vec![usize::MAX; v];
        let mut next = n;
        for x in 0..v {
            if x < n {
                new_id[x] = x;
            } else if roots[x] == x {
                new_id[x] = next;
                next += 1;
            }
        }
        let mut edges = Vec::new();
        let mut lengths = Vec::new();
        for (e, &(a, b)) in topo.edges().iter().enumerate() {
            if !dropped[e] {
                edges.push((new_id[roots[a]], new_id[roots[b]]));
                lengths.push(self.edge_lengths[e]);
            }
        }
        let coords = self.internal_coords.as_ref().map(|c| {
            (n..v)
                .filter(|&x| roots[x] == x)
                .map(|x| c[x - n].clone())
                .collect()
        });
        let topology = TreeTopology {
            terminal_labels: topo.terminal_labels.clone(),
            internal_count: next - n,
            edges,
        };
        Self {
            topology,
            edge_lengths: lengths,
            internal_coords: coords,
        }
    }
}

pub fn tree_length<T: Scalar>(tree: &WeightedTree<T>) -> T {
    tree.length()
}

/// Minimal spanning tree (Kruskal). Ties are broken by the lexicographic
/// order of the edge's endpoint labels, so the output is deterministic.
pub fn mst<T: Scalar>(x: &MetricSpace<T>) -> WeightedTree<T> {
    let labels = x.labels();
    let mut candidates: Vec<(usize, usize)> = x.pairs().collect();
    let key = |&(i, j): &(usize, usize)| {
        let (a, b) = (&labels[i], &labels[j]);
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    candidates.sort_by(|p, q| {
        x.dist(p.0, p.1)
            .partial_cmp(&x.dist(q.0, q.1))
            .expect("distances are comparable")
            .then_with(|| key(p).cmp(&key(q)))
    });
    let mut comp: Vec<usize> = (0..x.len()).collect();
    fn root(comp: &mut [usize], mut v: usize) -> usize {
        while comp[v] != v {
            comp[v] = comp[comp[v]];
            v = comp[v];
        }
        v
    }
    let mut edges = Vec::new();
    let mut lengths = Vec::new();
    for (i, j) in candidates {
        let (ri, rj) = (root(&mut comp, i), root(&mut comp, j));
        if ri != rj {
            comp[ri] = rj;
            edges.push((i, j));
            lengths.push(x.dist(i, j));
        }
    }
    let topology = TreeTopology {
        terminal_labels: labels.to_vec(),
        internal_count: 0,
        edges,
    };
    WeightedTree {
        topology,
        edge_lengths: lengths,
        internal_coords: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::simplex_space;

    #[test]
    fn mst_examples() {
        assert_eq!(mst(&simplex_space(4, 1.0_f64).unwrap()).length(), 3.0);
        let path = MetricSpace::from_rows(
            &["a", "b", "c"],
            vec![vec![0., 1., 3.], vec![1., 0., 2.], vec![3., 2., 0.]],
        )
        .unwrap();
        let t = mst(&path);
        assert_eq!(t.topology().edges(), &[(0, 1), (1, 2)]);
        assert_eq!(t.length(), 3.0);
        let one = MetricSpace::from_rows(&["p"], vec![vec![0.0]]).unwrap();
        let t = mst(&one);
        assert!(t.topology().edges().is_empty());
        assert_eq!(t.length(), 0.0);
    }

    #[test]
    fn mst_ties_follow_labels() {
        let d = MetricSpace::from_rows(
            &["c", "b", "a"],
            vec![vec![0., 1., 1.], vec![1., 0., 1.], vec![1., 1., 0.]],
        )
        .unwrap();
        // (a,b) then (a,c)
        assert_eq!(mst(&d).topology().edges(), &[(1, 2), (0, 2)]);
    }

    #[test]
    fn lengths_add_up() {
        let star = TreeTopology::new(
            vec!["a".into(), "b".into(), "c".into()],
            1,
            vec![(0, 3), (1, 3), (2, 3)],
        )
        .unwrap();
        let t = WeightedTree::new(star, vec![0.5; 3], None).unwrap();
        assert_eq!(tree_length(&t), 1.5);

        let single = TreeTopology::new(vec!["a".into()], 0, vec![]).unwrap();
        assert_eq!(WeightedTree::<f64>::new(single, vec![], None).unwrap().length(), 0.0);

        let seg = TreeTopology::new(
            vec!["a".into(), "b".into(), "c".into()],
            0,
            vec![(0, 1), (1, 2)],
        )
        .unwrap();
        assert_eq!(WeightedTree::new(seg, vec![1.25, 0.75], None).unwrap().length(), 2.0);
    }

    #[test]
    fn topology_counts() {
        assert_eq!(enumerate_topologies(2, 0).len(), 1);
        assert_eq!(enumerate_topologies(3, 1).len(), 1);
        assert_eq!(enumerate_topologies(4, 2).len(), 3);
        assert_eq!(enumerate_topologies(5, 3).len(), 15);
        assert!(enumerate_topologies(5, 2).is_empty());
        assert!(enumerate_topologies(1, 0).is_empty());
        for t in enumerate_topologies(5, 3) {
            TreeTopology::new(t.terminal_labels.clone(), t.internal_count, t.edges.clone()).unwrap();
            let deg = t.degrees();
            assert!(deg[..5].iter().all(|&d| d == 1));
            assert!(deg[5..].iter().all(|&d| d == 3));
        }
    }

    #[test]
    fn topology_validation() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(TreeTopology::new(labels.clone(), 0, vec![(0, 1)]).is_ok());
        assert!(TreeTopology::new(labels.clone(), 1, vec![(0, 2), (1, 2)]).is_err());
        assert!(TreeTopology::new(labels, 0, vec![(0, 0)]).is_err());
    }

    #[test]
    fn contraction_keeps_terminals_and_length() {
        let star = enumerate_topologies(3, 1).remove(0);
        let t = WeightedTree::new(star, vec![0.0, 1.0, 2.0], Some(vec![vec![5.0]])).unwrap();
        let c = t.contract_short_edges(1e-9);
        assert_eq!(c.topology().internal_count(), 0);
        assert_eq!(c.topology().edges(), &[(1, 0), (2, 0)]);
        assert_eq!(c.length(), t.length());
        assert_eq!(c.internal_coords().unwrap().len(), 0);

        let quartet = enumerate_topologies(4, 2).remove(0);
        let t = WeightedTree::new(quartet, vec![1.0, 1.0, 1.0, 0.0, 1.0], None).unwrap();
        let c = t.contract_short_edges(1e-9);
        assert_eq!(c.topology().internal_count(), 1);
        assert_eq!(c.topology().degrees()[4], 4);
        assert_eq!(c.length(), 4.0);
    }

    #[test]
    fn internal_labels_avoid_collisions() {
        let t = TreeTopology::new(
            vec!["s0".into(), "b".into(), "c".into()],
            1,
            vec![(0, 3), (1, 3), (2, 3)],
        )
        .unwrap();
        assert_eq!(t.vertex_labels()[3], "_s0");
    }
}
