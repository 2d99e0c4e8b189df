//! Minimal fillings of finite metric spaces.
//!
//! A filling of `X` on a fixed tree topology is an assignment of nonnegative
//! edge weights such that every terminal-to-terminal path is at least as long
//! as the distance it spans. Minimizing the total weight is a linear program;
//! the minimal filling is the best optimum over all binary topologies.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::metric::MetricSpace;
use crate::scalar::Scalar;
use crate::trees::{enumerate_topologies, mst, TreeTopology, WeightedTree};

pub const MAX_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct FillingSolution<T> {
    /// Weighted tree without coordinates.
    pub tree: WeightedTree<T>,
    pub length: T,
    pub topology_index: usize,
}

impl<T: Scalar> FillingSolution<T> {
    /// Terminal pairs whose path constraint is active.
    pub fn tight_pairs(&self, x: &MetricSpace<T>, tol: T) -> Vec<(usize, usize)> {
        let paths = self.tree.path_metric();
        x.pairs()
            .filter(|&(i, j)| paths[i][j] - x.dist(i, j) <= tol)
            .collect()
    }
}

/// Least total weight on a fixed topology.
pub fn mf_topology<T: Scalar>(
    topology: &TreeTopology,
    x: &MetricSpace<T>,
    tol: T,
) -> Result<FillingSolution<T>> {
    if topology.terminal_labels() != x.labels() {
        return Err(Error::TopologyMismatch(format!(
            "topology terminals {:?} vs space {:?}",
            topology.terminal_labels(),
            x.labels()
        )));
    }
    let scale = normalizer(x);
    let edges = topology.edges().len();
    let mut lp = LinearProgram::new(edges);
    for e in 0..edges {
        lp.set_cost(e, T::one());
    }
    for ((i, j), path) in topology.terminal_paths() {
        lp.add_row(
            path.into_iter().map(|e| (e, T::one())).collect(),
            Relation::Ge,
            x.dist(i, j) / scale,
        );
    }
    let sol = lp
        .minimize(tol)
        .map_err(|e| Error::LpNumericalFailure(e.to_string()))?;
    let weights: Vec<T> = sol.x.iter().map(|&w| w * scale).collect();
    let tree = WeightedTree::new(topology.clone(), weights, None)?;
    Ok(FillingSolution {
        length: tree.length(),
        tree,
        topology_index: 0,
    })
}

fn normalizer<T: Scalar>(x: &MetricSpace<T>) -> T {
    let d = x.diameter();
    if d > T::zero() {
        d
    } else {
        T::one()
    }
}

/// Minimal filling with the default tolerance.
pub fn mf<T: Scalar>(x: &MetricSpace<T>) -> Result<FillingSolution<T>> {
    mf_with_tol(x, T::default_tol())
}

pub fn mf_with_tol<T: Scalar>(x: &MetricSpace<T>, tol: T) -> Result<FillingSolution<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if n > MAX_POINTS {
        return Err(Error::TooManyPoints {
            got: n,
            max: MAX_POINTS,
        });
    }
    let topologies: Vec<TreeTopology> = enumerate_topologies(n, n - 2)
        .into_iter()
        .map(|t| t.relabeled(x.labels()))
        .collect::<Result<_>>()?;
    let solved: Vec<FillingSolution<T>> = topologies
        .par_iter()
        .enumerate()
        .map(|(idx, topo)| {
            mf_topology(topo, x, tol).map(|mut s| {
                s.topology_index = idx;
                s
            })
        })
        .collect::<Result<_>>()?;
    let best = solved
        .into_iter()
        .reduce(|a, b| if b.length < a.length { b } else { a })
        .expect("at least one topology");
    let tree = best.tree.contract_short_edges(tol * normalizer(x));
    Ok(FillingSolution {
        length: tree.length(),
        tree,
        ..best
    })
}

/// The metric space carried by a filling: tree vertices with the largest
/// metric that is dominated by tree paths and agrees with `X` on terminals.
///
/// This is the shortest-path metric of the tree together with the complete
/// graph on the terminals weighted by `X`. When every path is tight it is just
/// the tree-path metric.
pub fn filling_extension<T: Scalar>(
    tree: &WeightedTree<T>,
    x: &MetricSpace<T>,
) -> Result<MetricSpace<T>> {
    let topo = tree.topology();
    if topo.terminal_labels() != x.labels() {
        return Err(Error::TopologyMismatch("filling does not match the space".into()));
    }
    let n = x.len();
    let mut d = tree.path_metric();
    for i in 0..n {
        for j in 0..n {
            d[i][j] = d[i][j].min_of(x.dist(i, j));
        }
    }
    let v = d.len();
    // repeat until stable so rounding cannot leave a strict triangle violation
    loop {
        let mut changed = false;
        for k in 0..v {
            for i in 0..v {
                for j in 0..v {
                    let through = d[i][k] + d[k][j];
                    if through < d[i][j] {
                        d[i][j] = through;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    MetricSpace::new(topo.vertex_labels(), d)
}

/// Outcome of checking a filling against `|G| = mst(V) = mf(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FillingVerdict<T> {
    pub holds: bool,
    pub tree_length: T,
    pub mst_length: T,
    pub mf_length: T,
    /// Largest `|ρ(p, q) - d(p, q)|` over terminal pairs.
    pub extension_error: T,
    /// Largest gap between an edge weight and the distance of its endpoints in `V`.
    pub edge_error: T,
    pub witness: Option<String>,
}

/// Builds the space `V` of the filling and checks that it extends `X` and
/// that the filling is a minimal spanning tree of `V` of length `mf(X)`.
pub fn verify_filling_characterization<T: Scalar>(
    sol: &FillingSolution<T>,
    x: &MetricSpace<T>,
    tol: T,
) -> Result<FillingVerdict<T>> {
    let scale = normalizer(x);
    let slack = tol * scale.max_of(T::one());
    let tree = sol.tree.contract_short_edges(T::default_tol() * scale);
    let mf_length = mf(x)?.length;
    let tree_length = tree.length();

    let v_space = match filling_extension(&tree, x) {
        Ok(v) => v,
        Err(e) => {
            return Ok(FillingVerdict {
                holds: false,
                tree_length,
                mst_length: T::zero(),
                mf_length,
                extension_error: T::zero(),
                edge_error: T::zero(),
                witness: Some(format!("vertex set is not a metric space: {e}")),
            })
        }
    };
    let extension_error = x.pairs().fold(T::zero(), |acc, (i, j)| {
        acc.max_of((v_space.dist(i, j) - x.dist(i, j)).abs())
    });
    let edge_error = tree
        .topology()
        .edges()
        .iter()
        .zip(tree.edge_lengths())
        .fold(T::zero(), |acc, (&(a, b), &w)| {
            acc.max_of((v_space.dist(a, b) - w).abs())
        });
    let mst_length = mst(&v_space).length();

    let labels = v_space.labels();
    let witness = if extension_error > slack {
        let (i, j) = x
            .pairs()
            .find(|&(i, j)| (v_space.dist(i, j) - x.dist(i, j)).abs() == extension_error)
            .expect("maximum is attained");
        Some(format!("V changes d({}, {})", labels[i], labels[j]))
    } else if edge_error > slack {
        Some(format!("an edge is longer than its endpoints' distance in V by {edge_error}"))
    } else if (mst_length - tree_length).abs() > slack {
        Some(format!("mst(V) = {mst_length} but |G| = {tree_length}"))
    } else if (tree_length - mf_length).abs() > slack {
        Some(format!("|G| = {tree_length} but mf(X) = {mf_length}"))
    } else {
        None
    };
    Ok(FillingVerdict {
        holds: witness.is_none(),
        tree_length,
        mst_length,
        mf_length,
        extension_error,
        edge_error,
        witness,
    })
}
