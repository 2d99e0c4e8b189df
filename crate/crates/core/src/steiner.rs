//! Steiner minimal trees in ℓ∞^k.
//!
//! For a fixed topology the ℓ∞ tree length is a linear program: every edge
//! gets a surrogate `t_e` bounded below by `±(u_i - v_i)` in each coordinate,
//! and the objective is `Σ t_e`. Enumerating all binary topologies and taking
//! the least LP optimum gives the exact Steiner minimal tree; degenerate
//! trees appear as zero-length edges and are contracted afterwards.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::metric::PointCloud;
use crate::scalar::{linf, Scalar};
use crate::trees::{enumerate_topologies, TreeTopology, WeightedTree};

/// Largest terminal count the exhaustive solver accepts (105 topologies).
pub const MAX_TERMINALS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerInstance<T> {
    terminals: PointCloud<T>,
    tolerance: T,
}

impl<T: Scalar> SteinerInstance<T> {
    pub fn new(terminals: PointCloud<T>, tolerance: T) -> Result<Self> {
        if terminals.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: terminals.len(),
            });
        }
        if tolerance < T::zero() {
            return Err(Error::InvalidParameter("tolerance must be nonnegative".into()));
        }
        // rejects coincident terminals
        terminals.induced_metric()?;
        Ok(Self {
            terminals,
            tolerance,
        })
    }

    pub fn terminals(&self) -> &PointCloud<T> {
        &self.terminals
    }

    pub fn solve(&self) -> Result<SteinerSolution<T>> {
        smt_linf_with_tol(&self.terminals, self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerSolution<T> {
    pub tree: WeightedTree<T>,
    pub length: T,
    pub topology_index: usize,
    pub terminals: PointCloud<T>,
}

impl<T: Scalar> SteinerSolution<T> {
    /// Terminal positions followed by Steiner point positions.
    pub fn vertex_positions(&self) -> Vec<Vec<T>> {
        self.tree
            .vertex_positions(self.terminals.coords())
            .expect("Steiner trees carry coordinates")
    }

    pub fn steiner_points(&self) -> &[Vec<T>] {
        self.tree.internal_coords().unwrap_or(&[])
    }
}

/// Terminals translated to the origin corner and scaled into the unit box.
struct Normalized<T> {
    lo: Vec<T>,
    scale: T,
    coords: Vec<Vec<T>>,
}

fn normalize<T: Scalar>(cloud: &PointCloud<T>) -> Normalized<T> {
    let k = cloud.dim();
    let mut lo = cloud.point(0).to_vec();
    let mut hi = lo.clone();
    for c in cloud.coords() {
        for i in 0..k {
            lo[i] = lo[i].min_of(c[i]);
            hi[i] = hi[i].max_of(c[i]);
        }
    }
    let spread = lo
        .iter()
        .zip(&hi)
        .fold(T::zero(), |acc, (&l, &h)| acc.max_of(h - l));
    let scale = if spread > T::zero() { spread } else { T::one() };
    let coords = cloud
        .coords()
        .iter()
        .map(|c| c.iter().zip(&lo).map(|(&x, &l)| (x - l) / scale).collect())
        .collect();
    Normalized { lo, scale, coords }
}

/// Least-length placement of the internal vertices of `topology`.
///
/// Internal coordinates are constrained to the nonnegative orthant of the
/// translated instance; clamping any placement to the terminals' bounding box
/// never lengthens an ℓ∞ edge, so the restriction loses no optimum.
pub fn solve_topology<T: Scalar>(
    topology: &TreeTopology,
    terminals: &PointCloud<T>,
    tol: T,
) -> Result<SteinerSolution<T>> {
    if topology.terminal_labels() != terminals.labels() {
        return Err(Error::TopologyMismatch(format!(
            "topology terminals {:?} vs instance {:?}",
            topology.terminal_labels(),
            terminals.labels()
        )));
    }
    let n = terminals.len();
    let k = terminals.dim();
    let internal = topology.internal_count();
    let edges = topology.edges();
    let norm = normalize(terminals);

    let coord_var = |v: usize, i: usize| (v - n) * k + i;
    let edge_var = |e: usize| internal * k + e;
    let mut lp = LinearProgram::new(internal * k + edges.len());
    for e in 0..edges.len() {
        lp.set_cost(edge_var(e), T::one());
    }
    for (e, &(a, b)) in edges.iter().enumerate() {
        let t = edge_var(e);
        for i in 0..k {
            // diff = pos_a - pos_b, split into variable part and constant part
            let mut vars = Vec::new();
            let mut constant = T::zero();
            if a < n {
                constant = constant + norm.coords[a][i];
            } else {
                vars.push((coord_var(a, i), T::one()));
            }
            if b < n {
                constant = constant - norm.coords[b][i];
            } else {
                vars.push((coord_var(b, i), -T::one()));
            }
            // t - diff >= 0  and  t + diff >= 0
            let mut minus = vec![(t, T::one())];
            minus.extend(vars.iter().map(|&(v, c)| (v, -c)));
            lp.add_row(minus, Relation::Ge, constant);
            let mut plus = vec![(t, T::one())];
            plus.extend(vars.iter().copied());
            lp.add_row(plus, Relation::Ge, -constant);
        }
    }
    let sol = lp
        .minimize(tol)
        .map_err(|e| Error::LpNumericalFailure(e.to_string()))?;

    let internal_coords: Vec<Vec<T>> = (n..n + internal)
        .map(|v| {
            (0..k)
                .map(|i| norm.lo[i] + sol.x[coord_var(v, i)] * norm.scale)
                .collect()
        })
        .collect();
    let position = |v: usize| -> &[T] {
        if v < n {
            terminals.point(v)
        } else {
            &internal_coords[v - n]
        }
    };
    let lengths: Vec<T> = edges
        .iter()
        .map(|&(a, b)| linf(position(a), position(b)))
        .collect();
    let tree = WeightedTree::new(topology.clone(), lengths, Some(internal_coords))?;
    Ok(SteinerSolution {
        length: tree.length(),
        tree,
        topology_index: 0,
        terminals: terminals.clone(),
    })
}

/// Exact Steiner minimal tree with the default tolerance.
pub fn smt_linf<T: Scalar>(terminals: &PointCloud<T>) -> Result<SteinerSolution<T>> {
    smt_linf_with_tol(terminals, T::default_tol())
}

pub fn smt_linf_with_tol<T: Scalar>(terminals: &PointCloud<T>, tol: T) -> Result<SteinerSolution<T>> {
    let n = terminals.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if n > MAX_TERMINALS {
        return Err(Error::TooManyTerminals {
            got: n,
            max: MAX_TERMINALS,
        });
    }
    terminals.induced_metric()?;
    let topologies: Vec<TreeTopology> = enumerate_topologies(n, n - 2)
        .into_iter()
        .map(|t| t.relabeled(terminals.labels()))
        .collect::<Result<_>>()?;
    let solved: Vec<SteinerSolution<T>> = topologies
        .par_iter()
        .enumerate()
        .map(|(idx, topo)| {
            solve_topology(topo, terminals, tol).map(|mut s| {
                s.topology_index = idx;
                s
            })
        })
        .collect::<Result<_>>()?;
    let best = solved
        .into_iter()
        .reduce(|a, b| if b.length < a.length { b } else { a })
        .expect("at least one topology");
    let threshold = tol * normalize(terminals).scale;
    let tree = best.tree.contract_short_edges(threshold);
    Ok(SteinerSolution {
        length: tree.length(),
        tree,
        ..best
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::simplex_space;
    use num_rational::Rational64;

    fn cloud(points: &[Vec<f64>]) -> PointCloud<f64> {
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        PointCloud::new(labels, points[0].len(), points.to_vec()).unwrap()
    }

    fn star_for(c: &PointCloud<f64>) -> TreeTopology {
        enumerate_topologies(3, 1)
            .remove(0)
            .relabeled(c.labels())
            .unwrap()
    }

    #[test]
    fn corner_star() {
        let c = cloud(&[vec![0., 0.], vec![2., 0.], vec![0., 2.]]);
        let s = solve_topology(&star_for(&c), &c, 1e-9).unwrap();
        assert!((s.length - 3.0).abs() < 1e-9);
        assert!(s.tree.coordinate_mismatch(c.coords()).unwrap() < 1e-12);
    }

    #[test]
    fn collinear_star_degenerates() {
        let c = cloud(&[vec![0., 0.], vec![1., 0.], vec![3., 0.]]);
        let s = solve_topology(&star_for(&c), &c, 1e-9).unwrap();
        assert!((s.length - 3.0).abs() < 1e-9);
        let full = smt_linf(&c).unwrap();
        assert!((full.length - 3.0).abs() < 1e-9);
    }

    #[test]
    fn segment() {
        let c = cloud(&[vec![0.0], vec![5.0]]);
        let topo = enumerate_topologies(2, 0).remove(0).relabeled(c.labels()).unwrap();
        assert_eq!(solve_topology(&topo, &c, 1e-9).unwrap().length, 5.0);
        assert_eq!(smt_linf(&c).unwrap().length, 5.0);
    }

    #[test]
    fn smt_examples() {
        let c = cloud(&[vec![0., 0.], vec![2., 0.], vec![0., 2.]]);
        assert!((smt_linf(&c).unwrap().length - 3.0).abs() < 1e-9);

        let k = simplex_space(3, 1.0_f64).unwrap().kuratowski();
        assert!((smt_linf(&k).unwrap().length - 1.5).abs() < 1e-9);
    }

    #[test]
    fn exact_rational_smt() {
        let r = Rational64::from_integer;
        let k = simplex_space(4, r(1)).unwrap().kuratowski();
        assert_eq!(smt_linf(&k).unwrap().length, r(2));
    }

    #[test]
    fn limits_and_errors() {
        let seven: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64]).collect();
        assert!(matches!(
            smt_linf(&cloud(&seven)),
            Err(Error::TooManyTerminals { got: 7, max: 6 })
        ));
        assert!(matches!(
            smt_linf(&cloud(&[vec![1.0]])),
            Err(Error::TooFewPoints { .. })
        ));
        assert!(SteinerInstance::new(cloud(&[vec![1.0], vec![1.0]]), 1e-9).is_err());
        let c = cloud(&[vec![0.0], vec![1.0], vec![2.0]]);
        let wrong = enumerate_topologies(3, 1).remove(0);
        assert!(matches!(
            solve_topology(&wrong, &c, 1e-9),
            Err(Error::TopologyMismatch(_))
        ));
    }
}
