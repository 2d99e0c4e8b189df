//! Hausdorff and Gromov–Hausdorff distances for finite spaces.
//!
//! For finite spaces `d_GH(X, Y)` is half the least distortion of a
//! correspondence between them. Every correspondence contains the union of the
//! graphs of some pair of maps `f: X -> Y`, `g: Y -> X`, and distortion can only
//! grow when pairs are added, so the minimum over such unions is exact. The
//! search enumerates `f` then `g` depth-first and abandons a branch once its
//! running distortion reaches the best value found so far.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{MetricSpace, PointCloud};
use crate::scalar::{linf, Scalar};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// A relation between `X` and `Y` that covers both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>, x_len: usize, y_len: usize) -> Result<Self> {
        let mut hit_x = vec![false; x_len];
        let mut hit_y = vec![false; y_len];
        for &(a, b) in &pairs {
            if a >= x_len || b >= y_len {
                return Err(Error::InvalidCorrespondence(format!(
                    "pair ({a}, {b}) out of range"
                )));
            }
            hit_x[a] = true;
            hit_y[b] = true;
        }
        if let Some(a) = hit_x.iter().position(|h| !h) {
            return Err(Error::InvalidCorrespondence(format!("x{a} is unmatched")));
        }
        if let Some(b) = hit_y.iter().position(|h| !h) {
            return Err(Error::InvalidCorrespondence(format!("y{b} is unmatched")));
        }
        Ok(Self { pairs })
    }

    /// `graph(f) ∪ graph(g)` with duplicates removed.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = f.iter().copied().enumerate().collect();
        for (b, &a) in g.iter().enumerate() {
            if !pairs.contains(&(a, b)) {
                pairs.push((a, b));
            }
        }
        Self::new(pairs, f.len(), g.len())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Hausdorff distance between finite subsets of ℓ∞^k.
pub fn hausdorff_linf<T: Scalar>(a: &PointCloud<T>, b: &PointCloud<T>) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    let directed = |from: &PointCloud<T>, to: &PointCloud<T>| {
        from.coords()
            .iter()
            .map(|p| {
                to.coords()
                    .iter()
                    .map(|q| linf(p, q))
                    .reduce(|u, v| u.min_of(v))
                    .expect("nonempty")
            })
            .fold(T::zero(), |acc, d| acc.max_of(d))
    };
    Ok(directed(a, b).max_of(directed(b, a)))
}

/// `max |d_X(x, x') - d_Y(y, y')|` over pairs of matched pairs.
pub fn distortion<T: Scalar>(r: &Correspondence, x: &MetricSpace<T>, y: &MetricSpace<T>) -> Result<T> {
    if r.pairs.iter().any(|&(a, b)| a >= x.len() || b >= y.len()) {
        return Err(Error::InvalidCorrespondence("pair out of range".into()));
    }
    let mut worst = T::zero();
    for (i, &(a, b)) in r.pairs.iter().enumerate() {
        for &(c, d) in &r.pairs[i + 1..] {
            worst = worst.max_of((x.dist(a, c) - y.dist(b, d)).abs());
        }
    }
    Ok(worst)
}

/// `|Y|^|X| · |X|^|Y|`, saturating.
pub fn enumeration_size(x_len: usize, y_len: usize) -> u128 {
    let pow = |base: usize, exp: usize| {
        (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
    };
    pow(y_len, x_len).saturating_mul(pow(x_len, y_len))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GhResult<T> {
    pub distance: T,
    /// A correspondence of least distortion.
    pub correspondence: Correspondence,
}

/// Exact Gromov–Hausdorff distance.
pub fn gh_distance<T: Scalar>(x: &MetricSpace<T>, y: &MetricSpace<T>, budget: u128) -> Result<T> {
    gh_distance_with_witness(x, y, budget).map(|r| r.distance)
}

pub fn gh_distance_with_witness<T: Scalar>(
    x: &MetricSpace<T>,
    y: &MetricSpace<T>,
    budget: u128,
) -> Result<GhResult<T>> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    let required = enumeration_size(x.len(), y.len());
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let best = (0..y.len())
        .into_par_iter()
        .map(|first| {
            let mut search = Search::new(x, y);
            search.push(0, first);
            search.descend();
            search.best.map(|(d, f, g)| (first, d, f, g))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        // lowest distortion, then lowest first branch: independent of scheduling
        .reduce(|a, b| if b.1 < a.1 { b } else { a })
        .expect("some branch completes");
    let (_, d, f, g) = best;
    Ok(GhResult {
        distance: d.half(),
        correspondence: Correspondence::from_maps(&f, &g)?,
    })
}

struct Search<'a, T> {
    x: &'a MetricSpace<T>,
    y: &'a MetricSpace<T>,
    // assigned (x, y) pairs; the first |X| are f, the rest g
    pairs: Vec<(usize, usize)>,
    running: Vec<T>,
    best: Option<(T, Vec<usize>, Vec<usize>)>,
}

impl<'a, T: Scalar> Search<'a, T> {
    fn new(x: &'a MetricSpace<T>, y: &'a MetricSpace<T>) -> Self {
        Self {
            x,
            y,
            pairs: Vec::with_capacity(x.len() + y.len()),
            running: vec![T::zero()],
            best: None,
        }
    }

    fn push(&mut self, a: usize, b: usize) {
        let mut worst = *self.running.last().expect("sentinel");
        for &(c, d) in &self.pairs {
            worst = worst.max_of((self.x.dist(a, c) - self.y.dist(b, d)).abs());
        }
        self.pairs.push((a, b));
        self.running.push(worst);
    }

    fn pop(&mut self) {
        self.pairs.pop();
        self.running.pop();
    }

    fn pruned(&self) -> bool {
        let cur = *self.running.last().expect("sentinel");
        matches!(&self.best, Some((b, _, _)) if cur >= *b)
    }

    fn descend(&mut self) {
        if self.pruned() {
            return;
        }
        let (n, m) = (self.x.len(), self.y.len());
        let depth = self.pairs.len();
        if depth == n + m {
            let cur = *self.running.last().expect("sentinel");
            let f = self.pairs[..n].iter().map(|&(_, b)| b).collect();
            let g = self.pairs[n..].iter().map(|&(a, _)| a).collect();
            self.best = Some((cur, f, g));
            return;
        }
        if depth < n {
            for b in 0..m {
                self.push(depth, b);
                self.descend();
                self.pop();
            }
        } else {
            let b = depth - n;
            for a in 0..n {
                self.push(a, b);
                self.descend();
                self.pop();
            }
        }
    }
}

/// `|diam X - diam Y| / 2`, a lower bound for `d_GH`.
pub fn gh_lower_bound<T: Scalar>(x: &MetricSpace<T>, y: &MetricSpace<T>) -> Result<T> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok((x.diameter() - y.diameter()).abs().half())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::simplex_space;
    use num_rational::Rational64;

    fn two(d: f64) -> MetricSpace<f64> {
        MetricSpace::from_rows(&["p", "q"], vec![vec![0., d], vec![d, 0.]]).unwrap()
    }

    fn point() -> MetricSpace<f64> {
        MetricSpace::from_rows(&["o"], vec![vec![0.0]]).unwrap()
    }

    fn s345(first: f64) -> MetricSpace<f64> {
        MetricSpace::from_rows(
            &["a", "b", "c"],
            vec![vec![0., first, 4.], vec![first, 0., 5.], vec![4., 5., 0.]],
        )
        .unwrap()
    }

    fn cloud(points: &[Vec<f64>]) -> PointCloud<f64> {
        let labels = (0..points.len()).map(|i| format!("p{i}")).collect();
        PointCloud::new(labels, points[0].len(), points.to_vec()).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = cloud(&[vec![0.0]]);
        let b = cloud(&[vec![0.0], vec![3.0]]);
        assert_eq!(hausdorff_linf(&a, &b).unwrap(), 3.0);
        assert_eq!(hausdorff_linf(&b, &b).unwrap(), 0.0);
        let c = cloud(&[vec![0.0, 0.0]]);
        let d = cloud(&[vec![1.0, 2.0]]);
        assert_eq!(hausdorff_linf(&c, &d).unwrap(), 2.0);
        assert_eq!(hausdorff_linf(&a, &c), Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn distortion_examples() {
        let x = s345(3.0);
        let id = Correspondence::new(vec![(0, 0), (1, 1), (2, 2)], 3, 3).unwrap();
        assert_eq!(distortion(&id, &x, &x).unwrap(), 0.0);

        let forced = Correspondence::new(vec![(0, 0), (1, 0)], 2, 1).unwrap();
        assert_eq!(distortion(&forced, &two(2.0), &point()).unwrap(), 2.0);

        let matched = Correspondence::new(vec![(0, 0), (1, 1)], 2, 2).unwrap();
        assert_eq!(distortion(&matched, &two(3.0), &two(5.0)).unwrap(), 2.0);

        assert!(Correspondence::new(vec![(0, 0)], 2, 1).is_err());
    }

    #[test]
    fn gh_examples() {
        let x = s345(3.0);
        assert_eq!(gh_distance(&x, &x, DEFAULT_BUDGET).unwrap(), 0.0);
        assert_eq!(gh_distance(&two(2.0), &point(), DEFAULT_BUDGET).unwrap(), 1.0);
        let d = gh_distance(&x, &s345(3.05), DEFAULT_BUDGET).unwrap();
        assert!((d - 0.025).abs() < 1e-12, "{d}");
    }

    #[test]
    fn gh_is_exact_over_rationals() {
        let r = Rational64::from_integer;
        let x = simplex_space(3, r(2)).unwrap();
        let y = simplex_space(2, r(1)).unwrap();
        // pigeonhole: two points of x share a partner in y, distortion >= |2 - 0|
        assert_eq!(gh_distance(&x, &y, DEFAULT_BUDGET).unwrap(), r(1));
    }

    #[test]
    fn budget_guard() {
        let x = simplex_space(4, 1.0_f64).unwrap();
        let err = gh_distance(&x, &x, 10).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                required: 65_536,
                budget: 10
            }
        );
        assert_eq!(enumeration_size(2, 3), 72);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(gh_lower_bound(&two(2.0), &point()).unwrap(), 1.0);
        assert_eq!(gh_lower_bound(&s345(3.0), &s345(3.0)).unwrap(), 0.0);
        assert_eq!(gh_lower_bound(&two(5.0), &two(3.0)).unwrap(), 1.0);
    }

    #[test]
    fn witness_achieves_the_distance() {
        let x = s345(3.0);
        let y = simplex_space(4, 3.5).unwrap();
        let res = gh_distance_with_witness(&x, &y, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            distortion(&res.correspondence, &x, &y).unwrap().half(),
            res.distance
        );
    }
}
