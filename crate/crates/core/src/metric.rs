//! Finite metric spaces, ℓ∞ point clouds, genericity and the two embeddings
//! into ℓ∞ (Kuratowski rows and the sorted half-distance vector `nu`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{linf, Scalar};

/// A finite metric space: labeled points and a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace<T> {
    labels: Vec<String>,
    dist: Vec<Vec<T>>,
}

impl<T: Scalar> MetricSpace<T> {
    /// Validates the matrix (exact comparisons, no slack) and builds the space.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<T>>) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                rows: dist.len(),
                cols: dist.first().map_or(0, Vec::len),
                labels: n,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        for i in 0..n {
            if dist[i][i] != T::zero() {
                return Err(Error::NonzeroDiagonal(labels[i].clone()));
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::NotSymmetric(labels[i].clone(), labels[j].clone()));
                }
                if dist[i][j] <= T::zero() {
                    return Err(Error::NegativeOrZeroOffDiagonal(
                        labels[i].clone(),
                        labels[j].clone(),
                    ));
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    if j != i && j != k && dist[i][k] > dist[i][j] + dist[j][k] {
                        return Err(Error::TriangleViolation(
                            labels[i].clone(),
                            labels[j].clone(),
                            labels[k].clone(),
                        ));
                    }
                }
            }
        }
        Ok(Self { labels, dist })
    }

    /// Convenience constructor from string slices.
    pub fn from_rows(labels: &[&str], dist: Vec<Vec<T>>) -> Result<Self> {
        Self::new(labels.iter().map(|s| s.to_string()).collect(), dist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.dist
    }

    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Unordered pairs `(i, j)` with `i < j`, lexicographic.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn diameter(&self) -> T {
        self.pairs()
            .fold(T::zero(), |acc, (i, j)| acc.max_of(self.dist[i][j]))
    }

    /// Genericity data: the minimum of all triangle slacks and distance gaps.
    pub fn delta(&self) -> Result<GenericityReport<T>> {
        let n = self.len();
        if n < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: n });
        }
        if n == 2 {
            return Ok(GenericityReport {
                is_generic: true,
                delta: self.dist[0][1],
                witness: DeltaWitness::SinglePair(0, 1),
            });
        }
        let d = &self.dist;
        let mut best: Option<(T, DeltaWitness)> = None;
        let mut consider = |value: T, witness: DeltaWitness| {
            if best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, witness));
            }
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i != j && j != k && i != k {
                        consider(d[i][j] + d[j][k] - d[i][k], DeltaWitness::Triangle(i, j, k));
                    }
                }
            }
        }
        let pairs: Vec<_> = self.pairs().collect();
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for &(p, q) in &pairs[a + 1..] {
                consider((d[i][j] - d[p][q]).abs(), DeltaWitness::PairGap((i, j), (p, q)));
            }
        }
        let (delta, witness) = best.expect("n >= 3 yields at least one triple");
        Ok(GenericityReport {
            is_generic: delta > T::zero(),
            delta,
            witness,
        })
    }

    /// Sorted, halved pairwise distances. Ties keep lexicographic pair order.
    pub fn nu(&self) -> Result<NuImage<T>> {
        let n = self.len();
        if n < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: n });
        }
        let mut pair_order: Vec<(usize, usize)> = self.pairs().collect();
        pair_order.sort_by(|&(a, b), &(c, d)| {
            self.dist[a][b]
                .partial_cmp(&self.dist[c][d])
                .expect("distances are comparable")
        });
        let vector = pair_order
            .iter()
            .map(|&(i, j)| self.dist[i][j].half())
            .collect();
        Ok(NuImage { vector, pair_order })
    }

    /// Kuratowski embedding: point `i` goes to row `i` of the distance matrix.
    pub fn kuratowski(&self) -> PointCloud<T> {
        PointCloud {
            labels: self.labels.clone(),
            dim: self.len().max(1),
            coords: if self.is_empty() {
                Vec::new()
            } else {
                self.dist.clone()
            },
        }
    }

    /// Multiplies every distance by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if c <= T::zero() {
            return Err(Error::NonpositiveScale(c.as_f64()));
        }
        Ok(Self {
            labels: self.labels.clone(),
            dist: self
                .dist
                .iter()
                .map(|row| row.iter().map(|&x| x * c).collect())
                .collect(),
        })
    }

    /// Lossy conversion to another scalar type, revalidated.
    pub fn convert<U: Scalar>(&self) -> Result<MetricSpace<U>> {
        MetricSpace::new(
            self.labels.clone(),
            self.dist
                .iter()
                .map(|row| row.iter().map(|&x| U::lit(x.as_f64())).collect())
                .collect(),
        )
    }
}

/// Validating constructor.
pub fn make_space<T: Scalar>(labels: Vec<String>, matrix: Vec<Vec<T>>) -> Result<MetricSpace<T>> {
    MetricSpace::new(labels, matrix)
}

pub fn delta<T: Scalar>(x: &MetricSpace<T>) -> Result<GenericityReport<T>> {
    x.delta()
}

pub fn nu<T: Scalar>(x: &MetricSpace<T>) -> Result<NuImage<T>> {
    x.nu()
}

pub fn kuratowski<T: Scalar>(x: &MetricSpace<T>) -> PointCloud<T> {
    x.kuratowski()
}

pub fn scale_space<T: Scalar>(x: &MetricSpace<T>, c: T) -> Result<MetricSpace<T>> {
    x.scaled(c)
}

/// `n` points at mutual distance `d`. With `d = 1` this is the unit simplex space.
pub fn simplex_space<T: Scalar>(n: usize, d: T) -> Result<MetricSpace<T>> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if d <= T::zero() {
        return Err(Error::NonpositiveScale(d.as_f64()));
    }
    let dist = (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::zero() } else { d }).collect())
        .collect();
    MetricSpace::new(point_labels("x", n), dist)
}

const GENERATOR_ATTEMPTS: usize = 1000;

/// Seeded generic space with distances drawn from `[scale, 4/3 scale)`.
///
/// Any two distances in the band sum to at least `2 scale`, which exceeds the
/// largest possible third side, so every triangle is strict. Only exact ties
/// between samples can break genericity; those are retried.
pub fn random_generic<T: Scalar>(n: usize, seed: u64, scale: f64) -> Result<MetricSpace<T>> {
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::NonpositiveScale(scale));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATOR_ATTEMPTS {
        let mut dist = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = T::lit(rng.gen_range(scale..scale * 4.0 / 3.0));
                dist[i][j] = v;
                dist[j][i] = v;
            }
        }
        let Ok(space) = MetricSpace::new(point_labels("x", n), dist) else {
            continue;
        };
        if space.delta()?.is_generic {
            return Ok(space);
        }
    }
    Err(Error::GeneratorExhausted(GENERATOR_ATTEMPTS))
}

pub(crate) fn point_labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Which configuration realizes `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaWitness {
    /// Slack `d(i,j) + d(j,k) - d(i,k)`.
    Triangle(usize, usize, usize),
    /// Gap `|d(i,j) - d(p,q)|`.
    PairGap((usize, usize), (usize, usize)),
    /// Two-point space: delta is the distance itself.
    SinglePair(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenericityReport<T> {
    pub is_generic: bool,
    pub delta: T,
    pub witness: DeltaWitness,
}

/// Output of [`MetricSpace::nu`]: the vector and which pair sits at each rank.
#[derive(Debug, Clone, PartialEq)]
pub struct NuImage<T> {
    pub vector: Vec<T>,
    pub pair_order: Vec<(usize, usize)>,
}

impl<T: Scalar> NuImage<T> {
    pub fn to_cloud(&self, label: &str) -> PointCloud<T> {
        PointCloud {
            labels: vec![label.to_string()],
            dim: self.vector.len(),
            coords: vec![self.vector.clone()],
        }
    }
}

/// Labeled points in ℓ∞^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<T> {
    labels: Vec<String>,
    dim: usize,
    coords: Vec<Vec<T>>,
}

impl<T: Scalar> PointCloud<T> {
    pub fn new(labels: Vec<String>, dim: usize, coords: Vec<Vec<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if labels.len() != coords.len() {
            return Err(Error::ShapeMismatch {
                rows: coords.len(),
                cols: dim,
                labels: labels.len(),
            });
        }
        if let Some(bad) = coords.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch(bad.len(), dim));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, dim, coords })
    }

    pub fn from_points(points: &[(&str, Vec<T>)]) -> Result<Self> {
        let dim = points.first().map_or(0, |(_, c)| c.len());
        Self::new(
            points.iter().map(|(l, _)| l.to_string()).collect(),
            dim,
            points.iter().map(|(_, c)| c.clone()).collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[Vec<T>] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> T {
        linf(&self.coords[i], &self.coords[j])
    }

    /// The metric the cloud inherits from ℓ∞; fails on coincident points.
    pub fn induced_metric(&self) -> Result<MetricSpace<T>> {
        let n = self.len();
        let dist = (0..n)
            .map(|i| (0..n).map(|j| self.dist(i, j)).collect())
            .collect();
        MetricSpace::new(self.labels.clone(), dist)
    }

    /// Appends constant coordinates up to dimension `dim`; ℓ∞ distances are unchanged.
    pub fn padded(&self, dim: usize, value: T) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::DimensionMismatch(dim, self.dim));
        }
        let coords = self
            .coords
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.resize(dim, value);
                c
            })
            .collect();
        Ok(Self {
            labels: self.labels.clone(),
            dim,
            coords,
        })
    }

    /// Per-coordinate `(min + max) / 2`.
    pub fn midpoint(&self) -> Vec<T> {
        (0..self.dim)
            .map(|i| {
                let (lo, hi) = self.coords.iter().fold(
                    (self.coords[0][i], self.coords[0][i]),
                    |(lo, hi), c| (lo.min_of(c[i]), hi.max_of(c[i])),
                );
                (lo + hi).half()
            })
            .collect()
    }

    pub fn translated(&self, shift: &[T]) -> Self {
        Self {
            labels: self.labels.clone(),
            dim: self.dim,
            coords: self
                .coords
                .iter()
                .map(|c| c.iter().zip(shift).map(|(&x, &s)| x + s).collect())
                .collect(),
        }
    }

    pub fn diameter(&self) -> T {
        let n = self.len();
        let mut best = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                best = best.max_of(self.dist(i, j));
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn s345() -> MetricSpace<f64> {
        MetricSpace::from_rows(
            &["a", "b", "c"],
            vec![vec![0., 3., 4.], vec![3., 0., 5.], vec![4., 5., 0.]],
        )
        .unwrap()
    }

    #[test]
    fn validation_errors_name_their_witnesses() {
        assert!(s345().len() == 3);
        let asym = MetricSpace::from_rows(&["a", "b"], vec![vec![0., 1.], vec![2., 0.]]);
        assert_eq!(asym, Err(Error::NotSymmetric("a".into(), "b".into())));
        let tri = MetricSpace::from_rows(
            &["a", "b", "c"],
            vec![vec![0., 1., 5.], vec![1., 0., 1.], vec![5., 1., 0.]],
        );
        assert_eq!(
            tri,
            Err(Error::TriangleViolation("a".into(), "b".into(), "c".into()))
        );
        let zero = MetricSpace::from_rows(&["a", "b"], vec![vec![0., 0.], vec![0., 0.]]);
        assert!(matches!(zero, Err(Error::NegativeOrZeroOffDiagonal(..))));
        let diag = MetricSpace::from_rows(&["a", "b"], vec![vec![1., 1.], vec![1., 0.]]);
        assert!(matches!(diag, Err(Error::NonzeroDiagonal(_))));
        let dup = MetricSpace::from_rows(&["a", "a"], vec![vec![0., 1.], vec![1., 0.]]);
        assert!(matches!(dup, Err(Error::DuplicateLabel(_))));
        let shape = MetricSpace::from_rows(&["a", "b"], vec![vec![0., 1.]]);
        assert!(matches!(shape, Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn delta_of_small_spaces() {
        let r = s345().delta().unwrap();
        assert_eq!(r.delta, 1.0);
        assert!(r.is_generic);
        assert_eq!(r.witness, DeltaWitness::PairGap((0, 1), (0, 2)));

        let two = MetricSpace::from_rows(&["p", "q"], vec![vec![0., 7.], vec![7., 0.]]).unwrap();
        assert_eq!(two.delta().unwrap().delta, 7.0);

        let eq = simplex_space(3, 1.0_f64).unwrap().delta().unwrap();
        assert_eq!(eq.delta, 0.0);
        assert!(!eq.is_generic);

        let one = MetricSpace::from_rows(&["p"], vec![vec![0.0]]).unwrap();
        assert_eq!(one.delta(), Err(Error::TooFewPoints { needed: 2, got: 1 }));
    }

    #[test]
    fn nu_sorts_and_halves() {
        let v = s345().nu().unwrap();
        assert_eq!(v.vector, vec![1.5, 2.0, 2.5]);
        assert_eq!(v.pair_order, vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(simplex_space(3, 1.0_f64).unwrap().nu().unwrap().vector, vec![0.5; 3]);

        // a generic assignment of {1..6} onto the six pairs of a 4-point space
        let four = MetricSpace::from_rows(
            &["a", "b", "c", "d"],
            vec![
                vec![0., 6., 4., 5.],
                vec![6., 0., 3., 2.],
                vec![4., 3., 0., 1.],
                vec![5., 2., 1., 0.],
            ],
        )
        .unwrap();
        assert_eq!(four.nu().unwrap().vector, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
        // ties keep lexicographic pair order
        assert_eq!(
            simplex_space(3, 1.0_f64).unwrap().nu().unwrap().pair_order,
            vec![(0, 1), (0, 2), (1, 2)]
        );
    }

    #[test]
    fn kuratowski_rows() {
        let two = MetricSpace::from_rows(&["p", "q"], vec![vec![0., 3.], vec![3., 0.]]).unwrap();
        let k = two.kuratowski();
        assert_eq!(k.coords(), &[vec![0., 3.], vec![3., 0.]]);
        assert_eq!(k.dist(0, 1), 3.0);

        let s = s345();
        let k = s.kuratowski();
        for (i, j) in s.pairs() {
            assert_eq!(k.dist(i, j), s.dist(i, j));
        }

        let one = MetricSpace::from_rows(&["p"], vec![vec![0.0]]).unwrap();
        let k = one.kuratowski();
        assert_eq!((k.dim(), k.coords()), (1, &[vec![0.0]][..]));
    }

    #[test]
    fn simplex_and_scaling() {
        let d3 = simplex_space(3, 1.0_f64).unwrap();
        assert!(d3.pairs().all(|(i, j)| d3.dist(i, j) == 1.0));
        let d2 = simplex_space(2, 5.0).unwrap();
        assert_eq!(d2.dist(0, 1), 5.0);
        assert_eq!(simplex_space(4, 1.0_f64).unwrap().len(), 4);

        let s = s345().scaled(2.0).unwrap();
        assert_eq!(s.matrix()[0], vec![0., 6., 8.]);
        assert_eq!(s.matrix()[1][2], 10.0);
        assert_eq!(s345().scaled(1.0).unwrap(), s345());
        assert_eq!(s345().scaled(0.5).unwrap().delta().unwrap().delta, 0.5);
        assert_eq!(s345().scaled(0.0), Err(Error::NonpositiveScale(0.0)));
    }

    #[test]
    fn random_generic_is_deterministic_and_generic() {
        let a: MetricSpace<f64> = random_generic(3, 42, 1.0).unwrap();
        let b: MetricSpace<f64> = random_generic(3, 42, 1.0).unwrap();
        assert_eq!(a, b);
        assert!(a.delta().unwrap().is_generic);

        let four: MetricSpace<f64> = random_generic(4, 7, 2.0).unwrap();
        let mut ds: Vec<f64> = four.pairs().map(|(i, j)| four.dist(i, j)).collect();
        ds.sort_by(f64::total_cmp);
        ds.dedup();
        assert_eq!(ds.len(), 6);
        assert!(ds.iter().all(|&d| (2.0..4.0).contains(&d)));
    }

    #[test]
    fn exact_rational_space() {
        let r = |n| Rational64::from_integer(n);
        let s = MetricSpace::from_rows(
            &["a", "b", "c"],
            vec![vec![r(0), r(3), r(4)], vec![r(3), r(0), r(5)], vec![r(4), r(5), r(0)]],
        )
        .unwrap();
        assert_eq!(s.nu().unwrap().vector[0], Rational64::new(3, 2));
        assert_eq!(s.delta().unwrap().delta, r(1));
    }

    #[test]
    fn cloud_padding_and_midpoint() {
        let c = PointCloud::from_points(&[("a", vec![0.0, 4.0]), ("b", vec![2.0, 1.0])]).unwrap();
        let p = c.padded(4, 0.0).unwrap();
        assert_eq!(p.dim(), 4);
        assert_eq!(p.dist(0, 1), c.dist(0, 1));
        assert_eq!(c.midpoint(), vec![1.0, 2.5]);
        assert!(PointCloud::<f64>::from_points(&[("a", vec![0.0]), ("b", vec![1.0, 2.0])]).is_err());
        assert!(matches!(
            PointCloud::from_points(&[("a", vec![1.0]), ("b", vec![1.0])])
                .unwrap()
                .induced_metric(),
            Err(Error::NegativeOrZeroOffDiagonal(..))
        ));
    }
}
