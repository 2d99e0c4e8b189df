//! Embeddings into Gromov–Hausdorff space.
//!
//! Near a generic `k`-point space the map `nu` (sorted half-distances) is an
//! isometry onto an ℓ∞ ball of radius `delta / 6`. Inverting it on that ball
//! turns points of ℓ∞^N, `N = k(k-1)/2`, into `k`-point metric spaces whose
//! mutual GH distances are the ℓ∞ distances of the points. Combined with the
//! Kuratowski embedding this places any finite metric space isometrically
//! inside the `k`-point spaces, and realizes minimal fillings as trees whose
//! vertices are metric spaces.

use crate::error::{Error, Result};
use crate::filling::{filling_extension, mf, FillingSolution};
use crate::gh::gh_distance;
use crate::metric::{random_generic, MetricSpace, PointCloud};
use crate::scalar::{linf, Scalar};
use crate::trees::WeightedTree;

/// A generic space together with the pair ordering that inverts `nu` near it.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericAnchor<T> {
    pub space: MetricSpace<T>,
    /// `pair_order[m]` is the pair holding the `m`-th smallest distance.
    pub pair_order: Vec<(usize, usize)>,
    pub delta: T,
    /// `delta / 6`
    pub ball_radius: T,
    /// `nu(space)`
    pub center: Vec<T>,
}

impl<T: Scalar> GenericAnchor<T> {
    pub fn from_space(space: MetricSpace<T>) -> Result<Self> {
        let report = space.delta()?;
        if !report.is_generic {
            return Err(Error::NotGeneric(report.delta.as_f64()));
        }
        let image = space.nu()?;
        Ok(Self {
            pair_order: image.pair_order,
            center: image.vector,
            ball_radius: report.delta / T::of_usize(6),
            delta: report.delta,
            space,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// ℓ∞ distance from the anchor's `nu` image.
    pub fn offset(&self, w: &[T]) -> T {
        linf(w, &self.center)
    }

    pub fn contains(&self, w: &[T]) -> bool {
        w.len() == self.dim() && self.offset(w) < self.ball_radius
    }
}

/// The `k`-point space whose `nu` image is `w`.
pub fn nu_inverse<T: Scalar>(anchor: &GenericAnchor<T>, w: &[T]) -> Result<MetricSpace<T>> {
    if w.len() != anchor.dim() {
        return Err(Error::DimensionMismatch(w.len(), anchor.dim()));
    }
    let offset = anchor.offset(w);
    if offset >= anchor.ball_radius {
        return Err(Error::OutsideBall {
            distance: offset.as_f64(),
            radius: anchor.ball_radius.as_f64(),
        });
    }
    let k = anchor.space.len();
    let mut dist = vec![vec![T::zero(); k]; k];
    for (&(i, j), &value) in anchor.pair_order.iter().zip(w) {
        dist[i][j] = value + value;
        dist[j][i] = value + value;
    }
    MetricSpace::new(anchor.space.labels().to_vec(), dist).map_err(|e| Error::NotAMetric(e.to_string()))
}

/// Seeded generic `k`-point anchor whose ball radius is at least `target_radius`.
pub fn make_anchor<T: Scalar>(k: usize, target_radius: T, seed: u64) -> Result<GenericAnchor<T>> {
    if k < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: k });
    }
    if target_radius <= T::zero() {
        return Err(Error::NonpositiveScale(target_radius.as_f64()));
    }
    let base: MetricSpace<T> = random_generic(k, seed, 1.0)?;
    let delta0 = base.delta()?.delta;
    let mut c = T::of_usize(6) * target_radius / delta0;
    // rounding can leave the scaled radius an ulp short
    for _ in 0..64 {
        let anchor = GenericAnchor::from_space(base.scaled(c)?)?;
        if anchor.ball_radius >= target_radius {
            return Ok(anchor);
        }
        c = c + c * T::lit(1e-12);
    }
    Err(Error::GeneratorExhausted(64))
}

/// Smallest `k` with `n <= k(k-1)/2`.
pub fn target_point_count(n: usize) -> usize {
    let mut k = 2;
    while k * (k - 1) / 2 < n {
        k += 1;
    }
    k
}

/// An isometric embedding of a finite space into the `k`-point spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingRecord<T> {
    pub anchor: GenericAnchor<T>,
    /// `nu` images, one per source point, labeled like the source.
    pub images: PointCloud<T>,
    /// `nu_inverse` of each image, aligned with the source labels.
    pub spaces: Vec<MetricSpace<T>>,
    pub scale_used: T,
}

impl<T: Scalar> EmbeddingRecord<T> {
    pub fn source_labels(&self) -> &[String] {
        self.images.labels()
    }
}

/// Kuratowski embedding, zero padding to `N = k(k-1)/2` coordinates,
/// recentring onto a generic anchor wide enough to hold the cloud, then
/// `nu_inverse` of every point.
pub fn embed_into_gh<T: Scalar>(x: &MetricSpace<T>, seed: u64) -> Result<EmbeddingRecord<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let k = target_point_count(n).max(3);
    let dim = k * (k - 1) / 2;
    let cloud = x.kuratowski().padded(dim, T::zero())?;
    let diameter = cloud.diameter();
    let anchor = make_anchor(k, diameter + diameter, seed)?;
    let mid = cloud.midpoint();
    let shift: Vec<T> = anchor
        .center
        .iter()
        .zip(&mid)
        .map(|(&c, &m)| c - m)
        .collect();
    let images = cloud.translated(&shift);
    let spaces = images
        .coords()
        .iter()
        .map(|w| nu_inverse(&anchor, w))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmbeddingRecord {
        anchor,
        images,
        spaces,
        scale_used: T::one(),
    })
}

/// A minimal filling carried into GH space.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization<T> {
    pub filling: FillingSolution<T>,
    /// Vertex set of the filling with its metric.
    pub extension: MetricSpace<T>,
    pub embedding: EmbeddingRecord<T>,
    /// Same topology as the filling; lengths are brute-force GH distances
    /// between the image spaces of adjacent vertices.
    pub image_tree: WeightedTree<T>,
}

pub const MAX_REALIZE_POINTS: usize = 5;

/// Computes a minimal filling of `x`, embeds its vertex set, and measures the
/// image tree in GH space. Fails if the image length differs from `mf(x)`
/// by more than `tol` (relative to the diameter when it exceeds one).
pub fn realize_filling<T: Scalar>(
    x: &MetricSpace<T>,
    seed: u64,
    budget: u128,
    tol: T,
) -> Result<Realization<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    if n > MAX_REALIZE_POINTS {
        return Err(Error::TooManyPoints {
            got: n,
            max: MAX_REALIZE_POINTS,
        });
    }
    let filling = mf(x)?;
    let extension = filling_extension(&filling.tree, x)?;
    let embedding = embed_into_gh(&extension, seed)?;
    let lengths = filling
        .tree
        .topology()
        .edges()
        .iter()
        .map(|&(a, b)| gh_distance(&embedding.spaces[a], &embedding.spaces[b], budget))
        .collect::<Result<Vec<_>>>()?;
    let image_tree = WeightedTree::new(filling.tree.topology().clone(), lengths, None)?;
    let slack = tol * x.diameter().max_of(T::one());
    if (image_tree.length() - filling.length).abs() > slack {
        return Err(Error::RealizationMismatch {
            expected: filling.length.as_f64(),
            got: image_tree.length().as_f64(),
        });
    }
    Ok(Realization {
        filling,
        extension,
        embedding,
        image_tree,
    })
}

/// Radius of the GH ball around a generic `x` in which every boundary of at
/// most `boundary_size` spaces has only minimal fillings as shortest trees:
/// `(delta / 6) / (1 + 2 (N - 1))`.
pub fn theorem1_radius<T: Scalar>(x: &MetricSpace<T>, boundary_size: usize) -> Result<T> {
    if boundary_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "boundary size must be at least 2, got {boundary_size}"
        )));
    }
    let report = x.delta()?;
    if !report.is_generic {
        return Err(Error::NotGeneric(report.delta.as_f64()));
    }
    let ball = report.delta / T::of_usize(6);
    Ok(ball / T::of_usize(1 + 2 * (boundary_size - 1)))
}
