//! Gromov–Hausdorff distances, Steiner minimal trees in ℓ∞^k and minimal
//! fillings of finite metric spaces, with exhaustive solvers for desk-sized
//! instances.
//!
//! Everything numeric is generic over [`Scalar`]: `f64` and `f32` use a small
//! tolerance, while [`Rational64`](num_rational::Rational64) runs the same
//! simplex and correspondence searches in exact arithmetic. The aliases below
//! fix the scalar to `f64`, which is what the file formats and the CLI use.

pub mod embed;
pub mod error;
pub mod filling;
pub mod gh;
pub mod io;
pub mod lp;
pub mod metric;
pub mod ratios;
pub mod scalar;
pub mod steiner;
pub mod trees;

pub use embed::{
    embed_into_gh, make_anchor, nu_inverse, realize_filling, target_point_count, theorem1_radius,
    EmbeddingRecord, GenericAnchor, Realization,
};
pub use error::{Error, Result};
pub use filling::{
    filling_extension, mf, mf_topology, mf_with_tol, verify_filling_characterization,
    FillingSolution, FillingVerdict,
};
pub use gh::{
    distortion, gh_distance, gh_distance_with_witness, gh_lower_bound, hausdorff_linf,
    Correspondence, GhResult, DEFAULT_BUDGET,
};
pub use metric::{
    delta, kuratowski, make_space, nu, random_generic, scale_space, simplex_space, DeltaWitness,
    GenericityReport, MetricSpace, NuImage, PointCloud,
};
pub use ratios::{
    ratios_linf, simplex_experiment, theorem1_suite, verify_theorem1, RatioReport, SimplexRow,
    SimplexTable, Theorem1Trial, ValueSource,
};
pub use scalar::{linf, Scalar};
pub use steiner::{smt_linf, smt_linf_with_tol, solve_topology, SteinerInstance, SteinerSolution};
pub use trees::{enumerate_topologies, mst, tree_length, TreeTopology, WeightedTree};

pub type FiniteMetricSpace = MetricSpace<f64>;
pub type PointCloudLinf = PointCloud<f64>;
pub type Tree = WeightedTree<f64>;
pub type Steiner = SteinerSolution<f64>;
pub type Filling = FillingSolution<f64>;
pub type Anchor = GenericAnchor<f64>;
pub type Embedding = EmbeddingRecord<f64>;
pub type Ratios = RatioReport<f64>;

/// Exact counterparts.
pub type ExactMetricSpace = MetricSpace<num_rational::Rational64>;
pub type ExactPointCloud = PointCloud<num_rational::Rational64>;

/// Numerical tolerances shared by solvers and checks.
pub mod tolerances {
    /// Simplex pivoting and zero-length contraction.
    pub const LP: f64 = 1e-9;
    /// Equality between two independently computed lengths.
    pub const CROSS_CHECK: f64 = crate::ratios::CROSS_CHECK_TOL;
    /// GH distance against an expected closed-form value.
    pub const GH: f64 = 1e-9;
}
