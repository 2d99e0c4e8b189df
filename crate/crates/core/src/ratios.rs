//! Steiner ratio, Steiner–Gromov ratio and Steiner subratio of concrete
//! boundaries, the simplex-family experiment, and the randomized check that
//! shortest trees near a generic space are minimal fillings.

use num_rational::Rational64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::embed::{make_anchor, nu_inverse, theorem1_radius, GenericAnchor};
use crate::error::{Error, Result};
use crate::filling::mf;
use crate::gh::gh_distance;
use crate::metric::{simplex_space, MetricSpace, PointCloud};
use crate::scalar::Scalar;
use crate::steiner::smt_linf;
use crate::trees::mst;

/// Equality tolerance between independently computed lengths.
pub const CROSS_CHECK_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport<T> {
    pub smt_len: T,
    pub mst_len: T,
    pub mf_len: T,
    /// `smt / mst`
    pub sr: T,
    /// `mf / mst`
    pub sgr: T,
    /// `mf / smt`
    pub ssr: T,
    pub context: String,
}

impl<T: Scalar> RatioReport<T> {
    pub fn from_lengths(smt_len: T, mst_len: T, mf_len: T, context: String) -> Self {
        Self {
            sr: smt_len / mst_len,
            sgr: mf_len / mst_len,
            ssr: mf_len / smt_len,
            smt_len,
            mst_len,
            mf_len,
            context,
        }
    }

    /// `mf <= smt <= mst`, each up to `tol`.
    pub fn chain_holds(&self, tol: T) -> bool {
        self.mf_len <= self.smt_len + tol && self.smt_len <= self.mst_len + tol
    }
}

/// All three ratios for a boundary in ℓ∞^k.
pub fn ratios_linf<T: Scalar>(terminals: &PointCloud<T>) -> Result<RatioReport<T>> {
    let smt = smt_linf(terminals)?;
    let metric = terminals.induced_metric()?;
    let mst_len = mst(&metric).length();
    let mf_len = mf(&metric)?.length;
    Ok(RatioReport::from_lengths(
        smt.length,
        mst_len,
        mf_len,
        format!("l-infinity, dimension {}", terminals.dim()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueSource {
    /// Minimized over all binary topologies.
    LinearProgram,
    /// The star with spokes of length one half.
    Analytic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexRow<T> {
    pub n: usize,
    pub mf: T,
    pub mst: T,
    pub ratio: T,
    pub mf_source: ValueSource,
    /// `(n/2) / (n-1)` in exact arithmetic.
    pub exact_ratio: Rational64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexTable<T> {
    pub rows: Vec<SimplexRow<T>>,
    /// Ratios strictly decrease with `n` and stay above one half.
    pub decreasing_above_half: bool,
}

pub const SIMPLEX_LP_MAX: usize = 6;
pub const SIMPLEX_TABLE_MAX: usize = 12;

/// `(n/2) / (n - 1)`.
pub fn simplex_ratio(n: usize) -> Rational64 {
    Rational64::new(n as i64, 2 * (n as i64 - 1))
}

/// `ratio(n) - 1/2 = 1 / (2(n - 1))`, exactly.
pub fn simplex_gap_law(n: usize) -> bool {
    simplex_ratio(n) - Rational64::new(1, 2) == Rational64::new(1, 2 * (n as i64 - 1))
}

/// `mf`, `mst` and their ratio on the unit simplex spaces for `n = 2..=n_max`.
/// Minimal fillings come from the LP up to six points and from the star
/// formula beyond.
pub fn simplex_experiment<T: Scalar>(n_max: usize) -> Result<SimplexTable<T>> {
    if !(2..=SIMPLEX_TABLE_MAX).contains(&n_max) {
        return Err(Error::InvalidParameter(format!(
            "n_max must lie in 2..={SIMPLEX_TABLE_MAX}, got {n_max}"
        )));
    }
    let rows = (2..=n_max)
        .map(|n| {
            let space = simplex_space(n, T::one())?;
            let (mf_len, source) = if n <= SIMPLEX_LP_MAX {
                (mf(&space)?.length, ValueSource::LinearProgram)
            } else {
                (T::of_usize(n).half(), ValueSource::Analytic)
            };
            let mst_len = mst(&space).length();
            Ok(SimplexRow {
                n,
                mf: mf_len,
                mst: mst_len,
                ratio: mf_len / mst_len,
                mf_source: source,
                exact_ratio: simplex_ratio(n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let half = Rational64::new(1, 2);
    let decreasing_above_half = rows.iter().all(|r| r.exact_ratio > half)
        && rows.windows(2).all(|w| w[1].exact_ratio < w[0].exact_ratio);
    Ok(SimplexTable {
        rows,
        decreasing_above_half,
    })
}

/// One randomized check that shortest trees near a generic space are minimal fillings.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Trial<T> {
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    /// `delta(X) / 6`
    pub ball_radius: T,
    /// Sampling radius `(delta / 6) / (1 + 2(m - 1))`.
    pub radius: T,
    /// `nu` images of the sampled boundary spaces.
    pub boundary: Vec<Vec<T>>,
    pub smt_len: T,
    pub mf_len: T,
    pub mst_len: T,
    /// Largest ℓ∞ offset of any Steiner tree vertex from `nu(X)`.
    pub max_vertex_offset: T,
    pub lengths_agree: bool,
    pub vertices_contained: bool,
    pub chain_holds: bool,
}

impl<T> Theorem1Trial<T> {
    pub fn passed(&self) -> bool {
        self.lengths_agree && self.vertices_contained && self.chain_holds
    }
}

/// Samples `m` spaces within [`theorem1_radius`] of the generic space `x`,
/// solves the Steiner problem for their `nu` images in ℓ∞^N, and compares it
/// with the minimal filling of the boundary measured by brute-force GH
/// distances. Also checks that every tree vertex lands in the isometry ball
/// and pulls back to a metric space.
pub fn verify_theorem1<T: Scalar>(
    x: &MetricSpace<T>,
    m: usize,
    seed: u64,
    budget: u128,
) -> Result<Theorem1Trial<T>> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidParameter(format!(
            "boundary size must lie in 2..=4, got {m}"
        )));
    }
    let radius = theorem1_radius(x, m)?;
    let anchor = GenericAnchor::from_space(x.clone())?;
    let tol = T::lit(CROSS_CHECK_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reach = radius.as_f64() * (1.0 - 1e-6);
    let boundary: Vec<Vec<T>> = (0..m)
        .map(|_| {
            anchor
                .center
                .iter()
                .map(|&c| c + T::lit(rng.gen_range(-reach..=reach)))
                .collect()
        })
        .collect();
    let spaces = boundary
        .iter()
        .map(|w| nu_inverse(&anchor, w).map_err(|e| Error::SampleOutsideBall(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    for (s, w) in spaces.iter().zip(&boundary) {
        if s.nu()?.vector != *w {
            return Err(Error::SampleOutsideBall("nu does not invert".into()));
        }
    }

    let labels: Vec<String> = (0..m).map(|i| format!("m{i}")).collect();
    let cloud = PointCloud::new(labels.clone(), anchor.dim(), boundary.clone())?;
    let smt = smt_linf(&cloud)?;

    let mut gh = vec![vec![T::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let d = gh_distance(&spaces[i], &spaces[j], budget)?;
            gh[i][j] = d;
            gh[j][i] = d;
        }
    }
    let gh_space = MetricSpace::new(labels, gh)?;
    let mf_len = mf(&gh_space)?.length;
    let mst_len = mst(&gh_space).length();

    let positions = smt.vertex_positions();
    let max_vertex_offset = positions
        .iter()
        .fold(T::zero(), |acc, p| acc.max_of(anchor.offset(p)));
    let vertices_contained = max_vertex_offset < anchor.ball_radius
        && positions.iter().all(|p| nu_inverse(&anchor, p).is_ok());

    Ok(Theorem1Trial {
        seed,
        n: x.len(),
        m,
        ball_radius: anchor.ball_radius,
        radius,
        boundary,
        lengths_agree: (smt.length - mf_len).abs() <= tol,
        chain_holds: mf_len <= smt.length + tol && smt.length <= mst_len + tol,
        smt_len: smt.length,
        mf_len,
        mst_len,
        max_vertex_offset,
        vertices_contained,
    })
}

/// Per-trial seeds drawn from a ChaCha8 stream keyed by `seed`.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| rng.next_u64()).collect()
}

/// Runs [`verify_theorem1`] on `trials` seeded generic `n`-point spaces, each
/// scaled so its isometry ball has radius one.
pub fn theorem1_suite(
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    budget: u128,
) -> Result<Vec<Theorem1Trial<f64>>> {
    if !(3..=4).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "anchor size must be 3 or 4, got {n}"
        )));
    }
    trial_seeds(seed, trials)
        .into_par_iter()
        .map(|s| {
            let x = make_anchor::<f64>(n, 1.0, s)?.space;
            verify_theorem1(&x, m, s, budget)
        })
        .collect()
}
