//! Seeded random ensembles: GOE matrices, random regular graphs, uniform
//! points on the sphere and the Delaunay/Voronoi graphs derived from them.
//!
//! Every generator is a pure function of its parameters and a [`Seed`]; the
//! random stream is ChaCha8, so output is identical across platforms.

mod hull;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::{Graph, SymmetricMatrix};

pub use hull::{convex_hull, convex_hull_with, delaunay_skeleton, voronoi_dual, HullComplex, HullOptions};

/// 64-bit seed for every generator in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent child seed for stream `index` (SplitMix64 of a counter
    /// offset from the parent). Children of one parent never depend on how
    /// many siblings are drawn, so parallel consumers stay reproducible.
    pub fn derive(self, index: u64) -> Seed {
        let counter = self
            .0
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index.wrapping_add(1)));
        Seed(splitmix64(counter))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Points on the unit 2-sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet3 {
    points: Vec<[f64; 3]>,
}

impl PointSet3 {
    /// Accepts points within `1e-12` of unit norm.
    pub fn new(points: Vec<[f64; 3]>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "point {i} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(PointSet3 { points })
    }

    /// Wraps arbitrary points without the unit-norm check; hull construction
    /// works for any point cloud.
    pub fn unchecked(points: Vec<[f64; 3]>) -> Self {
        PointSet3 { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }
}

/// GOE-type matrix: entries on and above the diagonal are i.i.d. N(0, 1),
/// drawn row by row, and mirrored below.
///
/// With unit variance everywhere the spectrum fills `[-2 sqrt(n), 2 sqrt(n)]`
/// asymptotically; divide eigenvalues by `sqrt(n)` before comparing to the
/// radius-2 semicircle.
pub fn sample_goe(n: usize, seed: Seed) -> Result<SymmetricMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("GOE dimension must be at least 1".into()));
    }
    let mut rng = seed.rng();
    Ok(SymmetricMatrix::from_upper(n, |_, _| rng.sample(StandardNormal)))
}

/// Default cap on configuration-model restarts.
pub const DEFAULT_RESTART_CAP: usize = 1_000_000;

/// Random simple connected `d`-regular graph (configuration model).
pub fn sample_regular_graph(n: usize, d: usize, seed: Seed) -> Result<Graph> {
    sample_regular_graph_with_cap(n, d, seed, DEFAULT_RESTART_CAP)
}

/// Configuration model with full restart: `n * d` stubs are matched by a
/// uniformly random perfect matching; any loop, repeated edge or
/// disconnected outcome discards the whole pairing. Accepted outputs are
/// uniform over simple connected `d`-regular graphs on labelled vertices.
pub fn sample_regular_graph_with_cap(n: usize, d: usize, seed: Seed, restart_cap: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if d >= n {
        return Err(Error::InvalidParameter(format!(
            "degree {d} must be smaller than the vertex count {n}"
        )));
    }
    if (n * d) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "n * d = {} is odd; no {d}-regular graph on {n} vertices exists",
            n * d
        )));
    }
    let mut rng = seed.rng();
    let mut stubs: Vec<usize> = Vec::with_capacity(n * d);
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    for _ in 0..restart_cap {
        stubs.clear();
        stubs.extend((0..n).flat_map(|v| std::iter::repeat(v).take(d)));
        adj.iter_mut().for_each(Vec::clear);
        if try_pairing(&mut stubs, &mut adj, &mut rng) {
            let edges = adj
                .iter()
                .enumerate()
                .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
            let g = Graph::new(n, edges)?;
            if g.is_connected() {
                return Ok(g);
            }
        }
    }
    Err(Error::RestartCapExceeded {
        n,
        d,
        restarts: restart_cap,
    })
}

/// Sequential uniform matching: the stub at position `i` is paired with a
/// uniformly chosen stub among the remaining ones. Returns false at the first
/// loop or repeated edge.
fn try_pairing(stubs: &mut [usize], adj: &mut [Vec<usize>], rng: &mut ChaCha8Rng) -> bool {
    let len = stubs.len();
    let mut i = 0;
    while i < len {
        let j = rng.gen_range(i + 1..len);
        stubs.swap(i + 1, j);
        let (u, v) = (stubs[i], stubs[i + 1]);
        if u == v || adj[u].contains(&v) {
            return false;
        }
        adj[u].push(v);
        adj[v].push(u);
        i += 2;
    }
    true
}

/// `n` i.i.d. uniform points on the unit sphere (normalized Gaussian
/// triples).
pub fn sample_sphere_points(n: usize, seed: Seed) -> Result<PointSet3> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!(
            "need at least 4 sphere points, got {n}"
        )));
    }
    let mut rng = seed.rng();
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let g: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        if norm < 1e-150 {
            continue;
        }
        points.push([g[0] / norm, g[1] / norm, g[2] / norm]);
    }
    Ok(PointSet3 { points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goe_is_deterministic_and_symmetric() {
        let a = sample_goe(3, Seed(11)).unwrap();
        let b = sample_goe(3, Seed(11)).unwrap();
        assert_eq!(a, b);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a.get(i, j).to_bits(), a.get(j, i).to_bits());
            }
        }
        assert_ne!(a, sample_goe(3, Seed(12)).unwrap());
    }

    #[test]
    fn goe_single_entry_is_a_normal_draw() {
        let m = sample_goe(1, Seed(5)).unwrap();
        let expected: f64 = Seed(5).rng().sample(StandardNormal);
        assert_eq!(m.get(0, 0), expected);
        assert!(sample_goe(0, Seed(5)).is_err());
    }

    #[test]
    fn goe_off_diagonal_mean_is_near_zero() {
        let n = 1000;
        let m = sample_goe(n, Seed(2024)).unwrap();
        let count = n * (n - 1) / 2;
        let sum: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j))
            .sum();
        let mean = sum / count as f64;
        assert!(mean.abs() < 4.0 / (count as f64).sqrt(), "mean {mean}");
        let var: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (m.get(i, j) - mean).powi(2))
            .sum::<f64>()
            / count as f64;
        assert!((var - 1.0).abs() < 0.01, "variance {var}");
    }

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        let g = sample_regular_graph(4, 3, Seed(1)).unwrap();
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn regular_graph_preconditions() {
        assert!(matches!(
            sample_regular_graph(3001, 3, Seed(0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            sample_regular_graph(4, 4, Seed(0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            sample_regular_graph(4, 0, Seed(0)),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn regular_graph_restart_cap_reports_diagnostic() {
        // A perfect matching on 10 vertices is never connected.
        let err = sample_regular_graph_with_cap(10, 1, Seed(3), 50).unwrap_err();
        assert!(matches!(
            err,
            Error::RestartCapExceeded {
                n: 10,
                d: 1,
                restarts: 50
            }
        ));
    }

    #[test]
    fn regular_graphs_are_simple_regular_connected() {
        for (n, d, s) in [(50, 3, 1), (51, 4, 2), (40, 5, 3), (30, 6, 4), (3000, 3, 5)] {
            let g = sample_regular_graph(n, d, Seed(s)).unwrap();
            let stats = g.degree_stats();
            assert_eq!((stats.min, stats.max, stats.mean), (d, d, d as f64));
            assert!(g.is_connected());
            assert_eq!(g, sample_regular_graph(n, d, Seed(s)).unwrap());
        }
    }

    #[test]
    fn sphere_points_are_unit_and_centered() {
        let pts = sample_sphere_points(10_000, Seed(9)).unwrap();
        assert!(PointSet3::new(pts.points().to_vec()).is_ok());
        let mean_z = pts.points().iter().map(|p| p[2]).sum::<f64>() / 1e4;
        assert!(mean_z.abs() < 4.0 / 100.0, "mean z {mean_z}");
        assert_eq!(pts, sample_sphere_points(10_000, Seed(9)).unwrap());
        assert!(sample_sphere_points(3, Seed(9)).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let s = Seed(42);
        assert_ne!(s.derive(0), s.derive(1));
        assert_eq!(s.derive(7), Seed(42).derive(7));
        assert_ne!(s.derive(0), Seed(43).derive(0));
    }
}
