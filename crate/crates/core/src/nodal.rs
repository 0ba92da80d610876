//! Strong nodal domains of eigenvectors and the bounds they obey.
//!
//! A strong nodal domain is a connected component of the subgraph induced
//! by the vertices where an eigenvector is strictly positive (or strictly
//! negative). Counts are checked against
//!
//! * the upper bound `N(lambda_k) <= (d - 1) k` for graphs of maximal degree
//!   `d`, capped at the vertex count, and
//! * the lower bound `k + r - l - z` (at least 1), where `r` is the
//!   multiplicity of `lambda_k`, `l` the number of edges to delete to reach
//!   a forest and `z` the number of zero entries.

use crate::eigen::SpectralDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::union_find::DisjointSets;

/// Relative zero threshold: entries with `|v_i| <= ZERO_TOL_REL * max|v|`
/// count as zero.
pub const ZERO_TOL_REL: f64 = 1e-9;
/// Relative eigenvalue-cluster threshold, scaled by `||L||_F`.
pub const DEGENERACY_TOL_REL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodalCount {
    pub positive: usize,
    pub negative: usize,
    pub zeros: usize,
}

impl NodalCount {
    pub fn total(&self) -> usize {
        self.positive + self.negative
    }
}

/// Counts strong nodal domains of `v` on `g`. `zero_tol` defaults to
/// `ZERO_TOL_REL * max|v_i|`, which makes the counts scale-invariant.
pub fn strong_nodal_domains(g: &Graph, v: &[f64], zero_tol: Option<f64>) -> Result<NodalCount> {
    let n = g.n_vertices();
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    let tol = zero_tol.unwrap_or_else(|| ZERO_TOL_REL * v.iter().fold(0.0f64, |m, x| m.max(x.abs())));
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "zero tolerance {tol} must be non-negative"
        )));
    }
    // -1, 0, +1 per vertex.
    let sign: Vec<i8> = v
        .iter()
        .map(|&x| {
            if x > tol {
                1
            } else if x < -tol {
                -1
            } else {
                0
            }
        })
        .collect();
    let mut sets = DisjointSets::new(n);
    let mut merges = [0usize; 2];
    for &(a, b) in g.edges() {
        if sign[a] != 0 && sign[a] == sign[b] && sets.union(a, b) {
            merges[usize::from(sign[a] > 0)] += 1;
        }
    }
    let positives = sign.iter().filter(|&&s| s > 0).count();
    let negatives = sign.iter().filter(|&&s| s < 0).count();
    Ok(NodalCount {
        positive: positives - merges[1],
        negative: negatives - merges[0],
        zeros: n - positives - negatives,
    })
}

/// `(d - 1) k`, capped at `n_vertices` when given. `k` is the 1-based
/// eigenvalue ordinal.
pub fn lly_upper_bound(k: usize, d: usize, n_vertices: Option<usize>) -> usize {
    let bound = d.saturating_sub(1) * k;
    n_vertices.map_or(bound, |n| bound.min(n))
}

/// `max(1, k + r - l - z)`.
pub fn xu_yau_lower_bound(k: usize, r: usize, l: usize, z: usize) -> usize {
    let raw = k as i64 + r as i64 - l as i64 - z as i64;
    raw.max(1) as usize
}

/// `l = d n / 2 - n + 1` for a connected `d`-regular graph on `n` vertices.
pub fn regular_forest_deficit(d: usize, n: usize) -> usize {
    d * n / 2 + 1 - n
}

/// `6 k - 34`, the upper bound for 3-connected planar graphs.
pub fn planar_upper_bound(k: usize) -> i64 {
    6 * k as i64 - 34
}

/// One row of a nodal report.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalRow {
    /// 1-based ordinal of the eigenvalue.
    pub k: usize,
    pub eigenvalue: f64,
    pub positive_domains: usize,
    pub negative_domains: usize,
    pub zero_vertices: usize,
    /// Size of the eigenvalue cluster containing `k`.
    pub multiplicity: usize,
    pub lly_bound: usize,
    pub xu_yau_bound: usize,
    pub planar_bound: Option<i64>,
}

impl NodalRow {
    pub fn total_domains(&self) -> usize {
        self.positive_domains + self.negative_domains
    }

    pub fn violates_upper_bound(&self) -> bool {
        self.total_domains() > self.lly_bound
    }

    pub fn violates_lower_bound(&self) -> bool {
        self.total_domains() < self.xu_yau_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NodalOptions {
    /// Absolute eigenvalue-cluster threshold; defaults to
    /// `DEGENERACY_TOL_REL * ||L||_F`.
    pub degeneracy_tol: Option<f64>,
    /// Absolute zero threshold; defaults to the relative rule of
    /// [`strong_nodal_domains`].
    pub zero_tol: Option<f64>,
    /// Also fill the planar `6k - 34` column.
    pub planar: bool,
}

/// Nodal counts and bound columns for every eigenvector of `dec`, which
/// must be the decomposition of `g`'s Laplacian.
///
/// Inside a cluster of (numerically) equal eigenvalues the lower bound uses
/// the cluster's first ordinal together with its size, as the eigenvalue
/// `lambda_k` with `lambda_{k-1} < lambda_k = ... = lambda_{k+r-1}`.
pub fn nodal_report(g: &Graph, dec: &SpectralDecomposition, options: NodalOptions) -> Result<Vec<NodalRow>> {
    let n = g.n_vertices();
    if dec.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: dec.n(),
        });
    }
    let eigs = dec.eigenvalues();
    let degeneracy_tol = options.degeneracy_tol.unwrap_or_else(|| {
        // ||L||_F^2 = sum deg^2 + 2|E|.
        let fro2: f64 = g.degrees().iter().map(|&d| (d * d) as f64).sum::<f64>() + 2.0 * g.n_edges() as f64;
        DEGENERACY_TOL_REL * fro2.sqrt()
    });

    // Clusters: maximal runs with consecutive gaps <= tolerance.
    let mut cluster_start = vec![0usize; n];
    let mut cluster_len = vec![0usize; n];
    let mut start = 0;
    for k in 0..n {
        if k > 0 && eigs[k] - eigs[k - 1] > degeneracy_tol {
            start = k;
        }
        cluster_start[k] = start;
    }
    for k in 0..n {
        cluster_len[cluster_start[k]] += 1;
    }

    let max_degree = g.degree_stats().max;
    let forest_deficit = g.cycle_rank();
    dec.eigenvectors()
        .enumerate()
        .map(|(idx, v)| {
            let count = strong_nodal_domains(g, v, options.zero_tol)?;
            let first = cluster_start[idx];
            let multiplicity = cluster_len[first];
            let k = idx + 1;
            Ok(NodalRow {
                k,
                eigenvalue: eigs[idx],
                positive_domains: count.positive,
                negative_domains: count.negative,
                zero_vertices: count.zeros,
                multiplicity,
                lly_bound: lly_upper_bound(k, max_degree, Some(n)),
                xu_yau_bound: xu_yau_lower_bound(first + 1, multiplicity, forest_deficit, count.zeros),
                planar_bound: options.planar.then(|| planar_upper_bound(k)),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eigh;
    use crate::ensembles::{sample_regular_graph, Seed};
    use proptest::prelude::*;
    use std::collections::VecDeque;

    #[test]
    fn path_alternating() {
        let g = Graph::path(3);
        let c = strong_nodal_domains(&g, &[1.0, -1.0, 1.0], None).unwrap();
        assert_eq!(
            c,
            NodalCount {
                positive: 2,
                negative: 1,
                zeros: 0
            }
        );
    }

    #[test]
    fn complete_graph_two_domains() {
        let c = strong_nodal_domains(&Graph::complete(4), &[3.0, -1.0, -1.0, -1.0], None).unwrap();
        assert_eq!(
            c,
            NodalCount {
                positive: 1,
                negative: 1,
                zeros: 0
            }
        );
    }

    #[test]
    fn all_positive_is_one_domain() {
        let g = Graph::cycle(7).unwrap();
        let c = strong_nodal_domains(&g, &[0.3; 7], None).unwrap();
        assert_eq!(
            c,
            NodalCount {
                positive: 1,
                negative: 0,
                zeros: 0
            }
        );
    }

    #[test]
    fn zeros_split_domains() {
        let g = Graph::path(5);
        let c = strong_nodal_domains(&g, &[1.0, 1.0, 0.0, 1.0, -1.0], None).unwrap();
        assert_eq!(
            c,
            NodalCount {
                positive: 2,
                negative: 1,
                zeros: 1
            }
        );
        let c = strong_nodal_domains(&g, &[1.0, 1e-12, 1.0, 1.0, 1.0], None).unwrap();
        assert_eq!(c.zeros, 1);
        let c = strong_nodal_domains(&g, &[1.0, 1e-12, 1.0, 1.0, 1.0], Some(0.0)).unwrap();
        assert_eq!(c.zeros, 0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            strong_nodal_domains(&Graph::path(3), &[1.0, 2.0], None),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(lly_upper_bound(10, 3, None), 20);
        assert_eq!(lly_upper_bound(7, 1, None), 0);
        assert_eq!(lly_upper_bound(500, 6, Some(3000)), 2500);
        assert_eq!(lly_upper_bound(700, 6, Some(3000)), 3000);
    }

    #[test]
    fn lower_bound_examples() {
        let l = regular_forest_deficit(3, 3000);
        assert_eq!(l, 1501);
        assert_eq!(xu_yau_lower_bound(1, 1, l, 0), 1);
        assert_eq!(xu_yau_lower_bound(2000, 1, l, 0), 500);
        assert_eq!(xu_yau_lower_bound(5, 1, 0, 0), 6);
        assert_eq!(regular_forest_deficit(4, 10), 11);
        let g = sample_regular_graph(40, 3, Seed(1)).unwrap();
        assert_eq!(g.cycle_rank(), regular_forest_deficit(3, 40));
    }

    #[test]
    fn planar_bound() {
        assert_eq!(planar_upper_bound(10), 26);
        assert_eq!(planar_upper_bound(1), -28);
    }

    #[test]
    fn report_on_k4() {
        let g = Graph::complete(4);
        let rows = nodal_report(&g, &eigh(&g.laplacian()).unwrap(), NodalOptions::default()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].total_domains(), 1);
        assert_eq!(rows[0].multiplicity, 1);
        assert!(rows[1..].iter().all(|r| r.multiplicity == 3));
        assert!(rows.iter().all(|r| !r.violates_upper_bound()));
    }

    /// Closed-form cycle eigenvectors cos(2 pi j m / n + phase), counted by
    /// brute-force runs of equal sign around the cycle.
    #[test]
    fn cycle_eigenvectors() {
        let n = 6;
        let g = Graph::cycle(n).unwrap();
        for m in 1..=3usize {
            for phase in [0.1, 0.4, 1.0] {
                let v: Vec<f64> = (0..n)
                    .map(|j| (2.0 * std::f64::consts::PI * (j * m) as f64 / n as f64 + phase).cos())
                    .collect();
                let signs: Vec<i8> = v
                    .iter()
                    .map(|&x| {
                        if x > 1e-12 {
                            1
                        } else if x < -1e-12 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect();
                let mut runs = [0usize; 2];
                for j in 0..n {
                    let prev = signs[(j + n - 1) % n];
                    if signs[j] != 0 && signs[j] != prev {
                        runs[usize::from(signs[j] > 0)] += 1;
                    }
                }
                let c = strong_nodal_domains(&g, &v, None).unwrap();
                assert_eq!((c.negative, c.positive), (runs[0], runs[1]), "m={m} phase={phase}");
                if m == 1 {
                    assert_eq!((c.positive, c.negative), (1, 1));
                }
            }
        }
    }

    #[test]
    fn random_cubic_respects_upper_bound() {
        let g = sample_regular_graph(100, 3, Seed(21)).unwrap();
        let rows = nodal_report(&g, &eigh(&g.laplacian()).unwrap(), NodalOptions::default()).unwrap();
        for r in &rows {
            assert!(
                r.total_domains() <= (2 * r.k).min(100),
                "k={} count={}",
                r.k,
                r.total_domains()
            );
        }
        assert_eq!(rows[0].total_domains(), 1);
    }

    #[test]
    fn dimension_mismatch() {
        let dec = eigh(&Graph::complete(3).laplacian()).unwrap();
        assert!(nodal_report(&Graph::complete(4), &dec, NodalOptions::default()).is_err());
    }

    fn bfs_components(g: &Graph, keep: &[bool]) -> usize {
        let adj = g.neighbors();
        let mut seen = vec![false; g.n_vertices()];
        let mut count = 0;
        for s in 0..g.n_vertices() {
            if !keep[s] || seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if keep[w] && !seen[w] {
                        seen[w] = true;
                        q.push_back(w);
                    }
                }
            }
        }
        count
    }

    fn arb_graph_and_vector() -> impl Strategy<Value = (Graph, Vec<f64>)> {
        (2usize..64).prop_flat_map(|n| {
            let pairs = prop::collection::btree_set((0..n, 0..n), 0..(3 * n));
            let vals = prop::collection::vec(prop_oneof![Just(0.0), -1.0f64..1.0], n);
            (Just(n), pairs, vals).prop_map(|(n, pairs, vals)| {
                let edges: std::collections::BTreeSet<(usize, usize)> = pairs
                    .into_iter()
                    .filter(|(a, b)| a != b)
                    .map(|(a, b)| (a.min(b), a.max(b)))
                    .collect();
                (Graph::new(n, edges).unwrap(), vals)
            })
        })
    }

    proptest! {
        #[test]
        fn union_find_matches_bfs((g, v) in arb_graph_and_vector()) {
            let c = strong_nodal_domains(&g, &v, Some(0.0)).unwrap();
            let pos: Vec<bool> = v.iter().map(|&x| x > 0.0).collect();
            let neg: Vec<bool> = v.iter().map(|&x| x < 0.0).collect();
            prop_assert_eq!(c.positive, bfs_components(&g, &pos));
            prop_assert_eq!(c.negative, bfs_components(&g, &neg));
            prop_assert!(c.total() <= g.n_vertices());
        }

        #[test]
        fn sign_flip_and_scale((g, v) in arb_graph_and_vector(), scale in 1e-6f64..1e6) {
            let c = strong_nodal_domains(&g, &v, None).unwrap();
            let flipped: Vec<f64> = v.iter().map(|x| -x).collect();
            let f = strong_nodal_domains(&g, &flipped, None).unwrap();
            prop_assert_eq!((c.positive, c.negative, c.zeros), (f.negative, f.positive, f.zeros));
            let scaled: Vec<f64> = v.iter().map(|x| x * scale).collect();
            prop_assert_eq!(c, strong_nodal_domains(&g, &scaled, None).unwrap());
        }
    }
}
