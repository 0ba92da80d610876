//! Incremental 3D convex hull and the two graphs read off it: the Delaunay
//! 1-skeleton (hull edges) and the Voronoi dual (facet adjacency).

use std::collections::{HashMap, VecDeque};

use super::PointSet3;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Tuning knobs for [`convex_hull_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullOptions {
    /// A point is strictly outside a facet only when the orientation
    /// determinant exceeds this value.
    pub tolerance: f64,
}

impl Default for HullOptions {
    fn default() -> Self {
        HullOptions { tolerance: 1e-9 }
    }
}

/// Simplicial convex hull: triangles with outward (counter-clockwise seen
/// from outside) orientation, plus the pairs of facets sharing an edge.
#[derive(Debug, Clone, PartialEq)]
pub struct HullComplex {
    points: PointSet3,
    facets: Vec<[usize; 3]>,
    facet_adjacency: Vec<(usize, usize)>,
}

impl HullComplex {
    pub fn points(&self) -> &PointSet3 {
        &self.points
    }

    pub fn facets(&self) -> &[[usize; 3]] {
        &self.facets
    }

    /// `(f, g)` with `f < g`, sorted.
    pub fn facet_adjacency(&self) -> &[(usize, usize)] {
        &self.facet_adjacency
    }

    /// Indices of input points that are hull vertices, ascending.
    pub fn vertices(&self) -> Vec<usize> {
        let mut on_hull = vec![false; self.points.len()];
        for f in &self.facets {
            for &v in f {
                on_hull[v] = true;
            }
        }
        (0..on_hull.len()).filter(|&v| on_hull[v]).collect()
    }

    /// Hull edges as canonical `(min, max)` pairs, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .facets
            .iter()
            .flat_map(|f| (0..3).map(move |j| (f[j], f[(j + 1) % 3])))
            .filter(|&(a, b)| a < b)
            .collect();
        edges.sort_unstable();
        edges
    }

    /// `V - E + F`; equals 2 for any valid hull.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices().len() as i64 - self.edges().len() as i64 + self.facets.len() as i64
    }
}

/// `(b - a) x (c - a) . (p - a)`: positive when `p` lies on the side the
/// counter-clockwise triangle `abc` faces.
pub(crate) fn orient(a: [f64; 3], b: [f64; 3], c: [f64; 3], p: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let w = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let n = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    n[0] * w[0] + n[1] * w[1] + n[2] * w[2]
}

pub fn convex_hull(points: &PointSet3) -> Result<HullComplex> {
    convex_hull_with(points, HullOptions::default())
}

/// Incremental insertion: start from a maximal tetrahedron, then add the
/// remaining points in index order. Each point removes the connected patch
/// of facets it sees (orientation above the tolerance) and is coned to the
/// patch's horizon. Points that see no facet are interior and are skipped.
pub fn convex_hull_with(points: &PointSet3, options: HullOptions) -> Result<HullComplex> {
    let pts = points.points();
    let n = pts.len();
    let tol = options.tolerance;
    if n < 4 {
        return Err(Error::DegenerateInput(format!("{n} points; a hull needs at least 4")));
    }
    check_duplicates(pts)?;
    let seed = initial_simplex(pts, tol)?;

    let mut builder = Builder {
        facets: Vec::with_capacity(2 * n),
        alive: Vec::with_capacity(2 * n),
        edge_owner: HashMap::with_capacity(6 * n),
    };
    let [a, b, c, d] = seed;
    for (face, opposite) in [([a, b, c], d), ([a, b, d], c), ([a, c, d], b), ([b, c, d], a)] {
        let oriented = if orient(pts[face[0]], pts[face[1]], pts[face[2]], pts[opposite]) > 0.0 {
            [face[0], face[2], face[1]]
        } else {
            face
        };
        builder.add_facet(oriented)?;
    }

    let mut visible = Vec::new();
    let mut region = Vec::new();
    let mut in_region = Vec::new();
    for p in (0..n).filter(|p| !seed.contains(p)) {
        // Most visible facet seeds the patch; the patch grows only through
        // visible neighbours so it stays connected.
        visible.clear();
        let mut best: Option<(usize, f64)> = None;
        for (f, tri) in builder.facets.iter().enumerate() {
            if !builder.alive[f] {
                continue;
            }
            let o = orient(pts[tri[0]], pts[tri[1]], pts[tri[2]], pts[p]);
            if o > tol {
                visible.push(f);
                if best.map_or(true, |(_, bo)| o > bo) {
                    best = Some((f, o));
                }
            }
        }
        let Some((start, _)) = best else { continue };

        in_region.clear();
        in_region.resize(builder.facets.len(), false);
        let mut is_visible = vec![false; builder.facets.len()];
        for &f in &visible {
            is_visible[f] = true;
        }
        region.clear();
        let mut queue = VecDeque::from([start]);
        in_region[start] = true;
        while let Some(f) = queue.pop_front() {
            region.push(f);
            let tri = builder.facets[f];
            for j in 0..3 {
                let g = builder.neighbor(tri[j], tri[(j + 1) % 3])?;
                if is_visible[g] && !in_region[g] {
                    in_region[g] = true;
                    queue.push_back(g);
                }
            }
        }

        let mut horizon = Vec::new();
        for &f in &region {
            let tri = builder.facets[f];
            for j in 0..3 {
                let (u, v) = (tri[j], tri[(j + 1) % 3]);
                if !in_region[builder.neighbor(u, v)?] {
                    horizon.push((u, v));
                }
            }
        }
        for &f in &region {
            builder.remove_facet(f);
        }
        for (u, v) in horizon {
            builder.add_facet([u, v, p])?;
        }
    }

    builder.finish(points.clone())
}

fn check_duplicates(pts: &[[f64; 3]]) -> Result<()> {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| {
        let (p, q) = (pts[i], pts[j]);
        p[0].total_cmp(&q[0])
            .then(p[1].total_cmp(&q[1]))
            .then(p[2].total_cmp(&q[2]))
            .then(i.cmp(&j))
    });
    for w in order.windows(2) {
        if pts[w[0]] == pts[w[1]] {
            return Err(Error::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(())
}

fn initial_simplex(pts: &[[f64; 3]], tol: f64) -> Result<[usize; 4]> {
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let norm2 = |v: [f64; 3]| v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
    let argmax = |score: &dyn Fn(usize) -> f64| {
        (0..pts.len()).fold((0, f64::NEG_INFINITY), |(bi, bs), i| {
            let s = score(i);
            if s > bs {
                (i, s)
            } else {
                (bi, bs)
            }
        })
    };

    let a = 0;
    let (b, dist2) = argmax(&|i| norm2(sub(pts[i], pts[a])));
    if dist2.sqrt() <= tol {
        return Err(Error::DegenerateInput("all points coincide".into()));
    }
    let ab = sub(pts[b], pts[a]);
    let (c, area2) = argmax(&|i| {
        let w = sub(pts[i], pts[a]);
        norm2([
            ab[1] * w[2] - ab[2] * w[1],
            ab[2] * w[0] - ab[0] * w[2],
            ab[0] * w[1] - ab[1] * w[0],
        ])
    });
    if area2.sqrt() <= tol {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }
    let (d, volume) = argmax(&|i| orient(pts[a], pts[b], pts[c], pts[i]).abs());
    if volume <= tol {
        return Err(Error::DegenerateInput(format!(
            "all points are coplanar (orientation determinant {volume:e} <= {tol:e})"
        )));
    }
    Ok([a, b, c, d])
}

struct Builder {
    facets: Vec<[usize; 3]>,
    alive: Vec<bool>,
    // Directed edge (u, v) -> the facet that traverses it in that direction.
    edge_owner: HashMap<(usize, usize), usize>,
}

impl Builder {
    fn add_facet(&mut self, tri: [usize; 3]) -> Result<()> {
        let id = self.facets.len();
        for j in 0..3 {
            let edge = (tri[j], tri[(j + 1) % 3]);
            if self.edge_owner.insert(edge, id).is_some() {
                return Err(self.inconsistent(edge));
            }
        }
        self.facets.push(tri);
        self.alive.push(true);
        Ok(())
    }

    fn remove_facet(&mut self, f: usize) {
        let tri = self.facets[f];
        for j in 0..3 {
            self.edge_owner.remove(&(tri[j], tri[(j + 1) % 3]));
        }
        self.alive[f] = false;
    }

    /// Facet on the other side of directed edge `(u, v)`.
    fn neighbor(&self, u: usize, v: usize) -> Result<usize> {
        self.edge_owner
            .get(&(v, u))
            .copied()
            .ok_or_else(|| self.inconsistent((v, u)))
    }

    fn inconsistent(&self, edge: (usize, usize)) -> Error {
        Error::DegenerateInput(format!(
            "inconsistent hull topology at edge {edge:?}; input is too close to degenerate for the tolerance"
        ))
    }

    fn finish(self, points: PointSet3) -> Result<HullComplex> {
        let mut remap = vec![usize::MAX; self.facets.len()];
        let mut facets = Vec::new();
        for (f, tri) in self.facets.iter().enumerate() {
            if self.alive[f] {
                remap[f] = facets.len();
                facets.push(*tri);
            }
        }
        let mut facet_adjacency = Vec::with_capacity(facets.len() * 3 / 2);
        for (f, tri) in facets.iter().enumerate() {
            for j in 0..3 {
                let g = remap[self.neighbor(tri[j], tri[(j + 1) % 3])?];
                if f < g {
                    facet_adjacency.push((f, g));
                }
            }
        }
        facet_adjacency.sort_unstable();
        Ok(HullComplex {
            points,
            facets,
            facet_adjacency,
        })
    }
}

/// Graph on all input points whose edges are the hull edges. For points in
/// convex position (e.g. on the sphere) this is the Delaunay triangulation's
/// 1-skeleton; interior points, if any, are isolated vertices.
pub fn delaunay_skeleton(hull: &HullComplex) -> Graph {
    Graph::new(hull.points.len(), hull.edges()).expect("hull edges form a simple graph")
}

/// Facet-adjacency graph of the hull: the Voronoi diagram's combinatorics.
/// Every vertex has degree 3 since every facet is a triangle.
pub fn voronoi_dual(hull: &HullComplex) -> Graph {
    Graph::new(hull.facets.len(), hull.facet_adjacency.iter().copied()).expect("facet adjacency forms a simple graph")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_sphere_points, Seed};

    fn tetrahedron() -> PointSet3 {
        let s = 1.0 / 3f64.sqrt();
        PointSet3::new(vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]).unwrap()
    }

    fn octahedron() -> PointSet3 {
        PointSet3::new(vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ])
        .unwrap()
    }

    /// All triples whose plane has every other point on one side.
    fn brute_force_facets(pts: &[[f64; 3]]) -> Vec<[usize; 3]> {
        let n = pts.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let signs: Vec<f64> = (0..n)
                        .filter(|&p| p != i && p != j && p != k)
                        .map(|p| orient(pts[i], pts[j], pts[k], pts[p]))
                        .collect();
                    if signs.iter().all(|&s| s < -1e-12) || signs.iter().all(|&s| s > 1e-12) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    fn sorted_facets(h: &HullComplex) -> Vec<[usize; 3]> {
        let mut fs: Vec<[usize; 3]> = h
            .facets()
            .iter()
            .map(|f| {
                let mut s = *f;
                s.sort_unstable();
                s
            })
            .collect();
        fs.sort_unstable();
        fs
    }

    #[test]
    fn tetrahedron_hull() {
        let h = convex_hull(&tetrahedron()).unwrap();
        assert_eq!(h.facets().len(), 4);
        assert_eq!(delaunay_skeleton(&h), Graph::complete(4));
        assert_eq!(voronoi_dual(&h), Graph::complete(4));
    }

    #[test]
    fn octahedron_hull_matches_brute_force() {
        let pts = octahedron();
        let h = convex_hull(&pts).unwrap();
        assert_eq!(sorted_facets(&h), brute_force_facets(pts.points()));
        assert_eq!(h.facets().len(), 8);
        assert_eq!(h.edges().len(), 12);
        let skeleton = delaunay_skeleton(&h);
        assert_eq!(skeleton.n_edges(), 12);
        let ds = skeleton.degree_stats();
        assert_eq!((ds.min, ds.max), (4, 4));
        // Antipodal vertices are exactly the non-edges.
        for (u, v) in [(0, 1), (2, 3), (4, 5)] {
            assert!(!skeleton.has_edge(u, v));
        }
    }

    #[test]
    fn octahedron_dual_is_the_cube() {
        let h = convex_hull(&octahedron()).unwrap();
        let cube = voronoi_dual(&h);
        assert_eq!(cube.n_vertices(), 8);
        assert_eq!(cube.n_edges(), 12);
        let ds = cube.degree_stats();
        assert_eq!((ds.min, ds.max), (3, 3));
        assert!(cube.is_three_connected());
        // The cube is bipartite with no triangles.
        let adj = cube.neighbors();
        for &(u, v) in cube.edges() {
            assert!(adj[u].iter().all(|w| !adj[v].contains(w)));
        }
    }

    #[test]
    fn facets_are_outward() {
        let pts = sample_sphere_points(60, Seed(4)).unwrap();
        let h = convex_hull(&pts).unwrap();
        let p = pts.points();
        for f in h.facets() {
            assert!(orient(p[f[0]], p[f[1]], p[f[2]], [0.0; 3]) < 0.0);
        }
    }

    #[test]
    fn random_sphere_hull_euler() {
        let pts = sample_sphere_points(100, Seed(17)).unwrap();
        let h = convex_hull(&pts).unwrap();
        let v = h.vertices().len();
        assert_eq!(v, 100);
        assert_eq!(h.euler_characteristic(), 2);
        assert_eq!(h.facets().len(), 2 * v - 4);
        assert_eq!(delaunay_skeleton(&h).n_edges(), 3 * v - 6);
        let dual = voronoi_dual(&h);
        assert_eq!(dual.n_edges(), h.edges().len());
        assert!(dual.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn interior_points_are_skipped() {
        let mut pts = octahedron().points().to_vec();
        pts.push([0.1, 0.0, 0.0]);
        let h = convex_hull(&PointSet3::unchecked(pts)).unwrap();
        assert_eq!(h.vertices(), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(h.euler_characteristic(), 2);
        assert_eq!(delaunay_skeleton(&h).degrees()[6], 0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let flat = PointSet3::unchecked(vec![
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.6, 0.8, 0.0],
        ]);
        assert!(matches!(convex_hull(&flat), Err(Error::DegenerateInput(_))));

        let mut dup = octahedron().points().to_vec();
        dup.push([0.0, 1.0, 0.0]);
        assert!(matches!(
            convex_hull(&PointSet3::unchecked(dup)),
            Err(Error::DuplicatePoint(2, 6))
        ));

        let few = PointSet3::unchecked(vec![[1.0, 0.0, 0.0]; 3]);
        assert!(matches!(convex_hull(&few), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn tolerance_is_configurable() {
        // Nearly flat tetrahedron: volume determinant ~1e-7.
        let pts = PointSet3::unchecked(vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.3, 0.3, 1e-7],
        ]);
        assert!(convex_hull(&pts).is_ok());
        assert!(convex_hull_with(&pts, HullOptions { tolerance: 1e-6 }).is_err());
    }
}
