//! Simple undirected graphs and the symmetric matrices built from them.

use crate::error::{Error, Result};
use crate::union_find::DisjointSets;

/// Undirected simple graph on vertices `0..n_vertices`.
///
/// Edges are stored canonically as `(min, max)` pairs in lexicographic order,
/// so two graphs with the same edge set compare (and serialize) identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Minimum, maximum and mean vertex degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints.
    pub fn new<I>(n_vertices: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canonical = Vec::new();
        for (u, v) in edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::VertexOutOfRange { u, v, n: n_vertices });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            canonical.push((u.min(v), u.max(v)));
        }
        canonical.sort_unstable();
        if let Some(w) = canonical.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Graph {
            n_vertices,
            edges: canonical,
        })
    }

    pub fn empty(n_vertices: usize) -> Graph {
        Graph {
            n_vertices,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph { n_vertices: n, edges }
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "a cycle needs at least 3 vertices, got {n}"
            )));
        }
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical `(min, max)` edges, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Adjacency lists with neighbours in increasing order.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degree_stats(&self) -> DegreeStats {
        if self.n_vertices == 0 {
            return DegreeStats {
                min: 0,
                max: 0,
                mean: 0.0,
            };
        }
        let deg = self.degrees();
        DegreeStats {
            min: deg.iter().copied().min().unwrap_or(0),
            max: deg.iter().copied().max().unwrap_or(0),
            mean: 2.0 * self.edges.len() as f64 / self.n_vertices as f64,
        }
    }

    /// Combinatorial Laplacian `D - A`.
    pub fn laplacian(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n_vertices);
        for &(u, v) in &self.edges {
            m.set(u, v, -1.0);
            *m.get_mut_diag(u) += 1.0;
            *m.get_mut_diag(v) += 1.0;
        }
        m
    }

    pub fn adjacency(&self) -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(self.n_vertices);
        for &(u, v) in &self.edges {
            m.set(u, v, 1.0);
        }
        m
    }

    /// Connected components of the subgraph induced by the vertices accepted
    /// by `keep`. Each component is sorted, and components are ordered by
    /// their smallest vertex.
    pub fn induced_components<F>(&self, keep: F) -> Vec<Vec<usize>>
    where
        F: Fn(usize) -> bool,
    {
        let kept: Vec<bool> = (0..self.n_vertices).map(&keep).collect();
        let mut sets = DisjointSets::new(self.n_vertices);
        for &(u, v) in &self.edges {
            if kept[u] && kept[v] {
                sets.union(u, v);
            }
        }
        let mut slot = vec![usize::MAX; self.n_vertices];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in (0..self.n_vertices).filter(|&v| kept[v]) {
            let root = sets.find(v);
            if slot[root] == usize::MAX {
                slot[root] = out.len();
                out.push(Vec::new());
            }
            out[slot[root]].push(v);
        }
        out
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        self.induced_components(|_| true)
    }

    pub fn component_count(&self) -> usize {
        let mut sets = DisjointSets::new(self.n_vertices);
        let merges = self.edges.iter().filter(|&&(u, v)| sets.union(u, v)).count();
        self.n_vertices - merges
    }

    /// True iff the graph has exactly one component. A graph with no
    /// vertices is reported as disconnected.
    pub fn is_connected(&self) -> bool {
        self.n_vertices > 0 && self.component_count() == 1
    }

    /// Minimum number of edges whose removal leaves a forest: `|E| - n + c`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.n_vertices
    }

    /// Vertex 3-connectivity: at least 4 vertices and no set of at most two
    /// vertices whose removal disconnects the graph.
    pub fn is_three_connected(&self) -> bool {
        let n = self.n_vertices;
        if n < 4 || !self.is_connected() {
            return false;
        }
        let adj = self.neighbors();
        (0..n).all(|removed| !has_cut_vertex(&adj, Some(removed))) && !has_cut_vertex(&adj, None)
    }
}

/// Articulation-point test on the graph with `removed` deleted. Also reports
/// a cut when the remaining graph is disconnected.
fn has_cut_vertex(adj: &[Vec<usize>], removed: Option<usize>) -> bool {
    let n = adj.len();
    let Some(root) = (0..n).find(|&v| Some(v) != removed) else {
        return false;
    };
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut root_children = 0;
    // Iterative DFS: (vertex, parent, next neighbour index).
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    disc[root] = timer;
    low[root] = timer;
    timer += 1;
    while let Some(top) = stack.last_mut() {
        let (v, parent, next) = *top;
        if next < adj[v].len() {
            let w = adj[v][next];
            top.2 += 1;
            if Some(w) == removed || w == parent {
                continue;
            }
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if v == root {
                    root_children += 1;
                }
                stack.push((w, v, 0));
            } else {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if p != root && low[v] >= disc[p] {
                    return true;
                }
            }
        }
    }
    let visited = disc.iter().filter(|&&d| d != usize::MAX).count();
    let expected = n - usize::from(removed.is_some());
    visited < expected || root_children > 1
}

/// Dense real symmetric matrix, stored in full row-major form with both
/// triangles kept exactly equal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Fills the upper triangle (`i <= j`) row by row from `f`, mirroring
    /// each entry below the diagonal.
    pub fn from_upper<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Wraps a row-major `n x n` buffer, requiring exact symmetry.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        for i in 0..n {
            for j in i + 1..n {
                if data[i * n + j].to_bits() != data[j * n + i].to_bits() {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymmetricMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    fn get_mut_diag(&mut self, i: usize) -> &mut f64 {
        &mut self.data[i * self.n + i]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}
