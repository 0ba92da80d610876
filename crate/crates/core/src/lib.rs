//! Spectral statistics of random matrices and random graphs.
//!
//! The crate covers the whole pipeline behind bulk-density, spacing,
//! localization and nodal-domain studies:
//!
//! * [`graph`]: simple undirected graphs, Laplacian/adjacency assembly and
//!   connectivity queries.
//! * [`ensembles`]: seeded generators for GOE matrices, random regular graphs
//!   (configuration model), uniform points on the sphere, their convex hull,
//!   Delaunay 1-skeleta and Voronoi duals.
//! * [`eigen`]: a dense symmetric eigensolver (Householder tridiagonalization
//!   followed by implicit QL).
//! * [`stats`]: reference densities, trimmed spacings, Kolmogorov-Smirnov
//!   distances, quantile pairs, histograms and L-infinity localization curves.
//! * [`nodal`]: strong nodal-domain counts and the upper/lower bounds they are
//!   checked against.
//! * [`io`]: edge lists, point CSVs, decomposition caches and CSV emitters.
//!
//! ```
//! use randspec_core::{ensembles, eigen, stats, Seed};
//!
//! let g = ensembles::sample_regular_graph(100, 3, Seed(7)).unwrap();
//! let dec = eigen::eigh(&g.laplacian()).unwrap();
//! let spacings = stats::extract_spacings(dec.eigenvalues(), 0.1).unwrap();
//! assert!((spacings.mean() - 1.0).abs() < 1e-12);
//! ```

pub mod eigen;
pub mod ensembles;
mod error;
pub mod graph;
pub mod io;
pub mod nodal;
pub mod stats;
mod union_find;

pub use eigen::SpectralDecomposition;
pub use ensembles::{HullComplex, PointSet3, Seed};
pub use error::{Error, Result};
pub use graph::{DegreeStats, Graph, SymmetricMatrix};
pub use nodal::{NodalCount, NodalRow};
pub use stats::{Histogram, LocalizationCurve, QQData, SpacingSample};
pub use union_find::DisjointSets;
