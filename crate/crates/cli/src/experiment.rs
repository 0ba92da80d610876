//! Seeded experiment runs: per-replica generation, decomposition and
//! statistics, written out with a checksummed manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use randspec_core::eigen::{eigh, spectrum_only};
use randspec_core::ensembles::{
    convex_hull, delaunay_skeleton, sample_goe, sample_regular_graph, sample_sphere_points, voronoi_dual,
};
use randspec_core::io;
use randspec_core::nodal::{nodal_report, NodalOptions};
use randspec_core::stats::{
    bin_localization, default_probs, expected_sphere_linf, extract_spacings, histogram_density, linf_norm, qq_pairs,
    wigner_surmise_goe_quantile, QQData, QuantileSource, DEFAULT_SPHERE_DRAWS, SPHERE_LINF_SEED,
};
use randspec_core::{Graph, PointSet3, Seed, SymmetricMatrix};

use crate::config::{Ensemble, ExperimentConfig};
use crate::error::{io_err, CliError, Result};
use crate::import::import_graph;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const TOOL_NAME: &str = "randspec";

/// Stream index, under a replica seed, of the GOE matrix that graph
/// ensembles are compared against.
const GOE_REFERENCE_STREAM: u64 = 1;

/// Which outputs a run produces. `run` enables everything; the single-stage
/// subcommands enable one group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stages {
    /// `matrix.csv`, `graph.edges`, `points.csv`.
    pub instance: bool,
    /// `eigenvalues.csv`.
    pub spectrum: bool,
    /// `bulk.csv`, `spacings.csv`, `qq.csv`, `localization.csv`, plus
    /// pooled `spacings.csv` and `qq.csv` at the top level.
    pub stats: bool,
    /// `nodal.csv` (graph ensembles).
    pub nodal: bool,
}

impl Stages {
    pub const ALL: Stages = Stages {
        instance: false,
        spectrum: true,
        stats: true,
        nodal: true,
    };
    pub const GENERATE: Stages = Stages {
        instance: true,
        spectrum: false,
        stats: false,
        nodal: false,
    };
    pub const SPECTRUM: Stages = Stages {
        instance: false,
        spectrum: true,
        stats: false,
        nodal: false,
    };
    pub const STATS: Stages = Stages {
        instance: false,
        spectrum: false,
        stats: true,
        nodal: false,
    };
    pub const NODAL: Stages = Stages {
        instance: false,
        spectrum: false,
        stats: false,
        nodal: true,
    };

    fn needs_vectors(self) -> bool {
        self.stats || self.nodal
    }

    fn needs_spectrum(self) -> bool {
        self.spectrum || self.needs_vectors()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaSeed {
    pub replica: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicaTiming {
    pub replica: usize,
    pub generate_seconds: f64,
    pub eigen_seconds: f64,
    pub stats_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub replicas: Vec<ReplicaTiming>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub stages: Stages,
    pub seeds: Vec<ReplicaSeed>,
    /// Paths relative to the output directory, in write order.
    pub files: Vec<String>,
    /// SHA-256 (hex) of each file in `files`.
    pub checksums: BTreeMap<String, String>,
    pub timings: Timings,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let path = if path.is_dir() {
            path.join(MANIFEST_FILE)
        } else {
            path.to_path_buf()
        };
        if !path.is_file() {
            return Err(CliError::MissingInput(path));
        }
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        serde_json::from_str(&text).map_err(|source| CliError::Manifest { path, source })
    }

    /// Recomputes every checksum against the files under `dir`; returns the
    /// files that are missing or differ.
    pub fn verify(&self, dir: &Path) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for name in &self.files {
            let ok = match fs::read(dir.join(name)) {
                Ok(bytes) => self.checksums.get(name) == Some(&sha256_hex(&bytes)),
                Err(_) => false,
            };
            if !ok {
                bad.push(name.clone());
            }
        }
        Ok(bad)
    }
}

pub fn replica_dir_name(replica: usize) -> String {
    format!("replica-{replica:03}")
}

pub fn replica_seed(cfg: &ExperimentConfig, replica: usize) -> Seed {
    Seed(cfg.seed).derive(replica as u64)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One generated ensemble member.
pub struct Instance {
    /// Raw matrix for GOE, Laplacian otherwise.
    pub matrix: SymmetricMatrix,
    pub graph: Option<Graph>,
    pub points: Option<PointSet3>,
}

pub fn generate_instance(
    cfg: &ExperimentConfig,
    seed: Seed,
    imported: Option<&Graph>,
) -> randspec_core::Result<Instance> {
    let n = cfg.size;
    let (graph, points) = match cfg.ensemble {
        Ensemble::Goe => {
            return Ok(Instance {
                matrix: sample_goe(n, seed)?,
                graph: None,
                points: None,
            })
        }
        Ensemble::Regular => (sample_regular_graph(n, cfg.degree.unwrap_or(3), seed)?, None),
        Ensemble::Delaunay => {
            let pts = sample_sphere_points(n, seed)?;
            (delaunay_skeleton(&convex_hull(&pts)?), Some(pts))
        }
        Ensemble::Voronoi => {
            let pts = sample_sphere_points(n, seed)?;
            (voronoi_dual(&convex_hull(&pts)?), Some(pts))
        }
        Ensemble::ImportedMap => (
            imported
                .cloned()
                .ok_or_else(|| randspec_core::Error::InvalidParameter("no imported graph".into()))?,
            None,
        ),
    };
    Ok(Instance {
        matrix: graph.laplacian(),
        graph: Some(graph),
        points,
    })
}

struct ReplicaOutput {
    files: Vec<(String, Vec<u8>)>,
    spacings: Vec<f64>,
    reference_spacings: Vec<f64>,
    timing: ReplicaTiming,
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> randspec_core::Result<()>) -> randspec_core::Result<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

fn spacing_qq(sample: &[f64], reference: Option<&[f64]>) -> randspec_core::Result<QQData> {
    match reference {
        Some(r) => qq_pairs(sample, QuantileSource::Sample(r), &default_probs()),
        None => qq_pairs(
            sample,
            QuantileSource::Function(&wigner_surmise_goe_quantile),
            &default_probs(),
        ),
    }
}

fn run_replica(
    cfg: &ExperimentConfig,
    stages: Stages,
    replica: usize,
    imported: Option<&Graph>,
) -> randspec_core::Result<ReplicaOutput> {
    let seed = replica_seed(cfg, replica);
    let mut files = Vec::new();
    let mut timing = ReplicaTiming {
        replica,
        generate_seconds: 0.0,
        eigen_seconds: 0.0,
        stats_seconds: 0.0,
    };

    let clock = Instant::now();
    let inst = generate_instance(cfg, seed, imported)?;
    if stages.instance {
        match &inst.graph {
            Some(g) => files.push(("graph.edges".into(), csv_bytes(|b| io::write_edge_list(g, b))?)),
            None => files.push(("matrix.csv".into(), csv_bytes(|b| write_matrix_csv(&inst.matrix, b))?)),
        }
        if let Some(p) = &inst.points {
            files.push(("points.csv".into(), csv_bytes(|b| io::write_points_csv(p, b))?));
        }
    }
    timing.generate_seconds = clock.elapsed().as_secs_f64();
    if !stages.needs_spectrum() {
        return Ok(ReplicaOutput {
            files,
            spacings: Vec::new(),
            reference_spacings: Vec::new(),
            timing,
        });
    }

    let clock = Instant::now();
    let dec = eigh(&inst.matrix)?;
    timing.eigen_seconds = clock.elapsed().as_secs_f64();
    if stages.spectrum {
        files.push((
            "eigenvalues.csv".into(),
            csv_bytes(|b| io::write_eigenvalues_csv(dec.eigenvalues(), b))?,
        ));
    }

    let clock = Instant::now();
    let mut spacings = Vec::new();
    let mut reference_spacings = Vec::new();
    if stages.stats {
        let dim = dec.n();
        // GOE eigenvalues are put on the unit-radius-2 scale for the bulk
        // histogram and the localization bins.
        let scale = if cfg.ensemble == Ensemble::Goe {
            1.0 / (dim as f64).sqrt()
        } else {
            1.0
        };
        let scaled: Vec<f64> = dec.eigenvalues().iter().map(|x| x * scale).collect();
        let bulk = histogram_density(&scaled, cfg.bulk_bin)?;
        files.push(("bulk.csv".into(), csv_bytes(|b| io::write_bulk_csv(&bulk, b))?));

        spacings = extract_spacings(dec.eigenvalues(), cfg.trim_fraction)?.spacings;
        files.push((
            "spacings.csv".into(),
            csv_bytes(|b| io::write_spacings_csv(&spacings, b))?,
        ));
        if cfg.ensemble.is_graph() {
            let goe = spectrum_only(&sample_goe(dim, seed.derive(GOE_REFERENCE_STREAM))?)?;
            reference_spacings = extract_spacings(&goe, cfg.trim_fraction)?.spacings;
        }
        let reference = cfg.ensemble.is_graph().then_some(reference_spacings.as_slice());
        let qq = spacing_qq(&spacings, reference)?;
        files.push(("qq.csv".into(), csv_bytes(|b| io::write_qq_csv(&qq, b))?));

        let level = expected_sphere_linf(dim, DEFAULT_SPHERE_DRAWS, SPHERE_LINF_SEED)?;
        let linf = dec.eigenvectors().map(linf_norm).collect();
        let curve = bin_localization(&scaled, linf, cfg.localization_bin, level)?;
        files.push((
            "localization.csv".into(),
            csv_bytes(|b| io::write_localization_csv(&curve, b))?,
        ));
    }
    if stages.nodal {
        if let Some(g) = &inst.graph {
            let options = NodalOptions {
                planar: cfg.ensemble.is_planar(),
                ..Default::default()
            };
            let rows = nodal_report(g, &dec, options)?;
            files.push(("nodal.csv".into(), csv_bytes(|b| io::write_nodal_csv(&rows, b))?));
        }
    }
    timing.stats_seconds = clock.elapsed().as_secs_f64();
    Ok(ReplicaOutput {
        files,
        spacings,
        reference_spacings,
        timing,
    })
}

/// Upper triangle `i,j,value` (including the diagonal).
fn write_matrix_csv<W: std::io::Write>(a: &SymmetricMatrix, out: W) -> randspec_core::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["i", "j", "value"])?;
    for i in 0..a.n() {
        for j in i..a.n() {
            w.write_record([i.to_string(), j.to_string(), io::fmt_f64(a.get(i, j))])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunManifest> {
    run_experiment_with(cfg, Stages::ALL, None)
}

/// Runs every replica (in parallel on `workers` threads, or rayon's default)
/// and only then writes files, so a failing replica leaves no output behind.
/// Results do not depend on the worker count.
pub fn run_experiment_with(cfg: &ExperimentConfig, stages: Stages, workers: Option<usize>) -> Result<RunManifest> {
    cfg.validate()?;
    let start = Instant::now();
    let imported = match (cfg.ensemble, &cfg.input) {
        (Ensemble::ImportedMap, Some(path)) => {
            let (g, _) = import_graph(path, true)?;
            if g.n_vertices() != cfg.size {
                return Err(CliError::Invalid(format!(
                    "{} has {} vertices but size is {}",
                    path.display(),
                    g.n_vertices(),
                    cfg.size
                )));
            }
            Some(g)
        }
        _ => None,
    };

    let work = || -> Result<Vec<ReplicaOutput>> {
        (0..cfg.replicas)
            .into_par_iter()
            .map(|r| {
                log::info!("replica {r}: {} n={}", cfg.ensemble.name(), cfg.size);
                run_replica(cfg, stages, r, imported.as_ref())
                    .map_err(|source| CliError::Replica { replica: r, source })
            })
            .collect()
    };
    let outputs = match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    for out in &outputs {
        let dir = replica_dir_name(out.timing.replica);
        for (name, bytes) in &out.files {
            files.push((format!("{dir}/{name}"), bytes.clone()));
        }
    }
    if stages.stats {
        let pooled: Vec<f64> = outputs.iter().flat_map(|o| o.spacings.iter().copied()).collect();
        files.push((
            "spacings.csv".into(),
            csv_bytes(|b| io::write_spacings_csv(&pooled, b))?,
        ));
        let reference: Vec<f64> = outputs
            .iter()
            .flat_map(|o| o.reference_spacings.iter().copied())
            .collect();
        let qq = spacing_qq(&pooled, cfg.ensemble.is_graph().then_some(reference.as_slice()))?;
        files.push(("qq.csv".into(), csv_bytes(|b| io::write_qq_csv(&qq, b))?));
    }

    let root = &cfg.output_dir;
    let mut checksums = BTreeMap::new();
    for (name, bytes) in &files {
        let path = root.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(&path, bytes).map_err(io_err(&path))?;
        checksums.insert(name.clone(), sha256_hex(bytes));
    }

    let manifest = RunManifest {
        tool: TOOL_NAME.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        stages,
        seeds: (0..cfg.replicas)
            .map(|r| ReplicaSeed {
                replica: r,
                seed: replica_seed(cfg, r).0,
            })
            .collect(),
        files: files.into_iter().map(|(name, _)| name).collect(),
        checksums,
        timings: Timings {
            total_seconds: start.elapsed().as_secs_f64(),
            replicas: outputs.into_iter().map(|o| o.timing).collect(),
        },
    };
    fs::create_dir_all(root).map_err(io_err(root))?;
    let path = root.join(MANIFEST_FILE);
    let json = serde_json::to_string_pretty(&manifest).map_err(|source| CliError::Manifest {
        path: path.clone(),
        source,
    })?;
    fs::write(&path, json + "\n").map_err(io_err(&path))?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsRow {
    /// `pooled` or the replica index.
    pub label: String,
    pub n_a: usize,
    pub n_b: usize,
    pub ks: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Pooled row first, then replica `i` of run A against replica `i` of
    /// run B for every index both runs have.
    pub rows: Vec<KsRow>,
    /// Pooled quantiles, run A as sample and run B as reference.
    pub qq: QQData,
}

impl Comparison {
    pub fn pooled_ks(&self) -> f64 {
        self.rows[0].ks
    }

    /// Writes `ks.csv` (`label,n_a,n_b,ks`) and `qq.csv`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let ks = csv_bytes(|buf| {
            let mut w = csv::Writer::from_writer(buf);
            w.write_record(["label", "n_a", "n_b", "ks"])?;
            for r in &self.rows {
                w.write_record([r.label.clone(), r.n_a.to_string(), r.n_b.to_string(), io::fmt_f64(r.ks)])?;
            }
            w.flush()?;
            Ok(())
        })?;
        let qq = csv_bytes(|b| io::write_qq_csv(&self.qq, b))?;
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut written = Vec::new();
        for (name, bytes) in [("ks.csv", ks), ("qq.csv", qq)] {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(io_err(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn read_spacings(path: &Path) -> Result<Vec<f64>> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    let file = fs::File::open(path).map_err(io_err(path))?;
    io::read_spacings_csv(file).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })
}

/// Two-sample KS distances and pooled quantile pairs between the spacing
/// samples of two finished runs. `run_a` and `run_b` are run directories or
/// their manifest files.
pub fn compare_runs(run_a: &Path, run_b: &Path) -> Result<Comparison> {
    let load = |p: &Path| -> Result<(PathBuf, RunManifest)> {
        let manifest = RunManifest::load(p)?;
        let dir = if p.is_dir() {
            p.to_path_buf()
        } else {
            p.parent().unwrap_or(Path::new(".")).to_path_buf()
        };
        Ok((dir, manifest))
    };
    let (dir_a, man_a) = load(run_a)?;
    let (dir_b, man_b) = load(run_b)?;
    let pooled_a = read_spacings(&dir_a.join("spacings.csv"))?;
    let pooled_b = read_spacings(&dir_b.join("spacings.csv"))?;
    let ks = |a: &[f64], b: &[f64]| randspec_core::stats::ks_two_sample(a, b);
    let mut rows = vec![KsRow {
        label: "pooled".into(),
        n_a: pooled_a.len(),
        n_b: pooled_b.len(),
        ks: ks(&pooled_a, &pooled_b)?,
    }];
    for r in 0..man_a.config.replicas.min(man_b.config.replicas) {
        let name = format!("{}/spacings.csv", replica_dir_name(r));
        let a = read_spacings(&dir_a.join(&name))?;
        let b = read_spacings(&dir_b.join(&name))?;
        rows.push(KsRow {
            label: r.to_string(),
            n_a: a.len(),
            n_b: b.len(),
            ks: ks(&a, &b)?,
        });
    }
    let qq = qq_pairs(&pooled_a, QuantileSource::Sample(&pooled_b), &default_probs())?;
    Ok(Comparison { rows, qq })
}
