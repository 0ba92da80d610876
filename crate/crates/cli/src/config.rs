//! Experiment configuration: a flat `key = value` file, command-line
//! overrides and the resolved, validated [`ExperimentConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    Goe,
    Regular,
    Delaunay,
    Voronoi,
    ImportedMap,
}

impl Ensemble {
    pub fn is_graph(self) -> bool {
        self != Ensemble::Goe
    }

    pub fn is_planar(self) -> bool {
        matches!(self, Ensemble::Delaunay | Ensemble::Voronoi | Ensemble::ImportedMap)
    }

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::Goe => "goe",
            Ensemble::Regular => "regular",
            Ensemble::Delaunay => "delaunay",
            Ensemble::Voronoi => "voronoi",
            Ensemble::ImportedMap => "imported-map",
        }
    }
}

impl std::str::FromStr for Ensemble {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Ensemble as ValueEnum>::from_str(s, true)
    }
}

/// Size presets: `ci` (1000) keeps runs to minutes, `full` uses dimension
/// 3000.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Profile {
    #[default]
    Ci,
    Full,
}

impl Profile {
    pub fn default_size(self) -> usize {
        match self {
            Profile::Ci => 1000,
            Profile::Full => 3000,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Profile as ValueEnum>::from_str(s, true)
    }
}

pub const DEFAULT_TRIM: f64 = 0.10;
pub const DEFAULT_GOE_BIN: f64 = 0.02;
pub const DEFAULT_GRAPH_BIN: f64 = 0.001;
pub const DEFAULT_BULK_BIN: f64 = 0.05;
pub const DEFAULT_OUTPUT_DIR: &str = "randspec-out";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ensemble: Ensemble,
    /// Matrix dimension, vertex count (regular, imported-map) or point count
    /// (delaunay, voronoi).
    pub size: usize,
    pub degree: Option<usize>,
    pub replicas: usize,
    pub seed: u64,
    pub trim_fraction: f64,
    /// Eigenvalue bin width of the localization curve. GOE eigenvalues are
    /// binned after rescaling by `1/sqrt(n)`.
    pub localization_bin: f64,
    /// Bin width of the bulk histogram (same scale as `localization_bin`).
    pub bulk_bin: f64,
    pub output_dir: PathBuf,
    /// Edge-list file for `imported-map`.
    pub input: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Invalid(m));
        if self.size < 4 {
            return bad(format!("size must be at least 4, got {}", self.size));
        }
        if self.replicas < 1 {
            return bad("replicas must be at least 1".into());
        }
        if !(0.0..0.5).contains(&self.trim_fraction) {
            return bad(format!("trim must lie in [0, 0.5), got {}", self.trim_fraction));
        }
        for (name, w) in [("bin", self.localization_bin), ("bulk_bin", self.bulk_bin)] {
            if !(w.is_finite() && w > 0.0) {
                return bad(format!("{name} must be positive, got {w}"));
            }
        }
        match (self.ensemble, self.degree) {
            (Ensemble::Regular, None) => return bad("regular ensemble needs a degree".into()),
            (Ensemble::Regular, Some(d)) if d < 1 || d >= self.size => {
                return bad(format!("degree {d} must lie in 1..{}", self.size))
            }
            (Ensemble::Regular, Some(d)) if (d * self.size) % 2 == 1 => {
                return bad(format!("size * degree must be even, got {} * {d}", self.size))
            }
            (e, Some(_)) if e != Ensemble::Regular => {
                return bad(format!("degree applies only to the regular ensemble, not {}", e.name()))
            }
            _ => {}
        }
        match (self.ensemble, &self.input) {
            (Ensemble::ImportedMap, None) => bad("imported-map needs an input file".into()),
            (Ensemble::ImportedMap, Some(_)) if self.replicas != 1 => {
                bad("imported-map is a single fixed graph; replicas must be 1".into())
            }
            (e, Some(_)) if e != Ensemble::ImportedMap => {
                bad(format!("input applies only to imported-map, not {}", e.name()))
            }
            _ => Ok(()),
        }
    }
}

/// Partially specified configuration. Layers merge with later layers
/// winning, then [`ConfigLayer::resolve`] fills defaults and validates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub ensemble: Option<Ensemble>,
    pub size: Option<usize>,
    pub degree: Option<usize>,
    pub replicas: Option<usize>,
    pub seed: Option<u64>,
    pub trim: Option<f64>,
    pub bin: Option<f64>,
    pub bulk_bin: Option<f64>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
    pub profile: Option<Profile>,
}

impl ConfigLayer {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines. `#` starts a comment; keys mirror the
    /// command-line flags (`ensemble size degree replicas seed trim bin
    /// bulk_bin out input profile`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = ConfigLayer::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config { line: line_no, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, found {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let dup = || err(format!("duplicate key {key}"));
            macro_rules! set {
                ($field:ident, $parse:expr) => {{
                    if layer.$field.is_some() {
                        return Err(dup());
                    }
                    layer.$field = Some($parse(value).map_err(|e| err(format!("{key}: {e}")))?);
                }};
            }
            match key {
                "ensemble" => set!(ensemble, str::parse::<Ensemble>),
                "size" => set!(size, parse_usize),
                "degree" => set!(degree, parse_usize),
                "replicas" => set!(replicas, parse_usize),
                "seed" => set!(seed, parse_seed),
                "trim" => set!(trim, parse_f64),
                "bin" => set!(bin, parse_f64),
                "bulk_bin" => set!(bulk_bin, parse_f64),
                "out" => set!(out, parse_path),
                "input" => set!(input, parse_path),
                "profile" => set!(profile, str::parse::<Profile>),
                _ => return Err(err(format!("unknown key {key}"))),
            }
        }
        Ok(layer)
    }

    pub fn merge(self, over: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            ensemble: over.ensemble.or(self.ensemble),
            size: over.size.or(self.size),
            degree: over.degree.or(self.degree),
            replicas: over.replicas.or(self.replicas),
            seed: over.seed.or(self.seed),
            trim: over.trim.or(self.trim),
            bin: over.bin.or(self.bin),
            bulk_bin: over.bulk_bin.or(self.bulk_bin),
            out: over.out.or(self.out),
            input: over.input.or(self.input),
            profile: over.profile.or(self.profile),
        }
    }

    /// Fills defaults and validates. For `imported-map` without an explicit
    /// size the input file is read to learn its vertex count, so a missing
    /// file is reported here, before anything is written.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let ensemble = self
            .ensemble
            .ok_or_else(|| CliError::Invalid("no ensemble given".into()))?;
        let size = match (ensemble, self.size, &self.input) {
            (_, Some(n), _) => n,
            (Ensemble::ImportedMap, None, Some(path)) => crate::import::import_graph(path, false)?.0.n_vertices(),
            _ => self.profile.unwrap_or_default().default_size(),
        };
        let degree = match (ensemble, self.degree) {
            (Ensemble::Regular, None) => Some(3),
            (_, d) => d,
        };
        let default_bin = if ensemble.is_graph() {
            DEFAULT_GRAPH_BIN
        } else {
            DEFAULT_GOE_BIN
        };
        let cfg = ExperimentConfig {
            ensemble,
            size,
            degree,
            replicas: self.replicas.unwrap_or(1),
            seed: self.seed.unwrap_or(0),
            trim_fraction: self.trim.unwrap_or(DEFAULT_TRIM),
            localization_bin: self.bin.unwrap_or(default_bin),
            bulk_bin: self.bulk_bin.unwrap_or(DEFAULT_BULK_BIN),
            output_dir: self.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
            input: self.input,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_path(s: &str) -> Result<PathBuf, String> {
    if s.is_empty() {
        Err("empty path".into())
    } else {
        Ok(PathBuf::from(s))
    }
}

/// Decimal or `0x`-prefixed hexadecimal `u64`.
pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("bad seed {s:?}: {e}"))
}
