//! File formats: edge lists, point CSVs, the binary decomposition cache and
//! the CSV tables emitted by experiments.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64` exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::eigen::SpectralDecomposition;
use crate::ensembles::PointSet3;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodal::NodalRow;
use crate::stats::{Histogram, LocalizationCurve, QQData, SpacingSample};

/// Lossless decimal rendering of an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field.trim().parse().map_err(|_| Error::Parse {
        line,
        message: format!("expected a number, found {field:?}"),
    })
}

/// Writes `n m` followed by one `u v` line per edge (0-based, LF-terminated).
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n_vertices(), g.n_edges())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

/// Parses the edge-list format. Blank lines are ignored; the edge count in
/// the header must match the number of edge lines.
pub fn read_edge_list<R: Read>(input: R) -> Result<Graph> {
    let mut lines = BufReader::new(input)
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
    let parse_pair = |line: usize, text: &str| -> Result<(usize, usize)> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected two integers, found {text:?}"),
            });
        }
        let num = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("{s:?} is not a non-negative integer"),
            })
        };
        Ok((num(fields[0])?, num(fields[1])?))
    };

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(line, &header?)?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = line;
    for (line, text) in lines {
        let (u, v) = parse_pair(line, &text?)?;
        last_line = line;
        if edges.len() == m {
            return Err(Error::Parse {
                line,
                message: format!("more than the {m} edges declared in the header"),
            });
        }
        if u >= n || v >= n {
            return Err(Error::Parse {
                line,
                message: format!("edge ({u}, {v}) out of range for {n} vertices"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {m} edges but {} were found", edges.len()),
        });
    }
    Graph::new(n, edges).map_err(|e| match e {
        Error::DuplicateEdge(u, v) => Error::Parse {
            line: 0,
            message: format!("duplicate edge ({u}, {v})"),
        },
        other => other,
    })
}

pub fn write_edge_list_file(g: &Graph, path: &Path) -> Result<()> {
    write_edge_list(g, BufWriter::new(File::create(path)?))
}

pub fn read_edge_list_file(path: &Path) -> Result<Graph> {
    read_edge_list(File::open(path)?)
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

/// Points as CSV with header `x,y,z`.
pub fn write_points_csv<W: Write>(points: &PointSet3, out: W) -> Result<()> {
    let mut w = writer(out, &["x", "y", "z"])?;
    for p in points.points() {
        w.write_record(p.iter().map(|&c| fmt_f64(c)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_points_csv<R: Read>(input: R) -> Result<PointSet3> {
    let rows = read_f64_table(input, 3)?;
    Ok(PointSet3::unchecked(
        rows.into_iter().map(|r| [r[0], r[1], r[2]]).collect(),
    ))
}

/// Reads a headed CSV of numbers with exactly `width` columns. Empty fields
/// become NaN.
pub fn read_f64_table<R: Read>(input: R, width: usize) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} columns, found {}", record.len()),
            });
        }
        rows.push(
            record
                .iter()
                .map(|f| if f.is_empty() { Ok(f64::NAN) } else { parse_f64(f, line) })
                .collect::<Result<Vec<f64>>>()?,
        );
    }
    Ok(rows)
}

/// `bulk.csv`: `bin_center,density`.
pub fn write_bulk_csv<W: Write>(h: &Histogram, out: W) -> Result<()> {
    let mut w = writer(out, &["bin_center", "density"])?;
    for (c, d) in h.bin_centers.iter().zip(&h.densities) {
        w.write_record([fmt_f64(*c), fmt_f64(*d)])?;
    }
    w.flush()?;
    Ok(())
}

/// `spacings.csv`: one column `s`.
pub fn write_spacings_csv<W: Write>(spacings: &[f64], out: W) -> Result<()> {
    let mut w = writer(out, &["s"])?;
    for s in spacings {
        w.write_record([fmt_f64(*s)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_spacings_csv<R: Read>(input: R) -> Result<Vec<f64>> {
    Ok(read_f64_table(input, 1)?.into_iter().map(|r| r[0]).collect())
}

pub fn write_spacing_sample_csv<W: Write>(sample: &SpacingSample, out: W) -> Result<()> {
    write_spacings_csv(&sample.spacings, out)
}

/// `qq.csv`: `p,q_sample,q_reference`.
pub fn write_qq_csv<W: Write>(qq: &QQData, out: W) -> Result<()> {
    let mut w = writer(out, &["p", "q_sample", "q_reference"])?;
    for i in 0..qq.probs.len() {
        w.write_record([
            fmt_f64(qq.probs[i]),
            fmt_f64(qq.q_sample[i]),
            fmt_f64(qq.q_reference[i]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `localization.csv`: `bin_center,mean_linf,count,reference_level`. Empty
/// bins leave `mean_linf` blank.
pub fn write_localization_csv<W: Write>(curve: &LocalizationCurve, out: W) -> Result<()> {
    let mut w = writer(out, &["bin_center", "mean_linf", "count", "reference_level"])?;
    let reference = fmt_f64(curve.reference_level);
    for i in 0..curve.bin_centers.len() {
        w.write_record([
            fmt_f64(curve.bin_centers[i]),
            curve.mean_linf[i].map(fmt_f64).unwrap_or_default(),
            curve.counts[i].to_string(),
            reference.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `nodal.csv`: `k,eigenvalue,positive_domains,negative_domains,zeros,
/// multiplicity,lly_bound,xu_yau_bound`.
pub fn write_nodal_csv<W: Write>(rows: &[NodalRow], out: W) -> Result<()> {
    let mut w = writer(
        out,
        &[
            "k",
            "eigenvalue",
            "positive_domains",
            "negative_domains",
            "zeros",
            "multiplicity",
            "lly_bound",
            "xu_yau_bound",
        ],
    )?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            fmt_f64(r.eigenvalue),
            r.positive_domains.to_string(),
            r.negative_domains.to_string(),
            r.zero_vertices.to_string(),
            r.multiplicity.to_string(),
            r.lly_bound.to_string(),
            r.xu_yau_bound.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `eigenvalues.csv`: `k,eigenvalue` with 0-based `k`.
pub fn write_eigenvalues_csv<W: Write>(eigenvalues: &[f64], out: W) -> Result<()> {
    let mut w = writer(out, &["k", "eigenvalue"])?;
    for (k, x) in eigenvalues.iter().enumerate() {
        w.write_record([k.to_string(), fmt_f64(*x)])?;
    }
    w.flush()?;
    Ok(())
}

const CACHE_MAGIC: &[u8; 4] = b"RSED";
pub const CACHE_VERSION: u32 = 1;

/// Binary decomposition cache: magic `RSED`, format version (`u32`),
/// `n` (`u64`), then `n` eigenvalues and `n * n` eigenvector entries
/// (eigenvector by eigenvector), all little-endian.
pub fn write_decomposition<W: Write>(dec: &SpectralDecomposition, out: W) -> Result<()> {
    let mut out = BufWriter::new(out);
    out.write_all(CACHE_MAGIC)?;
    out.write_all(&CACHE_VERSION.to_le_bytes())?;
    out.write_all(&(dec.n() as u64).to_le_bytes())?;
    for x in dec.eigenvalues().iter().chain(dec.vectors_row_major()) {
        out.write_all(&x.to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_decomposition<R: Read>(input: R) -> Result<SpectralDecomposition> {
    let mut input = BufReader::new(input);
    let bad = |message: String| Error::Parse { line: 0, message };
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != CACHE_MAGIC {
        return Err(bad("not a decomposition cache".into()));
    }
    let mut word = [0u8; 4];
    input.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        return Err(bad(format!("unsupported cache version {version}")));
    }
    let mut buf = [0u8; 8];
    input.read_exact(&mut buf)?;
    let n = usize::try_from(u64::from_le_bytes(buf)).map_err(|_| bad("dimension overflows usize".into()))?;
    let mut read_block = |len: usize| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            input.read_exact(&mut buf)?;
            out.push(f64::from_le_bytes(buf));
        }
        Ok(out)
    };
    let eigenvalues = read_block(n)?;
    let vectors = read_block(n * n)?;
    SpectralDecomposition::from_parts(eigenvalues, vectors)
}
