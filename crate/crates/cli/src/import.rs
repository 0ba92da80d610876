use std::path::Path;

use randspec_core::io::read_edge_list_file;
use randspec_core::Graph;

use crate::error::{CliError, Result};

/// Reads an edge-list file. With `expect_cubic_map` set, a graph that is not
/// 3-regular or not 3-connected is still returned, with a warning for each
/// failed property (also sent to the log).
pub fn import_graph(path: &Path, expect_cubic_map: bool) -> Result<(Graph, Vec<String>)> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()));
    }
    let graph = read_edge_list_file(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    let mut warnings = Vec::new();
    if expect_cubic_map {
        let stats = graph.degree_stats();
        if stats.min != 3 || stats.max != 3 {
            warnings.push(format!(
                "{}: not 3-regular (degrees {}..{})",
                path.display(),
                stats.min,
                stats.max
            ));
        }
        if !graph.is_three_connected() {
            warnings.push(format!("{}: not 3-connected", path.display()));
        }
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok((graph, warnings))
}
