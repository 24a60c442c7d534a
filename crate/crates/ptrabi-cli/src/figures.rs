//! Plot-data bundles: constraint-curve CSVs over a shared grid, zero-drive
//! degeneracy markers, optional two-index doublet overlays, and a manifest
//! describing every emitted file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_traits::ToPrimitive;
use serde::Serialize;

use ptrabi_core::spectrum;

use crate::render;
use crate::{grid, CliError};

#[derive(Serialize, Debug)]
pub struct ManifestEntry {
    pub n: u32,
    #[serde(rename = "gMax")]
    pub g_max: f64,
    pub samples: u32,
    pub file: String,
}

/// Emits one CSV per index (or a single overlay CSV in doublet mode) plus
/// `manifest.json` into `out_dir`, and returns the manifest entries.
pub fn emit(
    ns: &[u32],
    g_max: f64,
    samples: u32,
    out_dir: &Path,
    doublet: bool,
    threads: u32,
) -> Result<Vec<ManifestEntry>, CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut manifest = Vec::new();
    if doublet {
        if ns.len() != 2 {
            return Err(CliError::Usage(format!(
                "doublet mode overlays exactly two indices, got {}",
                ns.len()
            )));
        }
        let file = format!("doublet_n{}_n{}.csv", ns[0], ns[1]);
        let mut body = String::from("g,x,branch,n\n");
        for &n in ns {
            for p in grid::trace(n, g_max, samples, threads)? {
                let _ = writeln!(body, "{},{},{},{}", p.g, p.x, p.branch, n);
            }
            for (g, x) in markers(n, g_max)? {
                let _ = writeln!(body, "{},{},-1,{}", g, x, n);
            }
            manifest.push(ManifestEntry { n, g_max, samples, file: file.clone() });
        }
        write_file(&out_dir.join(&file), &body)?;
    } else {
        for &n in ns {
            let file = format!("constraint_n{n}.csv");
            let points = grid::trace(n, g_max, samples, threads)?;
            let marks = markers(n, g_max)?;
            write_file(&out_dir.join(&file), &render::curve_csv(&points, &marks))?;
            manifest.push(ManifestEntry { n, g_max, samples, file });
        }
    }
    write_file(&out_dir.join("manifest.json"), &render::to_json(&manifest))?;
    Ok(manifest)
}

/// Exactly degenerate zero-drive levels within the plotted range, as
/// `(g, x = 0)` marker positions.
fn markers(n: u32, g_max: f64) -> Result<Vec<(f64, f64)>, CliError> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let report = spectrum::degenerate_gamma_values(n)?;
    Ok(report
        .entries
        .iter()
        .filter_map(|e| {
            let g = e.g_value.to_f64()?;
            (g <= g_max).then_some((g, 0.0))
        })
        .collect())
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|source| CliError::Io { path: path.clone(), source })
}
