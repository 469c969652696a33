use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::schemes::{RunRecord, StopReason};

use super::{IoError, RunConfigFile};

pub const CSV_HEADER: [&str; 8] = ["t", "area", "H_min", "H_max", "k_min", "r_min", "r_max", "dt"];

/// Contents of `run_meta.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMeta {
    pub config: RunConfigFile,
    pub halt_reason: StopReason,
    pub steps: u64,
    pub final_time: f64,
    /// Not reproducible across reruns, unlike the other outputs.
    pub wall_time_s: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFiles {
    pub diagnostics: PathBuf,
    pub snapshots: PathBuf,
    pub meta: PathBuf,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError { path: path.to_path_buf(), source }
}

/// Writes `diagnostics.csv`, `snapshots.ndjson` and `run_meta.json` into
/// `dir`, creating it if needed.
pub fn emit_outputs(
    record: &RunRecord,
    config: &RunConfigFile,
    dir: &Path,
    wall_time_s: f64,
) -> Result<OutputFiles, IoError> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let files = OutputFiles {
        diagnostics: dir.join("diagnostics.csv"),
        snapshots: dir.join("snapshots.ndjson"),
        meta: dir.join("run_meta.json"),
    };
    write_csv(record, &files.diagnostics)?;

    let path = &files.snapshots;
    let mut out = BufWriter::new(File::create(path).map_err(io_err(path))?);
    for snap in &record.snapshots {
        writeln!(out, "{}", snap.to_json_line()).map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))?;

    let meta = RunMeta {
        config: config.clone(),
        halt_reason: record.halt.clone(),
        steps: record.steps(),
        final_time: record.halt_time(),
        wall_time_s,
    };
    let path = &files.meta;
    let mut text = serde_json::to_string_pretty(&meta).expect("run metadata serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))?;
    Ok(files)
}

fn write_csv(record: &RunRecord, path: &Path) -> Result<(), IoError> {
    let to_io = |e: csv::Error| IoError { path: path.to_path_buf(), source: e.into() };
    let mut w = csv::Writer::from_path(path).map_err(to_io)?;
    w.write_record(CSV_HEADER).map_err(to_io)?;
    for row in &record.diagnostics {
        let fields = [row.t, row.area, row.h_min, row.h_max, row.k_min, row.r_min, row.r_max, row.dt];
        w.write_record(fields.iter().map(|v| v.to_string())).map_err(to_io)?;
    }
    w.flush().map_err(io_err(path))
}
