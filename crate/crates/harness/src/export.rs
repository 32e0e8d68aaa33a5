//! Trajectory CSV files with JSON sidecars.
//!
//! CSV layout: header `t,h,hdot`, then one line per sample with three
//! values in `{:.16e}` (17 significant digits), LF line endings.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use caprise_core::{Sample, Trajectory, TrajectoryMeta};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "t,h,hdot";

pub fn write_csv<W: Write>(mut out: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for s in &traj.samples {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", s.t, s.h, s.v)?;
    }
    out.flush()
}

pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

/// Writes `path` and its `.json` sidecar holding the metadata.
pub fn write_trajectory(path: &Path, traj: &Trajectory) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(BufWriter::new(file), traj).map_err(|e| Error::io(path, e))?;
    let side = sidecar_path(path);
    let mut json = serde_json::to_string_pretty(&traj.meta)?;
    json.push('\n');
    fs::write(&side, json).map_err(|e| Error::io(&side, e))?;
    Ok(())
}

pub fn parse_csv(text: &str, path: &Path) -> Result<Vec<Sample>> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == CSV_HEADER => {}
        _ => return Err(parse_err(1, format!("expected header `{CSV_HEADER}`"))),
    }
    let mut samples: Vec<Sample> = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| parse_err(k + 1, e.to_string()))?;
        let [t, h, v] = values[..] else {
            return Err(parse_err(k + 1, format!("expected 3 fields, found {}", values.len())));
        };
        if samples.last().is_some_and(|p| t <= p.t) {
            return Err(parse_err(k + 1, "times must increase strictly".into()));
        }
        samples.push(Sample { t, h, v });
    }
    Ok(samples)
}

/// Reads a trajectory CSV; metadata comes from the sidecar when present.
pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let samples = parse_csv(&text, path)?;
    let side = sidecar_path(path);
    let meta = if side.exists() {
        let json = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
        serde_json::from_str(&json)?
    } else {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("");
        TrajectoryMeta::new(stem, "unknown")
    };
    Ok(Trajectory::new(samples, meta))
}
