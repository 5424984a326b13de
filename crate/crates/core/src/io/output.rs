use std::path::{Path, PathBuf};

use super::config::ConfigFile;
use super::csv_io::write_csv;
use super::snapshot::{read_snapshot_dir, write_meta, write_snapshot, Meta};
use crate::error::{Error, Result};
use crate::experiments::{RunOutput, Snapshot};
use crate::spectral::GridSpec;

/// Writes `timeseries.csv` and one `snapshot_<step>.llf` per stored field
/// into `dir`, each with a `.meta` sidecar. Returns the written data paths.
pub fn write_run(dir: &Path, config: &ConfigFile, out: &RunOutput, wall_clock_seconds: f64) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let meta = Meta::new(config.to_toml(), wall_clock_seconds);
    let mut written = Vec::with_capacity(1 + out.snapshots.len());
    let ts = dir.join("timeseries.csv");
    write_csv(&ts, &out.series)?;
    write_meta(&ts, &meta)?;
    written.push(ts);
    for s in &out.snapshots {
        let p = dir.join(format!("snapshot_{:09}.llf", s.step));
        write_snapshot(&p, &s.m, s.time)?;
        write_meta(&p, &meta)?;
        written.push(p);
    }
    Ok(written)
}

/// Reads the snapshots of `dir` as a reference on `grid`. Every file must
/// match the grid's size and lengths.
pub fn load_reference(dir: &Path, grid: &GridSpec, dt_hint: Option<f64>) -> Result<Vec<Snapshot>> {
    let files = read_snapshot_dir(dir)?;
    if files.is_empty() {
        return Err(Error::Format {
            path: dir.to_path_buf(),
            reason: "no .llf snapshots found".into(),
        });
    }
    files
        .into_iter()
        .map(|f| {
            if !f.matches(grid) {
                return Err(Error::Config(format!(
                    "reference snapshot at t = {} has grid {:?}/{:?}, expected {:?}/{:?}",
                    f.time,
                    f.modes,
                    f.lengths,
                    grid.modes(),
                    grid.lengths()
                )));
            }
            let time = f.time;
            let step = dt_hint.map_or(0, |dt| (time / dt).round() as usize);
            Ok(Snapshot {
                step,
                time,
                m: f.into_field(grid.origin())?,
            })
        })
        .collect()
}
