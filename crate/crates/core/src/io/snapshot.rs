use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, ScalarField, VectorField3};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"LLF1";
const HEADER_LEN: usize = 4 + 3 * 4 + 3 * 8;

/// Contents of a snapshot file. The format does not store the grid origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub dims: usize,
    pub modes: [usize; 2],
    pub lengths: [f64; 2],
    pub time: f64,
    /// Row-major component arrays.
    pub data: [Vec<f64>; 3],
}

impl SnapshotFile {
    pub fn from_field(m: &VectorField3, time: f64) -> Self {
        let g = m.grid();
        SnapshotFile {
            dims: g.dims(),
            modes: g.modes(),
            lengths: g.lengths(),
            time,
            data: std::array::from_fn(|c| m.component(c).values().to_vec()),
        }
    }

    /// Rebuilds the field on a grid with the given origin.
    pub fn into_field(self, origin: [f64; 2]) -> Result<VectorField3> {
        let grid = match self.dims {
            1 => GridSpec::new_1d(self.modes[0], self.lengths[0], origin[0])?,
            _ => GridSpec::new_2d(self.modes, self.lengths, origin)?,
        };
        let [a, b, c] = self.data;
        VectorField3::new([
            ScalarField::from_values(grid, a)?,
            ScalarField::from_values(grid, b)?,
            ScalarField::from_values(grid, c)?,
        ])
    }

    /// True if the stored geometry matches `grid` (origin aside).
    pub fn matches(&self, grid: &GridSpec) -> bool {
        self.dims == grid.dims() && self.modes == grid.modes() && self.lengths == grid.lengths()
    }
}

pub fn write_snapshot(path: &Path, m: &VectorField3, time: f64) -> Result<()> {
    let s = SnapshotFile::from_field(m, time);
    let n = m.grid().len();
    let mut buf = Vec::with_capacity(HEADER_LEN + 3 * 8 * n);
    buf.extend_from_slice(SNAPSHOT_MAGIC);
    let u32_of = |v: usize| u32::try_from(v).expect("grid sizes fit in u32");
    for v in [s.dims, s.modes[0], s.modes[1]] {
        buf.extend_from_slice(&u32_of(v).to_le_bytes());
    }
    for v in [s.lengths[0], s.lengths[1], s.time] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for comp in &s.data {
        for v in comp {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_snapshot(path: &Path) -> Result<SnapshotFile> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < HEADER_LEN || &bytes[..4] != SNAPSHOT_MAGIC {
        return Err(bad("missing LLF1 header".into()));
    }
    let u = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes")) as usize;
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let (dims, nx, ny) = (u(4), u(8), u(12));
    let (lx, ly, time) = (f(16), f(24), f(32));
    if !(dims == 1 || dims == 2) || (dims == 1 && ny != 1) {
        return Err(bad(format!("unsupported geometry: dims = {dims}, ny = {ny}")));
    }
    let n = nx.checked_mul(ny).ok_or_else(|| bad("grid size overflows".into()))?;
    if bytes.len() != HEADER_LEN + 3 * 8 * n {
        return Err(bad(format!(
            "expected {} bytes for a {nx}x{ny} grid, found {}",
            HEADER_LEN + 3 * 8 * n,
            bytes.len()
        )));
    }
    let data = std::array::from_fn(|c| {
        let start = HEADER_LEN + c * 8 * n;
        (0..n).map(|i| f(start + 8 * i)).collect()
    });
    Ok(SnapshotFile {
        dims,
        modes: [nx, ny],
        lengths: [lx, ly],
        time,
        data,
    })
}

/// Contents of a `.meta` sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Meta {
    pub version: String,
    /// Seconds since the Unix epoch when the file was written.
    pub written_at: u64,
    /// Wall-clock seconds spent in the run up to this output.
    pub wall_clock_seconds: f64,
    /// Fully resolved configuration document.
    pub config: String,
}

impl Meta {
    pub fn new(config: String, wall_clock_seconds: f64) -> Self {
        Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            written_at: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_clock_seconds,
            config,
        }
    }
}

/// `dir/name.ext` -> `dir/name.meta`.
pub fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta")
}

pub fn write_meta(path: &Path, meta: &Meta) -> Result<()> {
    let p = meta_path(path);
    let text = toml::to_string(meta).expect("meta serializes");
    std::fs::write(&p, text).map_err(|e| Error::io(p, e))
}

pub fn read_meta(path: &Path) -> Result<Meta> {
    let p = meta_path(path);
    let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
    toml::from_str(&text).map_err(|e| Error::Format {
        path: p,
        reason: e.to_string(),
    })
}

/// Reads every `*.llf` file of `dir`, sorted by time.
pub fn read_snapshot_dir(dir: &Path) -> Result<Vec<SnapshotFile>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    for e in entries {
        let p = e.map_err(|e| Error::io(dir, e))?.path();
        if p.extension().is_some_and(|x| x == "llf") {
            out.push(read_snapshot(&p)?);
        }
    }
    out.sort_by(|a, b| a.time.total_cmp(&b.time));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.llf");
        let g = GridSpec::new_2d([4, 6], [1.0, 2.0], [0.0, 0.0]).unwrap();
        let m = VectorField3::from_fn(g, |x, y| [x, y, 1.0]);
        write_snapshot(&p, &m, 0.25).unwrap();
        let b = std::fs::read(&p).unwrap();
        assert_eq!(&b[..4], b"LLF1");
        assert_eq!(u32::from_le_bytes(b[4..8].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(b[8..12].try_into().unwrap()), 4);
        assert_eq!(u32::from_le_bytes(b[12..16].try_into().unwrap()), 6);
        assert_eq!(f64::from_le_bytes(b[24..32].try_into().unwrap()), 2.0);
        assert_eq!(f64::from_le_bytes(b[32..40].try_into().unwrap()), 0.25);
        assert_eq!(b.len(), 40 + 3 * 24 * 8);
        // m2 at (ix, iy) = (0, 3) is the y coordinate 1.0
        let off = 40 + 24 * 8 + 3 * 4 * 8;
        assert_eq!(f64::from_le_bytes(b[off..off + 8].try_into().unwrap()), 1.0);
    }

    #[test]
    fn truncated_and_foreign_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("b.llf");
        std::fs::write(&p, b"LLF2....").unwrap();
        assert!(matches!(read_snapshot(&p), Err(Error::Format { .. })));
        let g = GridSpec::square(4, 1.0, 0.0).unwrap();
        write_snapshot(&p, &VectorField3::zeros(g), 0.0).unwrap();
        let mut b = std::fs::read(&p).unwrap();
        b.pop();
        std::fs::write(&p, b).unwrap();
        assert!(matches!(read_snapshot(&p), Err(Error::Format { .. })));
    }

    #[test]
    fn meta_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("snap_1.llf");
        let m = Meta::new("[problem]\nkind = \"blowup\"\n".into(), 1.5);
        write_meta(&p, &m).unwrap();
        assert!(dir.path().join("snap_1.meta").exists());
        assert_eq!(read_meta(&p).unwrap(), m);
    }
}
