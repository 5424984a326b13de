//! Configuration files, CSV tables, binary snapshots and their metadata.

mod config;
mod csv_io;
mod output;
mod snapshot;

pub use config::ConfigFile;
pub use csv_io::{
    fmt_f64, read_csv, read_errors_csv, write_csv, write_errors_csv, ERRORS_HEADER, ERRORS_VERSION,
    TIMESERIES_HEADER, TIMESERIES_VERSION,
};
pub use output::{load_reference, write_run};
pub use snapshot::{
    meta_path, read_meta, read_snapshot, read_snapshot_dir, write_meta, write_snapshot, Meta, SnapshotFile,
    SNAPSHOT_MAGIC,
};
