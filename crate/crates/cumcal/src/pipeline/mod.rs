//! Data ingestion, pipeline orchestration and output emission.

mod config;
mod csv;
mod report;
mod runner;
mod svg;

pub use config::{parse_config, DataSource, RunConfig, SourceRole, Task, TaskKind};
pub use csv::{emit_curves, load_csv, write_series_csv, CurveKind};
pub use runner::{run, RunSummary, TaskStatus};
pub use svg::{emit_svg, Curve};
