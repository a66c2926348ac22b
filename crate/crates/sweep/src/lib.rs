//! Viscosity sweeps over the constructions: configuration, resolution
//! policy, parallel evaluation, scaling fits and report files.

pub mod config;
pub mod emit;
pub mod error;
pub mod fit;
pub mod record;
pub mod resolution;
pub mod run;

pub use config::{parse_nu, parse_nu_list, FlowFamily, OutputConfig, ResolutionPolicy, SweepConfig, Tolerances, Toggles};
pub use emit::{emit_report, load_records, read_jsonl, write_csv, write_jsonl, NamedFit, ReportFiles, CSV_COLUMNS};
pub use error::SweepError;
pub use fit::{fit_records, fit_scaling, FitModel, Quantity, ScalingFit};
pub use record::{PointStatus, SweepRecord};
pub use resolution::{next_efficient_size, rescale_test, resolution_policy, FlowParams, FlowSetup, Resolution};
pub use run::{bisect_frak_c, run_point, run_sweep, FrakCSearch};
