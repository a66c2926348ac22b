//! Convection-roll and branching advecting fields for plane Couette flow.

pub mod error;
pub mod fields;
pub mod layout;
pub mod params;
pub mod partition;
pub mod profile;

pub use error::ConstructionError;
pub use fields::{
    build_branching, build_branching_part, build_branching_test, build_mean_flow, build_roll_part,
    build_roll_test, build_rolls, check_wavenumber, mean_flow_profile, roll_streamfunction,
};
pub use layout::{branching_breakpoints, roll_breakpoints, uniform_breakpoints, LayoutOptions};
pub use params::{
    choose_branching_params, choose_roll_params, smallest_multiple_above, BranchingParams, RollParams,
    DEFAULT_FRAK_C,
};
pub use partition::{build_partition, partition_report, zeta, PartitionReport};
pub use profile::{chi, f_profile, CutoffSpec, TANH_CLAMP};
