//! Dissipation rates, the variational functional and its maximizer, direct
//! steady solves and the identity checks that tie them together.

pub mod diagnostics;
pub mod error;
pub mod functional;
pub mod maximize;
pub mod ops;
pub mod rates;
pub mod report;
pub mod steady;

pub use diagnostics::{
    lemma_gradient_bound, momentum_flux_profile, plateau_breakpoints, plateau_profile, proof_layer_thickness,
    wall_layer_decomposition, wall_stress_dissipation, FluxProfile, WallLayerTerms,
};
pub use error::DissipationError;
pub use functional::{check_admissible, functional_terms, functional_terms_stokes, FunctionalBreakdown};
pub use maximize::{maximize_f, MaximizeOptions, MaximizerOutcome};
pub use ops::{projected_inverse_laplacian, stokes_velocity, Advector};
pub use rates::{dissipation_rate, log_law_comparison, upper_bound_check, UpperBoundCheck, LOG_LAW_PREFACTOR};
pub use report::{verify, Check, DissipationReport, SolverMeta, VerifyOptions};
pub use steady::{solve_steady_passive_vector, solve_symmetrized_pair, PairSolution, SolveOptions, SteadySolution};
