//! The full identity and bound suite for one advecting field.

use chlab_core::{Channel, VectorField};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{
    momentum_flux_profile, proof_layer_thickness, wall_layer_decomposition, wall_stress_dissipation,
};
use crate::error::{check_nu, DissipationError};
use crate::functional::{functional_terms, functional_terms_stokes, FunctionalBreakdown};
use crate::maximize::{maximize_f, MaximizeOptions};
use crate::rates::{dissipation_rate, log_law_comparison, upper_bound_check};
use crate::steady::{solve_steady_passive_vector, solve_symmetrized_pair, SolveOptions};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Threshold the value is compared against; see `pass`.
    pub limit: f64,
    pub pass: bool,
    /// Hard checks fail a verification run; soft ones are informational.
    pub hard: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub solve: SolveOptions,
    pub maximize: MaximizeOptions,
    pub run_direct: bool,
    pub run_pair: bool,
    pub run_maximizer: bool,
    /// Relative tolerance of the energy identity and its bookkeeping.
    pub energy_tol: f64,
    /// Relative tolerance of the flux, wall-stress and wall-layer identities.
    pub identity_tol: f64,
    pub ortho_tol: f64,
    pub bound_tol: f64,
    /// Slack of `eps_u - nu >= F(test)`, times `max(1, eps_u)`.
    pub lower_tol: f64,
    /// Slack of `eps_u - nu >= F_max`, times `max(1, eps_u)`.
    pub gap_tol: f64,
    pub pair_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            solve: SolveOptions::default(),
            maximize: MaximizeOptions::default(),
            run_direct: true,
            run_pair: true,
            run_maximizer: true,
            energy_tol: 1e-8,
            identity_tol: 1e-6,
            ortho_tol: 1e-8,
            bound_tol: 1e-6,
            lower_tol: 1e-8,
            gap_tol: 1e-6,
            pair_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverMeta {
    pub nx: usize,
    pub ny: usize,
    pub p: usize,
    pub gmres_iterations: Option<usize>,
    pub gmres_residual: Option<f64>,
    pub pair_iterations: Option<usize>,
    pub pair_residual: Option<f64>,
    pub maximizer_iterations: Option<usize>,
    pub el_residual: Option<f64>,
    pub maximizer_converged: Option<bool>,
    /// Failure messages of solves that did not complete.
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationReport {
    pub nu: f64,
    #[serde(rename = "eps_U")]
    pub eps_big: f64,
    pub eps_u: Option<f64>,
    #[serde(rename = "F_test")]
    pub f_test: f64,
    #[serde(rename = "F_test_breakdown")]
    pub f_test_breakdown: FunctionalBreakdown,
    /// Term III of the test field with the Stokes response in place of the
    /// projected Dirichlet inverse.
    pub term_iii_stokes: f64,
    #[serde(rename = "F_max")]
    pub f_max: Option<f64>,
    #[serde(rename = "F_max_breakdown")]
    pub f_max_breakdown: Option<FunctionalBreakdown>,
    /// `(eps_u - nu) - F_max`.
    pub variational_gap: Option<f64>,
    pub upper_bound: f64,
    pub wall_stress: Option<f64>,
    pub flux_profile_relstd: Option<f64>,
    pub wall_layer_delta: Option<f64>,
    /// `eps_U (ln 1/nu)^2 / 0.042`, absent for `nu >= 1`.
    pub log_law_ratio: Option<f64>,
    pub log_law_ratio_u: Option<f64>,
    pub checks: Vec<Check>,
    pub solver: SolverMeta,
}

impl DissipationReport {
    pub fn hard_failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.hard && !c.pass).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn at_most(&mut self, name: &str, value: f64, limit: f64, hard: bool) {
        self.0.push(Check {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
            hard,
        });
    }
    fn at_least(&mut self, name: &str, value: f64, limit: f64, hard: bool) {
        self.0.push(Check {
            name: name.into(),
            value,
            limit,
            pass: value >= limit,
            hard,
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn norm(ch: &Channel, v: &VectorField) -> f64 {
    ch.inner_vec(v, v).sqrt()
}

fn grad_norm(ch: &Channel, v: &VectorField) -> f64 {
    let g = ch.velocity_gradient(v);
    ch.inner_tensor(&g, &g).sqrt()
}

/// Runs every identity and bound check for the advecting field `u` with test
/// field `v_test`. Solver failures are recorded in the report, not returned.
pub fn verify(
    ch: &Channel,
    u: &VectorField,
    v_test: &VectorField,
    nu: f64,
    opts: &VerifyOptions,
) -> Result<DissipationReport, DissipationError> {
    check_nu(nu)?;
    let g = ch.grid();
    let eps_big = dissipation_rate(ch, u, nu)?;
    let ft = functional_terms(ch, u, v_test, nu)?;
    let fs = functional_terms_stokes(ch, u, v_test, nu)?;
    let mut checks = Checks(Vec::new());
    let mut meta = SolverMeta {
        nx: g.nx(),
        ny: g.ny(),
        p: g.p(),
        ..Default::default()
    };
    checks.at_least("term_iii_dirichlet_below_stokes", fs.term_iii - ft.term_iii, -1e-12 * ft.term_iii.abs().max(1e-300), false);
    let log_ratio = if nu < 1.0 { Some(log_law_comparison(eps_big, nu)?) } else { None };
    let mut report = DissipationReport {
        nu,
        eps_big,
        eps_u: None,
        f_test: ft.total,
        f_test_breakdown: ft,
        term_iii_stokes: fs.term_iii,
        f_max: None,
        f_max_breakdown: None,
        variational_gap: None,
        upper_bound: 4.0 * eps_big.cbrt(),
        wall_stress: None,
        flux_profile_relstd: None,
        wall_layer_delta: None,
        log_law_ratio: log_ratio,
        log_law_ratio_u: None,
        checks: Vec::new(),
        solver: meta.clone(),
    };

    if opts.run_maximizer {
        let m = maximize_f(ch, u, nu, Some(v_test), &opts.maximize)?;
        let monotone = m.f_history.windows(2).all(|w| w[1] >= w[0]);
        checks.at_least("maximizer_monotone", if monotone { 1.0 } else { 0.0 }, 1.0, true);
        checks.at_least("maximizer_dominates_test", m.f_max - ft.total, -1e-10 * ft.total.abs().max(1.0), true);
        checks.at_most("maximizer_el_residual", m.el_residual, opts.maximize.tol, false);
        meta.maximizer_iterations = Some(m.iterations);
        meta.el_residual = Some(m.el_residual);
        meta.maximizer_converged = Some(m.converged);
        report.f_max = Some(m.f_max);
        report.f_max_breakdown = Some(m.breakdown);
    }

    let mut direct_v = None;
    if opts.run_direct {
        match solve_steady_passive_vector(ch, u, nu, &opts.solve) {
            Ok(sol) => {
                meta.gmres_iterations = Some(sol.iterations);
                meta.gmres_residual = Some(sol.residual);
                let eps_u = dissipation_rate(ch, &sol.u, nu)?;
                let gv = grad_norm(ch, &sol.v).powi(2);
                let visc = nu * gv;
                let adv = -ch.inner(&u.u2, &sol.v.u1);
                checks.at_most("energy_identity", rel(visc, adv), opts.energy_tol, true);
                checks.at_most("dissipation_bookkeeping", rel(eps_u, visc + nu), opts.energy_tol, true);
                let wall = wall_stress_dissipation(ch, &sol.u, nu)?;
                checks.at_most("wall_stress_identity", rel(wall, eps_u), opts.identity_tol, true);
                let flux = momentum_flux_profile(ch, u, &sol.u, nu)?;
                checks.at_most("flux_constancy", flux.relstd, opts.identity_tol, true);
                checks.at_most("flux_mean", rel(flux.mean, eps_u), opts.identity_tol, true);
                let full = wall_layer_decomposition(ch, u, &sol.u, nu, 1.0)?;
                checks.at_most("wall_layer_full", rel(full.sum, eps_u), opts.identity_tol, true);
                let delta = proof_layer_thickness(g, eps_big, nu);
                let layer = wall_layer_decomposition(ch, u, &sol.u, nu, delta)?;
                checks.at_most("wall_layer_proof", rel(layer.sum, eps_u), opts.identity_tol, true);
                let ub = upper_bound_check(eps_big, eps_u, opts.bound_tol)?;
                checks.at_most("upper_bound", eps_u / ub.bound, 1.0 + opts.bound_tol, true);
                let slack = eps_u.max(1.0);
                checks.at_least("lower_bound_test", (eps_u - nu) - ft.total, -opts.lower_tol * slack, true);
                if let Some(fm) = report.f_max {
                    let gap = (eps_u - nu) - fm;
                    report.variational_gap = Some(gap);
                    checks.at_least("lower_bound_max", gap, -opts.gap_tol * slack, true);
                }
                report.eps_u = Some(eps_u);
                report.wall_stress = Some(wall);
                report.flux_profile_relstd = Some(flux.relstd);
                report.wall_layer_delta = Some(delta);
                report.log_law_ratio_u = if nu < 1.0 { Some(log_law_comparison(eps_u, nu)?) } else { None };
                direct_v = Some(sol.v);
            }
            Err(e) => {
                meta.failures.push(format!("direct solve: {e}"));
                checks.at_least("direct_solve_converged", 0.0, 1.0, true);
            }
        }
    }

    if opts.run_pair {
        match solve_symmetrized_pair(ch, u, nu, &opts.solve) {
            Ok(pair) => {
                meta.pair_iterations = Some(pair.iterations);
                meta.pair_residual = Some(pair.residual);
                let gb = ch.velocity_gradient(&pair.v_bar);
                let gt = ch.velocity_gradient(&pair.v_tilde);
                let scale = (ch.inner_tensor(&gb, &gb) * ch.inner_tensor(&gt, &gt)).sqrt();
                let o1 = ch.inner_tensor(&gb, &gt).abs();
                let o2 = ch.inner(&u.u2, &pair.v_bar.u1).abs();
                let s2 = norm(ch, &VectorField::new(u.u2.clone(), u.u2.clone(), chlab_core::BcTag::None))
                    * norm(ch, &pair.v_bar);
                checks.at_most("orthogonality_gradients", if scale > 0.0 { o1 / scale } else { o1 }, opts.ortho_tol, true);
                checks.at_most("orthogonality_normal_flux", if s2 > 0.0 { o2 / s2 } else { o2 }, opts.ortho_tol, true);
                if let Some(v) = &direct_v {
                    let mut sum = pair.v_bar.clone();
                    sum.axpy(1.0, &pair.v_tilde);
                    sum.axpy(-1.0, v);
                    let nv = norm(ch, v);
                    let e = if nv > 0.0 { norm(ch, &sum) / nv } else { norm(ch, &sum) };
                    checks.at_most("pair_reconstruction", e, opts.pair_tol, true);
                }
            }
            Err(e) => {
                meta.failures.push(format!("pair solve: {e}"));
                checks.at_least("pair_solve_converged", 0.0, 1.0, true);
            }
        }
    }

    report.checks = checks.0;
    report.solver = meta;
    Ok(report)
}
