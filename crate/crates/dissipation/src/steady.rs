//! Direct solves of the steady passive-vector problem and the symmetrized pair.

use chlab_core::krylov::{gmres, GmresOptions};
use chlab_core::{BcTag, Channel, ScalarField, VectorField};
use serde::{Deserialize, Serialize};

use crate::error::{check_nu, DissipationError};
use crate::ops::{flatten, relative_divergence, unflatten, Advector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Relative residual of the Stokes-preconditioned system.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 3000,
            restart: 400,
        }
    }
}

impl SolveOptions {
    fn gmres(&self) -> GmresOptions {
        GmresOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            restart: self.restart,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SteadySolution {
    /// `u = x2 e1 + v`.
    pub u: VectorField,
    pub v: VectorField,
    pub pressure: ScalarField,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// Largest divergence of `v` relative to its gradient.
    pub divergence: f64,
}

#[derive(Clone, Debug)]
pub struct PairSolution {
    pub v_bar: VectorField,
    pub v_tilde: VectorField,
    pub residual: f64,
    pub iterations: usize,
    pub history: Vec<f64>,
}

fn check_advecting_field(ch: &Channel, u: &VectorField) -> Result<(), DissipationError> {
    let c = u.clone().with_bc(BcTag::Couette);
    let wall = c.wall_defect();
    if wall > 1e-12 {
        return Err(DissipationError::InvalidInput(format!("advecting field misses Couette wall values by {wall:.3e}")));
    }
    let div = relative_divergence(ch, u);
    if div > 1e-8 {
        return Err(DissipationError::InvalidInput(format!("advecting field has relative divergence {div:.3e}")));
    }
    Ok(())
}

fn run(
    op: impl FnMut(&[f64]) -> Vec<f64>,
    b: &[f64],
    opts: &SolveOptions,
) -> Result<chlab_core::krylov::GmresOutcome, DissipationError> {
    let out = gmres(op, b, None, opts.gmres());
    if !out.converged {
        return Err(DissipationError::NoConvergence {
            iterations: out.iterations,
            residual: out.residual,
            history: out.history,
        });
    }
    Ok(out)
}

/// Solves `U . grad u = -grad p + nu Delta u` with Couette walls by writing
/// `u = x2 e1 + v` and iterating on `v - S(U . grad v) = S(U2 e1)`, where `S`
/// is the Stokes solution operator.
pub fn solve_steady_passive_vector(
    ch: &Channel,
    u: &VectorField,
    nu: f64,
    opts: &SolveOptions,
) -> Result<SteadySolution, DissipationError> {
    check_nu(nu)?;
    let adv = Advector::new(ch, u)?;
    check_advecting_field(ch, u)?;
    let (nx, ny) = (ch.grid().nx(), ch.grid().ny());
    let b = flatten(&[&adv.stokes(&adv.normal_forcing(), nu)]);
    let out = run(
        |x| {
            let v = unflatten(x, nx, ny, 1).pop().unwrap();
            let s = adv.stokes(&adv.apply(&v), nu);
            x.iter().zip(flatten(&[&s])).map(|(a, c)| a - c).collect()
        },
        &b,
        opts,
    )?;
    let v = unflatten(&out.x, nx, ny, 1).pop().unwrap();
    let mut w = adv.normal_forcing();
    w.axpy(1.0, &adv.apply(&v));
    let stokes = ch.stokes_solve(&w, nu)?;
    let mut full = VectorField::couette(ch.grid());
    full.axpy(1.0, &v);
    Ok(SteadySolution {
        divergence: relative_divergence(ch, &v),
        u: full.with_bc(BcTag::Couette),
        v,
        pressure: stokes.pressure,
        residual: out.residual,
        iterations: out.iterations,
        history: out.history,
    })
}

/// Solves the coupled pair `vt = S(U2 e1 + U . grad vb)`, `vb = S(U . grad vt)`
/// as one block system.
pub fn solve_symmetrized_pair(
    ch: &Channel,
    u: &VectorField,
    nu: f64,
    opts: &SolveOptions,
) -> Result<PairSolution, DissipationError> {
    check_nu(nu)?;
    let adv = Advector::new(ch, u)?;
    check_advecting_field(ch, u)?;
    let (nx, ny) = (ch.grid().nx(), ch.grid().ny());
    let zero = VectorField::zeros(ch.grid());
    let b = flatten(&[&adv.stokes(&adv.normal_forcing(), nu), &zero]);
    let out = run(
        |x| {
            let f = unflatten(x, nx, ny, 2);
            let (vt, vb) = (&f[0], &f[1]);
            let s_vb = adv.stokes(&adv.apply(vb), nu);
            let s_vt = adv.stokes(&adv.apply(vt), nu);
            x.iter().zip(flatten(&[&s_vb, &s_vt])).map(|(a, c)| a - c).collect()
        },
        &b,
        opts,
    )?;
    let mut f = unflatten(&out.x, nx, ny, 2);
    let v_bar = f.pop().unwrap();
    let v_tilde = f.pop().unwrap();
    Ok(PairSolution {
        v_bar,
        v_tilde,
        residual: out.residual,
        iterations: out.iterations,
        history: out.history,
    })
}
