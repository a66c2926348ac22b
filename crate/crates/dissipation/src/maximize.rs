//! Ascent on the concave functional `F`.
//!
//! Write `F(x) = 2 L(x) - Q(x, x)` with `L(x) = -<U2 x1>` and `Q` the sum of the
//! viscous and advective quadratic terms. The first direction points at the
//! solution of the Euler–Lagrange system, solved as the block system
//! `x = S(U2 e1 + U . grad y)`, `y = (1/nu) P Delta^{-1} P (U . grad x)`.
//! Later steps take the Stokes-preconditioned Euler–Lagrange residual. Every
//! direction is made `Q`-orthogonal to the stored ones and followed to the exact
//! maximum along it, so `F` never decreases.

use chlab_core::krylov::{gmres, GmresOptions};
use chlab_core::{Channel, VectorField};
use serde::{Deserialize, Serialize};

use crate::error::{check_nu, DissipationError};
use crate::functional::{breakdown_with, check_admissible, FunctionalBreakdown, Image};
use crate::ops::{flatten, projected_inverse_laplacian, unflatten, Advector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximizeOptions {
    /// Target for the Euler–Lagrange residual in the viscous energy norm,
    /// relative to the iterate.
    pub tol: f64,
    pub max_iter: usize,
    /// Stored directions before the basis is discarded.
    pub memory: usize,
    /// Relative residual of the block Euler–Lagrange solve; zero skips it.
    pub block_tol: f64,
    pub block_max_iter: usize,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 200,
            memory: 60,
            block_tol: 1e-10,
            block_max_iter: 1500,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaximizerOutcome {
    pub v_tilde: VectorField,
    pub f_max: f64,
    pub breakdown: FunctionalBreakdown,
    pub el_residual: f64,
    pub iterations: usize,
    /// `F` after every step, starting with the initial value.
    pub f_history: Vec<f64>,
    pub residual_history: Vec<f64>,
    pub converged: bool,
    /// Iterations and final relative residual of the block solve.
    pub block_iterations: usize,
    pub block_residual: Option<f64>,
}

fn energy(ch: &Channel, v: &VectorField, nu: f64) -> f64 {
    let g = ch.velocity_gradient(v);
    (nu * ch.inner_tensor(&g, &g)).sqrt()
}

fn block_solution(adv: &Advector<'_>, nu: f64, opts: &MaximizeOptions) -> (VectorField, usize, f64) {
    let ch = adv.channel();
    let (nx, ny) = (ch.grid().nx(), ch.grid().ny());
    let zero = VectorField::zeros(ch.grid());
    let b = flatten(&[&adv.stokes(&adv.normal_forcing(), nu), &zero]);
    let out = gmres(
        |z| {
            let f = unflatten(z, nx, ny, 2);
            let sx = adv.stokes(&adv.apply(&f[1]), nu);
            let mut ty = projected_inverse_laplacian(ch, &adv.apply(&f[0]));
            ty.scale(1.0 / nu);
            z.iter().zip(flatten(&[&sx, &ty])).map(|(a, c)| a - c).collect()
        },
        &b,
        None,
        GmresOptions {
            tol: opts.block_tol,
            max_iter: opts.block_max_iter,
            restart: 400,
        },
    );
    let x = unflatten(&out.x, nx, ny, 2).swap_remove(0);
    (x, out.iterations, out.residual)
}

/// Maximizes `F` from `init` (zero when absent). On non-convergence the best
/// iterate is still returned with `converged = false`.
pub fn maximize_f(
    ch: &Channel,
    u: &VectorField,
    nu: f64,
    init: Option<&VectorField>,
    opts: &MaximizeOptions,
) -> Result<MaximizerOutcome, DissipationError> {
    check_nu(nu)?;
    let adv = Advector::new(ch, u)?;
    let mut x = match init {
        Some(v) => {
            check_admissible(ch, v)?;
            v.clone()
        }
        None => VectorField::zeros(ch.grid()),
    };
    let forcing = adv.normal_forcing();
    let mut img_x = Image::of(&adv, &x, nu);
    let mut f = 2.0 * adv.linear_term(&x) - img_x.dot(ch, &img_x);
    let mut f_history = vec![f];
    let mut residual_history = Vec::new();
    let mut basis: Vec<(VectorField, Image)> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut el_residual;
    let mut block_residual = None;
    let scale0 = energy(ch, &adv.stokes(&forcing, nu), nu);
    let mut block = None;
    let mut block_iterations = 0;
    if opts.block_tol > 0.0 && scale0 > 0.0 {
        let (xb, it, res) = block_solution(&adv, nu, opts);
        block_iterations = it;
        block = Some(xb);
        block_residual = Some(res);
    }
    loop {
        // r = S(U2 e1 + (1/nu) U . grad P Delta^{-1} P (U . grad x)) - x
        let mut w = adv.apply(&projected_inverse_laplacian(ch, &adv.apply(&x)));
        w.scale(1.0 / nu);
        w.axpy(1.0, &forcing);
        let mut r = adv.stokes(&w, nu);
        r.axpy(-1.0, &x);
        let rn = energy(ch, &r, nu);
        let scale = energy(ch, &x, nu).max(scale0);
        el_residual = if scale == 0.0 { 0.0 } else { rn / scale };
        residual_history.push(el_residual);
        if el_residual <= opts.tol {
            converged = true;
            break;
        }
        if iterations >= opts.max_iter {
            break;
        }
        if let Some(mut xb) = block.take() {
            xb.axpy(-1.0, &x);
            r = xb;
        }
        let mut img_r = Image::of(&adv, &r, nu);
        for _ in 0..2 {
            for (d, img_d) in &basis {
                let c = img_r.dot(ch, img_d);
                r.axpy(-c, d);
                img_r.axpy(-c, img_d);
            }
        }
        let q = img_r.dot(ch, &img_r);
        if !(q > 0.0) || !q.is_finite() {
            break;
        }
        let s = 1.0 / q.sqrt();
        r.scale(s);
        img_r.scale(s);
        let t = adv.linear_term(&r) - img_x.dot(ch, &img_r);
        x.axpy(t, &r);
        img_x.axpy(t, &img_r);
        f += t * t;
        f_history.push(f);
        iterations += 1;
        if basis.len() >= opts.memory {
            basis.clear();
        }
        basis.push((r, img_r));
    }
    let breakdown = breakdown_with(&adv, &x, nu);
    Ok(MaximizerOutcome {
        f_max: breakdown.total,
        breakdown,
        v_tilde: x.with_bc(chlab_core::BcTag::Homogeneous),
        el_residual,
        iterations,
        f_history,
        residual_history,
        converged,
        block_iterations,
        block_residual,
    })
}
