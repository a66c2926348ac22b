//! Flux, wall-stress and wall-layer identities, and the layer gradient bound.

use chlab_constructions::f_profile;
use chlab_core::{BcTag, Channel, ChannelGrid, ScalarField, VectorField};
use serde::{Deserialize, Serialize};

use crate::error::{check_nu, DissipationError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FluxProfile {
    /// `J(x2) = nu d2 mean(u1) - mean(U2 u1)` at every x2 node.
    pub values: Vec<f64>,
    /// Channel mean of `J`.
    pub mean: f64,
    /// Quadrature-weighted standard deviation of `J` over `|mean|`.
    pub relstd: f64,
}

fn mean_u1(ch: &Channel, u: &VectorField) -> Vec<f64> {
    ch.horizontal_average(&u.u1)
}

fn advective_flux(ch: &Channel, big_u: &VectorField, u: &VectorField) -> Vec<f64> {
    ch.horizontal_average(&big_u.u2.zip_map(&u.u1, |a, b| a * b))
}

pub fn momentum_flux_profile(
    ch: &Channel,
    big_u: &VectorField,
    u: &VectorField,
    nu: f64,
) -> Result<FluxProfile, DissipationError> {
    check_nu(nu)?;
    let g = ch.grid();
    let ubar = mean_u1(ch, u);
    let mut d = vec![0.0; g.ny()];
    g.dx2_line(&ubar, &mut d);
    let adv = advective_flux(ch, big_u, u);
    let values: Vec<f64> = d.iter().zip(&adv).map(|(a, b)| nu * a - b).collect();
    let mean = g.integrate_line(&values);
    let var = g.integrate_line(&values.iter().map(|v| (v - mean).powi(2)).collect::<Vec<_>>());
    let relstd = if mean == 0.0 { f64::INFINITY } else { var.sqrt() / mean.abs() };
    Ok(FluxProfile { values, mean, relstd })
}

/// `(nu/2) (d2 mean(u1) at the top wall + at the bottom wall)`.
pub fn wall_stress_dissipation(ch: &Channel, u: &VectorField, nu: f64) -> Result<f64, DissipationError> {
    check_nu(nu)?;
    let g = ch.grid();
    let ubar = mean_u1(ch, u);
    let bottom = g.elem_deriv_at(&ubar, 0, 0);
    let top = g.elem_deriv_at(&ubar, g.n_elem() - 1, g.p());
    Ok(0.5 * nu * (top + bottom))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallLayerTerms {
    pub delta: f64,
    /// `nu` times the layer mean of `d2 mean(u1)`.
    pub diffusive: f64,
    /// Minus the layer mean of `mean(U2 u1)`.
    pub advective: f64,
    pub sum: f64,
}

/// Layer means over `[-1/2, -1/2 + delta]` of the two flux contributions.
pub fn wall_layer_decomposition(
    ch: &Channel,
    big_u: &VectorField,
    u: &VectorField,
    nu: f64,
    delta: f64,
) -> Result<WallLayerTerms, DissipationError> {
    check_nu(nu)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(DissipationError::InvalidInput(format!("layer thickness must lie in (0, 1], got {delta}")));
    }
    let g = ch.grid();
    let top = -0.5 + delta;
    let ubar = mean_u1(ch, u);
    let diffusive = nu * (g.interpolate_line(&ubar, top) - ubar[0]) / delta;
    let cum = g.antiderivative_line(&advective_flux(ch, big_u, u));
    let advective = -g.interpolate_line(&cum, top) / delta;
    Ok(WallLayerTerms {
        delta,
        diffusive,
        advective,
        sum: diffusive + advective,
    })
}

/// `nu / eps_U^{1/3}` clamped to `[2 min spacing, 1]`.
pub fn proof_layer_thickness(grid: &ChannelGrid, eps_big: f64, nu: f64) -> f64 {
    let d = if eps_big > 0.0 { nu / eps_big.cbrt() } else { 1.0 };
    d.clamp((2.0 * grid.min_spacing()).min(1.0), 1.0)
}

/// Profile equal to 1 on `[-1/2 + delta, 1/2 - delta]`, vanishing on the walls.
pub fn plateau_profile(delta: f64, x: f64) -> f64 {
    f_profile((-0.5 + delta - x) / delta) * f_profile((x - 0.5 + delta) / delta)
}

/// Element breakpoints resolving [`plateau_profile`]: `pieces` elements on each ramp.
pub fn plateau_breakpoints(delta: f64, pieces: usize) -> Vec<f64> {
    let n = pieces.max(1);
    let ramp: Vec<f64> = (0..=n).map(|s| delta * s as f64 / n as f64).collect();
    let mut br: Vec<f64> = ramp.iter().map(|d| -0.5 + d).collect();
    if delta < 0.5 {
        br.extend(ramp.iter().rev().map(|d| 0.5 - d));
    } else {
        br.extend(ramp.iter().rev().skip(1).map(|d| 0.5 - d));
    }
    br[0] = -0.5;
    let last = br.len() - 1;
    br[last] = 0.5;
    br.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    br
}

/// `<|grad Delta^{-1} d2 f|^2>` for the plateau profile `f` of width `delta`.
pub fn lemma_gradient_bound(ch: &Channel, delta: f64) -> Result<f64, DissipationError> {
    if !(delta > 0.0 && delta <= 0.25) {
        return Err(DissipationError::InvalidInput(format!("plateau width must lie in (0, 1/4], got {delta}")));
    }
    let g = ch.grid();
    let prof: Vec<f64> = g.x2().iter().map(|&x| plateau_profile(delta, x)).collect();
    let f = ScalarField::from_profile(g, &prof);
    let phi = ch.inverse_laplacian_dirichlet(&ch.dx2(&f));
    let grad = ch.gradient(&phi);
    let v = VectorField::new(grad.u1, grad.u2, BcTag::None);
    Ok(ch.inner_vec(&v, &v))
}
