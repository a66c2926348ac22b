//! The variational functional `F = I + II + III`.

use chlab_core::{Channel, TensorField, VectorField};
use serde::{Deserialize, Serialize};

use crate::error::{check_nu, DissipationError};
use crate::ops::{relative_divergence, relative_wall_defect, stokes_velocity, Advector};

/// Admissibility tolerances for test fields, relative to the field scale.
pub const WALL_TOL: f64 = 1e-9;
pub const DIV_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionalBreakdown {
    /// `-2 <U2 v1>`.
    pub term_i: f64,
    /// `-nu <|grad v|^2>`.
    pub term_ii: f64,
    /// `-(1/nu) <|grad Delta^{-1} P (U . grad v)|^2>`.
    pub term_iii: f64,
    pub total: f64,
}

impl FunctionalBreakdown {
    fn new(term_i: f64, term_ii: f64, term_iii: f64) -> Self {
        Self {
            term_i,
            term_ii,
            term_iii,
            total: term_i + term_ii + term_iii,
        }
    }
}

/// Rejects test fields that do not vanish on the walls or are not divergence-free.
pub fn check_admissible(ch: &Channel, v: &VectorField) -> Result<(), DissipationError> {
    v.u1.check_grid(ch.grid())?;
    v.u2.check_grid(ch.grid())?;
    v.check_finite()?;
    let wall = relative_wall_defect(v);
    if wall > WALL_TOL {
        return Err(DissipationError::Inadmissible(format!("relative wall value {wall:.3e}")));
    }
    let div = relative_divergence(ch, v);
    if div > DIV_TOL {
        return Err(DissipationError::Inadmissible(format!("relative divergence {div:.3e}")));
    }
    Ok(())
}

/// The two gradient images whose squared norms make up `-II - III`.
pub(crate) struct Image {
    pub visc: TensorField,
    pub adv: TensorField,
}

impl Image {
    pub fn of(adv: &Advector<'_>, v: &VectorField, nu: f64) -> Self {
        let ch = adv.channel();
        let mut visc = ch.velocity_gradient(v);
        let mut a = ch.grad_inv_lap_project(&adv.apply(v));
        let (s, t) = (nu.sqrt(), 1.0 / nu.sqrt());
        for c in [&mut visc.g11, &mut visc.g12, &mut visc.g21, &mut visc.g22] {
            c.scale(s);
        }
        for c in [&mut a.g11, &mut a.g12, &mut a.g21, &mut a.g22] {
            c.scale(t);
        }
        Self { visc, adv: a }
    }

    pub fn dot(&self, ch: &Channel, other: &Self) -> f64 {
        ch.inner_tensor(&self.visc, &other.visc) + ch.inner_tensor(&self.adv, &other.adv)
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        let dst = [
            &mut self.visc.g11,
            &mut self.visc.g12,
            &mut self.visc.g21,
            &mut self.visc.g22,
            &mut self.adv.g11,
            &mut self.adv.g12,
            &mut self.adv.g21,
            &mut self.adv.g22,
        ];
        let src = [
            &x.visc.g11,
            &x.visc.g12,
            &x.visc.g21,
            &x.visc.g22,
            &x.adv.g11,
            &x.adv.g12,
            &x.adv.g21,
            &x.adv.g22,
        ];
        for (d, s) in dst.into_iter().zip(src) {
            d.axpy(a, s);
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in [
            &mut self.visc.g11,
            &mut self.visc.g12,
            &mut self.visc.g21,
            &mut self.visc.g22,
            &mut self.adv.g11,
            &mut self.adv.g12,
            &mut self.adv.g21,
            &mut self.adv.g22,
        ] {
            c.scale(a);
        }
    }
}

pub(crate) fn breakdown_with(adv: &Advector<'_>, v: &VectorField, nu: f64) -> FunctionalBreakdown {
    let ch = adv.channel();
    let term_i = 2.0 * adv.linear_term(v);
    let g = ch.velocity_gradient(v);
    let term_ii = -nu * ch.inner_tensor(&g, &g);
    let h = ch.grad_inv_lap_project(&adv.apply(v));
    let term_iii = -ch.inner_tensor(&h, &h) / nu;
    FunctionalBreakdown::new(term_i, term_ii, term_iii)
}

/// `F(v)` term by term, with term III computed through the Leray projector
/// and the component-wise Dirichlet inverse Laplacian.
pub fn functional_terms(
    ch: &Channel,
    u: &VectorField,
    v_tilde: &VectorField,
    nu: f64,
) -> Result<FunctionalBreakdown, DissipationError> {
    check_nu(nu)?;
    check_admissible(ch, v_tilde)?;
    let adv = Advector::new(ch, u)?;
    Ok(breakdown_with(&adv, v_tilde, nu))
}

/// `F(v)` with term III replaced by `-nu <|grad vbar|^2>`, where `vbar` is the
/// Stokes response to `U . grad v`.
pub fn functional_terms_stokes(
    ch: &Channel,
    u: &VectorField,
    v_tilde: &VectorField,
    nu: f64,
) -> Result<FunctionalBreakdown, DissipationError> {
    check_nu(nu)?;
    check_admissible(ch, v_tilde)?;
    let adv = Advector::new(ch, u)?;
    let term_i = 2.0 * adv.linear_term(v_tilde);
    let g = ch.velocity_gradient(v_tilde);
    let term_ii = -nu * ch.inner_tensor(&g, &g);
    let vbar = stokes_velocity(ch, &adv.apply(v_tilde), nu);
    let gb = ch.velocity_gradient(&vbar);
    let term_iii = -nu * ch.inner_tensor(&gb, &gb);
    Ok(FunctionalBreakdown::new(term_i, term_ii, term_iii))
}
