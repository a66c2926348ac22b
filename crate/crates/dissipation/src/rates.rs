//! Dissipation rates, the upper bound and the log-law reference.

use chlab_core::{Channel, VectorField};
use serde::{Deserialize, Serialize};

use crate::error::{check_nu, DissipationError};

/// Log-law prefactor `kappa^2 / 4` with `kappa = 0.41`.
pub const LOG_LAW_PREFACTOR: f64 = 0.042;

/// `nu <|grad V|^2>`.
pub fn dissipation_rate(ch: &Channel, v: &VectorField, nu: f64) -> Result<f64, DissipationError> {
    check_nu(nu)?;
    let g = ch.velocity_gradient(v);
    Ok(nu * ch.inner_tensor(&g, &g))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpperBoundCheck {
    pub pass: bool,
    /// `4 eps_U^{1/3}`.
    pub bound: f64,
    /// `bound - eps_u`; negative when violated.
    pub margin: f64,
}

/// `eps_u <= 4 eps_U^{1/3} (1 + rel_tol)`.
pub fn upper_bound_check(eps_big: f64, eps_u: f64, rel_tol: f64) -> Result<UpperBoundCheck, DissipationError> {
    if !(eps_big >= 0.0 && eps_u >= 0.0) {
        return Err(DissipationError::InvalidInput(format!(
            "dissipation rates must be non-negative, got eps_U = {eps_big}, eps_u = {eps_u}"
        )));
    }
    let bound = 4.0 * eps_big.cbrt();
    Ok(UpperBoundCheck {
        pass: eps_u <= bound * (1.0 + rel_tol),
        bound,
        margin: bound - eps_u,
    })
}

/// `eps (ln 1/nu)^2 / 0.042`.
pub fn log_law_comparison(eps: f64, nu: f64) -> Result<f64, DissipationError> {
    if !(nu > 0.0 && nu < 1.0) {
        return Err(DissipationError::InvalidInput(format!("log-law comparison needs 0 < nu < 1, got {nu}")));
    }
    Ok(eps * (1.0 / nu).ln().powi(2) / LOG_LAW_PREFACTOR)
}
