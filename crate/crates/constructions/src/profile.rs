//! The smooth step `f` and the wall cutoff `chi` built from it.

use crate::error::ConstructionError;

/// Tanh arguments are clamped to this magnitude near the endpoints.
pub const TANH_CLAMP: f64 = 50.0;

/// `sqrt(1/2 - tanh((x - 1/2) / (x^2 (1-x)^2)) / 2)`, extended by 1 for
/// `x <= 0` and 0 for `x >= 1`.
pub fn f_profile(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let a = ((x - 0.5) / (x * x * (1.0 - x) * (1.0 - x))).clamp(-TANH_CLAMP, TANH_CLAMP);
    // 1/2 - tanh(a)/2 = 1 / (1 + e^{2a}), without the cancellation
    (1.0 / (1.0 + (2.0 * a).exp())).sqrt()
}

/// Transition offsets `0 < delta1 < delta2 < 1/4` of a wall cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CutoffSpec {
    delta1: f64,
    delta2: f64,
}

impl CutoffSpec {
    pub fn new(delta1: f64, delta2: f64) -> Result<Self, ConstructionError> {
        if !(delta1.is_finite() && delta2.is_finite() && 0.0 < delta1 && delta1 < delta2 && delta2 < 0.25) {
            return Err(ConstructionError::InvalidParameter(format!(
                "cutoff needs 0 < delta1 < delta2 < 1/4, got ({delta1}, {delta2})"
            )));
        }
        Ok(Self { delta1, delta2 })
    }

    pub fn delta1(&self) -> f64 {
        self.delta1
    }
    pub fn delta2(&self) -> f64 {
        self.delta2
    }
}

/// Cutoff equal to 1 on `[-1/2 + delta2, 1/2 - delta2]` and 0 within
/// `delta1` of either wall.
pub fn chi(x: f64, spec: CutoffSpec) -> f64 {
    let (d1, d2) = (spec.delta1, spec.delta2);
    let w = d2 - d1;
    f_profile((-0.5 + d2 - x) / w) * f_profile((x - 0.5 + d2) / w)
}
