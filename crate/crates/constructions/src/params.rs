//! Viscosity-dependent construction parameters.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::ConstructionError;

/// Default small prefactor of the test-field amplitude.
pub const DEFAULT_FRAK_C: f64 = 0.1;

/// Smallest positive multiple of `2 pi / l1` strictly above `bound`, and its index.
pub fn smallest_multiple_above(bound: f64, l1: f64) -> (f64, u64) {
    let q = 2.0 * PI / l1;
    // a hair of slack so exact multiples are not rounded below themselves
    let m = (bound / q * (1.0 + 1e-13)).floor() as u64 + 1;
    (m as f64 * q, m)
}

fn check_common(nu: f64, l1: f64, frak_c: f64) -> Result<(), ConstructionError> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(ConstructionError::InvalidParameter(format!("viscosity must be positive, got {nu}")));
    }
    if !(l1.is_finite() && l1 > 0.0) {
        return Err(ConstructionError::InvalidParameter(format!("L1 must be positive, got {l1}")));
    }
    if !(frak_c.is_finite() && frak_c > 0.0) {
        return Err(ConstructionError::InvalidParameter(format!("frak_c must be positive, got {frak_c}")));
    }
    Ok(())
}

/// Convection-roll parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RollParams {
    /// Roll amplitude.
    pub amp: f64,
    /// Test-field amplitude `frak_c * nu^{1/6}`.
    pub test_amp: f64,
    pub frak_c: f64,
    pub k: f64,
    /// `k = k_index * 2 pi / l1`.
    pub k_index: u64,
    pub delta: f64,
    pub l1: f64,
}

impl RollParams {
    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: &str| Err(ConstructionError::InvalidParameter(m.to_string()));
        if !(self.delta > 0.0 && self.delta < 0.25) {
            return bad("roll layer thickness must lie in (0, 1/4)");
        }
        if !(self.amp > 0.0 && self.test_amp > 0.0) {
            return bad("roll amplitudes must be positive");
        }
        let q = 2.0 * PI / self.l1;
        if self.k_index == 0 || (self.k - self.k_index as f64 * q).abs() > 1e-9 * self.k {
            return bad("k must be a positive multiple of 2 pi / L1");
        }
        Ok(())
    }
}

/// `A = nu^{1/6}`, `a = c nu^{1/6}`, `delta = nu^{2/3}`, `k` the smallest
/// admissible wavenumber above `nu^{-1/2}`. Requires `nu < 1/8`.
pub fn choose_roll_params(nu: f64, l1: f64, frak_c: f64) -> Result<RollParams, ConstructionError> {
    check_common(nu, l1, frak_c)?;
    if nu >= 0.125 {
        return Err(ConstructionError::InvalidParameter(format!("rolls need nu < 1/8, got {nu}")));
    }
    let s = nu.powf(1.0 / 6.0);
    let (k, k_index) = smallest_multiple_above(nu.powf(-0.5), l1);
    let p = RollParams {
        amp: s,
        test_amp: frak_c * s,
        frak_c,
        k,
        k_index,
        delta: nu.powf(2.0 / 3.0),
        l1,
    };
    p.validate()?;
    Ok(p)
}

/// Branching-flow parameters with derived layer data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchingParams {
    pub amp: f64,
    pub test_amp: f64,
    pub frak_c: f64,
    pub k0: f64,
    pub k0_index: u64,
    pub n: usize,
    pub delta0: f64,
    /// `delta_i = 2^{-2i} delta0`, `i = 0..=n`.
    pub delta: Vec<f64>,
    /// Layer starts `h_0 = 0, ..., h_{n+1} = 1/2`.
    pub h: Vec<f64>,
    /// `k_i = 2^i k0`.
    pub k: Vec<f64>,
    pub l1: f64,
}

impl BranchingParams {
    /// Derived arrays for a given depth `n` and base wavenumber.
    pub fn from_parts(
        amp: f64,
        test_amp: f64,
        frak_c: f64,
        k0_index: u64,
        n: usize,
        l1: f64,
    ) -> Result<Self, ConstructionError> {
        let delta0 = 0.375 / (1.0 - 0.25f64.powi(n as i32 + 1));
        let delta: Vec<f64> = (0..=n).map(|i| delta0 * 0.25f64.powi(i as i32)).collect();
        let mut h = vec![0.0; n + 2];
        for i in 1..=n + 1 {
            h[i] = h[i - 1] + delta[i - 1];
        }
        h[n + 1] = 0.5;
        let k0 = k0_index as f64 * 2.0 * PI / l1;
        let k = (0..=n).map(|i| k0 * 2f64.powi(i as i32)).collect();
        let p = Self {
            amp,
            test_amp,
            frak_c,
            k0,
            k0_index,
            n,
            delta0,
            delta,
            h,
            k,
            l1,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn delta_n(&self) -> f64 {
        self.delta[self.n]
    }

    pub fn k_n(&self) -> f64 {
        self.k[self.n]
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |m: String| Err(ConstructionError::InvalidParameter(m));
        if !(self.amp > 0.0 && self.test_amp > 0.0) {
            return bad("branching amplitudes must be positive".into());
        }
        let total: f64 = self.delta.iter().sum();
        if (total - 0.5).abs() > 1e-12 {
            return bad(format!("layer thicknesses sum to {total}, not 1/2"));
        }
        if !(0.375 <= self.delta0 && self.delta0 < 0.5 + 1e-15) {
            return bad(format!("delta0 = {} outside [3/8, 1/2]", self.delta0));
        }
        if self.delta_n() * self.k_n() <= 1.0 {
            return bad(format!(
                "finest layer too thin for its wavenumber: delta_n = {:.4e}, 1/k_n = {:.4e}",
                self.delta_n(),
                1.0 / self.k_n()
            ));
        }
        Ok(())
    }
}

/// `A = 1/log2(1/nu)`, `a = c/log2(1/nu)`, `k0` the smallest admissible
/// wavenumber above `1/(nu^{1/2} log2(1/nu)^{1/2})`,
/// `n = floor(log2(1/(nu log2(1/nu)^2)) / 2)`. Requires `nu < 1/500`.
pub fn choose_branching_params(nu: f64, l1: f64, frak_c: f64) -> Result<BranchingParams, ConstructionError> {
    check_common(nu, l1, frak_c)?;
    if nu >= 1.0 / 500.0 {
        return Err(ConstructionError::InvalidParameter(format!("branching flows need nu < 1/500, got {nu}")));
    }
    let lg = (1.0 / nu).log2();
    let (_, k0_index) = smallest_multiple_above(1.0 / (nu.sqrt() * lg.sqrt()), l1);
    let n = (0.5 * (1.0 / (nu * lg * lg)).log2()).floor().max(0.0) as usize;
    BranchingParams::from_parts(1.0 / lg, frak_c / lg, frak_c, k0_index, n, l1)
}
