//! Grid choice for a construction, and building its fields on that grid.

use std::f64::consts::PI;

use chlab_constructions::{
    branching_breakpoints, build_branching, build_branching_test, build_rolls, build_roll_test,
    choose_branching_params, choose_roll_params, roll_breakpoints, uniform_breakpoints, BranchingParams,
    LayoutOptions, RollParams,
};
use chlab_core::{Channel, ChannelGrid, VectorField};
use serde::{Deserialize, Serialize};

use crate::config::{FlowFamily, ResolutionPolicy};
use crate::error::SweepError;

/// Parameters of one construction, chosen on the full period `L1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FlowParams {
    Couette,
    Rolls(RollParams),
    Branching(BranchingParams),
}

impl FlowParams {
    pub fn choose(flow: FlowFamily, nu: f64, l1: f64, frak_c: f64) -> Result<Self, SweepError> {
        Ok(match flow {
            FlowFamily::Couette => FlowParams::Couette,
            FlowFamily::Rolls => FlowParams::Rolls(choose_roll_params(nu, l1, frak_c)?),
            FlowFamily::Branching => FlowParams::Branching(choose_branching_params(nu, l1, frak_c)?),
        })
    }

    /// Smallest wavenumber, whose period tiles `L1`.
    pub fn base_wavenumber(&self) -> Option<f64> {
        match self {
            FlowParams::Couette => None,
            FlowParams::Rolls(p) => Some(p.k),
            FlowParams::Branching(p) => Some(p.k0),
        }
    }

    pub fn max_wavenumber(&self) -> Option<f64> {
        match self {
            FlowParams::Couette => None,
            FlowParams::Rolls(p) => Some(p.k),
            FlowParams::Branching(p) => Some(p.k_n()),
        }
    }

    /// `a A / 2`, the floor of term I for rolls.
    pub fn term_i_floor(&self) -> Option<f64> {
        match self {
            FlowParams::Rolls(p) => Some(0.5 * p.test_amp * p.amp),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    /// Period actually computed on.
    pub l1: f64,
    pub nx: usize,
    pub p: usize,
    pub ny: usize,
    pub layout: LayoutOptions,
    pub breaks: Vec<f64>,
    /// Highest Fourier index of the construction on `l1`.
    pub max_mode: usize,
}

/// Next integer `>= n` of the form `2^a 3^b 5^c`.
pub fn next_efficient_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for f in [2, 3, 5] {
            while r % f == 0 {
                r /= f;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

fn with_period(params: &FlowParams, l1: f64) -> Result<FlowParams, SweepError> {
    Ok(match params {
        FlowParams::Couette => FlowParams::Couette,
        FlowParams::Rolls(p) => FlowParams::Rolls(RollParams {
            k_index: (p.k * l1 / (2.0 * PI)).round() as u64,
            l1,
            ..p.clone()
        }),
        FlowParams::Branching(p) => FlowParams::Branching(BranchingParams::from_parts(
            p.amp,
            p.test_amp,
            p.frak_c,
            (p.k0 * l1 / (2.0 * PI)).round() as u64,
            p.n,
            l1,
        )?),
    })
}

fn breakpoints(params: &FlowParams, layout: &LayoutOptions) -> Vec<f64> {
    match params {
        FlowParams::Couette => uniform_breakpoints(4),
        FlowParams::Rolls(p) => roll_breakpoints(p, layout),
        FlowParams::Branching(p) => branching_breakpoints(p, layout),
    }
}

/// Nx from points per wavelength of the finest mode, Ny from nodes per
/// transition band and element length per local wavelength. Errors with
/// [`SweepError::Infeasible`] when a cap is exceeded.
pub fn resolution_policy(params: &FlowParams, l1: f64, policy: &ResolutionPolicy) -> Result<Resolution, SweepError> {
    let l1c = match (policy.sublattice, params.base_wavenumber()) {
        (true, Some(k)) => 2.0 * PI / k,
        _ => l1,
    };
    let local = with_period(params, l1c)?;
    let max_mode = local
        .max_wavenumber()
        .map(|k| (k * l1c / (2.0 * PI)).round() as usize)
        .unwrap_or(0);
    let nx = match policy.nx {
        Some(n) => n,
        None => next_efficient_size(((policy.rho_x * max_mode as f64).ceil() as usize).max(policy.nx_min)),
    };
    if nx > policy.nx_max {
        return Err(SweepError::Infeasible(format!("Nx = {nx} > Nx_max = {}", policy.nx_max)));
    }
    if max_mode > 0 && max_mode >= nx / 2 {
        return Err(SweepError::Infeasible(format!("Nx = {nx} cannot carry Fourier mode {max_mode}")));
    }
    let layout = LayoutOptions {
        band_split: ((policy.rho_y / policy.p as f64).ceil() as usize).max(1),
        elem_wavelengths: policy.elem_wavelengths,
    };
    let breaks = breakpoints(&local, &layout);
    let n_elem = breaks.len() - 1;
    let mut p = policy.p;
    if let Some(ny) = policy.ny {
        p = p.max((ny.saturating_sub(1)).div_ceil(n_elem));
    }
    let ny = n_elem * p + 1;
    if ny > policy.ny_max {
        return Err(SweepError::Infeasible(format!("Ny = {ny} > Ny_max = {}", policy.ny_max)));
    }
    Ok(Resolution {
        l1: l1c,
        nx,
        p,
        ny,
        layout,
        breaks,
        max_mode,
    })
}

/// A construction built on its grid.
pub struct FlowSetup {
    /// Parameters on the full period.
    pub params: FlowParams,
    /// Parameters on the computational period.
    pub local: FlowParams,
    pub resolution: Resolution,
    pub channel: Channel,
    pub u: VectorField,
    pub v_test: VectorField,
}

impl FlowSetup {
    pub fn build(params: FlowParams, l1: f64, policy: &ResolutionPolicy) -> Result<Self, SweepError> {
        let resolution = resolution_policy(&params, l1, policy)?;
        let local = with_period(&params, resolution.l1)?;
        let grid = ChannelGrid::new(resolution.l1, resolution.nx, resolution.p, resolution.breaks.clone())?;
        let channel = Channel::new(grid);
        let (u, v_test) = fields(&local, &channel)?;
        Ok(Self {
            params,
            local,
            resolution,
            channel,
            u,
            v_test,
        })
    }

    /// The test field for another `frak_c`, on the same grid.
    pub fn test_field(&self, frak_c: f64) -> Result<VectorField, SweepError> {
        let local = rescale_test(&self.local, frak_c);
        Ok(fields(&local, &self.channel)?.1)
    }
}

/// Same construction with test amplitude for `frak_c`.
pub fn rescale_test(params: &FlowParams, frak_c: f64) -> FlowParams {
    match params {
        FlowParams::Couette => FlowParams::Couette,
        FlowParams::Rolls(p) => FlowParams::Rolls(RollParams {
            test_amp: frak_c * p.amp,
            frak_c,
            ..p.clone()
        }),
        FlowParams::Branching(p) => FlowParams::Branching(BranchingParams {
            test_amp: frak_c * p.amp,
            frak_c,
            ..p.clone()
        }),
    }
}

fn fields(params: &FlowParams, ch: &Channel) -> Result<(VectorField, VectorField), SweepError> {
    Ok(match params {
        FlowParams::Couette => (VectorField::couette(ch.grid()), VectorField::zeros(ch.grid())),
        FlowParams::Rolls(p) => (build_rolls(p, ch)?, build_roll_test(p, ch)?),
        FlowParams::Branching(p) => (build_branching(p, ch)?, build_branching_test(p, ch)?),
    })
}
