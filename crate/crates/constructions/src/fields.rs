//! Advecting fields and test fields on a channel.

use std::f64::consts::PI;

use chlab_core::{BcTag, Channel, ChannelGrid, ScalarField, VectorField};

use crate::error::ConstructionError;
use crate::params::{BranchingParams, RollParams};
use crate::partition::zeta;
use crate::profile::{chi, CutoffSpec};

/// Checks that `k` is a multiple of `2 pi / L1` below the grid's Nyquist mode.
pub fn check_wavenumber(grid: &ChannelGrid, k: f64) -> Result<usize, ConstructionError> {
    let m = k * grid.l1() / (2.0 * PI);
    let mi = m.round();
    if (m - mi).abs() > 1e-8 * m.max(1.0) || mi < 1.0 {
        return Err(ConstructionError::NotPeriodic { k, l1: grid.l1() });
    }
    let mi = mi as usize;
    if mi >= grid.nx() / 2 {
        return Err(ConstructionError::Resolution {
            k,
            required_nx: 2 * mi + 2,
            l1: grid.l1(),
        });
    }
    Ok(mi)
}

/// `-1/2 + chi(x2; delta/6, delta/5)/2` below the midplane, mirrored above.
pub fn mean_flow_profile(delta: f64, x2: f64) -> Result<f64, ConstructionError> {
    let spec = CutoffSpec::new(delta / 6.0, delta / 5.0)?;
    let c = chi(x2, spec);
    Ok(if x2 < 0.0 { -0.5 + 0.5 * c } else { 0.5 - 0.5 * c })
}

pub fn build_mean_flow(delta: f64, ch: &Channel) -> Result<VectorField, ConstructionError> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(ConstructionError::InvalidParameter(format!("mean-flow thickness must lie in (0, 1/4), got {delta}")));
    }
    let g = ch.grid();
    let prof = g
        .x2()
        .iter()
        .map(|&y| mean_flow_profile(delta, y))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField::new(
        ScalarField::from_profile(g, &prof),
        ScalarField::zeros(g),
        BcTag::Couette,
    ))
}

/// `-amp * cut(x2) * sin(k (x1 + x2)) / k` for a sum of layers.
fn inclined_streamfunction(grid: &ChannelGrid, layers: &[(f64, f64, Vec<f64>)]) -> ScalarField {
    let mut psi = ScalarField::zeros(grid);
    let x2 = grid.x2();
    for (amp, k, cut) in layers {
        for i in 0..grid.nx() {
            let x1 = grid.x1(i);
            for (j, v) in psi.row_mut(i).iter_mut().enumerate() {
                if cut[j] != 0.0 {
                    *v -= amp * cut[j] * (k * (x1 + x2[j])).sin() / k;
                }
            }
        }
    }
    psi
}

fn roll_cut(grid: &ChannelGrid, d1: f64, d2: f64) -> Result<Vec<f64>, ConstructionError> {
    let spec = CutoffSpec::new(d1, d2)?;
    Ok(grid.x2().iter().map(|&y| chi(y, spec)).collect())
}

/// Streamfunction of the rolls, `Xi = chi(.; delta/2, delta)`.
pub fn roll_streamfunction(p: &RollParams, ch: &Channel) -> Result<ScalarField, ConstructionError> {
    p.validate()?;
    check_wavenumber(ch.grid(), p.k)?;
    let cut = roll_cut(ch.grid(), p.delta / 2.0, p.delta)?;
    Ok(inclined_streamfunction(ch.grid(), &[(p.amp, p.k, cut)]))
}

/// The roll part `U^c = perp_grad Psi^c` alone.
pub fn build_roll_part(p: &RollParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    let psi = roll_streamfunction(p, ch)?;
    Ok(ch.perp_gradient(&psi).with_bc(BcTag::Homogeneous))
}

/// `U = U^m + U^c`.
pub fn build_rolls(p: &RollParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    let mut u = build_mean_flow(p.delta, ch)?;
    u.axpy(1.0, &build_roll_part(p, ch)?);
    Ok(u.with_bc(BcTag::Couette))
}

/// Test field with amplitude `test_amp` and cutoff `chi(.; delta/4, delta/3)`.
pub fn build_roll_test(p: &RollParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    p.validate()?;
    check_wavenumber(ch.grid(), p.k)?;
    let cut = roll_cut(ch.grid(), p.delta / 4.0, p.delta / 3.0)?;
    let psi = inclined_streamfunction(ch.grid(), &[(p.test_amp, p.k, cut)]);
    Ok(ch.perp_gradient(&psi).with_bc(BcTag::Homogeneous))
}

fn branching_streamfunction(p: &BranchingParams, amp: f64, ch: &Channel) -> Result<ScalarField, ConstructionError> {
    p.validate()?;
    for &k in &p.k {
        check_wavenumber(ch.grid(), k)?;
    }
    let layers: Vec<(f64, f64, Vec<f64>)> = (0..=p.n)
        .map(|i| (amp, p.k[i], ch.grid().x2().iter().map(|&y| zeta(p, i, y)).collect()))
        .collect();
    Ok(inclined_streamfunction(ch.grid(), &layers))
}

/// The branching part `U^b` alone.
pub fn build_branching_part(p: &BranchingParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    let psi = branching_streamfunction(p, p.amp, ch)?;
    Ok(ch.perp_gradient(&psi).with_bc(BcTag::Homogeneous))
}

/// `U = U^m + U^b` with the mean flow built on `delta_n`.
pub fn build_branching(p: &BranchingParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    let mut u = build_mean_flow(p.delta_n(), ch)?;
    u.axpy(1.0, &build_branching_part(p, ch)?);
    Ok(u.with_bc(BcTag::Couette))
}

pub fn build_branching_test(p: &BranchingParams, ch: &Channel) -> Result<VectorField, ConstructionError> {
    let psi = branching_streamfunction(p, p.test_amp, ch)?;
    Ok(ch.perp_gradient(&psi).with_bc(BcTag::Homogeneous))
}
