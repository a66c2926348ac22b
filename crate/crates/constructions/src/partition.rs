//! Layer profiles `zeta_i` of the branching construction.
//!
//! `zeta_i` rises on `[h_{i-1}, h_i]` as `f(1 - (|x2| - h_{i-1}) / delta_{i-1})`
//! and falls on `[h_i, h_{i+1}]` as `f((|x2| - h_i) / delta_i)`; `zeta_0` has no
//! rising edge and the last profile falls over `delta_n / 2`. Neighbouring
//! edges are mirror images, so `f^2(s) + f^2(1-s) = 1` gives a partition of
//! unity in the squared sense up to `1/2 - delta_n` from the centre.

use crate::error::ConstructionError;
use crate::params::BranchingParams;
use crate::profile::f_profile;

pub fn zeta(p: &BranchingParams, i: usize, x2: f64) -> f64 {
    assert!(i <= p.n);
    let y = x2.abs();
    if i > 0 && y < p.h[i] {
        if y < p.h[i - 1] {
            return 0.0;
        }
        return f_profile(1.0 - (y - p.h[i - 1]) / p.delta[i - 1]);
    }
    let width = if i == p.n { 0.5 * p.delta[i] } else { p.delta[i] };
    f_profile((y - p.h[i]) / width)
}

/// Property measurements of a partition on a set of sample points.
#[derive(Clone, Debug, Default)]
pub struct PartitionReport {
    /// max |sum zeta_i^2 - 1| over samples with |x2| <= 1/2 - delta_n.
    pub interior_defect: f64,
    /// max of sum zeta_i^2 anywhere.
    pub max_sum: f64,
    /// max |zeta_i zeta_j| for |i - j| >= 2.
    pub far_overlap: f64,
    /// max |zeta_i| outside its allowed support.
    pub support_leak: f64,
    /// max |zeta_i(x) - zeta_i(-x)|.
    pub asymmetry: f64,
}

pub fn partition_report(p: &BranchingParams, samples: &[f64]) -> PartitionReport {
    let mut r = PartitionReport::default();
    let interior = 0.5 - p.delta_n();
    for &x in samples {
        let z: Vec<f64> = (0..=p.n).map(|i| zeta(p, i, x)).collect();
        let s: f64 = z.iter().map(|v| v * v).sum();
        r.max_sum = r.max_sum.max(s);
        if x.abs() <= interior {
            r.interior_defect = r.interior_defect.max((s - 1.0).abs());
        }
        for i in 0..=p.n {
            for j in i + 2..=p.n {
                r.far_overlap = r.far_overlap.max((z[i] * z[j]).abs());
            }
            let lo = if i == 0 { 0.0 } else { p.h[i - 1] };
            let hi = p.h[(i + 1).min(p.n + 1)];
            if x.abs() < lo || x.abs() > hi {
                r.support_leak = r.support_leak.max(z[i].abs());
            }
            r.asymmetry = r.asymmetry.max((z[i] - zeta(p, i, -x)).abs());
        }
    }
    r
}

/// Profiles on `x2_nodes`, after verifying the partition properties on the
/// nodes and on a dense uniform sample.
pub fn build_partition(p: &BranchingParams, x2_nodes: &[f64]) -> Result<Vec<Vec<f64>>, ConstructionError> {
    let dense: Vec<f64> = (0..=20_000).map(|s| -0.5 + s as f64 / 20_000.0).collect();
    for samples in [x2_nodes, &dense[..]] {
        let r = partition_report(p, samples);
        if r.interior_defect > 1e-12 {
            return Err(ConstructionError::Partition(format!("sum of squares deviates from 1 by {:.3e}", r.interior_defect)));
        }
        if r.max_sum > 1.0 + 1e-12 {
            return Err(ConstructionError::Partition(format!("sum of squares reaches {}", r.max_sum)));
        }
        if r.far_overlap > 0.0 || r.support_leak > 0.0 || r.asymmetry > 0.0 {
            return Err(ConstructionError::Partition(format!(
                "support/symmetry: overlap {:.2e}, leak {:.2e}, asymmetry {:.2e}",
                r.far_overlap, r.support_leak, r.asymmetry
            )));
        }
    }
    Ok((0..=p.n)
        .map(|i| x2_nodes.iter().map(|&x| zeta(p, i, x)).collect())
        .collect())
}
