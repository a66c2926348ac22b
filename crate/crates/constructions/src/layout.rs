//! x2 element breakpoints aligned with every transition band of a construction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::params::{BranchingParams, RollParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutOptions {
    /// Minimum number of elements across each transition band.
    pub band_split: usize,
    /// Maximum element length in units of the local roll wavelength.
    pub elem_wavelengths: f64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        Self {
            band_split: 2,
            elem_wavelengths: 0.5,
        }
    }
}

impl LayoutOptions {
    /// Twice as many elements everywhere.
    pub fn refined(&self) -> Self {
        Self {
            band_split: 2 * self.band_split,
            elem_wavelengths: 0.5 * self.elem_wavelengths,
        }
    }
}

// (start, end, max length, min pieces) in distance from the bottom wall
type Segment = (f64, f64, f64, usize);

fn mirror(segments: &[Segment]) -> Vec<f64> {
    let mut half = vec![0.0];
    for &(a, b, hmax, min_pieces) in segments {
        let pieces = (((b - a) / hmax).ceil() as usize).max(min_pieces).max(1);
        for s in 1..=pieces {
            half.push(a + (b - a) * s as f64 / pieces as f64);
        }
    }
    let last = half.len() - 1;
    half[last] = 0.5;
    let mut br: Vec<f64> = half.iter().map(|d| -0.5 + d).collect();
    br.extend(half.iter().rev().skip(1).map(|d| 0.5 - d));
    br[0] = -0.5;
    let n = br.len();
    br[n - 1] = 0.5;
    br[last] = 0.0;
    br
}

pub fn roll_breakpoints(p: &RollParams, opts: &LayoutOptions) -> Vec<f64> {
    let d = p.delta;
    let h = opts.elem_wavelengths * 2.0 * PI / p.k;
    let b = opts.band_split;
    mirror(&[
        (0.0, d / 6.0, h, 1),
        (d / 6.0, d / 5.0, h, b),
        (d / 5.0, d / 4.0, h, 1),
        (d / 4.0, d / 3.0, h, b),
        (d / 3.0, d / 2.0, h, 1),
        (d / 2.0, d, h, b),
        (d, 0.5, h, 1),
    ])
}

pub fn branching_breakpoints(p: &BranchingParams, opts: &LayoutOptions) -> Vec<f64> {
    let dn = p.delta_n();
    let b = opts.band_split;
    let wl = |k: f64| opts.elem_wavelengths * 2.0 * PI / k;
    let hn = wl(p.k_n());
    let mut segs = vec![
        (0.0, dn / 6.0, hn, 1),
        (dn / 6.0, dn / 5.0, hn, b),
        (dn / 5.0, dn / 2.0, hn, 1),
        (dn / 2.0, dn, hn, b),
    ];
    // layer i spans [h_i, h_{i+1}] from the centre
    for i in (0..p.n).rev() {
        segs.push((0.5 - p.h[i + 1], 0.5 - p.h[i], wl(p.k[i + 1]), b));
    }
    mirror(&segs)
}

/// Uniform elements for flows without internal structure.
pub fn uniform_breakpoints(n_elem: usize) -> Vec<f64> {
    let n = n_elem.max(1);
    let mut br: Vec<f64> = (0..=n).map(|e| -0.5 + e as f64 / n as f64).collect();
    br[n] = 0.5;
    br
}
