#![allow(dead_code)]

use std::f64::consts::PI;

use chlab_constructions::*;
use chlab_core::{BcTag, Channel, ChannelGrid, ScalarField, VectorField};

pub fn roll_setup(nu: f64, frak_c: f64, nx: usize, p: usize) -> (RollParams, Channel) {
    let k = smallest_multiple_above(nu.powf(-0.5), 2.0 * PI).0;
    let params = choose_roll_params(nu, 2.0 * PI / k, frak_c).unwrap();
    let grid = ChannelGrid::new(params.l1, nx, p, roll_breakpoints(&params, &LayoutOptions::default())).unwrap();
    (params, Channel::new(grid))
}

pub fn branching_setup(nu: f64, frak_c: f64, nx: usize, p: usize) -> (BranchingParams, Channel) {
    let full = choose_branching_params(nu, 2.0 * PI, frak_c).unwrap();
    let params = choose_branching_params(nu, 2.0 * PI / full.k0, frak_c).unwrap();
    let grid = ChannelGrid::new(params.l1, nx, p, branching_breakpoints(&params, &LayoutOptions::default())).unwrap();
    (params, Channel::new(grid))
}

/// `perp_grad` of `(1/4 - x2^2)^2 sum_m c_m sin(m q x1 + phase_m) x2^j`: vanishes
/// with its normal derivative on both walls.
pub fn smooth_test_field(ch: &Channel, coeffs: &[(usize, f64, f64, i32)]) -> VectorField {
    let g = ch.grid();
    let q = 2.0 * PI / g.l1();
    let psi = ScalarField::from_fn(g, |x1, x2| {
        let w = (0.25 - x2 * x2).powi(2);
        coeffs
            .iter()
            .map(|&(m, c, ph, j)| c * w * (m as f64 * q * x1 + ph).sin() * x2.powi(j))
            .sum()
    });
    ch.perp_gradient(&psi).with_bc(BcTag::Homogeneous)
}

/// Adaptive Simpson quadrature on `[a, b]` with tolerance relative to `int |f|`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let n = 400;
    let h = (b - a) / n as f64;
    let scale: f64 = (0..=n).map(|i| f(a + i as f64 * h).abs()).sum::<f64>() * h;
    simpson_abs(f, a, b, (rel * scale).max(f64::MIN_POSITIVE))
}

fn simpson_abs(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// `f`, `f'` and `f''` of the smooth step in closed form.
pub fn f_derivs(x: f64) -> (f64, f64, f64) {
    if x <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if x >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let s = x * (1.0 - x);
    let sp = 1.0 - 2.0 * x;
    let a = -sp / (2.0 * s * s);
    if a.abs() > 100.0 {
        return (if a > 0.0 { 0.0 } else { 1.0 }, 0.0, 0.0);
    }
    let a1 = (s + sp * sp) / s.powi(3);
    let a2 = -3.0 * sp * (2.0 * s + sp * sp) / s.powi(4);
    let e = (2.0 * a).exp();
    let f = (1.0 + e).powf(-0.5);
    let f1 = -a1 * e * (1.0 + e).powf(-1.5);
    let f2 = -a2 * e * (1.0 + e).powf(-1.5) - 2.0 * a1 * a1 * e * (1.0 + e).powf(-1.5)
        + 3.0 * a1 * a1 * e * e * (1.0 + e).powf(-2.5);
    (f, f1, f2)
}
