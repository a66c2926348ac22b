use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};

use num_complex::Complex64;

use crate::cheb::RefElement;
use crate::error::CoreError;

/// Values the line operators act on: reals and Fourier coefficients.
pub trait Scalar:
    Copy
    + Default
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
{
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Discretization of `T_{L1} x [-1/2, 1/2]`.
///
/// x1 is uniform with `nx` points. x2 is split into elements at `breaks`;
/// each element carries `p + 1` Chebyshev–Gauss–Lobatto nodes and
/// neighbouring elements share their interface node, so `ny = E p + 1`.
#[derive(Clone, Debug)]
pub struct ChannelGrid {
    l1: f64,
    nx: usize,
    breaks: Vec<f64>,
    x2: Vec<f64>,
    weights: Vec<f64>,
    elem: RefElement,
}

impl ChannelGrid {
    pub fn new(l1: f64, nx: usize, p: usize, breaks: Vec<f64>) -> Result<Self, CoreError> {
        if !(l1.is_finite() && l1 > 0.0) {
            return Err(CoreError::InvalidGrid(format!("L1 must be positive, got {l1}")));
        }
        if nx < 4 || nx % 2 != 0 {
            return Err(CoreError::InvalidGrid(format!("Nx must be even and >= 4, got {nx}")));
        }
        if p < 2 {
            return Err(CoreError::InvalidGrid(format!("element degree must be >= 2, got {p}")));
        }
        if breaks.len() < 2 {
            return Err(CoreError::InvalidGrid("need at least one element".into()));
        }
        if breaks[0] != -0.5 || *breaks.last().unwrap() != 0.5 {
            return Err(CoreError::InvalidGrid("breakpoints must span [-1/2, 1/2]".into()));
        }
        if breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CoreError::InvalidGrid("breakpoints must be strictly increasing".into()));
        }
        let elem = RefElement::new(p);
        let ne = breaks.len() - 1;
        let ny = ne * p + 1;
        if ny < 5 {
            return Err(CoreError::InvalidGrid(format!("Ny must be >= 5, got {ny}")));
        }
        let mut x2 = vec![0.0; ny];
        let mut weights = vec![0.0; ny];
        for e in 0..ne {
            let (a, b) = (breaks[e], breaks[e + 1]);
            for j in 0..=p {
                let g = e * p + j;
                if j == 0 {
                    x2[g] = a;
                } else if j == p {
                    x2[g] = b;
                } else {
                    x2[g] = a + (b - a) * (elem.nodes[j] + 1.0) / 2.0;
                }
                // the channel has unit height, so these also sum to one
                weights[g] += elem.weights[j] * (b - a) / 2.0;
            }
        }
        if x2.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CoreError::InvalidGrid("elements too thin for distinct nodes".into()));
        }
        Ok(Self {
            l1,
            nx,
            breaks,
            x2,
            weights,
            elem,
        })
    }

    /// Equal-width elements.
    pub fn uniform(l1: f64, nx: usize, p: usize, n_elem: usize) -> Result<Self, CoreError> {
        let n_elem = n_elem.max(1);
        let mut breaks: Vec<f64> = (0..=n_elem).map(|e| -0.5 + e as f64 / n_elem as f64).collect();
        breaks[n_elem] = 0.5;
        Self::new(l1, nx, p, breaks)
    }

    /// A single cosine-clustered Chebyshev grid with `ny` nodes.
    pub fn chebyshev(l1: f64, nx: usize, ny: usize) -> Result<Self, CoreError> {
        Self::new(l1, nx, ny.saturating_sub(1), vec![-0.5, 0.5])
    }

    /// Same x2 layout with a different number of x1 points.
    pub fn with_nx(&self, nx: usize) -> Result<Self, CoreError> {
        Self::new(self.l1, nx, self.p(), self.breaks.clone())
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.x2.len()
    }
    pub fn p(&self) -> usize {
        self.elem.p
    }
    pub fn n_elem(&self) -> usize {
        self.breaks.len() - 1
    }
    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }
    pub fn x2(&self) -> &[f64] {
        &self.x2
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn reference(&self) -> &RefElement {
        &self.elem
    }
    pub fn x1(&self, i: usize) -> f64 {
        self.l1 * i as f64 / self.nx as f64
    }
    pub fn x1_nodes(&self) -> Vec<f64> {
        (0..self.nx).map(|i| self.x1(i)).collect()
    }
    /// Number of stored Fourier modes `0..=nx/2`.
    pub fn n_modes(&self) -> usize {
        self.nx / 2 + 1
    }
    pub fn wavenumber(&self, m: usize) -> f64 {
        2.0 * PI * m as f64 / self.l1
    }
    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.nx / 2
    }
    /// `2 / (b - a)` for element `e`.
    pub fn elem_scale(&self, e: usize) -> f64 {
        2.0 / (self.breaks[e + 1] - self.breaks[e])
    }
    pub fn min_spacing(&self) -> f64 {
        self.x2
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Element-wise spectral derivative along x2; interface nodes take the
    /// mean of the two one-sided values.
    pub fn dx2_line<T: Scalar>(&self, f: &[T], out: &mut [T]) {
        let p = self.p();
        let n = p + 1;
        debug_assert_eq!(f.len(), self.ny());
        for o in out.iter_mut() {
            *o = T::default();
        }
        for e in 0..self.n_elem() {
            let s = self.elem_scale(e);
            let base = e * p;
            let fe = &f[base..base + n];
            for i in 0..n {
                let row = &self.elem.diff[i * n..(i + 1) * n];
                let mut acc = T::default();
                for (d, &v) in row.iter().zip(fe) {
                    acc += v * *d;
                }
                out[base + i] += acc * s;
            }
        }
        for e in 1..self.n_elem() {
            let j = e * p;
            out[j] = out[j] * 0.5;
        }
    }

    /// Value of the derivative at `local` node of element `e`, one-sided.
    pub fn elem_deriv_at<T: Scalar>(&self, f: &[T], e: usize, local: usize) -> T {
        let p = self.p();
        let n = p + 1;
        let row = &self.elem.diff[local * n..(local + 1) * n];
        let mut acc = T::default();
        for (d, &v) in row.iter().zip(&f[e * p..e * p + n]) {
            acc += v * *d;
        }
        acc * self.elem_scale(e)
    }

    /// Quadrature of a profile over `[-1/2, 1/2]`.
    pub fn integrate_line(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    /// Value at `x` of the element-wise polynomial interpolant of a profile.
    pub fn interpolate_line(&self, f: &[f64], x: f64) -> f64 {
        let x = x.clamp(-0.5, 0.5);
        let e = self.breaks[1..].partition_point(|&b| b < x).min(self.n_elem() - 1);
        let p = self.p();
        let (a, b) = (self.breaks[e], self.breaks[e + 1]);
        let t = 2.0 * (x - a) / (b - a) - 1.0;
        let fe = &f[e * p..e * p + p + 1];
        let (mut num, mut den) = (0.0, 0.0);
        for (j, (&xj, &fj)) in self.elem.nodes.iter().zip(fe).enumerate() {
            if t == xj {
                return fj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == p {
                w *= 0.5;
            }
            let c = w / (t - xj);
            num += c * fj;
            den += c;
        }
        num / den
    }

    /// Cumulative integral from the bottom wall, spectrally accurate per element.
    pub fn antiderivative_line(&self, g: &[f64]) -> Vec<f64> {
        let p = self.p();
        let n = p + 1;
        let ny = self.ny();
        let mut out = vec![0.0; ny];
        let integ = self.elem_integration_matrix();
        for e in 0..self.n_elem() {
            let h = 1.0 / self.elem_scale(e);
            let base = e * p;
            let start = out[base];
            for i in 1..n {
                let mut acc = 0.0;
                for j in 0..n {
                    acc += integ[i * n + j] * g[base + j];
                }
                out[base + i] = start + acc * h;
            }
        }
        out
    }

    // Row i integrates the interpolant from -1 to x_i (reference coordinates).
    fn elem_integration_matrix(&self) -> Vec<f64> {
        let p = self.p();
        let n = p + 1;
        let x = &self.elem.nodes;
        // Chebyshev values T_k(x_j), interpolation via discrete cosine sums
        let t = |k: usize, xv: f64| -> f64 { (k as f64 * xv.clamp(-1.0, 1.0).acos()).cos() };
        // integral of T_k from -1 to xv
        let it = |k: usize, xv: f64| -> f64 {
            match k {
                0 => xv + 1.0,
                1 => (xv * xv - 1.0) / 2.0,
                _ => {
                    let kf = k as f64;
                    let a = t(k + 1, xv) / (2.0 * (kf + 1.0)) - t(k - 1, xv) / (2.0 * (kf - 1.0));
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let a0 = s * (-1.0 / (2.0 * (kf + 1.0)) + 1.0 / (2.0 * (kf - 1.0)));
                    a - a0
                }
            }
        };
        // coefficient map: c_k = (2/p) sum_j'' f_j T_k(x_j) with halved ends
        let mut m = vec![0.0; n * n];
        for j in 0..n {
            let cj = if j == 0 || j == p { 0.5 } else { 1.0 };
            for k in 0..n {
                let ck = if k == 0 || k == p { 0.5 } else { 1.0 };
                let coef = 2.0 / p as f64 * cj * ck * t(k, x[j]);
                for i in 0..n {
                    m[i * n + j] += coef * it(k, x[i]);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(ChannelGrid::uniform(1.0, 6, 4, 2).is_ok());
        assert!(ChannelGrid::uniform(1.0, 5, 4, 2).is_err());
        assert!(ChannelGrid::uniform(1.0, 2, 4, 2).is_err());
        assert!(ChannelGrid::uniform(-1.0, 8, 4, 2).is_err());
        assert!(ChannelGrid::new(1.0, 8, 4, vec![-0.5, 0.1, 0.1, 0.5]).is_err());
        assert!(ChannelGrid::chebyshev(1.0, 8, 4).is_err());
    }

    #[test]
    fn antiderivative_of_polynomial() {
        let g = ChannelGrid::new(1.0, 4, 6, vec![-0.5, -0.2, 0.1, 0.5]).unwrap();
        let f: Vec<f64> = g.x2().iter().map(|x| 3.0 * x * x).collect();
        let a = g.antiderivative_line(&f);
        for (x, v) in g.x2().iter().zip(&a) {
            assert!((v - (x.powi(3) + 0.125)).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_is_exact_for_polynomials() {
        let g = ChannelGrid::new(1.0, 4, 6, vec![-0.5, -0.2, 0.1, 0.5]).unwrap();
        let f: Vec<f64> = g.x2().iter().map(|x| x.powi(5) - x).collect();
        for s in 0..=50 {
            let x = -0.5 + s as f64 / 50.0;
            assert!((g.interpolate_line(&f, x) - (x.powi(5) - x)).abs() < 1e-14);
        }
    }
}
