//! Chebyshev–Gauss–Lobatto reference element on [-1, 1].

use std::f64::consts::PI;

/// Nodes, differentiation matrix and Clenshaw–Curtis weights of degree `p`.
///
/// Nodes are increasing: `x_j = -cos(pi j / p)`.
#[derive(Clone, Debug)]
pub struct RefElement {
    pub p: usize,
    pub nodes: Vec<f64>,
    /// Row-major `(p+1) x (p+1)`.
    pub diff: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RefElement {
    pub fn new(p: usize) -> Self {
        assert!(p >= 2, "element degree must be at least 2");
        let n = p + 1;
        let nodes: Vec<f64> = (0..n).map(|j| -(PI * j as f64 / p as f64).cos()).collect();
        let c = |j: usize| -> f64 {
            let s = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == p {
                2.0 * s
            } else {
                s
            }
        };
        let mut diff = vec![0.0; n * n];
        for i in 0..n {
            let mut row_sum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = c(i) / c(j) / (nodes[i] - nodes[j]);
                    diff[i * n + j] = v;
                    row_sum += v;
                }
            }
            // negative-sum trick keeps constants in the null space to roundoff
            diff[i * n + i] = -row_sum;
        }
        Self {
            p,
            nodes,
            diff,
            weights: clenshaw_curtis(p),
        }
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.diff[i * (self.p + 1) + j]
    }
}

/// Clenshaw–Curtis weights on [-1, 1] for the Lobatto nodes (sum = 2).
pub fn clenshaw_curtis(p: usize) -> Vec<f64> {
    let n = p;
    let mut w = vec![0.0; n + 1];
    let theta = |k: usize| PI * k as f64 / n as f64;
    if n % 2 == 0 {
        w[0] = 1.0 / ((n * n - 1) as f64);
        w[n] = w[0];
    } else {
        w[0] = 1.0 / ((n * n) as f64);
        w[n] = w[0];
    }
    for (i, wi) in w.iter_mut().enumerate().take(n).skip(1) {
        let mut v = 1.0;
        let th = theta(i);
        if n % 2 == 0 {
            for k in 1..n / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / ((4 * k * k - 1) as f64);
            }
            v -= (n as f64 * th).cos() / ((n * n - 1) as f64);
        } else {
            for k in 1..=(n - 1) / 2 {
                v -= 2.0 * (2.0 * k as f64 * th).cos() / ((4 * k * k - 1) as f64);
            }
        }
        *wi = 2.0 * v / n as f64;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_integrate_polynomials() {
        for p in [4, 7, 16, 33] {
            let r = RefElement::new(p);
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13);
            let x4: f64 = r.weights.iter().zip(&r.nodes).map(|(w, x)| w * x.powi(4)).sum();
            assert!((x4 - 0.4).abs() < 1e-13, "p={p} {x4}");
            assert!(r.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn differentiates_cubic() {
        let r = RefElement::new(12);
        for i in 0..=12 {
            let d: f64 = (0..=12).map(|j| r.d(i, j) * r.nodes[j].powi(3)).sum();
            assert!((d - 3.0 * r.nodes[i].powi(2)).abs() < 1e-11);
        }
    }
}
