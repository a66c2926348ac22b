//! Real Fourier transforms along x1.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::ScalarField;

/// Fourier coefficients `m = 0..=nx/2` per x2 node, mode-major
/// (`data[m * ny + j]`), normalized so mode 0 is the x1 mean.
#[derive(Clone, Debug, PartialEq)]
pub struct Modes {
    nm: usize,
    ny: usize,
    data: Vec<Complex64>,
}

impl Modes {
    pub fn zeros(nm: usize, ny: usize) -> Self {
        Self {
            nm,
            ny,
            data: vec![Complex64::new(0.0, 0.0); nm * ny],
        }
    }
    pub fn n_modes(&self) -> usize {
        self.nm
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn line(&self, m: usize) -> &[Complex64] {
        &self.data[m * self.ny..(m + 1) * self.ny]
    }
    pub fn line_mut(&mut self, m: usize) -> &mut [Complex64] {
        &mut self.data[m * self.ny..(m + 1) * self.ny]
    }
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }
    /// Largest coefficient magnitude in mode `m`.
    pub fn mode_max(&self, m: usize) -> f64 {
        self.line(m).iter().fold(0.0, |a, c| a.max(c.norm()))
    }
}

/// FFT plans for one `nx`.
pub struct Fourier {
    nx: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fourier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier").field("nx", &self.nx).finish()
    }
}

impl Fourier {
    pub fn new(nx: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            fwd: planner.plan_fft_forward(nx),
            inv: planner.plan_fft_inverse(nx),
        }
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn forward(&self, f: &ScalarField) -> Modes {
        self.forward_pair(f, None).0
    }

    /// Transforms two real fields with one complex FFT.
    pub fn forward_pair(&self, a: &ScalarField, b: Option<&ScalarField>) -> (Modes, Modes) {
        let (nx, ny) = a.shape();
        assert_eq!(nx, self.nx);
        let mut buf = vec![Complex64::new(0.0, 0.0); nx * ny];
        for i in 0..nx {
            let ra = a.row(i);
            for j in 0..ny {
                buf[j * nx + i].re = ra[j];
            }
            if let Some(b) = b {
                let rb = b.row(i);
                for j in 0..ny {
                    buf[j * nx + i].im = rb[j];
                }
            }
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fwd.get_inplace_scratch_len()];
        self.fwd.process_with_scratch(&mut buf, &mut scratch);
        let nm = nx / 2 + 1;
        let norm = 1.0 / nx as f64;
        let mut ma = Modes::zeros(nm, ny);
        let mut mb = Modes::zeros(nm, ny);
        for j in 0..ny {
            let col = &buf[j * nx..(j + 1) * nx];
            for m in 0..nm {
                let z = col[m];
                let zc = col[(nx - m) % nx].conj();
                ma.data[m * ny + j] = (z + zc) * (0.5 * norm);
                if b.is_some() {
                    // (z - zc) / (2i)
                    let d = (z - zc) * (0.5 * norm);
                    mb.data[m * ny + j] = Complex64::new(d.im, -d.re);
                }
            }
        }
        (ma, mb)
    }

    pub fn inverse(&self, m: &Modes) -> ScalarField {
        self.inverse_pair(m, None).0
    }

    /// Inverse of [`Fourier::forward_pair`].
    pub fn inverse_pair(&self, a: &Modes, b: Option<&Modes>) -> (ScalarField, ScalarField) {
        let nx = self.nx;
        let ny = a.ny;
        let nm = a.nm;
        assert_eq!(nm, nx / 2 + 1);
        let zero = Complex64::new(0.0, 0.0);
        let iu = Complex64::new(0.0, 1.0);
        let mut buf = vec![zero; nx * ny];
        for j in 0..ny {
            let col = &mut buf[j * nx..(j + 1) * nx];
            for m in 0..nm {
                let mut ca = a.data[m * ny + j];
                let mut cb = b.map_or(zero, |b| b.data[m * ny + j]);
                if m == 0 || m == nx / 2 {
                    ca = Complex64::new(ca.re, 0.0);
                    cb = Complex64::new(cb.re, 0.0);
                }
                col[m] = ca + iu * cb;
                if m != 0 && m != nx / 2 {
                    col[nx - m] = ca.conj() + iu * cb.conj();
                }
            }
        }
        let mut scratch = vec![zero; self.inv.get_inplace_scratch_len()];
        self.inv.process_with_scratch(&mut buf, &mut scratch);
        let mut fa = vec![0.0; nx * ny];
        let mut fb = vec![0.0; nx * ny];
        for j in 0..ny {
            let col = &buf[j * nx..(j + 1) * nx];
            for i in 0..nx {
                fa[i * ny + j] = col[i].re;
                fb[i * ny + j] = col[i].im;
            }
        }
        (
            ScalarField::from_vec(nx, ny, fa).unwrap(),
            ScalarField::from_vec(nx, ny, fb).unwrap(),
        )
    }
}
