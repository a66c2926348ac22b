//! Differential, integral and projection operators on a [`ChannelGrid`].

use std::borrow::Cow;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::banded::{BandMatrix, BandedLu};
use crate::error::CoreError;
use crate::field::{BcTag, ScalarField, TensorField, VectorField};
use crate::fourier::{Fourier, Modes};
use crate::grid::ChannelGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Wall {
    Dirichlet,
    Neumann,
}

/// Output of [`Channel::stokes_solve`].
#[derive(Clone, Debug)]
pub struct StokesSolution {
    pub velocity: VectorField,
    pub pressure: ScalarField,
}

/// Default memory for cached factorizations, in bytes.
pub const DEFAULT_CACHE_BUDGET: usize = 3 << 29;

/// A grid together with its transforms and cached per-mode factorizations.
///
/// Every operator is pure; factorizations are built on first use and shared
/// while they fit in the cache budget, and rebuilt per call beyond it.
pub struct Channel {
    grid: ChannelGrid,
    fourier: Fourier,
    d2_ref: Vec<f64>,
    dir: Vec<OnceLock<BandedLu>>,
    neu: Vec<OnceLock<BandedLu>>,
    stokes: Vec<OnceLock<BandedLu>>,
    cache_budget: usize,
    cached_bytes: AtomicUsize,
}

impl std::fmt::Debug for Channel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Channel").field("grid", &self.grid).finish()
    }
}

impl Channel {
    pub fn new(grid: ChannelGrid) -> Self {
        let nm = grid.n_modes();
        let r = grid.reference();
        let n = r.p + 1;
        let mut d2_ref = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                d2_ref[i * n + j] = (0..n).map(|k| r.d(i, k) * r.d(k, j)).sum();
            }
        }
        Self {
            fourier: Fourier::new(grid.nx()),
            grid,
            d2_ref,
            dir: (0..nm).map(|_| OnceLock::new()).collect(),
            neu: (0..nm).map(|_| OnceLock::new()).collect(),
            stokes: (0..nm).map(|_| OnceLock::new()).collect(),
            cache_budget: DEFAULT_CACHE_BUDGET,
            cached_bytes: AtomicUsize::new(0),
        }
    }

    /// Caps the memory held by cached factorizations.
    pub fn with_cache_budget(mut self, bytes: usize) -> Self {
        self.cache_budget = bytes;
        self
    }

    /// Bytes currently held by cached factorizations.
    pub fn cached_bytes(&self) -> usize {
        self.cached_bytes.load(Ordering::Relaxed)
    }

    fn cached<'a>(&'a self, slot: &'a OnceLock<BandedLu>, build: impl FnOnce() -> BandedLu) -> Cow<'a, BandedLu> {
        if let Some(lu) = slot.get() {
            return Cow::Borrowed(lu);
        }
        let lu = build();
        let b = lu.bytes();
        if self.cached_bytes.fetch_add(b, Ordering::Relaxed) + b > self.cache_budget {
            self.cached_bytes.fetch_sub(b, Ordering::Relaxed);
            return Cow::Owned(lu);
        }
        if slot.set(lu).is_err() {
            self.cached_bytes.fetch_sub(b, Ordering::Relaxed);
        }
        Cow::Borrowed(slot.get().expect("slot was just filled"))
    }

    pub fn grid(&self) -> &ChannelGrid {
        &self.grid
    }

    pub fn fourier(&self) -> &Fourier {
        &self.fourier
    }

    // ---- pointwise-in-x2 derivative helpers ----

    pub fn dx1(&self, f: &ScalarField) -> ScalarField {
        let mut m = self.fourier.forward(f);
        self.dx1_modes_in_place(&mut m);
        self.fourier.inverse(&m)
    }

    pub fn dx2(&self, f: &ScalarField) -> ScalarField {
        let mut out = ScalarField::zeros(&self.grid);
        for i in 0..self.grid.nx() {
            self.grid.dx2_line(f.row(i), out.row_mut(i));
        }
        out
    }

    /// Multiplies mode `m` by `i k_m`; the Nyquist mode is dropped.
    pub fn dx1_modes_in_place(&self, m: &mut Modes) {
        for mm in 0..m.n_modes() {
            let ik = if self.grid.is_nyquist(mm) {
                Complex64::new(0.0, 0.0)
            } else {
                I * self.grid.wavenumber(mm)
            };
            for c in m.line_mut(mm) {
                *c *= ik;
            }
        }
    }

    pub fn dx2_modes(&self, m: &Modes) -> Modes {
        let mut out = Modes::zeros(m.n_modes(), m.ny());
        for mm in 0..m.n_modes() {
            self.grid.dx2_line(m.line(mm), out.line_mut(mm));
        }
        out
    }

    pub fn gradient(&self, f: &ScalarField) -> VectorField {
        VectorField::new(self.dx1(f), self.dx2(f), BcTag::None)
    }

    pub fn divergence(&self, v: &VectorField) -> ScalarField {
        let mut d = self.dx1(&v.u1);
        d.axpy(1.0, &self.dx2(&v.u2));
        d
    }

    /// `(-d2 psi, d1 psi)`.
    pub fn perp_gradient(&self, psi: &ScalarField) -> VectorField {
        let mut u1 = self.dx2(psi);
        u1.scale(-1.0);
        VectorField::new(u1, self.dx1(psi), BcTag::None)
    }

    pub fn velocity_gradient(&self, v: &VectorField) -> TensorField {
        let (m1, m2) = self.fourier.forward_pair(&v.u1, Some(&v.u2));
        let (mut a1, mut a2) = (m1, m2);
        self.dx1_modes_in_place(&mut a1);
        self.dx1_modes_in_place(&mut a2);
        let (g11, g21) = self.fourier.inverse_pair(&a1, Some(&a2));
        TensorField {
            g11,
            g12: self.dx2(&v.u1),
            g21,
            g22: self.dx2(&v.u2),
        }
    }

    pub fn laplacian(&self, f: &ScalarField) -> ScalarField {
        let mut m = self.fourier.forward(f);
        let mut out = Modes::zeros(m.n_modes(), m.ny());
        let mut tmp = vec![Complex64::new(0.0, 0.0); m.ny()];
        for mm in 0..m.n_modes() {
            let k2 = self.grid.wavenumber(mm).powi(2);
            self.grid.dx2_line(m.line(mm), &mut tmp);
            self.grid.dx2_line(&tmp, out.line_mut(mm));
            for (o, c) in out.line_mut(mm).iter_mut().zip(m.line(mm)) {
                *o -= *c * k2;
            }
        }
        std::mem::swap(&mut m, &mut out);
        self.fourier.inverse(&m)
    }

    // ---- averages ----

    /// Channel mean `(1/|Omega|) int f`.
    pub fn average(&self, f: &ScalarField) -> f64 {
        let w = self.grid.weights();
        let mut s = 0.0;
        for i in 0..self.grid.nx() {
            s += f.row(i).iter().zip(w).map(|(a, b)| a * b).sum::<f64>();
        }
        s / self.grid.nx() as f64
    }

    /// Mean of `a * b`.
    pub fn inner(&self, a: &ScalarField, b: &ScalarField) -> f64 {
        let w = self.grid.weights();
        let mut s = 0.0;
        for i in 0..self.grid.nx() {
            s += a
                .row(i)
                .iter()
                .zip(b.row(i))
                .zip(w)
                .map(|((x, y), w)| x * y * w)
                .sum::<f64>();
        }
        s / self.grid.nx() as f64
    }

    pub fn inner_vec(&self, a: &VectorField, b: &VectorField) -> f64 {
        self.inner(&a.u1, &b.u1) + self.inner(&a.u2, &b.u2)
    }

    pub fn inner_tensor(&self, a: &TensorField, b: &TensorField) -> f64 {
        a.components()
            .iter()
            .zip(b.components().iter())
            .map(|(x, y)| self.inner(x, y))
            .sum()
    }

    /// Mean over x1 at every x2 node.
    pub fn horizontal_average(&self, f: &ScalarField) -> Vec<f64> {
        let (nx, ny) = f.shape();
        let mut out = vec![0.0; ny];
        for i in 0..nx {
            for (o, v) in out.iter_mut().zip(f.row(i)) {
                *o += v;
            }
        }
        out.iter_mut().for_each(|v| *v /= nx as f64);
        out
    }

    // ---- per-mode boundary-value problems ----

    fn helmholtz_matrix(&self, k2: f64, wall: Wall) -> BandMatrix {
        let g = &self.grid;
        let p = g.p();
        let n = p + 1;
        let ny = g.ny();
        let r = g.reference();
        let mut a = BandMatrix::zeros(ny, p, p);
        for e in 0..g.n_elem() {
            let s = g.elem_scale(e);
            for i in 1..p {
                let row = e * p + i;
                for j in 0..n {
                    let mut v = s * s * self.d2_ref[i * n + j];
                    if i == j {
                        v -= k2;
                    }
                    a.add(row, e * p + j, v);
                }
            }
        }
        for e in 1..g.n_elem() {
            let row = e * p;
            let (sl, sr) = (g.elem_scale(e - 1), g.elem_scale(e));
            for j in 0..n {
                a.add(row, (e - 1) * p + j, sl * r.d(p, j));
                a.add(row, e * p + j, -sr * r.d(0, j));
            }
        }
        let last = g.n_elem() - 1;
        match wall {
            Wall::Dirichlet => {
                a.add(0, 0, 1.0);
                a.add(ny - 1, ny - 1, 1.0);
            }
            Wall::Neumann => {
                for j in 0..n {
                    a.add(0, j, g.elem_scale(0) * r.d(0, j));
                    a.add(ny - 1, last * p + j, g.elem_scale(last) * r.d(p, j));
                }
            }
        }
        a
    }

    fn dirichlet_lu(&self, m: usize) -> Cow<'_, BandedLu> {
        self.cached(&self.dir[m], || {
            let k2 = self.grid.wavenumber(m).powi(2);
            self.helmholtz_matrix(k2, Wall::Dirichlet)
                .factor()
                .expect("Dirichlet Helmholtz operator is nonsingular")
        })
    }

    fn neumann_lu(&self, m: usize) -> Cow<'_, BandedLu> {
        self.cached(&self.neu[m], || {
            let k2 = self.grid.wavenumber(m).powi(2);
            self.helmholtz_matrix(k2, Wall::Neumann)
                .factor()
                .expect("Neumann Helmholtz operator is nonsingular for k > 0")
        })
    }

    // Interleaved (phi_j, omega_j) system for the clamped biharmonic.
    fn stokes_lu(&self, m: usize) -> Cow<'_, BandedLu> {
        self.cached(&self.stokes[m], || {
            let g = &self.grid;
            let p = g.p();
            let n = p + 1;
            let ny = g.ny();
            let r = g.reference();
            let k2 = g.wavenumber(m).powi(2);
            let mut a = BandMatrix::zeros(2 * ny, 2 * p + 1, 2 * p + 1);
            for e in 0..g.n_elem() {
                let s = g.elem_scale(e);
                for i in 1..p {
                    let row = e * p + i;
                    a.add(2 * row, 2 * row + 1, 1.0);
                    for j in 0..n {
                        let mut v = s * s * self.d2_ref[i * n + j];
                        if i == j {
                            v -= k2;
                        }
                        a.add(2 * row, 2 * (e * p + j), -v);
                        a.add(2 * row + 1, 2 * (e * p + j) + 1, v);
                    }
                }
            }
            for e in 1..g.n_elem() {
                let row = e * p;
                let (sl, sr) = (g.elem_scale(e - 1), g.elem_scale(e));
                for j in 0..n {
                    for c in 0..2 {
                        a.add(2 * row + c, 2 * ((e - 1) * p + j) + c, sl * r.d(p, j));
                        a.add(2 * row + c, 2 * (e * p + j) + c, -sr * r.d(0, j));
                    }
                }
            }
            let last = g.n_elem() - 1;
            a.add(0, 0, 1.0);
            a.add(2 * (ny - 1), 2 * (ny - 1), 1.0);
            for j in 0..n {
                a.add(1, 2 * j, g.elem_scale(0) * r.d(0, j));
                a.add(2 * ny - 1, 2 * (last * p + j), g.elem_scale(last) * r.d(p, j));
            }
            a.factor().expect("clamped biharmonic operator is nonsingular")
        })
    }

    fn is_interior(&self, j: usize) -> bool {
        let p = self.grid.p();
        j != 0 && j != self.grid.ny() - 1 && j % p != 0
    }

    /// Dirichlet `Delta^{-1}` of each mode in place.
    pub fn inverse_laplacian_modes(&self, f: &mut Modes) {
        for m in 0..f.n_modes() {
            let lu = self.dirichlet_lu(m);
            let line = f.line_mut(m);
            for (j, v) in line.iter_mut().enumerate() {
                if !self.is_interior(j) {
                    *v = Complex64::new(0.0, 0.0);
                }
            }
            lu.solve_in_place(line);
        }
    }

    /// `g` with `Delta g = f` and `g = 0` on both walls.
    pub fn inverse_laplacian_dirichlet(&self, f: &ScalarField) -> ScalarField {
        let mut m = self.fourier.forward(f);
        self.inverse_laplacian_modes(&mut m);
        self.fourier.inverse(&m)
    }

    /// Leray projection of one mode pair in place.
    pub fn leray_modes(&self, v1: &mut Modes, v2: &mut Modes) {
        let ny = self.grid.ny();
        let mut rhs = vec![Complex64::new(0.0, 0.0); ny];
        let mut dphi = vec![Complex64::new(0.0, 0.0); ny];
        for m in 0..v1.n_modes() {
            if m == 0 || self.grid.is_nyquist(m) {
                v2.line_mut(m).iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                continue;
            }
            let ik = I * self.grid.wavenumber(m);
            self.grid.dx2_line(v2.line(m), &mut rhs);
            for j in 0..ny {
                rhs[j] = if self.is_interior(j) {
                    rhs[j] + ik * v1.line(m)[j]
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            rhs[0] = v2.line(m)[0];
            rhs[ny - 1] = v2.line(m)[ny - 1];
            self.neumann_lu(m).solve_in_place(&mut rhs);
            self.grid.dx2_line(&rhs, &mut dphi);
            for (c, phi) in v1.line_mut(m).iter_mut().zip(&rhs) {
                *c -= ik * phi;
            }
            for (c, d) in v2.line_mut(m).iter_mut().zip(&dphi) {
                *c -= d;
            }
        }
    }

    /// `V - grad phi` with `Delta phi = div V`, `d2 phi = V2` on the walls.
    pub fn leray_project(&self, v: &VectorField) -> VectorField {
        let (mut m1, mut m2) = self.fourier.forward_pair(&v.u1, Some(&v.u2));
        self.leray_modes(&mut m1, &mut m2);
        let (u1, u2) = self.fourier.inverse_pair(&m1, Some(&m2));
        VectorField::new(u1, u2, BcTag::None)
    }

    /// `grad (Delta^{-1} P W)` with a component-wise Dirichlet inverse.
    pub fn grad_inv_lap_project(&self, w: &VectorField) -> TensorField {
        let (mut m1, mut m2) = self.fourier.forward_pair(&w.u1, Some(&w.u2));
        self.grad_inv_lap_project_modes(&mut m1, &mut m2)
    }

    pub fn grad_inv_lap_project_modes(&self, m1: &mut Modes, m2: &mut Modes) -> TensorField {
        self.leray_modes(m1, m2);
        self.inverse_laplacian_modes(m1);
        self.inverse_laplacian_modes(m2);
        self.tensor_from_modes(m1, m2)
    }

    /// Gradient tensor of the field whose Fourier modes are `m1`, `m2`.
    pub fn tensor_from_modes(&self, m1: &Modes, m2: &Modes) -> TensorField {
        let (d1, d2) = (self.dx2_modes(m1), self.dx2_modes(m2));
        let (g12, g22) = self.fourier.inverse_pair(&d1, Some(&d2));
        let (mut a1, mut a2) = (m1.clone(), m2.clone());
        self.dx1_modes_in_place(&mut a1);
        self.dx1_modes_in_place(&mut a2);
        let (g11, g21) = self.fourier.inverse_pair(&a1, Some(&a2));
        TensorField { g11, g12, g21, g22 }
    }

    /// Velocity modes of the Stokes problem `nu Delta v - grad p = W`,
    /// `div v = 0`, `v = 0` on the walls. The Nyquist mode is dropped.
    pub fn stokes_modes(&self, w1: &Modes, w2: &Modes, nu: f64) -> (Modes, Modes) {
        let ny = self.grid.ny();
        let nm = w1.n_modes();
        let zero = Complex64::new(0.0, 0.0);
        let mut v1 = Modes::zeros(nm, ny);
        let mut v2 = Modes::zeros(nm, ny);
        let mut curl = vec![zero; ny];
        let mut z = vec![zero; 2 * ny];
        let mut phi = vec![zero; ny];
        for m in 0..nm {
            if self.grid.is_nyquist(m) {
                continue;
            }
            if w1.line(m).iter().chain(w2.line(m)).all(|c| *c == zero) {
                continue;
            }
            if m == 0 {
                let line = v1.line_mut(0);
                for (j, (o, c)) in line.iter_mut().zip(w1.line(0)).enumerate() {
                    *o = if self.is_interior(j) { *c * (1.0 / nu) } else { zero };
                }
                self.dirichlet_lu(0).solve_in_place(line);
                continue;
            }
            let k = self.grid.wavenumber(m);
            let ik = I * k;
            self.grid.dx2_line(w1.line(m), &mut curl);
            z.iter_mut().for_each(|c| *c = zero);
            for j in 0..ny {
                if self.is_interior(j) {
                    z[2 * j + 1] = (ik * w2.line(m)[j] - curl[j]) * (1.0 / nu);
                }
            }
            self.stokes_lu(m).solve_in_place(&mut z);
            for j in 0..ny {
                phi[j] = z[2 * j];
            }
            self.grid.dx2_line(&phi, &mut curl);
            for j in 0..ny {
                v1.line_mut(m)[j] = -curl[j];
                v2.line_mut(m)[j] = ik * phi[j];
            }
        }
        (v1, v2)
    }

    /// Solves `nu Delta v - grad p = W`, `div v = 0`, `v = 0` on the walls.
    /// The pressure has zero channel mean.
    pub fn stokes_solve(&self, w: &VectorField, nu: f64) -> Result<StokesSolution, CoreError> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(CoreError::InvalidGrid(format!("viscosity must be positive, got {nu}")));
        }
        let (w1, w2) = self.fourier.forward_pair(&w.u1, Some(&w.u2));
        let (v1, v2) = self.stokes_modes(&w1, &w2, nu);
        let ny = self.grid.ny();
        let mut pm = Modes::zeros(v1.n_modes(), ny);
        let mut t = vec![Complex64::new(0.0, 0.0); ny];
        let mut t2 = vec![Complex64::new(0.0, 0.0); ny];
        for m in 1..v1.n_modes() {
            if self.grid.is_nyquist(m) {
                continue;
            }
            let k = self.grid.wavenumber(m);
            self.grid.dx2_line(v1.line(m), &mut t);
            self.grid.dx2_line(&t, &mut t2);
            for j in 0..ny {
                let lap = t2[j] - v1.line(m)[j] * (k * k);
                pm.line_mut(m)[j] = (lap * nu - w1.line(m)[j]) / (I * k);
            }
        }
        let g: Vec<f64> = w2.line(0).iter().map(|c| -c.re).collect();
        let mut p0 = self.grid.antiderivative_line(&g);
        let mean = self.grid.integrate_line(&p0);
        p0.iter_mut().for_each(|v| *v -= mean);
        for (c, v) in pm.line_mut(0).iter_mut().zip(&p0) {
            *c = Complex64::new(*v, 0.0);
        }
        let (u1, u2) = self.fourier.inverse_pair(&v1, Some(&v2));
        Ok(StokesSolution {
            velocity: VectorField::new(u1, u2, BcTag::Homogeneous),
            pressure: self.fourier.inverse(&pm),
        })
    }

    /// Relative momentum and divergence residuals of a Stokes pair at
    /// element-interior nodes.
    pub fn stokes_residual(&self, w: &VectorField, sol: &StokesSolution, nu: f64) -> (f64, f64) {
        let v = &sol.velocity;
        let gp = self.gradient(&sol.pressure);
        let mut r1 = self.laplacian(&v.u1);
        r1.scale(nu);
        r1.axpy(-1.0, &gp.u1);
        r1.axpy(-1.0, &w.u1);
        let mut r2 = self.laplacian(&v.u2);
        r2.scale(nu);
        r2.axpy(-1.0, &gp.u2);
        r2.axpy(-1.0, &w.u2);
        let div = self.divergence(v);
        let mut rm: f64 = 0.0;
        let mut rd: f64 = 0.0;
        for i in 0..self.grid.nx() {
            for j in 0..self.grid.ny() {
                if self.is_interior(j) {
                    rm = rm.max(r1.at(i, j).abs()).max(r2.at(i, j).abs());
                    rd = rd.max(div.at(i, j).abs());
                }
            }
        }
        let scale = w.u1.max_abs().max(w.u2.max_abs()).max(f64::MIN_POSITIVE);
        (rm / scale, rd / scale)
    }
}
