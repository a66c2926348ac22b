//! Advection by a frozen field and the solution operators built on it.

use chlab_core::{BcTag, Channel, ScalarField, VectorField};

use crate::error::DissipationError;

/// `U . grad` for a fixed `U` together with the Stokes solution operator.
pub struct Advector<'a> {
    ch: &'a Channel,
    u: VectorField,
}

impl<'a> Advector<'a> {
    pub fn new(ch: &'a Channel, u: &VectorField) -> Result<Self, DissipationError> {
        u.u1.check_grid(ch.grid())?;
        u.u2.check_grid(ch.grid())?;
        u.check_finite()?;
        Ok(Self { ch, u: u.clone() })
    }

    pub fn channel(&self) -> &'a Channel {
        self.ch
    }

    pub fn field(&self) -> &VectorField {
        &self.u
    }

    /// `U . grad v`.
    pub fn apply(&self, v: &VectorField) -> VectorField {
        let g = self.ch.velocity_gradient(v);
        let (a1, a2) = (&self.u.u1, &self.u.u2);
        let mut w1 = g.g11.zip_map(a1, |d, a| d * a);
        w1.axpy(1.0, &g.g12.zip_map(a2, |d, a| d * a));
        let mut w2 = g.g21.zip_map(a1, |d, a| d * a);
        w2.axpy(1.0, &g.g22.zip_map(a2, |d, a| d * a));
        VectorField::new(w1, w2, BcTag::None)
    }

    /// Velocity of `nu Delta v - grad p = w`, `div v = 0`, `v = 0` on the walls.
    pub fn stokes(&self, w: &VectorField, nu: f64) -> VectorField {
        stokes_velocity(self.ch, w, nu)
    }

    /// `U2 e1`.
    pub fn normal_forcing(&self) -> VectorField {
        VectorField::new(self.u.u2.clone(), ScalarField::zeros(self.ch.grid()), BcTag::None)
    }

    /// `-<U2 d1>`.
    pub fn linear_term(&self, d: &VectorField) -> f64 {
        -self.ch.inner(&self.u.u2, &d.u1)
    }
}

pub fn stokes_velocity(ch: &Channel, w: &VectorField, nu: f64) -> VectorField {
    let f = ch.fourier();
    let (w1, w2) = f.forward_pair(&w.u1, Some(&w.u2));
    let (v1, v2) = ch.stokes_modes(&w1, &w2, nu);
    let (u1, u2) = f.inverse_pair(&v1, Some(&v2));
    VectorField::new(u1, u2, BcTag::Homogeneous)
}

/// `P Delta^{-1} P w` with the component-wise Dirichlet inverse.
pub fn projected_inverse_laplacian(ch: &Channel, w: &VectorField) -> VectorField {
    let f = ch.fourier();
    let (mut m1, mut m2) = f.forward_pair(&w.u1, Some(&w.u2));
    ch.leray_modes(&mut m1, &mut m2);
    ch.inverse_laplacian_modes(&mut m1);
    ch.inverse_laplacian_modes(&mut m2);
    ch.leray_modes(&mut m1, &mut m2);
    let (u1, u2) = f.inverse_pair(&m1, Some(&m2));
    VectorField::new(u1, u2, BcTag::None)
}

pub(crate) fn flatten(fields: &[&VectorField]) -> Vec<f64> {
    let mut out = Vec::new();
    for v in fields {
        out.extend_from_slice(v.u1.values());
        out.extend_from_slice(v.u2.values());
    }
    out
}

pub(crate) fn unflatten(x: &[f64], nx: usize, ny: usize, count: usize) -> Vec<VectorField> {
    let n = nx * ny;
    (0..count)
        .map(|c| {
            let a = ScalarField::from_vec(nx, ny, x[2 * c * n..(2 * c + 1) * n].to_vec()).expect("shape");
            let b = ScalarField::from_vec(nx, ny, x[(2 * c + 1) * n..(2 * c + 2) * n].to_vec()).expect("shape");
            VectorField::new(a, b, BcTag::Homogeneous)
        })
        .collect()
}

/// Largest wall value of a field with homogeneous walls, relative to the field size.
pub(crate) fn relative_wall_defect(v: &VectorField) -> f64 {
    let scale = v.u1.max_abs().max(v.u2.max_abs());
    let ny = v.u1.ny();
    let mut d: f64 = 0.0;
    for i in 0..v.u1.nx() {
        for j in [0, ny - 1] {
            d = d.max(v.u1.at(i, j).abs()).max(v.u2.at(i, j).abs());
        }
    }
    if scale == 0.0 {
        0.0
    } else {
        d / scale
    }
}

/// Largest divergence relative to the largest normal-derivative component.
pub(crate) fn relative_divergence(ch: &Channel, v: &VectorField) -> f64 {
    let g = ch.velocity_gradient(v);
    let scale = g.g11.max_abs().max(g.g22.max_abs()).max(g.g12.max_abs()).max(g.g21.max_abs());
    if scale == 0.0 {
        0.0
    } else {
        g.g11.zip_map(&g.g22, |a, b| a + b).max_abs() / scale
    }
}
