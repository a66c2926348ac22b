use crate::error::CoreError;
use crate::grid::ChannelGrid;

/// Nodal values on an `nx x ny` grid, x2 fastest (`data[i * ny + j]`).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    nx: usize,
    ny: usize,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &ChannelGrid) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            data: vec![0.0; grid.nx() * grid.ny()],
        }
    }

    pub fn from_vec(nx: usize, ny: usize, data: Vec<f64>) -> Result<Self, CoreError> {
        if data.len() != nx * ny {
            return Err(CoreError::Shape {
                expected: (nx, ny),
                got: (data.len(), 1),
            });
        }
        Ok(Self { nx, ny, data })
    }

    pub fn from_fn(grid: &ChannelGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let x2 = grid.x2();
        let mut data = Vec::with_capacity(grid.nx() * grid.ny());
        for i in 0..grid.nx() {
            let x1 = grid.x1(i);
            data.extend(x2.iter().map(|&y| f(x1, y)));
        }
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            data,
        }
    }

    /// Field depending on x2 only.
    pub fn from_profile(grid: &ChannelGrid, profile: &[f64]) -> Self {
        assert_eq!(profile.len(), grid.ny());
        let mut data = Vec::with_capacity(grid.nx() * grid.ny());
        for _ in 0..grid.nx() {
            data.extend_from_slice(profile);
        }
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            data,
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn values(&self) -> &[f64] {
        &self.data
    }
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ny + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.ny + j] = v;
    }
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ny..(i + 1) * self.ny]
    }
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.ny..(i + 1) * self.ny]
    }

    pub fn check_grid(&self, grid: &ChannelGrid) -> Result<(), CoreError> {
        if self.shape() != (grid.nx(), grid.ny()) {
            return Err(CoreError::Shape {
                expected: (grid.nx(), grid.ny()),
                got: self.shape(),
            });
        }
        Ok(())
    }

    pub fn check_finite(&self) -> Result<(), CoreError> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(CoreError::NonFinite)
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.shape(), other.shape());
        Self {
            nx: self.nx,
            ny: self.ny,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Self) {
        assert_eq!(self.shape(), x.shape());
        for (s, v) in self.data.iter_mut().zip(&x.data) {
            *s += a * v;
        }
    }

    pub fn scale(&mut self, a: f64) {
        self.data.iter_mut().for_each(|v| *v *= a);
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Wall contract carried by a vector field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcTag {
    /// `u(x1, -1/2) = -e1/2`, `u(x1, 1/2) = e1/2`.
    Couette,
    /// Both components vanish at the walls.
    Homogeneous,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub u1: ScalarField,
    pub u2: ScalarField,
    pub bc: BcTag,
}

impl VectorField {
    pub fn new(u1: ScalarField, u2: ScalarField, bc: BcTag) -> Self {
        assert_eq!(u1.shape(), u2.shape());
        Self { u1, u2, bc }
    }

    pub fn zeros(grid: &ChannelGrid) -> Self {
        Self::new(ScalarField::zeros(grid), ScalarField::zeros(grid), BcTag::Homogeneous)
    }

    /// Plane Couette flow `x2 e1`.
    pub fn couette(grid: &ChannelGrid) -> Self {
        Self::new(
            ScalarField::from_fn(grid, |_, y| y),
            ScalarField::zeros(grid),
            BcTag::Couette,
        )
    }

    pub fn shape(&self) -> (usize, usize) {
        self.u1.shape()
    }

    pub fn with_bc(mut self, bc: BcTag) -> Self {
        self.bc = bc;
        self
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        self.u1.axpy(a, &x.u1);
        self.u2.axpy(a, &x.u2);
    }

    pub fn scale(&mut self, a: f64) {
        self.u1.scale(a);
        self.u2.scale(a);
    }

    pub fn check_finite(&self) -> Result<(), CoreError> {
        self.u1.check_finite()?;
        self.u2.check_finite()
    }

    /// Largest deviation from the wall values required by the tag.
    pub fn wall_defect(&self) -> f64 {
        let (nx, ny) = self.shape();
        let (lo, hi) = match self.bc {
            BcTag::Couette => (-0.5, 0.5),
            BcTag::Homogeneous => (0.0, 0.0),
            BcTag::None => return 0.0,
        };
        let mut d: f64 = 0.0;
        for i in 0..nx {
            d = d.max((self.u1.at(i, 0) - lo).abs());
            d = d.max((self.u1.at(i, ny - 1) - hi).abs());
            d = d.max(self.u2.at(i, 0).abs());
            d = d.max(self.u2.at(i, ny - 1).abs());
        }
        d
    }
}

/// Velocity gradient `g[i][j] = d_j u_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    pub g11: ScalarField,
    pub g12: ScalarField,
    pub g21: ScalarField,
    pub g22: ScalarField,
}

impl TensorField {
    pub fn components(&self) -> [&ScalarField; 4] {
        [&self.g11, &self.g12, &self.g21, &self.g22]
    }

    /// Pointwise squared Frobenius norm.
    pub fn frobenius_sq(&self) -> ScalarField {
        let mut out = self.g11.map(|v| v * v);
        for c in [&self.g12, &self.g21, &self.g22] {
            for (o, v) in out.values_mut().iter_mut().zip(c.values()) {
                *o += v * v;
            }
        }
        out
    }

    /// Pointwise `A : B`.
    pub fn contract(&self, other: &Self) -> ScalarField {
        let mut out = self.g11.zip_map(&other.g11, |a, b| a * b);
        for (a, b) in [
            (&self.g12, &other.g12),
            (&self.g21, &other.g21),
            (&self.g22, &other.g22),
        ] {
            for ((o, x), y) in out.values_mut().iter_mut().zip(a.values()).zip(b.values()) {
                *o += x * y;
            }
        }
        out
    }
}
