//! Fields and operators on the periodic channel `T_{L1} x [-1/2, 1/2]`.
//!
//! x1 is Fourier, x2 is a chain of Chebyshev–Gauss–Lobatto elements.
//! Boundary-value problems are solved one x1 mode at a time with banded LU.

pub mod banded;
pub mod channel;
pub mod cheb;
pub mod error;
pub mod field;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod krylov;

pub use channel::{Channel, StokesSolution, DEFAULT_CACHE_BUDGET};
pub use error::CoreError;
pub use field::{BcTag, ScalarField, TensorField, VectorField};
pub use fourier::{Fourier, Modes};
pub use grid::ChannelGrid;
