//! Density-matrix reconstruction for 2-qubit NMR state tomography.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: small dense real/complex kernels (Jacobi eigen-solver,
//!   singular values, rank, spectral norm).
//! * [`model`]: the read-out forward model. Nine rotations, two observed
//!   spins, the 16-parameter density parameterisation and the stacked
//!   design system `A·x = B`.
//! * [`analysis`]: normal equations, error-matrix conditioning analysis,
//!   truncated reconstruction, χ² and the relative error δ.
//! * [`search`]: exhaustive search over read-out sets for full-rank designs.
//! * [`io`]: the readings and density text formats.
//!
//! Read-out ids follow the conventional numbering: 1–9 are II, IX, IY, XI,
//! XX, XY, YI, YX, YY with H acquisition, 10–18 the same rotations with P
//! acquisition.

pub mod analysis;
pub mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod reference;
pub mod search;

pub use error::{Error, Result};
