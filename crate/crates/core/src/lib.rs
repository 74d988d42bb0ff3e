//! Regional boundary observability of the Neumann heat equation on
//! rectangles and discs, and the sensor placements that achieve it.
//!
//! The pipeline is modal: [`spectral`] enumerates eigenpairs, [`sensors`]
//! turns each sensor into a row of output coefficients, [`observability`]
//! decides whether the sensors see the whole domain (Ω) or only a boundary
//! region (Γ), and [`reconstruction`] recovers initial states from sampled
//! outputs. [`cli`] wraps all of it behind JSON scenarios.

pub mod boundary;
pub mod cli;
pub mod error;
pub mod observability;
pub mod real;
pub mod reconstruction;
pub mod sensors;
pub mod spectral;
pub mod tolerance;

pub use error::{Error, Result};
pub use real::Real;
pub use tolerance::Tolerances;
