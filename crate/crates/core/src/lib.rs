//! Pseudo-spectral toolkit for the rotating stratified Boussinesq system on a
//! periodic box and its quasi-geostrophic limit.
//!
//! Layering, bottom to top:
//!
//! * [`spectral`]: grids, Fourier coefficient fields, FFT transforms, snapshots.
//! * [`multipliers`]: Fourier-multiplier operators (Leray, QG projector,
//!   potential vorticity, cutoffs, Littlewood–Paley blocks).
//! * [`eigen`]: per-mode 4×4 linear operator, eigenvalues and spectral projectors.
//! * [`analysis`]: Sobolev/Besov/Lebesgue norms, paraproducts, fitted constants.
//! * [`dynamics`]: time integrators for the primitive, limit, filtered and
//!   remainder systems.
//! * [`experiments`]: parameter sweeps, slope fits and reports.

pub mod analysis;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod experiments;
pub mod multipliers;
pub mod spectral;

pub use error::{Error, Result};
pub use multipliers::PhysParams;
pub use spectral::{Grid, PhysicalField4, SpectralField4, SpectralScalar};
