//! Periodic grids, Fourier coefficient fields and transforms.

mod fft;
mod field;
mod grid;
pub mod random;
pub mod snapshot;

pub use field::{
    forward_transform, inverse_transform, scalar_product, PhysicalField, PhysicalField4, PhysicalScalar, SpectralField,
    SpectralField4, SpectralScalar, HERMITIAN_TOL,
};
pub use grid::{norm2, Grid};
pub use random::{band_limited_field, random_spectral, rng_from_seed, seeded_field};
pub use snapshot::{write_atomic, Snapshot};
