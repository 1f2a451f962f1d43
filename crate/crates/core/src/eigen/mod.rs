//! Per-mode eigen-structure of the linearized operator.
//!
//! After a Fourier transform the linear part of the primitive system acts on
//! each wavevector through the real 4×4 matrix `B(ξ, ε) = L̂ - (1/ε) P̂ Â`.
//! [`exact_eigen`] resolves its spectrum and projectors, and
//! [`asymptotic_eigenvalues`] gives the small-`ε` expansions they are
//! compared against.

mod expm;
mod mode;
mod table;

pub use expm::{expm, expm_phi};
pub use mode::{
    apply_cmat4, apply_mat4, asymptotic_eigenvalues, build_b, exact_eigen, tau, AsymptoticEigen, CMat4, Mat4,
    ModeEigen, ModeMatrix, CONDITION_LIMIT,
};
pub use table::{project_pi, EigenTable, Pi};
