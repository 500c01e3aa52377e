//! Verification toolkit for Lu's commutator inequality and the first
//! eigenvalue of the Schrödinger operator `L = -Δ - σ` on minimal
//! submanifolds of the unit sphere.
//!
//! The crate is organised in four layers:
//!
//! - [`symmat`]: dense symmetric matrices, the Frobenius inner product,
//!   commutators, a cyclic Jacobi eigensolver and the fundamental matrix
//!   `S = (⟨A_α, A_β⟩)` with its power traces `f_p = Tr S^p`.
//! - [`lu`]: the zero-sum quadratic inequality on weighted pairs
//!   (`Σ (η_i - η_j)² r_ij ≤ Σ r_ij + max r_ij`), the commutator inequality
//!   for orthogonal families, their equality configurations and randomized
//!   soundness sweeps.
//! - [`catalog`]: closed-form second fundamental forms of the Clifford
//!   hypersurfaces, the Veronese surface and totally geodesic spheres,
//!   with pinching and Simons-residual diagnostics.
//! - [`spectral`]: analytic Laplace spectra of the models, the first
//!   Schrödinger eigenvalue and a finite-difference cross-check on the flat
//!   Clifford torus.

pub mod catalog;
pub mod error;
pub mod lu;
pub mod rng;
pub mod spectral;
pub mod symmat;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::Tolerances;
