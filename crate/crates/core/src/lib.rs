//! Higher-power energy machinery and the classification of r-harmonic
//! invariant unit vector fields on 3-dimensional unimodular Lie groups.
//!
//! The crate is organised bottom-up:
//!
//! * [`matrix`] and [`invariants`]: small dense matrices, elementary
//!   invariants (characteristic polynomial coefficients), Newton
//!   endomorphisms and the identities they satisfy.
//! * [`energy`]: pointwise energy densities of a map from metric and
//!   Jacobian data (Cauchy-Green tensor, `eps_r`, volume density,
//!   conformality and majorisation checks).
//! * [`lie3`]: left-invariant geometry of 3-dimensional unimodular Lie
//!   groups in a principal frame, closed-form tension fields, and the
//!   sets `H_r` / `Z_r` of harmonic and zero-energy unit fields.
//! * [`oracle`]: brute-force and frame-level reference computations that
//!   share no code path with the closed forms they check.
//! * [`battery`]: the seeded property battery behind `hpharm verify`,
//!   run in parallel with rayon when the `parallel` feature is enabled.

pub mod battery;
pub mod energy;
pub mod error;
pub mod invariants;
pub mod lie3;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod sampling;
pub mod tol;

pub use error::{Error, Result};
pub use invariants::InvariantVector;
pub use matrix::SquareMatrix;
