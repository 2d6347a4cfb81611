//! Numerical tolerances shared by the library, the property battery and
//! the acceptance suite.

/// Algebraic identities between two exact routes (relative).
pub const ALGEBRAIC_REL: f64 = 1e-10;

/// Cayley-Hamilton residual relative to the largest recursion intermediate.
pub const CAYLEY_HAMILTON_REL: f64 = 1e-9;

/// Shift and scaling identities (relative).
pub const SHIFT_IDENTITY_REL: f64 = 1e-9;

/// Central finite-difference step.
pub const FD_STEP: f64 = 1e-5;

/// Absolute agreement expected between an exact derivative and a central
/// difference at [`FD_STEP`] on unit-scale inputs.
pub const FD_ABS: f64 = 1e-6;

/// Relative threshold below which a generalized eigenvalue counts as zero.
pub const RANK_REL: f64 = 1e-9;

/// Coincidence of |rho_i|, |mu_i| or eigenvalues (relative to max magnitude).
pub const DEGENERACY_REL: f64 = 1e-9;

/// Vanishing coefficient when testing membership in a subset of the sphere.
pub const MEMBERSHIP_ABS: f64 = 1e-9;

/// Relative residual for the lie3 predicates (parallelism of a tension
/// field with sigma, vanishing of a derivative or curvature term).
pub const PREDICATE_REL: f64 = 1e-9;

/// A frame vector is unit when its norm differs from one by at most this.
pub const UNIT_NORM: f64 = 1e-12;

/// Symmetry of metric matrices.
pub const SYMMETRY: f64 = 1e-12;

/// Orthogonality of a variation field to sigma (relative to |zeta|).
pub const ORTHOGONALITY: f64 = 1e-10;

/// Majorisation: the gap may undershoot zero by this fraction of eps_r.
pub const MAJORISATION_UNDERSHOOT: f64 = 1e-10;

/// Majorisation: a gap at or below this is an equality case.
pub const MAJORISATION_EQUALITY: f64 = 1e-9;

/// Relative residual `|x - y| / max(|x|, |y|, floor)`.
pub fn rel_residual(x: f64, y: f64, floor: f64) -> f64 {
    let scale = x.abs().max(y.abs()).max(floor);
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}
