//! Left-invariant geometry of a 3-dimensional unimodular Lie group in a
//! principal orthonormal frame `(e_1, e_2, e_3)` with
//! `[e_i, e_j] = eps_ijk lambda_k e_k`.
//!
//! Invariant vector fields are coefficient triples ([`FrameVector`]). The
//! Levi-Civita connection is `nabla_phi sigma = M(phi) x sigma`, where the
//! Milnor map `M` is diagonal with entries `mu_i = (l_1 + l_2 + l_3)/2 - l_i`.
//! Everything downstream (curvature, Cauchy-Green and Newton tensors,
//! tension fields, the `H_r` / `Z_r` classification) is expressed through
//! `M`, the cross product and the principal Ricci curvatures.
//!
//! Indices in this module are 0-based (`0, 1, 2` for `e_1, e_2, e_3`).

mod frame;
mod predicates;
mod sets;
mod structure;
pub(crate) mod tension;

pub use frame::FrameVector;
pub use predicates::{
    check_predicates, check_predicates_with_coupling, PredicateReport, PredicateResiduals,
    DEFAULT_SKYRMION_COUPLING,
};
pub use sets::{classify_sets, SetClassification, SubsetDescriptor};
pub use structure::{classify_algebra, AlgebraClass, MilnorData, StructureConstants};
pub use tension::{
    covariant_derivative, curvature, divergence_invariant_tensor, divergence_newton_1,
    divergence_newton_2, first_variation_fd, grad_norm_sq, horizontal_tension, milnor_iterate,
    riemann_action, second_covariant, tension, tension_t1, tension_t2, vertical_cauchy_green,
    vertical_energy, vertical_newton_1, vertical_newton_2, wedge_norm_sq,
};
