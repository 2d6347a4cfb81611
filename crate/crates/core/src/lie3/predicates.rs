use serde::{Deserialize, Serialize};

use super::frame::FrameVector;
use super::structure::MilnorData;
use super::tension::{
    covariant_derivative, h1_residual, horizontal_tension_terms, tension, tension_t1, tension_t2,
};
use crate::error::{Error, Result};
use crate::tol;

/// Ratio `c = c_2 / c_1` of the binomial coupling constants `(c_1, c_2) = (2, 1)`
/// under which twisted 2-skyrmions in the unit tangent bundle of a
/// 3-dimensional group are exactly the 2-harmonic maps.
pub const DEFAULT_SKYRMION_COUPLING: f64 = 0.5;

/// Residuals behind the booleans of a [`PredicateReport`]. Each is scaled so
/// that the predicate holds when it is at most [`tol::PREDICATE_REL`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredicateResiduals {
    pub parallel: f64,
    pub harmonic_unit: f64,
    pub ric2_eigenvector: f64,
    pub m2_eigenvector: f64,
    pub skyrmion: f64,
    pub principal_direction: f64,
    pub horizontal: Option<f64>,
}

/// Predicates of a unit invariant vector field (principal frame).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateReport {
    pub r: usize,
    pub coupling: f64,
    /// `r = 1`: `nabla sigma = 0`; `r = 2`: `Ric(sigma) = 0`; `r = 3`: always.
    pub r_parallel: bool,
    /// `T_r(sigma)` is a multiple of `sigma`; always true for `r = 3`.
    pub r_harmonic_unit: bool,
    /// `sigma` is an eigenvector of `M^2`, i.e. lies in `H_1`.
    pub m2_eigenvector: bool,
    /// `sigma` is an eigenvector of `Ric^2`; must match `r_harmonic_unit` at `r = 2`.
    pub ric2_eigenvector: bool,
    /// `sigma` is an eigenvector of `M^2 - (c/4) Ric^2`.
    pub twisted_2_skyrmion: bool,
    /// `sigma` is an eigenvector of the structure map `L`.
    pub principal_direction: bool,
    /// Closed-form answer: principal direction (`r = 1, 2`), `H_1` (`r = 3`).
    pub r_harmonic_map: bool,
    /// `d pi o tau_r(sigma) = 0`; `None` when `r = 3` and `sigma` is off `H_1`.
    pub horizontal_vanishes: Option<bool>,
    /// Component route: twisted skyrmion with vanishing horizontal tension.
    pub harmonic_map_by_components: bool,
    pub tension: FrameVector,
    pub horizontal_tension: Option<FrameVector>,
    pub residuals: PredicateResiduals,
}

impl PredicateReport {
    /// Whether the two routes to every cross-validated predicate agree.
    pub fn consistent(&self) -> bool {
        let harmonic = match self.r {
            1 => self.r_harmonic_unit == self.m2_eigenvector,
            2 => self.r_harmonic_unit == self.ric2_eigenvector,
            _ => self.r_harmonic_unit,
        };
        harmonic
            && self.twisted_2_skyrmion == self.m2_eigenvector
            && self.r_harmonic_map == self.harmonic_map_by_components
    }
}

fn ratio(num: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        num / scale
    }
}

fn max_abs(v: [f64; 3]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Eigenvector residual of `sigma` for a diagonal map `d`, relative to `max |d_i|`.
fn diagonal_eigen_residual(d: [f64; 3], sigma: &FrameVector) -> f64 {
    ratio(sigma.hadamard(d).reject(sigma).norm(), max_abs(d))
}

/// [`check_predicates_with_coupling`] at [`DEFAULT_SKYRMION_COUPLING`].
pub fn check_predicates(md: &MilnorData, sigma: &FrameVector, r: usize) -> Result<PredicateReport> {
    check_predicates_with_coupling(md, sigma, r, DEFAULT_SKYRMION_COUPLING)
}

/// Evaluates every predicate of a unit field for degree `r` and skyrmion
/// coupling `c > 0`.
pub fn check_predicates_with_coupling(
    md: &MilnorData,
    sigma: &FrameVector,
    r: usize,
    coupling: f64,
) -> Result<PredicateReport> {
    sigma.require_unit()?;
    if !(1..=3).contains(&r) {
        return Err(Error::invalid(format!("degree {r} outside 1..=3")));
    }
    if !(coupling.is_finite() && coupling > 0.0) {
        return Err(Error::invalid(format!(
            "coupling must be positive, got {coupling}"
        )));
    }
    let ok = |x: f64| x <= tol::PREDICATE_REL;
    let s = md.scale();
    let mu2 = md.mu.map(|m| m * m);
    let rho2 = md.ricci.map(|x| x * x);

    // Vanishing Milnor numbers and Ricci curvatures are snapped to zero so
    // that parallelism agrees with the tolerance-based classification.
    let mu_eff = [0, 1, 2].map(|i| if md.mu_is_zero(i) { 0.0 } else { md.mu[i] });
    let rho_eff = [0, 1, 2].map(|i| {
        if md.ricci_is_zero(i) {
            0.0
        } else {
            md.ricci[i]
        }
    });
    let parallel = match r {
        1 => {
            let mut eff = md.clone();
            eff.mu = mu_eff;
            let grad: f64 = (0..3)
                .map(|i| covariant_derivative(&eff, &FrameVector::basis(i), sigma).norm_sq())
                .sum();
            ratio(grad.sqrt(), max_abs(md.mu))
        }
        2 => ratio(sigma.hadamard(rho_eff).norm(), max_abs(md.ricci)),
        _ => 0.0,
    };

    let t = tension(md, sigma, r)?;
    let harmonic_unit = match r {
        1 => ratio(t.reject(sigma).norm(), max_abs(mu2)),
        2 => ratio(t.reject(sigma).norm(), 0.25 * max_abs(rho2)),
        _ => 0.0,
    };
    let m2 = h1_residual(md, sigma);
    let ric2 = diagonal_eigen_residual(rho2, sigma);
    let twisted = tension_t1(md, sigma) + tension_t2(md, sigma)? * coupling;
    let skyrmion = ratio(
        twisted.reject(sigma).norm(),
        max_abs(mu2) + 0.25 * coupling * max_abs(rho2),
    );
    let principal = diagonal_eigen_residual(md.lambda, sigma);

    let in_h1 = ok(m2);
    let (horizontal, horizontal_res) = if r < 3 || in_h1 {
        // Judged against the terms that cancel; near degeneracy the tension
        // is cubic in the gap while the other residuals are linear. Terms
        // below the degeneracy level of the natural scale count as zero.
        let (h, terms) = horizontal_tension_terms(md, sigma, r)?;
        let floor = tol::DEGENERACY_REL * s.powi(3) * (1.0 + s * s).powi(r as i32 - 1);
        (Some(h), Some(ratio(h.norm(), terms.max(floor))))
    } else {
        (None, None)
    };
    let horizontal_vanishes = horizontal_res.map(ok);

    let principal_direction = ok(principal);
    let twisted_2_skyrmion = ok(skyrmion);
    let r_harmonic_map = if r < 3 { principal_direction } else { in_h1 };
    let harmonic_map_by_components = twisted_2_skyrmion && horizontal_vanishes == Some(true);

    Ok(PredicateReport {
        r,
        coupling,
        r_parallel: ok(parallel),
        r_harmonic_unit: ok(harmonic_unit),
        m2_eigenvector: in_h1,
        ric2_eigenvector: ok(ric2),
        twisted_2_skyrmion,
        principal_direction,
        r_harmonic_map,
        horizontal_vanishes,
        harmonic_map_by_components,
        tension: t,
        horizontal_tension: horizontal,
        residuals: PredicateResiduals {
            parallel,
            harmonic_unit,
            ric2_eigenvector: ric2,
            m2_eigenvector: m2,
            skyrmion,
            principal_direction: principal,
            horizontal: horizontal_res,
        },
    })
}
