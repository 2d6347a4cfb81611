//! Connection, curvature, vertical Cauchy-Green and Newton tensors, and the
//! closed-form tension fields of invariant unit vector fields.

use super::frame::FrameVector;
use super::structure::MilnorData;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::tol;

/// `sigma^(r)`: the Milnor map applied `r` times, componentwise `mu_i^r a_i`.
pub fn milnor_iterate(md: &MilnorData, v: &FrameVector, r: u32) -> FrameVector {
    let exp = r as i32;
    v.hadamard(md.mu.map(|m| m.powi(exp)))
}

/// `nabla_phi sigma = phi^(1) x sigma`.
pub fn covariant_derivative(
    md: &MilnorData,
    phi: &FrameVector,
    sigma: &FrameVector,
) -> FrameVector {
    milnor_iterate(md, phi, 1).cross(sigma)
}

/// `|nabla sigma|^2 = sum_i mu_i^2 (|sigma|^2 - a_i^2)`.
pub fn grad_norm_sq(md: &MilnorData, sigma: &FrameVector) -> f64 {
    let n2 = sigma.norm_sq();
    (0..3)
        .map(|i| md.mu[i].powi(2) * (n2 - sigma[i].powi(2)))
        .sum()
}

/// `|nabla sigma ^ nabla sigma|^2 = |sigma|^2 |Ric(sigma)|^2 / 4`.
pub fn wedge_norm_sq(md: &MilnorData, sigma: &FrameVector) -> f64 {
    0.25 * sigma.norm_sq() * md.ricci_apply(sigma).norm_sq()
}

/// Second covariant derivative
/// `nabla^2_{phi,psi} sigma = <phi1, sigma> psi1 - <phi1, psi1> sigma - (phi1 x psi)^(1) x sigma`.
pub fn second_covariant(
    md: &MilnorData,
    phi: &FrameVector,
    psi: &FrameVector,
    sigma: &FrameVector,
) -> FrameVector {
    let phi1 = milnor_iterate(md, phi, 1);
    let psi1 = milnor_iterate(md, psi, 1);
    let tail = milnor_iterate(md, &phi1.cross(psi), 1).cross(sigma);
    psi1 * phi1.dot(sigma) - *sigma * phi1.dot(&psi1) - tail
}

/// `R(e_i, e_j) sigma = K_ij (a_j e_i - a_i e_j)`; zero when `i == j`.
pub fn riemann_action(md: &MilnorData, i: usize, j: usize, sigma: &FrameVector) -> FrameVector {
    if i == j {
        return FrameVector::ZERO;
    }
    let k = md.sectional_curvature(i, j);
    (FrameVector::basis(i) * sigma[j] - FrameVector::basis(j) * sigma[i]) * k
}

/// `R(x, y) z`, extended bilinearly from [`riemann_action`].
pub fn curvature(
    md: &MilnorData,
    x: &FrameVector,
    y: &FrameVector,
    z: &FrameVector,
) -> FrameVector {
    let mut out = FrameVector::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && x[i] != 0.0 && y[j] != 0.0 {
                out += riemann_action(md, i, j, z) * (x[i] * y[j]);
            }
        }
    }
    out
}

/// Vertical Cauchy-Green tensor `alpha_ij = <nabla_{e_i} sigma, nabla_{e_j} sigma>`.
pub fn vertical_cauchy_green(md: &MilnorData, sigma: &FrameVector) -> SquareMatrix {
    let d: Vec<FrameVector> = (0..3)
        .map(|i| covariant_derivative(md, &FrameVector::basis(i), sigma))
        .collect();
    SquareMatrix::from_fn(3, |i, j| d[i].dot(&d[j]))
}

/// Vertical energy density `eps_r^v(sigma)` for `r = 0..=3`.
///
/// `nabla sigma` takes values in `sigma^perp`, so its rank is at most two
/// and `eps_3^v` vanishes.
pub fn vertical_energy(md: &MilnorData, sigma: &FrameVector, r: usize) -> Result<f64> {
    match r {
        0 => Ok(1.0),
        1 => Ok(grad_norm_sq(md, sigma)),
        2 => Ok(wedge_norm_sq(md, sigma)),
        3 => Ok(0.0),
        _ => Err(Error::invalid(format!(
            "vertical energy degree {r} outside 0..=3"
        ))),
    }
}

/// First vertical Newton tensor
/// `phi -> |M|^2 phi - phi^(2) + <phi, sigma1> sigma1 - |sigma1|^2 phi`.
pub fn vertical_newton_1(md: &MilnorData, sigma: &FrameVector) -> Result<SquareMatrix> {
    sigma.require_unit()?;
    let s1 = milnor_iterate(md, sigma, 1);
    let shift = md.milnor_norm_sq() - s1.norm_sq();
    Ok(SquareMatrix::from_fn(3, |i, j| {
        let diag = if i == j {
            shift - md.mu[j].powi(2)
        } else {
            0.0
        };
        diag + s1[i] * s1[j]
    }))
}

/// Residual of `sigma` being an eigenvector of `M^2`, relative to `max mu_i^2`.
pub(crate) fn h1_residual(md: &MilnorData, sigma: &FrameVector) -> f64 {
    let s2 = milnor_iterate(md, sigma, 2);
    let scale = md.mu.iter().fold(0.0_f64, |m, x| m.max(x * x));
    if scale == 0.0 {
        0.0
    } else {
        s2.reject(sigma).norm() / scale
    }
}

/// Second vertical Newton tensor for `sigma` in `H_1`:
/// `phi -> phi^(4) - eps_1^v phi^(2) + eps_2^v phi + (eps_1^v - |sigma1|^2) <phi, sigma1> sigma1`.
///
/// The closed form relies on `sigma^(2) = |sigma^(1)|^2 sigma`; other inputs
/// are rejected.
pub fn vertical_newton_2(md: &MilnorData, sigma: &FrameVector) -> Result<SquareMatrix> {
    sigma.require_unit()?;
    let res = h1_residual(md, sigma);
    if res > tol::PREDICATE_REL {
        return Err(Error::Precondition(format!(
            "second vertical Newton tensor needs an eigenvector of M^2 (residual {res:e})"
        )));
    }
    let s1 = milnor_iterate(md, sigma, 1);
    let e1 = grad_norm_sq(md, sigma);
    let e2 = wedge_norm_sq(md, sigma);
    let c = e1 - s1.norm_sq();
    Ok(SquareMatrix::from_fn(3, |i, j| {
        let m2 = md.mu[j].powi(2);
        let diag = if i == j { m2 * m2 - e1 * m2 + e2 } else { 0.0 };
        diag + c * s1[i] * s1[j]
    }))
}

/// Divergence of an invariant (1,1)-tensor, `sum_i mu_i e_i x T(e_i)`.
pub fn divergence_invariant_tensor(md: &MilnorData, t: &SquareMatrix) -> FrameVector {
    assert_eq!(t.dim(), 3, "invariant tensors on a 3-dimensional algebra");
    (0..3)
        .map(|i| {
            let col = t.column(i);
            FrameVector::basis(i).cross(&FrameVector([col[0], col[1], col[2]])) * md.mu[i]
        })
        .sum()
}

/// Closed form `div nu_1^v(sigma) = sigma^(2) x sigma^(1)`.
pub fn divergence_newton_1(md: &MilnorData, sigma: &FrameVector) -> FrameVector {
    milnor_iterate(md, sigma, 2).cross(&milnor_iterate(md, sigma, 1))
}

/// Closed form `div nu_2^v(sigma) = (eps_1^v - |sigma^(1)|^2) div nu_1^v(sigma)`, valid on `H_1`.
pub fn divergence_newton_2(md: &MilnorData, sigma: &FrameVector) -> FrameVector {
    let c = grad_norm_sq(md, sigma) - milnor_iterate(md, sigma, 1).norm_sq();
    divergence_newton_1(md, sigma) * c
}

/// `T_1(sigma) = sigma^(2) - |M|^2 sigma`.
pub fn tension_t1(md: &MilnorData, sigma: &FrameVector) -> FrameVector {
    milnor_iterate(md, sigma, 2) - *sigma * md.milnor_norm_sq()
}

/// `T_2(sigma) = -(|Ric sigma|^2 sigma + Ric^2 sigma) / 4` for unit `sigma`.
pub fn tension_t2(md: &MilnorData, sigma: &FrameVector) -> Result<FrameVector> {
    sigma.require_unit()?;
    let ric = md.ricci_apply(sigma);
    let ric2 = md.ricci_apply(&ric);
    Ok((*sigma * ric.norm_sq() + ric2) * -0.25)
}

/// Vertical tension field `T_r(sigma)` of a unit field, `r = 1, 2, 3`.
/// `T_3` vanishes because the fibres of the unit tangent bundle are
/// 2-dimensional.
pub fn tension(md: &MilnorData, sigma: &FrameVector, r: usize) -> Result<FrameVector> {
    sigma.require_unit()?;
    match r {
        1 => Ok(tension_t1(md, sigma)),
        2 => tension_t2(md, sigma),
        3 => Ok(FrameVector::ZERO),
        _ => Err(Error::invalid(format!("tension degree {r} outside 1..=3"))),
    }
}

fn sphere_curve(sigma: &FrameVector, zeta: &FrameVector, t: f64) -> FrameVector {
    let v = *sigma + *zeta * t;
    v * (1.0 / v.norm())
}

/// `|d/dt (eps_r^v(sigma_t) / 2) + <T_r(sigma), zeta>|` at `t = 0`, where
/// `sigma_t = (sigma + t zeta) / |sigma + t zeta|` and the derivative is a
/// central difference with step [`tol::FD_STEP`].
pub fn first_variation_fd(
    md: &MilnorData,
    sigma: &FrameVector,
    zeta: &FrameVector,
    r: usize,
) -> Result<f64> {
    sigma.require_unit()?;
    if !(1..=2).contains(&r) {
        return Err(Error::invalid(format!(
            "first variation degree {r} outside 1..=2"
        )));
    }
    if !zeta.is_finite() || zeta.dot(sigma).abs() > tol::ORTHOGONALITY * zeta.norm().max(1.0) {
        return Err(Error::invalid(
            "variation field must be finite and orthogonal to sigma",
        ));
    }
    let h = tol::FD_STEP;
    let energy =
        |t: f64| 0.5 * vertical_energy(md, &sphere_curve(sigma, zeta, t), r).unwrap_or(f64::NAN);
    let fd = (energy(h) - energy(-h)) / (2.0 * h);
    Ok((fd + tension(md, sigma, r)?.dot(zeta)).abs())
}

/// Full Newton tensor `nu_{r-1}(sigma)` of `sigma` as a map into the unit
/// tangent bundle: `I`, `nu_1^v + 2I`, `nu_2^v + nu_1^v + I`.
pub(crate) fn full_newton(md: &MilnorData, sigma: &FrameVector, r: usize) -> Result<SquareMatrix> {
    match r {
        1 => Ok(SquareMatrix::identity(3)),
        2 => Ok(vertical_newton_1(md, sigma)?.shifted(2.0)),
        3 => {
            let n2 = vertical_newton_2(md, sigma)?;
            Ok((&n2 + &vertical_newton_1(md, sigma)?).shifted(1.0))
        }
        _ => Err(Error::invalid(format!(
            "horizontal tension degree {r} outside 1..=3"
        ))),
    }
}

/// Horizontal component `d pi o tau_r(sigma) = div nu + sum_i R(sigma, eta(e_i)) e_i`
/// with `eta(e_i) = nabla_{nu e_i} sigma` and `nu` the full Newton tensor.
/// For `r = 3`, `sigma` must lie in `H_1`.
pub fn horizontal_tension(md: &MilnorData, sigma: &FrameVector, r: usize) -> Result<FrameVector> {
    horizontal_tension_terms(md, sigma, r).map(|(h, _)| h)
}

/// Horizontal tension together with the sum of the norms of the terms it
/// is assembled from, the scale against which cancellation is judged.
pub(crate) fn horizontal_tension_terms(
    md: &MilnorData,
    sigma: &FrameVector,
    r: usize,
) -> Result<(FrameVector, f64)> {
    sigma.require_unit()?;
    let nu = full_newton(md, sigma, r)?;
    let mut out = divergence_invariant_tensor(md, &nu);
    let mut magnitude = out.norm();
    for i in 0..3 {
        let col = nu.column(i);
        let eta = covariant_derivative(md, &FrameVector([col[0], col[1], col[2]]), sigma);
        let term = curvature(md, sigma, &eta, &FrameVector::basis(i));
        magnitude += term.norm();
        out += term;
    }
    Ok((out, magnitude))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie3::structure::{classify_algebra, StructureConstants};

    fn md(l: [f64; 3]) -> MilnorData {
        classify_algebra(&StructureConstants::new(l).unwrap())
    }

    fn close(a: &FrameVector, b: &FrameVector, eps: f64) -> bool {
        (*a - *b).max_abs() <= eps
    }

    #[test]
    fn iterates() {
        let d = md([2.0, 1.0, -1.0]);
        let v = FrameVector::new(1.0, 1.0, 1.0);
        assert_eq!(milnor_iterate(&d, &v, 0), v);
        assert_eq!(milnor_iterate(&d, &v, 2), FrameVector::new(1.0, 0.0, 4.0));
        let round = md([1.0, 1.0, 1.0]);
        assert_eq!(
            milnor_iterate(&round, &FrameVector::basis(0), 2),
            FrameVector::new(0.25, 0.0, 0.0)
        );
    }

    #[test]
    fn connection_examples() {
        let d = md([2.0, 1.0, -1.0]);
        let e = FrameVector::basis;
        assert_eq!(
            covariant_derivative(&d, &e(0), &e(1)),
            FrameVector::new(0.0, 0.0, -1.0)
        );
        for i in 0..3 {
            assert_eq!(covariant_derivative(&d, &e(i), &e(i)), FrameVector::ZERO);
        }
        assert_eq!(grad_norm_sq(&d, &e(2)), 1.0);
        assert_eq!(grad_norm_sq(&md([1.0, 1.0, 0.0]), &e(2)), 0.0);
    }

    #[test]
    fn wedge_round_sphere() {
        let d = md([1.0, 1.0, 1.0]);
        assert!((wedge_norm_sq(&d, &FrameVector::basis(0)) - 1.0 / 16.0).abs() < 1e-16);
    }

    #[test]
    fn second_covariant_on_frame() {
        let d = md([3.0, 1.0, -1.0]);
        let sigma = FrameVector::new(0.3, -0.5, 0.2);
        for i in 0..3 {
            let e = FrameVector::basis(i);
            let m2 = d.mu[i].powi(2);
            let expect = e * (m2 * sigma[i]) - sigma * m2;
            assert!(close(&second_covariant(&d, &e, &e, &sigma), &expect, 1e-14));
        }
        let trace: FrameVector = (0..3)
            .map(|i| second_covariant(&d, &FrameVector::basis(i), &FrameVector::basis(i), &sigma))
            .sum();
        assert!(close(&trace, &tension_t1(&d, &sigma), 1e-13));
        let flat = md([0.0, 0.0, 0.0]);
        assert_eq!(
            second_covariant(&flat, &sigma, &sigma, &sigma),
            FrameVector::ZERO
        );
    }

    #[test]
    fn riemann_examples() {
        let round = md([1.0, 1.0, 1.0]);
        let e = FrameVector::basis;
        assert_eq!(riemann_action(&round, 0, 1, &e(1)), e(0) * 0.25);
        assert_eq!(riemann_action(&round, 0, 1, &e(2)), FrameVector::ZERO);
        assert_eq!(riemann_action(&round, 1, 1, &e(1)), FrameVector::ZERO);
        let flat = md([1.0, 1.0, 0.0]);
        let s = FrameVector::new(0.2, 0.3, 0.4);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(riemann_action(&flat, i, j, &s), FrameVector::ZERO);
            }
        }
    }

    #[test]
    fn newton_1_examples() {
        let round = md([1.0, 1.0, 1.0]);
        let n = vertical_newton_1(&round, &FrameVector::basis(0)).unwrap();
        assert!((n[(0, 0)] - 0.5).abs() < 1e-15);
        assert!(vertical_newton_1(&round, &FrameVector::new(1.0, 1.0, 0.0)).is_err());
        let abelian = md([0.0, 0.0, 0.0]);
        assert_eq!(
            vertical_newton_1(&abelian, &FrameVector::basis(1))
                .unwrap()
                .max_abs(),
            0.0
        );
    }

    #[test]
    fn divergence_sl2_example() {
        let d = md([2.0, 1.0, -1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sigma = FrameVector::new(h, 0.0, h);
        let div = divergence_newton_1(&d, &sigma);
        assert!(close(&div, &FrameVector::new(0.0, -3.0, 0.0), 1e-14));
        let nu = vertical_newton_1(&d, &sigma).unwrap();
        assert!(close(&divergence_invariant_tensor(&d, &nu), &div, 1e-14));
        let id = SquareMatrix::identity(3).scaled(2.5);
        assert_eq!(divergence_invariant_tensor(&d, &id), FrameVector::ZERO);
    }

    #[test]
    fn newton_2_refuses_off_h1() {
        let d = md([3.0, 1.0, -1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(matches!(
            vertical_newton_2(&d, &FrameVector::new(h, h, 0.0)),
            Err(Error::Precondition(_))
        ));
        assert!(vertical_newton_2(&d, &FrameVector::basis(2)).is_ok());
    }

    #[test]
    fn tension_examples() {
        let round = md([1.0, 1.0, 1.0]);
        let e1 = FrameVector::basis(0);
        assert!(close(&tension_t1(&round, &e1), &(e1 * -0.5), 1e-15));
        assert!(close(
            &tension_t2(&round, &e1).unwrap(),
            &(e1 * -0.125),
            1e-15
        ));
        let flat = md([1.0, 1.0, 0.0]);
        assert_eq!(tension_t1(&flat, &FrameVector::basis(2)), FrameVector::ZERO);
        let sl2 = md([2.0, 1.0, -1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let t = tension_t1(&sl2, &FrameVector::new(h, 0.0, h));
        assert!(close(&t, &FrameVector::new(-4.0 * h, 0.0, -h), 1e-14));
        assert_eq!(tension(&round, &e1, 3).unwrap(), FrameVector::ZERO);
    }

    #[test]
    fn first_variation_examples() {
        let round = md([1.0, 1.0, 1.0]);
        let e = FrameVector::basis;
        assert!(first_variation_fd(&round, &e(0), &e(1), 1).unwrap() < 1e-9);
        assert_eq!(
            first_variation_fd(&round, &e(0), &FrameVector::ZERO, 2).unwrap(),
            0.0
        );
        assert!(first_variation_fd(&round, &e(0), &e(0), 1).is_err());
    }

    #[test]
    fn horizontal_principal_directions_vanish() {
        for l in [
            [3.0, 1.0, -1.0],
            [2.0, 1.0, -1.0],
            [1.0, 0.0, -1.0],
            [4.0, 2.0, 1.0],
        ] {
            let d = md(l);
            for i in 0..3 {
                for r in 1..=3 {
                    let t = horizontal_tension(&d, &FrameVector::basis(i), r).unwrap();
                    assert!(t.max_abs() < 1e-13, "{l:?} e{i} r={r}: {t:?}");
                }
            }
        }
    }

    #[test]
    fn horizontal_on_subalgebra() {
        // e11 with lambda_2 = 0: span(e_1, e_3) is a subalgebra.
        let d = md([1.0, 0.0, -1.0]);
        let (c, s) = (0.6_f64, 0.8_f64);
        let sigma = FrameVector::new(s, 0.0, c);
        let t1 = horizontal_tension(&d, &sigma, 1).unwrap();
        let expect = FrameVector::basis(1) * (2.0 * d.mu[2].powi(3) * sigma[2] * sigma[0]);
        assert!(close(&t1, &expect, 1e-14), "{t1:?} vs {expect:?}");
        let t2 = horizontal_tension(&d, &sigma, 2).unwrap();
        assert!(close(&t2, &(expect * (1.0 + d.mu[1].powi(2))), 1e-14));
        assert!(horizontal_tension(&d, &sigma, 3).unwrap().max_abs() < 1e-14);
    }
}
