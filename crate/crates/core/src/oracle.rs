//! Reference computations used by the property battery and the test suites.
//!
//! Each function here reaches its answer by a different route from the
//! library operation it checks: brute-force Gram determinants instead of
//! eigenvalues or closed forms, nested connections instead of the second
//! covariant derivative formula, the connection itself instead of the
//! tabulated curvature.

use nalgebra::DMatrix;

use crate::energy::PointData;
use crate::invariants;
use crate::lie3::{
    covariant_derivative, milnor_iterate, vertical_cauchy_green, FrameVector, MilnorData,
};
use crate::matrix::SquareMatrix;
use crate::tol;

/// Columns form a `G`-orthonormal basis, by modified Gram-Schmidt on the
/// standard basis in the inner product `<x, y>_G = x^T G y`.
pub fn g_orthonormal_basis(g: &DMatrix<f64>) -> DMatrix<f64> {
    let m = g.nrows();
    let ip = |x: &DMatrix<f64>, y: &DMatrix<f64>| (x.transpose() * g * y)[(0, 0)];
    let mut cols: Vec<DMatrix<f64>> = Vec::with_capacity(m);
    for k in 0..m {
        let mut v = DMatrix::from_fn(m, 1, |i, _| if i == k { 1.0 } else { 0.0 });
        for w in &cols {
            let c = ip(&v, w);
            v -= w * c;
        }
        let n = ip(&v, &v).sqrt();
        cols.push(v / n);
    }
    DMatrix::from_fn(m, m, |i, j| cols[j][(i, 0)])
}

/// `eps_r(phi) = sum over r-subsets S of det(Gram_H(dphi(w_s), s in S))` for a
/// `G`-orthonormal basis `w`, i.e. `sum_S |dphi(w_S)|^2` on `r`-vectors.
pub fn gram_invariants(p: &PointData) -> Vec<f64> {
    let m = p.domain_dim();
    let w = g_orthonormal_basis(p.domain_metric());
    let d = p.jacobian() * w;
    let gram = d.transpose() * p.codomain_metric() * &d;
    let mut eps = vec![0.0; m + 1];
    eps[0] = 1.0;
    for mask in 1u32..(1 << m) {
        let idx: Vec<usize> = (0..m).filter(|&i| mask & (1 << i) != 0).collect();
        let sub = SquareMatrix::from_fn(idx.len(), |a, b| gram[(idx[a], idx[b])]);
        eps[idx.len()] += sub.determinant();
    }
    eps
}

fn frame_derivatives(md: &MilnorData, sigma: &FrameVector) -> [FrameVector; 3] {
    [0, 1, 2].map(|i| covariant_derivative(md, &FrameVector::basis(i), sigma))
}

/// `sum_i |nabla_{e_i} sigma|^2`.
pub fn grad_norm_sq_frame(md: &MilnorData, sigma: &FrameVector) -> f64 {
    frame_derivatives(md, sigma)
        .iter()
        .map(FrameVector::norm_sq)
        .sum()
}

/// `sum_{i<j} (|d_i|^2 |d_j|^2 - <d_i, d_j>^2)` with `d_i = nabla_{e_i} sigma`.
pub fn wedge_norm_sq_gram(md: &MilnorData, sigma: &FrameVector) -> f64 {
    let d = frame_derivatives(md, sigma);
    let mut total = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            total += d[i].norm_sq() * d[j].norm_sq() - d[i].dot(&d[j]).powi(2);
        }
    }
    total
}

/// `nabla_phi nabla_psi sigma - nabla_{nabla_phi psi} sigma` for invariant fields.
pub fn second_covariant_nested(
    md: &MilnorData,
    phi: &FrameVector,
    psi: &FrameVector,
    sigma: &FrameVector,
) -> FrameVector {
    let inner = covariant_derivative(md, psi, sigma);
    covariant_derivative(md, phi, &inner)
        - covariant_derivative(md, &covariant_derivative(md, phi, psi), sigma)
}

/// Lie bracket `[x, y] = L(x x y)`.
pub fn bracket(md: &MilnorData, x: &FrameVector, y: &FrameVector) -> FrameVector {
    x.cross(y).hadamard(md.lambda)
}

/// Torsion `nabla_x y - nabla_y x - [x, y]`; zero for the Levi-Civita connection.
pub fn torsion(md: &MilnorData, x: &FrameVector, y: &FrameVector) -> FrameVector {
    covariant_derivative(md, x, y) - covariant_derivative(md, y, x) - bracket(md, x, y)
}

/// `R(x, y) z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_{[x, y]} z`.
pub fn riemann_from_connection(
    md: &MilnorData,
    x: &FrameVector,
    y: &FrameVector,
    z: &FrameVector,
) -> FrameVector {
    let nab = |a: &FrameVector, b: &FrameVector| covariant_derivative(md, a, b);
    nab(x, &nab(y, z)) - nab(y, &nab(x, z)) - nab(&bracket(md, x, y), z)
}

/// Vertical Newton tensor `chi_r(alpha)` by the Newton recursion on the
/// vertical Cauchy-Green tensor.
pub fn vertical_newton_recursion(md: &MilnorData, sigma: &FrameVector, r: usize) -> SquareMatrix {
    invariants::newton_endomorphism(&vertical_cauchy_green(md, sigma), r)
        .expect("3x3 input is valid")
}

/// `eps_r` of the vertical Cauchy-Green tensor.
pub fn vertical_energy_from_alpha(md: &MilnorData, sigma: &FrameVector, r: usize) -> f64 {
    invariants::elementary_invariants_minors(&vertical_cauchy_green(md, sigma))
        .expect("3x3 input is valid")[r]
}

/// Divergence `sum_i nabla_{e_i}(T e_i)` of an invariant tensor, through the
/// connection.
pub fn divergence_by_connection(md: &MilnorData, t: &SquareMatrix) -> FrameVector {
    (0..3)
        .map(|i| {
            let c = t.column(i);
            covariant_derivative(md, &FrameVector::basis(i), &FrameVector([c[0], c[1], c[2]]))
        })
        .sum()
}

/// `tr_nu nabla^2 sigma + nabla_{div nu} sigma` with `nu = chi_{r-1}(alpha)`,
/// assembled from nested connections in the principal frame.
pub fn assembled_tension(md: &MilnorData, sigma: &FrameVector, r: usize) -> FrameVector {
    assert!(r >= 1, "tension degree starts at 1");
    let nu = vertical_newton_recursion(md, sigma, r - 1);
    let mut out = FrameVector::ZERO;
    for i in 0..3 {
        for j in 0..3 {
            let w = nu[(j, i)];
            if w != 0.0 {
                out += second_covariant_nested(
                    md,
                    &FrameVector::basis(i),
                    &FrameVector::basis(j),
                    sigma,
                ) * w;
            }
        }
    }
    out + covariant_derivative(md, &divergence_by_connection(md, &nu), sigma)
}

/// Central difference `(f(h) - f(-h)) / 2h` at step [`tol::FD_STEP`].
pub fn central_difference(f: impl Fn(f64) -> f64) -> f64 {
    let h = tol::FD_STEP;
    (f(h) - f(-h)) / (2.0 * h)
}

/// Horizontal tension of a unit field lying in a 2-dimensional subalgebra
/// `span(e_{k+1}, e_{k+2})` with `lambda_k = 0` (indices cyclic): the closed
/// forms `2 mu_{k+1}^3 a_{k+1} a_{k+2} e_k`, `(1 + mu_k^2)` times that, and
/// zero, for `r = 1, 2, 3`. `None` when `sigma` is not in such a subalgebra.
pub fn subalgebra_horizontal_tension(
    md: &MilnorData,
    sigma: &FrameVector,
    r: usize,
) -> Option<FrameVector> {
    let scale = md.scale();
    let k = (0..3).find(|&k| {
        md.lambda[k].abs() <= tol::DEGENERACY_REL * scale && sigma[k].abs() <= tol::MEMBERSHIP_ABS
    })?;
    let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
    let base = FrameVector::basis(k) * (2.0 * md.mu[k1].powi(3) * sigma[k1] * sigma[k2]);
    match r {
        1 => Some(base),
        2 => Some(base * (1.0 + md.mu[k].powi(2))),
        3 => Some(FrameVector::ZERO),
        _ => None,
    }
}

/// `sigma^(r)` by repeated application of the Milnor map.
pub fn iterate_by_repetition(md: &MilnorData, v: &FrameVector, r: u32) -> FrameVector {
    (0..r).fold(*v, |acc, _| milnor_iterate(md, &acc, 1))
}
