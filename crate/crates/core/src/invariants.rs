//! Elementary invariants, Newton polynomials and Newton endomorphisms of a
//! linear endomorphism.
//!
//! For an `m x m` matrix `A` the characteristic polynomial is
//! `det(A - t I) = sum_k (-1)^k eps_{m-k}(A) t^k`. The `r`-th Newton
//! endomorphism is `chi_r(A) = sum_k (-1)^k eps_{r-k}(A) A^k`, equivalently
//! `chi_0 = I`, `chi_r = eps_r I - A chi_{r-1}`, and `chi_m(A) = 0` by
//! Cayley-Hamilton.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// `(eps_0, eps_1, ..., eps_m)` with `eps_0 = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvariantVector(Vec<f64>);

impl InvariantVector {
    pub(crate) fn from_values(values: Vec<f64>) -> Self {
        debug_assert_eq!(values.first(), Some(&1.0));
        InvariantVector(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Dimension `m` of the underlying space.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, r: usize) -> Option<f64> {
        self.0.get(r).copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Index<usize> for InvariantVector {
    type Output = f64;
    fn index(&self, r: usize) -> &f64 {
        &self.0[r]
    }
}

/// Binomial coefficient as a float; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Brute-force route: `eps_r` is the sum of all principal `r x r` minors.
pub fn elementary_invariants_minors(a: &SquareMatrix) -> Result<InvariantVector> {
    a.validate()?;
    let m = a.dim();
    let mut values = vec![0.0; m + 1];
    values[0] = 1.0;
    let mut indices = Vec::with_capacity(m);
    for mask in 1u32..(1u32 << m) {
        indices.clear();
        indices.extend((0..m).filter(|i| mask & (1 << i) != 0));
        values[indices.len()] += a.principal_submatrix(&indices).determinant();
    }
    Ok(InvariantVector::from_values(values))
}

/// Newton-Girard route: `r eps_r = sum_{k=1..r} (-1)^(k-1) eps_{r-k} tr(A^k)`.
pub fn elementary_invariants_newton(a: &SquareMatrix) -> Result<InvariantVector> {
    a.validate()?;
    let m = a.dim();
    let power_traces = power_traces(a);
    let mut values = vec![0.0; m + 1];
    values[0] = 1.0;
    for r in 1..=m {
        let mut acc = 0.0;
        for k in 1..=r {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * values[r - k] * power_traces[k];
        }
        values[r] = acc / r as f64;
    }
    Ok(InvariantVector::from_values(values))
}

/// `tr(A^k)` for `k = 0..=m`, powers built by repeated multiplication.
fn power_traces(a: &SquareMatrix) -> Vec<f64> {
    let m = a.dim();
    let mut traces = Vec::with_capacity(m + 1);
    traces.push(m as f64);
    let mut power = a.clone();
    for k in 1..=m {
        traces.push(power.trace());
        if k < m {
            power = &power * a;
        }
    }
    traces
}

/// `chi_0(A), ..., chi_m(A)` by the recursion `chi_r = eps_r I - A chi_{r-1}`.
pub fn newton_endomorphisms(a: &SquareMatrix) -> Result<Vec<SquareMatrix>> {
    let eps = elementary_invariants_newton(a)?;
    Ok(newton_from_invariants(a, &eps))
}

pub(crate) fn newton_from_invariants(a: &SquareMatrix, eps: &InvariantVector) -> Vec<SquareMatrix> {
    let m = a.dim();
    let mut out = Vec::with_capacity(m + 1);
    out.push(SquareMatrix::identity(m));
    for r in 1..=m {
        let next = (a * &out[r - 1]).scaled(-1.0).shifted(eps[r]);
        out.push(next);
    }
    out
}

/// `chi_r(A)` for a single `r` in `0..=m`.
pub fn newton_endomorphism(a: &SquareMatrix, r: usize) -> Result<SquareMatrix> {
    if r > a.dim() {
        return Err(Error::invalid(format!(
            "Newton index {r} exceeds dimension {}",
            a.dim()
        )));
    }
    Ok(newton_endomorphisms(a)?.swap_remove(r))
}

/// `max |chi_m(A)|` divided by the largest entry magnitude among the
/// recursion intermediates `A chi_{r-1}`, `eps_r I`.
pub fn cayley_hamilton_residual(a: &SquareMatrix) -> Result<f64> {
    let eps = elementary_invariants_newton(a)?;
    let chis = newton_from_invariants(a, &eps);
    let m = a.dim();
    let mut scale = a.max_abs().max(f64::MIN_POSITIVE);
    for r in 1..=m {
        scale = scale.max((a * &chis[r - 1]).max_abs()).max(eps[r].abs());
    }
    Ok(chis[m].max_abs() / scale)
}

/// Residual of `tr(A chi_{r-1}(A)) = r eps_r(A)`, relative to
/// `max(|r eps_r|, |A|_F^r)`.
pub fn trace_identity_residual(a: &SquareMatrix, r: usize) -> Result<f64> {
    check_order(a, r)?;
    let eps = elementary_invariants_newton(a)?;
    let chis = newton_from_invariants(a, &eps);
    let lhs = (a * &chis[r - 1]).trace();
    let rhs = r as f64 * eps[r];
    let floor = a.frobenius_norm().powi(r as i32);
    Ok(crate::tol::rel_residual(lhs, rhs, floor))
}

fn check_order(a: &SquareMatrix, r: usize) -> Result<()> {
    if r == 0 || r > a.dim() {
        Err(Error::invalid(format!(
            "order r = {r} outside 1..={}",
            a.dim()
        )))
    } else {
        Ok(())
    }
}

/// Residual of the shift identities
///
/// * `eps_r(I + A) = sum_{k=0..r} C(m-k, r-k) eps_k(A)`
/// * `chi_r(I + A) = sum_{k=0..r} C(m-k-1, r-k) chi_k(A)`   (`r < m`)
///
/// where `chi_r(I + A)` means the Newton endomorphism of `I + A` evaluated
/// at `I + A`. For `r = m` both sides of the second identity vanish by
/// Cayley-Hamilton and only `chi_m(I + A)` is compared against zero.
///
/// Returned value is the larger of the two residuals, each divided by
/// `max(1, magnitude of the left-hand side)`.
pub fn check_shift_identity(a: &SquareMatrix, r: usize) -> Result<f64> {
    check_order(a, r)?;
    let m = a.dim();
    let shifted = a.shifted(1.0);
    let eps_a = elementary_invariants_newton(a)?;
    let eps_s = elementary_invariants_newton(&shifted)?;
    let chi_a = newton_from_invariants(a, &eps_a);
    let chi_s = newton_from_invariants(&shifted, &eps_s);

    let rhs: f64 = (0..=r).map(|k| binomial(m - k, r - k) * eps_a[k]).sum();
    let eps_res = (eps_s[r] - rhs).abs() / eps_s[r].abs().max(1.0);

    let mut chi_rhs = SquareMatrix::zeros(m);
    if r < m {
        for (k, c) in chi_a.iter().enumerate().take(r + 1) {
            chi_rhs = &chi_rhs + &c.scaled(binomial(m - k - 1, r - k));
        }
    }
    let chi_scale = chi_s[r].max_abs().max(chi_rhs.max_abs()).max(1.0);
    let chi_res = chi_s[r].max_abs_diff(&chi_rhs) / chi_scale;
    Ok(eps_res.max(chi_res))
}

/// Residual of the homogeneity identity `chi_{cA,r}(cA) = c^r chi_{A,r}(A)`,
/// relative to the larger side (floored at `|c|^r |A|_F^r`).
pub fn check_scaling_identity(a: &SquareMatrix, r: usize, c: f64) -> Result<f64> {
    check_order(a, r)?;
    if !c.is_finite() {
        return Err(Error::invalid("scaling factor must be finite"));
    }
    let lhs = newton_endomorphism(&a.scaled(c), r)?;
    let rhs = newton_endomorphism(a, r)?.scaled(c.powi(r as i32));
    let scale = lhs
        .max_abs()
        .max(rhs.max_abs())
        .max((c.abs() * a.frobenius_norm()).powi(r as i32))
        .max(f64::MIN_POSITIVE);
    Ok(lhs.max_abs_diff(&rhs) / scale)
}

/// `d/dt eps_r(A + tB)` at `t = 0`, exactly: `tr(B chi_{r-1}(A))`.
pub fn invariant_derivative(a: &SquareMatrix, b: &SquareMatrix, r: usize) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    b.validate()?;
    check_order(a, r)?;
    let chi = newton_endomorphism(a, r - 1)?;
    Ok((b * &chi).trace())
}
