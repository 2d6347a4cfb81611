//! Pointwise higher-power energy densities of a map `phi: (M, g) -> (N, h)`.
//!
//! At a point the data are the differential `J` (an `n x m` matrix in chosen
//! frames), the domain metric `G` and the codomain metric `H`. The
//! Cauchy-Green tensor is `alpha = G^{-1} J^T H J`, self-adjoint with respect
//! to `G`; its elementary invariants are the densities `eps_r(phi)`, with
//! `eps_m = v(phi)^2` the squared volume density.

use nalgebra::{Cholesky, DMatrix, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{self, binomial, InvariantVector};
use crate::matrix::{SquareMatrix, MAX_DIM};
use crate::tol;

/// Largest codomain dimension accepted.
pub const MAX_CODOMAIN_DIM: usize = 64;

/// Differential and metrics of a map at one point.
#[derive(Clone, Debug)]
pub struct PointData {
    jacobian: DMatrix<f64>,
    domain_metric: DMatrix<f64>,
    codomain_metric: DMatrix<f64>,
    domain_chol: Cholesky<f64, Dyn>,
}

fn to_dmatrix(rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Err(Error::invalid(format!("{what} is empty")));
    }
    let ncols = rows[0].len();
    if ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::invalid(format!(
            "{what} rows have inconsistent lengths"
        )));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::invalid(format!("{what} has non-finite entries")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn check_metric(m: &DMatrix<f64>, what: &str) -> Result<Cholesky<f64, Dyn>> {
    if !m.is_square() {
        return Err(Error::InvalidMetric(format!("{what} is not square")));
    }
    let scale = m.amax().max(1.0);
    let n = m.nrows();
    for i in 0..n {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > tol::SYMMETRY * scale {
                return Err(Error::InvalidMetric(format!("{what} is not symmetric")));
            }
        }
    }
    Cholesky::new(m.clone())
        .ok_or_else(|| Error::InvalidMetric(format!("{what} is not positive-definite")))
}

fn to_square(m: &DMatrix<f64>) -> SquareMatrix {
    SquareMatrix::from_fn(m.nrows(), |i, j| m[(i, j)])
}

impl PointData {
    /// `jacobian` is `n x m`, `domain_metric` is `m x m`, `codomain_metric`
    /// is `n x n`; both metrics must be symmetric positive-definite.
    pub fn new(
        jacobian: &[Vec<f64>],
        domain_metric: &[Vec<f64>],
        codomain_metric: &[Vec<f64>],
    ) -> Result<Self> {
        let j = to_dmatrix(jacobian, "Jacobian")?;
        let g = to_dmatrix(domain_metric, "domain metric")?;
        let h = to_dmatrix(codomain_metric, "codomain metric")?;
        Self::from_matrices(j, g, h)
    }

    /// Point data with Euclidean metrics on both sides.
    pub fn euclidean(jacobian: &[Vec<f64>]) -> Result<Self> {
        let j = to_dmatrix(jacobian, "Jacobian")?;
        let (n, m) = j.shape();
        Self::from_matrices(j, DMatrix::identity(m, m), DMatrix::identity(n, n))
    }

    pub fn from_matrices(j: DMatrix<f64>, g: DMatrix<f64>, h: DMatrix<f64>) -> Result<Self> {
        let (n, m) = j.shape();
        if m == 0 || m > MAX_DIM {
            return Err(Error::invalid(format!(
                "domain dimension {m} outside 1..={MAX_DIM}"
            )));
        }
        if n == 0 || n > MAX_CODOMAIN_DIM {
            return Err(Error::invalid(format!(
                "codomain dimension {n} outside 1..={MAX_CODOMAIN_DIM}"
            )));
        }
        if j.iter()
            .chain(g.iter())
            .chain(h.iter())
            .any(|x| !x.is_finite())
        {
            return Err(Error::invalid("point data has non-finite entries"));
        }
        if g.shape() != (m, m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: g.nrows(),
            });
        }
        if h.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: h.nrows(),
            });
        }
        let domain_chol = check_metric(&g, "domain metric")?;
        check_metric(&h, "codomain metric")?;
        Ok(PointData {
            jacobian: j,
            domain_metric: g,
            codomain_metric: h,
            domain_chol,
        })
    }

    pub fn domain_dim(&self) -> usize {
        self.jacobian.ncols()
    }

    pub fn codomain_dim(&self) -> usize {
        self.jacobian.nrows()
    }

    pub fn jacobian(&self) -> &DMatrix<f64> {
        &self.jacobian
    }

    pub fn domain_metric(&self) -> &DMatrix<f64> {
        &self.domain_metric
    }

    pub fn codomain_metric(&self) -> &DMatrix<f64> {
        &self.codomain_metric
    }

    /// Same map and codomain, domain metric replaced by `rho^2 G`.
    pub fn with_conformal_domain(&self, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        Self::from_matrices(
            self.jacobian.clone(),
            &self.domain_metric * (rho * rho),
            self.codomain_metric.clone(),
        )
    }

    /// Same map and domain, codomain metric replaced by `c^2 H`.
    pub fn with_scaled_codomain(&self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c != 0.0) {
            return Err(Error::invalid("codomain scale must be finite and non-zero"));
        }
        Self::from_matrices(
            self.jacobian.clone(),
            self.domain_metric.clone(),
            &self.codomain_metric * (c * c),
        )
    }

    /// Pull-back `J^T H J`.
    fn pullback(&self) -> DMatrix<f64> {
        let p = self.jacobian.transpose() * &self.codomain_metric * &self.jacobian;
        (&p + p.transpose()) * 0.5
    }

    /// Eigenvalues of `alpha` (the `rho_i^2`), in descending order, from a
    /// Cholesky whitening of `G` followed by a symmetric eigensolve.
    pub fn principal_stretches_sq(&self) -> Vec<f64> {
        let l = self.domain_chol.l();
        let p = self.pullback();
        let x = l
            .solve_lower_triangular(&p)
            .expect("Cholesky factor is invertible");
        let c = l
            .solve_lower_triangular(&x.transpose())
            .expect("Cholesky factor is invertible");
        let c = (&c + c.transpose()) * 0.5;
        let mut eig: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        eig
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "conformal factor must be positive, got {rho}"
        )))
    }
}

/// The Cauchy-Green tensor `alpha = G^{-1} J^T H J`.
pub fn cauchy_green(p: &PointData) -> SquareMatrix {
    let alpha = p.domain_chol.solve(&p.pullback());
    to_square(&alpha)
}

/// Pointwise energy densities of a map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityReport {
    pub alpha: Vec<Vec<f64>>,
    pub eps: InvariantVector,
    pub volume_density: f64,
    pub newton: Vec<Vec<Vec<f64>>>,
}

pub fn density_report(p: &PointData) -> Result<DensityReport> {
    let alpha = cauchy_green(p);
    let eps = invariants::elementary_invariants_newton(&alpha)?;
    let newton = invariants::newton_endomorphisms(&alpha)?;
    // the product of clamped eigenvalues stays at rounding level near rank
    // deficiency, where eps_m from the recursion does not
    let volume_density = p
        .principal_stretches_sq()
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .product();
    Ok(DensityReport {
        alpha: alpha.rows(),
        eps,
        volume_density,
        newton: newton.iter().map(SquareMatrix::rows).collect(),
    })
}

/// Number of eigenvalues of `alpha` above `tol * (largest eigenvalue)`.
pub fn rank(p: &PointData, tol: f64) -> usize {
    let eig = p.principal_stretches_sq();
    let top = eig.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    eig.iter().filter(|&&x| x > tol * top).count()
}

/// Pointwise `r`-conformality: either all eigenvalues of `alpha` coincide
/// (relative spread at most `tol`), or fewer than `r` of them exceed
/// `tol` relative to the largest.
pub fn r_conformal_check(p: &PointData, r: usize, tol: f64) -> Result<bool> {
    let m = p.domain_dim();
    if r == 0 || r > m {
        return Err(Error::invalid(format!("order r = {r} outside 1..={m}")));
    }
    let eig = p.principal_stretches_sq();
    let max = eig[0];
    let min = eig[m - 1];
    if max - min <= tol * max.abs() {
        return Ok(true);
    }
    Ok(rank(p, tol) < r)
}

/// Conformal rescaling `G -> rho^2 G` multiplies `eps_r` by `rho^{-2r}`.
/// Returns `|eps_r(rho^2 G) rho^{2r} - eps_r(G)|` divided by `eps_r(G)`
/// (absolute when `eps_r(G) = 0`). When `m = 2r` this is the residual of
/// the invariance of the energy integrand `eps_r vol(g)`.
pub fn conformal_scaling_residual(p: &PointData, rho: f64, r: usize) -> Result<f64> {
    check_rho(rho)?;
    let m = p.domain_dim();
    if r == 0 || r > m {
        return Err(Error::invalid(format!("order r = {r} outside 1..={m}")));
    }
    let base = invariants::elementary_invariants_newton(&cauchy_green(p))?[r];
    let scaled =
        invariants::elementary_invariants_newton(&cauchy_green(&p.with_conformal_domain(rho)?))?[r];
    let diff = (scaled * rho.powi(2 * r as i32) - base).abs();
    Ok(if base.abs() > 0.0 {
        diff / base.abs()
    } else {
        diff
    })
}

/// `eps_r - C(m, r) v` for `m = 2r`; non-negative, zero exactly at
/// `r`-conformal points.
pub fn majorisation_gap(p: &PointData) -> Result<f64> {
    let m = p.domain_dim();
    if !m.is_multiple_of(2) {
        return Err(Error::UnsupportedDimension(format!(
            "majorisation needs an even domain dimension, got {m}"
        )));
    }
    let r = m / 2;
    let report = density_report(p)?;
    Ok(report.eps[r] - binomial(m, r) * report.volume_density)
}
