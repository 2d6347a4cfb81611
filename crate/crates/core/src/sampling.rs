//! Random inputs for the property battery, the benches and the tests.
//!
//! Everything is driven by a caller-supplied generator, so a seeded
//! generator gives reproducible samples.

use nalgebra::DMatrix;
use rand::Rng;

use crate::energy::PointData;
use crate::lie3::{AlgebraClass, FrameVector};
use crate::matrix::SquareMatrix;

/// `dim x dim` matrix with independent entries uniform in `[-1, 1]`.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SquareMatrix {
    SquareMatrix::from_fn(dim, |_, _| rng.random_range(-1.0..=1.0))
}

pub fn random_dmatrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

/// Well-conditioned symmetric positive-definite matrix `B B^T / n + I / 2`.
pub fn random_spd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let b = random_dmatrix(rng, n, n);
    let s = &b * b.transpose() / n as f64 + DMatrix::identity(n, n) * 0.5;
    (&s + s.transpose()) * 0.5
}

/// Random Jacobian with random SPD metrics.
pub fn random_point_data<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> PointData {
    let j = random_dmatrix(rng, n, m);
    PointData::from_matrices(j, random_spd(rng, m), random_spd(rng, n))
        .expect("sampled metrics are SPD")
}

fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    random_dmatrix(rng, n, n).qr().q()
}

/// Conformal point with random metrics: `J^T H J = c^2 G` for a random
/// `c` in `[0.5, 2]`, built as `J = c L_H^{-T} Q L_G^T` with `Q` orthogonal.
pub fn conformal_point_data<R: Rng + ?Sized>(rng: &mut R, m: usize) -> PointData {
    let g = random_spd(rng, m);
    let h = random_spd(rng, m);
    let lg = g.clone().cholesky().expect("SPD").l();
    let lh = h.clone().cholesky().expect("SPD").l();
    let c = rng.random_range(0.5..=2.0);
    let q = orthogonal(rng, m);
    let lh_inv_t = lh
        .transpose()
        .try_inverse()
        .expect("Cholesky factor is invertible");
    let j = lh_inv_t * q * lg.transpose() * c;
    PointData::from_matrices(j, g, h).expect("sampled metrics are SPD")
}

/// Random point whose Jacobian has the given rank (`rank <= min(m, n)`).
pub fn rank_deficient_point_data<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    rank: usize,
) -> PointData {
    assert!(rank <= m.min(n));
    let j = if rank == 0 {
        DMatrix::zeros(n, m)
    } else {
        // factors with orthonormal columns and rows keep the nonzero
        // singular values in [0.5, 2]
        let u = orthogonal(rng, n).columns(0, rank).into_owned();
        let v = orthogonal(rng, m).columns(0, rank).into_owned();
        let d = DMatrix::from_fn(rank, rank, |i, j| {
            if i == j {
                rng.random_range(0.5..=2.0)
            } else {
                0.0
            }
        });
        u * d * v.transpose()
    };
    PointData::from_matrices(j, random_spd(rng, m), random_spd(rng, n))
        .expect("sampled metrics are SPD")
}

/// Uniform point of the unit sphere (rejection from the cube).
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> FrameVector {
    loop {
        let v = FrameVector::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n2 = v.norm_sq();
        if n2 > 1e-4 && n2 <= 1.0 {
            return v * (1.0 / n2.sqrt());
        }
    }
}

/// Random vector orthogonal to the unit vector `sigma`, of norm in `(0, 1]`.
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, sigma: &FrameVector) -> FrameVector {
    loop {
        let v = random_unit(rng).reject(sigma);
        if v.norm() > 1e-3 {
            let t = v * (rng.random_range(0.1..=1.0) / v.norm());
            // one more projection keeps <t, sigma> at rounding level
            return t.reject(sigma);
        }
    }
}

pub fn random_class<R: Rng + ?Sized>(rng: &mut R) -> AlgebraClass {
    AlgebraClass::ALL[rng.random_range(0..AlgebraClass::ALL.len())]
}

fn pos<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.2..=2.0)
}

fn sorted_desc(mut l: [f64; 3]) -> [f64; 3] {
    l.sort_by(|a, b| b.total_cmp(a));
    l
}

/// Normalized structure constants of the given class. With
/// `degenerate`, one of the coincidences that change the classification
/// (equal constants, `lambda_1 = lambda_2 +- lambda_3`, `lambda_1 = -lambda_3`)
/// is imposed when the class has one.
pub fn random_lambda<R: Rng + ?Sized>(
    rng: &mut R,
    class: AlgebraClass,
    degenerate: bool,
) -> [f64; 3] {
    let choice = rng.random_range(0..4);
    match class {
        AlgebraClass::Abelian => [0.0; 3],
        AlgebraClass::Nil => [pos(rng), 0.0, 0.0],
        AlgebraClass::E2 => {
            let (a, b) = (pos(rng), pos(rng));
            if degenerate {
                [a, a, 0.0]
            } else {
                let [x, y, _] = sorted_desc([a, b, 0.0]);
                [x, y, 0.0]
            }
        }
        AlgebraClass::E11 => {
            let (a, b) = (pos(rng), pos(rng));
            if degenerate {
                [a, 0.0, -a]
            } else {
                [a, 0.0, -b]
            }
        }
        AlgebraClass::Sl2 => {
            let (a, b, c) = (pos(rng), pos(rng), pos(rng));
            if !degenerate {
                let [x, y, _] = sorted_desc([a, b, 0.0]);
                return [x, y, -c];
            }
            match choice % 2 {
                0 => [a, a, -c],
                _ => [b + c, b, -c],
            }
        }
        AlgebraClass::Su2 => {
            let (a, b, c) = (pos(rng), pos(rng), pos(rng));
            if !degenerate {
                return sorted_desc([a, b, c]);
            }
            match choice {
                0 => [a, a, a],
                1 => sorted_desc([a, b, b]),
                2 => sorted_desc([a, a, b]),
                _ => {
                    let [x, y, _] = sorted_desc([b, c, 0.0]);
                    [x + y, x, y]
                }
            }
        }
    }
}

/// Random ordering and orientation of normalized constants, as a caller
/// might supply them.
pub fn scramble<R: Rng + ?Sized>(rng: &mut R, lambda: [f64; 3]) -> [f64; 3] {
    let mut l = lambda;
    for i in (1..3).rev() {
        let j = rng.random_range(0..=i);
        l.swap(i, j);
    }
    if rng.random_bool(0.5) {
        l.map(|x| -x)
    } else {
        l
    }
}
