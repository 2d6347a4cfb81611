use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Coefficients `(a_1, a_2, a_3)` of an invariant vector field in the
/// principal frame.
#[derive(Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrameVector(pub [f64; 3]);

impl FrameVector {
    pub const ZERO: FrameVector = FrameVector([0.0; 3]);

    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        FrameVector([a1, a2, a3])
    }

    /// Unit vector along the `i`-th principal direction (0-based).
    pub fn basis(i: usize) -> Self {
        let mut a = [0.0; 3];
        a[i] = 1.0;
        FrameVector(a)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &FrameVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(&self, other: &FrameVector) -> FrameVector {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = other.0;
        FrameVector([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= tol::UNIT_NORM
    }

    /// `self / |self|`; errors on a zero or non-finite vector.
    pub fn normalized(&self) -> Result<FrameVector> {
        let n = self.norm();
        if !self.is_finite() || n == 0.0 {
            return Err(Error::invalid(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(*self * (1.0 / n))
    }

    /// Componentwise product.
    pub fn hadamard(&self, d: [f64; 3]) -> FrameVector {
        FrameVector([self.0[0] * d[0], self.0[1] * d[1], self.0[2] * d[2]])
    }

    /// Component of `self` orthogonal to the unit vector `unit`.
    pub fn reject(&self, unit: &FrameVector) -> FrameVector {
        *self - *unit * self.dot(unit)
    }

    pub(crate) fn require_unit(&self) -> Result<()> {
        if self.is_finite() && self.is_unit() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "expected a unit vector, |sigma| = {}",
                self.norm()
            )))
        }
    }
}

impl Index<usize> for FrameVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for FrameVector {
    type Output = FrameVector;
    fn add(self, rhs: FrameVector) -> FrameVector {
        FrameVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl AddAssign for FrameVector {
    fn add_assign(&mut self, rhs: FrameVector) {
        *self = *self + rhs;
    }
}

impl Sub for FrameVector {
    type Output = FrameVector;
    fn sub(self, rhs: FrameVector) -> FrameVector {
        FrameVector([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for FrameVector {
    type Output = FrameVector;
    fn neg(self) -> FrameVector {
        self * -1.0
    }
}

impl Mul<f64> for FrameVector {
    type Output = FrameVector;
    fn mul(self, c: f64) -> FrameVector {
        FrameVector([self.0[0] * c, self.0[1] * c, self.0[2] * c])
    }
}

impl std::iter::Sum for FrameVector {
    fn sum<I: Iterator<Item = FrameVector>>(iter: I) -> FrameVector {
        iter.fold(FrameVector::ZERO, |a, b| a + b)
    }
}

impl fmt::Debug for FrameVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}
