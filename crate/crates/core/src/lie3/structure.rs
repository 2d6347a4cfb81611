use std::fmt;

use serde::{Deserialize, Serialize};

use super::frame::FrameVector;
use crate::error::{Error, Result};
use crate::tol;

/// Principal structure constants `lambda_1 >= lambda_2 >= lambda_3` with no
/// fewer positive than negative entries.
///
/// Construction normalizes arbitrary input by a signed permutation of the
/// frame: sorting, plus an orientation reversal (`lambda -> -lambda`) when
/// negatives outnumber positives. The same signed permutation maps frame
/// coefficients between the caller's frame and the principal frame, see
/// [`StructureConstants::to_principal`].
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    lambda: [f64; 3],
    raw: [f64; 3],
    // principal index i is caller index perm[i], scaled by signs[i]
    perm: [usize; 3],
    signs: [f64; 3],
    reversed: bool,
}

fn is_zero(x: f64, scale: f64) -> bool {
    x.abs() <= tol::DEGENERACY_REL * scale
}

fn permutation_sign(p: &[usize; 3]) -> f64 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl StructureConstants {
    pub fn new(raw: [f64; 3]) -> Result<Self> {
        if raw.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("structure constants must be finite"));
        }
        let scale = raw.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let pos = raw
            .iter()
            .filter(|&&x| x > 0.0 && !is_zero(x, scale))
            .count();
        let neg = raw
            .iter()
            .filter(|&&x| x < 0.0 && !is_zero(x, scale))
            .count();
        let reversed = neg > pos;
        let flip = if reversed { -1.0 } else { 1.0 };
        let oriented = raw.map(|x| flip * x);

        let mut perm = [0, 1, 2];
        perm.sort_by(|&a, &b| oriented[b].total_cmp(&oriented[a]));
        let lambda = perm.map(|i| oriented[i]);
        // frame e'_i = s_i e_{perm(i)} has constants det(Q) * lambda_{perm(i)};
        // pick s so that det(Q) equals the orientation flip.
        let signs = [1.0, 1.0, flip * permutation_sign(&perm)];
        Ok(StructureConstants {
            lambda,
            raw,
            perm,
            signs,
            reversed,
        })
    }

    /// Normalized constants.
    pub fn lambda(&self) -> [f64; 3] {
        self.lambda
    }

    /// Constants as supplied.
    pub fn raw(&self) -> [f64; 3] {
        self.raw
    }

    /// Whether normalization reversed the orientation.
    pub fn orientation_reversed(&self) -> bool {
        self.reversed
    }

    /// Coefficients in the caller's frame to coefficients in the principal frame.
    pub fn to_principal(&self, v: &FrameVector) -> FrameVector {
        FrameVector([0, 1, 2].map(|i| self.signs[i] * v[self.perm[i]]))
    }

    /// Inverse of [`Self::to_principal`].
    pub fn from_principal(&self, v: &FrameVector) -> FrameVector {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[self.perm[i]] = self.signs[i] * v[i];
        }
        FrameVector(out)
    }
}

/// The six unimodular 3-dimensional Lie algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraClass {
    Su2,
    Sl2,
    E2,
    E11,
    Nil,
    Abelian,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 6] = [
        AlgebraClass::Su2,
        AlgebraClass::Sl2,
        AlgebraClass::E2,
        AlgebraClass::E11,
        AlgebraClass::Nil,
        AlgebraClass::Abelian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AlgebraClass::Su2 => "su2",
            AlgebraClass::Sl2 => "sl2",
            AlgebraClass::E2 => "e2",
            AlgebraClass::E11 => "e11",
            AlgebraClass::Nil => "nil",
            AlgebraClass::Abelian => "abelian",
        }
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Frame quantities derived from the structure constants.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MilnorData {
    pub lambda: [f64; 3],
    /// Milnor numbers `mu_i = (l_1 + l_2 + l_3)/2 - l_i`.
    pub mu: [f64; 3],
    /// Principal Ricci curvatures `rho_i = 2 mu_j mu_k`.
    pub ricci: [f64; 3],
    /// Principal sectional curvatures `(K_23, K_13, K_12)`.
    pub sectional: [f64; 3],
    pub algebra_class: AlgebraClass,
    pub flat: bool,
    pub ricci_kernel_dim: u8,
}

/// Computes Milnor numbers, curvatures and the algebra class.
pub fn classify_algebra(sc: &StructureConstants) -> MilnorData {
    let lambda = sc.lambda();
    let scale = lambda.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let sign = |x: f64| {
        if is_zero(x, scale) {
            0
        } else if x > 0.0 {
            1
        } else {
            -1
        }
    };
    let class = match lambda.map(sign) {
        [0, 0, 0] => AlgebraClass::Abelian,
        [1, 0, 0] => AlgebraClass::Nil,
        [1, 0, -1] => AlgebraClass::E11,
        [1, 1, 0] => AlgebraClass::E2,
        [1, 1, -1] => AlgebraClass::Sl2,
        [1, 1, 1] => AlgebraClass::Su2,
        other => unreachable!("normalized constants have sign pattern {other:?}"),
    };
    MilnorData::from_frame(lambda, class)
}

impl MilnorData {
    /// Frame quantities for constants taken in the given order, without
    /// normalization.
    pub(crate) fn from_frame(lambda: [f64; 3], algebra_class: AlgebraClass) -> Self {
        let half = 0.5 * (lambda[0] + lambda[1] + lambda[2]);
        let mu = lambda.map(|l| half - l);
        let ricci = [
            2.0 * mu[1] * mu[2],
            2.0 * mu[0] * mu[2],
            2.0 * mu[0] * mu[1],
        ];
        let sectional = [
            0.5 * (ricci[1] + ricci[2] - ricci[0]),
            0.5 * (ricci[0] + ricci[2] - ricci[1]),
            0.5 * (ricci[0] + ricci[1] - ricci[2]),
        ];
        let mut md = MilnorData {
            lambda,
            mu,
            ricci,
            sectional,
            algebra_class,
            flat: false,
            ricci_kernel_dim: 0,
        };
        // rho_i vanishes iff mu_j or mu_k does, so the kernel dimension is
        // read off the vanishing Milnor numbers: 0 -> 0, 1 -> 2, 2 or 3 -> 3.
        let zero_mu = (0..3).filter(|&i| md.mu_is_zero(i)).count();
        md.ricci_kernel_dim = match zero_mu {
            0 => 0,
            1 => 2,
            _ => 3,
        };
        md.flat = md.ricci_kernel_dim == 3;
        debug_assert_ne!(md.ricci_kernel_dim, 1);
        md
    }

    /// `max |lambda_i|`, the natural length scale of the metric Lie algebra.
    pub fn scale(&self) -> f64 {
        self.lambda.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn mu_is_zero(&self, i: usize) -> bool {
        is_zero(self.mu[i], self.scale())
    }

    /// `rho_i = 0`, decided through the Milnor numbers.
    pub fn ricci_is_zero(&self, i: usize) -> bool {
        let (j, k) = others(i);
        self.mu_is_zero(j) || self.mu_is_zero(k)
    }

    /// `|M|^2 = mu_1^2 + mu_2^2 + mu_3^2`.
    pub fn milnor_norm_sq(&self) -> f64 {
        self.mu.iter().map(|m| m * m).sum()
    }

    /// `|Ric|^2 = rho_1^2 + rho_2^2 + rho_3^2`.
    pub fn ricci_norm_sq(&self) -> f64 {
        self.ricci.iter().map(|r| r * r).sum()
    }

    /// Ricci endomorphism applied to `sigma`.
    pub fn ricci_apply(&self, sigma: &FrameVector) -> FrameVector {
        sigma.hadamard(self.ricci)
    }

    /// `K(e_i, e_j)` for distinct 0-based indices.
    pub fn sectional_curvature(&self, i: usize, j: usize) -> f64 {
        assert!(
            i != j && i < 3 && j < 3,
            "sectional curvature needs distinct indices"
        );
        self.sectional[3 - i - j]
    }

    /// Lie bracket of invariant fields, `[X, Y] = L(X x Y)`.
    pub fn bracket(&self, x: &FrameVector, y: &FrameVector) -> FrameVector {
        x.cross(y).hadamard(self.lambda)
    }
}

/// The two indices other than `i`, in increasing order.
pub(crate) fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("frame index {i} out of range"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(l: [f64; 3]) -> MilnorData {
        classify_algebra(&StructureConstants::new(l).unwrap())
    }

    #[test]
    fn flat_euclidean() {
        let d = md([1.0, 1.0, 0.0]);
        assert_eq!(d.algebra_class, AlgebraClass::E2);
        assert_eq!(d.mu, [0.0, 0.0, 1.0]);
        assert_eq!(d.ricci, [0.0, 0.0, 0.0]);
        assert!(d.flat);
        assert_eq!(d.ricci_kernel_dim, 3);
    }

    #[test]
    fn heisenberg() {
        let d = md([1.0, 0.0, 0.0]);
        assert_eq!(d.algebra_class, AlgebraClass::Nil);
        assert_eq!(d.mu, [-0.5, 0.5, 0.5]);
        assert_eq!(d.ricci, [0.5, -0.5, -0.5]);
        assert!(!d.flat);
        assert_eq!(d.ricci_kernel_dim, 0);
    }

    #[test]
    fn sl2_with_degenerate_ricci() {
        let d = md([2.0, 1.0, -1.0]);
        assert_eq!(d.algebra_class, AlgebraClass::Sl2);
        assert_eq!(d.mu, [-1.0, 0.0, 2.0]);
        assert_eq!(d.ricci, [0.0, -4.0, 0.0]);
        assert_eq!(d.ricci_kernel_dim, 2);
    }

    #[test]
    fn sign_patterns() {
        assert_eq!(md([0.0, 0.0, 0.0]).algebra_class, AlgebraClass::Abelian);
        assert_eq!(md([3.0, 1.0, 2.0]).algebra_class, AlgebraClass::Su2);
        assert_eq!(md([-3.0, -1.0, -2.0]).algebra_class, AlgebraClass::Su2);
        assert_eq!(md([0.0, -1.0, 0.0]).algebra_class, AlgebraClass::Nil);
        assert_eq!(md([-1.0, 0.0, 2.0]).algebra_class, AlgebraClass::E11);
        assert_eq!(md([0.0, -1.0, -2.0]).algebra_class, AlgebraClass::E2);
        assert_eq!(md([-1.0, 1.0, -2.0]).algebra_class, AlgebraClass::Sl2);
        assert!(StructureConstants::new([f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn normalization_is_sorted_and_balanced() {
        let sc = StructureConstants::new([-1.0, 0.5, -2.0]).unwrap();
        assert!(sc.orientation_reversed());
        assert_eq!(sc.lambda(), [2.0, 1.0, -0.5]);
        let sc = StructureConstants::new([0.0, 1.0, 1.0]).unwrap();
        assert_eq!(sc.lambda(), [1.0, 1.0, 0.0]);
        assert!(!sc.orientation_reversed());
    }

    #[test]
    fn frame_map_roundtrip() {
        let sc = StructureConstants::new([-1.0, 0.5, -2.0]).unwrap();
        let v = FrameVector::new(0.1, -0.7, 0.3);
        let back = sc.from_principal(&sc.to_principal(&v));
        assert_eq!(back, v);
    }

    /// The signed permutation must carry the bracket of the caller's frame
    /// to the bracket of the principal frame.
    #[test]
    fn frame_map_preserves_brackets() {
        for raw in [
            [-1.0, 0.5, -2.0],
            [0.0, 1.0, 1.0],
            [3.0, -1.0, 2.0],
            [0.3, 0.2, 0.1],
            [-0.3, -0.2, 0.4],
            [1.0, 0.0, -2.0],
        ] {
            let sc = StructureConstants::new(raw).unwrap();
            let caller = MilnorData::from_frame(raw, AlgebraClass::Abelian);
            let principal = classify_algebra(&sc);
            let x = FrameVector::new(0.3, -1.1, 0.7);
            let y = FrameVector::new(-0.4, 0.2, 0.9);
            let lhs = sc.to_principal(&caller.bracket(&x, &y));
            let rhs = principal.bracket(&sc.to_principal(&x), &sc.to_principal(&y));
            assert!((lhs - rhs).max_abs() < 1e-15, "{raw:?}: {lhs:?} vs {rhs:?}");
        }
    }

    #[test]
    fn ricci_and_mu_identities() {
        for l in [[3.0, 1.0, -1.0], [1.7, 0.4, 0.1], [2.0, 0.0, -0.5]] {
            let d = md(l);
            for i in 0..3 {
                for j in 0..3 {
                    if i == j {
                        continue;
                    }
                    let k = 3 - i - j;
                    let lhs = d.ricci[i].powi(2) - d.ricci[j].powi(2);
                    let rhs = 4.0 * (d.mu[j].powi(2) - d.mu[i].powi(2)) * d.mu[k].powi(2);
                    assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
                    let lhs = d.mu[i].powi(2) - d.mu[j].powi(2);
                    let rhs = (d.lambda[j] - d.lambda[i]) * d.lambda[k];
                    assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
                    let sec = (d.mu[i] + d.mu[j]) * d.mu[k] - d.mu[i] * d.mu[j];
                    assert!((d.sectional_curvature(i, j) - sec).abs() < 1e-12);
                }
            }
        }
    }
}
