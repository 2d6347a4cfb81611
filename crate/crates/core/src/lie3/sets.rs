use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::frame::FrameVector;
use super::structure::{classify_algebra, others, MilnorData, StructureConstants};
use crate::tol;

/// Symbolic subset of the unit sphere of the Lie algebra.
///
/// Indices are 1-based, matching the usual names: `PolarPair(k)` is
/// `{+e_k, -e_k}`, `Circle(i, j)` is the unit circle in `span(e_i, e_j)`,
/// `PolarSet` is the union of the three polar pairs. Values returned by this
/// module are canonical: unions are flattened, redundant members dropped and
/// members listed circles first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawDescriptor", try_from = "RawDescriptor")]
pub enum SubsetDescriptor {
    Empty,
    Sphere,
    PolarSet,
    PolarPair(u8),
    Circle(u8, u8),
    Union(Vec<SubsetDescriptor>),
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Parts {
    sphere: bool,
    // circles[k]: the circle orthogonal to e_{k+1}
    circles: [bool; 3],
    pairs: [bool; 3],
}

impl Parts {
    fn or(self, other: Parts) -> Parts {
        Parts {
            sphere: self.sphere || other.sphere,
            circles: [0, 1, 2].map(|k| self.circles[k] || other.circles[k]),
            pairs: [0, 1, 2].map(|k| self.pairs[k] || other.pairs[k]),
        }
    }

    fn descriptor(mut self) -> SubsetDescriptor {
        if self.sphere {
            return SubsetDescriptor::Sphere;
        }
        for k in 0..3 {
            if self.circles[k] {
                let (i, j) = others(k);
                self.pairs[i] = false;
                self.pairs[j] = false;
            }
        }
        let mut members = Vec::new();
        // circle order C12, C13, C23
        for k in [2, 1, 0] {
            if self.circles[k] {
                let (i, j) = others(k);
                members.push(SubsetDescriptor::Circle(i as u8 + 1, j as u8 + 1));
            }
        }
        if self.pairs.iter().all(|&p| p) {
            members.push(SubsetDescriptor::PolarSet);
        } else {
            for k in 0..3 {
                if self.pairs[k] {
                    members.push(SubsetDescriptor::PolarPair(k as u8 + 1));
                }
            }
        }
        match members.len() {
            0 => SubsetDescriptor::Empty,
            1 => members.pop().unwrap(),
            _ => SubsetDescriptor::Union(members),
        }
    }
}

impl SubsetDescriptor {
    fn parts(&self) -> Parts {
        let mut p = Parts::default();
        match self {
            SubsetDescriptor::Empty => {}
            SubsetDescriptor::Sphere => p.sphere = true,
            SubsetDescriptor::PolarSet => p.pairs = [true; 3],
            SubsetDescriptor::PolarPair(k) => p.pairs[*k as usize - 1] = true,
            SubsetDescriptor::Circle(i, j) => p.circles[6 - (*i + *j) as usize - 1] = true,
            SubsetDescriptor::Union(members) => {
                for m in members {
                    p = p.or(m.parts());
                }
            }
        }
        p
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            SubsetDescriptor::PolarPair(k) if !(1..=3).contains(k) => {
                Err(format!("polar pair index {k} outside 1..=3"))
            }
            SubsetDescriptor::Circle(i, j)
                if !(1..=3).contains(i) || !(1..=3).contains(j) || i >= j =>
            {
                Err(format!(
                    "circle indices ({i}, {j}) must satisfy 1 <= i < j <= 3"
                ))
            }
            SubsetDescriptor::Union(members) => {
                for (n, m) in members.iter().enumerate() {
                    m.validate()?;
                    if members[..n].contains(m) {
                        return Err("union members must be distinct".into());
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Circle through `e_i` and `e_j` from 0-based indices.
    pub(crate) fn circle0(i: usize, j: usize) -> Self {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        SubsetDescriptor::Circle(a as u8 + 1, b as u8 + 1)
    }

    /// Polar pair from a 0-based index.
    pub(crate) fn pair0(k: usize) -> Self {
        SubsetDescriptor::PolarPair(k as u8 + 1)
    }

    /// Canonical form of the same subset.
    pub fn canonical(&self) -> SubsetDescriptor {
        self.parts().descriptor()
    }

    pub fn union(&self, other: &SubsetDescriptor) -> SubsetDescriptor {
        self.parts().or(other.parts()).descriptor()
    }

    /// Whether two descriptors name the same subset.
    pub fn same_set(&self, other: &SubsetDescriptor) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn is_empty(&self) -> bool {
        self.canonical() == SubsetDescriptor::Empty
    }

    /// Whether the unit vector `v` lies in the subset, testing the vanishing
    /// coefficients with absolute tolerance `tol`.
    pub fn contains(&self, v: &FrameVector, tol: f64) -> bool {
        let p = self.parts();
        if p.sphere {
            return true;
        }
        (0..3).any(|k| p.circles[k] && v[k].abs() <= tol)
            || (0..3).any(|k| {
                let (i, j) = others(k);
                p.pairs[k] && v[i].abs() <= tol && v[j].abs() <= tol
            })
    }

    /// Random point of the subset: uniform on each piece, pieces chosen
    /// uniformly. `None` for the empty set.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<FrameVector> {
        let p = self.canonical().parts();
        if p.sphere {
            return Some(crate::sampling::random_unit(rng));
        }
        let mut pieces: Vec<(bool, usize)> = Vec::new();
        for k in 0..3 {
            if p.circles[k] {
                pieces.push((true, k));
            }
            if p.pairs[k] {
                pieces.push((false, k));
            }
        }
        if pieces.is_empty() {
            return None;
        }
        let (circle, k) = pieces[rng.random_range(0..pieces.len())];
        let mut a = [0.0; 3];
        if circle {
            let (i, j) = others(k);
            let t = rng.random_range(0.0..std::f64::consts::TAU);
            a[i] = t.cos();
            a[j] = t.sin();
        } else {
            a[k] = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        }
        Some(FrameVector(a))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SubsetDescriptor::Empty => "Empty",
            SubsetDescriptor::Sphere => "Sphere",
            SubsetDescriptor::PolarSet => "PolarSet",
            SubsetDescriptor::PolarPair(_) => "PolarPair",
            SubsetDescriptor::Circle(..) => "Circle",
            SubsetDescriptor::Union(_) => "Union",
        }
    }

    pub fn indices(&self) -> Vec<u8> {
        match self {
            SubsetDescriptor::PolarPair(k) => vec![*k],
            SubsetDescriptor::Circle(i, j) => vec![*i, *j],
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for SubsetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsetDescriptor::Empty => f.write_str("Empty"),
            SubsetDescriptor::Sphere => f.write_str("Sphere"),
            SubsetDescriptor::PolarSet => f.write_str("PolarSet"),
            SubsetDescriptor::PolarPair(k) => write!(f, "PolarPair({k})"),
            SubsetDescriptor::Circle(i, j) => write!(f, "Circle({i},{j})"),
            SubsetDescriptor::Union(members) => {
                for (n, m) in members.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" u ")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawDescriptor {
    kind: String,
    #[serde(default)]
    indices: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    members: Option<Vec<RawDescriptor>>,
}

impl From<SubsetDescriptor> for RawDescriptor {
    fn from(d: SubsetDescriptor) -> Self {
        let members = match &d {
            SubsetDescriptor::Union(ms) => {
                Some(ms.iter().cloned().map(RawDescriptor::from).collect())
            }
            _ => None,
        };
        RawDescriptor {
            kind: d.kind().to_string(),
            indices: d.indices(),
            members,
        }
    }
}

impl TryFrom<RawDescriptor> for SubsetDescriptor {
    type Error = String;

    fn try_from(raw: RawDescriptor) -> Result<Self, String> {
        let idx = |n: usize| -> Result<Vec<u8>, String> {
            if raw.indices.len() == n {
                Ok(raw.indices.clone())
            } else {
                Err(format!(
                    "{} expects {n} indices, found {}",
                    raw.kind,
                    raw.indices.len()
                ))
            }
        };
        let d = match raw.kind.as_str() {
            "Empty" => SubsetDescriptor::Empty,
            "Sphere" => SubsetDescriptor::Sphere,
            "PolarSet" => SubsetDescriptor::PolarSet,
            "PolarPair" => SubsetDescriptor::PolarPair(idx(1)?[0]),
            "Circle" => {
                let v = idx(2)?;
                SubsetDescriptor::Circle(v[0], v[1])
            }
            "Union" => {
                let members = raw.members.ok_or("Union without members")?;
                SubsetDescriptor::Union(
                    members
                        .into_iter()
                        .map(SubsetDescriptor::try_from)
                        .collect::<Result<_, _>>()?,
                )
            }
            other => return Err(format!("unknown subset kind {other:?}")),
        };
        d.validate()?;
        Ok(d)
    }
}

/// The sets `H_r` (invariant r-harmonic unit fields) and `Z_r` (r-parallel
/// unit fields) for `r = 1, 2, 3`, in the principal frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetClassification {
    #[serde(rename = "H1")]
    pub h1: SubsetDescriptor,
    #[serde(rename = "H2")]
    pub h2: SubsetDescriptor,
    #[serde(rename = "H3")]
    pub h3: SubsetDescriptor,
    #[serde(rename = "Z1")]
    pub z1: SubsetDescriptor,
    #[serde(rename = "Z2")]
    pub z2: SubsetDescriptor,
    #[serde(rename = "Z3")]
    pub z3: SubsetDescriptor,
}

impl SetClassification {
    /// `H_r` for `r = 1, 2, 3`.
    pub fn harmonic(&self, r: usize) -> &SubsetDescriptor {
        match r {
            1 => &self.h1,
            2 => &self.h2,
            3 => &self.h3,
            _ => panic!("degree {r} outside 1..=3"),
        }
    }

    /// `Z_r` for `r = 1, 2, 3`.
    pub fn parallel(&self, r: usize) -> &SubsetDescriptor {
        match r {
            1 => &self.z1,
            2 => &self.z2,
            3 => &self.z3,
            _ => panic!("degree {r} outside 1..=3"),
        }
    }
}

/// Unit eigenvectors of a diagonal map, given which eigenvalue pairs
/// coincide.
fn eigenvector_set(equal: impl Fn(usize, usize) -> bool) -> SubsetDescriptor {
    let coincident: Vec<usize> = (0..3)
        .filter(|&k| {
            let (i, j) = others(k);
            equal(i, j)
        })
        .collect();
    match coincident.as_slice() {
        [] => SubsetDescriptor::PolarSet,
        [k] => {
            let (i, j) = others(*k);
            SubsetDescriptor::Union(vec![
                SubsetDescriptor::circle0(i, j),
                SubsetDescriptor::pair0(*k),
            ])
            .canonical()
        }
        _ => SubsetDescriptor::Sphere,
    }
}

/// `H_r` and `Z_r` for the given structure constants.
///
/// `H_1` is the set of unit eigenvectors of `M^2` and `H_2` that of `Ric^2`; coincidences of `|mu_i|` and `|rho_i|` are decided
/// with relative tolerance [`tol::DEGENERACY_REL`]. `Z_1` consists of the
/// unit fields killed by every `mu_i e_i x .`, `Z_2` is the unit sphere of
/// `ker Ric`, and `H_3 = Z_3` is the whole sphere.
pub fn classify_sets(sc: &StructureConstants) -> SetClassification {
    classify_milnor_sets(&classify_algebra(sc))
}

pub(crate) fn classify_milnor_sets(md: &MilnorData) -> SetClassification {
    let scale = md.scale();
    let mu_abs = md.mu.map(f64::abs);
    let h1 = eigenvector_set(|i, j| {
        (md.mu_is_zero(i) && md.mu_is_zero(j))
            || (mu_abs[i] - mu_abs[j]).abs() <= tol::DEGENERACY_REL * scale
    });

    let rho_abs = md.ricci.map(f64::abs);
    let rho_scale = rho_abs.iter().fold(0.0_f64, |m, &x| m.max(x));
    let ric2 = eigenvector_set(|i, j| {
        let (zi, zj) = (md.ricci_is_zero(i), md.ricci_is_zero(j));
        if zi || zj {
            zi && zj
        } else {
            (rho_abs[i] - rho_abs[j]).abs() <= tol::DEGENERACY_REL * rho_scale
        }
    });

    let zero_mu: Vec<usize> = (0..3).filter(|&i| md.mu_is_zero(i)).collect();
    let z1 = match zero_mu.len() {
        3 => SubsetDescriptor::Sphere,
        2 => SubsetDescriptor::pair0(3 - zero_mu[0] - zero_mu[1]),
        _ => SubsetDescriptor::Empty,
    };

    let ker: Vec<usize> = (0..3).filter(|&i| md.ricci_is_zero(i)).collect();
    let z2 = match ker.len() {
        3 => SubsetDescriptor::Sphere,
        2 => SubsetDescriptor::circle0(ker[0], ker[1]),
        0 => SubsetDescriptor::Empty,
        _ => unreachable!("Ricci kernel of dimension one"),
    };

    SetClassification {
        h2: ric2,
        h1,
        h3: SubsetDescriptor::Sphere,
        z1,
        z2,
        z3: SubsetDescriptor::Sphere,
    }
}
