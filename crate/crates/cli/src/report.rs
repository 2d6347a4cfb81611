//! Report documents and their JSON / text renderings.

use std::fmt::Write as _;
use std::io;

use hpharm_core::battery::BatteryReport;
use hpharm_core::lie3::{
    check_predicates_with_coupling, classify_algebra, classify_sets, vertical_energy, AlgebraClass,
    FrameVector, PredicateResiduals, SetClassification, StructureConstants,
};
use hpharm_core::{energy, Result};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1.0";

/// Writes floats with 17 significant digits, enough to round-trip every `f64`.
struct FullPrecision;

impl serde_json::ser::Formatter for FullPrecision {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FullPrecision);
    value.serialize(&mut ser).expect("reports serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// r-harmonic section, i.e. vanishing tension (equivalently r-parallel)
    Section,
    /// r-harmonic unit section: tension normal to the sphere
    UnitSection,
    /// r-harmonic map into the unit tangent bundle
    Map,
    /// twisted 2-skyrmion, for the given coupling
    Skyrmion,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaInput {
    pub lambda: [f64; 3],
}

/// Classification of a group, with an optional evaluation at one field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub input: LambdaInput,
    /// Normalized (principal) structure constants; set indices refer to this frame.
    pub lambda: [f64; 3],
    pub orientation_reversed: bool,
    /// Principal frame vectors in terms of the input frame, e.g. `"-e2"`.
    pub frame: [String; 3],
    pub algebra_class: AlgebraClass,
    pub mu: [f64; 3],
    pub ricci: [f64; 3],
    pub sectional: [f64; 3],
    pub flat: bool,
    pub ricci_kernel_dim: u8,
    #[serde(flatten)]
    pub sets: SetClassification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check: Option<CheckBlock>,
}

/// Predicates of one unit field. Vectors are in the input frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckBlock {
    pub sigma_input: [f64; 3],
    pub sigma: [f64; 3],
    pub sigma_principal: [f64; 3],
    pub r: usize,
    pub kind: Kind,
    pub coupling: f64,
    pub holds: bool,
    pub r_parallel: bool,
    pub r_harmonic_unit: bool,
    pub m2_eigenvector: bool,
    pub ric2_eigenvector: bool,
    pub twisted_2_skyrmion: bool,
    pub principal_direction: bool,
    pub r_harmonic_map: bool,
    pub horizontal_vanishes: Option<bool>,
    pub harmonic_map_by_components: bool,
    pub vertical_energy: f64,
    pub tension: [f64; 3],
    pub horizontal_tension: Option<[f64; 3]>,
    pub residuals: PredicateResiduals,
}

fn frame_labels(sc: &StructureConstants) -> [String; 3] {
    [0, 1, 2].map(|i| {
        let v = sc.from_principal(&FrameVector::basis(i));
        let j = (0..3).find(|&j| v[j] != 0.0).expect("signed permutation");
        format!("{}e{}", if v[j] > 0.0 { '+' } else { '-' }, j + 1)
    })
}

pub fn classify(lambda: [f64; 3]) -> Result<Report> {
    let sc = StructureConstants::new(lambda)?;
    let md = classify_algebra(&sc);
    Ok(Report {
        schema_version: SCHEMA_VERSION.into(),
        input: LambdaInput { lambda },
        lambda: sc.lambda(),
        orientation_reversed: sc.orientation_reversed(),
        frame: frame_labels(&sc),
        algebra_class: md.algebra_class,
        mu: md.mu,
        ricci: md.ricci,
        sectional: md.sectional,
        flat: md.flat,
        ricci_kernel_dim: md.ricci_kernel_dim,
        sets: classify_sets(&sc),
        check: None,
    })
}

pub fn check(
    lambda: [f64; 3],
    sigma: [f64; 3],
    r: usize,
    kind: Kind,
    coupling: f64,
) -> Result<Report> {
    let mut report = classify(lambda)?;
    let sc = StructureConstants::new(lambda)?;
    let md = classify_algebra(&sc);
    let unit = FrameVector(sigma).normalized()?;
    let principal = sc.to_principal(&unit);
    let p = check_predicates_with_coupling(&md, &principal, r, coupling)?;
    let holds = match kind {
        Kind::Section => p.r_parallel,
        Kind::UnitSection => p.r_harmonic_unit,
        Kind::Map => p.r_harmonic_map,
        Kind::Skyrmion => p.twisted_2_skyrmion,
    };
    report.check = Some(CheckBlock {
        sigma_input: sigma,
        sigma: unit.0,
        sigma_principal: principal.0,
        r,
        kind,
        coupling,
        holds,
        r_parallel: p.r_parallel,
        r_harmonic_unit: p.r_harmonic_unit,
        m2_eigenvector: p.m2_eigenvector,
        ric2_eigenvector: p.ric2_eigenvector,
        twisted_2_skyrmion: p.twisted_2_skyrmion,
        principal_direction: p.principal_direction,
        r_harmonic_map: p.r_harmonic_map,
        horizontal_vanishes: p.horizontal_vanishes,
        harmonic_map_by_components: p.harmonic_map_by_components,
        vertical_energy: vertical_energy(&md, &principal, r)?,
        tension: sc.from_principal(&p.tension).0,
        horizontal_tension: p.horizontal_tension.map(|h| sc.from_principal(&h).0),
        residuals: p.residuals,
    });
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityInput {
    #[serde(rename = "J")]
    pub j: Vec<Vec<f64>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<f64>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalInvariance {
    pub rho: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub schema_version: String,
    pub input: DensityInput,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub r: usize,
    pub alpha: Vec<Vec<f64>>,
    /// `eps_0, ..., eps_m`.
    pub eps: Vec<f64>,
    pub volume_density: f64,
    pub principal_stretches_sq: Vec<f64>,
    pub rank: usize,
    pub r_conformal: bool,
    /// Present when `m = 2r`.
    pub majorisation_gap: Option<f64>,
    /// Present when `m = 2r`.
    pub conformal_invariance: Option<ConformalInvariance>,
}

pub fn density(input: DensityInput, r: Option<usize>, rho: f64) -> Result<DensityReport> {
    let p = energy::PointData::new(&input.j, &input.g, &input.h)?;
    let m = p.domain_dim();
    let r = r.unwrap_or(if m % 2 == 0 { m / 2 } else { 1 });
    let rep = energy::density_report(&p)?;
    let middle = m == 2 * r;
    Ok(DensityReport {
        schema_version: SCHEMA_VERSION.into(),
        domain_dim: m,
        codomain_dim: p.codomain_dim(),
        r,
        r_conformal: energy::r_conformal_check(&p, r, hpharm_core::tol::RANK_REL)?,
        alpha: rep.alpha,
        eps: rep.eps.into_vec(),
        volume_density: rep.volume_density,
        principal_stretches_sq: p.principal_stretches_sq(),
        rank: energy::rank(&p, hpharm_core::tol::RANK_REL),
        majorisation_gap: if middle {
            Some(energy::majorisation_gap(&p)?)
        } else {
            None
        },
        conformal_invariance: if middle {
            Some(ConformalInvariance {
                rho,
                residual: energy::conformal_scaling_residual(&p, rho, r)?,
            })
        } else {
            None
        },
        input,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyLine {
    pub name: String,
    pub passed: bool,
    pub trials: u64,
    pub failures: u64,
    pub max_residual: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema_version: String,
    pub seed: u64,
    pub trials: u64,
    pub all_passed: bool,
    pub properties: Vec<PropertyLine>,
}

impl From<&BatteryReport> for VerifyReport {
    fn from(b: &BatteryReport) -> Self {
        VerifyReport {
            schema_version: SCHEMA_VERSION.into(),
            seed: b.seed,
            trials: b.trials,
            all_passed: b.all_passed(),
            properties: b
                .outcomes
                .iter()
                .map(|o| PropertyLine {
                    name: o.name.into(),
                    passed: o.passed(),
                    trials: o.trials,
                    failures: o.failures,
                    max_residual: o.max_residual,
                    bound: o.bound,
                })
                .collect(),
        }
    }
}

// ------------------------------------------------------------ text output

fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.abs() < 1e-4 || x.abs() >= 1e8 {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.10}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn triple(v: &[f64; 3]) -> String {
    format!("({}, {}, {})", num(v[0]), num(v[1]), num(v[2]))
}

fn row(v: &[f64]) -> String {
    v.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn render_report(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "structure constants   {}", triple(&r.input.lambda));
    let _ = writeln!(
        s,
        "principal frame       {} = ({}){}",
        triple(&r.lambda),
        r.frame.join(", "),
        if r.orientation_reversed {
            ", orientation reversed"
        } else {
            ""
        }
    );
    let _ = writeln!(s, "algebra class         {}", r.algebra_class);
    let _ = writeln!(s, "milnor numbers        {}", triple(&r.mu));
    let _ = writeln!(s, "ricci curvatures      {}", triple(&r.ricci));
    let _ = writeln!(s, "sectional K23 K13 K12 {}", triple(&r.sectional));
    let _ = writeln!(s, "flat                  {}", yes(r.flat));
    let _ = writeln!(s, "ricci kernel dim      {}", r.ricci_kernel_dim);
    let sets = &r.sets;
    for (name, d) in [
        ("H1", &sets.h1),
        ("H2", &sets.h2),
        ("H3", &sets.h3),
        ("Z1", &sets.z1),
        ("Z2", &sets.z2),
        ("Z3", &sets.z3),
    ] {
        let _ = writeln!(s, "{name}                    {d}");
    }
    if let Some(c) = &r.check {
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "sigma (unit)          {}   principal frame {}",
            triple(&c.sigma),
            triple(&c.sigma_principal)
        );
        let kind = serde_json::to_value(c.kind)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "r = {}, kind = {kind}{}",
            c.r,
            if c.kind == Kind::Skyrmion {
                format!(", coupling = {}", num(c.coupling))
            } else {
                String::new()
            }
        );
        let _ = writeln!(s, "holds                 {}", yes(c.holds));
        let _ = writeln!(s, "  r-parallel                  {}", yes(c.r_parallel));
        let _ = writeln!(
            s,
            "  r-harmonic unit section     {}",
            yes(c.r_harmonic_unit)
        );
        let _ = writeln!(s, "  eigenvector of M^2 (H1)     {}", yes(c.m2_eigenvector));
        let _ = writeln!(
            s,
            "  eigenvector of Ric^2        {}",
            yes(c.ric2_eigenvector)
        );
        let _ = writeln!(
            s,
            "  twisted 2-skyrmion          {}",
            yes(c.twisted_2_skyrmion)
        );
        let _ = writeln!(
            s,
            "  principal direction         {}",
            yes(c.principal_direction)
        );
        let _ = writeln!(s, "  r-harmonic map              {}", yes(c.r_harmonic_map));
        let hv = c.horizontal_vanishes.map_or("n/a (off H1)", yes);
        let _ = writeln!(s, "  horizontal tension vanishes {hv}");
        let _ = writeln!(s, "vertical energy       {}", num(c.vertical_energy));
        let _ = writeln!(s, "tension T_r           {}", triple(&c.tension));
        match &c.horizontal_tension {
            Some(h) => {
                let _ = writeln!(s, "horizontal tension    {}", triple(h));
            }
            None => {
                let _ = writeln!(s, "horizontal tension    n/a (off H1)");
            }
        }
    }
    s
}

pub fn render_density(d: &DensityReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "dimensions            m = {}, n = {}",
        d.domain_dim, d.codomain_dim
    );
    let _ = writeln!(s, "cauchy-green alpha");
    for r in &d.alpha {
        let _ = writeln!(s, "  [{}]", row(r));
    }
    let _ = writeln!(s, "eps_0..eps_m          {}", row(&d.eps));
    let _ = writeln!(s, "volume density v      {}", num(d.volume_density));
    let _ = writeln!(
        s,
        "principal stretches^2 {}",
        row(&d.principal_stretches_sq)
    );
    let _ = writeln!(s, "rank                  {}", d.rank);
    let _ = writeln!(s, "{}-conformal           {}", d.r, yes(d.r_conformal));
    if let Some(g) = d.majorisation_gap {
        let _ = writeln!(s, "majorisation gap      {}", num(g));
    }
    if let Some(c) = &d.conformal_invariance {
        let _ = writeln!(
            s,
            "conformal invariance  residual {} at rho = {}",
            num(c.residual),
            num(c.rho)
        );
    }
    s
}
