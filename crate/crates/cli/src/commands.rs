use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use abbvloc::homogeneous::{check_homogeneous_v_independence, homogeneous_orbit_system};
use abbvloc::localization::sphere_volume_closed_form;
use abbvloc::polytope::{lawrence_volume_sampled, triangulation_volume_with_base};
use abbvloc::sampling::{consistent_value, SampleOutcome};
use abbvloc::secondary::{asuke_closed_form, check_asuke_v_independence, check_w1_trials};
use abbvloc::toric::toric_volume_at;
use abbvloc::{
    asuke_number, check_volume_v_independence, dh_series, enumerate_vertices, homogeneous_volume,
    lawrence_volume, localize_volume, msy_check, orbit_system_from_cone, stiefel_closed_form,
    stiefel_four_sum, triangulation_volume, u1_leaf_integrals, Error, GoodCone, HPolytope,
    LinearFunctional, Multiindex, OrbitSystem, PiScalar, RootData, Vector, WeightedSphereFoliation,
};

use crate::report::{NamedValue, Report};
use crate::{Cli, Command, List, PolytopeSource, SystemSource};

#[derive(Debug)]
pub enum CliError {
    Lib(Error),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Schema {
        path: PathBuf,
        message: String,
    },
    Usage(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Io { .. } => "Io",
            CliError::Schema { .. } => "SchemaViolation",
            CliError::Usage(_) => "Usage",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io { path, source } => write!(f, "cannot read {}: {source}", path.display()),
            CliError::Schema { path, message } => {
                write!(f, "invalid JSON in {}: {message}", path.display())
            }
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn load<T>(path: &Path, parse: fn(&str) -> abbvloc::Result<T>) -> Result<T> {
    let text = if path == Path::new("-") {
        io::read_to_string(io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|e| match e {
        Error::Schema(message) => CliError::Schema {
            path: path.to_path_buf(),
            message,
        },
        other => CliError::Lib(other),
    })
}

fn vector(entries: &Option<List>) -> Option<Vector> {
    entries.as_ref().map(|e| Vector::new(e.to_vec()))
}

/// Records a sampling check; inconsistency is a failed check, not an error.
fn sampled(
    report: &mut Report,
    name: &str,
    outcome: abbvloc::Result<SampleOutcome>,
) -> Result<Option<SampleOutcome>> {
    match outcome {
        Ok(out) => {
            report.check(
                name,
                true,
                format!(
                    "{} at {} samples ({} poles rejected)",
                    out.value,
                    out.samples_used.len(),
                    out.rejected_poles
                ),
            );
            Ok(Some(out))
        }
        Err(Error::InconsistentSamples {
            first,
            first_v,
            second,
            second_v,
        }) => {
            report.check(
                name,
                false,
                format!("{first} at v = {first_v} but {second} at v = {second_v}"),
            );
            Ok(None)
        }
        Err(other) => Err(other.into()),
    }
}

/// The reported value: at `v` when given, else the common sampled value.
fn pick(
    at_v: Option<abbvloc::Result<PiScalar>>,
    outcome: &Option<SampleOutcome>,
) -> Result<Option<PiScalar>> {
    match at_v {
        Some(value) => Ok(Some(value?)),
        None => Ok(outcome.as_ref().map(|o| o.value.clone())),
    }
}

fn finish(report: Report, value: Option<PiScalar>) -> Report {
    match value {
        Some(v) => report.result(&v),
        None => report,
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    let samples = cli.samples;
    match &cli.command {
        Command::VolumeSphere { weights, v } => {
            let mut report = Report::new("volume-sphere", seed);
            let sys = OrbitSystem::sphere_pattern(weights)?;
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_volume_v_independence(&sys, samples, seed),
            )?;
            let value = pick(vector(v).map(|v| localize_volume(&sys, &v)), &outcome)?;
            if let Some(value) = &value {
                report.compare(
                    "closed form 2 pi^(n+1) / (n! prod w)",
                    value,
                    &sphere_volume_closed_form(weights),
                );
            }
            Ok(finish(report, value))
        }
        Command::VolumeToric { cone, v } => {
            let cone = load(cone, GoodCone::from_json)?;
            let mut report = Report::new("volume-toric", seed);
            let orbits = enumerate_vertices(&cone)?;
            report.check(
                "goodness",
                true,
                format!("{} vertices, all unimodular", orbits.len()),
            );
            let sys = orbit_system_from_cone(&cone)?;
            let outcome = sampled(
                &mut report,
                "v-independence",
                consistent_value(cone.dim(), samples, seed, |v| {
                    toric_volume_at(&cone, &orbits, v)
                }),
            )?;
            if let Some(out) = &outcome {
                let mismatches = out
                    .samples_used
                    .iter()
                    .filter(|v| localize_volume(&sys, v).ok().as_ref() != Some(&out.value))
                    .count();
                report.check(
                    "localized sum agrees",
                    mismatches == 0,
                    format!(
                        "{} of {} samples agree",
                        out.samples_used.len() - mismatches,
                        out.samples_used.len()
                    ),
                );
            }
            let value = pick(
                vector(v).map(|v| toric_volume_at(&cone, &orbits, &v)),
                &outcome,
            )?;
            Ok(finish(report, value))
        }
        Command::Lawrence { source, u, shift } => {
            let polytope = load_polytope(source)?;
            let mut report = Report::new("lawrence", seed);
            let (f, vol) = match u {
                Some(u) => {
                    let f = LinearFunctional::new(Vector::new(u.to_vec()), shift.clone());
                    let vol = lawrence_volume(&polytope, &f)?;
                    (f, vol)
                }
                None => lawrence_volume_sampled(&polytope, seed)?,
            };
            report.check(
                "functional",
                true,
                format!("u = {}, shift = {}", f.u, f.d_shift),
            );
            let mut differing = 0;
            for k in 1..samples as u64 {
                let (_, other) = lawrence_volume_sampled(&polytope, seed.wrapping_add(k))?;
                if other != vol {
                    differing += 1;
                }
            }
            report.check(
                "independent of the functional",
                differing == 0,
                format!(
                    "{} further functionals, {differing} differ",
                    samples.saturating_sub(1)
                ),
            );
            let tri = triangulation_volume(&polytope)?;
            report.compare(
                "triangulation",
                &PiScalar::rational(vol.clone()),
                &PiScalar::rational(tri),
            );
            Ok(report.result(&PiScalar::rational(vol)))
        }
        Command::PolytopeVolume { source } => {
            let polytope = load_polytope(source)?;
            let mut report = Report::new("polytope-volume", seed);
            let vol = triangulation_volume(&polytope)?;
            let count = polytope.vertices().len();
            let mut differing = 0;
            for base in 1..count {
                if triangulation_volume_with_base(&polytope, base)? != vol {
                    differing += 1;
                }
            }
            report.check(
                "independent of the base vertex",
                differing == 0,
                format!("{count} base vertices, {differing} differ"),
            );
            if count > polytope.n() {
                let (_, lawrence) = lawrence_volume_sampled(&polytope, seed)?;
                report.compare(
                    "lawrence",
                    &PiScalar::rational(lawrence),
                    &PiScalar::rational(vol.clone()),
                );
            }
            Ok(report.result(&PiScalar::rational(vol)))
        }
        Command::MsyCheck { cone } => {
            let cone = load(cone, GoodCone::from_json)?;
            let mut report = Report::new("msy-check", seed);
            let check = msy_check(&cone, seed)?;
            report.value(NamedValue::new("lhs", &check.lhs));
            report.value(NamedValue::new("rhs", &check.rhs));
            report.value(NamedValue::rational("vol_h", &check.polytope_volume));
            report.check(
                "vol = 2 pi^(n+1) vol_h",
                check.equal,
                format!("v = {}, u = {}", check.v, check.functional.u),
            );
            Ok(report.result(&check.lhs))
        }
        Command::Localize { system, v } => {
            let sys = load(system, OrbitSystem::from_json)?;
            let mut report = Report::new("localize", seed);
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_volume_v_independence(&sys, samples, seed),
            )?;
            let value = pick(vector(v).map(|v| localize_volume(&sys, &v)), &outcome)?;
            Ok(finish(report, value))
        }
        Command::Dh { system, order, v } => {
            let sys = load(system, OrbitSystem::from_json)?;
            let mut report = Report::new("dh", seed);
            let n = sys.codim_half();
            // Only c_0..c_n are constants; higher coefficients are polynomials in v.
            let mut first_sample = None;
            for s in 0..=(*order).min(n) {
                let outcome = sampled(
                    &mut report,
                    &format!("c_{s} v-independence"),
                    consistent_value(sys.dim_t(), samples, seed, |v| {
                        Ok(dh_series(&sys, v, s)?.swap_remove(s))
                    }),
                )?;
                if first_sample.is_none() {
                    first_sample = outcome.map(|o| o.samples_used[0].clone());
                }
            }
            let at = match (vector(v), first_sample) {
                (Some(v), _) => v,
                (None, Some(v)) => v,
                (None, None) => return Ok(report),
            };
            report.check("evaluated at", true, format!("v = {at}"));
            for (s, c) in dh_series(&sys, &at, *order)?.iter().enumerate() {
                report.value(NamedValue::new(format!("c_{s}"), c));
            }
            Ok(report)
        }
        Command::Stiefel { w, v } => {
            if w.len() != 3 {
                return Err(CliError::Usage("--w needs three entries x,y,z".into()));
            }
            let rd = RootData::stiefel_so5_so3();
            let b_prime = Vector::new(w.to_vec());
            let mut report = Report::new("stiefel", seed);
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_homogeneous_v_independence(&rd, &b_prime, samples, seed),
            )?;
            let value = pick(
                vector(v).map(|v| homogeneous_volume(&rd, &b_prime, &v)),
                &outcome,
            )?;
            if let Some(value) = &value {
                report.compare(
                    "closed form",
                    value,
                    &stiefel_closed_form(&w[0], &w[1], &w[2])?,
                );
                let points: Vec<Vector> = match (vector(v), &outcome) {
                    (Some(v), _) => vec![v],
                    (None, Some(out)) => out.samples_used.clone(),
                    (None, None) => Vec::new(),
                };
                let mut agree = 0;
                let mut poles = 0;
                for p in &points {
                    match stiefel_four_sum([&w[0], &w[1], &w[2]], [&p[0], &p[1], &p[2]]) {
                        Ok(four) if &four == value => agree += 1,
                        Ok(_) => {}
                        Err(Error::PoleAtSample { .. }) => poles += 1,
                        Err(e) => return Err(e.into()),
                    }
                }
                report.check(
                    "four-summand display",
                    agree + poles == points.len() && agree > 0,
                    format!("{agree} agree, {poles} at poles of the display"),
                );
            }
            Ok(finish(report, value))
        }
        Command::Homogeneous {
            roots,
            builtin,
            b_prime,
        } => {
            let rd = match (roots, builtin.as_deref()) {
                (Some(path), _) => load(path, RootData::from_json)?,
                (None, Some("stiefel-so5-so3")) => RootData::stiefel_so5_so3(),
                (None, Some(other)) => {
                    return Err(CliError::Usage(format!(
                        "unknown builtin root data {other:?}"
                    )))
                }
                (None, None) => {
                    return Err(CliError::Usage("--roots or --builtin is required".into()))
                }
            };
            let b_prime = vector(b_prime).unwrap_or_else(|| rd.b().clone());
            let mut report = Report::new("homogeneous", seed);
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_homogeneous_v_independence(&rd, &b_prime, samples, seed),
            )?;
            if let Some(out) = &outcome {
                let sys = homogeneous_orbit_system(&rd, &b_prime)?;
                let mismatches = out
                    .samples_used
                    .iter()
                    .filter(|v| localize_volume(&sys, v).ok().as_ref() != Some(&out.value))
                    .count();
                report.check(
                    "localized sum agrees",
                    mismatches == 0,
                    format!(
                        "{} of {} samples agree",
                        out.samples_used.len() - mismatches,
                        out.samples_used.len()
                    ),
                );
            }
            let value = outcome.map(|o| o.value);
            Ok(finish(report, value))
        }
        Command::CheckW1 { m, trials } => {
            let mut report = Report::new("check-w1", seed);
            for outcome in check_w1_trials(*m, *trials, seed)? {
                report.check(
                    format!("J = {}", outcome.j),
                    outcome.passed == outcome.trials,
                    format!("{}/{} trials", outcome.passed, outcome.trials),
                );
            }
            Ok(report)
        }
        Command::Secondary { w, j, v } => {
            if w.len() < 2 {
                return Err(CliError::Usage("--w needs at least two weights".into()));
            }
            let f = WeightedSphereFoliation::new(w.len() - 1, w.to_vec())?;
            let j = Multiindex::new(j.clone())?;
            let mut report = Report::new("secondary", seed);
            for (k, u) in u1_leaf_integrals(&f).iter().enumerate() {
                report.value(NamedValue::rational(format!("u1 on L_{k}"), u));
            }
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_asuke_v_independence(&f, &j, samples, seed),
            )?;
            let value = pick(
                vector(v).map(|v| asuke_number(&f, &j, &v).map(PiScalar::rational)),
                &outcome,
            )?;
            if let Some(value) = &value {
                report.compare(
                    "s_1 s_J / s_(m+1)",
                    value,
                    &PiScalar::rational(asuke_closed_form(&f, &j)?),
                );
            }
            Ok(finish(report, value))
        }
        Command::CheckVIndependence { source } => {
            let sys = load_system(source)?;
            let mut report = Report::new("check-v-independence", seed);
            let outcome = sampled(
                &mut report,
                "v-independence",
                check_volume_v_independence(&sys, samples, seed),
            )?;
            Ok(finish(report, outcome.map(|o| o.value)))
        }
    }
}

fn load_polytope(source: &PolytopeSource) -> Result<HPolytope> {
    match (&source.cone, &source.polytope) {
        (Some(path), _) => Ok(HPolytope::from_cone(&load(path, GoodCone::from_json)?)?),
        (None, Some(path)) => load(path, HPolytope::from_json),
        (None, None) => Err(CliError::Usage("--cone or --polytope is required".into())),
    }
}

fn load_system(source: &SystemSource) -> Result<OrbitSystem> {
    match (&source.system, &source.cone, &source.sphere) {
        (Some(path), _, _) => load(path, OrbitSystem::from_json),
        (None, Some(path), _) => Ok(orbit_system_from_cone(&load(path, GoodCone::from_json)?)?),
        (None, None, Some(w)) => Ok(OrbitSystem::sphere_pattern(w)?),
        _ => Err(CliError::Usage(
            "--system, --cone or --sphere is required".into(),
        )),
    }
}
