//! `abbvloc`: exact localization formulas from the command line.

#![allow(clippy::result_large_err)]

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use abbvloc::{parse_rational, Rational, DEFAULT_SAMPLES, DEFAULT_SEED};
use clap::{Args, Parser, Subcommand};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "abbvloc",
    version,
    about = "Exact localization formulas for Killing foliations"
)]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sample vectors and functionals.
    #[arg(long, global = true, env = "ABBVLOC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Number of sample vectors for independence checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct PolytopeSource {
    /// Cone JSON file.
    #[arg(long)]
    pub cone: Option<PathBuf>,
    /// Polytope JSON file: {"normals": [[...]], "reeb": [...]} in lattice coordinates.
    #[arg(long)]
    pub polytope: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SystemSource {
    /// Orbit system JSON file.
    #[arg(long)]
    pub system: Option<PathBuf>,
    /// Cone JSON file; the orbit system is derived from its vertices.
    #[arg(long)]
    pub cone: Option<PathBuf>,
    /// Weights of a deformed standard sphere.
    #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
    pub sphere: Option<List>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Volume of the deformed sphere S^{2n+1} with Reeb weights w.
    VolumeSphere {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        weights: List,
        /// Evaluate at this v instead of the first sample.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Toric Sasakian volume of a good cone, checked against the localized sum.
    VolumeToric {
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Lawrence's vertex formula for the volume of the hyperplane section.
    Lawrence {
        #[command(flatten)]
        source: PolytopeSource,
        /// Linear part of the functional; sampled when omitted.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        u: Option<List>,
        /// Constant part of the functional.
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true, default_value = "0")]
        shift: Rational,
    },
    /// Volume of the hyperplane section by triangulation.
    PolytopeVolume {
        #[command(flatten)]
        source: PolytopeSource,
    },
    /// Compares the toric volume with 2 pi^{n+1} Vol_H of the section.
    MsyCheck {
        #[arg(long)]
        cone: PathBuf,
    },
    /// Volume from an orbit system by localization.
    Localize {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Localized Duistermaat-Heckman coefficients c_0..c_order.
    Dh {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Volume of the deformed Stiefel manifold SO(5)/SO(3).
    Stiefel {
        /// Deformed Reeb vector (x, y, z).
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        w: List,
        /// Sample vector (alpha, beta, gamma).
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Volume of a deformed homogeneous Sasakian manifold from root data.
    Homogeneous {
        /// Root data JSON file.
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        roots: Option<PathBuf>,
        /// Built-in root data: stiefel-so5-so3.
        #[arg(long)]
        builtin: Option<String>,
        /// Deformed Reeb vector; defaults to the undeformed one.
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        b_prime: Option<List>,
    },
    /// Checks the elementary symmetric identity for every J with |J| = m.
    CheckW1 {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Secondary number s_1 s_J / s_{m+1} of a weighted-sphere foliation.
    ///
    /// J is a multi-index of total complex degree m = len(w) - 1.
    Secondary {
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        w: List,
        #[arg(long, value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long, value_parser = parse_list, allow_hyphen_values = true)]
        v: Option<List>,
    },
    /// Checks that the localized volume does not depend on the sample vector.
    CheckVIndependence {
        #[command(flatten)]
        source: SystemSource,
    },
}

/// A comma-separated list of rationals such as `1,-2,3/4`.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<Rational>);

impl std::ops::Deref for List {
    type Target = [Rational];

    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

fn parse_list(s: &str) -> Result<List, String> {
    s.split(',')
        .map(|part| parse_rational(part.trim()).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(List)
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s.trim()).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("{}", error_json(&err));
            ExitCode::from(2)
        }
    }
}

fn error_json(err: &CliError) -> String {
    serde_json::json!({"error": {"kind": err.kind(), "message": err.to_string()}}).to_string()
}
