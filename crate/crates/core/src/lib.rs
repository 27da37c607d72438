//! Exact evaluation of localization formulas for Killing foliations.
//!
//! The crate computes, in exact rational arithmetic with symbolic powers of
//! pi:
//!
//! - localized sums over isolated closed leaves and the K-contact volume
//!   formula ([`localization`]),
//! - toric Sasakian volumes from a good moment cone ([`toric`]),
//! - Lawrence's vertex formula for the volume of the characteristic
//!   hyperplane section, with a triangulation cross-check ([`polytope`]),
//! - volumes of deformed homogeneous Sasakian manifolds from root data
//!   ([`homogeneous`]),
//! - secondary characteristic numbers of weighted-sphere foliations
//!   ([`secondary`]).
//!
//! Results are [`PiScalar`] values `q * pi^e`; equality checks are exact.

#![allow(clippy::result_large_err)]

pub mod error;
pub mod exec;
pub mod homogeneous;
pub mod linalg;
pub mod localization;
pub mod polytope;
pub mod sampling;
pub mod scalar;
pub mod secondary;
pub mod symmetric;
pub mod toric;

pub use error::{Error, Result};
pub use homogeneous::{homogeneous_volume, stiefel_closed_form, stiefel_four_sum, RootData};
pub use linalg::{det, rank, smith_normal_form, solve_linear, Covector, Matrix, Vector};
pub use localization::{
    check_v_independence, check_volume_v_independence, dh_series, localize_characteristic,
    localize_volume, localized_sum, Numerator, OrbitDatum, OrbitNumerator, OrbitSystem,
};
pub use polytope::{
    lawrence_volume, msy_check, omega_h, triangulation_volume, HPolytope, LinearFunctional,
    MsyCheck,
};
pub use sampling::{SampleOutcome, SampleRng, DEFAULT_SAMPLES, DEFAULT_SEED};
pub use scalar::{parse_rational, PiScalar, Rational};
pub use secondary::{asuke_number, check_w1_identity, u1_leaf_integrals, WeightedSphereFoliation};
pub use symmetric::{complete_homogeneous, elementary_symmetric, s_multi, Multiindex};
pub use toric::{enumerate_vertices, orbit_system_from_cone, toric_volume, GoodCone, ToricOrbit};
