//! Secondary characteristic numbers of the weighted-sphere foliations
//! `F_w` on `S^{2m+1}` and the symmetric-polynomial identity behind them.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::Vector;
use crate::localization::{localize_characteristic, OrbitSystem};
use crate::sampling::{consistent_value, SampleOutcome, SampleRng};
use crate::scalar::{PiScalar, Rational};
use crate::symmetric::{elementary_symmetric, s_multi, Multiindex};

/// The foliation of `S^{2m+1}` by orbits of `ξ_w`, `w` positive and pairwise
/// distinct so that the closed leaves are the `m + 1` coordinate circles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSphereFoliation {
    m: usize,
    w: Vec<Rational>,
}

fn check_distinct(w: &[Rational]) -> Result<()> {
    let set: BTreeSet<&Rational> = w.iter().collect();
    if set.len() != w.len() {
        return Err(Error::InvalidInput(
            "weights must be pairwise distinct".into(),
        ));
    }
    Ok(())
}

impl WeightedSphereFoliation {
    pub fn new(m: usize, w: Vec<Rational>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        if w.len() != m + 1 {
            return Err(Error::DimensionMismatch {
                context: "foliation weights",
                expected: m + 1,
                found: w.len(),
            });
        }
        if w.iter().any(|x| x <= &Rational::zero()) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        check_distinct(&w)?;
        Ok(WeightedSphereFoliation { m, w })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn weights(&self) -> &[Rational] {
        &self.w
    }

    pub fn orbit_system(&self) -> Result<OrbitSystem> {
        OrbitSystem::weighted_sphere(&self.w)
    }
}

/// `∫_{L_k} u_1 = (w_0 + ... + w_m) / w_k`.
pub fn u1_leaf_integrals(f: &WeightedSphereFoliation) -> Vec<Rational> {
    let total: Rational = f.w.iter().sum();
    f.w.iter().map(|wk| &total / wk).collect()
}

fn check_degree(m: usize, j: &Multiindex) -> Result<()> {
    if j.degree() != m {
        return Err(Error::InvalidInput(format!(
            "|J| = {} must equal the complex codimension m = {m}",
            j.degree()
        )));
    }
    Ok(())
}

/// `sum_k ∫_{L_k} u_1 · s_J(α^k(v)) / s_m(α^k(v))` by localization.
pub fn asuke_number(f: &WeightedSphereFoliation, j: &Multiindex, v: &Vector) -> Result<Rational> {
    check_degree(f.m, j)?;
    let sys = f.orbit_system()?;
    let leaves: Vec<PiScalar> = u1_leaf_integrals(f)
        .into_iter()
        .map(PiScalar::rational)
        .collect();
    let value = localize_characteristic(&sys, j, &leaves, v)?;
    debug_assert_eq!(value.pi_power(), 0);
    Ok(value.coeff().clone())
}

/// `s_1 s_J / s_{m+1}` at `w`.
pub fn asuke_closed_form(f: &WeightedSphereFoliation, j: &Multiindex) -> Result<Rational> {
    check_degree(f.m, j)?;
    let top = elementary_symmetric(f.m + 1, &f.w);
    Ok(elementary_symmetric(1, &f.w) * s_multi(j, &f.w) / top)
}

/// Samples `v` and checks [`asuke_number`] is the same at every sample.
pub fn check_asuke_v_independence(
    f: &WeightedSphereFoliation,
    j: &Multiindex,
    samples: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    check_degree(f.m, j)?;
    consistent_value(f.m + 1, samples, seed, |v| {
        asuke_number(f, j, v).map(PiScalar::rational)
    })
}

/// Both sides of
/// `sum_k s_J((w_j - w_k)_{j≠k}) prod_{j≠k} w_j / prod_{j≠k} (w_j - w_k) = s_J(w)`.
pub fn w1_identity_sides(m: usize, j: &Multiindex, w: &[Rational]) -> Result<(Rational, Rational)> {
    check_degree(m, j)?;
    if w.len() != m + 1 {
        return Err(Error::DimensionMismatch {
            context: "identity weights",
            expected: m + 1,
            found: w.len(),
        });
    }
    check_distinct(w)?;
    let mut lhs = Rational::zero();
    for (k, wk) in w.iter().enumerate() {
        let others: Vec<&Rational> = w
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, x)| x)
            .collect();
        let diffs: Vec<Rational> = others.iter().map(|x| *x - wk).collect();
        let num: Rational = others.iter().copied().product::<Rational>() * s_multi(j, &diffs);
        let den: Rational = diffs.iter().product();
        lhs += num / den;
    }
    Ok((lhs, s_multi(j, w)))
}

/// Whether the identity holds exactly for this `J` and `w`.
pub fn check_w1_identity(m: usize, j: &Multiindex, w: &[Rational]) -> Result<bool> {
    let (lhs, rhs) = w1_identity_sides(m, j, w)?;
    Ok(lhs == rhs)
}

/// Outcome of the identity over random weights for one multi-index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct W1Outcome {
    pub j: Multiindex,
    pub trials: usize,
    pub passed: usize,
}

/// Runs the identity for every `J` with `|J| = m` on `trials` seeded random
/// pairwise-distinct positive weight vectors.
pub fn check_w1_trials(m: usize, trials: usize, seed: u64) -> Result<Vec<W1Outcome>> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let mut rng = SampleRng::new(seed);
    let weights: Vec<Vec<Rational>> = (0..trials).map(|_| rng.distinct_positive(m + 1)).collect();
    Multiindex::all_of_degree(m)
        .into_iter()
        .map(|j| {
            let results = exec::map(&weights, |w| check_w1_identity(m, &j, w));
            let mut passed = 0;
            for r in results {
                if r? {
                    passed += 1;
                }
            }
            Ok(W1Outcome { j, trials, passed })
        })
        .collect()
}
