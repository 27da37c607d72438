//! Seeded random sample points and the "same value at every sample" check.
//!
//! Localized sums are rational functions of the sample vector `v` that
//! collapse to a constant. Rather than doing rational-function arithmetic we
//! evaluate at several random rational `v`, skip the ones that hit a pole,
//! and require every surviving value to be identical.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{Covector, Vector};
use crate::scalar::{int, rat, PiScalar, Rational};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 10;
/// Pole draws tolerated before giving up.
pub const POLE_BUDGET: usize = 100;

/// Entries for random sample vectors: ±1, ±2, ±3, ±5, ±7, ±1/2, ±1/3.
pub fn sample_pool() -> Vec<Rational> {
    let base = [int(1), int(2), int(3), int(5), int(7), rat(1, 2), rat(1, 3)];
    base.iter().flat_map(|x| [x.clone(), -x.clone()]).collect()
}

/// Deterministic generator of rational samples.
pub struct SampleRng {
    rng: SplitMix64,
    pool: Vec<Rational>,
}

impl SampleRng {
    pub fn new(seed: u64) -> Self {
        SampleRng {
            rng: SplitMix64::seed_from_u64(seed),
            pool: sample_pool(),
        }
    }

    pub fn pool_entry(&mut self) -> Rational {
        let i = self.rng.random_range(0..self.pool.len());
        self.pool[i].clone()
    }

    pub fn vector(&mut self, dim: usize) -> Vector {
        Vector::new((0..dim).map(|_| self.pool_entry()).collect())
    }

    pub fn covector(&mut self, dim: usize) -> Covector {
        Covector::new((0..dim).map(|_| self.pool_entry()).collect())
    }

    /// A positive rational `p/q` with `1 <= p <= 24`, `1 <= q <= 6`.
    pub fn positive_rational(&mut self) -> Rational {
        let p = self.rng.random_range(1..=24);
        let q = self.rng.random_range(1..=6);
        rat(p, q)
    }

    /// A nonzero rational `p/q` with `|p| <= 24`, `1 <= q <= 6`.
    pub fn nonzero_rational(&mut self) -> Rational {
        let x = self.positive_rational();
        if self.rng.random_bool(0.5) {
            -x
        } else {
            x
        }
    }

    /// `count` pairwise-distinct positive rationals.
    pub fn distinct_positive(&mut self, count: usize) -> Vec<Rational> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let x = self.positive_rational();
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
        out
    }
}

/// Result of a successful sampling check.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleOutcome {
    /// The common value at every accepted sample.
    pub value: PiScalar,
    pub samples_used: Vec<Vector>,
    pub rejected_poles: usize,
}

/// Evaluates `eval` at `samples` random non-pole vectors of dimension `dim`
/// and checks that all values agree exactly.
///
/// `PoleAtSample` from `eval` rejects the draw; any other error is returned.
/// Draws happen sequentially from the seeded generator, evaluation may run in
/// parallel, and results are consumed in draw order, so the outcome does not
/// depend on the thread count.
pub fn consistent_value<F>(dim: usize, samples: usize, seed: u64, eval: F) -> Result<SampleOutcome>
where
    F: Fn(&Vector) -> Result<PiScalar> + Sync + Send,
{
    if samples < 2 {
        return Err(Error::TooFewSamples {
            requested: samples,
            required: 2,
        });
    }
    let mut rng = SampleRng::new(seed);
    let mut accepted: Vec<(Vector, PiScalar)> = Vec::with_capacity(samples);
    let mut rejected = 0;
    while accepted.len() < samples {
        let batch: Vec<Vector> = (0..samples - accepted.len())
            .map(|_| rng.vector(dim))
            .collect();
        let values = exec::map(&batch, |v| eval(v));
        for (v, value) in batch.into_iter().zip(values) {
            match value {
                Ok(value) => {
                    if let Some((first_v, first)) = accepted.first() {
                        if *first != value {
                            return Err(Error::InconsistentSamples {
                                first: first.clone(),
                                first_v: first_v.clone(),
                                second: value,
                                second_v: v,
                            });
                        }
                    }
                    accepted.push((v, value));
                }
                Err(Error::PoleAtSample { .. }) => {
                    rejected += 1;
                    if rejected >= POLE_BUDGET {
                        return Err(Error::AllSamplesPoles { draws: rejected });
                    }
                }
                Err(other) => return Err(other),
            }
        }
    }
    let value = accepted[0].1.clone();
    Ok(SampleOutcome {
        value,
        samples_used: accepted.into_iter().map(|(v, _)| v).collect(),
        rejected_poles: rejected,
    })
}

/// First non-pole value of `eval` over seeded random vectors.
pub fn first_regular<T, F>(dim: usize, seed: u64, eval: F) -> Result<(Vector, T)>
where
    F: Fn(&Vector) -> Result<T>,
{
    let mut rng = SampleRng::new(seed);
    for _ in 0..POLE_BUDGET {
        let v = rng.vector(dim);
        match eval(&v) {
            Ok(value) => return Ok((v, value)),
            Err(Error::PoleAtSample { .. }) | Err(Error::EdgeConstantFunctional { .. }) => {}
            Err(other) => return Err(other),
        }
    }
    Err(Error::AllSamplesPoles { draws: POLE_BUDGET })
}
