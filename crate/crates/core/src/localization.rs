//! Localized sums over isolated closed leaves.
//!
//! An [`OrbitSystem`] records, for each closed leaf `L_k`, its length
//! `l_k = ∫ η`, the moment covector `φ_k` with `φ_k(v) = η(v^#)|_{L_k}`, and the
//! transverse weights `α_j^k`. Weights are stored as covectors on `t` that
//! annihilate the Reeb element `b`, so `α(v + R b)` is just `α(v)`.
//!
//! Every sum here is a rational function of the sample `v`; the geometric
//! ones are constant in `v`, which [`check_v_independence`] verifies by
//! sampling.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Covector, Vector};
use crate::sampling::{self, SampleOutcome};
use crate::scalar::{int, PiScalar, Rational};
use crate::symmetric::{elementary_symmetric, s_multi, Multiindex};

/// One isolated closed leaf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitDatum {
    pub length: PiScalar,
    pub moment: Covector,
    pub weights: Vec<Covector>,
}

impl OrbitDatum {
    pub fn new(length: PiScalar, moment: Covector, weights: Vec<Covector>) -> Self {
        OrbitDatum {
            length,
            moment,
            weights,
        }
    }

    /// `(α_1(v), ..., α_n(v))`.
    pub fn weights_at(&self, v: &Vector) -> Vec<Rational> {
        self.weights.iter().map(|a| a.pair(v)).collect()
    }

    /// `prod_j α_j(v)`, or `PoleAtSample` if a factor vanishes.
    pub fn weight_product(&self, v: &Vector) -> Result<Rational> {
        let mut prod = Rational::one();
        for (j, a) in self.weights.iter().enumerate() {
            let value = a.pair(v);
            if value.is_zero() {
                return Err(Error::pole(v, format!("weight {j} vanishes")));
            }
            prod *= value;
        }
        Ok(prod)
    }
}

#[derive(Deserialize)]
struct RawOrbitSystem {
    dim_t: usize,
    b: Vector,
    codim_half: usize,
    orbits: Vec<OrbitDatum>,
    #[serde(default)]
    weight_pi_power: i32,
}

impl TryFrom<RawOrbitSystem> for OrbitSystem {
    type Error = Error;

    fn try_from(raw: RawOrbitSystem) -> Result<Self> {
        OrbitSystem::with_weight_pi_power(
            raw.dim_t,
            raw.b,
            raw.codim_half,
            raw.orbits,
            raw.weight_pi_power,
        )
    }
}

/// Closed-leaf data of a foliation of codimension `2 * codim_half` with a
/// transverse action of `t / R b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrbitSystem")]
pub struct OrbitSystem {
    dim_t: usize,
    b: Vector,
    codim_half: usize,
    orbits: Vec<OrbitDatum>,
    /// Every weight covector stands for `weight * pi^weight_pi_power`.
    /// Toric data computed in a lattice without `2π` rescaling carries the
    /// `2π` of the weight formula here.
    weight_pi_power: i32,
}

impl OrbitSystem {
    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::error::from_json::<RawOrbitSystem, Self>(text)
    }

    pub fn new(
        dim_t: usize,
        b: Vector,
        codim_half: usize,
        orbits: Vec<OrbitDatum>,
    ) -> Result<Self> {
        Self::with_weight_pi_power(dim_t, b, codim_half, orbits, 0)
    }

    pub fn with_weight_pi_power(
        dim_t: usize,
        b: Vector,
        codim_half: usize,
        orbits: Vec<OrbitDatum>,
        weight_pi_power: i32,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidOrbitSystem(msg));
        if dim_t == 0 || codim_half == 0 {
            return invalid("dim_t and codim_half must be positive".into());
        }
        if orbits.is_empty() {
            return invalid("at least one closed leaf is required".into());
        }
        if b.dim() != dim_t {
            return invalid(format!("b has dimension {}, expected {dim_t}", b.dim()));
        }
        for (k, orbit) in orbits.iter().enumerate() {
            if orbit.weights.len() != codim_half {
                return invalid(format!(
                    "orbit {k} has {} weights, expected {codim_half}",
                    orbit.weights.len()
                ));
            }
            if orbit.moment.dim() != dim_t {
                return invalid(format!("orbit {k}: moment has wrong dimension"));
            }
            if orbit.moment.pair(&b) != Rational::one() {
                return invalid(format!(
                    "orbit {k}: moment(b) = {} != 1",
                    orbit.moment.pair(&b)
                ));
            }
            if orbit.length.is_zero() {
                return invalid(format!("orbit {k}: zero length"));
            }
            for (j, a) in orbit.weights.iter().enumerate() {
                if a.dim() != dim_t {
                    return invalid(format!("orbit {k}: weight {j} has wrong dimension"));
                }
                if a.is_zero() {
                    return invalid(format!("orbit {k}: weight {j} is identically zero"));
                }
                if !a.pair(&b).is_zero() {
                    return invalid(format!("orbit {k}: weight {j} does not annihilate b"));
                }
            }
        }
        Ok(OrbitSystem {
            dim_t,
            b,
            codim_half,
            orbits,
            weight_pi_power,
        })
    }

    pub fn dim_t(&self) -> usize {
        self.dim_t
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn codim_half(&self) -> usize {
        self.codim_half
    }

    pub fn orbits(&self) -> &[OrbitDatum] {
        &self.orbits
    }

    pub fn weight_pi_power(&self) -> i32 {
        self.weight_pi_power
    }

    /// Same system with every weight multiplied by `factor`.
    pub fn scale_weights(&self, factor: &Rational) -> Result<Self> {
        let orbits = self
            .orbits
            .iter()
            .map(|o| OrbitDatum {
                weights: o.weights.iter().map(|a| a.scale(factor)).collect(),
                ..o.clone()
            })
            .collect();
        Self::with_weight_pi_power(
            self.dim_t,
            self.b.clone(),
            self.codim_half,
            orbits,
            self.weight_pi_power,
        )
    }

    /// Keeps only the listed orbits; used to build deliberately broken inputs.
    pub fn restrict(&self, keep: &[usize]) -> Result<Self> {
        let orbits = keep.iter().map(|&k| self.orbits[k].clone()).collect();
        Self::with_weight_pi_power(
            self.dim_t,
            self.b.clone(),
            self.codim_half,
            orbits,
            self.weight_pi_power,
        )
    }

    /// The deformed standard sphere `S^{2n+1}` with Reeb element
    /// `b_w = sum w_i e_i` and closed leaves `L_i = {|z_i| = 1}`:
    /// `l_i = 2π / w_i`, `φ_i = e_i^* / w_i`, and
    /// `α^i_j = (w_j / w_i) e_i^* - e_j^*` for `j != i`.
    pub fn weighted_sphere(weights: &[Rational]) -> Result<Self> {
        check_sphere_weights(weights)?;
        Self::sphere_pattern(weights)
    }

    /// The same data without the distinctness check. With repeated weights
    /// the closed leaves are no longer isolated, but the sum is still the
    /// same rational function of `v` and evaluates to the same constant.
    pub fn sphere_pattern(weights: &[Rational]) -> Result<Self> {
        if weights.len() < 2 || weights.iter().any(|w| *w <= Rational::zero()) {
            return Err(Error::InvalidInput(
                "need at least two positive weights".into(),
            ));
        }
        let dim = weights.len();
        let orbits = (0..dim)
            .map(|i| {
                let wi = &weights[i];
                let length = PiScalar::new(int(2) / wi, 1);
                let moment = Covector::unit(dim, i).scale(&wi.recip());
                let alphas = (0..dim)
                    .filter(|&j| j != i)
                    .map(|j| {
                        Covector::unit(dim, i)
                            .scale(&(&weights[j] / wi))
                            .sub(&Covector::unit(dim, j))
                    })
                    .collect();
                OrbitDatum::new(length, moment, alphas)
            })
            .collect();
        Self::new(dim, Vector::new(weights.to_vec()), dim - 1, orbits)
    }

    /// The weight pattern `α^k_j(v) = β_k - β_j` of the round sphere, with unit
    /// lengths and `φ_k = e_k^*`, so that
    /// `sum_k φ_k(v)^m / prod α^k(v) = h_{m-n}(β)`.
    pub fn residue_pattern(n: usize) -> Result<Self> {
        let dim = n + 1;
        let b = Vector::new(vec![Rational::one(); dim]);
        let orbits = (0..dim)
            .map(|k| {
                let alphas = (0..dim)
                    .filter(|&j| j != k)
                    .map(|j| Covector::unit(dim, k).sub(&Covector::unit(dim, j)))
                    .collect();
                OrbitDatum::new(PiScalar::one(), Covector::unit(dim, k), alphas)
            })
            .collect();
        Self::new(dim, b, n, orbits)
    }
}

pub(crate) fn check_sphere_weights(weights: &[Rational]) -> Result<()> {
    if weights.len() < 2 {
        return Err(Error::InvalidInput("need at least two weights".into()));
    }
    if weights.iter().any(|w| *w <= Rational::zero()) {
        return Err(Error::InvalidInput("weights must be positive".into()));
    }
    for i in 0..weights.len() {
        for j in i + 1..weights.len() {
            if weights[i] == weights[j] {
                return Err(Error::InvalidInput(format!(
                    "weights {i} and {j} coincide; closed leaves are not isolated"
                )));
            }
        }
    }
    Ok(())
}

/// `2π^{n+1} / (n! prod w_i)`, the closed form for the deformed sphere volume.
pub fn sphere_volume_closed_form(weights: &[Rational]) -> PiScalar {
    let n = weights.len() - 1;
    let prod = weights.iter().fold(Rational::one(), |acc, w| acc * w);
    PiScalar::new(int(2) / (factorial(n) * prod), n as i32 + 1)
}

pub(crate) fn factorial(n: usize) -> Rational {
    (1..=n as i64).fold(Rational::one(), |acc, k| acc * int(k))
}

/// Per-orbit numerator `i^*_{L_k} σ` evaluated at `v`.
pub trait OrbitNumerator: Sync {
    fn eval(&self, index: usize, orbit: &OrbitDatum, v: &Vector) -> Rational;
}

impl<F> OrbitNumerator for F
where
    F: Fn(usize, &OrbitDatum, &Vector) -> Rational + Sync,
{
    fn eval(&self, index: usize, orbit: &OrbitDatum, v: &Vector) -> Rational {
        self(index, orbit, v)
    }
}

/// The numerator families that actually occur.
#[derive(Debug, Clone, PartialEq)]
pub enum Numerator {
    /// `φ_k(v)^p`.
    MomentPower(u32),
    /// A constant per leaf.
    LeafConstants(Vec<Rational>),
    /// `s_J(α_1^k(v), ..., α_n^k(v))`.
    WeightSymmetric(Multiindex),
}

impl OrbitNumerator for Numerator {
    fn eval(&self, index: usize, orbit: &OrbitDatum, v: &Vector) -> Rational {
        match self {
            Numerator::MomentPower(p) => num_traits::pow(orbit.moment.pair(v), *p as usize),
            Numerator::LeafConstants(values) => values[index].clone(),
            Numerator::WeightSymmetric(j) => s_multi(j, &orbit.weights_at(v)),
        }
    }
}

/// `(-2π)^n sum_k l_k σ_k(v) / prod_j α_j^k(v)`.
pub fn localized_sum(
    sys: &OrbitSystem,
    v: &Vector,
    numerator: &dyn OrbitNumerator,
) -> Result<PiScalar> {
    v.check_dim(sys.dim_t, "sample vector")?;
    let n = sys.codim_half as i32;
    let mut total = PiScalar::zero();
    for (k, orbit) in sys.orbits.iter().enumerate() {
        let denom = orbit.weight_product(v)?;
        let num = numerator.eval(k, orbit, v);
        let term = PiScalar::new(
            orbit.length.coeff() * num / denom,
            orbit.length.pi_power() - n * sys.weight_pi_power,
        );
        total = total.checked_add(&term)?;
    }
    let prefactor = PiScalar::new(num_traits::pow(int(-2), n as usize), n);
    Ok(&prefactor * &total)
}

/// Volume of a K-contact manifold with isolated closed Reeb orbits:
/// `(π^n / n!) sum_k l_k φ_k(v)^n / prod_j α_j^k(v)`.
///
/// Evaluated as the localized sum of `ω^n(Y) / (2^n n!)`, whose restriction to
/// a leaf is `(-φ_k(v))^n`.
pub fn localize_volume(sys: &OrbitSystem, v: &Vector) -> Result<PiScalar> {
    let n = sys.codim_half;
    let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
    let numerator = move |_: usize, orbit: &OrbitDatum, v: &Vector| {
        &sign * num_traits::pow(orbit.moment.pair(v), n)
    };
    let sum = localized_sum(sys, v, &numerator)?;
    let norm = num_traits::pow(int(2), n) * factorial(n);
    Ok(sum.scale(&norm.recip()))
}

/// Samples `samples` random non-pole `v` and requires the localized sum to be
/// identical at all of them.
pub fn check_v_independence(
    sys: &OrbitSystem,
    numerator: &dyn OrbitNumerator,
    samples: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    sampling::consistent_value(sys.dim_t, samples, seed, |v| {
        localized_sum(sys, v, numerator)
    })
}

/// Same check for [`localize_volume`].
pub fn check_volume_v_independence(
    sys: &OrbitSystem,
    samples: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    sampling::consistent_value(sys.dim_t, samples, seed, |v| localize_volume(sys, v))
}

/// Coefficients `c_0..=c_order` of the localized Duistermaat-Heckman series,
/// `c_s = π^n sum_k l_k φ_k(v)^s / (s! prod_j α_j^k(v))`.
pub fn dh_series(sys: &OrbitSystem, v: &Vector, order: usize) -> Result<Vec<PiScalar>> {
    v.check_dim(sys.dim_t, "sample vector")?;
    let n = sys.codim_half as i32;
    let mut per_orbit = Vec::with_capacity(sys.orbits.len());
    for orbit in &sys.orbits {
        let denom = orbit.weight_product(v)?;
        per_orbit.push((orbit, denom, orbit.moment.pair(v)));
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut s_factorial = Rational::one();
    for s in 0..=order {
        if s > 0 {
            s_factorial *= int(s as i64);
        }
        let mut total = PiScalar::zero();
        for (orbit, denom, phi) in &per_orbit {
            let term = PiScalar::new(
                orbit.length.coeff() * num_traits::pow(phi.clone(), s) / (denom * &s_factorial),
                orbit.length.pi_power() + n - n * sys.weight_pi_power,
            );
            total = total.checked_add(&term)?;
        }
        out.push(total);
    }
    Ok(out)
}

/// `sum_k leaf_integrals[k] * s_J(α^k(v)) / s_n(α^k(v))`.
pub fn localize_characteristic(
    sys: &OrbitSystem,
    j: &Multiindex,
    leaf_integrals: &[PiScalar],
    v: &Vector,
) -> Result<PiScalar> {
    v.check_dim(sys.dim_t, "sample vector")?;
    let n = sys.codim_half;
    if j.degree() > n {
        return Err(Error::InvalidInput(format!(
            "|J| = {} exceeds the complex codimension {n}",
            j.degree()
        )));
    }
    if leaf_integrals.len() != sys.orbits.len() {
        return Err(Error::DimensionMismatch {
            context: "leaf integrals",
            expected: sys.orbits.len(),
            found: leaf_integrals.len(),
        });
    }
    let shift = (j.degree() as i32 - n as i32) * sys.weight_pi_power;
    let mut total = PiScalar::zero();
    for (orbit, leaf) in sys.orbits.iter().zip(leaf_integrals) {
        let alphas = orbit.weights_at(v);
        let top = elementary_symmetric(n, &alphas);
        if top.is_zero() {
            return Err(Error::pole(
                v,
                "top symmetric polynomial of weights vanishes",
            ));
        }
        let ratio = s_multi(j, &alphas) / top;
        let term = PiScalar::new(leaf.coeff() * ratio, leaf.pi_power() + shift);
        total = total.checked_add(&term)?;
    }
    Ok(total)
}
