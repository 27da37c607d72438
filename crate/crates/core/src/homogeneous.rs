//! Volumes of deformed homogeneous Sasakian manifolds `G/K`, summed over
//! Weyl coset representatives, and the Stiefel manifold `SO(5)/SO(3)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{Covector, Matrix, Vector};
use crate::localization::{factorial, OrbitDatum, OrbitSystem};
use crate::sampling::{consistent_value, SampleOutcome};
use crate::scalar::{int, rat, PiScalar, Rational, SerdeRational};

#[derive(Deserialize)]
struct RawRootData {
    dim_t: usize,
    roots: Vec<Covector>,
    weyl_reps: Vec<Vec<Vec<SerdeRational>>>,
    b: Vector,
    p: Covector,
    #[serde(default = "PiScalar::one")]
    orbit_length: PiScalar,
}

impl TryFrom<RawRootData> for RootData {
    type Error = Error;

    fn try_from(raw: RawRootData) -> Result<Self> {
        let reps = raw
            .weyl_reps
            .into_iter()
            .map(|m| {
                Matrix::from_rows(
                    m.into_iter()
                        .map(|r| r.into_iter().map(|x| x.0).collect())
                        .collect(),
                )
            })
            .collect::<Result<_>>()?;
        RootData::new(raw.dim_t, raw.roots, reps, raw.b, raw.p, raw.orbit_length)
    }
}

/// Root data of `G/K → G/H` on a maximal torus `t`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawRootData")]
pub struct RootData {
    dim_t: usize,
    roots: Vec<Covector>,
    weyl_reps: Vec<Matrix>,
    weyl_inverses: Vec<Matrix>,
    b: Vector,
    p: Covector,
    orbit_length: PiScalar,
}

impl Serialize for RootData {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dim_t: usize,
            roots: &'a [Covector],
            weyl_reps: Vec<Vec<Vec<String>>>,
            b: &'a Vector,
            p: &'a Covector,
            orbit_length: &'a PiScalar,
        }
        let reps = self
            .weyl_reps
            .iter()
            .map(|m| {
                (0..m.rows())
                    .map(|r| m.row(r).iter().map(ToString::to_string).collect())
                    .collect()
            })
            .collect();
        Repr {
            dim_t: self.dim_t,
            roots: &self.roots,
            weyl_reps: reps,
            b: &self.b,
            p: &self.p,
            orbit_length: &self.orbit_length,
        }
        .serialize(s)
    }
}

impl RootData {
    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::error::from_json::<RawRootData, Self>(text)
    }

    /// `roots` are the roots of `G` not in `H`; `weyl_reps` act on `t` and
    /// represent `W(G)/W(H)`; `p` is the projection onto `R b` along
    /// `t ∩ k`; `orbit_length` is the length of every Reeb orbit of `b`.
    pub fn new(
        dim_t: usize,
        roots: Vec<Covector>,
        weyl_reps: Vec<Matrix>,
        b: Vector,
        p: Covector,
        orbit_length: PiScalar,
    ) -> Result<Self> {
        if dim_t == 0 {
            return Err(Error::InvalidInput("dim_t must be positive".into()));
        }
        if roots.is_empty() {
            return Err(Error::InvalidInput("at least one root is required".into()));
        }
        if weyl_reps.is_empty() {
            return Err(Error::InvalidInput(
                "at least one Weyl representative is required".into(),
            ));
        }
        b.check_dim(dim_t, "Reeb vector")?;
        p.check_dim(dim_t, "projection")?;
        for r in &roots {
            r.check_dim(dim_t, "root")?;
        }
        if p.pair(&b) != int(1) {
            return Err(Error::InvalidInput(format!(
                "p(b) = {} must equal 1",
                p.pair(&b)
            )));
        }
        if orbit_length.is_zero() {
            return Err(Error::InvalidInput("orbit length must be nonzero".into()));
        }
        let mut weyl_inverses = Vec::with_capacity(weyl_reps.len());
        for (k, w) in weyl_reps.iter().enumerate() {
            if w.rows() != dim_t || w.cols() != dim_t {
                return Err(Error::DimensionMismatch {
                    context: "Weyl representative",
                    expected: dim_t,
                    found: w.rows().max(w.cols()),
                });
            }
            let inverse = w
                .inverse()
                .map_err(|_| Error::InvalidInput(format!("Weyl representative {k} is singular")))?;
            weyl_inverses.push(inverse);
        }
        Ok(RootData {
            dim_t,
            roots,
            weyl_reps,
            weyl_inverses,
            b,
            p,
            orbit_length,
        })
    }

    /// `SO(5)/SO(3)` on `t^3 = t^2 × t^1` with `b = (0, 0, 1)`.
    ///
    /// The roots are the negatives of `e_1^*, e_1^* + e_2^*, e_1^* - e_2^*`
    /// (the transverse orientation at `e SO(3)`), the Reeb orbits of `b`
    /// have length `2π`, and `p(x, y, z) = z - x`.
    pub fn stiefel_so5_so3() -> Self {
        let roots = vec![
            Covector::from_i64(&[-1, 0, 0]),
            Covector::from_i64(&[-1, -1, 0]),
            Covector::from_i64(&[-1, 1, 0]),
        ];
        let reps = [
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
            [[0, 1, 0], [1, 0, 0], [0, 0, 1]],
            [[0, -1, 0], [-1, 0, 0], [0, 0, 1]],
        ]
        .iter()
        .map(|m| Matrix::from_i64_rows(&[&m[0], &m[1], &m[2]]).expect("3x3"))
        .collect();
        RootData::new(
            3,
            roots,
            reps,
            Vector::from_i64(&[0, 0, 1]),
            Covector::from_i64(&[-1, 0, 1]),
            PiScalar::two_pi(1),
        )
        .expect("valid fixture")
    }

    pub fn dim_t(&self) -> usize {
        self.dim_t
    }

    /// `n`, the number of roots.
    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn roots(&self) -> &[Covector] {
        &self.roots
    }

    pub fn weyl_reps(&self) -> &[Matrix] {
        &self.weyl_reps
    }

    pub fn b(&self) -> &Vector {
        &self.b
    }

    pub fn p(&self) -> &Covector {
        &self.p
    }

    pub fn orbit_length(&self) -> &PiScalar {
        &self.orbit_length
    }
}

struct Coset {
    p_b: Rational,
    p_v: Rational,
    root_values: Vec<Rational>,
}

fn coset_data(rd: &RootData, index: usize, b_prime: &Vector, v: &Vector) -> Result<Coset> {
    let w_inv = &rd.weyl_inverses[index];
    let p_b = rd.p.pair(&w_inv.apply(b_prime)?);
    if p_b.is_zero() {
        return Err(Error::DegenerateReeb { index });
    }
    let p_v = rd.p.pair(&w_inv.apply(v)?);
    let lambda = &p_v / &p_b;
    let transverse = w_inv.apply(&v.sub(&b_prime.scale(&lambda)))?;
    let root_values = rd.roots.iter().map(|a| a.pair(&transverse)).collect();
    Ok(Coset {
        p_b,
        p_v,
        root_values,
    })
}

fn check_inputs(rd: &RootData, b_prime: &Vector, v: &Vector) -> Result<()> {
    b_prime.check_dim(rd.dim_t, "deformed Reeb vector")?;
    v.check_dim(rd.dim_t, "sample vector")
}

/// `ℓ_0 π^n / n! sum_w p(w^-1 v)^n / (p(w^-1 b')^{n+1} prod_α α(w^-1 (v - λ_w b')))`
/// with `λ_w = p(w^-1 v) / p(w^-1 b')`.
pub fn homogeneous_volume(rd: &RootData, b_prime: &Vector, v: &Vector) -> Result<PiScalar> {
    check_inputs(rd, b_prime, v)?;
    let n = rd.n();
    let terms = exec::map_range(rd.weyl_reps.len(), |k| -> Result<Rational> {
        let coset = coset_data(rd, k, b_prime, v)?;
        let mut denominator = num_traits::pow(coset.p_b, n + 1);
        for (i, value) in coset.root_values.iter().enumerate() {
            if value.is_zero() {
                return Err(Error::pole(v, format!("root {i} vanishes at coset {k}")));
            }
            denominator *= value;
        }
        Ok(num_traits::pow(coset.p_v, n) / denominator)
    });
    let mut sum = Rational::zero();
    for t in terms {
        sum += t?;
    }
    let prefactor = PiScalar::new(int(1) / factorial(n), n as i32);
    Ok(&(&prefactor * &rd.orbit_length) * &PiScalar::rational(sum))
}

/// The same data as an [`OrbitSystem`] for the general engine: one closed
/// orbit per coset with length `ℓ_0 / p(w^-1 b')`, moment `p ∘ w^-1 / p(w^-1 b')`
/// and weights `α ∘ w^-1 ∘ (1 - b' ⊗ moment)`.
pub fn homogeneous_orbit_system(rd: &RootData, b_prime: &Vector) -> Result<OrbitSystem> {
    b_prime.check_dim(rd.dim_t, "deformed Reeb vector")?;
    let d = rd.dim_t;
    let basis: Vec<Vector> = (0..d).map(|k| Vector::unit(d, k)).collect();
    let mut orbits = Vec::with_capacity(rd.weyl_reps.len());
    for k in 0..rd.weyl_reps.len() {
        let cosets = basis
            .iter()
            .map(|e| coset_data(rd, k, b_prime, e))
            .collect::<Result<Vec<_>>>()?;
        let p_b = cosets[0].p_b.clone();
        let moment = Covector::new(cosets.iter().map(|c| &c.p_v / &p_b).collect());
        let weights = (0..rd.n())
            .map(|i| Covector::new(cosets.iter().map(|c| c.root_values[i].clone()).collect()))
            .collect();
        let length = rd.orbit_length.scale(&(int(1) / &p_b));
        orbits.push(OrbitDatum::new(length, moment, weights));
    }
    OrbitSystem::new(d, b_prime.clone(), rd.n(), orbits)
}

/// Samples `v` and checks that [`homogeneous_volume`] does not depend on it.
pub fn check_homogeneous_v_independence(
    rd: &RootData,
    b_prime: &Vector,
    samples: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    consistent_value(rd.dim_t, samples, seed, |v| {
        homogeneous_volume(rd, b_prime, v)
    })
}

/// The four Stiefel summands written out term by term, times `-2π^4 / 3!`.
pub fn stiefel_four_sum(xyz: [&Rational; 3], abc: [&Rational; 3]) -> Result<PiScalar> {
    let [x, y, z] = xyz;
    let [alpha, beta, gamma] = abc;
    let at = || {
        Vector::new(vec![
            x.clone(),
            y.clone(),
            z.clone(),
            alpha.clone(),
            beta.clone(),
            gamma.clone(),
        ])
    };
    let quotient = |num: Rational, den: Rational| -> Result<Rational> {
        if den.is_zero() {
            Err(Error::pole(&at(), "a Stiefel denominator vanishes"))
        } else {
            Ok(num / den)
        }
    };
    let cube = |r: Rational| num_traits::pow(r, 3);
    let fourth = |r: Rational| num_traits::pow(r, 4);

    let l = quotient(alpha - gamma, z - x)?;
    let a = alpha + &l * x;
    let b = beta + &l * y;
    let t1 = quotient(
        cube(gamma - alpha),
        fourth(z - x) * &a * (&a + &b) * (&a - &b),
    )?;

    let l = quotient(alpha + gamma, x + z)?;
    let a = alpha - &l * x;
    let b = beta - &l * y;
    let t2 = quotient(
        cube(alpha + gamma),
        fourth(z + x) * &a * (&a + &b) * (&a - &b),
    )?;

    let l = quotient(gamma - beta, y - z)?;
    let a = beta + &l * y;
    let b = alpha + &l * x;
    let t3 = quotient(
        cube(gamma - beta),
        fourth(z - y) * &a * (&a + &b) * (&a - &b),
    )?;

    let l = quotient(gamma + beta, y + z)?;
    let a = beta - &l * y;
    let b = alpha - &l * x;
    let t4 = quotient(
        cube(beta + gamma),
        fourth(z + y) * &a * (&a - &b) * (&a + &b),
    )?;

    let bracket = t1 - t2 + t3 - t4;
    Ok(PiScalar::new(rat(-2, 6) * bracket, 4))
}

/// `2π^4 / (3 (z^2 - y^2)(z^2 - x^2))`.
pub fn stiefel_closed_form(x: &Rational, y: &Rational, z: &Rational) -> Result<PiScalar> {
    let den = int(3) * (z * z - y * y) * (z * z - x * x);
    if den.is_zero() {
        return Err(Error::DegenerateReeb { index: 0 });
    }
    Ok(PiScalar::new(int(2) / den, 4))
}
