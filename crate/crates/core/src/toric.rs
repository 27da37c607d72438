//! Toric Sasakian manifolds from good rational polyhedral cones.
//!
//! The moment cone is `Δ = {φ ∈ t* : φ(v_i) <= 0}` for primitive lattice
//! vectors `v_i`, and the closed Reeb orbits of the Reeb element `b`
//! correspond to the vertices of `Δ_1 = Δ ∩ {φ(b) = 1}`.
//!
//! Coordinates: `b` and sample vectors `v` are given in ambient coordinates
//! of `t`; normals are given in the lattice basis. The lattice basis is
//! `(2π)^s` times the columns of `lattice_basis`, where `s` is
//! `pi_scale_exponent`. With `s = 1` and the identity matrix this is the
//! standard torus whose integral lattice is spanned by `2π e_i`. All
//! determinants are taken in lattice coordinates; their `2π` factors are
//! tracked as powers of pi rather than evaluated.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{det, rank, smith_normal_form, solve_linear, Covector, Matrix, Vector};
use crate::localization::{factorial, OrbitDatum, OrbitSystem};
use crate::scalar::{int, rational_pow, PiScalar, Rational, SerdeRational};

#[derive(Deserialize)]
struct RawCone {
    dim: usize,
    lattice_basis: Vec<Vec<SerdeRational>>,
    #[serde(default = "default_pi_scale")]
    pi_scale_exponent: u32,
    normals: Vec<Vec<SerdeRational>>,
    reeb: Vector,
}

fn default_pi_scale() -> u32 {
    1
}

impl TryFrom<RawCone> for GoodCone {
    type Error = Error;

    fn try_from(raw: RawCone) -> Result<Self> {
        let basis = Matrix::from_rows(
            raw.lattice_basis
                .into_iter()
                .map(|row| row.into_iter().map(|x| x.0).collect())
                .collect(),
        )?;
        let normals = raw
            .normals
            .into_iter()
            .map(|row| Vector::new(row.into_iter().map(|x| x.0).collect()))
            .collect();
        GoodCone::new(raw.dim, basis, raw.pi_scale_exponent, normals, raw.reeb)
    }
}

#[derive(Serialize)]
struct ConeRepr<'a> {
    dim: usize,
    lattice_basis: Vec<Vec<String>>,
    pi_scale_exponent: u32,
    normals: &'a [Vector],
    reeb: &'a Vector,
}

/// Toric input data: facet normals, lattice normalization and Reeb vector.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawCone")]
pub struct GoodCone {
    dim: usize,
    lattice_basis: Matrix,
    basis_inverse: Matrix,
    pi_scale_exponent: u32,
    normals: Vec<Vector>,
    reeb: Vector,
    reeb_lattice: Vector,
}

impl Serialize for GoodCone {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let basis = (0..self.dim)
            .map(|r| {
                self.lattice_basis
                    .row(r)
                    .iter()
                    .map(|x| x.to_string())
                    .collect()
            })
            .collect();
        ConeRepr {
            dim: self.dim,
            lattice_basis: basis,
            pi_scale_exponent: self.pi_scale_exponent,
            normals: &self.normals,
            reeb: &self.reeb,
        }
        .serialize(s)
    }
}

impl GoodCone {
    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::error::from_json::<RawCone, Self>(text)
    }

    /// Validates shapes, integrality and primitivity of the normals.
    /// Goodness at the vertices is checked by [`enumerate_vertices`].
    pub fn new(
        dim: usize,
        lattice_basis: Matrix,
        pi_scale_exponent: u32,
        normals: Vec<Vector>,
        reeb: Vector,
    ) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(
                "cone dimension must be at least 2".into(),
            ));
        }
        if lattice_basis.rows() != dim || lattice_basis.cols() != dim {
            return Err(Error::DimensionMismatch {
                context: "lattice basis",
                expected: dim,
                found: lattice_basis.rows().max(lattice_basis.cols()),
            });
        }
        if pi_scale_exponent > 1 {
            return Err(Error::InvalidInput(
                "pi_scale_exponent must be 0 or 1".into(),
            ));
        }
        let basis_inverse = lattice_basis
            .inverse()
            .map_err(|_| Error::InvalidInput("lattice basis is singular".into()))?;
        if normals.len() < dim {
            return Err(Error::InvalidInput(format!(
                "need at least {dim} normals, got {}",
                normals.len()
            )));
        }
        for (i, v) in normals.iter().enumerate() {
            v.check_dim(dim, "cone normal")?;
            if v.entries().iter().any(|x| !x.is_integer()) {
                return Err(Error::InvalidInput(format!(
                    "normal {i} is not a lattice vector"
                )));
            }
            let gcd = v
                .entries()
                .iter()
                .fold(BigInt::zero(), |acc, x| acc.gcd(&x.to_integer()));
            if !gcd.is_one() {
                return Err(Error::NonPrimitiveNormal { index: i });
            }
        }
        reeb.check_dim(dim, "Reeb vector")?;
        let reeb_lattice = basis_inverse.apply(&reeb)?;
        Ok(GoodCone {
            dim,
            lattice_basis,
            basis_inverse,
            pi_scale_exponent,
            normals,
            reeb,
            reeb_lattice,
        })
    }

    /// Cone of the deformed standard sphere: lattice `2π Z^{n+1}`, normals
    /// `-e_i`, Reeb vector `w`.
    pub fn weighted_sphere(weights: &[Rational]) -> Result<Self> {
        let dim = weights.len();
        let normals = (0..dim)
            .map(|i| Vector::unit(dim, i).scale(&int(-1)))
            .collect();
        Self::new(
            dim,
            Matrix::identity(dim),
            1,
            normals,
            Vector::new(weights.to_vec()),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n`, half the transverse dimension.
    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn lattice_basis(&self) -> &Matrix {
        &self.lattice_basis
    }

    pub fn pi_scale_exponent(&self) -> u32 {
        self.pi_scale_exponent
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn reeb(&self) -> &Vector {
        &self.reeb
    }

    /// `b` in rational lattice coordinates (without the `(2π)^-s`).
    pub fn reeb_lattice(&self) -> &Vector {
        &self.reeb_lattice
    }

    /// Ambient vector in rational lattice coordinates (without the `(2π)^-s`).
    pub fn to_lattice(&self, v: &Vector) -> Result<Vector> {
        self.basis_inverse.apply(v)
    }

    /// Same cone with the normals listed in a different order.
    pub fn permute_normals(&self, order: &[usize]) -> Result<Self> {
        let normals = order.iter().map(|&i| self.normals[i].clone()).collect();
        Self::new(
            self.dim,
            self.lattice_basis.clone(),
            self.pi_scale_exponent,
            normals,
            self.reeb.clone(),
        )
    }

    /// Same cone with a different Reeb vector.
    pub fn with_reeb(&self, reeb: Vector) -> Result<Self> {
        Self::new(
            self.dim,
            self.lattice_basis.clone(),
            self.pi_scale_exponent,
            self.normals.clone(),
            reeb,
        )
    }
}

/// A closed Reeb orbit, i.e. a vertex of `Δ_1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricOrbit {
    /// `Φ(L)` in dual lattice coordinates.
    pub vertex: Covector,
    /// Indices of the `n` normals vanishing on the vertex, in the order of
    /// `ordered_normals`.
    pub facet_indices: Vec<usize>,
    pub ordered_normals: Vec<Vector>,
    /// `+1`, or `-1` when `n = 1` and the single normal gives
    /// `det(b, v) < 0`; then every determinant of this orbit is negated,
    /// which is the orientation reversal a swap would do for `n >= 2`.
    pub orientation: i8,
}

impl ToricOrbit {
    fn oriented(&self, value: Rational) -> Rational {
        if self.orientation < 0 {
            -value
        } else {
            value
        }
    }

    /// Oriented `det(first, v_1^L, ..., v_n^L)` in rational lattice coordinates.
    pub fn det_with(&self, first: &Vector) -> Result<Rational> {
        let rows = std::iter::once(first.entries())
            .chain(self.ordered_normals.iter().map(Vector::entries));
        Ok(self.oriented(det(&Matrix::from_row_slices(rows)?)?))
    }

    /// Oriented `det(b, v_1^L, ..., v_{i-1}^L, v, v_{i+1}^L, ..., v_n^L)`.
    pub fn det_replacing(&self, b: &Vector, i: usize, v: &Vector) -> Result<Rational> {
        let rows = std::iter::once(b.entries()).chain(
            self.ordered_normals.iter().enumerate().map(|(k, n)| {
                if k == i {
                    v.entries()
                } else {
                    n.entries()
                }
            }),
        );
        Ok(self.oriented(det(&Matrix::from_row_slices(rows)?)?))
    }
}

fn vertex_key(v: &Covector) -> String {
    v.to_string()
}

/// Finds all vertices of `Δ_1`, checks simplicity, boundedness and goodness,
/// and orders the normals at each vertex so that `det(b, v^L) > 0`.
/// The output is sorted by vertex covector.
pub fn enumerate_vertices(cone: &GoodCone) -> Result<Vec<ToricOrbit>> {
    let d = cone.dim;
    let n = d - 1;
    let b = &cone.reeb_lattice;

    let mut stacked = vec![b.entries().to_vec()];
    stacked.extend(cone.normals.iter().map(|v| v.entries().to_vec()));
    if rank(&Matrix::from_rows(stacked)?) < d {
        return Err(Error::UnboundedSection(
            "normals do not span the dual of ker(b); the section has a recession direction".into(),
        ));
    }

    let subsets: Vec<Vec<usize>> = (0..cone.normals.len()).combinations(n).collect();
    let candidates = exec::map(&subsets, |subset| vertex_for_subset(cone, subset));
    let mut orbits = Vec::new();
    for candidate in candidates {
        if let Some(orbit) = candidate? {
            orbits.push(orbit);
        }
    }
    if orbits.is_empty() {
        return Err(Error::UnboundedSection("no vertex found".into()));
    }
    orbits.sort_by(|a, b| a.vertex.cmp(&b.vertex));

    for orbit in &orbits {
        check_edges_bounded(cone, orbit)?;
        let rows = Matrix::from_row_slices(orbit.ordered_normals.iter().map(Vector::entries))?;
        let divisors = smith_normal_form(&rows)?;
        if !divisors.iter().all(One::is_one) {
            let mut facets = orbit.facet_indices.clone();
            facets.sort_unstable();
            return Err(Error::GoodnessViolation {
                facets,
                divisors: divisors.iter().map(ToString::to_string).collect(),
            });
        }
    }
    Ok(orbits)
}

fn vertex_for_subset(cone: &GoodCone, subset: &[usize]) -> Result<Option<ToricOrbit>> {
    let d = cone.dim;
    let b = &cone.reeb_lattice;
    let rows =
        std::iter::once(b.entries()).chain(subset.iter().map(|&i| cone.normals[i].entries()));
    let system = Matrix::from_row_slices(rows)?;
    let delta = det(&system)?;
    if delta.is_zero() {
        return Ok(None);
    }
    let vertex = Covector::new(solve_linear(&system, &Vector::unit(d, 0))?.into_entries());
    let mut active = 0;
    for (j, v) in cone.normals.iter().enumerate() {
        let value = vertex.pair(v);
        if value.is_positive() {
            return Ok(None);
        }
        if value.is_zero() {
            active += 1;
            if !subset.contains(&j) {
                // Report the non-simple vertex once, from its smallest subset.
                let mut all: Vec<usize> = cone
                    .normals
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| vertex.pair(v).is_zero())
                    .map(|(k, _)| k)
                    .collect();
                all.sort_unstable();
                return Err(Error::NotSimpleVertex {
                    vertex: vertex_key(&vertex),
                    active: all.len(),
                });
            }
        }
    }
    debug_assert_eq!(active, subset.len());
    let mut facet_indices = subset.to_vec();
    let mut orientation = 1;
    if delta.is_negative() {
        if facet_indices.len() >= 2 {
            facet_indices.swap(0, 1);
        } else {
            orientation = -1;
        }
    }
    let ordered_normals = facet_indices
        .iter()
        .map(|&i| cone.normals[i].clone())
        .collect();
    Ok(Some(ToricOrbit {
        vertex,
        facet_indices,
        ordered_normals,
        orientation,
    }))
}

/// Each edge leaving a simple vertex must end at another vertex.
fn check_edges_bounded(cone: &GoodCone, orbit: &ToricOrbit) -> Result<()> {
    let d = cone.dim;
    let rows = std::iter::once(cone.reeb_lattice.entries())
        .chain(orbit.ordered_normals.iter().map(Vector::entries));
    let system = Matrix::from_row_slices(rows)?;
    for i in 0..orbit.ordered_normals.len() {
        // Leave facet i: r(b) = 0, r(v_i) = -1, r(v_j) = 0 otherwise.
        let mut rhs = vec![Rational::zero(); d];
        rhs[i + 1] = int(-1);
        let direction = Covector::new(solve_linear(&system, &Vector::new(rhs))?.into_entries());
        let blocked = cone
            .normals
            .iter()
            .enumerate()
            .filter(|(k, _)| !orbit.facet_indices.contains(k))
            .any(|(_, v)| direction.pair(v).is_positive());
        if !blocked {
            return Err(Error::UnboundedSection(format!(
                "edge from vertex {} leaving facet {} is a ray",
                orbit.vertex, orbit.facet_indices[i]
            )));
        }
    }
    Ok(())
}

/// Closed-orbit data of the toric manifold, in ambient coordinates:
/// `l_L = 1 / det(b, v^L)`, `φ_L(v) = det(v, v^L) / det(b, v^L)` and
/// `w_i^L(v) = 2π det(b, .., v, ..) / det(b, v^L)` with `v` in slot `i`.
pub fn orbit_system_from_cone(cone: &GoodCone) -> Result<OrbitSystem> {
    let orbits = enumerate_vertices(cone)?;
    let s = cone.pi_scale_exponent as i32;
    let d = cone.dim;
    let n = d - 1;
    let b = &cone.reeb_lattice;
    // Lattice images of the ambient basis vectors.
    let basis_images: Vec<Vector> = (0..d)
        .map(|k| cone.to_lattice(&Vector::unit(d, k)))
        .collect::<Result<_>>()?;
    let weight_scale = rational_pow(&int(2), 1 - s)?;

    let data = exec::map(&orbits, |orbit| -> Result<OrbitDatum> {
        let delta = orbit.det_with(b)?;
        let length = PiScalar::new(rational_pow(&int(2), s)? / &delta, s);
        let moment = Covector::new(
            basis_images
                .iter()
                .map(|e| Ok(orbit.det_with(e)? / &delta))
                .collect::<Result<_>>()?,
        );
        let weights = (0..n)
            .map(|i| {
                Ok(Covector::new(
                    basis_images
                        .iter()
                        .map(|e| Ok(&weight_scale * orbit.det_replacing(b, i, e)? / &delta))
                        .collect::<Result<_>>()?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(OrbitDatum::new(length, moment, weights))
    });
    let data = data.into_iter().collect::<Result<Vec<_>>>()?;
    OrbitSystem::with_weight_pi_power(d, cone.reeb.clone(), n, data, 1 - s)
}

/// The toric volume formula
/// `(1 / 2^n n!) sum_L det(v, v^L)^n / (det(b, v^L) prod_i det(b, .., v, ..))`
/// with lattice-normalized determinants.
pub fn toric_volume(cone: &GoodCone, v: &Vector) -> Result<PiScalar> {
    let orbits = enumerate_vertices(cone)?;
    toric_volume_at(cone, &orbits, v)
}

/// [`toric_volume`] with the vertices already enumerated.
pub fn toric_volume_at(cone: &GoodCone, orbits: &[ToricOrbit], v: &Vector) -> Result<PiScalar> {
    v.check_dim(cone.dim, "sample vector")?;
    let n = cone.n();
    let s = cone.pi_scale_exponent as i32;
    let b = &cone.reeb_lattice;
    let v_lattice = cone.to_lattice(v)?;
    let terms = exec::map(orbits, |orbit| -> Result<Rational> {
        let delta = orbit.det_with(b)?;
        let numerator = num_traits::pow(orbit.det_with(&v_lattice)?, n);
        let mut denominator = delta;
        for i in 0..n {
            let factor = orbit.det_replacing(b, i, &v_lattice)?;
            if factor.is_zero() {
                return Err(Error::pole(
                    v,
                    format!(
                        "det(b, .., v, ..) vanishes at vertex {} slot {i}",
                        orbit.vertex
                    ),
                ));
            }
            denominator *= factor;
        }
        Ok(numerator / denominator)
    });
    let mut sum = Rational::zero();
    for term in terms {
        sum += term?;
    }
    // Each lattice determinant holding k ambient vectors carries (2π)^{-k s}:
    // overall (2π)^{s (n + 1)}.
    let pi_power = s * (n as i32 + 1);
    let prefactor = rational_pow(&int(2), pi_power)? / (num_traits::pow(int(2), n) * factorial(n));
    Ok(PiScalar::new(sum * prefactor, pi_power))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::{localize_volume, sphere_volume_closed_form};
    use crate::scalar::rat;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    pub(crate) fn cone(normals: &[&[i64]], reeb: &[Rational], s: u32) -> Result<GoodCone> {
        let d = reeb.len();
        GoodCone::new(
            d,
            Matrix::identity(d),
            s,
            normals.iter().map(|n| Vector::from_i64(n)).collect(),
            Vector::new(reeb.to_vec()),
        )
    }

    #[test]
    fn weighted_s3_vertices() {
        let c = GoodCone::weighted_sphere(&ints(&[1, 2])).unwrap();
        let vs = enumerate_vertices(&c).unwrap();
        let vertices: Vec<Covector> = vs.iter().map(|o| o.vertex.clone()).collect();
        assert_eq!(
            vertices,
            vec![
                Covector::new(vec![int(0), rat(1, 2)]),
                Covector::from_i64(&[1, 0])
            ]
        );
        for o in &vs {
            assert!(o.det_with(c.reeb_lattice()).unwrap() > Rational::zero());
        }
    }

    #[test]
    fn simplex_vertices_are_basis_covectors() {
        let c = GoodCone::weighted_sphere(&ints(&[1, 1, 1])).unwrap();
        let vs = enumerate_vertices(&c).unwrap();
        assert_eq!(vs.len(), 3);
        for (k, o) in vs.iter().rev().enumerate() {
            assert_eq!(o.vertex, Covector::unit(3, k));
            assert!(o.det_with(c.reeb_lattice()).unwrap() > Rational::zero());
        }
    }

    #[test]
    fn non_primitive_normal_is_rejected() {
        let err = cone(&[&[2, 0], &[0, -1]], &ints(&[1, 1]), 1).unwrap_err();
        assert_eq!(err, Error::NonPrimitiveNormal { index: 0 });
    }

    #[test]
    fn divisor_two_is_rejected() {
        // Normals -(1,0,0), -(1,2,0), -(0,0,1): the first two span an index-2 sublattice.
        let c = cone(
            &[&[-1, 0, 0], &[-1, -2, 0], &[0, 0, -1]],
            &ints(&[2, 2, 1]),
            1,
        )
        .unwrap();
        match enumerate_vertices(&c) {
            Err(Error::GoodnessViolation { facets, divisors }) => {
                assert_eq!(facets, vec![0, 1]);
                assert_eq!(divisors, vec!["1".to_string(), "2".to_string()]);
            }
            other => panic!("expected goodness violation, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_section_is_detected() {
        // b outside the cone spanned by -v_i.
        let c = cone(&[&[-1, 0], &[0, -1]], &ints(&[1, -1]), 1).unwrap();
        assert!(matches!(
            enumerate_vertices(&c),
            Err(Error::UnboundedSection(_))
        ));
        // A half-strip: two vertices, one edge a ray.
        let c = cone(
            &[&[-1, 0, 0], &[1, 0, -1], &[0, -1, 0]],
            &ints(&[0, 0, 1]),
            1,
        )
        .unwrap();
        assert!(matches!(
            enumerate_vertices(&c),
            Err(Error::UnboundedSection(_))
        ));
    }

    #[test]
    fn non_simple_vertex_is_rejected() {
        // A redundant normal through the vertex (0, 0, 1).
        let c = cone(
            &[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1], &[-1, -1, 0]],
            &ints(&[1, 1, 1]),
            1,
        )
        .unwrap();
        match enumerate_vertices(&c) {
            Err(Error::NotSimpleVertex { vertex, active }) => {
                assert_eq!(vertex, "(0, 0, 1)");
                assert_eq!(active, 3);
            }
            other => panic!("expected non-simple vertex, got {other:?}"),
        }
    }

    #[test]
    fn sphere_orbit_system_matches_direct_construction() {
        let w = vec![int(1), int(2)];
        let sys = orbit_system_from_cone(&GoodCone::weighted_sphere(&w).unwrap()).unwrap();
        assert_eq!(sys.weight_pi_power(), 0);
        let direct = OrbitSystem::weighted_sphere(&w).unwrap();
        // Same leaves up to ordering.
        let mut lengths: Vec<String> = sys.orbits().iter().map(|o| o.length.to_string()).collect();
        let mut direct_lengths: Vec<String> = direct
            .orbits()
            .iter()
            .map(|o| o.length.to_string())
            .collect();
        lengths.sort();
        direct_lengths.sort();
        assert_eq!(lengths, direct_lengths);
        let v = Vector::new(vec![int(3), rat(-1, 2)]);
        assert_eq!(localize_volume(&sys, &v).unwrap(), PiScalar::pi(2));
        assert_eq!(
            toric_volume(&GoodCone::weighted_sphere(&w).unwrap(), &v).unwrap(),
            PiScalar::pi(2)
        );
    }

    #[test]
    fn weights_are_dual_to_normals() {
        let c = GoodCone::weighted_sphere(&[int(2), int(3), int(5)]).unwrap();
        let sys = orbit_system_from_cone(&c).unwrap();
        let orbits = enumerate_vertices(&c).unwrap();
        for (orbit, datum) in orbits.iter().zip(sys.orbits()) {
            for (i, w) in datum.weights.iter().enumerate() {
                assert!(w.pair(c.reeb()).is_zero());
                for (j, v) in orbit.ordered_normals.iter().enumerate() {
                    // Ambient normal is 2π * v; the π is absorbed by the lattice
                    // scaling, leaving w_i(v_j) = δ_ij.
                    let expected = if i == j { int(1) } else { int(0) };
                    assert_eq!(w.pair(v), expected);
                }
            }
            assert_eq!(datum.moment.pair(c.reeb()), int(1));
            // Moment materialized from determinants is the vertex itself here.
            assert_eq!(datum.moment, orbit.vertex);
        }
    }

    #[test]
    fn unscaled_lattice_carries_two_pi_in_weights() {
        let c = cone(&[&[-1, 0], &[0, -1]], &ints(&[1, 2]), 0).unwrap();
        let sys = orbit_system_from_cone(&c).unwrap();
        assert_eq!(sys.weight_pi_power(), 1);
        let orbits = enumerate_vertices(&c).unwrap();
        for (orbit, datum) in orbits.iter().zip(sys.orbits()) {
            let w = &datum.weights[0];
            assert_eq!(w.pair(&orbit.ordered_normals[0]), int(2));
        }
        let v = Vector::from_i64(&[1, 3]);
        let a = localize_volume(&sys, &v).unwrap();
        assert_eq!(a, toric_volume(&c, &v).unwrap());
        assert_eq!(a.pi_power(), 0);
    }

    #[test]
    fn pole_in_toric_formula() {
        let c = GoodCone::weighted_sphere(&ints(&[1, 2])).unwrap();
        // det(b, v) = 0 for v parallel to b.
        let err = toric_volume(&c, &Vector::from_i64(&[2, 4]));
        assert!(matches!(err, Err(Error::PoleAtSample { .. })));
    }

    #[test]
    fn closed_form_on_spheres() {
        for w in [
            ints(&[1, 2]),
            vec![int(1), rat(3, 2), int(4)],
            ints(&[2, 3, 5, 7]),
        ] {
            let c = GoodCone::weighted_sphere(&w).unwrap();
            let v = Vector::new(
                (0..w.len())
                    .map(|i| int(i as i64 * 3 - 2) + rat(1, 3))
                    .collect(),
            );
            assert_eq!(toric_volume(&c, &v).unwrap(), sphere_volume_closed_form(&w));
        }
    }

    #[test]
    fn nontrivial_lattice_basis() {
        // Same sphere, expressed through a unimodular change of ambient coordinates.
        let basis = Matrix::from_i64_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let normals = vec![Vector::from_i64(&[-1, 0]), Vector::from_i64(&[0, -1])];
        // Ambient b = basis * (1, 2).
        let c = GoodCone::new(2, basis, 1, normals, Vector::from_i64(&[3, 2])).unwrap();
        let v = Vector::from_i64(&[5, -1]);
        assert_eq!(toric_volume(&c, &v).unwrap(), PiScalar::pi(2));
        let sys = orbit_system_from_cone(&c).unwrap();
        assert_eq!(localize_volume(&sys, &v).unwrap(), PiScalar::pi(2));
    }

    pub(crate) fn conifold(reeb: &[Rational]) -> GoodCone {
        cone(
            &[&[-1, 0, 0], &[-1, -1, 0], &[-1, -1, -1], &[-1, 0, -1]],
            reeb,
            1,
        )
        .unwrap()
    }

    #[test]
    fn conifold_volume_function() {
        // Closed form b1 / (b2 b3 (b1 - b2)(b1 - b3)) pi^3 on the square cone.
        let b = vec![int(3), rat(3, 2), rat(3, 2)];
        let c = conifold(&b);
        assert_eq!(enumerate_vertices(&c).unwrap().len(), 4);
        let v = Vector::new(vec![int(2), rat(-1, 3), int(7)]);
        assert_eq!(toric_volume(&c, &v).unwrap(), PiScalar::new(rat(16, 27), 3));
        let b = vec![int(5), int(2), int(3)];
        let expected = &b[0] / (&b[1] * &b[2] * (&b[0] - &b[1]) * (&b[0] - &b[2]));
        let c = conifold(&b);
        assert_eq!(toric_volume(&c, &v).unwrap(), PiScalar::new(expected, 3));
        let sys = orbit_system_from_cone(&c).unwrap();
        assert_eq!(
            localize_volume(&sys, &v).unwrap(),
            toric_volume(&c, &v).unwrap()
        );
    }

    #[test]
    fn json_schema() {
        let text = r#"{"dim": 2, "lattice_basis": [["1","0"],["0","1"]], "pi_scale_exponent": 1,
                       "normals": [[-1, 0], [0, -1]], "reeb": ["1", "2"]}"#;
        let c: GoodCone = serde_json::from_str(text).unwrap();
        assert_eq!(c, GoodCone::weighted_sphere(&ints(&[1, 2])).unwrap());
        let back: GoodCone = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let bad = text.replace("[-1, 0]", "[-2, 0]");
        assert!(serde_json::from_str::<GoodCone>(&bad).is_err());
    }
}
