//! The hyperplane section `Δ_1 = {φ : φ(v_i) <= 0, φ(b) = 1}` as a simple
//! polytope, its volume under the form `Ω_H` (defined by `b ∧ Ω_H` being
//! the lattice volume form) and the bridge to the Sasakian volume.
//!
//! Everything here is in rational lattice coordinates: normals and `b` are
//! vectors in the lattice basis, vertices are covectors in the dual basis.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use itertools::Itertools;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::linalg::{det, solve_linear, Covector, Matrix, Vector};
use crate::localization::factorial;
use crate::sampling::{first_regular, SampleRng, POLE_BUDGET};
use crate::scalar::{int, rational_pow, PiScalar, Rational};
use crate::toric::{enumerate_vertices, toric_volume_at, GoodCone};

/// A vertex of `Δ_1` with the indices of the normals vanishing on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeVertex {
    pub point: Covector,
    pub active: Vec<usize>,
}

#[derive(Deserialize)]
struct RawPolytope {
    normals: Vec<Vector>,
    reeb: Vector,
}

/// `Δ_1` given by normals and `b`, with its vertices.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(try_from = "RawPolytope")]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Vector>,
    reeb: Vector,
    vertices: Vec<PolytopeVertex>,
}

impl TryFrom<RawPolytope> for HPolytope {
    type Error = Error;

    fn try_from(raw: RawPolytope) -> Result<Self> {
        HPolytope::new(raw.normals, raw.reeb)
    }
}

impl Serialize for HPolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            normals: &'a [Vector],
            reeb: &'a Vector,
            vertices: Vec<&'a Covector>,
        }
        Repr {
            normals: &self.normals,
            reeb: &self.reeb,
            vertices: self.vertices.iter().map(|v| &v.point).collect(),
        }
        .serialize(s)
    }
}

fn check_inputs(normals: &[Vector], reeb: &Vector) -> Result<usize> {
    let d = reeb.dim();
    if d < 1 {
        return Err(Error::InvalidInput("Reeb vector must be nonempty".into()));
    }
    if reeb.is_zero() {
        return Err(Error::InvalidInput("Reeb vector must be nonzero".into()));
    }
    for v in normals {
        v.check_dim(d, "polytope normal")?;
        if v.is_zero() {
            return Err(Error::InvalidInput(
                "polytope normals must be nonzero".into(),
            ));
        }
    }
    Ok(d)
}

impl HPolytope {
    /// Parses and validates the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        crate::error::from_json::<RawPolytope, Self>(text)
    }

    /// Enumerates the vertices by walking the edge graph from a first vertex.
    pub fn new(normals: Vec<Vector>, reeb: Vector) -> Result<Self> {
        let dim = check_inputs(&normals, &reeb)?;
        let vertices = walk_vertices(&normals, &reeb)?;
        Ok(HPolytope {
            dim,
            normals,
            reeb,
            vertices,
        })
    }

    /// `Δ_1` of a cone, in its lattice coordinates.
    pub fn from_cone(cone: &GoodCone) -> Result<Self> {
        Self::new(cone.normals().to_vec(), cone.reeb_lattice().clone())
    }

    /// Polytope with explicitly listed vertices. Each vertex must lie on the
    /// hyperplane and in every half-space; its active set is computed.
    pub fn from_vertices(
        normals: Vec<Vector>,
        reeb: Vector,
        points: Vec<Covector>,
    ) -> Result<Self> {
        let dim = check_inputs(&normals, &reeb)?;
        if points.is_empty() {
            return Err(Error::InvalidInput(
                "at least one vertex is required".into(),
            ));
        }
        let mut vertices = Vec::with_capacity(points.len());
        for point in points {
            point.check_dim(dim, "polytope vertex")?;
            if point.pair(&reeb) != int(1) {
                return Err(Error::InvalidInput(format!(
                    "vertex {point} is not on φ(b) = 1"
                )));
            }
            let mut active = Vec::new();
            for (j, v) in normals.iter().enumerate() {
                let value = point.pair(v);
                if value.is_positive() {
                    return Err(Error::InvalidInput(format!(
                        "vertex {point} violates normal {j}"
                    )));
                }
                if value.is_zero() {
                    active.push(j);
                }
            }
            vertices.push(PolytopeVertex { point, active });
        }
        vertices.sort_by(|a, b| a.point.cmp(&b.point));
        Ok(HPolytope {
            dim,
            normals,
            reeb,
            vertices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `n = d - 1`.
    pub fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    pub fn reeb(&self) -> &Vector {
        &self.reeb
    }

    /// Vertices sorted by covector.
    pub fn vertices(&self) -> &[PolytopeVertex] {
        &self.vertices
    }

    /// Vertex pairs sharing `n - 1` active normals.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for (i, j) in (0..self.vertices.len()).tuple_combinations() {
            let a = &self.vertices[i].active;
            let shared = self.vertices[j]
                .active
                .iter()
                .filter(|k| a.contains(k))
                .count();
            if n >= 1 && shared == n - 1 {
                out.push((i, j));
            }
        }
        out
    }

    fn check_simple(&self) -> Result<()> {
        for v in &self.vertices {
            if v.active.len() > self.n() {
                return Err(Error::NotSimpleVertex {
                    vertex: v.point.to_string(),
                    active: v.active.len(),
                });
            }
        }
        Ok(())
    }
}

fn basis_at(normals: &[Vector], reeb: &Vector, active: &[usize]) -> Result<Matrix> {
    Matrix::from_row_slices(
        std::iter::once(reeb.entries()).chain(active.iter().map(|&i| normals[i].entries())),
    )
}

fn active_set(normals: &[Vector], point: &Covector) -> Result<Vec<usize>> {
    let mut active = Vec::new();
    for (j, v) in normals.iter().enumerate() {
        let value = point.pair(v);
        if value.is_positive() {
            return Err(Error::InvalidInput(format!(
                "point {point} violates normal {j}"
            )));
        }
        if value.is_zero() {
            active.push(j);
        }
    }
    Ok(active)
}

fn first_vertex(normals: &[Vector], reeb: &Vector) -> Result<PolytopeVertex> {
    let d = reeb.dim();
    for subset in (0..normals.len()).combinations(d - 1) {
        let system = basis_at(normals, reeb, &subset)?;
        let Ok(point) = solve_linear(&system, &Vector::unit(d, 0)) else {
            continue;
        };
        let point = Covector::new(point.into_entries());
        if normals.iter().all(|v| !point.pair(v).is_positive()) {
            let active = active_set(normals, &point)?;
            return Ok(PolytopeVertex { point, active });
        }
    }
    Err(Error::UnboundedSection("the section has no vertex".into()))
}

fn walk_vertices(normals: &[Vector], reeb: &Vector) -> Result<Vec<PolytopeVertex>> {
    let d = reeb.dim();
    let n = d - 1;
    let start = first_vertex(normals, reeb)?;
    let mut seen: BTreeMap<Covector, Vec<usize>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(start.point.clone(), start.active.clone());
    queue.push_back(start);
    while let Some(vertex) = queue.pop_front() {
        if vertex.active.len() != n {
            return Err(Error::NotSimpleVertex {
                vertex: vertex.point.to_string(),
                active: vertex.active.len(),
            });
        }
        let system = basis_at(normals, reeb, &vertex.active)?;
        for i in 0..n {
            let mut rhs = vec![Rational::zero(); d];
            rhs[i + 1] = int(-1);
            let direction = Covector::new(solve_linear(&system, &Vector::new(rhs))?.into_entries());
            // Ratio test: the first other facet hit along the edge.
            let mut step: Option<Rational> = None;
            for (k, v) in normals.iter().enumerate() {
                if vertex.active.contains(&k) {
                    continue;
                }
                let rate = direction.pair(v);
                if rate.is_positive() {
                    let t = -vertex.point.pair(v) / rate;
                    if step.as_ref().is_none_or(|s| t < *s) {
                        step = Some(t);
                    }
                }
            }
            let Some(t) = step else {
                return Err(Error::UnboundedSection(format!(
                    "edge from vertex {} leaving facet {} is a ray",
                    vertex.point, vertex.active[i]
                )));
            };
            let next = vertex.point.add(&direction.scale(&t));
            if !seen.contains_key(&next) {
                let active = active_set(normals, &next)?;
                seen.insert(next.clone(), active.clone());
                queue.push_back(PolytopeVertex {
                    point: next,
                    active,
                });
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|(point, active)| PolytopeVertex { point, active })
        .collect())
}

/// `Ω_H(e_1, ..., e_n) = det(w, e_1, ..., e_n)` for the first covector
/// `w = e_k^* / b_k` with `b_k != 0`.
pub fn omega_h(b: &Vector, edges: &[Covector]) -> Result<Rational> {
    let k = b
        .entries()
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::InvalidInput("Reeb vector must be nonzero".into()))?;
    let w = Covector::unit(b.dim(), k).scale(&(int(1) / &b[k]));
    omega_h_with(b, &w, edges)
}

/// [`omega_h`] with an explicit auxiliary covector `w`, `w(b) = 1`.
pub fn omega_h_with(b: &Vector, w: &Covector, edges: &[Covector]) -> Result<Rational> {
    let d = b.dim();
    w.check_dim(d, "auxiliary covector")?;
    if w.pair(b) != int(1) {
        return Err(Error::InvalidInput(
            "auxiliary covector must satisfy w(b) = 1".into(),
        ));
    }
    if edges.len() + 1 != d {
        return Err(Error::DimensionMismatch {
            context: "edge count",
            expected: d - 1,
            found: edges.len(),
        });
    }
    for e in edges {
        e.check_dim(d, "edge covector")?;
        if !e.pair(b).is_zero() {
            return Err(Error::InvalidInput(format!(
                "edge {e} does not satisfy e(b) = 0"
            )));
        }
    }
    det(&Matrix::from_row_slices(
        std::iter::once(w.entries()).chain(edges.iter().map(Covector::entries)),
    )?)
}

/// Volume of `Δ_1` under `Ω_H` by a recursive fan triangulation.
pub fn triangulation_volume(p: &HPolytope) -> Result<Rational> {
    triangulation_volume_with_base(p, 0)
}

/// [`triangulation_volume`] coning from vertex `base` at the top level.
/// Lower faces cone from their first vertex in the cyclic order starting at
/// `base`.
pub fn triangulation_volume_with_base(p: &HPolytope, base: usize) -> Result<Rational> {
    p.check_simple()?;
    let n = p.n();
    let m = p.vertices.len();
    if base >= m {
        return Err(Error::InvalidInput(format!(
            "base vertex {base} out of range"
        )));
    }
    if m < n + 1 {
        return Ok(Rational::zero());
    }
    let order: Vec<usize> = (0..m).map(|i| (i + m - base) % m).collect();
    let all: Vec<usize> = (0..m).collect();
    let mut simplices = Vec::new();
    fan(p, &order, &all, &BTreeSet::new(), n, &mut simplices);
    let volumes = exec::map(&simplices, |simplex| -> Result<Rational> {
        let apex = &p.vertices[simplex[0]].point;
        let edges: Vec<Covector> = simplex[1..]
            .iter()
            .map(|&i| p.vertices[i].point.sub(apex))
            .collect();
        Ok(omega_h(&p.reeb, &edges)?.abs())
    });
    let mut total = Rational::zero();
    for v in volumes {
        total += v?;
    }
    Ok(total / factorial(n))
}

/// Appends simplices (as vertex index lists) triangulating the face spanned
/// by `face` of dimension `k`, cut out by the normals in `fixed`.
fn fan(
    p: &HPolytope,
    order: &[usize],
    face: &[usize],
    fixed: &BTreeSet<usize>,
    k: usize,
    out: &mut Vec<Vec<usize>>,
) {
    let Some(&apex) = face.iter().min_by_key(|&&i| order[i]) else {
        return;
    };
    if k == 0 {
        out.push(vec![apex]);
        return;
    }
    let candidates: BTreeSet<usize> = face
        .iter()
        .flat_map(|&i| p.vertices[i].active.iter().copied())
        .filter(|j| !fixed.contains(j))
        .collect();
    for j in candidates {
        if p.vertices[apex].active.contains(&j) {
            continue;
        }
        let sub: Vec<usize> = face
            .iter()
            .copied()
            .filter(|&i| p.vertices[i].active.contains(&j))
            .collect();
        let mut sub_fixed = fixed.clone();
        sub_fixed.insert(j);
        let mut inner = Vec::new();
        fan(p, order, &sub, &sub_fixed, k - 1, &mut inner);
        for mut simplex in inner {
            simplex.insert(0, apex);
            out.push(simplex);
        }
    }
}

/// `f(φ) = φ(u) + d_shift`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearFunctional {
    pub u: Vector,
    #[serde(with = "crate::scalar::serde_rational")]
    pub d_shift: Rational,
}

impl LinearFunctional {
    pub fn new(u: Vector, d_shift: Rational) -> Self {
        LinearFunctional { u, d_shift }
    }

    pub fn eval(&self, point: &Covector) -> Rational {
        point.pair(&self.u) + &self.d_shift
    }
}

/// Lawrence's vertex formula
/// `Vol_H = (1/n!) sum_L f(Φ(L))^n / (|δ^L| γ_1^L ... γ_n^L)`
/// with `u = γ_0 b + sum γ_i v_i^L` and `δ^L = det(b, v_1^L, ..., v_n^L)`.
/// Reordering the normals at a vertex permutes the `γ_i`, so only `|δ^L|`
/// depends on orientation.
pub fn lawrence_volume(p: &HPolytope, f: &LinearFunctional) -> Result<Rational> {
    p.check_simple()?;
    f.u.check_dim(p.dim, "functional")?;
    for (i, j) in p.edges() {
        let (a, b) = (&p.vertices[i], &p.vertices[j]);
        if f.eval(&a.point) == f.eval(&b.point) {
            return Err(Error::EdgeConstantFunctional {
                vertex: a.point.to_string(),
            });
        }
    }
    let n = p.n();
    let terms = exec::map(&p.vertices, |vertex| -> Result<Rational> {
        let columns: Vec<Vector> = std::iter::once(p.reeb.clone())
            .chain(vertex.active.iter().map(|&i| p.normals[i].clone()))
            .collect();
        let basis = Matrix::from_columns(&columns)?;
        let delta = det(&basis)?;
        let gamma = solve_linear(&basis, &f.u)?;
        let mut denominator = delta.abs();
        for g in &gamma.entries()[1..] {
            if g.is_zero() {
                return Err(Error::EdgeConstantFunctional {
                    vertex: vertex.point.to_string(),
                });
            }
            denominator *= g;
        }
        Ok(num_traits::pow(f.eval(&vertex.point), n) / denominator)
    });
    let mut total = Rational::zero();
    for t in terms {
        total += t?;
    }
    Ok(total / factorial(n))
}

/// Lawrence's formula with a seeded random functional, redrawing on
/// `EdgeConstantFunctional`.
pub fn lawrence_volume_sampled(p: &HPolytope, seed: u64) -> Result<(LinearFunctional, Rational)> {
    let mut rng = SampleRng::new(seed);
    for _ in 0..POLE_BUDGET {
        let f = LinearFunctional::new(rng.vector(p.dim), rng.pool_entry());
        match lawrence_volume(p, &f) {
            Ok(vol) => return Ok((f, vol)),
            Err(Error::EdgeConstantFunctional { .. }) => {}
            Err(other) => return Err(other),
        }
    }
    Err(Error::AllSamplesPoles { draws: POLE_BUDGET })
}

/// Both sides of `Vol(M, η_b) = 2 π^{n+1} Vol_H(Δ_1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MsyCheck {
    pub lhs: PiScalar,
    pub rhs: PiScalar,
    pub equal: bool,
    pub v: Vector,
    pub functional: LinearFunctional,
    /// `Vol_H(Δ_1)` in rational lattice units.
    #[serde(with = "crate::scalar::serde_rational")]
    pub polytope_volume: Rational,
}

/// Compares the toric volume formula with Lawrence's formula on `Δ_1`.
/// `Ω_H` is normalized by the basis `e_i` with `2π e_i` integral; when the
/// lattice is not scaled by `2π` this costs `(2π)^{-(n+1)}`.
pub fn msy_check(cone: &GoodCone, seed: u64) -> Result<MsyCheck> {
    let orbits = enumerate_vertices(cone)?;
    let (v, lhs) = first_regular(cone.dim(), seed, |v| toric_volume_at(cone, &orbits, v))?;
    let polytope = HPolytope::from_cone(cone)?;
    let (functional, polytope_volume) = lawrence_volume_sampled(&polytope, seed.wrapping_add(1))?;
    let n = cone.n() as i32;
    let shift = (cone.pi_scale_exponent() as i32 - 1) * (n + 1);
    let rhs = PiScalar::new(
        int(2) * rational_pow(&int(2), shift)? * &polytope_volume,
        n + 1 + shift,
    );
    Ok(MsyCheck {
        equal: lhs == rhs,
        lhs,
        rhs,
        v,
        functional,
        polytope_volume,
    })
}
