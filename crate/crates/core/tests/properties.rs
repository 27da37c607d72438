use abbvloc::polytope::triangulation_volume_with_base;
use abbvloc::symmetric::{elementary_all, power_sum};
use abbvloc::{
    complete_homogeneous, det, elementary_symmetric, parse_rational, smith_normal_form,
    solve_linear, toric_volume, triangulation_volume, Error, GoodCone, HPolytope, Matrix, PiScalar,
    Rational, Vector,
};
use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn square(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(rational(), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows).prop_map(|rows| {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Matrix::from_i64_rows(&refs).unwrap()
    })
}

/// Gcd of all k x k minors, the k-th determinantal divisor.
fn determinantal_divisor(m: &Matrix, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in (0..m.rows()).combinations(k) {
        for cols in (0..m.cols()).combinations(k) {
            let minor = Matrix::from_rows(
                rows.iter()
                    .map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect())
                    .collect(),
            )
            .unwrap();
            g = g.gcd(&det(&minor).unwrap().to_integer());
        }
    }
    g
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// The conifold cone with a Reeb vector drawn from the interior of its dual.
fn conifold() -> impl Strategy<Value = GoodCone> {
    (positive(), positive(), positive()).prop_map(|(b2, b3, extra)| {
        let b1 = b2.clone().max(b3.clone()) + extra;
        let normals = [[-1, 0, 0], [-1, -1, 0], [-1, -1, -1], [-1, 0, -1]]
            .iter()
            .map(|n| Vector::from_i64(n))
            .collect();
        GoodCone::new(
            3,
            Matrix::identity(3),
            1,
            normals,
            Vector::new(vec![b1, b2, b3]),
        )
        .unwrap()
    })
}

fn leibniz(m: &Matrix) -> Rational {
    let n = m.rows();
    let mut total = Rational::zero();
    for perm in (0..n).permutations(n) {
        let inversions = (0..n)
            .tuple_combinations()
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let term = (0..n).fold(Rational::one(), |acc, i| acc * m.get(i, perm[i]));
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_matches_leibniz(m in (1usize..=4).prop_flat_map(square)) {
        prop_assert_eq!(det(&m).unwrap(), leibniz(&m));
    }

    #[test]
    fn det_is_multiplicative((a, b) in (1usize..=4).prop_flat_map(|n| (square(n), square(n)))) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(det(&ab).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn solve_round_trips((a, x) in (1usize..=4).prop_flat_map(|n| (square(n), prop::collection::vec(rational(), n)))) {
        let x = Vector::new(x);
        let rhs = a.apply(&x).unwrap();
        match solve_linear(&a, &rhs) {
            Ok(y) => {
                prop_assert!(!det(&a).unwrap().is_zero());
                prop_assert_eq!(y, x);
            }
            Err(Error::SingularMatrix) => prop_assert!(det(&a).unwrap().is_zero()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn inverse_is_two_sided(a in (1usize..=4).prop_flat_map(square)) {
        if let Ok(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(a.rows()));
            prop_assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(a.rows()));
        } else {
            prop_assert!(det(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn newton_identities(xs in prop::collection::vec(rational(), 0..6), k in 1usize..7) {
        // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
        let rhs = (1..=k).fold(Rational::zero(), |acc, i| {
            let term = elementary_symmetric(k - i, &xs) * power_sum(i, &xs);
            if i % 2 == 1 { acc + term } else { acc - term }
        });
        prop_assert_eq!(elementary_symmetric(k, &xs) * Rational::from_integer(k.into()), rhs);
    }

    #[test]
    fn elementary_complete_duality(xs in prop::collection::vec(rational(), 1..6), k in 1i64..8) {
        let sum = (0..=k).fold(Rational::zero(), |acc, i| {
            let term = elementary_symmetric(i as usize, &xs) * complete_homogeneous(k - i, &xs);
            if i % 2 == 0 { acc + term } else { acc - term }
        });
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn elementary_all_is_consistent(xs in prop::collection::vec(rational(), 0..6)) {
        let all = elementary_all(&xs);
        prop_assert_eq!(all.len(), xs.len() + 1);
        for (k, e) in all.iter().enumerate() {
            prop_assert_eq!(e, &elementary_symmetric(k, &xs));
        }
        prop_assert!(elementary_symmetric(xs.len() + 1, &xs).is_zero());
    }

    #[test]
    fn smith_divisors_match_minors(m in (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let d = smith_normal_form(&m).unwrap();
        prop_assert_eq!(d.len(), m.rows().min(m.cols()));
        let mut running = BigInt::one();
        for (k, dk) in d.iter().enumerate() {
            prop_assert!(!dk.is_negative());
            if k > 0 && !d[k - 1].is_zero() {
                prop_assert!(dk.is_multiple_of(&d[k - 1]));
            }
            if k > 0 && d[k - 1].is_zero() {
                prop_assert!(dk.is_zero());
            }
            running *= dk;
            prop_assert_eq!(&running, &determinantal_divisor(&m, k + 1));
        }
    }

    #[test]
    fn smith_is_unimodular_invariant(m in int_matrix(3, 3), shear in -5i64..=5) {
        let u = Matrix::from_i64_rows(&[&[1, shear, 0], &[0, 1, 0], &[shear, shear * shear - 1, 1]]).unwrap();
        prop_assert_eq!(det(&u).unwrap().abs(), Rational::one());
        prop_assert_eq!(smith_normal_form(&u.mul(&m).unwrap()).unwrap(), smith_normal_form(&m).unwrap());
        prop_assert_eq!(smith_normal_form(&m.mul(&u).unwrap()).unwrap(), smith_normal_form(&m).unwrap());
    }

    #[test]
    fn rational_text_round_trips(x in rational()) {
        let text = abbvloc::scalar::format_rational(&x);
        prop_assert_eq!(parse_rational(&text).unwrap(), x);
    }

    #[test]
    fn pi_scalar_decimal_tracks_exact(x in rational(), e in -3i32..=4) {
        let value = PiScalar::new(x.clone(), e);
        let decimal: f64 = value.to_decimal(12).parse().unwrap();
        let float = abbvloc::scalar::to_f64(&x) * std::f64::consts::PI.powi(e);
        prop_assert!((decimal - float).abs() <= 1e-10 * float.abs().max(1.0));
    }

    #[test]
    fn toric_volume_ignores_normal_order(
        c in conifold(),
        order in Just(vec![0usize, 1, 2, 3]).prop_shuffle(),
        v in prop::collection::vec(rational(), 3),
    ) {
        let v = Vector::new(v);
        let permuted = c.permute_normals(&order).unwrap();
        match (toric_volume(&c, &v), toric_volume(&permuted, &v)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(Error::PoleAtSample { .. }), Err(Error::PoleAtSample { .. })) => {}
            other => prop_assert!(false, "{other:?}"),
        }
    }

    #[test]
    fn triangulation_ignores_base_vertex(c in conifold()) {
        let p = HPolytope::from_cone(&c).unwrap();
        let vol = triangulation_volume(&p).unwrap();
        for base in 0..p.vertices().len() {
            prop_assert_eq!(triangulation_volume_with_base(&p, base).unwrap(), vol.clone());
        }
    }
}
