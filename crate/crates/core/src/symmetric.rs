//! Elementary, complete homogeneous and power-sum symmetric polynomials
//! evaluated at rational points, plus multi-index products `s_J`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// All elementary symmetric values `s_0..=s_len` of `xs`, built as the
/// coefficients of `prod (1 + x t)` one factor at a time.
pub fn elementary_all(xs: &[Rational]) -> Vec<Rational> {
    let mut coeffs = vec![Rational::zero(); xs.len() + 1];
    coeffs[0] = Rational::one();
    for (i, x) in xs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let add = &coeffs[k - 1] * x;
            coeffs[k] += add;
        }
    }
    coeffs
}

/// `s_k(xs)`; zero for `k > xs.len()`, one for `k = 0`.
pub fn elementary_symmetric(k: usize, xs: &[Rational]) -> Rational {
    if k > xs.len() {
        return Rational::zero();
    }
    elementary_all(xs).swap_remove(k)
}

/// `h_k(xs)`, the sum of all degree-`k` monomials; `h_0 = 1`, `h_{<0} = 0`.
pub fn complete_homogeneous(k: i64, xs: &[Rational]) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    let k = k as usize;
    // Coefficients of prod 1/(1 - x t), truncated at t^k.
    let mut coeffs = vec![Rational::zero(); k + 1];
    coeffs[0] = Rational::one();
    for x in xs {
        for j in 1..=k {
            let add = &coeffs[j - 1] * x;
            coeffs[j] += add;
        }
    }
    coeffs.swap_remove(k)
}

/// `p_k(xs) = sum x^k`.
pub fn power_sum(k: usize, xs: &[Rational]) -> Rational {
    xs.iter().fold(Rational::zero(), |acc, x| {
        acc + num_traits::pow(x.clone(), k)
    })
}

/// A multi-index `J = (j_1, ..., j_l)` of positive integers, kept sorted
/// ascending. `s_J` is the product of the `s_{j_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Multiindex(Vec<usize>);

impl Multiindex {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidInput(
                "multi-index entries must be positive".into(),
            ));
        }
        parts.sort_unstable();
        Ok(Multiindex(parts))
    }

    pub fn empty() -> Self {
        Multiindex(Vec::new())
    }

    pub fn single(j: usize) -> Result<Self> {
        Self::new(vec![j])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// `|J| = j_1 + ... + j_l`.
    pub fn degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// Every multi-index of total degree `m`, i.e. the partitions of `m`.
    pub fn all_of_degree(m: usize) -> Vec<Multiindex> {
        fn rec(rest: usize, min: usize, current: &mut Vec<usize>, out: &mut Vec<Multiindex>) {
            if rest == 0 {
                out.push(Multiindex(current.clone()));
                return;
            }
            for part in min..=rest {
                current.push(part);
                rec(rest - part, part, current, out);
                current.pop();
            }
        }
        let mut out = Vec::new();
        if m == 0 {
            out.push(Multiindex::empty());
        } else {
            rec(m, 1, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl<'de> Deserialize<'de> for Multiindex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Multiindex::new(parts).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Multiindex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, j) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str(")")
    }
}

/// `s_J(xs) = prod_i s_{j_i}(xs)`.
pub fn s_multi(j: &Multiindex, xs: &[Rational]) -> Rational {
    if j.parts().is_empty() {
        return Rational::one();
    }
    let all = elementary_all(xs);
    j.parts().iter().fold(Rational::one(), |acc, &k| {
        acc * all.get(k).cloned().unwrap_or_else(Rational::zero)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn ints(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    // Oracle: sum over k-subsets.
    fn brute_elementary(k: usize, xs: &[Rational]) -> Rational {
        let n = xs.len();
        (0u32..1 << n)
            .filter(|mask| mask.count_ones() as usize == k)
            .map(|mask| {
                (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .fold(Rational::one(), |acc, i| acc * &xs[i])
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    // Oracle: sum over non-decreasing index sequences of length k.
    fn brute_homogeneous(k: usize, xs: &[Rational]) -> Rational {
        fn rec(k: usize, start: usize, xs: &[Rational], acc: Rational) -> Rational {
            if k == 0 {
                return acc;
            }
            (start..xs.len())
                .map(|i| rec(k - 1, i, xs, &acc * &xs[i]))
                .fold(Rational::zero(), |a, b| a + b)
        }
        rec(k, 0, xs, Rational::one())
    }

    #[test]
    fn elementary_examples() {
        let xs = ints(&[1, 2, 3]);
        assert_eq!(elementary_symmetric(1, &xs), int(6));
        assert_eq!(elementary_symmetric(3, &xs), int(6));
        assert_eq!(brute_elementary(2, &xs), int(11));
        assert_eq!(elementary_symmetric(2, &xs), int(11));
        assert_eq!(elementary_symmetric(0, &xs), int(1));
        assert_eq!(elementary_symmetric(4, &xs), int(0));
    }

    #[test]
    fn homogeneous_examples() {
        assert_eq!(complete_homogeneous(0, &ints(&[5, 7])), int(1));
        assert_eq!(complete_homogeneous(1, &ints(&[5, 7])), int(12));
        assert_eq!(brute_homogeneous(2, &ints(&[1, 2])), int(7));
        assert_eq!(complete_homogeneous(2, &ints(&[1, 2])), int(7));
        assert_eq!(complete_homogeneous(-1, &ints(&[1, 2])), int(0));
        let xs = ints(&[2, -3, 5, 1]);
        for k in 0..6 {
            assert_eq!(
                complete_homogeneous(k as i64, &xs),
                brute_homogeneous(k, &xs)
            );
            assert_eq!(elementary_symmetric(k, &xs), brute_elementary(k, &xs));
        }
    }

    #[test]
    fn multiindex_examples() {
        let j11 = Multiindex::new(vec![1, 1]).unwrap();
        assert_eq!(s_multi(&j11, &ints(&[1, 2])), int(9));
        assert_eq!(s_multi(&Multiindex::empty(), &ints(&[4, 9])), int(1));
        assert_eq!(
            s_multi(&Multiindex::single(2).unwrap(), &ints(&[1, 2, 3])),
            int(11)
        );
        assert!(Multiindex::new(vec![1, 0]).is_err());
        assert_eq!(Multiindex::new(vec![3, 1, 2]).unwrap().parts(), &[1, 2, 3]);
    }

    #[test]
    fn partitions_are_counted() {
        let counts: Vec<usize> = (0..8).map(|m| Multiindex::all_of_degree(m).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert!(Multiindex::all_of_degree(5).iter().all(|j| j.degree() == 5));
    }

    #[test]
    fn multiindex_json_is_sorted() {
        let j: Multiindex = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(serde_json::to_string(&j).unwrap(), "[1,2]");
        assert!(serde_json::from_str::<Multiindex>("[0]").is_err());
    }
}
