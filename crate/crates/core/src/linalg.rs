//! Linear algebra over the rationals and the integers.
//!
//! Determinants use fraction-free (Bareiss) elimination on an integer
//! rescaling of the input; Smith normal form works on integer matrices.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, Rational, SerdeRational};

macro_rules! rational_tuple {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<Rational>);

        impl $name {
            pub fn new(entries: Vec<Rational>) -> Self {
                $name(entries)
            }

            pub fn zeros(dim: usize) -> Self {
                $name(vec![Rational::zero(); dim])
            }

            /// The `index`-th standard basis element.
            pub fn unit(dim: usize, index: usize) -> Self {
                let mut entries = vec![Rational::zero(); dim];
                entries[index] = Rational::one();
                $name(entries)
            }

            pub fn from_i64(entries: &[i64]) -> Self {
                $name(entries.iter().map(|&x| crate::scalar::int(x)).collect())
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn entries(&self) -> &[Rational] {
                &self.0
            }

            pub fn into_entries(self) -> Vec<Rational> {
                self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn scale(&self, factor: &Rational) -> Self {
                $name(self.0.iter().map(|x| x * factor).collect())
            }

            pub fn add(&self, other: &Self) -> Self {
                debug_assert_eq!(self.dim(), other.dim());
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn sub(&self, other: &Self) -> Self {
                debug_assert_eq!(self.dim(), other.dim());
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
            }

            pub(crate) fn check_dim(&self, dim: usize, context: &'static str) -> Result<()> {
                if self.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        context,
                        expected: dim,
                        found: self.dim(),
                    });
                }
                Ok(())
            }
        }

        impl Index<usize> for $name {
            type Output = Rational;

            fn index(&self, i: usize) -> &Rational {
                &self.0[i]
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("(")?;
                for (i, x) in self.0.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_seq(self.0.iter().map(format_rational))
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let raw = Vec::<SerdeRational>::deserialize(d)?;
                Ok($name(raw.into_iter().map(|x| x.0).collect()))
            }
        }
    };
}

rational_tuple!(
    /// An element of the torus Lie algebra `t`, in fixed coordinates.
    Vector
);

rational_tuple!(
    /// A linear functional on `t`, i.e. an element of `t*`, in dual coordinates.
    Covector
);

impl Covector {
    /// The exact pairing `<self, v>`.
    pub fn pair(&self, v: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), v.dim());
        self.0
            .iter()
            .zip(&v.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }
}

/// Dense rational matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    context: "matrix row length",
                    expected: ncols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            data,
        })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| crate::scalar::int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose rows are the given vectors (or covectors).
    pub fn from_row_slices<'a>(rows: impl IntoIterator<Item = &'a [Rational]>) -> Result<Self> {
        Self::from_rows(rows.into_iter().map(<[Rational]>::to_vec).collect())
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_row_slices(cols.iter().map(Vector::entries))?.transpose())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        v.check_dim(self.cols, "matrix-vector product")?;
        Ok(Vector::new(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v.entries())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        ))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let cols = (0..n)
            .map(|i| solve_linear(self, &Vector::unit(n, i)))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_columns(&cols)
    }

    /// Integer entries, or an error if some entry is fractional.
    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(Error::InvalidInput(format!(
                                "expected an integer matrix entry, got {x}"
                            )))
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant via fraction-free Gaussian elimination.
///
/// Each row is first scaled by the lcm of its denominators so that Bareiss
/// elimination runs on integers; the scales are divided out at the end.
pub fn det(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            let row = m.row(r);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &lcm;
            row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
        })
        .collect();
    Ok(Rational::new(bareiss_det(&mut a), scale))
}

/// Bareiss elimination in place; returns the determinant of the integer matrix.
pub(crate) fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let value = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = value;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Row-reduces a copy of `m` and returns (echelon form, pivot columns).
fn row_echelon(m: &Matrix) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut a: Vec<Vec<Rational>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        let Some(p) = (row..m.rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pivot = a[row][col].clone();
        for x in a[row].iter_mut() {
            *x /= &pivot;
        }
        for r in 0..m.rows {
            if r != row && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[row].clone();
                for (x, p) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    row_echelon(m).1.len()
}

/// Exact solution of `a x = rhs` for square nonsingular `a`.
pub fn solve_linear(a: &Matrix, rhs: &Vector) -> Result<Vector> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    rhs.check_dim(a.rows, "right-hand side")?;
    let n = a.rows;
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let mut row = a.row(r).to_vec();
        row.push(rhs[r].clone());
        rows.push(row);
    }
    let augmented = Matrix::from_rows(rows)?;
    let (reduced, pivots) = row_echelon(&augmented);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    Ok(Vector::new(
        reduced.into_iter().map(|row| row[n].clone()).collect(),
    ))
}

/// Elementary divisors `d_1 | d_2 | ...` of an integer matrix, one per
/// diagonal position (`min(rows, cols)` of them, zeros last).
pub fn smith_normal_form(a: &Matrix) -> Result<Vec<BigInt>> {
    let mut m = a.to_integer_rows()?;
    Ok(smith_divisors(&mut m, a.rows, a.cols))
}

pub(crate) fn smith_divisors(m: &mut [Vec<BigInt>], rows: usize, cols: usize) -> Vec<BigInt> {
    let size = rows.min(cols);
    let mut divisors = Vec::with_capacity(size);
    for t in 0..size {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let pick = |m: &[Vec<BigInt>]| {
            let mut best: Option<(usize, usize)> = None;
            for (r, row) in m.iter().enumerate().skip(t) {
                for (c, x) in row.iter().enumerate().skip(t) {
                    if !x.is_zero() && best.is_none_or(|(br, bc)| x.abs() < m[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            best
        };
        let Some((r0, c0)) = pick(m) else {
            divisors.extend(std::iter::repeat_n(BigInt::zero(), size - t));
            break;
        };
        m.swap(t, r0);
        for row in m.iter_mut() {
            row.swap(t, c0);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if !m[r][t].is_zero() {
                    let q = m[r][t].div_floor(&m[t][t]);
                    let (top, rest) = m.split_at_mut(r);
                    for (x, p) in rest[0][t..cols].iter_mut().zip(&top[t][t..cols]) {
                        *x -= &q * p;
                    }
                    dirty |= !m[r][t].is_zero();
                }
            }
            for c in t + 1..cols {
                if !m[t][c].is_zero() {
                    let q = m[t][c].div_floor(&m[t][t]);
                    for row in m.iter_mut().skip(t) {
                        let sub = &q * &row[t];
                        row[c] -= sub;
                    }
                    dirty |= !m[t][c].is_zero();
                }
            }
            if !dirty {
                // Divisibility: fold a row with a non-multiple into the pivot row.
                let offending = (t + 1..rows)
                    .find(|&r| (t + 1..cols).any(|c| !(&m[r][c] % &m[t][t]).is_zero()));
                match offending {
                    Some(r) => {
                        let (top, rest) = m.split_at_mut(r);
                        for (x, a) in top[t][t..cols].iter_mut().zip(&rest[0][t..cols]) {
                            *x += a;
                        }
                    }
                    None => break,
                }
            }
            if let Some((r, c)) = pick(m) {
                if m[r][c].abs() < m[t][t].abs() {
                    m.swap(t, r);
                    for row in m.iter_mut() {
                        row.swap(t, c);
                    }
                }
            }
        }
        divisors.push(m[t][t].abs());
    }
    divisors
}

/// Rows extend to a basis of the ambient lattice iff every elementary divisor is 1.
pub fn spans_direct_summand(rows: &Matrix) -> Result<bool> {
    if rows.rows > rows.cols {
        return Ok(false);
    }
    Ok(smith_normal_form(rows)?.iter().all(One::is_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_i64_rows(rows).unwrap()
    }

    fn leibniz(a: &Matrix) -> Rational {
        // Oracle: sum over permutations.
        let n = a.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Rational::zero();
        permute(&mut perm, 0, a, &mut total);
        total
    }

    fn permute(perm: &mut Vec<usize>, k: usize, a: &Matrix, total: &mut Rational) {
        let n = perm.len();
        if k == n {
            let mut sign = 1i64;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        sign = -sign;
                    }
                }
            }
            let prod = (0..n).fold(int(sign), |acc, i| acc * a.get(i, perm[i]));
            *total += prod;
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, a, total);
            perm.swap(k, i);
        }
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&Matrix::identity(3)).unwrap(), int(1));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        let two_by_two = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&two_by_two).unwrap(), leibniz(&two_by_two));
        assert_eq!(det(&two_by_two).unwrap(), int(1));
        assert!(matches!(
            det(&m(&[&[1, 2, 3]])),
            Err(Error::NotSquare { rows: 1, cols: 3 })
        ));
    }

    #[test]
    fn det_with_fractions_and_pivoting() {
        let a = Matrix::from_rows(vec![
            vec![int(0), rat(1, 2), rat(2, 3)],
            vec![rat(-3, 4), int(5), int(0)],
            vec![rat(1, 7), int(0), rat(-1, 5)],
        ])
        .unwrap();
        assert_eq!(det(&a).unwrap(), leibniz(&a));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(det(&singular).unwrap(), int(0));
    }

    #[test]
    fn solve_examples() {
        let x = solve_linear(&Matrix::identity(2), &Vector::from_i64(&[3, 5])).unwrap();
        assert_eq!(x, Vector::from_i64(&[3, 5]));
        let x = solve_linear(&m(&[&[2, 0], &[0, 4]]), &Vector::from_i64(&[1, 1])).unwrap();
        assert_eq!(x, Vector::new(vec![rat(1, 2), rat(1, 4)]));
        let x = solve_linear(&m(&[&[1, 1], &[1, -1]]), &Vector::from_i64(&[1, 0])).unwrap();
        assert_eq!(x, Vector::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(
            solve_linear(&m(&[&[1, 2], &[2, 4]]), &Vector::from_i64(&[1, 1])),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn rank_counts_pivots() {
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
        assert_eq!(rank(&Matrix::zeros(2, 3)), 0);
    }

    fn divisors(a: &Matrix) -> Vec<i64> {
        smith_normal_form(a)
            .unwrap()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(divisors(&m(&[&[1, 0, 0], &[0, 1, 0]])), vec![1, 1]);
        assert_eq!(divisors(&m(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(divisors(&m(&[&[2, 0, 0]])), vec![2]);
        assert_eq!(divisors(&Matrix::zeros(2, 3)), vec![0, 0]);
        assert_eq!(divisors(&m(&[&[1, 1, 0], &[1, -1, 0]])), vec![1, 2]);
        assert_eq!(divisors(&m(&[&[2, 4], &[6, 8]])), vec![2, 4]);
    }

    #[test]
    fn smith_rejects_fractions() {
        let a = Matrix::from_rows(vec![vec![rat(1, 2)]]).unwrap();
        assert!(smith_normal_form(&a).is_err());
    }

    #[test]
    fn direct_summand() {
        assert!(spans_direct_summand(&m(&[&[1, 2, 3], &[0, 1, 4]])).unwrap());
        assert!(!spans_direct_summand(&m(&[&[1, 1, 0], &[1, -1, 0]])).unwrap());
    }

    #[test]
    fn pairing() {
        let c = Covector::from_i64(&[2, -1]);
        let v = Vector::new(vec![rat(1, 2), int(3)]);
        assert_eq!(c.pair(&v), int(-2));
    }
}
