//! Exact scalars: arbitrary-precision rationals and rationals graded by a power of pi.
//!
//! Every volume and characteristic number produced by this crate has the
//! shape `q * pi^e` with `q` rational. Keeping the pi-power symbolic makes all
//! comparisons exact equalities; [`PiScalar::to_decimal`] is for display only.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational number; always reduced with a positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `numer / denom`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {text:?}"));
    if let Some((numer, denom)) = text.split_once('/') {
        let numer = BigInt::from_str(numer.trim()).map_err(|_| bad())?;
        let denom = BigInt::from_str(denom.trim()).map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let joined = format!("{whole_digits}{frac}");
        let numer = BigInt::from_str(&joined).map_err(|_| bad())?;
        let numer = if negative { -numer } else { numer };
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(numer, denom));
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical text form used in JSON and reports: `"p/q"` or `"p"`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// `base^exp` for a possibly negative exponent. Fails on `0^negative`.
pub fn rational_pow(base: &Rational, exp: i32) -> Result<Rational> {
    if exp < 0 {
        if base.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(num_traits::pow(base.recip(), exp.unsigned_abs() as usize))
    } else {
        Ok(num_traits::pow(base.clone(), exp as usize))
    }
}

/// Serde adapter for a single rational, written as a string and read from a
/// string or a JSON integer.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(
        value: &Rational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a \"p/q\" string or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }
}

/// Wrapper so sequences of rationals can go through serde.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SerdeRational(pub Rational);

impl Serialize for SerdeRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for SerdeRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rational::deserialize(d).map(SerdeRational)
    }
}

// 64 digits of pi; plenty for twelve significant digits of q * pi^e at the
// exponents that occur here.
const PI_DIGITS: &str = "3.1415926535897932384626433832795028841971693993751058209749445923";

fn pi_rational() -> Rational {
    parse_rational(PI_DIGITS).expect("pi literal parses")
}

/// The exact value `coeff * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiScalar {
    coeff: Rational,
    pi_power: i32,
}

impl PiScalar {
    pub fn new(coeff: Rational, pi_power: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            PiScalar { coeff, pi_power }
        }
    }

    pub fn zero() -> Self {
        PiScalar {
            coeff: Rational::zero(),
            pi_power: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    /// A pi-free value.
    pub fn rational(coeff: Rational) -> Self {
        Self::new(coeff, 0)
    }

    /// `pi^power`.
    pub fn pi(power: i32) -> Self {
        Self::new(Rational::one(), power)
    }

    /// `(2 pi)^power`.
    pub fn two_pi(power: i32) -> Self {
        let two = int(2);
        Self::new(rational_pow(&two, power).expect("2 is nonzero"), power)
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Exact sum; fails when both sides are nonzero with different pi-powers.
    pub fn checked_add(&self, other: &PiScalar) -> Result<PiScalar> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_power != other.pi_power {
            return Err(Error::MixedPiPowers {
                lhs: self.clone(),
                rhs: other.clone(),
            });
        }
        Ok(PiScalar::new(&self.coeff + &other.coeff, self.pi_power))
    }

    pub fn checked_div(&self, other: &PiScalar) -> Result<PiScalar> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(PiScalar::new(
            &self.coeff / &other.coeff,
            self.pi_power - other.pi_power,
        ))
    }

    pub fn recip(&self) -> Result<PiScalar> {
        PiScalar::one().checked_div(self)
    }

    pub fn scale(&self, factor: &Rational) -> PiScalar {
        PiScalar::new(&self.coeff * factor, self.pi_power)
    }

    pub fn pow(&self, exp: i32) -> Result<PiScalar> {
        if self.is_zero() && exp == 0 {
            return Ok(PiScalar::one());
        }
        Ok(PiScalar::new(
            rational_pow(&self.coeff, exp)?,
            self.pi_power * exp,
        ))
    }

    /// Sums an iterator of scalars in order, failing on mixed pi-powers.
    pub fn try_sum<'a>(items: impl IntoIterator<Item = &'a PiScalar>) -> Result<PiScalar> {
        items
            .into_iter()
            .try_fold(PiScalar::zero(), |acc, x| acc.checked_add(x))
    }

    /// Decimal rendering with `digits` significant digits and pi expanded.
    /// Display only: never feed the result back into a computation.
    pub fn to_decimal(&self, digits: usize) -> String {
        let pi = pi_rational();
        let value = &self.coeff * rational_pow(&pi, self.pi_power).expect("pi is nonzero");
        format_significant(&value, digits.max(1))
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} * pi^{}", self.coeff, self.pi_power)
    }
}

impl Mul for &PiScalar {
    type Output = PiScalar;

    fn mul(self, rhs: &PiScalar) -> PiScalar {
        PiScalar::new(&self.coeff * &rhs.coeff, self.pi_power + rhs.pi_power)
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;

    fn mul(self, rhs: PiScalar) -> PiScalar {
        &self * &rhs
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;

    fn neg(self) -> PiScalar {
        PiScalar::new(-self.coeff, self.pi_power)
    }
}

impl Serialize for PiScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            coeff: String,
            pi_power: i32,
        }
        Repr {
            coeff: format_rational(&self.coeff),
            pi_power: self.pi_power,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            coeff: SerdeRational,
            #[serde(default)]
            pi_power: i32,
        }
        let repr = Repr::deserialize(d)?;
        Ok(PiScalar::new(repr.coeff.0, repr.pi_power))
    }
}

fn ten_pow(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// floor(log10(|x|)) for nonzero x.
fn decimal_exponent(x: &Rational) -> i64 {
    let numer = x.numer().abs();
    let denom = x.denom().clone();
    let mut exp = numer.to_string().len() as i64 - denom.to_string().len() as i64;
    // Adjust so 10^exp <= |x| < 10^(exp+1).
    loop {
        let lower = scaled_compare(&numer, &denom, exp);
        if lower == Ordering::Less {
            exp -= 1;
            continue;
        }
        if scaled_compare(&numer, &denom, exp + 1) != Ordering::Less {
            exp += 1;
            continue;
        }
        return exp;
    }
}

/// Compares numer/denom with 10^exp.
fn scaled_compare(numer: &BigInt, denom: &BigInt, exp: i64) -> Ordering {
    if exp >= 0 {
        numer.cmp(&(denom * ten_pow(exp as u32)))
    } else {
        (numer * ten_pow((-exp) as u32)).cmp(denom)
    }
}

fn format_significant(value: &Rational, digits: usize) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let mut exp = decimal_exponent(&magnitude);
    let shift = digits as i64 - 1 - exp;
    let scaled = if shift >= 0 {
        &magnitude * Rational::from_integer(ten_pow(shift as u32))
    } else {
        &magnitude / Rational::from_integer(ten_pow((-shift) as u32))
    };
    // Round half away from zero.
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = if (r * 2u32) >= *scaled.denom() {
        q + 1u32
    } else {
        q
    };
    if mantissa == ten_pow(digits as u32) {
        mantissa /= 10u32;
        exp += 1;
    }
    let text = mantissa.to_string();
    let sign = if negative { "-" } else { "" };
    if (-6..=15).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if int_len >= text.len() {
                let zeros = "0".repeat(int_len - text.len());
                format!("{sign}{text}{zeros}")
            } else {
                let (head, tail) = text.split_at(int_len);
                format!("{sign}{head}.{}", tail.trim_end_matches('0'))
                    .trim_end_matches('.')
                    .to_string()
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{}", text.trim_end_matches('0'))
        }
    } else {
        let (head, tail) = text.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{sign}{head}e{exp}")
        } else {
            format!("{sign}{head}.{tail}e{exp}")
        }
    }
}

/// Lossy conversion used only by the decimal renderers in tests.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert_eq!(parse_rational("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational(" 4/-8 ").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn zero_is_canonical() {
        let z = PiScalar::new(int(0), 5);
        assert_eq!(z.pi_power(), 0);
        assert_eq!(z, PiScalar::zero());
    }

    #[test]
    fn addition_requires_matching_pi_power() {
        let a = PiScalar::new(int(1), 2);
        let b = PiScalar::new(rat(1, 2), 2);
        assert_eq!(a.checked_add(&b).unwrap(), PiScalar::new(rat(3, 2), 2));
        let c = PiScalar::new(int(1), 3);
        assert!(matches!(
            a.checked_add(&c),
            Err(Error::MixedPiPowers { .. })
        ));
        assert_eq!(a.checked_add(&PiScalar::zero()).unwrap(), a);
        // Cancellation lands on the canonical zero.
        assert_eq!(a.checked_add(&-a.clone()).unwrap(), PiScalar::zero());
    }

    #[test]
    fn display_matches_report_format() {
        assert_eq!(PiScalar::pi(2).to_string(), "1 * pi^2");
        assert_eq!(PiScalar::new(rat(2, 3), 4).to_string(), "2/3 * pi^4");
        assert_eq!(PiScalar::zero().to_string(), "0 * pi^0");
    }

    #[test]
    fn two_pi_powers() {
        assert_eq!(PiScalar::two_pi(3), PiScalar::new(int(8), 3));
        assert_eq!(PiScalar::two_pi(-1), PiScalar::new(rat(1, 2), -1));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(PiScalar::pi(2).to_decimal(12), "9.86960440109");
        assert_eq!(PiScalar::new(rat(2, 3), 4).to_decimal(12), "64.9393940227");
        assert_eq!(PiScalar::rational(int(1)).to_decimal(12), "1");
        assert_eq!(PiScalar::rational(rat(-1, 8)).to_decimal(12), "-0.125");
        assert_eq!(PiScalar::rational(int(123)).to_decimal(2), "120");
        assert_eq!(PiScalar::rational(rat(1, 3)).to_decimal(4), "0.3333");
        assert_eq!(PiScalar::rational(rat(1, 10_000_000)).to_decimal(3), "1e-7");
        assert_eq!(PiScalar::rational(rat(999_999, 1)).to_decimal(3), "1000000");
        assert_eq!(PiScalar::zero().to_decimal(12), "0");
    }

    #[test]
    fn decimal_agrees_with_float() {
        for (q, e) in [(rat(7, 160), 4), (rat(-3, 2), -2), (rat(22, 7), 1)] {
            let s = PiScalar::new(q.clone(), e);
            let printed: f64 = s.to_decimal(12).parse().unwrap();
            let float = to_f64(&q) * std::f64::consts::PI.powi(e);
            assert!((printed - float).abs() <= 1e-10 * float.abs());
        }
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let s = PiScalar::new(rat(2, 3), 1);
        assert_eq!(s.pow(-2).unwrap(), PiScalar::new(rat(9, 4), -2));
        assert!(PiScalar::zero().pow(-1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = PiScalar::new(rat(-5, 3), 2);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"coeff":"-5/3","pi_power":2}"#);
        let back: PiScalar = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }
}
