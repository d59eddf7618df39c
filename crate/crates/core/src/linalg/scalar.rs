//! Gaussian rationals `a + b·i` with arbitrary-precision rational parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussInt;

/// An exact complex number with rational real and imaginary parts.
///
/// Both parts are kept in lowest terms with positive denominators, so structural
/// equality is numeric equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    /// `num/den + 0i`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar::new(re, BigRational::zero())
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(&self.re / &n, -&self.im / &n))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("division by zero scalar")
    }

    /// One of `1, -1, i, -i`.
    pub fn is_unit_root(&self) -> bool {
        let one = BigRational::one();
        (self.im.is_zero() && self.re.abs() == one) || (self.re.is_zero() && self.im.abs() == one)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Least common multiple of the denominators of both parts.
    pub(crate) fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// `self * scale` as a Gaussian integer; `scale` must clear both denominators.
    pub(crate) fn scaled_to_gauss(&self, scale: &BigInt) -> GaussInt {
        let re = &self.re * BigRational::from_integer(scale.clone());
        let im = &self.im * BigRational::from_integer(scale.clone());
        debug_assert!(re.is_integer() && im.is_integer());
        GaussInt::new(re.to_integer(), im.to_integer())
    }

    pub(crate) fn from_gauss_ratio(num: &GaussInt, den: &GaussInt) -> Self {
        let n = den.norm();
        let top = num * &den.conj();
        Scalar::new(
            BigRational::new(top.re.clone(), n.clone()),
            BigRational::new(top.im.clone(), n),
        )
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::new(&self.re * &rhs.re, BigRational::zero());
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if *im == -BigRational::one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(im))
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", fmt_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}", imag(&self.im))
        } else if self.im.is_negative() {
            write!(f, "{}-{}", fmt_rational(&self.re), imag(&-self.im.clone()))
        } else {
            write!(f, "{}+{}", fmt_rational(&self.re), imag(&self.im))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid Gaussian rational literal `{0}`")]
pub struct ParseScalarError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let valid = |t: &str| {
        let t = t.strip_prefix(['+', '-']).unwrap_or(t);
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    match s.split_once('/') {
        Some((n, d)) => {
            if !valid(n) || !d.bytes().all(|b| b.is_ascii_digit()) || d.is_empty() {
                return None;
            }
            let n: BigInt = n.trim_start_matches('+').parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => {
            if !valid(s) {
                return None;
            }
            Some(BigRational::from_integer(s.trim_start_matches('+').parse().ok()?))
        }
    }
}

fn parse_imag_coeff(s: &str) -> Option<BigRational> {
    match s {
        "" | "+" => Some(BigRational::one()),
        "-" => Some(-BigRational::one()),
        _ => parse_rational(s),
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    /// Accepts `3`, `-2/5`, `i`, `-3i`, `1-2i`, `1/2+3/4i`.
    fn from_str(src: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(src.to_string());
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        if let Some(body) = s.strip_suffix('i') {
            // split at the last sign that is not the leading one
            let split = body
                .char_indices()
                .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
                .map(|(k, _)| k)
                .next_back();
            let (re, im) = match split {
                Some(k) => (parse_rational(&body[..k]).ok_or_else(err)?, &body[k..]),
                None => (BigRational::zero(), body),
            };
            let im = parse_imag_coeff(im).ok_or_else(err)?;
            Ok(Scalar::new(re, im))
        } else {
            Ok(Scalar::from_rational(parse_rational(&s).ok_or_else(err)?))
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for lit in ["0", "3", "-2/5", "i", "-i", "-3i", "1-2i", "1/2+3/4i", "7/3-i"] {
            assert_eq!(s(lit).to_string(), lit);
        }
        assert_eq!(s("+2"), Scalar::from_int(2));
        assert_eq!(s(" 1 - 2i "), Scalar::gaussian(1, -2));
        assert_eq!(s("4/6"), Scalar::ratio(2, 3));
    }

    #[test]
    fn rejects_garbage() {
        for lit in ["", "1/0", "abc", "1//2", "2j", "--1", "1+"] {
            assert!(lit.parse::<Scalar>().is_err(), "{lit}");
        }
    }

    #[test]
    fn field_operations() {
        let a = Scalar::gaussian(1, 2);
        let b = Scalar::gaussian(3, -1);
        assert_eq!(&a * &b, Scalar::gaussian(5, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a * &a.inv(), Scalar::one());
        assert_eq!(Scalar::i().pow(2), Scalar::from_int(-1));
        assert_eq!(Scalar::i().pow(4), Scalar::one());
        assert!(Scalar::zero().checked_inv().is_none());
        assert!((-Scalar::i()).is_unit_root());
        assert!(!Scalar::gaussian(1, 1).is_unit_root());
    }

    #[test]
    fn conj_product_is_nonnegative_real() {
        let a = s("-3/7+5/2i");
        let p = &a * &a.conj();
        assert!(p.is_real());
        assert!(!p.re().is_negative());
        assert_eq!(p.re().clone(), a.norm_sqr());
    }
}
