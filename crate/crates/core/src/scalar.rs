//! Exact scalars in the field ℚ(i, √2).
//!
//! Every element is stored as `r0 + r1·√2 + r2·i + r3·i√2` with arbitrary
//! precision rational coefficients. Arithmetic is exact; the only place a
//! float ever appears is [`ExactScalar::to_complex`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use nalgebra::Complex;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Element `a + b·√2` of the real quadratic field ℚ(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self { a, b: BigRational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn sqrt2() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate `a − b·√2`.
    pub fn galois(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`; nonzero for every nonzero element since √2 is irrational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - BigRational::from_integer(2.into()) * &self.b * &self.b
    }

    /// Sign of the real number `a + b·√2`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // opposite signs: compare a² with 2b²
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from_integer(2.into()) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let g = self.galois();
        Some(Self::new(g.a / &n, g.b / &n))
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * std::f64::consts::SQRT_2
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from_integer(2.into());
        QSqrt2::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-self.a.clone(), -self.b.clone())
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    // numerator and denominator may overflow f64 individually (e.g. 200!)
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact element `r0 + r1·√2 + r2·i + r3·i√2` of ℚ(i, √2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    re: QSqrt2,
    im: QSqrt2,
}

impl ExactScalar {
    pub fn new(r0: BigRational, r1: BigRational, r2: BigRational, r3: BigRational) -> Self {
        Self { re: QSqrt2::new(r0, r1), im: QSqrt2::new(r2, r3) }
    }

    pub fn from_parts(re: QSqrt2, im: QSqrt2) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn i() -> Self {
        Self::from_parts(QSqrt2::zero(), QSqrt2::one())
    }

    pub fn sqrt2() -> Self {
        Self::from_parts(QSqrt2::sqrt2(), QSqrt2::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_parts(QSqrt2::rational(r), QSqrt2::zero())
    }

    /// Coefficients `(r0, r1, r2, r3)`.
    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.re.a, &self.re.b, &self.im.a, &self.im.b]
    }

    pub fn re(&self) -> &QSqrt2 {
        &self.re
    }

    pub fn im(&self) -> &QSqrt2 {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as a plain rational, if it has no √2 or i part.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.re.b.is_zero() && self.im.is_zero()).then_some(&self.re.a)
    }

    /// Complex conjugation `i ↦ −i`; √2 is fixed.
    pub fn conj(&self) -> Self {
        Self::from_parts(self.re.clone(), -&self.im)
    }

    /// `|z|² = re² + im²`, an element of ℚ(√2).
    pub fn norm_sqr(&self) -> QSqrt2 {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr().inv()?;
        let c = self.conj();
        Some(Self::from_parts(&c.re * &d, &c.im * &d))
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn to_complex(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    /// True when the display form is a single negative rational multiple of a unit,
    /// so sums can print it as `- x` instead of `+ -x`.
    pub(crate) fn is_simple_negative(&self) -> bool {
        let nonzero: Vec<&BigRational> =
            self.coefficients().into_iter().filter(|c| !c.is_zero()).collect();
        nonzero.len() == 1 && nonzero[0].is_negative()
    }

    pub(crate) fn is_compound(&self) -> bool {
        self.coefficients().into_iter().filter(|c| !c.is_zero()).count() > 1
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$m(rhs)
            }
        }
    };
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::from_parts(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::from_parts(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        ExactScalar::from_parts(re, im)
    }
}

/// Panics on division by zero, like the integer types.
impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero in ExactScalar")
    }
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::from_parts(-&self.re, -&self.im)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("({}/{})", r.numer(), r.denom())
    }
}

/// Formats as e.g. `(1/2) + (-1/2)*sqrt2*i`; zero prints as `0`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = ["", "sqrt2", "i", "sqrt2*i"];
        let mut parts = Vec::new();
        for (c, unit) in self.coefficients().into_iter().zip(units) {
            if c.is_zero() {
                continue;
            }
            let part = if unit.is_empty() {
                fmt_rational(c)
            } else if c.is_one() {
                unit.to_string()
            } else if *c == -BigRational::one() {
                format!("-{unit}")
            } else {
                format!("{}*{unit}", fmt_rational(c))
            };
            parts.push(part);
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let s = ExactScalar::sqrt2();
        assert_eq!(&s * &s, ExactScalar::from_int(2));
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = ExactScalar::i();
        assert_eq!(&i * &i, ExactScalar::from_int(-1));
    }

    #[test]
    fn inverse_of_mixed_element() {
        let z = ExactScalar::new(q(1, 2), q(3, 1), q(-2, 5), q(7, 3));
        let w = z.inv().unwrap();
        assert!((&z * &w).is_one());
        assert!(ExactScalar::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        let z = ExactScalar::new(q(1, 2), q(0, 1), q(0, 1), q(-1, 2));
        assert_eq!(z.to_string(), "(1/2) + (-1/2)*sqrt2*i");
        assert_eq!(ExactScalar::from_int(-3).to_string(), "-3");
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!((-ExactScalar::i()).to_string(), "-i");
    }

    #[test]
    fn signum_of_near_cancellation() {
        // 3 − 2√2 ≈ 0.17 > 0, 1 − √2 < 0
        assert_eq!(QSqrt2::new(q(3, 1), q(-2, 1)).signum(), Ordering::Greater);
        assert_eq!(QSqrt2::new(q(1, 1), q(-1, 1)).signum(), Ordering::Less);
        assert_eq!(QSqrt2::new(q(-7, 5), q(1, 1)).signum(), Ordering::Greater);
    }

    #[test]
    fn embedding_matches_float_value() {
        let z = ExactScalar::new(q(1, 3), q(-1, 1), q(2, 1), q(1, 4));
        let c = z.to_complex();
        assert!((c.re - (1.0 / 3.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((c.im - (2.0 + 2f64.sqrt() / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn huge_factorial_converts() {
        let r = BigRational::new(factorial(200), factorial(199));
        assert_eq!(rat_to_f64(&r), 200.0);
        let big = BigRational::from_integer(factorial(170));
        assert!(rat_to_f64(&big).is_finite());
    }
}
