//! Scalar types usable as a base: exact rationals, exact elements of a real
//! quadratic field, and `f64` for quick approximate runs.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Arithmetic needed to iterate `x ↦ ⌊βx⌋ + 1 − βx`.
pub trait BaseScalar:
    Clone
    + fmt::Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    /// Hashable exact identity of a value.
    type Key: Hash + Eq + Clone + fmt::Debug;

    /// Whether arithmetic and comparisons are exact.
    const EXACT: bool;

    fn from_integer(k: &BigInt) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn floor_int(&self) -> BigInt;
    fn to_f64(&self) -> f64;
    /// `None` when equality cannot be certified.
    fn key(&self) -> Option<Self::Key>;
}

impl BaseScalar for BigRational {
    type Key = BigRational;
    const EXACT: bool = true;

    fn from_integer(k: &BigInt) -> Self {
        BigRational::from_integer(k.clone())
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn floor_int(&self) -> BigInt {
        self.floor().to_integer()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn key(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

impl BaseScalar for f64 {
    type Key = u64;
    const EXACT: bool = false;

    fn from_integer(k: &BigInt) -> Self {
        ToPrimitive::to_f64(k).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn floor_int(&self) -> BigInt {
        BigInt::from_f64(self.floor()).unwrap_or_default()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn key(&self) -> Option<u64> {
        None
    }
}

/// `a + b√d` with rational `a`, `b` and squarefree `d > 1`. Values with
/// `b = 0` are stored with `d = 0` and combine with any field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: BigRational,
    b: BigRational,
    d: BigInt,
}

fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut f = BigInt::from(2);
    while &f * &f <= rest {
        let f2 = &f * &f;
        while (&rest % &f2).is_zero() {
            rest /= &f2;
            square *= &f;
        }
        f += 1;
    }
    (square, rest)
}

impl QuadraticNumber {
    /// `a + b√n` for any positive integer `n`; square factors of `n` are
    /// pulled out.
    pub fn new(a: BigRational, b: BigRational, n: BigInt) -> Self {
        assert!(n.is_positive(), "radicand must be positive");
        let (s, d) = squarefree_split(&n);
        let b = b * BigRational::from_integer(s);
        if d.is_one() {
            return Self::rational(a + b);
        }
        Self::normalized(a, b, d)
    }

    pub fn rational(a: BigRational) -> Self {
        QuadraticNumber { a, b: BigRational::zero(), d: BigInt::zero() }
    }

    fn normalized(a: BigRational, b: BigRational, d: BigInt) -> Self {
        if b.is_zero() {
            Self::rational(a)
        } else {
            QuadraticNumber { a, b, d }
        }
    }

    /// The two real roots of `A x² + B x + C`, smaller first, if the
    /// discriminant is positive.
    pub fn roots_of_quadratic(a: &BigInt, b: &BigInt, c: &BigInt) -> Option<(Self, Self)> {
        let disc = b * b - BigInt::from(4) * a * c;
        if !disc.is_positive() {
            return None;
        }
        let two_a = BigRational::from_integer(a * 2);
        let center = BigRational::from_integer(-b) / &two_a;
        let coef = BigRational::one() / &two_a;
        let r1 = Self::new(center.clone(), -coef.clone(), disc.clone());
        let r2 = Self::new(center, coef, disc);
        if r1 < r2 {
            Some((r1, r2))
        } else {
            Some((r2, r1))
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    fn field(&self, other: &Self) -> BigInt {
        match (self.d.is_zero(), other.d.is_zero()) {
            (true, _) => other.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, other.d, "mixing different quadratic fields");
                self.d.clone()
            }
        }
    }

    pub fn sign(&self) -> Sign {
        let sa = self.a.numer().sign();
        let sb = self.b.numer().sign();
        if sb == Sign::NoSign {
            return sa;
        }
        if sa == Sign::NoSign || sa == sb {
            return sb;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Sign::NoSign,
        }
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |x: &BigRational| {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        if self.b.is_zero() {
            return f.write_str(&r(&self.a));
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{} {} {}*sqrt({})", r(&self.a), sign, r(&self.b.abs()), self.d)
    }
}

impl Add for QuadraticNumber {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::normalized(self.a + o.a, self.b + o.b, d)
    }
}

impl Sub for QuadraticNumber {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = self.field(&o);
        Self::normalized(self.a - o.a, self.b - o.b, d)
    }
}

impl Neg for QuadraticNumber {
    type Output = Self;
    fn neg(self) -> Self {
        QuadraticNumber { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for QuadraticNumber {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.field(&o);
        let dr = BigRational::from_integer(d.clone());
        let a = &self.a * &o.a + &self.b * &o.b * dr;
        let b = &self.a * &o.b + &self.b * &o.a;
        Self::normalized(a, b, d)
    }
}

impl Zero for QuadraticNumber {
    fn zero() -> Self {
        Self::rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadraticNumber {
    fn one() -> Self {
        Self::rational(BigRational::one())
    }
}

impl PartialOrd for QuadraticNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadraticNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.clone() - other.clone()).sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl BaseScalar for QuadraticNumber {
    type Key = QuadraticNumber;
    const EXACT: bool = true;

    fn from_integer(k: &BigInt) -> Self {
        Self::rational(BigRational::from_integer(k.clone()))
    }

    fn from_rational(r: &BigRational) -> Self {
        Self::rational(r.clone())
    }

    fn floor_int(&self) -> BigInt {
        // (A + B√d) / L with an integer square root lands within one of the floor
        let l = num_integer::Integer::lcm(self.a.denom(), self.b.denom());
        let big_a = self.a.numer() * (&l / self.a.denom());
        let big_b = self.b.numer() * (&l / self.b.denom());
        let s = (&big_b * &big_b * &self.d).sqrt();
        let approx = if big_b.is_negative() { big_a - s } else { big_a + s };
        let mut k = num_integer::Integer::div_floor(&approx, &l);
        while *self < Self::from_integer(&k) {
            k -= 1;
        }
        while *self >= Self::from_integer(&(&k + 1)) {
            k += 1;
        }
        k
    }

    fn to_f64(&self) -> f64 {
        let a = ToPrimitive::to_f64(&self.a).unwrap_or(f64::NAN);
        let b = ToPrimitive::to_f64(&self.b).unwrap_or(f64::NAN);
        let d = ToPrimitive::to_f64(&self.d).unwrap_or(f64::NAN);
        if self.b.is_zero() {
            a
        } else {
            a + b * d.sqrt()
        }
    }

    fn key(&self) -> Option<Self> {
        Some(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, den: i64, n: i64) -> QuadraticNumber {
        QuadraticNumber::new(BigRational::new(a.into(), den.into()), BigRational::new(b.into(), den.into()), n.into())
    }

    #[test]
    fn field_arithmetic() {
        let phi = q(1, 1, 2, 5);
        assert_eq!(phi.clone() * phi.clone(), phi.clone() + QuadraticNumber::one());
        assert_eq!(q(0, 2, 1, 8), q(0, 4, 1, 2));
        assert!(q(0, 1, 1, 4).radicand().is_zero());
        assert_eq!(phi.floor_int(), BigInt::from(1));
        let psi = q(1, -1, 2, 5);
        assert_eq!(psi.floor_int(), BigInt::from(-1));
        assert!(psi < QuadraticNumber::zero());
    }

    #[test]
    fn quadratic_roots() {
        let (lo, hi) = QuadraticNumber::roots_of_quadratic(&1.into(), &(-1).into(), &(-1).into()).unwrap();
        assert_eq!(hi, q(1, 1, 2, 5));
        assert_eq!(lo, q(1, -1, 2, 5));
        assert!(QuadraticNumber::roots_of_quadratic(&1.into(), &0.into(), &1.into()).is_none());
    }

    #[test]
    fn exact_sign_near_zero() {
        let x = q(3, -1, 1, 9 - 1);
        assert!(x.sign() == Sign::Plus);
        let tiny = QuadraticNumber::new(
            BigRational::new(1_000_001.into(), 1.into()),
            BigRational::new((-1_000).into(), 1.into()),
            1_000_002.into(),
        );
        assert_eq!(tiny.sign(), Sign::Plus);
    }

    #[test]
    fn floor_survives_cancellation() {
        let m = num_traits::pow(BigInt::from(10), 40);
        let n = (&m * &m * BigInt::from(2)).sqrt() + BigInt::from(1);
        // n − m√2 lies in (0, 1) while both terms are near 10^40
        let x = QuadraticNumber::new(
            BigRational::new(n * BigInt::from(7), 3.into()),
            BigRational::new(-m * BigInt::from(7), 3.into()),
            2.into(),
        );
        let k = x.floor_int();
        assert!(QuadraticNumber::from_integer(&k) <= x);
        assert!(x < QuadraticNumber::from_integer(&(k + 1)));
    }
}
