//! Iteration of `T(x) = ⌊βx⌋ + 1 − βx` on `(0, 1]`, expansions, and the
//! admissibility test for the shift space.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebraic::{b_of, roots_above_one, AlgebraicNumber};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::scalar::{BaseScalar, QuadraticNumber};
use crate::words::{alt_lex_cmp_iter, Digit, EventuallyPeriodicWord};

/// Interval precision schedule for the algebraic backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { start_bits: 128, max_bits: 4096 }
    }
}

/// A base `β > 1` together with a representation of points of `(0, 1]`.
pub trait NegativeBase {
    type Point: Clone + fmt::Debug;
    type Key: Hash + Eq + Clone;

    fn one(&self) -> Self::Point;
    fn point_from_rational(&self, x: &BigRational) -> Self::Point;
    /// `⌊βx⌋`.
    fn digit(&self, x: &Self::Point) -> Result<BigInt>;
    /// `d + 1 − βx`.
    fn advance(&self, x: &Self::Point, digit: &BigInt) -> Self::Point;
    fn cmp_points(&self, x: &Self::Point, y: &Self::Point) -> Result<Ordering>;
    /// Exact identity of a point, when one can be certified.
    fn key(&self, x: &Self::Point) -> Option<Self::Key>;
    fn point_to_f64(&self, x: &Self::Point) -> f64;
}

/// A base held as a value of a [`BaseScalar`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarBase<T> {
    beta: T,
}

impl<T: BaseScalar> ScalarBase<T> {
    pub fn new(beta: T) -> Result<Self> {
        if beta.partial_cmp(&T::one()) != Some(Ordering::Greater) {
            return Err(Error::MalformedBeta(format!("{beta:?} is not greater than 1")));
        }
        Ok(ScalarBase { beta })
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }
}

impl<T: BaseScalar> NegativeBase for ScalarBase<T> {
    type Point = T;
    type Key = T::Key;

    fn one(&self) -> T {
        T::one()
    }

    fn point_from_rational(&self, x: &BigRational) -> T {
        T::from_rational(x)
    }

    fn digit(&self, x: &T) -> Result<BigInt> {
        Ok((self.beta.clone() * x.clone()).floor_int())
    }

    fn advance(&self, x: &T, digit: &BigInt) -> T {
        T::from_integer(&(digit + 1)) - self.beta.clone() * x.clone()
    }

    fn cmp_points(&self, x: &T, y: &T) -> Result<Ordering> {
        x.partial_cmp(y).ok_or_else(|| Error::InvalidArgument("points are not comparable".into()))
    }

    fn key(&self, x: &T) -> Option<T::Key> {
        x.key()
    }

    fn point_to_f64(&self, x: &T) -> f64 {
        x.to_f64()
    }
}

/// A base given as a real algebraic number. Points are elements of `Q(β)`
/// written as polynomials in `β` reduced modulo its minimal polynomial.
#[derive(Debug, Clone)]
pub struct AlgebraicBase {
    beta: AlgebraicNumber,
    modulus: Vec<BigRational>,
    precision: Precision,
}

type FieldElement = Vec<BigRational>;

impl AlgebraicBase {
    pub fn new(beta: AlgebraicNumber, precision: Precision) -> Result<Self> {
        if beta.cmp_rational(&BigRational::one()) != Ordering::Greater {
            return Err(Error::MalformedBeta(format!("{beta} is not greater than 1")));
        }
        let m = beta.minimal_polynomial();
        let lead = BigRational::from_integer(m.leading());
        let modulus = m.coefficients().iter().map(|c| BigRational::from_integer(c.clone()) / &lead).collect();
        Ok(AlgebraicBase { beta, modulus, precision })
    }

    pub fn beta(&self) -> &AlgebraicNumber {
        &self.beta
    }

    fn trim(mut v: FieldElement) -> FieldElement {
        while v.last().is_some_and(Zero::is_zero) {
            v.pop();
        }
        v
    }

    /// `β · x` reduced modulo the monic minimal polynomial.
    fn times_beta(&self, x: &FieldElement) -> FieldElement {
        let d = self.modulus.len() - 1;
        let mut out = vec![BigRational::zero(); x.len() + 1];
        for (i, c) in x.iter().enumerate() {
            out[i + 1] = c.clone();
        }
        if out.len() > d {
            let top = out[d].clone();
            if !top.is_zero() {
                for (o, m) in out.iter_mut().zip(&self.modulus[..d]) {
                    *o -= &top * m;
                }
            }
            out.truncate(d);
        }
        Self::trim(out)
    }

    /// Interval enclosure of `x(β)` at the given precision.
    fn enclose(&self, x: &FieldElement, bits: u32) -> (BigRational, BigRational) {
        let (lo, hi) = self.beta.refine_bits(bits);
        let mut acc = (BigRational::zero(), BigRational::zero());
        for c in x.iter().rev() {
            let products = [&acc.0 * &lo, &acc.0 * &hi, &acc.1 * &lo, &acc.1 * &hi];
            let min = products.iter().min().unwrap().clone();
            let max = products.iter().max().unwrap().clone();
            acc = (min + c, max + c);
        }
        acc
    }

    fn is_zero_at_beta(&self, x: &FieldElement) -> bool {
        if x.iter().all(Zero::is_zero) {
            return true;
        }
        let den = x.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        let coeffs = x.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        self.beta.is_root_of(&IntPolynomial::new(coeffs))
    }

    fn sign_of(&self, x: &FieldElement) -> Result<Sign> {
        if self.is_zero_at_beta(x) {
            return Ok(Sign::NoSign);
        }
        let mut bits = self.precision.start_bits;
        loop {
            let (lo, hi) = self.enclose(x, bits);
            if lo.is_positive() {
                return Ok(Sign::Plus);
            }
            if hi.is_negative() {
                return Ok(Sign::Minus);
            }
            if bits >= self.precision.max_bits {
                return Err(Error::UndecidableAtPrecision { straddled: BigInt::zero(), bits });
            }
            bits = (bits * 2).min(self.precision.max_bits);
        }
    }
}

fn sub_elements(x: &FieldElement, y: &FieldElement) -> FieldElement {
    let n = x.len().max(y.len());
    let get = |v: &FieldElement, i: usize| v.get(i).cloned().unwrap_or_else(BigRational::zero);
    AlgebraicBase::trim((0..n).map(|i| get(x, i) - get(y, i)).collect())
}

impl NegativeBase for AlgebraicBase {
    type Point = FieldElement;
    type Key = FieldElement;

    fn one(&self) -> FieldElement {
        vec![BigRational::one()]
    }

    fn point_from_rational(&self, x: &BigRational) -> FieldElement {
        Self::trim(vec![x.clone()])
    }

    fn digit(&self, x: &FieldElement) -> Result<BigInt> {
        let bx = self.times_beta(x);
        let mut bits = self.precision.start_bits;
        loop {
            let (lo, hi) = self.enclose(&bx, bits);
            let f_lo = lo.floor().to_integer();
            let f_hi = hi.floor().to_integer();
            if f_lo == f_hi {
                return Ok(f_lo);
            }
            let k = f_hi;
            let shifted = sub_elements(&bx, &vec![BigRational::from_integer(k.clone())]);
            if self.is_zero_at_beta(&shifted) {
                return Ok(k);
            }
            if bits >= self.precision.max_bits {
                return Err(Error::UndecidableAtPrecision { straddled: k, bits });
            }
            bits = (bits * 2).min(self.precision.max_bits);
        }
    }

    fn advance(&self, x: &FieldElement, digit: &BigInt) -> FieldElement {
        let bx = self.times_beta(x);
        sub_elements(&vec![BigRational::from_integer(digit + 1)], &bx)
    }

    fn cmp_points(&self, x: &FieldElement, y: &FieldElement) -> Result<Ordering> {
        Ok(match self.sign_of(&sub_elements(x, y))? {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }

    fn key(&self, x: &FieldElement) -> Option<FieldElement> {
        Some(x.clone())
    }

    fn point_to_f64(&self, x: &FieldElement) -> f64 {
        let (lo, hi) = self.enclose(x, 64);
        ToPrimitive::to_f64(&((lo + hi) / BigRational::from_integer(2.into()))).unwrap_or(f64::NAN)
    }
}

/// A point of `(0, 1]` and the digits produced so far.
#[derive(Debug, Clone)]
pub struct ExpansionState<P> {
    pub point: P,
    pub digits: Vec<Digit>,
}

fn to_digit(d: BigInt) -> Result<Digit> {
    d.to_u32().ok_or_else(|| Error::Resource(format!("digit {d} does not fit the digit type")))
}

/// Appends one digit and advances the point.
pub fn step<B: NegativeBase>(base: &B, state: &ExpansionState<B::Point>) -> Result<ExpansionState<B::Point>> {
    let d = base.digit(&state.point)?;
    let point = base.advance(&state.point, &d);
    let mut digits = state.digits.clone();
    digits.push(to_digit(d)?);
    Ok(ExpansionState { point, digits })
}

/// The first `k` digits of the expansion of `x` together with the orbit
/// `x, T(x), …, T^k(x)`.
pub fn expand<B: NegativeBase>(base: &B, x: B::Point, k: usize) -> Result<(Vec<Digit>, Vec<B::Point>)> {
    let mut orbit = vec![x];
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let cur = orbit.last().unwrap();
        let d = base.digit(cur)?;
        let next = base.advance(cur, &d);
        digits.push(to_digit(d)?);
        orbit.push(next);
    }
    Ok((digits, orbit))
}

/// Result of expanding 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    /// A certified exact repeat of the orbit was found.
    Periodic(EventuallyPeriodicWord),
    /// No repeat certified within the digit budget.
    Prefix(Vec<Digit>),
}

impl Expansion {
    pub fn periodic(&self) -> Option<&EventuallyPeriodicWord> {
        match self {
            Expansion::Periodic(w) => Some(w),
            Expansion::Prefix(_) => None,
        }
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expansion::Periodic(w) => write!(f, "{w}"),
            Expansion::Prefix(d) => write!(f, "{}...", crate::words::format_digits(d)),
        }
    }
}

impl Serialize for Expansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub fn expansion_of_one<B: NegativeBase>(base: &B, max_digits: usize, detect_period: bool) -> Result<Expansion> {
    let mut seen: HashMap<B::Key, usize> = HashMap::new();
    let mut x = base.one();
    let mut digits = Vec::new();
    if detect_period {
        if let Some(k) = base.key(&x) {
            seen.insert(k, 0);
        }
    }
    while digits.len() < max_digits {
        let d = base.digit(&x)?;
        x = base.advance(&x, &d);
        digits.push(to_digit(d)?);
        if detect_period {
            if let Some(k) = base.key(&x) {
                if let Some(&j) = seen.get(&k) {
                    return Ok(Expansion::Periodic(EventuallyPeriodicWord::canonicalize(&digits[..j], &digits[j..])));
                }
                seen.insert(k, digits.len());
            }
        }
    }
    Ok(Expansion::Prefix(digits))
}

/// Digits of `x` in a rational base, keeping every orbit point over the
/// common denominator `q^k · den(x)`. For a non-integer base the orbit of 1
/// is never eventually periodic, since a repeat would make `β` a root of a
/// monic integer polynomial.
fn rational_digits(beta: &BigRational, x: &BigRational, k: usize) -> Result<Vec<Digit>> {
    let (p, q) = (beta.numer(), beta.denom());
    let (mut num, mut den) = (x.numer().clone(), x.denom().clone());
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let px = p * &num;
        den *= q;
        let d = px.div_floor(&den);
        num = (&d + 1u32) * &den - px;
        digits.push(to_digit(d)?);
    }
    Ok(digits)
}

/// Lower bound of the shift space: `(0 d_1 … d_{p-1} (d_p − 1))^∞` when `d1`
/// is purely periodic with odd period `p`, otherwise `0 d1`.
pub fn lower_bound(d1: &EventuallyPeriodicWord) -> EventuallyPeriodicWord {
    let p = d1.period();
    if d1.is_purely_periodic() && p.len() % 2 == 1 && p[p.len() - 1] > 0 {
        let mut period = vec![0];
        period.extend_from_slice(p);
        *period.last_mut().unwrap() -= 1;
        EventuallyPeriodicWord::periodic(&period)
    } else {
        d1.with_prefix(&[0])
    }
}

/// Whether every tail `t` of `w` satisfies `d1 ≥ t > lower_bound(d1)`.
pub fn shift_membership(w: &EventuallyPeriodicWord, d1: &EventuallyPeriodicWord) -> bool {
    let low = lower_bound(d1);
    (1..=w.num_tails()).all(|k| {
        let t = w.tail(k);
        d1.alt_lex_cmp(&t) != Ordering::Less && t.alt_lex_cmp(&low) == Ordering::Greater
    })
}

/// Membership against an expansion of 1 that is only known as a growing
/// prefix. `more(n)` must return at least `n` digits of `d(1)` or fail.
pub fn shift_membership_lazy<F>(w: &EventuallyPeriodicWord, mut more: F, max_digits: usize) -> Result<bool>
where
    F: FnMut(usize) -> Result<Vec<Digit>>,
{
    let mut len = 64.max(2 * (w.preperiod().len() + w.period().len()));
    loop {
        let d1 = more(len)?;
        let mut undecided = false;
        for k in 1..=w.num_tails() {
            let t = w.tail(k);
            let upper = alt_lex_cmp_iter(d1.iter().copied(), t.digits().take(len));
            let lower = alt_lex_cmp_iter(t.digits().take(len), std::iter::once(0).chain(d1.iter().copied()).take(len));
            match (upper, lower) {
                (Some(Ordering::Less), _) | (_, Some(Ordering::Less)) => return Ok(false),
                (Some(_), Some(_)) => {}
                _ => undecided = true,
            }
        }
        if !undecided {
            return Ok(true);
        }
        if len >= max_digits {
            return Err(Error::SearchInconclusive(format!(
                "membership of {w} undecided after {len} digits of the expansion of 1"
            )));
        }
        len = (len * 2).min(max_digits);
    }
}

/// Exact or certified base value.
#[derive(Debug, Clone)]
pub enum BetaValue {
    Rational(BigRational),
    Quadratic(QuadraticNumber),
    Algebraic(AlgebraicNumber),
}

impl BetaValue {
    /// Picks the most exact backend: rational, quadratic field, or
    /// interval arithmetic over the minimal polynomial.
    pub fn from_algebraic(num: &AlgebraicNumber) -> Self {
        if let Some(r) = num.as_rational() {
            return BetaValue::Rational(r);
        }
        let m = num.minimal_polynomial();
        if m.degree() == Some(2) {
            let c = m.coefficients();
            if let Some((lo, hi)) = QuadraticNumber::roots_of_quadratic(&c[2], &c[1], &c[0]) {
                let v = num.to_f64();
                let pick = if (hi.to_f64() - v).abs() <= (lo.to_f64() - v).abs() { hi } else { lo };
                return BetaValue::Quadratic(pick);
            }
        }
        BetaValue::Algebraic(num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            BetaValue::Rational(r) => ToPrimitive::to_f64(r).unwrap_or(f64::NAN),
            BetaValue::Quadratic(q) => q.to_f64(),
            BetaValue::Algebraic(a) => a.to_f64(),
        }
    }

    pub fn to_algebraic(&self) -> AlgebraicNumber {
        match self {
            BetaValue::Rational(r) => AlgebraicNumber::from_rational(r.clone()),
            BetaValue::Quadratic(q) => {
                let (a, b, d) = (q.rational_part(), q.irrational_coefficient(), q.radicand());
                // (den x - A)^2 = B^2 d with A = den a and B = den b.
                let den = num_integer::lcm(a.denom().clone(), b.denom().clone());
                let denr = BigRational::from_integer(den.clone());
                let big_a: BigInt = (a * &denr).to_integer();
                let big_b: BigInt = (b * &denr).to_integer();
                let poly = IntPolynomial::new(vec![
                    &big_a * &big_a - &big_b * &big_b * d,
                    -(&big_a * &den) * BigInt::from(2),
                    &den * &den,
                ]);
                let v = q.to_f64();
                let width = BigRational::new(1.into(), BigInt::one() << 20);
                let center = BigRational::from_float(v).unwrap_or_default();
                let mut lo = &center - &width;
                let mut hi = &center + &width;
                loop {
                    if let Some(n) = AlgebraicNumber::from_isolating(&poly, lo.clone(), hi.clone()) {
                        return n;
                    }
                    lo = &lo - &width;
                    hi = &hi + &width;
                }
            }
            BetaValue::Algebraic(a) => a.clone(),
        }
    }

    fn invalid(&self) -> bool {
        match self {
            BetaValue::Rational(r) => r <= &BigRational::one(),
            BetaValue::Quadratic(q) => q <= &QuadraticNumber::one(),
            BetaValue::Algebraic(a) => a.cmp_rational(&BigRational::one()) != Ordering::Greater,
        }
    }

    /// Expansion of 1 with the backend matching the value.
    pub fn expansion_of_one(&self, max_digits: usize, detect_period: bool, precision: Precision) -> Result<Expansion> {
        match self {
            BetaValue::Rational(r) if !r.is_integer() => {
                ScalarBase::new(r.clone())?;
                Ok(Expansion::Prefix(rational_digits(r, &BigRational::one(), max_digits)?))
            }
            BetaValue::Rational(r) => expansion_of_one(&ScalarBase::new(r.clone())?, max_digits, detect_period),
            BetaValue::Quadratic(q) => expansion_of_one(&ScalarBase::new(q.clone())?, max_digits, detect_period),
            BetaValue::Algebraic(a) => {
                expansion_of_one(&AlgebraicBase::new(a.clone(), precision)?, max_digits, detect_period)
            }
        }
    }

    /// Digits of the expansion of a rational `x ∈ (0, 1]`.
    pub fn expand_rational(&self, x: &BigRational, k: usize, precision: Precision) -> Result<Vec<Digit>> {
        check_unit_interval(x)?;
        Ok(match self {
            BetaValue::Rational(r) => {
                ScalarBase::new(r.clone())?;
                rational_digits(r, x, k)?
            }
            BetaValue::Quadratic(q) => {
                let b = ScalarBase::new(q.clone())?;
                expand(&b, b.point_from_rational(x), k)?.0
            }
            BetaValue::Algebraic(a) => {
                let b = AlgebraicBase::new(a.clone(), precision)?;
                expand(&b, b.point_from_rational(x), k)?.0
            }
        })
    }

    /// Whether `w` lies in the shift space of this base.
    pub fn admits(&self, w: &EventuallyPeriodicWord, max_digits: usize, precision: Precision) -> Result<bool> {
        let budget = 4 * (w.preperiod().len() + w.period().len()) + 256;
        match self.expansion_of_one(budget.min(max_digits), true, precision)? {
            Expansion::Periodic(d1) => Ok(shift_membership(w, &d1)),
            Expansion::Prefix(_) => {
                let mut cache: Vec<Digit> = Vec::new();
                shift_membership_lazy(
                    w,
                    |n| {
                        if cache.len() < n {
                            cache = match self.expansion_of_one(n, false, precision)? {
                                Expansion::Prefix(d) => d,
                                Expansion::Periodic(w) => w.prefix(n),
                            };
                        }
                        Ok(cache.clone())
                    },
                    max_digits,
                )
            }
        }
    }
}

/// The shift space of a fixed base, with the expansion of 1 computed once.
#[derive(Debug, Clone)]
pub struct ShiftSpace {
    expansion: Expansion,
    max_digit: Digit,
}

impl ShiftSpace {
    /// Expands 1 up to `digits` digits, detecting a period when possible.
    pub fn new(beta: &BetaValue, digits: usize, precision: Precision) -> Result<Self> {
        let expansion = beta.expansion_of_one(digits, true, precision)?;
        let max_digit = match &expansion {
            Expansion::Periodic(w) => w.digit_at(1),
            Expansion::Prefix(d) => d.first().copied().unwrap_or(0),
        };
        Ok(ShiftSpace { expansion, max_digit })
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    /// `⌊β⌋`, the largest admissible digit.
    pub fn max_digit(&self) -> Digit {
        self.max_digit
    }

    pub fn admits(&self, w: &EventuallyPeriodicWord) -> Result<bool> {
        match &self.expansion {
            Expansion::Periodic(d1) => Ok(shift_membership(w, d1)),
            Expansion::Prefix(d) => shift_membership_lazy(w, |_| Ok(d.clone()), d.len()),
        }
    }
}

fn check_unit_interval(x: &BigRational) -> Result<()> {
    if x.is_positive() && x <= &BigRational::one() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{x} is not in (0, 1]")))
    }
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            BetaValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            BetaValue::Quadratic(q) => write!(f, "{q}"),
            BetaValue::Algebraic(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for BetaValue {
    type Err = Error;

    /// Accepts `p/q`, an integer, or `poly:c_d,…,c_0:k` selecting the
    /// `k`-th real root above 1 (1-based, increasing) of the polynomial with
    /// the given descending coefficients.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::MalformedBeta(format!("{s}: {why}"));
        let value = if let Some(rest) = s.strip_prefix("poly:") {
            let (coeffs, k) = rest.rsplit_once(':').ok_or_else(|| bad("expected poly:coeffs:k"))?;
            let k: usize = k.trim().parse().map_err(|_| bad("root index"))?;
            let desc: Vec<BigInt> = coeffs
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad("coefficient")))
                .collect::<Result<_>>()?;
            let poly = IntPolynomial::new(desc.into_iter().rev().collect());
            let root = kth_root_above_one(&poly, k).ok_or_else(|| bad("no such root above 1"))?;
            BetaValue::from_algebraic(&root)
        } else {
            let r = match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| bad("numerator"))?;
                    let q: BigInt = q.trim().parse().map_err(|_| bad("denominator"))?;
                    if q.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    BigRational::new(p, q)
                }
                None => BigRational::from_integer(s.parse().map_err(|_| bad("expected p/q or poly:coeffs:k"))?),
            };
            BetaValue::Rational(r)
        };
        if value.invalid() {
            return Err(bad("base must exceed 1"));
        }
        Ok(value)
    }
}

/// The `k`-th (1-based, increasing) real root above 1.
pub fn kth_root_above_one(poly: &IntPolynomial, k: usize) -> Option<AlgebraicNumber> {
    roots_above_one(poly).into_iter().nth(k.checked_sub(1)?)
}

/// Whether `w` is the expansion of 1 in base `b(w)`.
pub fn validate_expansion(w: &EventuallyPeriodicWord, precision: Precision) -> Result<bool> {
    if !w.is_sup_fixed() {
        return Ok(false);
    }
    let b = b_of(w)?;
    if b.is_one() {
        return Ok(false);
    }
    let beta = BetaValue::from_algebraic(&b);
    let budget = w.preperiod().len() + w.period().len() + 1;
    Ok(beta.expansion_of_one(budget, true, precision)?.periodic() == Some(w))
}
