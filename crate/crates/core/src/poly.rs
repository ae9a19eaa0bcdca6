//! Dense integer polynomials with exact rational evaluation, gcds and
//! Sturm sequences.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Integer polynomial stored with ascending coefficients and no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds from coefficients listed from the highest degree down.
    pub fn from_descending_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    /// `q x - p` for the rational `p/q`.
    pub fn linear_with_root(r: &BigRational) -> Self {
        Self::new(vec![-r.numer().clone(), r.denom().clone()])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Nonnegative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| c / &g).collect() }
    }

    /// Same polynomial with a positive leading coefficient.
    pub fn sign_normalized(&self) -> Self {
        if self.leading().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Sign of `p(r)` computed on the homogenized numerator.
    pub fn sign_at(&self, r: &BigRational) -> Sign {
        let Some(d) = self.degree() else {
            return Sign::NoSign;
        };
        let (p, q) = (r.numer(), r.denom());
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        debug_assert_eq!(self.coeffs.len(), d + 1);
        // Horner on the homogeneous form: sum a_i p^i q^(d-i).
        for (k, c) in self.coeffs.iter().rev().enumerate() {
            if k == 0 {
                acc = c.clone();
            } else {
                qpow *= q;
                acc = acc * p + c * &qpow;
            }
        }
        acc.sign()
    }

    pub fn eval_rational(&self, r: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    /// Exact quotient `self / divisor` when it exists in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let sd = self.degree()?;
        if sd < dd {
            return None;
        }
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * c;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }

    /// Pseudo-remainder scaled by a positive factor, so the sign pattern of
    /// the true remainder is preserved.
    pub fn positive_pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let lead_abs = lead.abs();
        let lead_sign = BigInt::from(if lead.is_negative() { -1 } else { 1 });
        let mut rem = self.clone();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let top = rem.leading();
            let shift = rd - dd;
            let mut next = rem.scale(&lead_abs);
            let factor = &top * &lead_sign;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                next.coeffs[shift + i] -= &factor * c;
            }
            rem = Self::new(next.coeffs);
            let g = rem.content();
            if !g.is_zero() && !g.is_one() {
                rem = IntPolynomial { coeffs: rem.coeffs.iter().map(|c| c / &g).collect() };
            }
        }
        rem
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.positive_pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors, primitive and with a
    /// positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides").primitive()
    }

    /// Every complex root has modulus strictly below this bound.
    pub fn cauchy_bound(&self) -> BigInt {
        let lead = self.leading().abs();
        let max =
            self.coeffs.iter().take(self.coeffs.len().saturating_sub(1)).map(|c| c.abs()).max().unwrap_or_default();
        BigInt::one() + max.div_ceil(&lead) + BigInt::one()
    }

    pub fn sturm_chain(&self) -> SturmChain {
        SturmChain::new(self)
    }

    /// Positive divisors of `|n|` by trial division.
    pub(crate) fn divisors(n: &BigInt) -> Vec<BigInt> {
        let n = n.abs();
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = BigInt::one();
        while &d * &d <= n {
            if (&n % &d).is_zero() {
                let other = &n / &d;
                if other != d {
                    large.push(other);
                }
                small.push(d.clone());
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Descending-degree human form such as `x^3 - 2x^2 - x + 1`.
    pub fn to_human(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() || i == 0 {
                out.push_str(&abs.to_string());
            }
            match i {
                0 => {}
                1 => out.push('x'),
                _ => {
                    out.push_str("x^");
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }
}

pub(crate) fn to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(if c.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

/// Sturm sequence of a squarefree polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    polys: Vec<IntPolynomial>,
}

impl SturmChain {
    fn new(p: &IntPolynomial) -> Self {
        let mut polys = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            polys.push(d);
        }
        while polys.len() >= 2 {
            let n = polys.len();
            let r = polys[n - 2].positive_pseudo_rem(&polys[n - 1]);
            if r.is_zero() {
                break;
            }
            polys.push(r.neg());
        }
        SturmChain { polys }
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    fn variations<I: Iterator<Item = Sign>>(signs: I) -> usize {
        let mut last = Sign::NoSign;
        let mut count = 0;
        for s in signs {
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.polys.iter().map(|p| p.leading().sign()))
    }

    /// Number of distinct real roots in the half-open interval `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in `(a, ∞)`.
    pub fn count_roots_above(&self, a: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at_pos_inf())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(desc: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending_i64(desc)
    }

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn human_form() {
        assert_eq!(poly(&[1, -2, -1, 1]).to_string(), "x^3 - 2x^2 - x + 1");
        assert_eq!(poly(&[-1, 3]).to_string(), "-x + 3");
        assert_eq!(poly(&[2, 0, 0]).to_string(), "2x^2");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic_and_division() {
        let a = poly(&[1, -1, -1]);
        let b = poly(&[1, -2]);
        let prod = a.mul(&b);
        assert_eq!(prod, poly(&[1, -3, 1, 2]));
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&poly(&[1, 1, 1])), None);
        assert_eq!(prod.derivative(), poly(&[3, -6, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = poly(&[1, -1, -1]);
        let b = poly(&[1, -2]);
        let sq = a.mul(&a).mul(&b);
        assert_eq!(sq.squarefree_part(), a.mul(&b));
        assert_eq!(a.mul(&b).gcd(&b.mul(&poly(&[1, 0, 1]))), b);
        assert_eq!(a.gcd(&b), poly(&[1]));
    }

    #[test]
    fn signs_and_evaluation() {
        let p = poly(&[1, -1, -1]);
        assert_eq!(p.sign_at(&rat(2, 1)), Sign::Plus);
        assert_eq!(p.sign_at(&rat(3, 2)), Sign::Minus);
        assert_eq!(p.eval_rational(&rat(1, 2)), rat(-5, 4));
        assert_eq!(poly(&[2, -1]).sign_at(&rat(1, 2)), Sign::NoSign);
    }

    #[test]
    fn sturm_counts() {
        let p = poly(&[1, -3, 1, 2]);
        let s = p.sturm_chain();
        assert_eq!(s.count_roots(&rat(1, 1), &rat(3, 1)), 2);
        assert_eq!(s.count_roots(&rat(-1, 1), &rat(0, 1)), 1);
        assert_eq!(s.count_roots(&rat(1, 1), &rat(2, 1)), 2);
        assert_eq!(s.count_roots(&rat(2, 1), &rat(5, 1)), 0);
        assert_eq!(s.count_roots_above(&rat(1, 1)), 2);
        assert_eq!(poly(&[1, 0, 1]).sturm_chain().count_roots_above(&rat(-10, 1)), 0);
    }

    #[test]
    fn divisor_lists() {
        let d: Vec<i64> = IntPolynomial::divisors(&BigInt::from(12)).iter().map(|d| d.to_i64().unwrap()).collect();
        assert_eq!(d, [1, 2, 3, 4, 6, 12]);
    }
}
