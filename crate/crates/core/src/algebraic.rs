//! Real algebraic numbers given by an isolating interval, the polynomials
//! `P_v`, the characteristic polynomial of a word and the value `b(w)`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::poly::IntPolynomial;
use crate::roots::{aberth, certified_roots};
use crate::words::{Digit, EventuallyPeriodicWord};

/// Default width used when a numeric value is displayed.
pub const DEFAULT_TOLERANCE_EXP10: u32 = 12;

#[derive(Debug, Clone)]
enum Location {
    Exact(BigRational),
    /// Closed interval with the root strictly inside and no root at either end.
    Interval(BigRational, BigRational),
}

#[derive(Debug)]
struct Inner {
    poly: IntPolynomial,
    initial: Location,
    /// Sign of `poly` just left of the root.
    left_sign: Sign,
    location: RwLock<Location>,
    minimal: OnceLock<IntPolynomial>,
}

/// A real algebraic number: a squarefree defining polynomial plus an
/// isolating interval that is refined on demand. Clones share the
/// refinement cache.
#[derive(Debug, Clone)]
pub struct AlgebraicNumber {
    inner: Arc<Inner>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn half(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / rat(2)
}

impl AlgebraicNumber {
    pub fn from_rational(r: BigRational) -> Self {
        let poly = IntPolynomial::linear_with_root(&r);
        Self::build(poly, Location::Exact(r))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    fn build(poly: IntPolynomial, location: Location) -> Self {
        let left_sign = match &location {
            Location::Exact(_) => Sign::NoSign,
            Location::Interval(lo, _) => poly.sign_at(lo),
        };
        AlgebraicNumber {
            inner: Arc::new(Inner {
                poly,
                initial: location.clone(),
                left_sign,
                location: RwLock::new(location),
                minimal: OnceLock::new(),
            }),
        }
    }

    /// The unique root of `poly` in `[lo, hi]`, or `None` if there is not
    /// exactly one.
    pub fn from_isolating(poly: &IntPolynomial, lo: BigRational, hi: BigRational) -> Option<Self> {
        if poly.degree().unwrap_or(0) == 0 || lo > hi {
            return None;
        }
        let g = poly.squarefree_part();
        let sturm = g.sturm_chain();
        let at_lo = g.sign_at(&lo) == Sign::NoSign;
        let count = sturm.count_roots(&lo, &hi) + at_lo as usize;
        if count != 1 {
            return None;
        }
        if at_lo {
            return Some(Self::from_rational(lo));
        }
        if g.sign_at(&hi) == Sign::NoSign {
            return Some(Self::from_rational(hi));
        }
        Some(Self::build(g, Location::Interval(lo, hi)))
    }

    /// The squarefree defining polynomial.
    pub fn defining_polynomial(&self) -> &IntPolynomial {
        &self.inner.poly
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match &*self.inner.location.read().unwrap() {
            Location::Exact(r) => Some(r.clone()),
            Location::Interval(..) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// Current enclosing interval.
    pub fn interval(&self) -> (BigRational, BigRational) {
        match &*self.inner.location.read().unwrap() {
            Location::Exact(r) => (r.clone(), r.clone()),
            Location::Interval(lo, hi) => (lo.clone(), hi.clone()),
        }
    }

    /// The isolating interval the number was created with.
    pub fn isolating_interval(&self) -> (BigRational, BigRational) {
        match &self.inner.initial {
            Location::Exact(r) => (r.clone(), r.clone()),
            Location::Interval(lo, hi) => (lo.clone(), hi.clone()),
        }
    }

    /// Narrows the interval to width at most `tol` and returns it.
    pub fn refine(&self, tol: &BigRational) -> (BigRational, BigRational) {
        let (lo, hi) = self.interval();
        if &(&hi - &lo) <= tol {
            return (lo, hi);
        }
        let mut guard = self.inner.location.write().unwrap();
        loop {
            match &*guard {
                Location::Exact(r) => return (r.clone(), r.clone()),
                Location::Interval(lo, hi) => {
                    if &(hi - lo) <= tol {
                        return (lo.clone(), hi.clone());
                    }
                    let mid = half(lo, hi);
                    let s = self.inner.poly.sign_at(&mid);
                    *guard = if s == Sign::NoSign {
                        Location::Exact(mid)
                    } else if s == self.inner.left_sign {
                        Location::Interval(mid, hi.clone())
                    } else {
                        Location::Interval(lo.clone(), mid)
                    };
                }
            }
        }
    }

    /// Refines to width `2^-bits`.
    pub fn refine_bits(&self, bits: u32) -> (BigRational, BigRational) {
        self.refine(&BigRational::new(BigInt::one(), BigInt::one() << bits))
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.refine_bits(64);
        half(&lo, &hi).to_f64().unwrap_or(f64::NAN)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        match &*self.inner.location.read().unwrap() {
            Location::Exact(x) => x.cmp(r),
            Location::Interval(lo, hi) => {
                if r <= lo {
                    Ordering::Greater
                } else if r >= hi {
                    Ordering::Less
                } else {
                    match self.inner.poly.sign_at(r) {
                        Sign::NoSign => Ordering::Equal,
                        s if s == self.inner.left_sign => Ordering::Greater,
                        _ => Ordering::Less,
                    }
                }
            }
        }
    }

    /// `⌊self · c⌋` for a positive rational `c`.
    pub fn floor_mul(&self, c: &BigRational) -> BigInt {
        debug_assert!(c.is_positive());
        let (lo, _) = self.refine(&(BigRational::one() / c));
        let mut k = (lo * c).floor().to_integer();
        loop {
            let next = BigRational::from_integer(&k + 1) / c;
            if self.cmp_rational(&next) == Ordering::Less {
                break;
            }
            k += 1;
        }
        while self.cmp_rational(&(BigRational::from_integer(k.clone()) / c)) == Ordering::Less {
            k -= 1;
        }
        k
    }

    pub fn floor(&self) -> BigInt {
        self.floor_mul(&BigRational::one())
    }

    /// Decimal string rounded half up to `places` digits after the point.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = BigInt::from(10).pow(places);
        let twice: BigInt = self.floor_mul(&BigRational::from_integer(&scale * BigInt::from(2)));
        let rounded = (twice + BigInt::one()).div_floor(&BigInt::from(2));
        format_scaled(&rounded, places)
    }

    /// Whether `self` is a root of `q`.
    pub fn is_root_of(&self, q: &IntPolynomial) -> bool {
        if q.is_zero() {
            return true;
        }
        match self.interval() {
            (lo, hi) if lo == hi => q.sign_at(&lo) == Sign::NoSign,
            (lo, hi) => {
                let h = self.inner.poly.gcd(q);
                h.degree().unwrap_or(0) > 0 && h.sturm_chain().count_roots(&lo, &hi) > 0
            }
        }
    }

    /// Exact comparison of two algebraic numbers.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.inner, &other.inner) {
            return Ordering::Equal;
        }
        if let Some(r) = other.as_rational() {
            return self.cmp_rational(&r);
        }
        if let Some(r) = self.as_rational() {
            return other.cmp_rational(&r).reverse();
        }
        let common = self.inner.poly.gcd(&other.inner.poly);
        let mut bits = 16;
        loop {
            let (a_lo, a_hi) = self.interval();
            let (b_lo, b_hi) = other.interval();
            if a_hi < b_lo {
                return Ordering::Less;
            }
            if b_hi < a_lo {
                return Ordering::Greater;
            }
            if common.degree().unwrap_or(0) > 0 {
                let lo = a_lo.clone().max(b_lo.clone());
                let hi = a_hi.clone().min(b_hi.clone());
                let at_lo = common.sign_at(&lo) == Sign::NoSign;
                if at_lo || common.sturm_chain().count_roots(&lo, &hi) > 0 {
                    return Ordering::Equal;
                }
            }
            self.refine_bits(bits);
            other.refine_bits(bits);
            if let Some(r) = other.as_rational() {
                return self.cmp_rational(&r);
            }
            if let Some(r) = self.as_rational() {
                return other.cmp_rational(&r).reverse();
            }
            bits *= 2;
        }
    }

    /// The minimal polynomial over the integers, primitive with positive
    /// leading coefficient. Falls back to the defining polynomial when the
    /// conjugate search is too large to run.
    pub fn minimal_polynomial(&self) -> &IntPolynomial {
        self.inner.minimal.get_or_init(|| self.compute_minimal())
    }

    fn compute_minimal(&self) -> IntPolynomial {
        if let Some(r) = self.as_rational() {
            return IntPolynomial::linear_with_root(&r);
        }
        let g = &self.inner.poly;
        let d = g.degree().unwrap_or(0);
        if d <= 1 {
            return g.clone();
        }
        let target = self.to_f64();
        let roots = aberth(&g.to_f64_coeffs());
        let units = group_conjugates(&roots);
        let Some(own) = units
            .iter()
            .enumerate()
            .filter(|(_, u)| u.len() == 1)
            .min_by(|a, b| (a.1[0].re - target).abs().total_cmp(&(b.1[0].re - target).abs()))
            .map(|(i, _)| i)
        else {
            return g.clone();
        };
        let others: Vec<&Vec<Complex64>> =
            units.iter().enumerate().filter(|(i, _)| *i != own).map(|(_, u)| u).collect();
        if others.len() > 22 {
            return g.clone();
        }
        let mut masks: Vec<(usize, u32)> = (0..1u32 << others.len())
            .map(|m| {
                let deg: usize = (0..others.len()).filter(|i| m >> i & 1 == 1).map(|i| others[i].len()).sum();
                (deg, m)
            })
            .filter(|&(deg, _)| deg + 1 < d)
            .collect();
        masks.sort();
        let leads = IntPolynomial::divisors(&g.leading());
        for (_, mask) in masks {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            let mut mul_root = |z: Complex64| {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (i, c) in prod.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * z;
                }
                prod = next;
            };
            mul_root(Complex64::new(target, 0.0));
            for (i, unit) in others.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for &z in unit.iter() {
                        mul_root(z);
                    }
                }
            }
            for lead in &leads {
                let lead_f = lead.to_f64().unwrap_or(f64::INFINITY);
                let scaled: Vec<f64> = prod.iter().map(|c| c.re * lead_f).collect();
                if scaled.iter().any(|c| !c.is_finite() || (c - c.round()).abs() > 1e-3 * c.abs().max(1.0)) {
                    continue;
                }
                let cand = IntPolynomial::new(scaled.iter().map(|c| BigInt::from(c.round() as i128)).collect());
                if g.div_exact(&cand).is_some() && self.is_root_of(&cand) {
                    return cand.primitive();
                }
            }
        }
        g.clone()
    }
}

fn group_conjugates(roots: &[Complex64]) -> Vec<Vec<Complex64>> {
    let scale = |z: &Complex64| 1e-7 * z.norm().max(1.0);
    let mut used = vec![false; roots.len()];
    let mut units = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let z = roots[i];
        if z.im.abs() <= scale(&z) {
            units.push(vec![Complex64::new(z.re, 0.0)]);
            continue;
        }
        let partner = (0..roots.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (roots[a] - z.conj()).norm().total_cmp(&(roots[b] - z.conj()).norm()));
        match partner {
            Some(j) => {
                used[j] = true;
                let avg = (z + roots[j].conj()) / 2.0;
                units.push(vec![avg, avg.conj()]);
            }
            None => units.push(vec![z]),
        }
    }
    units
}

fn format_scaled(value: &BigInt, places: u32) -> String {
    let neg = value.is_negative();
    let digits = value.abs().to_string();
    let places = places as usize;
    let padded =
        if digits.len() <= places { format!("{}{}", "0".repeat(places + 1 - digits.len()), digits) } else { digits };
    let (int, frac) = padded.split_at(padded.len() - places);
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Renders a rational as a decimal with `places` digits, rounded half up.
pub fn rational_to_decimal(r: &BigRational, places: u32) -> String {
    let scale = BigRational::from_integer(BigInt::from(10).pow(places));
    let rounded = (r * scale + BigRational::new(1.into(), 2.into())).floor().to_integer();
    format_scaled(&rounded, places)
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_exact(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicNumber {}

impl PartialOrd for AlgebraicNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_exact(other)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Some(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            None => f.write_str(&self.to_decimal(f.precision().unwrap_or(10) as u32)),
        }
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let exact = self.as_rational();
        let mut s = serializer.serialize_struct("AlgebraicNumber", 5)?;
        s.serialize_field("decimal", &self.to_decimal(DEFAULT_TOLERANCE_EXP10))?;
        s.serialize_field("exact", &exact.as_ref().map(rational_string))?;
        s.serialize_field("polynomial", &self.minimal_polynomial().to_human())?;
        s.serialize_field("coefficients", self.minimal_polynomial())?;
        let (lo, hi) = self.isolating_interval();
        s.serialize_field("interval", &[rational_string(&lo), rational_string(&hi)])?;
        s.end()
    }
}

/// `P_v(x) = (-x)^j + Σ (v_k + 1)(-x)^(j-k)` with `P_ε = 1`.
pub fn p_polynomial(v: &[Digit]) -> IntPolynomial {
    let j = v.len();
    let sign = |e: usize| if e.is_multiple_of(2) { 1i64 } else { -1 };
    let mut coeffs = vec![BigInt::zero(); j + 1];
    coeffs[j] = BigInt::from(sign(j));
    for (k, &d) in v.iter().enumerate() {
        let e = j - (k + 1);
        coeffs[e] += BigInt::from(sign(e)) * BigInt::from(d as u64 + 1);
    }
    IntPolynomial::new(coeffs)
}

/// `P_{w[1, p+q]} - P_{w[1, q]}` with a positive leading coefficient, where
/// `q` and `p` are the canonical preperiod and period lengths.
pub fn char_polynomial(w: &EventuallyPeriodicWord) -> IntPolynomial {
    let q = w.preperiod().len();
    let p = w.period().len();
    let full = p_polynomial(&w.prefix(p + q));
    let head = p_polynomial(&w.prefix(q));
    full.sub(&head).sign_normalized()
}

/// The largest real root of `poly` strictly greater than 1.
pub fn largest_root_gt1(poly: &IntPolynomial) -> Option<AlgebraicNumber> {
    if poly.degree().unwrap_or(0) == 0 {
        return None;
    }
    let g = poly.squarefree_part();
    let sturm = g.sturm_chain();
    let mut lo = BigRational::one();
    if sturm.count_roots_above(&lo) == 0 {
        return None;
    }
    let mut hi = BigRational::from_integer(g.cauchy_bound());
    let lead = BigRational::from_integer(g.leading());
    loop {
        if g.sign_at(&hi) == Sign::NoSign {
            return Some(AlgebraicNumber::from_rational(hi));
        }
        let isolated = sturm.count_roots(&lo, &hi) == 1;
        if isolated && (&hi - &lo) * &lead <= BigRational::one() && g.sign_at(&lo) != Sign::NoSign {
            break;
        }
        let mid = half(&lo, &hi);
        if sturm.count_roots(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    for q in IntPolynomial::divisors(&g.leading()) {
        let qr = BigRational::from_integer(q.clone());
        let mut p = (&lo * &qr).ceil().to_integer();
        while BigRational::new(p.clone(), q.clone()) <= hi {
            let r = BigRational::new(p.clone(), q.clone());
            if r > lo && g.sign_at(&r) == Sign::NoSign {
                return Some(AlgebraicNumber::from_rational(r));
            }
            p += 1;
        }
    }
    Some(AlgebraicNumber::build(g, Location::Interval(lo, hi)))
}

/// All distinct real roots strictly above 1, in increasing order.
pub fn roots_above_one(poly: &IntPolynomial) -> Vec<AlgebraicNumber> {
    if poly.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let g = poly.squarefree_part();
    let sturm = g.sturm_chain();
    let mut pending = vec![(BigRational::one(), BigRational::from_integer(g.cauchy_bound()))];
    let mut out = Vec::new();
    while let Some((mut lo, mut hi)) = pending.pop() {
        match sturm.count_roots(&lo, &hi) {
            0 => continue,
            1 => {
                if g.sign_at(&hi) == Sign::NoSign {
                    out.push(AlgebraicNumber::from_rational(hi));
                    continue;
                }
                while g.sign_at(&lo) == Sign::NoSign {
                    let mid = half(&lo, &hi);
                    if sturm.count_roots(&mid, &hi) == 1 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.extend(AlgebraicNumber::from_isolating(&g, lo, hi));
            }
            _ => {
                let mid = half(&lo, &hi);
                pending.push((lo, mid.clone()));
                pending.push((mid, hi));
            }
        }
    }
    out.sort();
    out
}

/// `b(w)`: 1 when `w ≤ u`, otherwise the largest root above 1 of the
/// characteristic polynomial.
pub fn b_of(w: &EventuallyPeriodicWord) -> Result<AlgebraicNumber> {
    w.require_sup_fixed()?;
    if w.cmp_u()? != Ordering::Greater {
        return Ok(AlgebraicNumber::one());
    }
    let poly = char_polynomial(w);
    Ok(largest_root_gt1(&poly).expect("a word above u has a characteristic root above 1"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PerronPisot {
    Pisot,
    PerronNotPisot,
    Neither,
}

impl fmt::Display for PerronPisot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PerronPisot::Pisot => "pisot",
            PerronPisot::PerronNotPisot => "perron_not_pisot",
            PerronPisot::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub kind: PerronPisot,
    pub algebraic_integer: bool,
    /// Largest certified upper bound on the modulus of the other conjugates.
    pub max_conjugate_modulus: f64,
    /// `1 - max_conjugate_modulus`.
    pub unit_circle_margin: f64,
    pub certified: bool,
    pub degree: usize,
}

pub fn classify_perron_pisot(num: &AlgebraicNumber) -> Classification {
    let m = num.minimal_polynomial().clone();
    let degree = m.degree().unwrap_or(0);
    let algebraic_integer = m.is_monic();
    let neither = |certified: bool, max: f64| Classification {
        kind: PerronPisot::Neither,
        algebraic_integer,
        max_conjugate_modulus: max,
        unit_circle_margin: 1.0 - max,
        certified,
        degree,
    };
    if !algebraic_integer || num.cmp_rational(&BigRational::one()) != Ordering::Greater {
        return neither(true, f64::NAN);
    }
    if degree == 1 {
        return Classification {
            kind: PerronPisot::Pisot,
            algebraic_integer,
            max_conjugate_modulus: 0.0,
            unit_circle_margin: 1.0,
            certified: true,
            degree,
        };
    }
    let (disks, certified) = certified_roots(&m);
    let value = num.to_f64();
    let own = (0..disks.len())
        .min_by(|&a, &b| (disks[a].center - value).norm().total_cmp(&(disks[b].center - value).norm()))
        .expect("degree at least two");
    let max = disks.iter().enumerate().filter(|&(i, _)| i != own).map(|(_, d)| d.max_modulus()).fold(0.0, f64::max);
    let own_ok = disks[own].contains_real(value);
    if !certified || !own_ok {
        return neither(false, max);
    }
    let (lo, _) = num.refine_bits(64);
    let lower = lo.to_f64().unwrap_or(0.0);
    let kind = if max < 1.0 {
        PerronPisot::Pisot
    } else if max < lower {
        PerronPisot::PerronNotPisot
    } else {
        PerronPisot::Neither
    };
    Classification {
        kind,
        algebraic_integer,
        max_conjugate_modulus: max,
        unit_circle_margin: 1.0 - max,
        certified,
        degree,
    }
}
