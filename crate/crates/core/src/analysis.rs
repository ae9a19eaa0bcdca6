//! Ordinal patterns, the realizability criterion, the threshold report for
//! a permutation and exhaustive statistics over `S_n`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{b_of, char_polynomial, AlgebraicNumber};
use crate::dynamics::{expand, AlgebraicBase, BetaValue, NegativeBase, Precision, ScalarBase};
use crate::error::{Error, Result};
use crate::perm::{DigitVector, Landmarks, Permutation};
use crate::poly::IntPolynomial;
use crate::words::{phi_power, Digit, EventuallyPeriodicWord};

/// Largest `n` accepted by exhaustive enumeration over `S_n`.
pub const ENUMERATION_BOUND: usize = 11;

/// The permutation recording the alternating order of the first `n` tails.
pub fn pat_of_word(w: &EventuallyPeriodicWord, n: usize) -> Result<Permutation> {
    let tails: Vec<EventuallyPeriodicWord> = (1..=n).map(|k| w.tail(k)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| tails[a].alt_lex_cmp(&tails[b]));
    for pair in order.windows(2) {
        if tails[pair[0]] == tails[pair[1]] {
            return Err(Error::PatternUndefined(format!(
                "tails {} and {} of {w} coincide",
                pair[0].min(pair[1]) + 1,
                pair[0].max(pair[1]) + 1
            )));
        }
    }
    let mut image = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        image[i] = rank + 1;
    }
    Permutation::from_image(image)
}

fn pattern_of_points<B: NegativeBase>(base: &B, x: B::Point, n: usize) -> Result<Permutation> {
    let (_, orbit) = expand(base, x, n.saturating_sub(1))?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut failure = None;
    order.sort_by(|&a, &b| match base.cmp_points(&orbit[a], &orbit[b]) {
        Ok(o) => o,
        Err(e) => {
            failure.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    for pair in order.windows(2) {
        if base.cmp_points(&orbit[pair[0]], &orbit[pair[1]])? == Ordering::Equal {
            return Err(Error::PatternUndefined(format!(
                "orbit points {} and {} coincide",
                pair[0].min(pair[1]),
                pair[0].max(pair[1])
            )));
        }
    }
    let mut image = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        image[i] = rank + 1;
    }
    Permutation::from_image(image)
}

/// The ordinal pattern of `x, T(x), …, T^{n-1}(x)` for rational `x ∈ (0, 1]`.
pub fn pat_of_orbit(beta: &BetaValue, x: &BigRational, n: usize, precision: Precision) -> Result<Permutation> {
    if !(x > &BigRational::from_integer(0.into()) && x <= &BigRational::one()) {
        return Err(Error::InvalidArgument(format!("{x} is not in (0, 1]")));
    }
    match beta {
        BetaValue::Rational(r) => {
            let b = ScalarBase::new(r.clone())?;
            pattern_of_points(&b, b.point_from_rational(x), n)
        }
        BetaValue::Quadratic(q) => {
            let b = ScalarBase::new(q.clone())?;
            pattern_of_points(&b, b.point_from_rational(x), n)
        }
        BetaValue::Algebraic(a) => {
            let b = AlgebraicBase::new(a.clone(), precision)?;
            pattern_of_points(&b, b.point_from_rational(x), n)
        }
    }
}

/// `T^k x = slope · x + offset` on one piece of `(0, 1]`.
#[derive(Clone)]
struct Affine {
    slope: BigRational,
    offset: BigRational,
}

impl Affine {
    fn at(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.offset
    }
}

fn midpoint(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / BigRational::from_integer(2.into())
}

/// Every pattern of length `n` realized by some `x ∈ (0, 1]` in the rational
/// base `β`, found by splitting `(0, 1]` into the pieces on which
/// `T, …, T^{n-1}` are affine and then at the coincidences `T^i x = T^j x`.
pub fn allowed_patterns(beta: &BigRational, n: usize) -> Result<Vec<Permutation>> {
    check_bound(n)?;
    let base = ScalarBase::new(beta.clone())?;
    let zero = BigRational::from_integer(0.into());
    let identity = Affine { slope: BigRational::one(), offset: zero.clone() };
    let mut pieces = vec![(zero.clone(), BigRational::one(), vec![identity])];
    for _ in 1..n {
        let mut next = Vec::new();
        for (lo, hi, maps) in pieces {
            let last = maps.last().expect("nonempty").clone();
            let (ya, yb) = (last.at(&lo), last.at(&hi));
            let (ymin, ymax) = if ya < yb { (ya, yb) } else { (yb, ya) };
            let mut cuts = vec![lo.clone(), hi.clone()];
            let mut k = (beta * &ymin).floor().to_integer();
            let kmax = (beta * &ymax).ceil().to_integer();
            while k <= kmax {
                let x = (BigRational::from_integer(k.clone()) / beta - &last.offset) / &last.slope;
                if x > lo && x < hi {
                    cuts.push(x);
                }
                k += 1;
            }
            cuts.sort();
            cuts.dedup();
            for w in cuts.windows(2) {
                let d = (beta * last.at(&midpoint(&w[0], &w[1]))).floor();
                let mut extended = maps.clone();
                extended.push(Affine {
                    slope: -(beta * &last.slope),
                    offset: d + BigRational::one() - beta * &last.offset,
                });
                next.push((w[0].clone(), w[1].clone(), extended));
            }
        }
        pieces = next;
    }
    let mut found = std::collections::BTreeSet::new();
    for (lo, hi, maps) in pieces {
        let mut cuts = vec![lo.clone(), hi.clone()];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&maps[i], &maps[j]);
                if a.slope != b.slope {
                    let x = (&b.offset - &a.offset) / (&a.slope - &b.slope);
                    if x > lo && x < hi {
                        cuts.push(x);
                    }
                }
            }
        }
        cuts.sort();
        cuts.dedup();
        for w in cuts.windows(2) {
            for x in [midpoint(&w[0], &w[1]), w[1].clone()] {
                if let Ok(pi) = pattern_of_points(&base, x, n) {
                    found.insert(pi);
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn prop1_conditions(w: &EventuallyPeriodicWord, pi: &Permutation, periodized: bool) -> bool {
    let n = pi.len();
    if n < 2 {
        return true;
    }
    let z = pi.z_digits().expect("n >= 2");
    let lm = pi.landmarks().expect("n >= 2");
    let wd = w.prefix(n);
    let digit = |j: usize| wd[j - 1] as i64;
    for i in 1..n {
        for j in 1..n {
            if pi.at(j) > pi.at(i) && digit(j) - digit(i) < z.digits[j - 1] as i64 - z.digits[i - 1] as i64 {
                return false;
            }
        }
    }
    let tail_n = w.tail(n);
    let reference = |h: usize| {
        if periodized {
            EventuallyPeriodicWord::periodic(&wd[h - 1..n - 1])
        } else {
            w.tail(h)
        }
    };
    if let Some(l) = lm.ell {
        if tail_n.alt_lex_cmp(&reference(l)) != Ordering::Greater {
            return false;
        }
    }
    if let Some(r) = lm.r {
        if tail_n.alt_lex_cmp(&reference(r)) != Ordering::Less {
            return false;
        }
    }
    true
}

/// The realizability criterion: `Pat(w, n) = π` decided through the digit
/// inequalities against `z` and the two tail comparisons.
pub fn prop1_check(w: &EventuallyPeriodicWord, pi: &Permutation) -> bool {
    let ok = prop1_conditions(w, pi, false);
    debug_assert_eq!(
        ok,
        pat_of_word(w, pi.len()).ok().as_ref() == Some(pi),
        "criterion disagrees with the pattern for {w} and {pi}"
    );
    ok
}

/// Same criterion with the tails at `ℓ` and `r` replaced by the
/// periodizations of `w[ℓ, n)` and `w[r, n)`.
pub fn prop1_check_periodized(w: &EventuallyPeriodicWord, pi: &Permutation) -> bool {
    prop1_conditions(w, pi, true)
}

/// The exponent `k` with `a = (φ^k(0))^∞`, if any.
pub fn b1_exponent(a: &EventuallyPeriodicWord) -> Option<usize> {
    if !a.is_purely_periodic() {
        return None;
    }
    let limit = a.period().len();
    (0..)
        .map(|k| (k, phi_power(k).expect("short substitution power")))
        .take_while(|(_, v)| v.len() <= limit)
        .find(|(_, v)| v.as_slice() == a.period())
        .map(|(k, _)| k)
}

/// Everything the threshold theory says about a permutation.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub pi: Permutation,
    pub landmarks: Landmarks,
    pub z: DigitVector,
    pub variants: Vec<DigitVector>,
    pub collapsed: bool,
    pub a: EventuallyPeriodicWord,
    /// Characteristic polynomial of `a`, absent when `B₋ = 1`.
    pub poly: Option<IntPolynomial>,
    pub b_minus: AlgebraicNumber,
    pub n_minus: usize,
    pub epsilon: u8,
    pub b1_exponent: Option<usize>,
}

impl AnalysisReport {
    /// `max z + 1 + ε`, which must equal `n_minus`.
    pub fn n_minus_from_digits(&self) -> usize {
        self.z.max() as usize + 1 + self.epsilon as usize
    }
}

pub fn analyze(pi: &Permutation) -> Result<AnalysisReport> {
    let t = pi.threshold_data()?;
    let b_minus = b_of(&t.a)?;
    let poly = (!b_minus.is_one()).then(|| char_polynomial(&t.a));
    let b1 = b1_exponent(&t.a);
    debug_assert_eq!(b1.is_some(), b_minus.is_one(), "B = 1 test disagrees for {pi}");
    let c = t.z.max();
    let epsilon = (t.collapsed || t.a == EventuallyPeriodicWord::periodic(&[c, 0])) as u8;
    let n_minus = b_minus.floor().to_usize().expect("small base") + 1;
    Ok(AnalysisReport {
        pi: pi.clone(),
        landmarks: t.landmarks,
        z: t.z,
        variants: t.variants,
        collapsed: t.collapsed,
        a: t.a,
        poly,
        b_minus,
        n_minus,
        epsilon,
        b1_exponent: b1,
    })
}

fn check_bound(n: usize) -> Result<()> {
    if n > ENUMERATION_BOUND {
        return Err(Error::Resource(format!("enumeration of S_{n} exceeds the bound {ENUMERATION_BOUND}")));
    }
    Ok(())
}

/// Permutations of length `n` in lexicographic order, processed in parallel
/// blocks by first entry.
fn par_permutations(n: usize) -> impl ParallelIterator<Item = Permutation> {
    (1..=n).into_par_iter().flat_map_iter(move |first| Permutation::all_with_first(n, first))
}

/// `#{π ∈ S_n : B₋(π) = 1}` for `n = 2, …, n_max`.
pub fn count_b1(n_max: usize) -> Result<Vec<(usize, usize)>> {
    check_bound(n_max)?;
    let limit = phi_limit(n_max);
    (2..=n_max)
        .map(|n| {
            let count = par_permutations(n)
                .map(|pi| {
                    let a = pi.a_sequence().expect("n >= 2");
                    a.is_purely_periodic() && limit.iter().any(|v| v.as_slice() == a.period())
                })
                .filter(|&b| b)
                .count();
            Ok((n, count))
        })
        .collect()
}

fn phi_limit(n: usize) -> Vec<Vec<Digit>> {
    (0..).map(|k| phi_power(k).expect("short substitution power")).take_while(|v| v.len() <= 2 * n).collect()
}

/// Permutations sharing one value of `B₋`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumGroup {
    pub value: AlgebraicNumber,
    pub polynomial: IntPolynomial,
    pub permutations: Vec<Permutation>,
}

/// Threshold values for each permutation, computing `b` once per distinct `a`.
fn thresholds(n: usize) -> Result<Vec<(Permutation, EventuallyPeriodicWord)>> {
    check_bound(n)?;
    par_permutations(n)
        .map(|pi| {
            let a = pi.a_sequence()?;
            Ok((pi, a))
        })
        .collect()
}

fn distinct_values(
    words: impl Iterator<Item = EventuallyPeriodicWord>,
) -> Result<HashMap<EventuallyPeriodicWord, AlgebraicNumber>> {
    let mut map = HashMap::new();
    for a in words {
        if let std::collections::hash_map::Entry::Vacant(slot) = map.entry(a) {
            let b = b_of(slot.key())?;
            slot.insert(b);
        }
    }
    Ok(map)
}

/// `S_n` grouped by `B₋`, sorted by value; equality is decided exactly.
pub fn spectrum(n: usize) -> Result<Vec<SpectrumGroup>> {
    let pairs = thresholds(n)?;
    let mut words: Vec<EventuallyPeriodicWord> = pairs.iter().map(|(_, a)| a.clone()).collect();
    words.sort();
    words.dedup();
    let values = distinct_values(words.iter().cloned())?;
    let mut distinct: Vec<AlgebraicNumber> = Vec::new();
    let mut sorted: Vec<&AlgebraicNumber> = words.iter().map(|a| &values[a]).collect();
    sorted.sort_by(|x, y| x.cmp_exact(y));
    for v in sorted {
        if distinct.last().is_none_or(|last| last.cmp_exact(v) != Ordering::Equal) {
            distinct.push(v.clone());
        }
    }
    let mut groups: Vec<SpectrumGroup> = distinct
        .into_iter()
        .map(|value| SpectrumGroup { polynomial: value.minimal_polynomial().clone(), value, permutations: Vec::new() })
        .collect();
    for (pi, a) in pairs {
        let b = &values[&a];
        let idx = groups.binary_search_by(|g| g.value.cmp_exact(b)).expect("every value has a group");
        groups[idx].permutations.push(pi);
    }
    Ok(groups)
}

/// The extreme values of `B₋` over `S_n`.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    /// `b((n-2)(n-3)…1 0^∞)`.
    pub max_word: EventuallyPeriodicWord,
    pub max_value: AlgebraicNumber,
    pub max_in_open_interval: bool,
    pub predicted_maximizer: Permutation,
    pub predicted_full_alphabet: Vec<Permutation>,
    /// Filled in when `n` is within the enumeration bound.
    pub maximizers: Option<Vec<Permutation>>,
    pub full_alphabet: Option<Vec<Permutation>>,
    pub verified: Option<bool>,
}

fn descending_tail(n: usize, tail: &[usize]) -> Permutation {
    let mut image: Vec<usize> = (tail.len() + 1..=n).rev().collect();
    image.extend_from_slice(tail);
    Permutation::from_image(image).expect("valid permutation")
}

/// The four families attaining `N₋ = n − 1`, deduplicated and sorted.
pub fn predicted_full_alphabet(n: usize) -> Vec<Permutation> {
    let mut swap_last: Vec<usize> = (1..=n).collect();
    if n >= 2 {
        swap_last.swap(n - 2, n - 1);
    }
    let mut out = vec![
        Permutation::identity(n),
        Permutation::from_image(swap_last).expect("valid permutation"),
        descending_tail(n, &[]),
        descending_tail(n, &[1, 2]),
    ];
    out.sort();
    out.dedup();
    out
}

pub fn predicted_maximizer(n: usize) -> Permutation {
    if n.is_multiple_of(2) {
        descending_tail(n, &[])
    } else {
        descending_tail(n, &[1, 2])
    }
}

pub fn extremal_report(n: usize, exhaustive: bool) -> Result<ExtremalReport> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("extremal report needs n >= 3, got {n}")));
    }
    let pre: Vec<Digit> = (1..=(n as Digit - 2)).rev().collect();
    let max_word = EventuallyPeriodicWord::canonicalize(&pre, &[0]);
    let max_value = b_of(&max_word)?;
    let lo = BigRational::from_integer(BigInt::from(n - 2));
    let hi = BigRational::from_integer(BigInt::from(n - 1));
    let max_in_open_interval =
        max_value.cmp_rational(&lo) == Ordering::Greater && max_value.cmp_rational(&hi) == Ordering::Less;
    let mut report = ExtremalReport {
        n,
        max_word,
        max_value,
        max_in_open_interval,
        predicted_maximizer: predicted_maximizer(n),
        predicted_full_alphabet: predicted_full_alphabet(n),
        maximizers: None,
        full_alphabet: None,
        verified: None,
    };
    if exhaustive {
        let pairs = thresholds(n)?;
        let values = distinct_values(pairs.iter().map(|(_, a)| a.clone()))?;
        let top = values.values().max_by(|x, y| x.cmp_exact(y)).expect("nonempty").clone();
        let hi_floor = BigRational::from_integer(BigInt::from(n - 2));
        let mut maximizers = Vec::new();
        let mut full = Vec::new();
        for (pi, a) in &pairs {
            let b = &values[a];
            if b.cmp_exact(&top) == Ordering::Equal {
                maximizers.push(pi.clone());
            }
            if b.cmp_rational(&hi_floor) != Ordering::Less {
                full.push(pi.clone());
            }
        }
        let verified = top.cmp_exact(&report.max_value) == Ordering::Equal
            && report.max_in_open_interval
            && maximizers == [report.predicted_maximizer.clone()]
            && (n < 4 || full == report.predicted_full_alphabet);
        report.maximizers = Some(maximizers);
        report.full_alphabet = Some(full);
        report.verified = Some(verified);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn allowed_patterns_follow_the_threshold() {
        let near_one = BigRational::new(1001.into(), 1000.into());
        assert_eq!(allowed_patterns(&near_one, 5).unwrap().len(), 19);
        let beta = BigRational::new(41.into(), 20.into());
        let allowed = allowed_patterns(&beta, 4).unwrap();
        let expected: Vec<Permutation> = Permutation::all(4)
            .filter(|pi| analyze(pi).unwrap().b_minus.cmp_rational(&beta) == Ordering::Less)
            .collect();
        assert_eq!(allowed, expected);
        assert!(!allowed.contains(&"4321".parse().unwrap()));
    }

    fn w(s: &str) -> EventuallyPeriodicWord {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn patterns_of_words() {
        assert_eq!(pat_of_word(&w("1(100)"), 4).unwrap(), p("3421"));
        assert_eq!(pat_of_word(&w("110010(2)"), 6).unwrap(), p("453261"));
        assert!(matches!(pat_of_word(&w("(2)"), 2), Err(Error::PatternUndefined(_))));
    }

    #[test]
    fn patterns_of_orbits() {
        let pr = Precision::default();
        let two: BetaValue = "2".parse().unwrap();
        assert_eq!(pat_of_orbit(&two, &r(2, 5), 3, pr).unwrap(), p("213"));
        assert!(matches!(pat_of_orbit(&two, &r(1, 1), 2, pr), Err(Error::PatternUndefined(_))));
        let beta: BetaValue = "poly:1,-3,1:1".parse().unwrap();
        assert!(matches!(pat_of_orbit(&beta, &r(1, 1), 3, pr), Err(Error::PatternUndefined(_))));
        let cubic: BetaValue = "poly:1,-2,-1,1:1".parse().unwrap();
        let b = cubic.to_f64();
        let mut x = 0.3f64;
        let mut orbit = vec![];
        for _ in 0..5 {
            orbit.push(x);
            x = (b * x).floor() + 1.0 - b * x;
        }
        let mut idx: Vec<usize> = (0..5).collect();
        idx.sort_by(|&i, &j| orbit[i].total_cmp(&orbit[j]));
        let mut image = vec![0; 5];
        for (rank, &i) in idx.iter().enumerate() {
            image[i] = rank + 1;
        }
        assert_eq!(pat_of_orbit(&cubic, &r(3, 10), 5, pr).unwrap(), Permutation::from_image(image).unwrap());
    }

    #[test]
    fn criterion_examples() {
        assert!(prop1_check(&w("1(100)"), &p("3421")));
        assert!(!prop1_check(&w("(0)"), &p("21")));
        assert!(prop1_check(&w("00(10011)"), &p("3142")));
        assert!(prop1_check_periodized(&w("00(10011)"), &p("3142")));
        assert!(prop1_check(&w("110010(2)"), &p("453261")));
    }

    #[test]
    fn analysis_examples() {
        let r = analyze(&p("4321")).unwrap();
        assert_eq!(r.a, w("21(0)"));
        assert_eq!(r.poly.as_ref().unwrap().to_string(), "x^3 - 2x^2 - x + 1");
        assert_eq!(r.b_minus.to_decimal(3), "2.247");
        assert_eq!(r.n_minus, 3);
        let r = analyze(&p("3421")).unwrap();
        assert!(r.b_minus.is_one());
        assert_eq!(r.b1_exponent, Some(2));
        assert!(r.poly.is_none());
        let r = analyze(&p("892364157")).unwrap();
        assert_eq!(r.b_minus.to_decimal(3), "3.831");
        let r = analyze(&p("12")).unwrap();
        assert_eq!((r.n_minus, r.epsilon, r.b1_exponent), (2, 1, Some(0)));
    }

    #[test]
    fn small_counts() {
        let c = count_b1(5).unwrap();
        assert_eq!(c, [(2, 2), (3, 5), (4, 12), (5, 19)]);
        assert!(matches!(count_b1(ENUMERATION_BOUND + 1), Err(Error::Resource(_))));
    }

    #[test]
    fn small_spectra() {
        let g = spectrum(2).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].value.is_one());
        let g = spectrum(3).unwrap();
        let names: Vec<Vec<String>> =
            g.iter().map(|g| g.permutations.iter().map(|p| p.to_string()).collect()).collect();
        assert_eq!(names, [vec!["123", "132", "213", "231", "321"], vec!["312"]]);
        assert_eq!(g[1].polynomial.to_string(), "x^2 - x - 1");
    }

    #[test]
    fn extremes() {
        let r = extremal_report(4, true).unwrap();
        assert_eq!(r.maximizers.as_deref(), Some(&[p("4321")][..]));
        assert_eq!(r.full_alphabet.as_deref(), Some(&[p("1234"), p("1243"), p("4312"), p("4321")][..]));
        assert_eq!(r.verified, Some(true));
        let r = extremal_report(3, true).unwrap();
        assert_eq!(r.maximizers.as_deref(), Some(&[p("312")][..]));
        assert!((r.max_value.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        let r = extremal_report(5, true).unwrap();
        assert_eq!(r.maximizers.as_deref(), Some(&[p("54312")][..]));
    }
}
