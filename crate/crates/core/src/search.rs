//! Bounded searches for words realizing a permutation: the minimal
//! alphabet oracle, admissible witnesses and the threshold sandwich.

use std::cmp::Ordering;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::algebraic::{b_of, AlgebraicNumber};
use crate::analysis::pat_of_word;
use crate::dynamics::{BetaValue, Precision, ShiftSpace};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{Digit, EventuallyPeriodicWord};

/// Bounds for [`min_alphabet_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphabetBounds {
    pub max_prefix: usize,
    pub max_period: usize,
    pub max_alphabet: usize,
}

impl AlphabetBounds {
    pub fn for_length(n: usize) -> Self {
        AlphabetBounds { max_prefix: 2 * n, max_period: 2 * n, max_alphabet: n }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Realization {
    pub alphabet: usize,
    pub witness: EventuallyPeriodicWord,
}

/// Prefixes `w[1, n)` over `{0, …, N−1}` whose excess over `z` is
/// nondecreasing along the values of `π`.
fn admissible_prefixes(pi: &Permutation, alphabet: usize) -> Vec<Vec<Digit>> {
    let n = pi.len();
    let z = pi.z_digits().expect("n >= 2").digits;
    let mut positions: Vec<usize> = (1..n).collect();
    positions.sort_by_key(|&j| pi.at(j));
    let mut out = Vec::new();
    let mut cur = vec![0 as Digit; n - 1];
    fn rec(
        idx: usize,
        min_excess: Digit,
        positions: &[usize],
        z: &[Digit],
        alphabet: usize,
        cur: &mut Vec<Digit>,
        out: &mut Vec<Vec<Digit>>,
    ) {
        if idx == positions.len() {
            out.push(cur.clone());
            return;
        }
        let j = positions[idx];
        let mut e = min_excess;
        while ((z[j - 1] + e) as usize) < alphabet {
            cur[j - 1] = z[j - 1] + e;
            rec(idx + 1, e, positions, z, alphabet, cur, out);
            e += 1;
        }
    }
    rec(0, 0, &positions, &z, alphabet, &mut cur, &mut out);
    out
}

/// Tails `t` of the form `c · x · τ` where `c` is a prefix of a boundary
/// word and `τ` is one of the two extreme periodic words.
fn candidate_tails(bounds: &[&EventuallyPeriodicWord], depth: usize, alphabet: usize) -> Vec<EventuallyPeriodicWord> {
    let top = (alphabet - 1) as Digit;
    let extremes: Vec<Vec<Digit>> = if top == 0 { vec![vec![0]] } else { vec![vec![0, top], vec![top, 0]] };
    let mut out = Vec::new();
    for b in bounds {
        for j in 0..depth {
            let mut head = b.prefix(j);
            head.push(0);
            for x in 0..=top {
                *head.last_mut().unwrap() = x;
                for tau in &extremes {
                    out.push(EventuallyPeriodicWord::canonicalize(&head, tau));
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.preperiod().len() + a.period().len())
            .cmp(&(b.preperiod().len() + b.period().len()))
            .then_with(|| a.alt_lex_cmp(b))
    });
    out.dedup();
    out
}

/// The smallest alphabet over which some eventually periodic word within
/// the bounds realizes `π`, with a witness.
pub fn min_alphabet_bruteforce(pi: &Permutation, bounds: AlphabetBounds) -> Result<Realization> {
    let n = pi.len();
    if n < 2 {
        return Ok(Realization { alphabet: 1, witness: EventuallyPeriodicWord::periodic(&[0]) });
    }
    let lm = pi.landmarks()?;
    for alphabet in 1..=bounds.max_alphabet {
        for prefix in admissible_prefixes(pi, alphabet) {
            let periodize = |h: usize| EventuallyPeriodicWord::periodic(&prefix[h - 1..]);
            let lower = lm.ell.map(periodize);
            let upper = lm.r.map(periodize);
            let sides: Vec<&EventuallyPeriodicWord> = lower.iter().chain(upper.iter()).collect();
            let lcm = sides.iter().fold(1usize, |acc, s| acc.lcm(&s.period().len()));
            let depth = 2 * lcm + sides.iter().map(|s| s.period().len()).sum::<usize>() + 2;
            for t in candidate_tails(&sides, depth, alphabet) {
                if lower.as_ref().is_some_and(|l| t.alt_lex_cmp(l) != Ordering::Greater)
                    || upper.as_ref().is_some_and(|r| t.alt_lex_cmp(r) != Ordering::Less)
                {
                    continue;
                }
                let w = t.with_prefix(&prefix);
                if w.preperiod().len() > bounds.max_prefix || w.period().len() > bounds.max_period {
                    continue;
                }
                if pat_of_word(&w, n).ok().as_ref() == Some(pi) {
                    return Ok(Realization { alphabet, witness: w });
                }
            }
        }
    }
    Err(Error::SearchInconclusive(format!(
        "no realizing word for {pi} over at most {} letters within prefix {} and period {}",
        bounds.max_alphabet, bounds.max_prefix, bounds.max_period
    )))
}

/// A rational base at distance `margin` above (or below, for negative
/// margins) `b`, anchored to a dyadic enclosure of `b`.
pub fn offset_base(b: &AlgebraicNumber, margin: &BigRational) -> BigRational {
    let (lo, hi) = b.refine_bits(20);
    if margin >= &BigRational::from_integer(0.into()) {
        hi + margin
    } else {
        lo + margin
    }
}

fn threshold_prefix(pi: &Permutation) -> Result<(Vec<Digit>, EventuallyPeriodicWord)> {
    let t = pi.threshold_data()?;
    let n = pi.len();
    let m = t.landmarks.m;
    let digits = if t.collapsed {
        let h = if (n - m).is_multiple_of(2) { t.landmarks.ell.unwrap() } else { t.landmarks.r.unwrap() };
        t.variants
            .iter()
            .find(|v| EventuallyPeriodicWord::periodic(v.range(h, n)).with_prefix(v.range(m, n)) == t.a)
            .expect("the minimum is attained by a variant")
            .digits
            .clone()
    } else {
        t.z.digits.clone()
    };
    Ok((digits[..m - 1].to_vec(), t.a))
}

/// Words realizing `π` that lie in the shift space of `b(a) + margin`,
/// built from `a` by truncation and a small periodic tail.
pub fn witness_word(pi: &Permutation, margin: &BigRational, precision: Precision) -> Result<EventuallyPeriodicWord> {
    let n = pi.len();
    if n < 2 {
        return Err(Error::InvalidArgument("witness needs n >= 2".into()));
    }
    if margin <= &BigRational::from_integer(0.into()) {
        return Err(Error::InvalidArgument("margin must be positive".into()));
    }
    let (head, a) = threshold_prefix(pi)?;
    let b = b_of(&a)?;
    let beta = BetaValue::Rational(offset_base(&b, margin));
    let space = ShiftSpace::new(&beta, 512, precision)?;
    let ok = |w: &EventuallyPeriodicWord| -> Result<bool> {
        Ok(pat_of_word(w, n).ok().as_ref() == Some(pi) && space.admits(w)?)
    };
    let raw = a.with_prefix(&head);
    if ok(&raw)? {
        return Ok(raw);
    }
    let top = space.max_digit();
    let mut tails: Vec<EventuallyPeriodicWord> = Vec::new();
    for len in 1..=3usize {
        let count = (top as usize + 1).pow(len as u32);
        for code in 0..count {
            let mut c = code;
            let period: Vec<Digit> = (0..len)
                .map(|_| {
                    let d = (c % (top as usize + 1)) as Digit;
                    c /= top as usize + 1;
                    d
                })
                .collect();
            let t = EventuallyPeriodicWord::periodic(&period);
            if !tails.contains(&t) {
                tails.push(t);
            }
        }
    }
    let (q, p) = (a.preperiod().len(), a.period().len());
    for j in 0..=q + 4 * p {
        let body = a.prefix(j);
        for t in &tails {
            let mut prefix = head.clone();
            prefix.extend_from_slice(&body);
            let w = t.with_prefix(&prefix);
            if ok(&w)? {
                return Ok(w);
            }
        }
    }
    Err(Error::SearchInconclusive(format!("no admissible witness for {pi} at margin {margin}")))
}

/// Bounds for exhaustive searches of admissible realizing words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordBounds {
    pub max_preperiod: usize,
    pub max_period: usize,
}

impl Default for WordBounds {
    fn default() -> Self {
        WordBounds { max_preperiod: 4, max_period: 4 }
    }
}

fn all_words(len: usize, top: Digit) -> impl Iterator<Item = Vec<Digit>> {
    let base = top as usize + 1;
    (0..base.pow(len as u32)).map(move |mut code| {
        (0..len)
            .map(|_| {
                let d = (code % base) as Digit;
                code /= base;
                d
            })
            .collect()
    })
}

/// Every canonical eventually periodic word with digits at most
/// `⌊β⌋` within the bounds that realizes `π` and is admissible.
pub fn exhaustive_realizer(
    pi: &Permutation,
    space: &ShiftSpace,
    bounds: WordBounds,
) -> Result<Option<EventuallyPeriodicWord>> {
    let n = pi.len();
    let top = space.max_digit();
    for pre_len in 0..=bounds.max_preperiod {
        for per_len in 1..=bounds.max_period {
            for pre in all_words(pre_len, top) {
                for per in all_words(per_len, top) {
                    let w = EventuallyPeriodicWord::canonicalize(&pre, &per);
                    if w.preperiod() != pre.as_slice() || w.period() != per.as_slice() {
                        continue;
                    }
                    if pat_of_word(&w, n).ok().as_ref() == Some(pi) && space.admits(&w)? {
                        return Ok(Some(w));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Outcome of testing realizability just above, just below and at `B₋`.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub pi: Permutation,
    pub b_minus: AlgebraicNumber,
    pub above_base: String,
    pub above_witness: Option<EventuallyPeriodicWord>,
    pub below_base: Option<String>,
    pub below_witness: Option<EventuallyPeriodicWord>,
    pub at_witness: Option<EventuallyPeriodicWord>,
    /// Realizable above, and not realizable below or at the threshold.
    pub consistent: bool,
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn sandwich(
    pi: &Permutation,
    margin: &BigRational,
    bounds: WordBounds,
    precision: Precision,
) -> Result<SandwichReport> {
    let a = pi.a_sequence()?;
    let b = b_of(&a)?;
    let above = offset_base(&b, margin);
    let above_space = ShiftSpace::new(&BetaValue::Rational(above.clone()), 512, precision)?;
    let above_witness = match witness_word(pi, margin, precision) {
        Ok(w) => Some(w),
        Err(Error::SearchInconclusive(_)) => exhaustive_realizer(pi, &above_space, bounds)?,
        Err(e) => return Err(e),
    };
    let below = offset_base(&b, &-margin.clone());
    let (below_base, below_witness) = if below > BigRational::one() {
        let space = ShiftSpace::new(&BetaValue::Rational(below.clone()), 512, precision)?;
        (Some(rational_string(&below)), exhaustive_realizer(pi, &space, bounds)?)
    } else {
        (None, None)
    };
    let at_witness = if b.is_one() {
        None
    } else {
        let space = ShiftSpace::new(&BetaValue::from_algebraic(&b), 4096, precision)?;
        exhaustive_realizer(pi, &space, bounds)?
    };
    let consistent = above_witness.is_some() && below_witness.is_none() && at_witness.is_none();
    Ok(SandwichReport {
        pi: pi.clone(),
        b_minus: b,
        above_base: rational_string(&above),
        above_witness,
        below_base,
        below_witness,
        at_witness,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn w(s: &str) -> EventuallyPeriodicWord {
        s.parse().unwrap()
    }

    #[test]
    fn prefixes_follow_the_digit_criterion() {
        let pre = admissible_prefixes(&p("3421"), 2);
        assert!(pre.contains(&vec![1, 1, 0]));
        assert!(pre.iter().all(|v| v[0] >= 1 && v[1] >= 1));
    }

    #[test]
    fn minimal_alphabets() {
        let r = min_alphabet_bruteforce(&p("12"), AlphabetBounds::for_length(2)).unwrap();
        assert_eq!(r.alphabet, 2);
        assert_eq!(pat_of_word(&r.witness, 2).unwrap(), p("12"));
        for s in ["4321", "7325416", "3421", "1234"] {
            let pi = p(s);
            let r = min_alphabet_bruteforce(&pi, AlphabetBounds::for_length(pi.len())).unwrap();
            assert_eq!(r.alphabet, analyze(&pi).unwrap().n_minus, "{s}");
        }
    }

    #[test]
    fn witnesses() {
        let margin = BigRational::new(1.into(), 20.into());
        let pr = Precision::default();
        assert_eq!(witness_word(&p("3421"), &margin, pr).unwrap(), w("1(100)"));
        for s in ["453261", "7325416", "4231", "1423", "892364157"] {
            let pi = p(s);
            let wit = witness_word(&pi, &margin, pr).unwrap();
            assert_eq!(pat_of_word(&wit, pi.len()).unwrap(), pi, "{s}");
        }
    }

    #[test]
    fn threshold_sandwich() {
        let margin = BigRational::new(1.into(), 20.into());
        let r = sandwich(&p("4321"), &margin, WordBounds::default(), Precision::default()).unwrap();
        assert!(r.consistent, "{r:?}");
        let r = sandwich(&p("1243"), &margin, WordBounds::default(), Precision::default()).unwrap();
        assert!(r.consistent, "{r:?}");
    }
}
