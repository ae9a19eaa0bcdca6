//! Eventually periodic words over nonnegative integer digits and the
//! alternating lexicographical order on them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Digit = u32;

/// Length cap for materialized words of the substitution.
pub const MAX_SUBSTITUTION_LEN: usize = 1 << 24;

/// A word `preperiod · (period)^∞` stored in canonical form: the period is
/// primitive and the preperiod is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    preperiod: Vec<Digit>,
    period: Vec<Digit>,
}

/// Minimal `(q, p)` with `q >= 1` such that `w[p+q..] = w[q..]` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnchoredPeriod {
    pub q: usize,
    pub p: usize,
}

/// Returns the primitive root of a nonempty word and its exponent.
pub fn primitive_root(v: &[Digit]) -> (&[Digit], usize) {
    let n = v.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| v[i] == v[i - d]) {
            return (&v[..d], n / d);
        }
    }
    (v, 1)
}

impl EventuallyPeriodicWord {
    /// Canonicalizes `preperiod · (period)^∞`.
    ///
    /// Panics if `period` is empty.
    pub fn canonicalize(preperiod: &[Digit], period: &[Digit]) -> Self {
        assert!(!period.is_empty(), "period must be nonempty");
        let mut period = primitive_root(period).0.to_vec();
        let mut preperiod = preperiod.to_vec();
        while let Some(&last) = preperiod.last() {
            if last != *period.last().unwrap() {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EventuallyPeriodicWord { preperiod, period }
    }

    pub fn try_new(preperiod: &[Digit], period: &[Digit]) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::MalformedWord("empty period".into()));
        }
        Ok(Self::canonicalize(preperiod, period))
    }

    pub fn periodic(period: &[Digit]) -> Self {
        Self::canonicalize(&[], period)
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Digit] {
        &self.period
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }

    /// Number of distinct tails, `|preperiod| + |period|`.
    pub fn num_tails(&self) -> usize {
        self.preperiod.len() + self.period.len()
    }

    /// Digit at 1-based position `k`.
    pub fn digit_at(&self, k: usize) -> Digit {
        assert!(k >= 1, "positions are 1-based");
        let i = k - 1;
        let q = self.preperiod.len();
        if i < q {
            self.preperiod[i]
        } else {
            self.period[(i - q) % self.period.len()]
        }
    }

    pub fn prefix(&self, len: usize) -> Vec<Digit> {
        (1..=len).map(|k| self.digit_at(k)).collect()
    }

    pub fn digits(&self) -> impl Iterator<Item = Digit> + '_ {
        self.preperiod.iter().copied().chain(self.period.iter().copied().cycle())
    }

    /// The tail `w[k..]` for 1-based `k`.
    pub fn tail(&self, k: usize) -> Self {
        assert!(k >= 1, "positions are 1-based");
        let q = self.preperiod.len();
        if k - 1 < q {
            EventuallyPeriodicWord { preperiod: self.preperiod[k - 1..].to_vec(), period: self.period.clone() }
        } else {
            let mut period = self.period.clone();
            let shift = (k - 1 - q) % period.len();
            period.rotate_left(shift);
            EventuallyPeriodicWord { preperiod: Vec::new(), period }
        }
    }

    /// `prefix · self`.
    pub fn with_prefix(&self, prefix: &[Digit]) -> Self {
        let mut pre = prefix.to_vec();
        pre.extend_from_slice(&self.preperiod);
        Self::canonicalize(&pre, &self.period)
    }

    pub fn max_digit(&self) -> Digit {
        self.preperiod.iter().chain(self.period.iter()).copied().max().unwrap_or(0)
    }

    /// Normalization with `q >= 1`: the word equals `w[1..q) · (w[q..q+p))^∞`.
    pub fn anchored_period(&self) -> AnchoredPeriod {
        AnchoredPeriod { q: self.preperiod.len() + 1, p: self.period.len() }
    }

    /// The first `q` digits under the anchored normalization.
    pub fn anchored_prefix(&self) -> Vec<Digit> {
        self.prefix(self.anchored_period().q)
    }

    /// Comparison horizon: words agreeing on this many digits are equal.
    fn horizon(&self, other: &Self) -> usize {
        self.preperiod.len().max(other.preperiod.len()) + self.period.len().lcm(&other.period.len()) + 1
    }

    /// Alternating lexicographical comparison.
    pub fn alt_lex_cmp(&self, other: &Self) -> Ordering {
        let h = self.horizon(other);
        alt_lex_cmp_iter(self.digits().take(h), other.digits().take(h)).unwrap_or(Ordering::Equal)
    }

    /// `sup_k w[k..]` under the alternating order.
    pub fn sup_of_shifts(&self) -> Self {
        (1..=self.num_tails()).map(|k| self.tail(k)).max_by(|a, b| a.alt_lex_cmp(b)).expect("at least one tail")
    }

    pub fn is_sup_fixed(&self) -> bool {
        (2..=self.num_tails()).all(|k| self.tail(k).alt_lex_cmp(self) != Ordering::Greater)
    }

    pub(crate) fn require_sup_fixed(&self) -> Result<()> {
        if self.is_sup_fixed() {
            Ok(())
        } else {
            Err(Error::SupNotFixed { word: self.to_string(), sup: self.sup_of_shifts().to_string() })
        }
    }

    /// Compares against the aperiodic fixed point `u` of the substitution.
    pub fn cmp_u(&self) -> Result<Ordering> {
        let mut len = 64usize.max(2 * self.num_tails());
        loop {
            let u = u_prefix(len)?;
            if let Some(ord) = alt_lex_cmp_iter(self.digits().take(len), u) {
                return Ok(ord);
            }
            len *= 2;
        }
    }
}

impl PartialOrd for EventuallyPeriodicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EventuallyPeriodicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alt_lex_cmp(other)
    }
}

/// Alternating order decided at the first difference of two digit streams:
/// odd positions compare as usual, even positions reversed. Returns `None`
/// if one stream ends before a difference is found.
pub fn alt_lex_cmp_iter<A, B>(a: A, b: B) -> Option<Ordering>
where
    A: IntoIterator<Item = Digit>,
    B: IntoIterator<Item = Digit>,
{
    for (i, (x, y)) in a.into_iter().zip(b).enumerate() {
        if x != y {
            let ord = x.cmp(&y);
            // position i + 1 is even
            return Some(if i % 2 == 1 { ord.reverse() } else { ord });
        }
    }
    None
}

/// Alternating comparison of two finite words of equal length.
pub fn alt_lex_cmp_finite(a: &[Digit], b: &[Digit]) -> Ordering {
    assert_eq!(a.len(), b.len(), "finite words must have equal length");
    alt_lex_cmp_iter(a.iter().copied(), b.iter().copied()).unwrap_or(Ordering::Equal)
}

/// The companion word `v'`: decrement-and-append-zero when `v` ends in a
/// nonzero digit, otherwise drop the trailing zero and increment.
pub fn derived_word(v: &[Digit]) -> Result<Vec<Digit>> {
    match v {
        [] | [0] => Err(Error::DerivedWordUndefined),
        [.., last] if *last != 0 => {
            let mut out = v.to_vec();
            *out.last_mut().unwrap() -= 1;
            out.push(0);
            Ok(out)
        }
        _ => {
            let mut out = v[..v.len() - 1].to_vec();
            *out.last_mut().unwrap() += 1;
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitivity {
    Primitive,
    AlmostPrimitiveSquare,
    Imprimitive,
}

pub fn primitivity_class(v: &[Digit]) -> Primitivity {
    assert!(!v.is_empty(), "word must be nonempty");
    match primitive_root(v) {
        (_, 1) => Primitivity::Primitive,
        (root, 2) if root.len() % 2 == 1 => Primitivity::AlmostPrimitiveSquare,
        _ => Primitivity::Imprimitive,
    }
}

fn substitute(w: &[Digit]) -> Result<Vec<Digit>> {
    let mut out = Vec::with_capacity(w.len() * 2);
    for &d in w {
        match d {
            0 => out.push(1),
            1 => out.extend_from_slice(&[1, 0, 0]),
            _ => unreachable!("substitution only acts on binary words"),
        }
        if out.len() > MAX_SUBSTITUTION_LEN {
            return Err(Error::Resource(format!("substituted word longer than {MAX_SUBSTITUTION_LEN}")));
        }
    }
    Ok(out)
}

/// `φ^k(0)` for the substitution `0 -> 1, 1 -> 100`.
pub fn phi_power(k: usize) -> Result<Vec<Digit>> {
    let mut w = vec![0];
    for _ in 0..k {
        w = substitute(&w)?;
    }
    Ok(w)
}

/// Prefix of length `len` of the fixed point `u = φ(u)`.
pub fn u_prefix(len: usize) -> Result<Vec<Digit>> {
    if len > MAX_SUBSTITUTION_LEN {
        return Err(Error::Resource(format!("prefix of u longer than {MAX_SUBSTITUTION_LEN}")));
    }
    let mut w = vec![1];
    while w.len() < len {
        w = substitute(&w)?;
    }
    w.truncate(len);
    Ok(w)
}

/// Decides `w ∈ {v, v'}^∞` through the order characterization.
pub fn in_vv_prime_star(w: &EventuallyPeriodicWord, v: &[Digit]) -> Result<bool> {
    w.require_sup_fixed()?;
    let vp = derived_word(v)?;
    let (lo, hi) = if v.len().is_multiple_of(2) {
        (EventuallyPeriodicWord::periodic(v), EventuallyPeriodicWord::periodic(v).with_prefix(&vp))
    } else {
        (EventuallyPeriodicWord::periodic(&vp), EventuallyPeriodicWord::periodic(&vp).with_prefix(v))
    };
    let answer = lo <= *w && *w <= hi;
    debug_assert_eq!(answer, factorizes_over(w, &[v, &vp]));
    Ok(answer)
}

/// Whether `w` is an infinite concatenation of the given blocks.
pub fn factorizes_over(w: &EventuallyPeriodicWord, blocks: &[&[Digit]]) -> bool {
    let q = w.preperiod.len();
    let p = w.period.len();
    let states = q + p;
    let norm = |s: usize| if s < q { s } else { q + (s - q) % p };
    let successors = |s: usize| -> Vec<usize> {
        blocks
            .iter()
            .filter(|b| !b.is_empty())
            .filter(|b| b.iter().enumerate().all(|(i, &d)| w.digit_at(s + i + 1) == d))
            .map(|b| norm(s + b.len()))
            .collect()
    };
    let adj: Vec<Vec<usize>> = (0..states).map(successors).collect();
    let reach_from = |start: &[usize]| {
        let mut seen = vec![false; states];
        let mut stack = start.to_vec();
        while let Some(s) = stack.pop() {
            if !seen[s] {
                seen[s] = true;
                stack.extend(adj[s].iter().copied());
            }
        }
        seen
    };
    let reachable = reach_from(&[0]);
    (0..states).any(|s| reachable[s] && reach_from(&adj[s])[s])
}

fn fmt_digits(digits: &[Digit], comma: bool) -> String {
    if comma {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    } else {
        digits.iter().map(|d| d.to_string()).collect()
    }
}

/// Formats a finite digit word: a plain digit string when every digit is at
/// most 9, otherwise a comma list.
pub fn format_digits(digits: &[Digit]) -> String {
    fmt_digits(digits, digits.iter().any(|&d| d > 9))
}

pub fn parse_digits(text: &str) -> Result<Vec<Digit>> {
    let text = text.trim();
    if text.contains(',') {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<Digit>().map_err(|_| Error::MalformedWord(text.to_string())))
            .collect()
    } else {
        text.chars().map(|c| c.to_digit(10).ok_or_else(|| Error::MalformedWord(text.to_string()))).collect()
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comma = self.max_digit() > 9;
        let pre = fmt_digits(&self.preperiod, comma);
        let mut per = fmt_digits(&self.period, comma);
        if comma && !per.contains(',') && !pre.contains(',') {
            // keep the literal in comma mode
            per.push(',');
        }
        write!(f, "{pre}({per})")
    }
}

impl FromStr for EventuallyPeriodicWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedWord(s.to_string());
        let open = s.find('(').ok_or_else(bad)?;
        if !s.ends_with(')') || s[open + 1..].contains('(') {
            return Err(bad());
        }
        let comma = s.contains(',');
        let parse = |part: &str| -> Result<Vec<Digit>> {
            if comma {
                part.split(',')
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<Digit>().map_err(|_| bad()))
                    .collect()
            } else {
                part.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
            }
        };
        let pre = parse(&s[..open])?;
        let per = parse(&s[open + 1..s.len() - 1])?;
        Self::try_new(&pre, &per)
    }
}

impl Serialize for EventuallyPeriodicWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}
