//! Permutations, their landmark indices and the digit sequence `z` that
//! determines the threshold word `a`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{format_digits, Digit, EventuallyPeriodicWord};

/// A permutation of `{1, …, n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Landmarks {
    /// Position of the maximum.
    pub m: usize,
    /// Position of the value `π(n) - 1`.
    pub ell: Option<usize>,
    /// Position of the value `π(n) + 1`.
    pub r: Option<usize>,
}

/// The digits `z_1 … z_{n-1}` or one of their variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DigitVector {
    #[serde(serialize_with = "ser_digits")]
    pub digits: Vec<Digit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant_index: Option<usize>,
}

fn ser_digits<S: Serializer>(d: &[Digit], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_digits(d))
}

impl DigitVector {
    /// `z_{[from, to)}` with 1-based bounds.
    pub fn range(&self, from: usize, to: usize) -> &[Digit] {
        &self.digits[from - 1..to - 1]
    }

    pub fn max(&self) -> Digit {
        self.digits.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for DigitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_digits(&self.digits))
    }
}

impl Permutation {
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::MalformedPermutation("empty permutation".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n {
                return Err(Error::MalformedPermutation(format!("entry {v} out of range 1..={n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::MalformedPermutation(format!("duplicate entry {v}")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { image: (1..=n).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `π(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Permutation { image: inv }
    }

    /// The circular permutation `π̃` with `π̃(π(j)) = π(j+1)` and
    /// `π̃(π(n)) = π(1)`.
    pub fn circular(&self) -> Permutation {
        let n = self.len();
        let mut t = vec![0; n];
        for j in 0..n {
            t[self.image[j] - 1] = self.image[(j + 1) % n];
        }
        Permutation { image: t }
    }

    pub fn landmarks(&self) -> Result<Landmarks> {
        let n = self.len();
        if n < 2 {
            return Err(Error::UndefinedLandmarks(n));
        }
        let inv = self.inverse();
        let last = self.at(n);
        Ok(Landmarks {
            m: inv.at(n),
            ell: (last != 1).then(|| inv.at(last - 1)),
            r: (last != n).then(|| inv.at(last + 1)),
        })
    }

    /// Increment indicators `c(i)`, `1 <= i < n`, read off `π` directly.
    fn increments_direct(&self, lm: &Landmarks) -> Vec<bool> {
        let n = self.len();
        let last = self.at(n);
        let inv = self.inverse();
        (1..n)
            .map(|i| {
                if i != last && i + 1 != last {
                    self.at(inv.at(i) + 1) < self.at(inv.at(i + 1) + 1)
                } else if i + 1 == last && last != n {
                    let (l, r) = (lm.ell.unwrap(), lm.r.unwrap());
                    self.at(l + 1) < self.at(r + 1)
                } else {
                    false
                }
            })
            .collect()
    }

    /// The same indicators read off the circular permutation.
    fn increments_circular(&self) -> Vec<bool> {
        let n = self.len();
        let last = self.at(n);
        let t = self.circular();
        (1..n)
            .map(|i| {
                if i != last && i + 1 != last {
                    t.at(i) < t.at(i + 1)
                } else if i + 1 == last && last != n {
                    t.at(i) < t.at(i + 2)
                } else {
                    false
                }
            })
            .collect()
    }

    fn digits_from_increments(&self, inc: &[bool]) -> Vec<Digit> {
        let mut below = vec![0 as Digit; self.len() + 1];
        for v in 1..self.len() {
            below[v + 1] = below[v] + inc[v - 1] as Digit;
        }
        (1..self.len()).map(|j| below[self.at(j)]).collect()
    }

    /// The digits `z_1 … z_{n-1}`.
    pub fn z_digits(&self) -> Result<DigitVector> {
        let lm = self.landmarks()?;
        let direct = self.digits_from_increments(&self.increments_direct(&lm));
        debug_assert_eq!(
            direct,
            self.digits_from_increments(&self.increments_circular()),
            "direct and circular forms of z disagree for {self}"
        );
        Ok(DigitVector { digits: direct, variant_index: None })
    }

    /// `z` computed only through the circular permutation.
    pub fn z_digits_circular(&self) -> Result<DigitVector> {
        self.landmarks()?;
        Ok(DigitVector { digits: self.digits_from_increments(&self.increments_circular()), variant_index: None })
    }

    pub fn is_collapsed(&self) -> Result<bool> {
        let z = self.z_digits()?;
        Ok(self.collapsed_with(&z, &self.landmarks()?))
    }

    fn collapsed_with(&self, z: &DigitVector, lm: &Landmarks) -> bool {
        let n = self.len();
        let (Some(l), Some(r)) = (lm.ell, lm.r) else {
            return false;
        };
        let zl = z.range(l, n);
        let zr = z.range(r, n);
        let doubled = |short: &[Digit], long: &[Digit]| {
            long.len() == 2 * short.len() && long[..short.len()] == *short && long[short.len()..] == *short
        };
        doubled(zr, zl) || doubled(zl, zr)
    }

    /// The variants `z^{(i)}` for `0 <= i < |r - ℓ|`.
    pub fn z_variants(&self) -> Result<Vec<DigitVector>> {
        let lm = self.landmarks()?;
        let z = self.z_digits()?;
        if !self.collapsed_with(&z, &lm) {
            return Err(Error::VariantUndefined);
        }
        Ok(self.variants_with(&z, &lm))
    }

    fn variants_with(&self, z: &DigitVector, lm: &Landmarks) -> Vec<DigitVector> {
        let (l, r) = (lm.ell.unwrap(), lm.r.unwrap());
        (0..l.abs_diff(r))
            .map(|i| {
                let pivot = if i % 2 == 0 { self.at(r + i) } else { self.at(l + i) };
                let digits =
                    z.digits.iter().enumerate().map(|(j, &d)| d + (self.at(j + 1) >= pivot) as Digit).collect();
                DigitVector { digits, variant_index: Some(i) }
            })
            .collect()
    }

    /// The threshold word `a` with `B₋(π) = b(a)`.
    pub fn a_sequence(&self) -> Result<EventuallyPeriodicWord> {
        Ok(self.threshold_data()?.a)
    }

    pub(crate) fn threshold_data(&self) -> Result<ThresholdData> {
        let n = self.len();
        let lm = self.landmarks()?;
        let z = self.z_digits()?;
        let collapsed = self.collapsed_with(&z, &lm);
        let last = self.at(n);
        let even = (n - lm.m).is_multiple_of(2);
        let m = lm.m;
        let assemble =
            |d: &DigitVector, h: usize| EventuallyPeriodicWord::periodic(d.range(h, n)).with_prefix(d.range(m, n));
        let (a, variants) = if collapsed {
            let variants = self.variants_with(&z, &lm);
            let h = if even { lm.ell.unwrap() } else { lm.r.unwrap() };
            let a = variants.iter().map(|v| assemble(v, h)).min().expect("at least one variant");
            (a, variants)
        } else if even && last == 1 {
            let mut period = z.range(m, n).to_vec();
            period.push(0);
            (EventuallyPeriodicWord::periodic(&period), Vec::new())
        } else if even {
            (assemble(&z, lm.ell.unwrap()), Vec::new())
        } else {
            (assemble(&z, lm.r.unwrap()), Vec::new())
        };
        debug_assert!(a.is_sup_fixed(), "a = {a} is not sup-fixed for {self}");
        Ok(ThresholdData { landmarks: lm, z, variants, collapsed, a })
    }

    /// All permutations of length `n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((1..=n).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut succ = cur.clone();
            if next_lex(&mut succ) {
                next = Some(succ);
            }
            Some(Permutation { image: cur })
        })
    }

    /// All permutations of length `n` starting with `first`, in
    /// lexicographic order.
    pub fn all_with_first(n: usize, first: usize) -> impl Iterator<Item = Permutation> {
        let rest: Vec<usize> = (1..=n).filter(|&v| v != first).collect();
        let k = rest.len();
        Permutation::all(k).map(move |p| {
            let mut image = Vec::with_capacity(n);
            image.push(first);
            image.extend(p.image.iter().map(|&i| rest[i - 1]));
            Permutation { image }
        })
    }
}

fn next_lex(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone)]
pub(crate) struct ThresholdData {
    pub landmarks: Landmarks,
    pub z: DigitVector,
    pub variants: Vec<DigitVector>,
    pub collapsed: bool,
    pub a: EventuallyPeriodicWord,
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedPermutation(s.to_string());
        let image: Vec<usize> = if s.contains(',') {
            s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?
        } else {
            s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect::<Result<_>>()?
        };
        Permutation::from_image(image)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for v in &self.image {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.image.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn z(s: &str) -> String {
        p(s).z_digits().unwrap().to_string()
    }

    #[test]
    fn parsing() {
        assert_eq!(p("3421").image(), &[3, 4, 2, 1]);
        assert_eq!(p("1").image(), &[1]);
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1").len(), 10);
        assert!(matches!("3321".parse::<Permutation>(), Err(Error::MalformedPermutation(_))));
        assert!(matches!("1,5".parse::<Permutation>(), Err(Error::MalformedPermutation(_))));
        assert!(matches!("".parse::<Permutation>(), Err(Error::MalformedPermutation(_))));
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1").to_string(), "10,9,8,7,6,5,4,3,2,1");
    }

    #[test]
    fn circular_examples() {
        assert_eq!(p("892364157").circular(), p("536174892"));
        assert_eq!(p("3421").circular(), p("3142"));
        assert_eq!(p("453261").circular(), p("462531"));
    }

    #[test]
    fn landmark_examples() {
        let lm = p("892364157").landmarks().unwrap();
        assert_eq!((lm.m, lm.ell, lm.r), (2, Some(5), Some(1)));
        let lm = p("3421").landmarks().unwrap();
        assert_eq!((lm.m, lm.ell, lm.r), (2, None, Some(3)));
        let lm = p("1423").landmarks().unwrap();
        assert_eq!((lm.m, lm.ell, lm.r), (2, Some(3), Some(2)));
        assert_eq!(p("1").landmarks(), Err(Error::UndefinedLandmarks(1)));
    }

    #[test]
    fn z_examples() {
        assert_eq!(z("892364157"), "33012102");
        assert_eq!(z("7325416"), "100100");
        assert_eq!(z("3421"), "110");
        assert_eq!(z("453261"), "11001");
        assert_eq!(z("1234567"), "012345");
        assert_eq!(z("1423"), "000");
        assert_eq!(z("3142"), "001");
        assert_eq!(z("2314"), "000");
        assert_eq!(z("4231"), "100");
    }

    #[test]
    fn collapsed_examples() {
        assert!(p("7325416").is_collapsed().unwrap());
        assert!(!p("3142").is_collapsed().unwrap());
        assert!(p("1423").is_collapsed().unwrap());
        assert_eq!(p("3142").z_variants(), Err(Error::VariantUndefined));
    }

    #[test]
    fn variant_examples() {
        let v: Vec<String> = p("7325416").z_variants().unwrap().iter().map(|d| d.to_string()).collect();
        assert_eq!(v, ["200100", "200210", "211210"]);
        let v: Vec<String> = p("1423").z_variants().unwrap().iter().map(|d| d.to_string()).collect();
        assert_eq!(v, ["010"]);
        let v: Vec<String> = p("312").z_variants().unwrap().iter().map(|d| d.to_string()).collect();
        assert_eq!(v, ["10"]);
    }

    #[test]
    fn a_examples() {
        let a = |s: &str| p(s).a_sequence().unwrap().to_string();
        assert_eq!(a("3421"), "(100)");
        assert_eq!(a("892364157"), "(30121023)");
        assert_eq!(a("7325416"), "211(210)");
        assert_eq!(a("453261"), "(10)");
        assert_eq!(a("1423"), "1(0)");
        assert_eq!(a("3142"), "(100)");
        assert_eq!(a("2314"), "(0)");
        assert_eq!(a("4231"), "1(0)");
        assert_eq!(a("312"), "1(0)");
        assert_eq!(a("12"), "(0)");
        assert_eq!(a("21"), "(0)");
    }

    #[test]
    fn enumeration() {
        let all: Vec<String> = Permutation::all(3).map(|p| p.to_string()).collect();
        assert_eq!(all, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(Permutation::all(5).count(), 120);
        let block: Vec<String> = Permutation::all_with_first(3, 2).map(|p| p.to_string()).collect();
        assert_eq!(block, ["213", "231"]);
    }
}
