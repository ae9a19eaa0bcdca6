//! Building a permutation whose threshold is a prescribed base, from the
//! eventually periodic expansion of 1 in that base.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebraic::{b_of, AlgebraicNumber};
use crate::analysis::analyze;
use crate::dynamics::{validate_expansion, Precision};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{Digit, EventuallyPeriodicWord};

/// Reading of the closing rule when no index lies in the quantified range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyRange {
    /// An empty range does not earn the bonus.
    NonVacuous,
    /// An empty range satisfies "for all" and earns the bonus.
    Vacuous,
}

/// Guards for the insertion counts when `w_j ≥ w_i + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InsertionRules {
    /// Guards read top to bottom as displayed.
    Displayed,
    /// `w_j − w_i + 1` when neither an earlier rank nor an insertion in the
    /// range lies below, `w_j − w_i − 1` when both do, `w_j − w_i` otherwise.
    Corrected,
    /// Depth-first choice of each count, keeping only those for which the
    /// digits `z_{c+j} − z_{c+i}` of the partial permutation equal `w_j − w_i`.
    Searched,
}

/// `w` split as `w[1, q) · (w[q, p+q))^∞` with `q ≥ 1` and both minimal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseState {
    pub w: EventuallyPeriodicWord,
    pub q: usize,
    pub p: usize,
    pub rho: Permutation,
    pub y: Vec<usize>,
    pub c: usize,
    pub result: Permutation,
}

/// Digits `w_1 … w_{p+q}` together with `q` and `p`.
fn anchored(w: &EventuallyPeriodicWord) -> (Vec<Digit>, usize, usize) {
    let ap = w.anchored_period();
    (w.prefix(ap.q + ap.p), ap.q, ap.p)
}

/// Ranks of the tails `w[i, ∞)` for `i < p+q`, with `p+q` inserted next to `q`.
pub fn rho_of(w: &EventuallyPeriodicWord) -> Result<Permutation> {
    let (_, q, p) = anchored(w);
    let n = p + q;
    let tails: Vec<EventuallyPeriodicWord> = (1..n).map(|k| w.tail(k)).collect();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by(|&i, &j| tails[i - 1].alt_lex_cmp(&tails[j - 1]));
    for pair in order.windows(2) {
        if tails[pair[0] - 1].alt_lex_cmp(&tails[pair[1] - 1]) == Ordering::Equal {
            return Err(Error::DegenerateExpansion(format!("tails {} and {} of {w} coincide", pair[0], pair[1])));
        }
    }
    let at_q = order.iter().position(|&i| i == q).expect("q < p+q");
    let slot = if n % 2 == 0 { at_q } else { at_q + 1 };
    order.insert(slot, n);
    let mut image = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        image[i - 1] = rank + 1;
    }
    Permutation::from_image(image)
}

/// The insertion counts `y_1 … y_{p+q}`.
pub fn y_digits(
    w: &EventuallyPeriodicWord,
    rho: &Permutation,
    rules: InsertionRules,
    convention: EmptyRange,
) -> Result<Vec<usize>> {
    let ctx = Context::new(w, rho);
    let mut y: Vec<Option<usize>> = vec![None; ctx.n];
    if rules == InsertionRules::Searched {
        return ctx
            .search(&mut y, ctx.n, convention)
            .ok_or_else(|| Error::ConstructionFailed(format!("no insertion counts reproduce the digits of {w}")));
    }
    for rank in (2..=ctx.n).rev() {
        let v = ctx.rule(&y, rank, rules).ok_or_else(|| {
            Error::ConstructionFailed(format!("no insertion rule applies at index {} of {w}", ctx.inv.at(rank)))
        })?;
        y[ctx.inv.at(rank) - 1] = Some(v);
    }
    Ok(ctx.close(y, convention))
}

struct Context<'a> {
    w: &'a EventuallyPeriodicWord,
    digits: Vec<Digit>,
    q: usize,
    n: usize,
    rho: &'a Permutation,
    inv: Permutation,
}

impl<'a> Context<'a> {
    fn new(w: &'a EventuallyPeriodicWord, rho: &'a Permutation) -> Self {
        let (digits, q, _) = anchored(w);
        Context { w, digits, q, n: rho.len(), rho, inv: rho.inverse() }
    }

    fn r(&self, j: usize) -> usize {
        if j == self.n + 1 {
            self.rho.at(self.q + 1)
        } else {
            self.rho.at(j)
        }
    }

    fn digit(&self, j: usize) -> i64 {
        self.digits[j - 1] as i64
    }

    fn any_positive(&self, y: &[Option<usize>], lo: usize, hi: usize) -> bool {
        (1..=self.n).any(|k| lo < self.rho.at(k) && self.rho.at(k) <= hi && y[k - 1].is_some_and(|v| v >= 1))
    }

    fn rule(&self, y: &[Option<usize>], rank: usize, rules: InsertionRules) -> Option<usize> {
        let j = self.inv.at(rank);
        let i = self.inv.at(rank - 1);
        let (ri1, rj1, rj) = (self.r(i + 1), self.r(j + 1), rank);
        let some = self.any_positive(y, rj, rj1);
        let diff = self.digit(j) - self.digit(i);
        let v: i64 = if diff == 0 || (diff == 1 && ri1 < rj1) {
            0
        } else if diff == 1 && ri1 > rj1 && (ri1 < rj || some) {
            1
        } else if diff == 1 && ri1 > rj1 && ri1 > rj && !some {
            2
        } else if diff == 2 && ri1 < rj && some {
            1
        } else if rules != InsertionRules::Displayed && diff >= 2 {
            diff + 1 - i64::from(ri1 < rj) - i64::from(some)
        } else if diff >= 2 && (ri1 < rj || some) {
            diff
        } else if diff >= 2 && ri1 > rj && some {
            diff + 1
        } else if diff >= 3 && ri1 < rj && !some {
            diff - 1
        } else {
            return None;
        };
        usize::try_from(v).ok()
    }

    fn close(&self, mut y: Vec<Option<usize>>, convention: EmptyRange) -> Vec<usize> {
        let j = self.inv.at(1);
        let top = self.r(j + 1);
        let in_range: Vec<usize> = (1..=self.n).filter(|&k| 1 < self.rho.at(k) && self.rho.at(k) <= top).collect();
        let none = in_range.iter().all(|&k| y[k - 1].unwrap_or(0) == 0);
        let bonus = match convention {
            EmptyRange::NonVacuous => !in_range.is_empty() && none,
            EmptyRange::Vacuous => none,
        };
        y[j - 1] = Some(self.digits[j - 1] as usize + usize::from(bonus));
        y.into_iter().map(|v| v.unwrap_or(0)).collect()
    }

    /// Whether the partial assignment reproduces `w_j − w_i` for the pair at `rank`.
    fn locally_consistent(&self, y: &[Option<usize>], rank: usize, convention: EmptyRange) -> bool {
        let (j, i) = (self.inv.at(rank), self.inv.at(rank - 1));
        let map = |k: usize| if k == self.n { self.q } else { k };
        let (jj, ii) = (map(j), map(i));
        if jj == ii {
            return true;
        }
        let full = self.close(y.to_vec(), convention);
        let c: usize = full.iter().sum();
        let Ok(pi) = assemble(self.rho, &full) else {
            return false;
        };
        let Ok(z) = pi.z_digits() else {
            return false;
        };
        let zd = |k: usize| z.digits[c + k - 1] as i64;
        zd(jj) - zd(ii) == self.digit(j) - self.digit(i)
    }

    fn search(&self, y: &mut Vec<Option<usize>>, rank: usize, convention: EmptyRange) -> Option<Vec<usize>> {
        if rank < 2 {
            let full = self.close(y.clone(), convention);
            let pi = assemble(self.rho, &full).ok()?;
            return analyze(&pi).is_ok_and(|r| &r.a == self.w).then_some(full);
        }
        let j = self.inv.at(rank);
        let diff = (self.digit(j) - self.digit(self.inv.at(rank - 1))).max(0) as usize;
        let mut candidates: Vec<usize> = self.rule(y, rank, InsertionRules::Corrected).into_iter().collect();
        let first = candidates.first().copied();
        candidates.extend((0..=diff + 2).filter(|&v| Some(v) != first));
        for v in candidates {
            y[j - 1] = Some(v);
            if self.locally_consistent(y, rank, convention) {
                if let Some(found) = self.search(y, rank - 1, convention) {
                    return Some(found);
                }
            }
        }
        y[j - 1] = None;
        None
    }
}

/// Inserts `y_j` values below each `ϱ(j)` and puts the new values first in
/// increasing order.
pub fn assemble(rho: &Permutation, y: &[usize]) -> Result<Permutation> {
    let n = rho.len();
    let c: usize = y.iter().sum();
    let mut image = vec![0; c + n];
    for j in 1..=n {
        let below: usize = (1..=n).filter(|&k| rho.at(k) <= rho.at(j)).map(|k| y[k - 1]).sum();
        image[c + j - 1] = rho.at(j) + below;
    }
    let mut used = vec![false; c + n + 1];
    for &v in &image[c..] {
        used[v] = true;
    }
    let mut free = (1..=c + n).filter(|&v| !used[v]);
    for slot in image.iter_mut().take(c) {
        *slot = free.next().expect("exactly c free values");
    }
    Permutation::from_image(image)
}

fn build(
    w: &EventuallyPeriodicWord,
    rho: &Permutation,
    rules: InsertionRules,
    convention: EmptyRange,
) -> Result<InverseState> {
    let (_, q, p) = anchored(w);
    let y = y_digits(w, rho, rules, convention)?;
    let c = y.iter().sum();
    let result = assemble(rho, &y)?;
    Ok(InverseState { w: w.clone(), q, p, rho: rho.clone(), y, c, result })
}

/// Result of [`construct_pi`], including the convention that verified.
#[derive(Debug, Clone, Serialize)]
pub struct InverseResult {
    pub pi: Permutation,
    pub c: usize,
    pub rho: Permutation,
    pub y: Vec<usize>,
    pub rules: InsertionRules,
    pub convention: EmptyRange,
    pub verified: bool,
    pub b_minus: AlgebraicNumber,
}

fn round_trips(state: &InverseState) -> bool {
    analyze(&state.result).is_ok_and(|r| r.a == state.w)
}

/// A permutation `π` whose sequence `a` equals `w`, so that `B₋(π) = b(w)`.
pub fn construct_pi(w: &EventuallyPeriodicWord, precision: Precision) -> Result<InverseResult> {
    if !validate_expansion(w, precision)? {
        return Err(Error::MalformedWord(format!("{w} is not the expansion of 1 in its own base")));
    }
    construct_unchecked(w)
}

/// [`construct_pi`] for a word already known to be a valid expansion.
pub fn construct_unchecked(w: &EventuallyPeriodicWord) -> Result<InverseResult> {
    let rho = rho_of(w)?;
    let mut candidates = Vec::new();
    let readings = [InsertionRules::Displayed, InsertionRules::Corrected, InsertionRules::Searched]
        .into_iter()
        .flat_map(|r| [(r, EmptyRange::NonVacuous), (r, EmptyRange::Vacuous)]);
    for (rules, convention) in readings {
        match build(w, &rho, rules, convention) {
            Ok(state) if round_trips(&state) => {
                return Ok(InverseResult {
                    pi: state.result,
                    c: state.c,
                    rho: state.rho,
                    y: state.y,
                    rules,
                    convention,
                    verified: true,
                    b_minus: b_of(w)?,
                });
            }
            Ok(state) => candidates.push(format!("{rules:?}/{convention:?}: {}", state.result)),
            Err(e) => candidates.push(format!("{rules:?}/{convention:?}: {e}")),
        }
    }
    Err(Error::ConstructionFailed(format!("no reading round-trips for {w}: {}", candidates.join("; "))))
}
