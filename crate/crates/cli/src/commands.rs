use std::cmp::Ordering;

use negbeta::analysis::{
    analyze, count_b1, extremal_report, pat_of_orbit, pat_of_word, prop1_check, spectrum, SpectrumGroup,
};
use negbeta::dynamics::validate_expansion;
use negbeta::inverse::{construct_pi, construct_unchecked};
use negbeta::search::{min_alphabet_bruteforce, sandwich, AlphabetBounds, WordBounds};
use negbeta::{BetaValue, Error, EventuallyPeriodicWord, Expansion, Permutation, Precision, Result, ShiftSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::render::{grouped, join, long_value, opt, short_value, KeyValues, Table};

/// What a subcommand produced, ready for any output format.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub table: Table,
    pub text: String,
    /// Nonzero when the command ran but its checks failed.
    pub status: i32,
}

impl Outcome {
    fn new(inputs: Value, result: Value, table: Table, text: String) -> Self {
        Outcome { inputs, result, table, text, status: 0 }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

pub fn parse_perm(s: &str) -> Result<Permutation> {
    s.parse()
}

pub fn parse_word(s: &str) -> Result<EventuallyPeriodicWord> {
    s.parse()
}

/// `p/q`, an integer, or a finite decimal such as `0.05`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("{s} is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(digits, scale))
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn analyze_cmd(pi: &Permutation) -> Result<Outcome> {
    let r = analyze(pi)?;
    let poly = r.poly.clone().unwrap_or_else(|| r.b_minus.minimal_polynomial().clone());
    let variants: Vec<String> = r.variants.iter().map(ToString::to_string).collect();
    let mut result = to_value(&r);
    result["polynomial"] = json!(poly.to_human());
    result["coefficients"] = to_value(&poly);
    result.as_object_mut().expect("object").remove("poly");

    let mut table = Table::new(&[
        "pi",
        "m",
        "ell",
        "r",
        "z",
        "collapsed",
        "variants",
        "a",
        "polynomial",
        "b_minus",
        "n_minus",
        "epsilon",
    ]);
    table.push(vec![
        r.pi.to_string(),
        r.landmarks.m.to_string(),
        opt(&r.landmarks.ell),
        opt(&r.landmarks.r),
        r.z.to_string(),
        r.collapsed.to_string(),
        variants.join(" "),
        r.a.to_string(),
        poly.to_human(),
        short_value(&r.b_minus, 12),
        r.n_minus.to_string(),
        r.epsilon.to_string(),
    ]);

    let mut kv = KeyValues::new();
    kv.add("pi", &r.pi)
        .add("landmarks", format!("m={} ell={} r={}", r.landmarks.m, opt(&r.landmarks.ell), opt(&r.landmarks.r)))
        .add("z", &r.z)
        .add("collapsed", if r.collapsed { "yes" } else { "no" });
    if !variants.is_empty() {
        kv.add("variants", variants.join(" "));
    }
    kv.add("a", &r.a)
        .add("polynomial", poly.to_human())
        .add("B-", long_value(&r.b_minus))
        .add("N-", r.n_minus)
        .add("epsilon", r.epsilon);
    if let Some(k) = r.b1_exponent {
        kv.add("phi power", k);
    }
    Ok(Outcome::new(json!({ "pi": pi.to_string() }), result, table, kv.render()))
}

fn group_value(g: &SpectrumGroup) -> Value {
    json!({
        "value": to_value(&g.value),
        "polynomial": g.polynomial.to_human(),
        "permutations": to_value(&g.permutations),
    })
}

/// Groups over `S_from ∪ … ∪ S_to`, merged by exact value.
fn merged_spectrum(from: usize, to: usize) -> Result<Vec<SpectrumGroup>> {
    let mut merged: Vec<SpectrumGroup> = Vec::new();
    for n in from..=to {
        for g in spectrum(n)? {
            match merged.binary_search_by(|m| m.value.cmp_exact(&g.value)) {
                Ok(i) => merged[i].permutations.extend(g.permutations),
                Err(i) => merged.insert(i, g),
            }
        }
    }
    Ok(merged)
}

pub fn spectrum_cmd(n: usize, upto: bool) -> Result<Outcome> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("spectrum needs n >= 2, got {n}")));
    }
    let from = if upto { 2 } else { n };
    let groups = merged_spectrum(from, n)?;
    let mut table = Table::new(&["value", "exact", "polynomial", "n", "pi"]);
    for g in &groups {
        for pi in &g.permutations {
            table.push(vec![
                g.value.to_decimal(12),
                g.value.as_rational().map(|r| rational_text(&r)).unwrap_or_default(),
                g.polynomial.to_human(),
                pi.len().to_string(),
                pi.to_string(),
            ]);
        }
    }
    let blocks: Vec<(String, String, Vec<String>)> = groups
        .iter()
        .map(|g| {
            let mut rows = Vec::new();
            for len in from..=n {
                let members: Vec<String> =
                    g.permutations.iter().filter(|p| p.len() == len).map(ToString::to_string).collect();
                rows.extend(members.chunks(4).map(|c| c.join(", ")));
            }
            (short_value(&g.value, 3), g.polynomial.to_human(), rows)
        })
        .collect();
    let text = grouped(["beta", "root of", "pi with B- = beta"], &blocks);
    let result = json!({
        "lengths": (from..=n).collect::<Vec<_>>(),
        "groups": groups.iter().map(group_value).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(json!({ "n": n, "upto": upto }), result, table, text))
}

pub fn count_b1_cmd(n_max: usize) -> Result<Outcome> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("count-b1 needs nmax >= 2, got {n_max}")));
    }
    let counts = count_b1(n_max)?;
    let mut table = Table::new(&["n", "count"]);
    for (n, c) in &counts {
        table.push(vec![n.to_string(), c.to_string()]);
    }
    let sequence: Vec<usize> = counts.iter().map(|&(_, c)| c).collect();
    let result = json!({
        "counts": counts.iter().map(|&(n, c)| json!({ "n": n, "count": c })).collect::<Vec<_>>(),
        "sequence": sequence,
    });
    Ok(Outcome::new(json!({ "nmax": n_max }), result, table, format!("{}\n", join(&sequence, " "))))
}

pub fn extremal_cmd(n: usize, exhaustive: bool) -> Result<Outcome> {
    let r = extremal_report(n, exhaustive)?;
    let list = |v: &Option<Vec<Permutation>>| v.as_ref().map_or_else(|| "-".to_string(), |v| join(v, " "));
    let mut table = Table::new(&[
        "n",
        "max_word",
        "max_value",
        "in_open_interval",
        "predicted_maximizer",
        "maximizers",
        "predicted_full_alphabet",
        "full_alphabet",
        "verified",
    ]);
    table.push(vec![
        n.to_string(),
        r.max_word.to_string(),
        short_value(&r.max_value, 12),
        r.max_in_open_interval.to_string(),
        r.predicted_maximizer.to_string(),
        list(&r.maximizers),
        join(&r.predicted_full_alphabet, " "),
        list(&r.full_alphabet),
        opt(&r.verified),
    ]);
    let mut kv = KeyValues::new();
    kv.add("n", n)
        .add("max word", &r.max_word)
        .add("max B-", long_value(&r.max_value))
        .add(&format!("in ({}, {})", n - 2, n - 1), r.max_in_open_interval)
        .add("predicted maximizer", &r.predicted_maximizer)
        .add("maximizers", list(&r.maximizers))
        .add("predicted N- = n-1", join(&r.predicted_full_alphabet, " "))
        .add("observed N- = n-1", list(&r.full_alphabet))
        .add("verified", opt(&r.verified));
    let mut out = Outcome::new(json!({ "n": n, "exhaustive": exhaustive }), to_value(&r), table, kv.render());
    if r.verified == Some(false) || !r.max_in_open_interval {
        out.status = 1;
    }
    Ok(out)
}

pub fn invert_cmd(w: &EventuallyPeriodicWord, precision: Precision) -> Result<Outcome> {
    let r = construct_pi(w, precision)?;
    let result = json!({
        "pi": r.pi.to_string(),
        "c": r.c,
        "rho": r.rho.to_string(),
        "y": r.y,
        "verified": r.verified,
        "b_minus": to_value(&r.b_minus),
        "rules": to_value(&r.rules),
        "convention": to_value(&r.convention),
    });
    let mut table = Table::new(&["word", "pi", "c", "rho", "y", "rules", "convention", "verified", "b_minus"]);
    let rules = result["rules"].as_str().unwrap_or_default().to_string();
    let convention = result["convention"].as_str().unwrap_or_default().to_string();
    table.push(vec![
        w.to_string(),
        r.pi.to_string(),
        r.c.to_string(),
        r.rho.to_string(),
        join(&r.y, " "),
        rules.clone(),
        convention.clone(),
        r.verified.to_string(),
        short_value(&r.b_minus, 12),
    ]);
    let mut kv = KeyValues::new();
    kv.add("word", w)
        .add("pi", &r.pi)
        .add("c", r.c)
        .add("rho", &r.rho)
        .add("y", join(&r.y, " "))
        .add("rules", rules)
        .add("convention", convention)
        .add("verified", r.verified)
        .add("B-", long_value(&r.b_minus));
    Ok(Outcome::new(json!({ "word": w.to_string() }), result, table, kv.render()))
}

fn beta_kind(beta: &BetaValue) -> &'static str {
    match beta {
        BetaValue::Rational(_) => "rational",
        BetaValue::Quadratic(_) => "quadratic",
        BetaValue::Algebraic(_) => "algebraic",
    }
}

pub fn expansion_cmd(beta: &BetaValue, digits: usize, precision: Precision) -> Result<Outcome> {
    let e = beta.expansion_of_one(digits, true, precision)?;
    let periodic = matches!(e, Expansion::Periodic(_));
    let result = json!({
        "beta": beta.to_string(),
        "backend": beta_kind(beta),
        "periodic": periodic,
        "expansion": e.to_string(),
    });
    let mut table = Table::new(&["beta", "backend", "periodic", "expansion"]);
    table.push(vec![beta.to_string(), beta_kind(beta).into(), periodic.to_string(), e.to_string()]);
    let mut kv = KeyValues::new();
    kv.add("beta", beta).add("backend", beta_kind(beta)).add("d(1)", &e);
    Ok(Outcome::new(json!({ "beta": beta.to_string(), "digits": digits }), result, table, kv.render()))
}

pub fn member_cmd(
    w: &EventuallyPeriodicWord,
    beta: &BetaValue,
    digits: usize,
    precision: Precision,
) -> Result<Outcome> {
    let space = ShiftSpace::new(beta, digits, precision)?;
    let member = space.admits(w)?;
    let result = json!({
        "word": w.to_string(),
        "beta": beta.to_string(),
        "member": member,
        "expansion_of_one": space.expansion().to_string(),
        "max_digit": space.max_digit(),
    });
    let mut table = Table::new(&["word", "beta", "member"]);
    table.push(vec![w.to_string(), beta.to_string(), member.to_string()]);
    let mut kv = KeyValues::new();
    kv.add("word", w).add("beta", beta).add("d(1)", space.expansion()).add("member", member);
    let inputs = json!({ "word": w.to_string(), "beta": beta.to_string(), "digits": digits });
    Ok(Outcome::new(inputs, result, table, kv.render()))
}

pub fn pat_cmd(w: &EventuallyPeriodicWord, n: usize) -> Result<Outcome> {
    let pi = pat_of_word(w, n)?;
    let mut table = Table::new(&["word", "n", "pi"]);
    table.push(vec![w.to_string(), n.to_string(), pi.to_string()]);
    let result = json!({ "pi": pi.to_string() });
    Ok(Outcome::new(json!({ "word": w.to_string(), "n": n }), result, table, format!("{pi}\n")))
}

pub fn realize_cmd(pi: &Permutation, bounds: AlphabetBounds) -> Result<Outcome> {
    let found = min_alphabet_bruteforce(pi, bounds)?;
    let formula = analyze(pi)?.n_minus;
    let agrees = found.alphabet == formula;
    let result = json!({
        "alphabet": found.alphabet,
        "witness": found.witness.to_string(),
        "n_minus": formula,
        "agrees": agrees,
    });
    let mut table = Table::new(&["pi", "alphabet", "witness", "n_minus", "agrees"]);
    table.push(vec![
        pi.to_string(),
        found.alphabet.to_string(),
        found.witness.to_string(),
        formula.to_string(),
        agrees.to_string(),
    ]);
    let mut kv = KeyValues::new();
    kv.add("pi", pi)
        .add("alphabet", found.alphabet)
        .add("witness", &found.witness)
        .add("N-", formula)
        .add("agrees", agrees);
    let inputs = json!({
        "pi": pi.to_string(),
        "max_prefix": bounds.max_prefix,
        "max_period": bounds.max_period,
        "max_alphabet": bounds.max_alphabet,
    });
    let mut out = Outcome::new(inputs, result, table, kv.render());
    if !agrees {
        out.status = 1;
    }
    Ok(out)
}

pub fn verify_cmd(pi: &Permutation, margin: &BigRational, precision: Precision) -> Result<Outcome> {
    if margin <= &BigRational::zero() {
        return Err(Error::InvalidArgument("margin must be positive".into()));
    }
    let r = sandwich(pi, margin, WordBounds::default(), precision)?;
    let mut table = Table::new(&[
        "pi",
        "b_minus",
        "above_base",
        "above_witness",
        "below_base",
        "below_witness",
        "at_witness",
        "consistent",
    ]);
    table.push(vec![
        pi.to_string(),
        short_value(&r.b_minus, 12),
        r.above_base.clone(),
        opt(&r.above_witness),
        opt(&r.below_base),
        opt(&r.below_witness),
        opt(&r.at_witness),
        r.consistent.to_string(),
    ]);
    let mut kv = KeyValues::new();
    kv.add("pi", pi)
        .add("B-", long_value(&r.b_minus))
        .add("above", format!("{} witness {}", r.above_base, opt(&r.above_witness)))
        .add("below", format!("{} witness {}", opt(&r.below_base), opt(&r.below_witness)))
        .add("at", format!("witness {}", opt(&r.at_witness)))
        .add("consistent", r.consistent);
    let inputs = json!({ "pi": pi.to_string(), "margin": rational_text(margin) });
    let mut out = Outcome::new(inputs, to_value(&r), table, kv.render());
    if !r.consistent {
        out.status = 1;
    }
    Ok(out)
}

fn random_perm(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> Permutation {
    let n = rng.gen_range(lo..=hi);
    let mut image: Vec<usize> = (1..=n).collect();
    image.shuffle(rng);
    Permutation::from_image(image).expect("shuffled identity")
}

fn random_word(rng: &mut ChaCha8Rng, max_digit: u32, max_pre: usize, max_per: usize) -> EventuallyPeriodicWord {
    let pre: Vec<u32> = (0..rng.gen_range(0..=max_pre)).map(|_| rng.gen_range(0..=max_digit)).collect();
    let per: Vec<u32> = (0..rng.gen_range(1..=max_per)).map(|_| rng.gen_range(0..=max_digit)).collect();
    EventuallyPeriodicWord::canonicalize(&pre, &per)
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den_max: i64) -> BigRational {
    let den = rng.gen_range(1..=den_max);
    let num = rng.gen_range(lo * den + 1..=hi * den);
    BigRational::new(num.into(), den.into())
}

/// Outcome of one randomized property: `Ok(())`, or a counterexample.
type Check = std::result::Result<(), String>;

fn tally(name: &'static str, checks: Vec<Check>) -> (&'static str, usize, usize, Option<String>) {
    let failed: Vec<String> = checks.iter().filter_map(|c| c.clone().err()).collect();
    (name, checks.len(), checks.len() - failed.len(), failed.into_iter().next())
}

/// Randomized spot checks of the core invariants, reproducible from `seed`.
pub fn check_cmd(cases: usize, seed: u64, precision: Precision) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<Permutation> = (0..cases).map(|_| random_perm(&mut rng, 2, 9)).collect();
    let pairs: Vec<(EventuallyPeriodicWord, Permutation)> =
        (0..cases).map(|_| (random_word(&mut rng, 3, 4, 4), random_perm(&mut rng, 2, 6))).collect();
    let words: Vec<EventuallyPeriodicWord> = (0..cases).map(|_| random_word(&mut rng, 3, 3, 3)).collect();
    let orbits: Vec<(BigRational, BigRational, usize)> = (0..cases)
        .map(|_| {
            let beta = random_rational(&mut rng, 1, 4, 9);
            let x = random_rational(&mut rng, 0, 1, 50);
            (beta, x, rng.gen_range(2..=6))
        })
        .collect();

    let threshold = perms
        .par_iter()
        .map(|pi| {
            let r = analyze(pi).map_err(|e| format!("{pi}: {e}"))?;
            if r.n_minus != r.n_minus_from_digits() || !r.a.is_sup_fixed() {
                return Err(pi.to_string());
            }
            Ok(())
        })
        .collect();
    let criterion = pairs
        .par_iter()
        .map(|(w, pi)| {
            let direct = pat_of_word(w, pi.len()).ok();
            if prop1_check(w, pi) == (direct.as_ref() == Some(pi)) {
                Ok(())
            } else {
                Err(format!("{w} {pi}"))
            }
        })
        .collect();
    let inverse = words
        .par_iter()
        .map(|w| match validate_expansion(w, precision) {
            Ok(false) => Ok(()),
            Ok(true) => {
                let r = construct_unchecked(w).map_err(|e| format!("{w}: {e}"))?;
                let back = analyze(&r.pi).map_err(|e| format!("{w}: {e}"))?;
                if back.a == *w && back.b_minus.cmp_exact(&r.b_minus) == Ordering::Equal {
                    Ok(())
                } else {
                    Err(w.to_string())
                }
            }
            Err(e) => Err(format!("{w}: {e}")),
        })
        .collect();
    let orbit = orbits
        .par_iter()
        .map(|(beta, x, n)| {
            let label = format!("beta={} x={} n={n}", rational_text(beta), rational_text(x));
            match pat_of_orbit(&BetaValue::Rational(beta.clone()), x, *n, precision) {
                Ok(pi) => {
                    let b = analyze(&pi).map_err(|e| format!("{label}: {e}"))?.b_minus;
                    if b.cmp_rational(beta) == Ordering::Less {
                        Ok(())
                    } else {
                        Err(label)
                    }
                }
                Err(Error::PatternUndefined(_)) => Ok(()),
                Err(e) => Err(format!("{label}: {e}")),
            }
        })
        .collect();

    let rows = [
        tally("threshold-identities", threshold),
        tally("pattern-criterion", criterion),
        tally("inverse-round-trip", inverse),
        tally("orbit-below-threshold", orbit),
    ];
    let mut table = Table::new(&["property", "cases", "passed", "counterexample"]);
    let mut kv = KeyValues::new();
    let mut all = true;
    for (name, total, passed, example) in &rows {
        all &= passed == total;
        table.push(vec![name.to_string(), total.to_string(), passed.to_string(), example.clone().unwrap_or_default()]);
        let note = example.as_ref().map(|e| format!("  first failure {e}")).unwrap_or_default();
        kv.add(name, format!("{passed}/{total}{note}"));
    }
    let result = json!({
        "properties": rows
            .iter()
            .map(|(name, total, passed, example)| json!({
                "property": name,
                "cases": total,
                "passed": passed,
                "counterexample": example,
            }))
            .collect::<Vec<_>>(),
        "all_passed": all,
    });
    let mut out = Outcome::new(json!({ "cases": cases, "seed": seed }), result, table, kv.render());
    if !all {
        out.status = 1;
    }
    Ok(out)
}
