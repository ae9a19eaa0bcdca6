use std::cmp::Ordering;

use negbeta::algebraic::{b_of, classify_perron_pisot, PerronPisot};
use negbeta::analysis::{allowed_patterns, analyze, pat_of_orbit, pat_of_word, prop1_check};
use negbeta::dynamics::{expand, validate_expansion, AlgebraicBase, NegativeBase};
use negbeta::inverse::construct_unchecked;
use negbeta::{
    BetaValue, EventuallyPeriodicWord, FloatBase, Permutation, Precision, QuadraticBase, QuadraticNumber, RationalBase,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn permutation(max_len: usize) -> impl Strategy<Value = Permutation> {
    (2..=max_len)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|image| Permutation::from_image(image).unwrap())
}

fn word(max_digit: u32, max_pre: usize, max_per: usize) -> impl Strategy<Value = EventuallyPeriodicWord> {
    (prop::collection::vec(0..=max_digit, 0..=max_pre), prop::collection::vec(0..=max_digit, 1..=max_per))
        .prop_map(|(pre, per)| EventuallyPeriodicWord::canonicalize(&pre, &per))
}

fn rational(lo: i64, hi: i64, den_max: i64) -> impl Strategy<Value = BigRational> {
    (1..=den_max).prop_flat_map(move |den| {
        (lo * den + 1..=hi * den).prop_map(move |num| BigRational::new(num.into(), den.into()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn criterion_agrees_with_direct_patterns(w in word(3, 4, 4), pi in permutation(6)) {
        let direct = pat_of_word(&w, pi.len()).ok();
        prop_assert_eq!(prop1_check(&w, &pi), direct.as_ref() == Some(&pi));
    }

    #[test]
    fn threshold_word_is_sup_fixed(pi in permutation(9)) {
        let a = pi.a_sequence().unwrap();
        prop_assert!(a.is_sup_fixed(), "{} gives {}", pi, a);
    }

    #[test]
    fn variants_dominate_z(pi in permutation(9)) {
        let z = pi.z_digits().unwrap();
        if pi.is_collapsed().unwrap() {
            for v in pi.z_variants().unwrap() {
                prop_assert!(v.digits.iter().zip(&z.digits).all(|(a, b)| a >= b && a - b <= 1));
            }
        } else {
            prop_assert!(pi.z_variants().is_err());
        }
    }

    #[test]
    fn alphabet_size_from_digits(pi in permutation(8)) {
        let r = analyze(&pi).unwrap();
        prop_assert_eq!(r.n_minus, r.n_minus_from_digits(), "{}", pi);
    }

    #[test]
    fn max_digit_counts_circular_ascents(pi in permutation(9)) {
        let first = pi.at(1);
        let rest: Vec<usize> = pi.circular().image().iter().copied().filter(|&v| v != first).collect();
        let ascents = rest.windows(2).filter(|p| p[0] < p[1]).count();
        prop_assert_eq!(pi.z_digits().unwrap().max() as usize, ascents, "{}", pi);
    }

    #[test]
    fn orbit_patterns_are_realized_above_threshold(pi in permutation(6)) {
        let r = analyze(&pi).unwrap();
        let margin = BigRational::new(1.into(), 10.into());
        let (_, hi) = r.b_minus.refine_bits(16);
        let beta = hi + margin;
        prop_assert!(allowed_patterns(&beta, pi.len()).unwrap().contains(&pi));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn allowed_set_is_the_threshold_sublevel(beta in rational(1, 4, 12), n in 3usize..=5) {
        let allowed = allowed_patterns(&beta, n).unwrap();
        let below: Vec<Permutation> = Permutation::all(n)
            .filter(|pi| analyze(pi).unwrap().b_minus.cmp_rational(&beta) == Ordering::Less)
            .collect();
        prop_assert_eq!(allowed, below);
    }

    #[test]
    fn inverse_round_trips(w in word(4, 3, 3)) {
        prop_assume!(validate_expansion(&w, Precision::default()).unwrap());
        let r = construct_unchecked(&w).unwrap();
        let back = analyze(&r.pi).unwrap();
        prop_assert_eq!(&back.a, &w);
        prop_assert_eq!(back.b_minus.cmp_exact(&r.b_minus), Ordering::Equal);
        let c = classify_perron_pisot(&r.b_minus);
        prop_assert!(c.kind != PerronPisot::Neither || !c.certified, "{} is not Perron", w);
    }

    #[test]
    fn rational_orbit_pattern_is_realized(beta in rational(1, 4, 9), x in rational(0, 1, 50), n in 2usize..=6) {
        if let Ok(pi) = pat_of_orbit(&BetaValue::Rational(beta.clone()), &x, n, Precision::default()) {
            let b = analyze(&pi).unwrap().b_minus;
            prop_assert_eq!(b.cmp_rational(&beta), Ordering::Less);
        }
    }
}

#[test]
fn backends_agree_on_a_quadratic_base() {
    let golden = b_of(&"1(0)".parse().unwrap()).unwrap();
    let quadratic = match BetaValue::from_algebraic(&golden) {
        BetaValue::Quadratic(q) => q,
        other => panic!("expected a quadratic backend, got {other:?}"),
    };
    let qb = QuadraticBase::new(quadratic.clone()).unwrap();
    let ab = AlgebraicBase::new(golden.clone(), Precision::default()).unwrap();
    let fb = FloatBase::new(quadratic_to_f64(&quadratic)).unwrap();
    for k in 1..40u32 {
        let x = BigRational::new(k.into(), 41.into());
        let exact = expand(&qb, qb.point_from_rational(&x), 30).unwrap().0;
        assert_eq!(exact, expand(&ab, ab.point_from_rational(&x), 30).unwrap().0, "x = {x}");
        let approx = expand(&fb, fb.point_from_rational(&x), 12).unwrap().0;
        assert_eq!(approx, exact[..12], "x = {x}");
    }
}

fn quadratic_to_f64(q: &QuadraticNumber) -> f64 {
    negbeta::BaseScalar::to_f64(q)
}

#[test]
fn rational_and_generic_backends_agree() {
    let beta = BigRational::new(7.into(), 3.into());
    let base = RationalBase::new(beta.clone()).unwrap();
    let x = BigRational::new(5.into(), 11.into());
    let generic = expand(&base, base.point_from_rational(&x), 50).unwrap().0;
    let fast = BetaValue::Rational(beta).expand_rational(&x, 50, Precision::default()).unwrap();
    assert_eq!(generic, fast);
}

#[test]
fn every_pattern_in_s4_has_a_realizing_orbit_above_its_threshold() {
    for pi in Permutation::all(4) {
        let b = analyze(&pi).unwrap().b_minus;
        let (_, hi) = b.refine_bits(16);
        let beta = hi + BigRational::new(1.into(), 50.into());
        assert!(allowed_patterns(&beta, 4).unwrap().contains(&pi), "{pi}");
    }
}
