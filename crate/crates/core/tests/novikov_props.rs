use pktheory::{DoubleExpPoly, Exponent, NovikovPoly};
use proptest::prelude::*;

fn exp() -> impl Strategy<Value = Exponent> {
    (-24i64..=24, prop::sample::select(vec![1i64, 2, 3, 4, 6])).prop_map(|(n, d)| Exponent::new(n, d))
}

fn poly(max: usize) -> impl Strategy<Value = NovikovPoly> {
    prop::collection::vec((-3i64..=3, exp()), 0..=max).prop_map(NovikovPoly::from_terms)
}

fn pos_exp() -> impl Strategy<Value = Exponent> {
    (1i64..=12, prop::sample::select(vec![1i64, 2, 3, 4])).prop_map(|(n, d)| Exponent::new(n, d))
}

/// Long division by `1 − t^r`, peeling the lowest term each round.
fn divide_by_one_minus_tr(p: &NovikovPoly, r: &Exponent) -> Option<NovikovPoly> {
    let one_minus = NovikovPoly::one() - NovikovPoly::t(r.clone());
    let top = p.max_exponent()?.clone();
    let mut rem = p.clone();
    let mut q = NovikovPoly::zero();
    while let Some(low) = rem.min_exponent().cloned() {
        if low > top {
            return None;
        }
        let m = NovikovPoly::monomial(rem.coeff(&low), low);
        rem = &rem - &(&m * &one_minus);
        q = &q + &m;
    }
    Some(q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(p in poly(5), q in poly(5), r in poly(5)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &NovikovPoly::one(), p.clone());
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn eval_at_one_is_a_homomorphism(p in poly(5), q in poly(5)) {
        prop_assert_eq!((&p * &q).eval_at_one(), p.eval_at_one() * q.eval_at_one());
        prop_assert_eq!((&p + &q).eval_at_one(), p.eval_at_one() + q.eval_at_one());
    }

    #[test]
    fn project_zero_splits(p in poly(5)) {
        let z = p.project_zero();
        prop_assert_eq!(z.eval_at_one(), 0);
        prop_assert_eq!(&p - &z, NovikovPoly::monomial(p.eval_at_one(), Exponent::zero()));
    }

    #[test]
    fn length_product_rule(p in poly(4), q in poly(4)) {
        let lhs = (&p * &q).length();
        let rhs = p.length() * pktheory::Rational::from_integer(q.eval_at_one().into())
            + q.length() * pktheory::Rational::from_integer(p.eval_at_one().into());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_of_powers(p in poly(3), n in 1u32..=5) {
        let p1 = pktheory::Rational::from_integer(p.eval_at_one().into());
        let expect = p.length()
            * pktheory::Rational::from_integer(n.into())
            * num_traits::pow(p1, n as usize - 1);
        prop_assert_eq!(p.pow(n).length(), expect);
    }

    #[test]
    fn invert_variable_is_an_automorphism(p in poly(5), q in poly(5)) {
        prop_assert_eq!((&p * &q).invert_variable(), &p.invert_variable() * &q.invert_variable());
        prop_assert_eq!((&p + &q).invert_variable(), &p.invert_variable() + &q.invert_variable());
        prop_assert_eq!(p.invert_variable().invert_variable(), p);
    }

    #[test]
    fn sigma_round_trip(p in poly(6)) {
        let z = p.project_zero();
        let d = DoubleExpPoly::sigma_inverse(&z).unwrap();
        prop_assert_eq!(d.sigma(), z);
        prop_assert!(DoubleExpPoly::sigma_inverse(&p).is_err() == (p.eval_at_one() != 0));
    }

    #[test]
    fn sigma_is_multiplicative_and_injective(p in poly(4), q in poly(4)) {
        let x = DoubleExpPoly::sigma_inverse(&p.project_zero()).unwrap();
        let y = DoubleExpPoly::sigma_inverse(&q.project_zero()).unwrap();
        prop_assert_eq!((&x * &y).sigma(), &x.sigma() * &y.sigma());
        prop_assert_eq!((&x + &y).sigma(), &x.sigma() + &y.sigma());
        prop_assert_eq!(x == y, x.sigma() == y.sigma());
    }

    #[test]
    fn normal_form_is_canonical(raw in prop::collection::vec((exp(), pos_exp(), -2i64..=2), 0..6)) {
        let raw: Vec<_> = raw.into_iter().map(|(a, len, n)| { let b = &a + &len; (a, b, n) }).collect();
        let d = DoubleExpPoly::normalize(raw.clone()).unwrap();
        let mut rev = raw;
        rev.reverse();
        prop_assert_eq!(&DoubleExpPoly::normalize(rev).unwrap(), &d);
        // normal form intervals are disjoint and adjacent equal coefficients merged
        let t = d.terms();
        for w in t.windows(2) {
            prop_assert!(w[0].1 <= w[1].0);
            prop_assert!(!(w[0].1 == w[1].0 && w[0].2 == w[1].2));
        }
        prop_assert_eq!(DoubleExpPoly::sigma_inverse(&d.sigma()).unwrap(), d);
    }

    #[test]
    fn qr_tilde_followed_by_sigma(p in poly(5), r in pos_exp()) {
        let d = DoubleExpPoly::qr_tilde(&p, &r).unwrap();
        prop_assert_eq!(d.sigma(), &p * &(NovikovPoly::one() - NovikovPoly::t(r)));
    }

    #[test]
    fn in_image_qr_matches_division(
        terms in prop::collection::vec((-3i64..=3, -36i64..=36, prop::sample::select(vec![1i64, 2, 3, 4, 6, 12])), 0..=6),
        r in pos_exp(),
    ) {
        let p = NovikovPoly::from_terms(terms.into_iter().map(|(c, n, d)| (c, Exponent::new(n, d))));
        let expect = match divide_by_one_minus_tr(&p, &r) {
            Some(q) => { assert_eq!(&q * &(NovikovPoly::one() - NovikovPoly::t(r.clone())), p); true }
            None => p.is_zero(),
        };
        prop_assert_eq!(p.in_image_qr(&r).unwrap(), expect);
    }

    #[test]
    fn in_image_on_images(p in poly(5), r in pos_exp()) {
        let img = &p * &(NovikovPoly::one() - NovikovPoly::t(r.clone()));
        prop_assert!(img.in_image_qr(&r).unwrap());
    }

    #[test]
    fn json_round_trip(p in poly(6)) {
        let v = serde_json::to_value(&p).unwrap();
        prop_assert_eq!(serde_json::from_value::<NovikovPoly>(v).unwrap(), p);
    }

    #[test]
    fn gap_and_nplus_on_positive_support(p in poly(5)) {
        // push every exponent above 0: gap becomes the least consecutive spacing
        let q = p.shift(&Exponent::int(100));
        let exps: Vec<&Exponent> = q.terms().map(|(e, _)| e).collect();
        if exps.len() >= 2 {
            let spacing = exps.windows(2).map(|w| (w[1] - w[0]).into_rational()).min().unwrap();
            prop_assert_eq!(q.gap(), spacing);
        } else {
            prop_assert_eq!(q.gap(), pktheory::Rational::from_integer(0.into()));
        }
        prop_assert_eq!(q.nplus() as i64, q.terms().map(|(_, c)| c.abs()).sum::<i64>());
        prop_assert_eq!(q.shift(&Exponent::int(-300)).nplus(), 0);
    }
}

#[test]
fn gap_examples() {
    let p = NovikovPoly::from_terms([(1, Exponent::int(0)), (-1, Exponent::new(1, 2)), (2, Exponent::int(3))]);
    assert_eq!(p.gap(), pktheory::Rational::new(1.into(), 2.into()));
    assert_eq!(NovikovPoly::t(Exponent::int(4)).gap(), pktheory::Rational::from_integer(0.into()));
    assert_eq!(NovikovPoly::zero().gap(), pktheory::Rational::from_integer(0.into()));
    let k = NovikovPoly::t(Exponent::int(1)) - NovikovPoly::t(Exponent::int(-1));
    assert_eq!(k.gap(), pktheory::Rational::from_integer(1.into()));
    assert_eq!(k.nplus(), 1);
    let q = NovikovPoly::from_terms([(1, Exponent::int(1)), (1, Exponent::int(3))]);
    assert_eq!(q.gap(), pktheory::Rational::from_integer(2.into()));
    let n = NovikovPoly::from_terms([(2, Exponent::int(1)), (-3, Exponent::int(2))]);
    assert_eq!(n.nplus(), 5);
}
