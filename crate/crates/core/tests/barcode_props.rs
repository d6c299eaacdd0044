mod common;

use common::*;
use pktheory::barcode::{barcode_of, bottleneck, decompose, morse, rank_oracle, GradedBarcode};
use pktheory::fcomplex::random::{
    conjugate, random_basis_change, random_cone_input, random_planted, rng_from_seed,
};
use pktheory::{Distance, Endpoint, Exponent, Rational, StepFn};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 5])
}

fn barcode(max: usize) -> impl Strategy<Value = GradedBarcode> {
    (any::<u64>(), 0.0f64..0.4).prop_map(move |(s, inf)| rand_barcode(&mut rng_from_seed(s), max, inf))
}

fn finite(d: &Distance) -> Rational {
    d.finite().cloned().expect("finite distance")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn planted_recovery_and_basis_invariance(s in any::<u64>(), p in field()) {
        let mut rng = rng_from_seed(s);
        let pl = random_planted(&mut rng, &params(p, 8));
        let expect = planted_barcode(&pl);
        prop_assert_eq!(&barcode_of(&pl.complex).unwrap(), &expect);
        prop_assert_eq!(&barcode_of(&pl.normal).unwrap(), &expect);
        let again = conjugate(&pl.complex, &random_basis_change(&mut rng, &pl.complex));
        prop_assert!(again.validate().is_empty());
        prop_assert_eq!(barcode_of(&again).unwrap(), expect);
    }

    #[test]
    fn bar_counts_match_rank_oracle(s in any::<u64>(), p in field()) {
        let c = random_planted(&mut rng_from_seed(s), &params(p, 7)).complex;
        let b = barcode_of(&c).unwrap();
        let lv = c.filtration_levels();
        for k in c.degrees() {
            for (i, x) in lv.iter().enumerate() {
                for y in &lv[i..] {
                    prop_assert_eq!(b.count_alive(k, x, y), rank_oracle(&c, x, y, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn tensor_commutes_with_barcode(s in any::<u64>(), p in field()) {
        let a = random_planted(&mut rng_from_seed(s), &params(p, 6)).complex;
        let b = random_planted(&mut rng_from_seed(!s), &params(p, 6)).complex;
        let (ba, bb) = (barcode_of(&a).unwrap(), barcode_of(&b).unwrap());
        let bt = ba.tensor(&bb);
        prop_assert_eq!(&barcode_of(&a.tensor(&b).unwrap()).unwrap(), &bt);
        prop_assert_eq!(bt.lambda(), &ba.lambda() * &bb.lambda());
    }

    #[test]
    fn lambda_level_identities(b in barcode(8), c in barcode(8)) {
        prop_assert_eq!(b.chi_bar(), b.chi_bar_direct());
        prop_assert_eq!(b.length(), b.lambda().length());
        prop_assert_eq!(b.union(&c).lambda(), &b.lambda() + &c.lambda());
        prop_assert_eq!(b.translate(1).lambda(), -b.lambda());
        prop_assert_eq!(b.lambda().eval_at_one(), b.euler());
        let n = b.counts();
        prop_assert_eq!(n.total, n.finite + n.infinite);
        prop_assert_eq!(n.per_degree.values().sum::<u64>(), n.total);
    }

    #[test]
    fn bar_length_tensor_identity(b in barcode(6), c in barcode(6)) {
        let chi = |x: &GradedBarcode| Rational::from_integer(x.euler().into());
        let lhs = b.tensor(&c).bar_length();
        let rhs = b.bar_length() * chi(&c) + chi(&b) * c.bar_length() - chi(&b) * chi(&c);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lengths(b in barcode(8)) {
        let fin = b.finite_part();
        let by_bars: Rational = fin.bars().map(|x| x.length().unwrap().into_rational() * Rational::from_integer(x.mult.into())).sum();
        prop_assert_eq!(fin.abs_length().unwrap(), by_bars);
        prop_assert_eq!(b.gen_length(&StepFn::zero()).unwrap(), Rational::from_integer(0.into()));
    }

    #[test]
    fn bottleneck_metric_axioms(x in barcode(5), y in barcode(5), z in barcode(5)) {
        prop_assert_eq!(bottleneck(&x, &x), Distance::Finite(Rational::from_integer(0.into())));
        let dxy = bottleneck(&x, &y);
        prop_assert_eq!(&dxy, &bottleneck(&y, &x));
        if let (Distance::Finite(a), Distance::Finite(b), Distance::Finite(c)) =
            (bottleneck(&x, &z), &dxy, bottleneck(&y, &z))
        {
            prop_assert!(a <= b + &c);
        }
        // adding the same bars to both sides never increases the distance
        let d_sum = bottleneck(&x.union(&z), &y.union(&z));
        match (&dxy, &d_sum) {
            (Distance::Finite(a), Distance::Finite(b)) => prop_assert!(b <= a),
            (Distance::Infinite, _) => {}
            (Distance::Finite(_), Distance::Infinite) => prop_assert!(false, "sum became infinite"),
        }
    }

    #[test]
    fn bottleneck_infinite_on_mismatch(x in barcode(5), s in any::<u64>()) {
        let mut y = x.clone();
        let k = (s % 3) as i64;
        y.push(k, Exponent::int(0), Endpoint::Infinite, 1).unwrap();
        prop_assert_eq!(bottleneck(&x, &y), Distance::Infinite);
    }

    #[test]
    fn l1_lipschitz_in_bottleneck(x in barcode(6), y in barcode(6)) {
        // no infinite-bar mismatch, so the distance is finite
        let x = x.finite_part();
        let y = y.finite_part();
        let n = x.counts().total.max(y.counts().total);
        let d = finite(&bottleneck(&x, &y));
        let c = Rational::from_integer((6 * n).into()) * &d;
        for (f, g) in [(x.abs_sigma(), y.abs_sigma()), (x.chi_bar(), y.chi_bar())] {
            prop_assert!(finite(&f.l1_distance(&g)) <= c);
        }
    }

    #[test]
    fn morse_identity_and_positivity(s in any::<u64>(), p in field()) {
        let c = random_planted(&mut rng_from_seed(s), &params(p, 8)).complex;
        let m = morse(&c).unwrap();
        prop_assert!(m.identity_holds());
        for q in m.q.values() {
            prop_assert_eq!(q.is_nonneg_nondecreasing(), (true, true));
        }
        for p in m.p.values() {
            prop_assert_eq!(p.is_nonneg_nondecreasing(), (true, true));
        }
    }

    #[test]
    fn cone_bar_count(s in any::<u64>(), p in field()) {
        let (dom, cod, f) = random_cone_input(&mut rng_from_seed(s), &params(p, 6)).unwrap();
        let n = |c| barcode_of(c).unwrap().counts().total;
        prop_assert!(n(&f.cone().unwrap()) <= n(&dom.complex) + n(&cod.complex));
    }

    #[test]
    fn json_round_trip(b in barcode(8)) {
        let v = serde_json::to_value(&b).unwrap();
        prop_assert_eq!(serde_json::from_value::<GradedBarcode>(v).unwrap(), b);
    }
}

#[test]
fn ghost_pairs_are_counted() {
    let f = f(2);
    let c = pktheory::FilteredComplex::e2(f, Exponent::int(1), Exponent::int(1), 0)
        .unwrap()
        .sum(&pktheory::FilteredComplex::e2(f, Exponent::int(0), Exponent::int(2), 1).unwrap())
        .unwrap();
    let d = decompose(&c).unwrap();
    assert_eq!(d.ghosts, 1);
    assert_eq!(d.barcode.counts().total, 1);
}

#[test]
fn sigma_examples() {
    let c = Exponent::int(5);
    let pair = GradedBarcode::from_bars([
        (0, Exponent::int(0), Endpoint::Finite(c.clone()), 1),
        (1, Exponent::int(0), Endpoint::Finite(c.clone()), 1),
    ])
    .unwrap();
    let ten = Distance::Finite(Rational::from_integer(10.into()));
    assert_eq!(pair.abs_sigma().l1_distance(&StepFn::zero()), ten);
    assert_eq!(pair.chi_bar().l1_distance(&StepFn::zero()), Distance::Finite(Rational::from_integer(0.into())));
    let d0 = GradedBarcode::from_bars([(0, Exponent::int(0), Endpoint::Finite(c.clone()), 1)]).unwrap();
    let d1 = d0.translate(1);
    assert_eq!(d0.abs_sigma().l1_distance(&d1.abs_sigma()), Distance::Finite(Rational::from_integer(0.into())));
    assert_eq!(d0.chi_bar().l1_distance(&d1.chi_bar()), ten);
}

#[test]
fn abs_length_rejects_infinite_bars() {
    let b = GradedBarcode::from_bars([(0, Exponent::int(0), Endpoint::Infinite, 1)]).unwrap();
    assert!(b.abs_length().is_err());
    assert!(GradedBarcode::from_bars([(0, Exponent::int(1), Endpoint::Finite(Exponent::int(1)), 1)]).is_err());
}
