//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use pktheory::barcode::GradedBarcode;
use pktheory::fcomplex::random::{Piece, Planted, RandomParams};
use pktheory::{Endpoint, Exponent, FieldSpec, NovikovPoly};
use rand::Rng;

pub fn f(p: u64) -> FieldSpec {
    FieldSpec::new(p).unwrap()
}

pub fn params(p: u64, max_generators: usize) -> RandomParams {
    RandomParams::default()
        .with_field(f(p))
        .with_max_generators(max_generators)
}

/// The barcode of a planted normal form, read off its pieces.
pub fn planted_barcode(pl: &Planted) -> GradedBarcode {
    GradedBarcode::from_bars(
        pl.pieces
            .iter()
            .filter_map(Piece::bar)
            .map(|(k, b, d)| (k, b, d, 1)),
    )
    .unwrap()
}

/// K-class of a planted normal form: `(-1)^k t^a` per `E1`, `(-1)^k (t^b - t^c)` per `E2`.
pub fn planted_class(pl: &Planted) -> NovikovPoly {
    let mut acc = NovikovPoly::zero();
    for p in &pl.pieces {
        let term = match p {
            Piece::E1 { a, degree } => NovikovPoly::t(a.clone()).scale(sign(*degree)),
            Piece::E2 { b, c, degree } => {
                (NovikovPoly::t(b.clone()) - NovikovPoly::t(c.clone())).scale(sign(*degree))
            }
        };
        acc = &acc + &term;
    }
    acc
}

pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub fn rand_exp<R: Rng>(rng: &mut R, span: i64) -> Exponent {
    let d = [1, 2, 3, 4, 6][rng.gen_range(0..5)];
    Exponent::new(rng.gen_range(-span * d..=span * d), d)
}

pub fn rand_poly<R: Rng>(rng: &mut R, max_terms: usize) -> NovikovPoly {
    let n = rng.gen_range(0..=max_terms);
    NovikovPoly::from_terms((0..n).map(|_| (rng.gen_range(-3..=3), rand_exp(rng, 4))))
}

pub fn rand_barcode<R: Rng>(rng: &mut R, max_bars: usize, inf_rate: f64) -> GradedBarcode {
    let n = rng.gen_range(0..=max_bars);
    let mut b = GradedBarcode::new();
    for _ in 0..n {
        let k = rng.gen_range(0..=1);
        let birth = rand_exp(rng, 3);
        let death = if rng.gen_bool(inf_rate) {
            Endpoint::Infinite
        } else {
            let len = Exponent::new(rng.gen_range(1..=12), 4);
            Endpoint::Finite(&birth + &len)
        };
        b.push(k, birth, death, 1).unwrap();
    }
    b
}
