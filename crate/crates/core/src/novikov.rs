//! Novikov polynomials with rational exponents and the double-exponent ring.
//!
//! [`NovikovPoly`] is a finite integer combination of powers `t^a`, `a ∈ Q`.
//! Polynomials with `p(1) = 0` form the ideal used for acyclic classes; that
//! ideal is identified with [`DoubleExpPoly`] through [`DoubleExpPoly::sigma`].

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{rat, Exponent, Rational};

/// Finite sum `Σ n_k t^{a_k}` with exact rational exponents.
///
/// Invariant: no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NovikovPoly {
    terms: BTreeMap<Exponent, i64>,
}

impl NovikovPoly {
    pub fn zero() -> Self {
        NovikovPoly::default()
    }

    /// The unit `t^0`.
    pub fn one() -> Self {
        Self::monomial(1, Exponent::zero())
    }

    pub fn monomial(coeff: i64, exp: Exponent) -> Self {
        let mut p = NovikovPoly::zero();
        p.add_term(exp, coeff);
        p
    }

    /// `t^a`.
    pub fn t(exp: Exponent) -> Self {
        Self::monomial(1, exp)
    }

    /// Builds from `(coefficient, exponent)` pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Exponent)>>(terms: I) -> Self {
        let mut p = NovikovPoly::zero();
        for (c, e) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, exp: Exponent, coeff: i64) {
        if coeff == 0 {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    /// Terms `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, i64)> + '_ {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coeff(&self, exp: &Exponent) -> i64 {
        self.terms.get(exp).copied().unwrap_or(0)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<&Exponent> {
        self.terms.keys().next()
    }

    pub fn max_exponent(&self) -> Option<&Exponent> {
        self.terms.keys().next_back()
    }

    /// `Some(n)` when the polynomial is `n·t^0` (including `0`).
    pub fn as_constant(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&Exponent::zero()).copied(),
            _ => None,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return NovikovPoly::zero();
        }
        NovikovPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Multiplication by `t^r`.
    pub fn shift(&self, r: &Exponent) -> Self {
        NovikovPoly {
            terms: self.terms.iter().map(|(e, c)| (e + r, *c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(NovikovPoly::one(), |acc, _| &acc * self)
    }

    /// `P(1)`, the sum of the coefficients.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// `ℓ(P) = −P′(1) = −Σ n_k a_k`.
    pub fn length(&self) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            acc -= e.value() * rat(*c);
        }
        acc
    }

    /// `P(t) − P(1)·t^0`, the splitting onto the ideal `P(1) = 0`.
    pub fn project_zero(&self) -> Self {
        let mut out = self.clone();
        out.add_term(Exponent::zero(), -self.eval_at_one());
        out
    }

    /// The substitution `t ↦ t^{-1}`.
    pub fn invert_variable(&self) -> Self {
        NovikovPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, *c)).collect(),
        }
    }

    /// Minimum over consecutive exponents `α_i < α_{i+1}` with `α_{i+1} ≥ 0` of
    /// `α_{i+1} − max{α_i, 0}`; zero when no such pair exists.
    pub fn gap(&self) -> Rational {
        let zero = Exponent::zero();
        let exps: Vec<&Exponent> = self.terms.keys().collect();
        exps.windows(2)
            .filter(|w| *w[1] >= zero)
            .map(|w| (w[1] - &w[0].clone().max(zero.clone())).into_rational())
            .min()
            .unwrap_or_else(Rational::zero)
    }

    /// `N⁺[P] = Σ_{α_i > 0} |k_i|`.
    pub fn nplus(&self) -> u64 {
        self.terms
            .iter()
            .filter(|(e, _)| e.is_positive())
            .map(|(_, c)| c.unsigned_abs())
            .sum()
    }

    /// Whether `p` lies in the image of multiplication by `t^0 − t^r`: the
    /// coefficients in every residue class of exponents modulo `r` sum to zero.
    pub fn in_image_qr(&self, r: &Exponent) -> Result<bool> {
        require_positive(r)?;
        let mut classes: BTreeMap<Exponent, i64> = BTreeMap::new();
        for (e, c) in &self.terms {
            *classes.entry(e.rem_euclid(r)).or_insert(0) += c;
        }
        Ok(classes.values().all(|s| *s == 0))
    }
}

pub(crate) fn require_positive(r: &Exponent) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::BadParameter {
            expected: "r > 0",
            got: r.to_string(),
        })
    }
}

impl Add for &NovikovPoly {
    type Output = NovikovPoly;
    fn add(self, rhs: &NovikovPoly) -> NovikovPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }
}

impl Add for NovikovPoly {
    type Output = NovikovPoly;
    fn add(self, rhs: NovikovPoly) -> NovikovPoly {
        &self + &rhs
    }
}

impl Neg for &NovikovPoly {
    type Output = NovikovPoly;
    fn neg(self) -> NovikovPoly {
        self.scale(-1)
    }
}

impl Neg for NovikovPoly {
    type Output = NovikovPoly;
    fn neg(self) -> NovikovPoly {
        self.scale(-1)
    }
}

impl Sub for &NovikovPoly {
    type Output = NovikovPoly;
    fn sub(self, rhs: &NovikovPoly) -> NovikovPoly {
        self + &(-rhs)
    }
}

impl Sub for NovikovPoly {
    type Output = NovikovPoly;
    fn sub(self, rhs: NovikovPoly) -> NovikovPoly {
        &self - &rhs
    }
}

impl Mul for &NovikovPoly {
    type Output = NovikovPoly;
    fn mul(self, rhs: &NovikovPoly) -> NovikovPoly {
        let mut out = NovikovPoly::zero();
        for (a, m) in &self.terms {
            for (b, n) in &rhs.terms {
                out.add_term(a + b, m * n);
            }
        }
        out
    }
}

impl Mul for NovikovPoly {
    type Output = NovikovPoly;
    fn mul(self, rhs: NovikovPoly) -> NovikovPoly {
        &self * &rhs
    }
}

/// Text form: `c*t^(a)` terms in increasing exponent order, e.g.
/// `-t^(-1/2) + t^(1/2)`.
impl fmt::Display for NovikovPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.unsigned_abs();
            let sign = if *c < 0 { "-" } else { "+" };
            if i == 0 {
                if *c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "t^({e})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NovikovPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NovikovPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    coeff: i64,
    exp: Exponent,
}

impl Serialize for NovikovPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                coeff: *c,
                exp: e.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NovikovPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermJson>::deserialize(d)?;
        Ok(NovikovPoly::from_terms(v.into_iter().map(|t| (t.coeff, t.exp))))
    }
}

/// Element of the double-exponent ring: `Σ n_k s^{a_k,b_k}` modulo
/// `s^{a,b} + s^{b,c} = s^{a,c}`.
///
/// Stored in the unique maximally merged normal form: intervals sorted,
/// pairwise disjoint as open intervals, and touching intervals always carry
/// different coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DoubleExpPoly {
    terms: Vec<(Exponent, Exponent, i64)>,
}

impl DoubleExpPoly {
    pub fn zero() -> Self {
        DoubleExpPoly::default()
    }

    /// `s^{a,b}`.
    pub fn s(a: Exponent, b: Exponent) -> Result<Self> {
        Self::normalize(vec![(a, b, 1)])
    }

    /// Reduces an arbitrary combination to normal form. Rejects `a ≥ b`.
    pub fn normalize(raw: Vec<(Exponent, Exponent, i64)>) -> Result<Self> {
        let mut jumps: BTreeMap<Exponent, i64> = BTreeMap::new();
        for (a, b, n) in raw {
            if a >= b {
                return Err(Error::InvalidInterval {
                    a: a.to_string(),
                    b: b.to_string(),
                });
            }
            *jumps.entry(a).or_insert(0) += n;
            *jumps.entry(b).or_insert(0) -= n;
        }
        Ok(Self::from_jumps(jumps))
    }

    /// Reads off the maximal intervals where the partial sums of `jumps` are
    /// nonzero. The jumps must sum to zero.
    fn from_jumps(jumps: BTreeMap<Exponent, i64>) -> Self {
        let pts: Vec<(Exponent, i64)> = jumps.into_iter().filter(|(_, j)| *j != 0).collect();
        let mut terms = Vec::new();
        let mut value = 0i64;
        for w in pts.windows(2) {
            value += w[0].1;
            if value != 0 {
                terms.push((w[0].0.clone(), w[1].0.clone(), value));
            }
        }
        debug_assert_eq!(value + pts.last().map_or(0, |p| p.1), 0);
        DoubleExpPoly { terms }
    }

    /// Normal-form terms `(a, b, n)` with `a < b`, sorted by `a`.
    pub fn terms(&self) -> &[(Exponent, Exponent, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return DoubleExpPoly::zero();
        }
        DoubleExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(a, b, n)| (a.clone(), b.clone(), n * k))
                .collect(),
        }
    }

    /// `σ(s^{a,b}) = t^a − t^b`.
    pub fn sigma(&self) -> NovikovPoly {
        let mut p = NovikovPoly::zero();
        for (a, b, n) in &self.terms {
            p.add_term(a.clone(), *n);
            p.add_term(b.clone(), -*n);
        }
        p
    }

    /// Inverse of [`sigma`](Self::sigma) on polynomials with `p(1) = 0`.
    ///
    /// With terms sorted as `n_1 t^{a_1} + … + n_m t^{a_m}`, peels off
    /// `(n_1 + … + n_k) s^{a_k, a_{k+1}}` for each consecutive pair.
    pub fn sigma_inverse(p: &NovikovPoly) -> Result<Self> {
        let total = p.eval_at_one();
        if total != 0 {
            return Err(Error::NotInIdeal(total));
        }
        let terms: Vec<(&Exponent, i64)> = p.terms().collect();
        let mut raw = Vec::new();
        let mut partial = 0i64;
        for w in terms.windows(2) {
            partial += w[0].1;
            if partial != 0 {
                raw.push((w[0].0.clone(), w[1].0.clone(), partial));
            }
        }
        Self::normalize(raw)
    }

    /// `Q̃_r`: the linear extension of `t^a ↦ s^{a, a+r}`.
    pub fn qr_tilde(p: &NovikovPoly, r: &Exponent) -> Result<Self> {
        require_positive(r)?;
        Self::normalize(
            p.terms()
                .map(|(a, n)| (a.clone(), a + r, n))
                .collect(),
        )
    }
}

impl Add for &DoubleExpPoly {
    type Output = DoubleExpPoly;
    fn add(self, rhs: &DoubleExpPoly) -> DoubleExpPoly {
        let raw = self.terms.iter().chain(rhs.terms.iter()).cloned().collect();
        DoubleExpPoly::normalize(raw).expect("normal-form intervals are proper")
    }
}

impl Neg for &DoubleExpPoly {
    type Output = DoubleExpPoly;
    fn neg(self) -> DoubleExpPoly {
        self.scale(-1)
    }
}

impl Sub for &DoubleExpPoly {
    type Output = DoubleExpPoly;
    fn sub(self, rhs: &DoubleExpPoly) -> DoubleExpPoly {
        self + &(-rhs)
    }
}

/// `s^{a,b}·s^{c,d} = s^{a+c,a+d} − s^{b+c,b+d}`, extended bilinearly.
impl Mul for &DoubleExpPoly {
    type Output = DoubleExpPoly;
    fn mul(self, rhs: &DoubleExpPoly) -> DoubleExpPoly {
        let mut raw = Vec::new();
        for (a, b, m) in &self.terms {
            for (c, d, n) in &rhs.terms {
                raw.push((a + c, a + d, m * n));
                raw.push((b + c, b + d, -(m * n)));
            }
        }
        DoubleExpPoly::normalize(raw).expect("products of proper intervals are proper")
    }
}

impl fmt::Display for DoubleExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (a, b, n)) in self.terms.iter().enumerate() {
            let mag = n.unsigned_abs();
            if i == 0 {
                if *n < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {} ", if *n < 0 { "-" } else { "+" })?;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            write!(f, "s^({a},{b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DoubleExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleExpPoly({self})")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DexpTermJson {
    a: Exponent,
    b: Exponent,
    n: i64,
}

impl Serialize for DoubleExpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<DexpTermJson> = self
            .terms
            .iter()
            .map(|(a, b, n)| DexpTermJson {
                a: a.clone(),
                b: b.clone(),
                n: *n,
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DoubleExpPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<DexpTermJson>::deserialize(d)?;
        DoubleExpPoly::normalize(v.into_iter().map(|t| (t.a, t.b, t.n)).collect())
            .map_err(serde::de::Error::custom)
    }
}
