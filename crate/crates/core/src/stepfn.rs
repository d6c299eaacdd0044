//! Bounded integer step functions on the line with the convolution-derivative
//! product.
//!
//! A [`StepFn`] is stored by its jumps. The value at `x` is the sum of all
//! jumps at positions `≤ x`, so `1_{[a,∞)}` jumps by `+1` at `a`. Under this
//! encoding the map `t^a ↦ 1_{[a,∞)}` from Novikov polynomials is the identity
//! on data.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{rat, Distance, Endpoint, Exponent, Rational};
use crate::novikov::NovikovPoly;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct StepFn {
    jumps: Vec<(Exponent, i64)>,
}

impl StepFn {
    pub fn zero() -> Self {
        StepFn::default()
    }

    /// The unit `1_{[0,∞)}`.
    pub fn one() -> Self {
        StepFn::from_jumps([(Exponent::zero(), 1)])
    }

    /// Canonicalizes an arbitrary jump list: positions are merged and zero
    /// jumps dropped.
    pub fn from_jumps<I: IntoIterator<Item = (Exponent, i64)>>(jumps: I) -> Self {
        let mut map: BTreeMap<Exponent, i64> = BTreeMap::new();
        for (p, j) in jumps {
            *map.entry(p).or_insert(0) += j;
        }
        StepFn {
            jumps: map.into_iter().filter(|(_, j)| *j != 0).collect(),
        }
    }

    /// `1_{[a,b)}`, or `1_{[a,∞)}` when `b` is infinite.
    pub fn indicator(a: Exponent, b: Endpoint) -> Result<Self> {
        match b {
            Endpoint::Infinite => Ok(StepFn::from_jumps([(a, 1)])),
            Endpoint::Finite(b) => {
                if a >= b {
                    return Err(Error::InvalidInterval {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
                Ok(StepFn::from_jumps([(a, 1), (b, -1)]))
            }
        }
    }

    pub fn jumps(&self) -> &[(Exponent, i64)] {
        &self.jumps
    }

    pub fn is_zero(&self) -> bool {
        self.jumps.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        StepFn::from_jumps(self.jumps.iter().map(|(p, j)| (p.clone(), j * k)))
    }

    pub fn theta(p: &NovikovPoly) -> Self {
        StepFn {
            jumps: p.terms().map(|(e, c)| (e.clone(), c)).collect(),
        }
    }

    pub fn theta_inverse(&self) -> NovikovPoly {
        NovikovPoly::from_terms(self.jumps.iter().map(|(p, j)| (*j, p.clone())))
    }

    pub fn eval(&self, x: &Exponent) -> i64 {
        self.jumps
            .iter()
            .take_while(|(p, _)| p <= x)
            .map(|(_, j)| j)
            .sum()
    }

    /// The eventual value, i.e. the sum of all jumps.
    pub fn value_at_infinity(&self) -> i64 {
        self.jumps.iter().map(|(_, j)| j).sum()
    }

    /// Maximal constant pieces `(x_i, x_{i+1}, value)` starting at the first
    /// jump. The last piece is unbounded. The function is 0 before `x_0`.
    pub fn pieces(&self) -> Vec<(Exponent, Endpoint, i64)> {
        let mut out = Vec::with_capacity(self.jumps.len());
        let mut value = 0;
        for (i, (p, j)) in self.jumps.iter().enumerate() {
            value += j;
            let end = match self.jumps.get(i + 1) {
                Some((q, _)) => Endpoint::Finite(q.clone()),
                None => Endpoint::Infinite,
            };
            out.push((p.clone(), end, value));
        }
        out
    }

    /// Product `σ1 ∘ σ2 = D(σ1 ∗ σ2)`, transported from the Novikov ring.
    pub fn convolve(&self, other: &StepFn) -> StepFn {
        StepFn::theta(&(&self.theta_inverse() * &other.theta_inverse()))
    }

    /// The same product, computed by splitting both factors into indicator
    /// pieces and applying the closed forms for products of indicators.
    pub fn convolve_piecewise(&self, other: &StepFn) -> StepFn {
        let mut acc: Vec<(Exponent, i64)> = Vec::new();
        for (a, b, u) in self.pieces() {
            if u == 0 {
                continue;
            }
            for (c, d, v) in other.pieces() {
                if v == 0 {
                    continue;
                }
                let w = u * v;
                for (lo, hi, sign) in indicator_product(&a, &b, &c, &d) {
                    acc.push((lo, w * sign));
                    if let Endpoint::Finite(h) = hi {
                        acc.push((h, -w * sign));
                    }
                }
            }
        }
        StepFn::from_jumps(acc)
    }

    /// `∫ (σ − σ(∞)·1_{[0,∞)}) dμ`.
    pub fn length(&self) -> Rational {
        let g = self - &StepFn::one().scale(self.value_at_infinity());
        integrate(&[&g], |v| v[0]).expect("integrand has compact support")
    }

    /// `∫ h · (σ − σ(∞)·1_{[0,∞)}) dμ`.
    pub fn weighted_length(&self, h: &StepFn) -> Result<Rational> {
        let g = self - &StepFn::one().scale(self.value_at_infinity());
        integrate(&[&g, h], |v| v[0] * v[1])
            .ok_or_else(|| Error::Internal("integrand without compact support".into()))
    }

    /// `∫ |σ1 − σ2| dμ`, infinite when the eventual values differ.
    pub fn l1_distance(&self, other: &StepFn) -> Distance {
        match integrate(&[self, other], |v| (v[0] - v[1]).abs()) {
            Some(r) => Distance::Finite(r),
            None => Distance::Infinite,
        }
    }

    /// `(all values ≥ 0, all jumps ≥ 0)`.
    pub fn is_nonneg_nondecreasing(&self) -> (bool, bool) {
        let nonneg = self.pieces().iter().all(|(_, _, v)| *v >= 0);
        let nondecreasing = self.jumps.iter().all(|(_, j)| *j >= 0);
        (nonneg, nondecreasing)
    }
}

/// `1_{[a,b)} ∘ 1_{[c,d)}` as signed intervals.
fn indicator_product(
    a: &Exponent,
    b: &Endpoint,
    c: &Exponent,
    d: &Endpoint,
) -> Vec<(Exponent, Endpoint, i64)> {
    match (b, d) {
        (Endpoint::Infinite, Endpoint::Infinite) => vec![(a + c, Endpoint::Infinite, 1)],
        (Endpoint::Infinite, Endpoint::Finite(d)) => {
            vec![(a + c, Endpoint::Finite(a + d), 1)]
        }
        (Endpoint::Finite(b), Endpoint::Infinite) => {
            vec![(c + a, Endpoint::Finite(c + b), 1)]
        }
        (Endpoint::Finite(b), Endpoint::Finite(d)) => {
            let lo = a + c;
            let mid_lo = (b + c).min(a + d);
            let mid_hi = (b + c).max(a + d);
            let hi = b + d;
            vec![
                (lo, Endpoint::Finite(mid_lo), 1),
                (mid_hi, Endpoint::Finite(hi), -1),
            ]
        }
    }
}

/// Integrates `f(values)` over the common refinement of the given step
/// functions. Returns `None` when the integrand does not vanish on the final
/// unbounded piece. Below every jump all values are 0, and `f` must vanish
/// there.
fn integrate<F: Fn(&[i64]) -> i64>(fns: &[&StepFn], f: F) -> Option<Rational> {
    let mut breaks: Vec<&Exponent> = fns.iter().flat_map(|s| s.jumps.iter().map(|(p, _)| p)).collect();
    breaks.sort();
    breaks.dedup();
    let mut acc = Rational::zero();
    let mut idx = vec![0usize; fns.len()];
    let mut vals = vec![0i64; fns.len()];
    for (i, x) in breaks.iter().enumerate() {
        for (k, s) in fns.iter().enumerate() {
            while idx[k] < s.jumps.len() && &s.jumps[idx[k]].0 <= *x {
                vals[k] += s.jumps[idx[k]].1;
                idx[k] += 1;
            }
        }
        let y = f(&vals);
        match breaks.get(i + 1) {
            Some(next) => acc += (*next - *x).into_rational() * rat(y),
            None if y != 0 => return None,
            None => {}
        }
    }
    Some(acc)
}

impl Add for &StepFn {
    type Output = StepFn;
    fn add(self, rhs: &StepFn) -> StepFn {
        StepFn::from_jumps(self.jumps.iter().chain(rhs.jumps.iter()).cloned())
    }
}

impl Neg for &StepFn {
    type Output = StepFn;
    fn neg(self) -> StepFn {
        self.scale(-1)
    }
}

impl Sub for &StepFn {
    type Output = StepFn;
    fn sub(self, rhs: &StepFn) -> StepFn {
        self + &(-rhs)
    }
}

/// Piecewise table, one line per constant piece: `v on [x_i, x_{i+1})`.
impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pieces = self.pieces();
        let Some((first, _, _)) = pieces.first() else {
            return write!(f, "0 on (-inf, inf)");
        };
        write!(f, "0 on (-inf, {first})")?;
        for (a, b, v) in &pieces {
            write!(f, "\n{v} on [{a}, {b})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("StepFn[")?;
        for (i, (p, j)) in self.jumps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{j:+}")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct JumpRepr {
    pos: Exponent,
    jump: i64,
}

impl Serialize for StepFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<JumpRepr> = self
            .jumps
            .iter()
            .map(|(p, j)| JumpRepr {
                pos: p.clone(),
                jump: *j,
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFn {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<JumpRepr>::deserialize(d)?;
        Ok(StepFn::from_jumps(v.into_iter().map(|r| (r.pos, r.jump))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64) -> Exponent {
        Exponent::int(n)
    }

    fn ind(a: i64, b: Option<i64>) -> StepFn {
        StepFn::indicator(e(a), b.map_or(Endpoint::Infinite, |b| Endpoint::Finite(e(b)))).unwrap()
    }

    #[test]
    fn theta_of_difference_is_interval() {
        let p = NovikovPoly::t(e(1)) - NovikovPoly::t(e(3));
        assert_eq!(StepFn::theta(&p), ind(1, Some(3)));
        assert_eq!(StepFn::theta(&NovikovPoly::one()), StepFn::one());
        assert_eq!(StepFn::theta(&p).theta_inverse(), p);
    }

    #[test]
    fn eval_is_left_closed() {
        let s = ind(0, Some(2));
        assert_eq!(s.eval(&e(0)), 1);
        assert_eq!(s.eval(&e(2)), 0);
        assert_eq!(s.eval(&e(-1)), 0);
        let two = &ind(0, Some(5)) + &ind(0, None);
        assert_eq!(two.eval(&Exponent::new(1, 2)), 2);
    }

    #[test]
    fn convolution_closed_forms() {
        // [1,4) ∘ [0,2): [1, min(4,3)) − [max(4,3), 6)
        let expected = &ind(1, Some(3)) - &ind(4, Some(6));
        let (x, y) = (ind(1, Some(4)), ind(0, Some(2)));
        assert_eq!(x.convolve(&y), expected);
        assert_eq!(x.convolve_piecewise(&y), expected);
        assert_eq!(ind(2, None).convolve_piecewise(&ind(3, None)), ind(5, None));
        assert_eq!(ind(2, None).convolve_piecewise(&ind(3, Some(4))), ind(5, Some(6)));
        assert_eq!(x.convolve_piecewise(&StepFn::one()), x);
    }

    #[test]
    fn lengths() {
        assert_eq!(ind(1, Some(4)).length(), rat(3));
        assert_eq!(StepFn::one().length(), rat(0));
        let s = ind(0, Some(2));
        assert_eq!(s.weighted_length(&ind(1, Some(3))).unwrap(), rat(1));
        assert_eq!(StepFn::one().weighted_length(&ind(1, Some(3))).unwrap(), rat(0));
    }

    #[test]
    fn l1() {
        assert_eq!(ind(0, Some(1)).l1_distance(&ind(0, Some(2))), Distance::Finite(rat(1)));
        assert_eq!(ind(0, None).l1_distance(&StepFn::zero()), Distance::Infinite);
        let s = ind(0, Some(3)).scale(2);
        assert_eq!(s.l1_distance(&StepFn::zero()), Distance::Finite(rat(6)));
    }

    #[test]
    fn monotonicity_flags() {
        assert_eq!(ind(2, None).is_nonneg_nondecreasing(), (true, true));
        assert_eq!(ind(0, Some(2)).is_nonneg_nondecreasing(), (true, false));
        assert_eq!(ind(0, None).scale(-1).is_nonneg_nondecreasing(), (false, false));
    }

    #[test]
    fn table_and_json() {
        let s = ind(0, Some(2));
        assert_eq!(s.to_string(), "0 on (-inf, 0)\n1 on [0, 2)\n0 on [2, inf)");
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"[{"pos":"0","jump":1},{"pos":"2","jump":-1}]"#);
        let back: StepFn = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
