//! Graded barcodes: normal forms of filtered complexes and their invariants.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::{Endpoint, Exponent, Rational};
use crate::fcomplex::FilteredComplex;
use crate::field::Matrix;
use crate::novikov::NovikovPoly;
use crate::stepfn::StepFn;

mod bottleneck;
mod morse;

pub use bottleneck::bottleneck;
pub use morse::{morse, MorseData};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bar {
    pub degree: i64,
    pub birth: Exponent,
    pub death: Endpoint,
    pub mult: u64,
}

impl Bar {
    pub fn is_finite(&self) -> bool {
        !self.death.is_infinite()
    }

    /// `death − birth`, or `None` for an infinite bar.
    pub fn length(&self) -> Option<Exponent> {
        self.death.finite().map(|d| d - &self.birth)
    }

    pub fn indicator(&self) -> StepFn {
        StepFn::indicator(self.birth.clone(), self.death.clone()).expect("bars are nonempty")
    }
}

/// A finite multiset of bars `[birth, death)` with degrees.
///
/// Invariant: `birth < death` and multiplicities are positive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedBarcode {
    bars: BTreeMap<(i64, Exponent, Endpoint), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub total: u64,
    pub finite: u64,
    pub infinite: u64,
    pub per_degree: BTreeMap<i64, u64>,
}

impl GradedBarcode {
    pub fn new() -> Self {
        GradedBarcode::default()
    }

    /// Adds `mult` copies of `[birth, death)` in `degree`.
    pub fn push(&mut self, degree: i64, birth: Exponent, death: Endpoint, mult: u64) -> Result<()> {
        if let Endpoint::Finite(d) = &death {
            if &birth >= d {
                return Err(Error::InvalidInterval {
                    a: birth.to_string(),
                    b: d.to_string(),
                });
            }
        }
        if mult > 0 {
            *self.bars.entry((degree, birth, death)).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn from_bars<I>(bars: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Exponent, Endpoint, u64)>,
    {
        let mut b = GradedBarcode::new();
        for (k, s, e, m) in bars {
            b.push(k, s, e, m)?;
        }
        Ok(b)
    }

    /// Bars sorted by `(degree, birth, death)`.
    pub fn bars(&self) -> impl Iterator<Item = Bar> + '_ {
        self.bars.iter().map(|((k, b, d), m)| Bar {
            degree: *k,
            birth: b.clone(),
            death: d.clone(),
            mult: *m,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn union(&self, other: &GradedBarcode) -> GradedBarcode {
        let mut out = self.clone();
        for (key, m) in &other.bars {
            *out.bars.entry(key.clone()).or_insert(0) += m;
        }
        out
    }

    /// All degrees moved up by `k`.
    pub fn translate(&self, k: i64) -> GradedBarcode {
        GradedBarcode {
            bars: self
                .bars
                .iter()
                .map(|((d, b, e), m)| ((d + k, b.clone(), e.clone()), *m))
                .collect(),
        }
    }

    pub fn finite_part(&self) -> GradedBarcode {
        GradedBarcode {
            bars: self
                .bars
                .iter()
                .filter(|((_, _, e), _)| !e.is_infinite())
                .map(|(k, m)| (k.clone(), *m))
                .collect(),
        }
    }

    pub fn degree_part(&self, k: i64) -> GradedBarcode {
        GradedBarcode {
            bars: self
                .bars
                .iter()
                .filter(|((d, _, _), _)| *d == k)
                .map(|(key, m)| (key.clone(), *m))
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.bars.keys().map(|(k, _, _)| *k).collect();
        d.dedup();
        d
    }

    /// `λ = Σ (-1)^k m (t^b − t^d)`, with no `t^d` term for infinite bars.
    pub fn lambda(&self) -> NovikovPoly {
        let mut p = NovikovPoly::zero();
        for bar in self.bars() {
            let c = sign(bar.degree) * bar.mult as i64;
            p.add_term(bar.birth.clone(), c);
            if let Endpoint::Finite(d) = bar.death {
                p.add_term(d, -c);
            }
        }
        p
    }

    /// `χ̄ = θ(λ)`.
    pub fn chi_bar(&self) -> StepFn {
        StepFn::theta(&self.lambda())
    }

    /// `χ̄` as the signed sum of bar indicators.
    pub fn chi_bar_direct(&self) -> StepFn {
        self.bars().fold(StepFn::zero(), |acc, bar| {
            &acc + &bar.indicator().scale(sign(bar.degree) * bar.mult as i64)
        })
    }

    /// `σ_{B_k}`: the number of degree-`k` bars alive at each level.
    pub fn sigma_degree(&self, k: i64) -> StepFn {
        self.degree_part(k).abs_sigma()
    }

    /// `|σ|`: the unsigned sum of all bar indicators.
    pub fn abs_sigma(&self) -> StepFn {
        self.bars().fold(StepFn::zero(), |acc, bar| {
            &acc + &bar.indicator().scale(bar.mult as i64)
        })
    }

    /// Euler characteristic `Σ (-1)^k` over infinite bars.
    pub fn euler(&self) -> i64 {
        self.bars()
            .filter(|b| !b.is_finite())
            .map(|b| sign(b.degree) * b.mult as i64)
            .sum()
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts {
            total: 0,
            finite: 0,
            infinite: 0,
            per_degree: BTreeMap::new(),
        };
        for bar in self.bars() {
            c.total += bar.mult;
            if bar.is_finite() {
                c.finite += bar.mult;
            } else {
                c.infinite += bar.mult;
            }
            *c.per_degree.entry(bar.degree).or_insert(0) += bar.mult;
        }
        c
    }

    /// Product barcode: degrees add, and a pair of finite bars produces a
    /// second bar one degree up.
    pub fn tensor(&self, other: &GradedBarcode) -> GradedBarcode {
        let mut out = GradedBarcode::new();
        for x in self.bars() {
            for y in other.bars() {
                let m = x.mult * y.mult;
                let k = x.degree + y.degree;
                let lo = &x.birth + &y.birth;
                let mut put = |deg: i64, b: Exponent, d: Endpoint| {
                    if d.finite().is_none_or(|d| &b < d) {
                        out.push(deg, b, d, m).expect("checked nonempty");
                    }
                };
                match (&x.death, &y.death) {
                    (Endpoint::Infinite, Endpoint::Infinite) => put(k, lo, Endpoint::Infinite),
                    (Endpoint::Infinite, Endpoint::Finite(d)) => {
                        put(k, lo, Endpoint::Finite(&x.birth + d))
                    }
                    (Endpoint::Finite(b), Endpoint::Infinite) => {
                        put(k, lo, Endpoint::Finite(b + &y.birth))
                    }
                    (Endpoint::Finite(b), Endpoint::Finite(d)) => {
                        let (ad, bc) = (&x.birth + d, b + &y.birth);
                        put(k, lo, Endpoint::Finite(ad.clone().min(bc.clone())));
                        put(k + 1, ad.max(bc), Endpoint::Finite(b + d));
                    }
                }
            }
        }
        out
    }

    /// `ℓ(B) = ∫ (χ̄ − χ̄(∞)·1_{[0,∞)}) dμ`.
    pub fn length(&self) -> Rational {
        self.chi_bar().length()
    }

    /// `|ℓ|(B) = ∫ |σ| dμ`, defined only without infinite bars.
    pub fn abs_length(&self) -> Result<Rational> {
        if self.bars().any(|b| !b.is_finite()) {
            return Err(Error::InfiniteBars);
        }
        Ok(self.abs_sigma().length())
    }

    /// `ℓ̄(B) = ℓ(B_finite) + χ(B)`.
    pub fn bar_length(&self) -> Rational {
        self.finite_part().length() + Rational::from_integer(self.euler().into())
    }

    /// `ℓ_h(B) = ∫ h·(χ̄ − χ̄(∞)·1_{[0,∞)}) dμ`.
    pub fn gen_length(&self, h: &StepFn) -> Result<Rational> {
        self.chi_bar().weighted_length(h)
    }

    /// Number of degree-`k` bars with `birth ≤ s` and `death > t`.
    pub fn count_alive(&self, k: i64, s: &Exponent, t: &Exponent) -> u64 {
        self.bars()
            .filter(|b| b.degree == k && &b.birth <= s && b.death > Endpoint::Finite(t.clone()))
            .map(|b| b.mult)
            .sum()
    }
}

fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Outcome of the filtered column reduction.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub barcode: GradedBarcode,
    /// Pairs with equal birth and death, suppressed from the barcode.
    pub ghosts: u64,
}

/// Normal form of a valid complex by column reduction in the order
/// `(filtration, degree, id)`.
pub fn decompose(c: &FilteredComplex) -> Result<Decomposition> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidComplex(violations));
    }
    let f = c.field();
    let gens = c.generators();
    let n = c.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        (&gens[i].filtration, gens[i].degree, &gens[i].id).cmp(&(
            &gens[j].filtration,
            gens[j].degree,
            &gens[j].id,
        ))
    });
    let mut pos = vec![0usize; n];
    for (p, &g) in order.iter().enumerate() {
        pos[g] = p;
    }
    let mut reduced: Vec<BTreeMap<usize, u64>> = Vec::with_capacity(n);
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut paired = vec![false; n];
    let mut barcode = GradedBarcode::new();
    let mut ghosts = 0;
    for (p, &g) in order.iter().enumerate() {
        let mut col: BTreeMap<usize, u64> = c.boundary_of(g).iter().map(|(&i, &v)| (pos[i], v)).collect();
        while let Some((&low, &v)) = col.iter().next_back() {
            let Some(q) = owner[low] else { break };
            let other: &BTreeMap<usize, u64> = &reduced[q];
            let factor = f.mul(v, f.inv(other[&low]));
            for (&i, &w) in other {
                let slot = col.entry(i).or_insert(0);
                *slot = f.sub(*slot, f.mul(factor, w));
                if *slot == 0 {
                    col.remove(&i);
                }
            }
        }
        if let Some(&low) = col.keys().next_back() {
            owner[low] = Some(p);
            paired[low] = true;
            paired[p] = true;
            let (x, y) = (&gens[order[low]], &gens[g]);
            if x.filtration == y.filtration {
                ghosts += 1;
            } else {
                barcode.push(x.degree, x.filtration.clone(), Endpoint::Finite(y.filtration.clone()), 1)?;
            }
        }
        reduced.push(col);
    }
    for (p, &g) in order.iter().enumerate() {
        if !paired[p] {
            barcode.push(gens[g].degree, gens[g].filtration.clone(), Endpoint::Infinite, 1)?;
        }
    }
    Ok(Decomposition { barcode, ghosts })
}

/// Homology barcode of a valid complex.
pub fn barcode_of(c: &FilteredComplex) -> Result<GradedBarcode> {
    Ok(decompose(c)?.barcode)
}

/// `rank(H_k(C^{≤s}) → H_k(C^{≤t}))` by direct linear algebra:
/// `rank[Z_k(s) | B_k(t)] − rank B_k(t)`.
pub fn rank_oracle(c: &FilteredComplex, s: &Exponent, t: &Exponent, k: i64) -> Result<u64> {
    if s > t {
        return Err(Error::BadParameter {
            expected: "s <= t",
            got: format!("s = {s}, t = {t}"),
        });
    }
    let f = c.field();
    let gens = c.generators();
    let d = c.boundary_matrix();
    let pick = |deg: i64, lvl: &Exponent| -> Vec<usize> {
        (0..c.len())
            .filter(|&i| gens[i].degree == deg && &gens[i].filtration <= lvl)
            .collect()
    };
    let below: Vec<usize> = (0..c.len()).filter(|&i| gens[i].degree == k - 1).collect();
    let ks = pick(k, s);
    let kt = pick(k, t);
    let lt = pick(k + 1, t);
    if ks.is_empty() {
        return Ok(0);
    }
    // cycles of C_k^{≤s}, written in the coordinates of C_k^{≤t}
    let z_local = d.select(&below, &ks).kernel(&f);
    let mut z = Matrix::zeros(kt.len(), z_local.cols);
    for (r, g) in ks.iter().enumerate() {
        let row = kt.iter().position(|x| x == g).expect("ks is contained in kt");
        for col in 0..z_local.cols {
            z.set(row, col, z_local.get(r, col));
        }
    }
    let b = d.select(&kt, &lt);
    let rb = b.rank(&f);
    Ok((z.hcat(&b).rank(&f) - rb) as u64)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarRepr {
    degree: i64,
    birth: Exponent,
    death: Endpoint,
    #[serde(default = "one")]
    mult: u64,
}

fn one() -> u64 {
    1
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BarcodeRepr {
    bars: Vec<BarRepr>,
}

impl Serialize for GradedBarcode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BarcodeRepr {
            bars: self
                .bars()
                .map(|b| BarRepr {
                    degree: b.degree,
                    birth: b.birth,
                    death: b.death,
                    mult: b.mult,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GradedBarcode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = BarcodeRepr::deserialize(d)?;
        GradedBarcode::from_bars(repr.bars.into_iter().map(|b| (b.degree, b.birth, b.death, b.mult)))
            .map_err(serde::de::Error::custom)
    }
}

/// Table with one row per bar: `degree  [birth, death)  xmult`.
impl fmt::Display for GradedBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("(empty barcode)");
        }
        writeln!(f, "degree  bar  mult")?;
        let rows: Vec<String> = self
            .bars()
            .map(|b| format!("{}  [{}, {})  {}", b.degree, b.birth, b.death, b.mult))
            .collect();
        f.write_str(&rows.join("\n"))
    }
}

impl fmt::Debug for GradedBarcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .bars()
            .map(|b| format!("{}:[{},{})x{}", b.degree, b.birth, b.death, b.mult))
            .collect();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::rat;
    use crate::field::FieldSpec;

    fn e(n: i64) -> Exponent {
        Exponent::int(n)
    }

    fn fin(n: i64) -> Endpoint {
        Endpoint::Finite(e(n))
    }

    fn bc(bars: &[(i64, i64, Option<i64>)]) -> GradedBarcode {
        GradedBarcode::from_bars(
            bars.iter()
                .map(|&(k, b, d)| (k, e(b), d.map_or(Endpoint::Infinite, fin), 1)),
        )
        .unwrap()
    }

    #[test]
    fn elementary_decompositions() {
        let f = FieldSpec::default();
        let b = barcode_of(&FilteredComplex::e1(f, e(3), 2)).unwrap();
        assert_eq!(b, bc(&[(2, 3, None)]));
        let b = barcode_of(&FilteredComplex::e2(f, e(1), e(4), -1).unwrap()).unwrap();
        assert_eq!(b, bc(&[(-1, 1, Some(4))]));
        let d = decompose(&FilteredComplex::e2(f, e(1), e(1), 0).unwrap()).unwrap();
        assert!(d.barcode.is_empty());
        assert_eq!(d.ghosts, 1);
    }

    #[test]
    fn rank_oracle_on_e2() {
        let c = FilteredComplex::e2(FieldSpec::default(), e(0), e(2), 0).unwrap();
        assert_eq!(rank_oracle(&c, &e(0), &e(1), 0).unwrap(), 1);
        assert_eq!(rank_oracle(&c, &e(0), &e(2), 0).unwrap(), 0);
        let empty = FilteredComplex::empty(FieldSpec::default());
        assert_eq!(rank_oracle(&empty, &e(0), &e(1), 0).unwrap(), 0);
    }

    #[test]
    fn lambda_signs() {
        assert_eq!(bc(&[(0, 2, None)]).lambda(), NovikovPoly::t(e(2)));
        let p = bc(&[(1, 0, Some(1))]).lambda();
        assert_eq!(p, NovikovPoly::t(e(1)) - NovikovPoly::t(e(0)));
        let b = bc(&[(0, 0, Some(1)), (0, 0, None)]);
        assert_eq!(b.lambda(), NovikovPoly::monomial(2, e(0)) - NovikovPoly::t(e(1)));
        assert_eq!(b.chi_bar(), b.chi_bar_direct());
        assert_eq!(b.chi_bar().value_at_infinity(), b.euler());
    }

    #[test]
    fn cancelling_degrees() {
        let b = bc(&[(0, 0, Some(3)), (1, 0, Some(3))]);
        assert!(b.chi_bar().is_zero());
        assert_eq!(b.abs_sigma(), StepFn::indicator(e(0), fin(3)).unwrap().scale(2));
        assert_eq!(b.length(), rat(0));
        assert_eq!(b.abs_length().unwrap(), rat(6));
        assert_eq!(bc(&[(0, 0, None)]).abs_length(), Err(Error::InfiniteBars));
    }

    #[test]
    fn counts_and_bar_length() {
        let b = bc(&[(0, 0, Some(3)), (1, 2, None)]);
        let c = b.counts();
        assert_eq!((c.total, c.finite, c.infinite), (2, 1, 1));
        assert_eq!(bc(&[(0, 1, Some(4))]).bar_length(), rat(3));
        assert_eq!(bc(&[(0, 1, None)]).bar_length(), rat(1));
    }

    #[test]
    fn tensor_rules() {
        let x = bc(&[(0, 0, Some(1))]);
        let y = bc(&[(1, 0, Some(3))]);
        assert_eq!(x.tensor(&y), bc(&[(1, 0, Some(1)), (2, 3, Some(4))]));
        assert_eq!(bc(&[(0, 1, None)]).tensor(&y), bc(&[(1, 1, Some(4))]));
        assert_eq!(x.tensor(&y).lambda(), &x.lambda() * &y.lambda());
    }

    #[test]
    fn json_shape() {
        let b = bc(&[(0, 0, None), (1, -1, Some(2))]);
        let j = serde_json::to_string(&b).unwrap();
        assert_eq!(
            j,
            r#"{"bars":[{"degree":0,"birth":"0","death":"inf","mult":1},{"degree":1,"birth":"-1","death":"2","mult":1}]}"#
        );
        assert_eq!(serde_json::from_str::<GradedBarcode>(&j).unwrap(), b);
        assert!(serde_json::from_str::<GradedBarcode>(
            r#"{"bars":[{"degree":0,"birth":"2","death":"1"}]}"#
        )
        .is_err());
    }
}
