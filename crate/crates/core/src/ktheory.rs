//! K-classes of filtered complexes and the pairing `κ`.
//!
//! The class of a complex is the Novikov polynomial `λ` of its homology
//! barcode. The pairing is available three ways: the closed formula
//! `κ(P, Q)(t) = P(t⁻¹)Q(t)`, the graded `λ` of an internal hom complex, and
//! a bilinear extension of a table of hom barcodes between named generators.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::barcode::{barcode_of, GradedBarcode};
use crate::error::{Error, Result};
use crate::exponent::{parse_rational, Exponent, Rational};
use crate::fcomplex::{require_nonneg, FilteredChainMap, FilteredComplex};
use crate::field::FieldSpec;
use crate::novikov::NovikovPoly;

pub fn kclass(c: &FilteredComplex) -> Result<NovikovPoly> {
    Ok(barcode_of(c)?.lambda())
}

/// `χ_α(C) = χ(C^{≤α})`, from generator counts.
pub fn euler_alpha(c: &FilteredComplex, alpha: &Exponent) -> i64 {
    c.generators()
        .iter()
        .filter(|g| &g.filtration <= alpha)
        .map(|g| if g.degree.rem_euclid(2) == 0 { 1 } else { -1 })
        .sum()
}

/// No infinite bars and every finite bar of length at most `r`.
pub fn is_r_acyclic(c: &FilteredComplex, r: &Exponent) -> Result<bool> {
    require_nonneg(r)?;
    Ok(barcode_of(c)?
        .bars()
        .all(|b| b.length().is_some_and(|l| &l <= r)))
}

/// Whether the cone of a filtration-preserving map is `r`-acyclic.
pub fn is_r_isomorphism(f: &FilteredChainMap, r: &Exponent) -> Result<bool> {
    is_r_acyclic(&f.cone()?, r)
}

pub fn kappa_formula(p: &NovikovPoly, q: &NovikovPoly) -> NovikovPoly {
    &p.invert_variable() * q
}

/// Graded `λ` of the homology barcode of the internal hom complex.
pub fn kappa_direct(c1: &FilteredComplex, c2: &FilteredComplex) -> Result<NovikovPoly> {
    Ok(barcode_of(&c1.hom(c2)?)?.lambda())
}

/// `σ∘Q̃_r` on classes: multiplication by `t^0 − t^r`.
pub fn kq_r(p: &NovikovPoly, r: &Exponent) -> Result<NovikovPoly> {
    require_nonneg(r)?;
    Ok(p * &(NovikovPoly::one() - NovikovPoly::t(r.clone())))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableGenerator {
    pub name: String,
    pub kclass: NovikovPoly,
    pub euler: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomEntry {
    from: String,
    to: String,
    barcode: GradedBarcode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableRepr {
    dimension: i64,
    generators: Vec<TableGenerator>,
    #[serde(default)]
    hom: Vec<HomEntry>,
}

/// Named generators in ambient dimension `n` with hom barcodes between them.
///
/// Loading checks that diagonal hom classes are the constant `(-1)^n χ` and
/// that `λ(i, j)(t) = (-1)^n λ(j, i)(t⁻¹)` whenever both directions are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingTable {
    dimension: i64,
    generators: Vec<TableGenerator>,
    hom: BTreeMap<(String, String), GradedBarcode>,
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

impl PairingTable {
    pub fn new(
        dimension: i64,
        generators: Vec<TableGenerator>,
        hom: Vec<(String, String, GradedBarcode)>,
    ) -> Result<Self> {
        let mut names = HashSet::new();
        for g in &generators {
            if !names.insert(g.name.clone()) {
                return Err(Error::DuplicateId(g.name.clone()));
            }
        }
        let mut map = BTreeMap::new();
        for (from, to, b) in hom {
            for n in [&from, &to] {
                if !names.contains(n) {
                    return Err(Error::UnknownGenerator(n.clone()));
                }
            }
            if map.insert((from.clone(), to.clone()), b).is_some() {
                return Err(Error::InconsistentTable(format!("hom({from}, {to}) given twice")));
            }
        }
        let t = PairingTable {
            dimension,
            generators,
            hom: map,
        };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let s = parity(self.dimension);
        for ((from, to), b) in &self.hom {
            let lam = b.lambda();
            if from == to {
                let chi = self.generator(from)?.euler;
                let want = NovikovPoly::monomial(s * chi, Exponent::zero());
                if lam != want {
                    return Err(Error::InconsistentTable(format!(
                        "hom({from}, {from}) has class {lam}, expected {want}"
                    )));
                }
            } else if let Some(back) = self.hom.get(&(to.clone(), from.clone())) {
                let dual = back.lambda().invert_variable().scale(s);
                if lam != dual {
                    return Err(Error::InconsistentTable(format!(
                        "hom({from}, {to}) has class {lam} but duality with hom({to}, {from}) requires {dual}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn dimension(&self) -> i64 {
        self.dimension
    }

    pub fn generators(&self) -> &[TableGenerator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<&TableGenerator> {
        self.generators
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// `κ(L_i, L_j)`.
    pub fn pair(&self, i: &str, j: &str) -> Result<NovikovPoly> {
        let gi = self.generator(i)?;
        self.generator(j)?;
        let s = parity(self.dimension);
        if i == j {
            return Ok(NovikovPoly::monomial(s * gi.euler, Exponent::zero()));
        }
        if let Some(b) = self.hom.get(&(i.to_string(), j.to_string())) {
            return Ok(b.lambda());
        }
        if let Some(b) = self.hom.get(&(j.to_string(), i.to_string())) {
            return Ok(b.lambda().invert_variable().scale(s));
        }
        Err(Error::InconsistentTable(format!(
            "no hom barcode between {i} and {j} in either direction"
        )))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: TableRepr =
            serde_json::from_value(v.clone()).map_err(|e| Error::Schema(e.to_string()))?;
        PairingTable::new(
            repr.dimension,
            repr.generators,
            repr.hom.into_iter().map(|h| (h.from, h.to, h.barcode)).collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = TableRepr {
            dimension: self.dimension,
            generators: self.generators.clone(),
            hom: self
                .hom
                .iter()
                .map(|((f, t), b)| HomEntry {
                    from: f.clone(),
                    to: t.clone(),
                    barcode: b.clone(),
                })
                .collect(),
        };
        serde_json::to_value(repr).expect("table serializes")
    }
}

/// One term `c · t^r · T^k L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationTerm {
    pub name: String,
    pub coeff: i64,
    pub shift: Exponent,
    pub translation: i64,
}

/// A `Z`-linear combination of shifted, translated table generators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Combination {
    pub terms: Vec<CombinationTerm>,
}

impl Combination {
    pub fn generator(name: &str) -> Self {
        Combination {
            terms: vec![CombinationTerm {
                name: name.to_string(),
                coeff: 1,
                shift: Exponent::zero(),
                translation: 0,
            }],
        }
    }

    /// Applies `t^r` and `T^k` to every term.
    pub fn shifted(&self, r: &Exponent, k: i64) -> Self {
        Combination {
            terms: self
                .terms
                .iter()
                .map(|t| CombinationTerm {
                    shift: &t.shift + r,
                    translation: t.translation + k,
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// The class `Σ c (-1)^k t^r [L]` from the table's stored K-classes.
    pub fn kclass(&self, tbl: &PairingTable) -> Result<NovikovPoly> {
        let mut acc = NovikovPoly::zero();
        for t in &self.terms {
            let g = tbl.generator(&t.name)?;
            acc = &acc + &g.kclass.shift(&t.shift).scale(t.coeff * parity(t.translation));
        }
        Ok(acc)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let (sign, c) = if t.coeff < 0 { ("-", -t.coeff) } else { ("+", t.coeff) };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if sign == "-" {
                f.write_str("-")?;
            }
            if c != 1 {
                write!(f, "{c}*")?;
            }
            if !t.shift.is_zero() {
                write!(f, "t^({})*", t.shift)?;
            }
            if t.translation != 0 {
                write!(f, "T^{} ", t.translation)?;
            }
            f.write_str(&t.name)?;
        }
        Ok(())
    }
}

/// Grammar, whitespace-insensitive except between `T^k` and a name:
///
/// ```text
/// expr   := [sign] term (sign term)*
/// term   := factor* name
/// factor := int ['*'] | 't^' exp ['*'] | 'T^' int ['*']
/// exp    := '{' rational '}' | '(' rational ')' | rational
/// name   := letter (letter | digit | '_' | '\'')*
/// ```
///
/// Examples: `-Z0+Y`, `t^{1/2}*L`, `T^2 L`, `3*t^(-1)*T^1 L`.
impl std::str::FromStr for Combination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = CombParser {
            chars: s.chars().collect(),
            pos: 0,
            src: s,
        };
        p.expr()
    }
}

struct CombParser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl CombParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("combination `{}`: {what} at column {}", self.src, self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek2(&mut self) -> Option<(char, char)> {
        self.skip_ws();
        Some((*self.chars.get(self.pos)?, *self.chars.get(self.pos + 1)?))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Combination> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        loop {
            let mut t = self.term()?;
            t.coeff *= sign;
            terms.push(t);
            match self.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
        Ok(Combination { terms })
    }

    fn term(&mut self) -> Result<CombinationTerm> {
        let mut coeff = 1i64;
        let mut shift = Exponent::zero();
        let mut translation = 0i64;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.integer()?;
                }
                _ => match self.peek2() {
                    Some(('t', '^')) => {
                        self.pos += 2;
                        shift = &shift + &self.exponent()?;
                    }
                    Some(('T', '^')) => {
                        self.pos += 2;
                        let neg = self.eat('-');
                        let k = self.integer()?;
                        translation += if neg { -k } else { k };
                    }
                    _ => break,
                },
            }
            self.eat('*');
        }
        let name = self.name()?;
        Ok(CombinationTerm {
            name,
            coeff,
            shift,
            translation,
        })
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("expected an integer"))
    }

    fn exponent(&mut self) -> Result<Exponent> {
        let close = match self.peek() {
            Some('{') => Some('}'),
            Some('(') => Some(')'),
            _ => None,
        };
        if close.is_some() {
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            let sign_ok = self.pos == start && (c == '-' || c == '+');
            if c.is_ascii_digit() || c == '/' || c == '.' || sign_ok || (close.is_some() && c == ' ') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let r: Rational = parse_rational(&s).map_err(|_| self.err("expected an exponent"))?;
        if let Some(c) = close {
            if !self.eat(c) {
                return Err(self.err("unclosed exponent"));
            }
        }
        Ok(Exponent::from_rational(r))
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_alphabetic() => self.pos += 1,
            _ => return Err(self.err("expected a generator name")),
        }
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }
}

/// `κ(x, y) = Σ c_i c_j (-1)^{k_i + k_j} t^{r_j − r_i} κ(L_i, L_j)`.
pub fn kappa_table(tbl: &PairingTable, x: &Combination, y: &Combination) -> Result<NovikovPoly> {
    let mut acc = NovikovPoly::zero();
    for a in &x.terms {
        for b in &y.terms {
            let base = tbl.pair(&a.name, &b.name)?;
            let c = a.coeff * b.coeff * parity(a.translation + b.translation);
            acc = &acc + &base.shift(&(&b.shift - &a.shift)).scale(c);
        }
    }
    Ok(acc)
}

/// Result of the embeddedness test: `κ(x, x)` and whether it is a constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddedTest {
    pub kappa: NovikovPoly,
    pub constant: Option<i64>,
    pub passes: bool,
}

/// A class represented by an embedded generator has constant self-pairing.
pub fn embedded_test(tbl: &PairingTable, x: &Combination) -> Result<EmbeddedTest> {
    let kappa = kappa_table(tbl, x, x)?;
    let constant = kappa.as_constant();
    Ok(EmbeddedTest {
        passes: constant.is_some(),
        constant,
        kappa,
    })
}

/// Explicit bounding data for `t^a` with `a < 0`.
///
/// `c0 = E1(a)[deg −1] ⊕ E2(a, a+δ) ⊕ … ⊕ E2(a+(n−1)δ, 0) ⊕ E`, with
/// `E = E1(0)`, has class zero. `phi` projects the cone of `E → c0`
/// onto its `E1(a)` summand; its own cone is a sum of bars of length `δ`
/// and ghost pairs, so `phi` is a `δ`-isomorphism.
#[derive(Clone, Debug)]
pub struct Witness {
    pub c0: FilteredComplex,
    pub source: FilteredComplex,
    pub phi: FilteredChainMap,
    pub weight: Exponent,
}

pub fn seminorm_witness(field: FieldSpec, a: &Exponent, n: u32) -> Result<Witness> {
    if !a.is_negative() {
        return Err(Error::BadParameter {
            expected: "a < 0",
            got: a.to_string(),
        });
    }
    if n == 0 {
        return Err(Error::BadParameter {
            expected: "n >= 1",
            got: n.to_string(),
        });
    }
    let delta = Exponent::from_rational(a.abs().into_rational() / Rational::from_integer(n.into()));
    let head = FilteredComplex::e1(field, a.clone(), -1);
    let mut c0 = head.clone();
    for k in 0..n as i64 {
        let lo = a + &(&delta * k);
        let hi = a + &(&delta * (k + 1));
        c0 = c0.sum(&FilteredComplex::e2(field, lo, hi, 0)?)?;
    }
    let e = FilteredComplex::e1(field, Exponent::zero(), 0);
    c0 = c0.sum(&e)?;
    let incl = FilteredChainMap::new(e, c0.clone(), vec![(0, c0.len() - 1, 1)], Exponent::zero())?;
    let source = incl.cone()?;
    let phi = FilteredChainMap::new(source.clone(), head, vec![(0, 0, 1)], Exponent::zero())?;
    Ok(Witness {
        c0,
        source,
        phi,
        weight: delta,
    })
}

/// Weight of the explicit triangle bounding `t^a`: `|a|` for `a < 0`, else 0.
pub fn strong_seminorm_upper(a: &Exponent) -> Rational {
    if a.is_negative() {
        a.abs().into_rational()
    } else {
        Rational::from_integer(0.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Endpoint;

    fn e(n: i64) -> Exponent {
        Exponent::int(n)
    }

    fn f2() -> FieldSpec {
        FieldSpec::default()
    }

    fn plumbing(a: Exponent) -> PairingTable {
        let hom = GradedBarcode::from_bars([
            (0, e(0), Endpoint::Finite(a), 1),
            (0, e(0), Endpoint::Infinite, 1),
        ])
        .unwrap();
        let gen = |n: &str| TableGenerator {
            name: n.into(),
            kclass: NovikovPoly::zero(),
            euler: 0,
        };
        PairingTable::new(1, vec![gen("Z0"), gen("Y")], vec![("Z0".into(), "Y".into(), hom)]).unwrap()
    }

    #[test]
    fn classes_of_elementary_complexes() {
        assert_eq!(kclass(&FilteredComplex::e1(f2(), e(2), 0)).unwrap(), NovikovPoly::t(e(2)));
        assert_eq!(kclass(&FilteredComplex::e1(f2(), e(2), 1)).unwrap(), -NovikovPoly::t(e(2)));
        let c = FilteredComplex::e2(f2(), e(0), e(1), 0).unwrap();
        assert_eq!(kclass(&c).unwrap(), NovikovPoly::one() - NovikovPoly::t(e(1)));
    }

    #[test]
    fn acyclicity() {
        let c = FilteredComplex::e2(f2(), e(0), e(2), 0).unwrap();
        assert!(is_r_acyclic(&c, &e(2)).unwrap());
        assert!(!is_r_acyclic(&c, &e(1)).unwrap());
        assert!(!is_r_acyclic(&FilteredComplex::e1(f2(), e(0), 0), &e(100)).unwrap());
        assert!(is_r_acyclic(&FilteredComplex::empty(f2()), &e(0)).unwrap());
        let id = FilteredChainMap::identity(&c);
        assert!(is_r_isomorphism(&id, &e(0)).unwrap());
    }

    #[test]
    fn direct_pairing_on_generators() {
        let k = kappa_direct(&FilteredComplex::e1(f2(), e(1), 0), &FilteredComplex::e1(f2(), e(4), 0));
        assert_eq!(k.unwrap(), NovikovPoly::t(e(3)));
        let k = kappa_direct(&FilteredComplex::e1(f2(), e(0), 0), &FilteredComplex::e1(f2(), e(0), 1));
        assert_eq!(k.unwrap(), -NovikovPoly::one());
    }

    #[test]
    fn plumbing_table() {
        let a = Exponent::new(1, 2);
        let tbl = plumbing(a.clone());
        let x: Combination = "-Z0+Y".parse().unwrap();
        let k = kappa_table(&tbl, &x, &x).unwrap();
        assert_eq!(k, NovikovPoly::t(a.clone()) - NovikovPoly::t(-a));
        assert!(!embedded_test(&tbl, &x).unwrap().passes);
        let y = Combination::generator("Y");
        assert!(embedded_test(&tbl, &y).unwrap().passes);
    }

    #[test]
    fn table_rejects_bad_diagonal() {
        let hom = GradedBarcode::from_bars([(0, e(0), Endpoint::Finite(e(1)), 1)]).unwrap();
        let g = TableGenerator {
            name: "L".into(),
            kclass: NovikovPoly::zero(),
            euler: 0,
        };
        let r = PairingTable::new(1, vec![g], vec![("L".into(), "L".into(), hom)]);
        assert!(matches!(r, Err(Error::InconsistentTable(_))));
    }

    #[test]
    fn combination_grammar() {
        let c: Combination = "3*t^(1/2)*T^1 L - t^{-1} M + T^2 N".parse().unwrap();
        assert_eq!(c.terms.len(), 3);
        assert_eq!(c.terms[0].coeff, 3);
        assert_eq!(c.terms[0].shift, Exponent::new(1, 2));
        assert_eq!(c.terms[0].translation, 1);
        assert_eq!(c.terms[1].coeff, -1);
        assert_eq!(c.terms[1].shift, e(-1));
        assert_eq!(c.terms[2].translation, 2);
        let back: Combination = c.to_string().parse().unwrap();
        assert_eq!(back, c);
        assert!("".parse::<Combination>().is_err());
        assert!("2*".parse::<Combination>().is_err());
        assert!("t^(1 L".parse::<Combination>().is_err());
    }

    #[test]
    fn witness_small_case() {
        let w = seminorm_witness(f2(), &e(-1), 1).unwrap();
        assert_eq!(w.weight, e(1));
        assert!(kclass(&w.c0).unwrap().is_zero());
        assert!(is_r_isomorphism(&w.phi, &e(1)).unwrap());
        assert!(!is_r_isomorphism(&w.phi, &Exponent::new(1, 2)).unwrap());
    }

    #[test]
    fn seminorm_upper() {
        assert_eq!(strong_seminorm_upper(&e(-2)), Rational::from_integer(2.into()));
        assert_eq!(strong_seminorm_upper(&e(0)), Rational::from_integer(0.into()));
        assert_eq!(strong_seminorm_upper(&e(3)), Rational::from_integer(0.into()));
    }

    #[test]
    fn qr_on_classes() {
        let p = NovikovPoly::t(e(1));
        assert_eq!(kq_r(&p, &e(2)).unwrap(), NovikovPoly::t(e(1)) - NovikovPoly::t(e(3)));
        assert!(kq_r(&p, &e(0)).unwrap().is_zero());
    }
}
