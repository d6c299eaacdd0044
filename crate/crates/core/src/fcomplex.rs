//! Finitely generated filtered chain complexes over `F_p` and the standard
//! constructions on them.
//!
//! Conventions:
//! - `∂` lowers degree by one and never raises filtration.
//! - `E1(a)` placed in degree `k` is [`FilteredComplex::e1`]; `E2(b, c)` with
//!   its lower generator in degree `k` is [`FilteredComplex::e2`].
//! - Translation by `k` raises every degree by `k` and multiplies `∂` by
//!   `(-1)^k`, so it multiplies K-classes by `(-1)^k`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{FieldSpec, Matrix};

pub mod random;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub id: String,
    pub degree: i64,
    pub filtration: Exponent,
}

impl Generator {
    pub fn new(id: impl Into<String>, degree: i64, filtration: Exponent) -> Self {
        Generator {
            id: id.into(),
            degree,
            filtration,
        }
    }
}

/// A broken complex invariant, naming the offending generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DegreeMismatch {
        from: String,
        to: String,
        from_degree: i64,
        to_degree: i64,
    },
    FiltrationIncrease {
        from: String,
        to: String,
        from_filtration: Exponent,
        to_filtration: Exponent,
    },
    SquareNonzero {
        from: String,
        to: String,
        coeff: u64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeMismatch {
                from,
                to,
                from_degree,
                to_degree,
            } => write!(
                f,
                "boundary {from} -> {to} goes from degree {from_degree} to {to_degree}"
            ),
            Violation::FiltrationIncrease {
                from,
                to,
                from_filtration,
                to_filtration,
            } => write!(
                f,
                "boundary {from} -> {to} raises filtration from {from_filtration} to {to_filtration}"
            ),
            Violation::SquareNonzero { from, to, coeff } => {
                write!(f, "d^2 has coefficient {coeff} from {from} to {to}")
            }
        }
    }
}

/// `(C_*, ∂, ℓ)` with a finite basis.
///
/// `columns[j]` holds `∂e_j` as a map from target index to a nonzero residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    field: FieldSpec,
    gens: Vec<Generator>,
    columns: Vec<BTreeMap<usize, u64>>,
}

impl FilteredComplex {
    pub fn empty(field: FieldSpec) -> Self {
        FilteredComplex {
            field,
            gens: Vec::new(),
            columns: Vec::new(),
        }
    }

    /// Builds and validates a complex from generators and `(from, to, coeff)`
    /// index entries. Repeated entries are summed. Repeated ids are made unique
    /// by appending primes.
    pub fn from_parts<I>(field: FieldSpec, mut gens: Vec<Generator>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        uniquify_ids(&mut gens);
        let c = Self::assemble(field, gens, entries);
        let v = c.validate();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidComplex(v))
        }
    }

    /// Like [`FilteredComplex::from_parts`] but skips validation, so
    /// diagnostics can be produced for broken input.
    pub fn from_parts_unchecked<I>(field: FieldSpec, gens: Vec<Generator>, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        Self::assemble(field, gens, entries)
    }

    fn assemble<I>(field: FieldSpec, gens: Vec<Generator>, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut columns = vec![BTreeMap::new(); gens.len()];
        for (from, to, c) in entries {
            let slot: &mut u64 = columns[from].entry(to).or_insert(0);
            *slot = field.add(*slot, c % field.characteristic());
        }
        for col in &mut columns {
            col.retain(|_, v| *v != 0);
        }
        FilteredComplex {
            field,
            gens,
            columns,
        }
    }

    /// Rebuilds from a boundary matrix (`d[i][j]` = coefficient of `e_i` in `∂e_j`).
    pub fn from_matrix(field: FieldSpec, gens: Vec<Generator>, d: &Matrix) -> Result<Self> {
        let n = gens.len();
        let mut entries = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let v = d.get(i, j);
                if v != 0 {
                    entries.push((j, i, v));
                }
            }
        }
        FilteredComplex::from_parts(field, gens, entries)
    }

    /// `E1(a)` in degree `k`.
    pub fn e1(field: FieldSpec, a: Exponent, k: i64) -> Self {
        FilteredComplex {
            field,
            gens: vec![Generator::new("x", k, a)],
            columns: vec![BTreeMap::new()],
        }
    }

    /// `E2(b, c)`: `x` in degree `k` at level `b`, `y` in degree `k+1` at level
    /// `c`, `∂y = x`.
    pub fn e2(field: FieldSpec, b: Exponent, c: Exponent, k: i64) -> Result<Self> {
        if b > c {
            return Err(Error::BadParameter {
                expected: "b <= c",
                got: format!("b = {b}, c = {c}"),
            });
        }
        let gens = vec![Generator::new("x", k, b), Generator::new("y", k + 1, c)];
        FilteredComplex::from_parts(field, gens, [(1, 0, 1)])
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// `∂e_j` as target index → coefficient.
    pub fn boundary_of(&self, j: usize) -> &BTreeMap<usize, u64> {
        &self.columns[j]
    }

    /// All nonzero entries `(from, to, coeff)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, &v)| (j, i, v)))
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.id == id)
    }

    pub fn boundary_matrix(&self) -> Matrix {
        let n = self.len();
        let mut m = Matrix::zeros(n, n);
        for (j, i, v) in self.entries() {
            m.set(i, j, v);
        }
        m
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.gens.iter().map(|g| g.degree).collect();
        d.sort();
        d.dedup();
        d
    }

    /// Distinct filtration values in increasing order.
    pub fn filtration_levels(&self) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = self.gens.iter().map(|g| g.filtration.clone()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (j, i, _) in self.entries() {
            let (s, t) = (&self.gens[j], &self.gens[i]);
            if t.degree != s.degree - 1 {
                out.push(Violation::DegreeMismatch {
                    from: s.id.clone(),
                    to: t.id.clone(),
                    from_degree: s.degree,
                    to_degree: t.degree,
                });
            }
            if t.filtration > s.filtration {
                out.push(Violation::FiltrationIncrease {
                    from: s.id.clone(),
                    to: t.id.clone(),
                    from_filtration: s.filtration.clone(),
                    to_filtration: t.filtration.clone(),
                });
            }
        }
        let f = self.field;
        for (j, col) in self.columns.iter().enumerate() {
            let mut sq: BTreeMap<usize, u64> = BTreeMap::new();
            for (&mid, &a) in col {
                for (&k, &b) in &self.columns[mid] {
                    let slot = sq.entry(k).or_insert(0);
                    *slot = f.add(*slot, f.mul(a, b));
                }
            }
            for (k, v) in sq {
                if v != 0 {
                    out.push(Violation::SquareNonzero {
                        from: self.gens[j].id.clone(),
                        to: self.gens[k].id.clone(),
                        coeff: v,
                    });
                }
            }
        }
        out
    }

    fn require_same_field(&self, other: &FilteredComplex) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.characteristic(),
                other.field.characteristic(),
            ));
        }
        Ok(())
    }

    /// Direct sum. Generators of `other` follow those of `self`.
    pub fn sum(&self, other: &FilteredComplex) -> Result<Self> {
        self.require_same_field(other)?;
        let n = self.len();
        let gens = self.gens.iter().chain(other.gens.iter()).cloned().collect();
        let entries = self
            .entries()
            .chain(other.entries().map(|(j, i, v)| (j + n, i + n, v)));
        FilteredComplex::from_parts(self.field, gens, entries)
    }

    /// `Σ^r C`: every filtration raised by `r`.
    pub fn shift(&self, r: &Exponent) -> Self {
        let mut out = self.clone();
        for g in &mut out.gens {
            g.filtration = &g.filtration + r;
        }
        out
    }

    /// `T^k C`: degrees raised by `k`, differential times `(-1)^k`.
    pub fn translate(&self, k: i64) -> Self {
        let mut out = self.clone();
        let s = self.field.sign(k);
        for g in &mut out.gens {
            g.degree += k;
        }
        for col in &mut out.columns {
            for v in col.values_mut() {
                *v = self.field.mul(*v, s);
            }
        }
        out
    }

    /// The subcomplex `C^{≤r}`.
    pub fn truncate(&self, r: &Exponent) -> Self {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&j| &self.gens[j].filtration <= r)
            .collect();
        self.restrict(&keep)
    }

    /// Subcomplex on the listed indices, which must be closed under `∂`.
    fn restrict(&self, keep: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(n, &o)| (o, n)).collect();
        let gens = keep.iter().map(|&j| self.gens[j].clone()).collect();
        let entries: Vec<(usize, usize, u64)> = self
            .entries()
            .filter_map(|(j, i, v)| Some((*pos.get(&j)?, *pos.get(&i)?, v)))
            .collect();
        Self::assemble(self.field, gens, entries)
    }

    /// `C ⊗ D` with `ℓ(x⊗y) = ℓ(x) + ℓ(y)` and
    /// `∂(x⊗y) = ∂x⊗y + (-1)^{|x|} x⊗∂y`.
    pub fn tensor(&self, other: &FilteredComplex) -> Result<Self> {
        self.require_same_field(other)?;
        let f = self.field;
        let m = other.len();
        let idx = |i: usize, j: usize| i * m + j;
        let mut gens = Vec::with_capacity(self.len() * m);
        for x in &self.gens {
            for y in &other.gens {
                gens.push(Generator::new(
                    format!("({},{})", x.id, y.id),
                    x.degree + y.degree,
                    &x.filtration + &y.filtration,
                ));
            }
        }
        let mut entries = Vec::new();
        for (i, x) in self.gens.iter().enumerate() {
            let sign = f.sign(x.degree);
            for j in 0..m {
                for (&i2, &v) in &self.columns[i] {
                    entries.push((idx(i, j), idx(i2, j), v));
                }
                for (&j2, &v) in &other.columns[j] {
                    entries.push((idx(i, j), idx(i, j2), f.mul(sign, v)));
                }
            }
        }
        FilteredComplex::from_parts(f, gens, entries)
    }

    /// Internal hom complex. The generator `x->y` sends `x` to `y` and every
    /// other basis element to 0; it has degree `|y| − |x|` and filtration
    /// `ℓ(y) − ℓ(x)`. The differential is `D φ = ∂∘φ − (-1)^{|φ|} φ∘∂`.
    pub fn hom(&self, other: &FilteredComplex) -> Result<Self> {
        self.require_same_field(other)?;
        let f = self.field;
        let m = other.len();
        let idx = |i: usize, j: usize| i * m + j;
        // incoming[i] lists (source, coeff) with ∂e_source ∋ e_i
        let mut incoming: Vec<Vec<(usize, u64)>> = vec![Vec::new(); self.len()];
        for (j, i, v) in self.entries() {
            incoming[i].push((j, v));
        }
        let mut gens = Vec::with_capacity(self.len() * m);
        for x in &self.gens {
            for y in &other.gens {
                gens.push(Generator::new(
                    format!("{}->{}", x.id, y.id),
                    y.degree - x.degree,
                    &y.filtration - &x.filtration,
                ));
            }
        }
        let mut entries = Vec::new();
        for (i, x) in self.gens.iter().enumerate() {
            for (j, y) in other.gens.iter().enumerate() {
                let src = idx(i, j);
                for (&j2, &v) in &other.columns[j] {
                    entries.push((src, idx(i, j2), v));
                }
                let s = f.neg(f.sign(y.degree - x.degree));
                for &(i2, v) in &incoming[i] {
                    entries.push((src, idx(i2, j), f.mul(s, v)));
                }
            }
        }
        FilteredComplex::from_parts(f, gens, entries)
    }

    /// Dual complex: `x^v` sits in degree `m0 − |x|` at level `−ℓ(x)`, and
    /// `δ(x^v) = (-1)^{m0−|x|} Σ_y ∂[y→x] y^v`.
    pub fn dual(&self, m0: i64) -> Self {
        let f = self.field;
        let gens = self
            .gens
            .iter()
            .map(|g| Generator::new(format!("{}^v", g.id), m0 - g.degree, -&g.filtration))
            .collect();
        let entries: Vec<(usize, usize, u64)> = self
            .entries()
            .map(|(j, i, v)| (i, j, f.mul(f.sign(m0 - self.gens[i].degree), v)))
            .collect();
        Self::assemble(f, gens, entries)
    }

    /// The canonical map `η_r: Σ^r C → C`, the identity on generators.
    pub fn eta_r(&self, r: &Exponent) -> Result<FilteredChainMap> {
        require_nonneg(r)?;
        let entries = (0..self.len()).map(|j| (j, j, 1)).collect();
        FilteredChainMap::new(self.shift(r), self.clone(), entries, Exponent::zero())
    }

    /// `Q_r C = cone(η_r)`.
    pub fn qr(&self, r: &Exponent) -> Result<Self> {
        self.eta_r(r)?.cone()
    }
}

pub(crate) fn require_nonneg(r: &Exponent) -> Result<()> {
    if r.is_negative() {
        return Err(Error::BadParameter {
            expected: "r >= 0",
            got: r.to_string(),
        });
    }
    Ok(())
}

fn uniquify_ids(gens: &mut [Generator]) {
    let mut seen: HashSet<String> = HashSet::new();
    for g in gens.iter_mut() {
        while !seen.insert(g.id.clone()) {
            g.id.push('\'');
        }
    }
}

/// A degree-0 chain map raising filtration by at most `shift_allowance`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredChainMap {
    domain: FilteredComplex,
    codomain: FilteredComplex,
    /// `(source in domain, target in codomain) → coeff`.
    entries: BTreeMap<(usize, usize), u64>,
    shift_allowance: Exponent,
}

impl FilteredChainMap {
    /// Builds and validates a map from `(source, target, coeff)` entries.
    pub fn new(
        domain: FilteredComplex,
        codomain: FilteredComplex,
        entries: Vec<(usize, usize, u64)>,
        shift_allowance: Exponent,
    ) -> Result<Self> {
        let map = Self::new_unchecked(domain, codomain, entries, shift_allowance)?;
        map.validate()?;
        Ok(map)
    }

    fn new_unchecked(
        domain: FilteredComplex,
        codomain: FilteredComplex,
        entries: Vec<(usize, usize, u64)>,
        shift_allowance: Exponent,
    ) -> Result<Self> {
        domain.require_same_field(&codomain)?;
        let f = domain.field;
        let mut map: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (s, t, v) in entries {
            if s >= domain.len() || t >= codomain.len() {
                return Err(Error::InvalidMap(format!("entry ({s}, {t}) out of range")));
            }
            let slot = map.entry((s, t)).or_insert(0);
            *slot = f.add(*slot, v % f.characteristic());
        }
        map.retain(|_, v| *v != 0);
        Ok(FilteredChainMap {
            domain,
            codomain,
            entries: map,
            shift_allowance,
        })
    }

    pub fn identity(c: &FilteredComplex) -> Self {
        let entries = (0..c.len()).map(|j| (j, j, 1)).collect();
        FilteredChainMap::new(c.clone(), c.clone(), entries, Exponent::zero())
            .expect("identity is a filtered chain map")
    }

    /// Builds from a matrix `m[t][s]` (codomain × domain).
    pub fn from_matrix(
        domain: FilteredComplex,
        codomain: FilteredComplex,
        m: &Matrix,
        shift_allowance: Exponent,
    ) -> Result<Self> {
        let mut entries = Vec::new();
        for s in 0..domain.len() {
            for t in 0..codomain.len() {
                let v = m.get(t, s);
                if v != 0 {
                    entries.push((s, t, v));
                }
            }
        }
        FilteredChainMap::new(domain, codomain, entries, shift_allowance)
    }

    pub fn domain(&self) -> &FilteredComplex {
        &self.domain
    }

    pub fn codomain(&self) -> &FilteredComplex {
        &self.codomain
    }

    pub fn shift_allowance(&self) -> &Exponent {
        &self.shift_allowance
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().map(|(&(s, t), &v)| (s, t, v))
    }

    /// Matrix with rows indexed by the codomain and columns by the domain.
    pub fn matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.codomain.len(), self.domain.len());
        for (s, t, v) in self.entries() {
            m.set(t, s, v);
        }
        m
    }

    pub fn validate(&self) -> Result<()> {
        require_nonneg(&self.shift_allowance)?;
        for c in [&self.domain, &self.codomain] {
            let v = c.validate();
            if !v.is_empty() {
                return Err(Error::InvalidComplex(v));
            }
        }
        for (s, t, _) in self.entries() {
            let (a, b) = (&self.domain.gens[s], &self.codomain.gens[t]);
            if a.degree != b.degree {
                return Err(Error::InvalidMap(format!(
                    "{} -> {} changes degree {} to {}",
                    a.id, b.id, a.degree, b.degree
                )));
            }
            if b.filtration > &a.filtration + &self.shift_allowance {
                return Err(Error::InvalidMap(format!(
                    "{} -> {} raises filtration from {} to {} beyond allowance {}",
                    a.id, b.id, a.filtration, b.filtration, self.shift_allowance
                )));
            }
        }
        let f = self.domain.field;
        let m = self.matrix();
        let lhs = self.codomain.boundary_matrix().mul(&f, &m);
        let rhs = m.mul(&f, &self.domain.boundary_matrix());
        if lhs != rhs {
            return Err(Error::InvalidMap("map does not commute with the differentials".into()));
        }
        Ok(())
    }

    /// Mapping cone. Each domain generator `a` contributes `a~` one degree up
    /// at the same level, with `∂(a~) = −(∂a)~ + f(a)`.
    pub fn cone(&self) -> Result<FilteredComplex> {
        if !self.shift_allowance.is_zero() {
            return Err(Error::InvalidMap(format!(
                "cone needs a filtration-preserving map, allowance is {}",
                self.shift_allowance
            )));
        }
        let f = self.domain.field;
        let nb = self.codomain.len();
        let mut gens: Vec<Generator> = self.codomain.gens.clone();
        for g in &self.domain.gens {
            gens.push(Generator::new(
                format!("{}~", g.id),
                g.degree + 1,
                g.filtration.clone(),
            ));
        }
        let mut entries: Vec<(usize, usize, u64)> = self.codomain.entries().collect();
        for (j, i, v) in self.domain.entries() {
            entries.push((nb + j, nb + i, f.neg(v)));
        }
        for (s, t, v) in self.entries() {
            entries.push((nb + s, t, v));
        }
        FilteredComplex::from_parts(f, gens, entries)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GenRepr {
    id: String,
    degree: i64,
    filtration: Exponent,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRepr {
    from: String,
    to: String,
    coeff: i64,
}

fn default_field() -> u64 {
    2
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexRepr {
    #[serde(default = "default_field")]
    field: u64,
    generators: Vec<GenRepr>,
    #[serde(default)]
    boundary: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapRepr {
    domain: serde_json::Value,
    codomain: serde_json::Value,
    #[serde(default)]
    entries: Vec<EntryRepr>,
    #[serde(default)]
    shift_allowance: Exponent,
}

fn schema<E: fmt::Display>(e: E) -> Error {
    Error::Schema(e.to_string())
}

fn lookup(ids: &HashMap<&str, usize>, id: &str) -> Result<usize> {
    ids.get(id)
        .copied()
        .ok_or_else(|| Error::UnknownGenerator(id.to_string()))
}

fn id_table(gens: &[Generator]) -> Result<HashMap<&str, usize>> {
    let mut ids = HashMap::new();
    for (n, g) in gens.iter().enumerate() {
        if ids.insert(g.id.as_str(), n).is_some() {
            return Err(Error::DuplicateId(g.id.clone()));
        }
    }
    Ok(ids)
}

impl FilteredComplex {
    /// Parses the JSON format without checking the complex invariants.
    pub fn from_json_unchecked(v: &serde_json::Value) -> Result<Self> {
        let repr: ComplexRepr = serde_json::from_value(v.clone()).map_err(schema)?;
        let field = FieldSpec::new(repr.field)?;
        let gens: Vec<Generator> = repr
            .generators
            .into_iter()
            .map(|g| Generator::new(g.id, g.degree, g.filtration))
            .collect();
        let ids = id_table(&gens)?;
        let mut entries = Vec::new();
        for e in &repr.boundary {
            entries.push((lookup(&ids, &e.from)?, lookup(&ids, &e.to)?, field.from_int(e.coeff)));
        }
        Ok(Self::assemble(field, gens, entries))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let c = Self::from_json_unchecked(v)?;
        let violations = c.validate();
        if violations.is_empty() {
            Ok(c)
        } else {
            Err(Error::InvalidComplex(violations))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = ComplexRepr {
            field: self.field.characteristic(),
            generators: self
                .gens
                .iter()
                .map(|g| GenRepr {
                    id: g.id.clone(),
                    degree: g.degree,
                    filtration: g.filtration.clone(),
                })
                .collect(),
            boundary: self
                .entries()
                .map(|(j, i, v)| EntryRepr {
                    from: self.gens[j].id.clone(),
                    to: self.gens[i].id.clone(),
                    coeff: self.field.to_int(v),
                })
                .collect(),
        };
        serde_json::to_value(repr).expect("complex serializes")
    }
}

impl FilteredChainMap {
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: MapRepr = serde_json::from_value(v.clone()).map_err(schema)?;
        let domain = FilteredComplex::from_json(&repr.domain)?;
        let codomain = FilteredComplex::from_json(&repr.codomain)?;
        let (dids, cids) = (id_table(&domain.gens)?, id_table(&codomain.gens)?);
        let f = domain.field;
        let mut entries = Vec::new();
        for e in &repr.entries {
            entries.push((lookup(&dids, &e.from)?, lookup(&cids, &e.to)?, f.from_int(e.coeff)));
        }
        FilteredChainMap::new(domain, codomain, entries, repr.shift_allowance)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.domain.field;
        let repr = MapRepr {
            domain: self.domain.to_json(),
            codomain: self.codomain.to_json(),
            entries: self
                .entries()
                .map(|(s, t, v)| EntryRepr {
                    from: self.domain.gens[s].id.clone(),
                    to: self.codomain.gens[t].id.clone(),
                    coeff: f.to_int(v),
                })
                .collect(),
            shift_allowance: self.shift_allowance.clone(),
        };
        serde_json::to_value(repr).expect("map serializes")
    }
}

impl fmt::Display for FilteredComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field F_{}, {} generators", self.field.characteristic(), self.len())?;
        for (j, g) in self.gens.iter().enumerate() {
            write!(f, "  {} (degree {}, filtration {})", g.id, g.degree, g.filtration)?;
            let col = &self.columns[j];
            if !col.is_empty() {
                let terms: Vec<String> = col
                    .iter()
                    .map(|(&i, &v)| format!("{}*{}", self.field.to_int(v), self.gens[i].id))
                    .collect();
                write!(f, "  d = {}", terms.join(" + "))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
