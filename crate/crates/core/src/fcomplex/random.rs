//! Random filtered complexes and maps with known normal forms.
//!
//! A complex is planted as a direct sum of `E1`/`E2` pieces, then conjugated
//! by a random filtered unitriangular change of basis so that the normal form
//! is no longer visible in the boundary matrix.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FilteredChainMap, FilteredComplex, Generator};
use crate::error::Result;
use crate::exponent::{Endpoint, Exponent};
use crate::field::{FieldSpec, Matrix};

/// One summand of a planted normal form. For `E2`, `degree` is that of the
/// lower generator; `birth == death` plants a ghost pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Piece {
    E1 { a: Exponent, degree: i64 },
    E2 { b: Exponent, c: Exponent, degree: i64 },
}

impl Piece {
    /// The bar this piece contributes, or `None` for a ghost.
    pub fn bar(&self) -> Option<(i64, Exponent, Endpoint)> {
        match self {
            Piece::E1 { a, degree } => Some((*degree, a.clone(), Endpoint::Infinite)),
            Piece::E2 { b, c, degree } if b < c => {
                Some((*degree, b.clone(), Endpoint::Finite(c.clone())))
            }
            Piece::E2 { .. } => None,
        }
    }

    fn size(&self) -> usize {
        match self {
            Piece::E1 { .. } => 1,
            Piece::E2 { .. } => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub field: FieldSpec,
    /// Upper bound on the number of generators.
    pub max_generators: usize,
    pub min_degree: i64,
    pub max_degree: i64,
    /// Filtrations are drawn as `n / d` with `d` from this list and
    /// `|n| ≤ span·d`.
    pub denominators: Vec<i64>,
    pub span: i64,
    /// Probability that an `E2` piece is a ghost.
    pub ghost_rate: f64,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            field: FieldSpec::default(),
            max_generators: 8,
            min_degree: -1,
            max_degree: 2,
            denominators: vec![1, 2, 3],
            span: 3,
            ghost_rate: 0.15,
        }
    }
}

impl RandomParams {
    pub fn with_field(mut self, field: FieldSpec) -> Self {
        self.field = field;
        self
    }

    pub fn with_max_generators(mut self, n: usize) -> Self {
        self.max_generators = n;
        self
    }
}

/// A complex together with the normal form it was built from.
#[derive(Clone, Debug)]
pub struct Planted {
    pub pieces: Vec<Piece>,
    pub normal: FilteredComplex,
    pub complex: FilteredComplex,
    /// Columns of the basis change: new basis vector `j` in old coordinates.
    pub basis: Matrix,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_level<R: Rng>(rng: &mut R, p: &RandomParams) -> Exponent {
    let d = *p.denominators.choose(rng).unwrap_or(&1);
    Exponent::new(rng.gen_range(-p.span * d..=p.span * d), d)
}

pub fn random_pieces<R: Rng>(rng: &mut R, p: &RandomParams) -> Vec<Piece> {
    let budget = rng.gen_range(0..=p.max_generators);
    let mut used = 0;
    let mut pieces = Vec::new();
    while used < budget {
        let degree = rng.gen_range(p.min_degree..=p.max_degree);
        let piece = if budget - used >= 2 && rng.gen_bool(0.6) {
            let b = random_level(rng, p);
            let c = if rng.gen_bool(p.ghost_rate) {
                b.clone()
            } else {
                let mut c = random_level(rng, p);
                while c <= b {
                    c = &c + &Exponent::int(1);
                }
                c
            };
            Piece::E2 { b, c, degree }
        } else {
            Piece::E1 {
                a: random_level(rng, p),
                degree,
            }
        };
        used += piece.size();
        pieces.push(piece);
    }
    pieces
}

/// The direct sum of the pieces, generators listed in piece order.
pub fn normal_form(field: FieldSpec, pieces: &[Piece]) -> FilteredComplex {
    let mut gens = Vec::new();
    let mut entries = Vec::new();
    for (n, piece) in pieces.iter().enumerate() {
        match piece {
            Piece::E1 { a, degree } => gens.push(Generator::new(format!("g{n}"), *degree, a.clone())),
            Piece::E2 { b, c, degree } => {
                let x = gens.len();
                gens.push(Generator::new(format!("g{n}x"), *degree, b.clone()));
                gens.push(Generator::new(format!("g{n}y"), degree + 1, c.clone()));
                entries.push((x + 1, x, 1));
            }
        }
    }
    FilteredComplex::from_parts(field, gens, entries).expect("normal forms are valid")
}

/// A random invertible filtered basis change: `M = I + N` where `N[i][j] ≠ 0`
/// only if `e_i` and `e_j` share a degree and `e_i` precedes `e_j` in the
/// order by `(filtration, index)`.
pub fn random_basis_change<R: Rng>(rng: &mut R, c: &FilteredComplex) -> Matrix {
    let f = c.field();
    let n = c.len();
    let gens = c.generators();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| (&gens[i].filtration, i).cmp(&(&gens[j].filtration, j)));
    let mut m = Matrix::identity(n);
    for (pj, &j) in order.iter().enumerate() {
        for &i in &order[..pj] {
            if gens[i].degree == gens[j].degree && rng.gen_bool(0.5) {
                m.set(i, j, rng.gen_range(0..f.characteristic()));
            }
        }
    }
    m
}

/// Rewrites `c` in the basis given by the columns of `m`.
pub fn conjugate(c: &FilteredComplex, m: &Matrix) -> FilteredComplex {
    let f = c.field();
    let inv = m.inverse(&f).expect("basis change is invertible");
    let d = inv.mul(&f, &c.boundary_matrix()).mul(&f, m);
    let gens = c
        .generators()
        .iter()
        .enumerate()
        .map(|(n, g)| Generator::new(format!("e{n}"), g.degree, g.filtration.clone()))
        .collect();
    FilteredComplex::from_matrix(f, gens, &d).expect("conjugation preserves validity")
}

pub fn planted_from_pieces<R: Rng>(rng: &mut R, field: FieldSpec, pieces: Vec<Piece>) -> Planted {
    let normal = normal_form(field, &pieces);
    let basis = random_basis_change(rng, &normal);
    let complex = conjugate(&normal, &basis);
    Planted {
        pieces,
        normal,
        complex,
        basis,
    }
}

pub fn random_planted<R: Rng>(rng: &mut R, p: &RandomParams) -> Planted {
    let pieces = random_pieces(rng, p);
    planted_from_pieces(rng, p.field, pieces)
}

/// Deterministic random complex for a seed.
pub fn random_complex(seed: u64, p: &RandomParams) -> FilteredComplex {
    random_planted(&mut rng_from_seed(seed), p).complex
}

/// Generator index ranges of each piece in the normal form.
fn offsets(pieces: &[Piece]) -> Vec<usize> {
    let mut out = Vec::with_capacity(pieces.len());
    let mut n = 0;
    for p in pieces {
        out.push(n);
        n += p.size();
    }
    out
}

/// A random filtration-preserving chain map between two planted normal forms,
/// written in the planted bases. Built from elementary blocks plus a random
/// null-homotopic term `∂h + h∂`.
pub fn random_normal_map<R: Rng>(rng: &mut R, dom: &Planted, cod: &Planted) -> Matrix {
    let f = dom.normal.field();
    let (na, nb) = (dom.normal.len(), cod.normal.len());
    let mut m = Matrix::zeros(nb, na);
    let (oa, ob) = (offsets(&dom.pieces), offsets(&cod.pieces));
    let put = |m: &mut Matrix, t: usize, s: usize, v: u64| {
        let old = m.get(t, s);
        m.set(t, s, f.add(old, v));
    };
    for (pi, p) in dom.pieces.iter().enumerate() {
        for (qi, q) in cod.pieces.iter().enumerate() {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let v = rng.gen_range(1..f.characteristic());
            let (s, t) = (oa[pi], ob[qi]);
            match (p, q) {
                (Piece::E1 { a, degree: k }, Piece::E1 { a: a2, degree: k2 }) if k == k2 && a2 <= a => {
                    put(&mut m, t, s, v)
                }
                (Piece::E1 { a, degree: k }, Piece::E2 { b, degree: k2, .. }) if k == k2 && b <= a => {
                    put(&mut m, t, s, v)
                }
                (Piece::E2 { c, degree: k, .. }, Piece::E1 { a, degree: k2 }) if *k2 == k + 1 && a <= c => {
                    put(&mut m, t, s + 1, v)
                }
                (Piece::E2 { b, c, degree: k }, Piece::E2 { b: b2, c: c2, degree: k2 })
                    if k == k2 && b2 <= b && c2 <= c =>
                {
                    put(&mut m, t, s, v);
                    put(&mut m, t + 1, s + 1, v);
                }
                (Piece::E2 { c, degree: k, .. }, Piece::E2 { b: b2, degree: k2, .. })
                    if *k2 == k + 1 && b2 <= c =>
                {
                    put(&mut m, t, s + 1, v)
                }
                _ => {}
            }
        }
    }
    // null-homotopic part: h raises degree by one and does not raise filtration
    let (ga, gb) = (dom.normal.generators(), cod.normal.generators());
    let mut h = Matrix::zeros(nb, na);
    for (s, x) in ga.iter().enumerate() {
        for (t, y) in gb.iter().enumerate() {
            if y.degree == x.degree + 1 && y.filtration <= x.filtration && rng.gen_bool(0.3) {
                h.set(t, s, rng.gen_range(0..f.characteristic()));
            }
        }
    }
    let dh = cod.normal.boundary_matrix().mul(&f, &h);
    let hd = h.mul(&f, &dom.normal.boundary_matrix());
    for t in 0..nb {
        for s in 0..na {
            let v = f.add(dh.get(t, s), hd.get(t, s));
            put(&mut m, t, s, v);
        }
    }
    m
}

/// A random filtration-preserving map `dom.complex → cod.complex`.
pub fn random_map<R: Rng>(rng: &mut R, dom: &Planted, cod: &Planted) -> Result<FilteredChainMap> {
    let f = dom.normal.field();
    let m0 = random_normal_map(rng, dom, cod);
    let inv_b = cod.basis.inverse(&f).expect("invertible");
    let m = inv_b.mul(&f, &m0).mul(&f, &dom.basis);
    FilteredChainMap::from_matrix(dom.complex.clone(), cod.complex.clone(), &m, Exponent::zero())
}

/// A random pair of planted complexes and a map between them. Roughly a
/// quarter of the draws use a map close to the identity of one complex so
/// that the cone has ghost pairs.
pub fn random_cone_input<R: Rng>(rng: &mut R, p: &RandomParams) -> Result<(Planted, Planted, FilteredChainMap)> {
    let dom = random_planted(rng, p);
    if rng.gen_bool(0.25) {
        let f = FilteredChainMap::identity(&dom.complex);
        return Ok((dom.clone(), dom, f));
    }
    let cod = random_planted(rng, p);
    let f = random_map(rng, &dom, &cod)?;
    Ok((dom, cod, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let p = RandomParams::default();
        assert_eq!(random_complex(7, &p), random_complex(7, &p));
    }

    #[test]
    fn outputs_validate() {
        let p = RandomParams::default().with_field(FieldSpec::new(5).unwrap());
        let mut rng = rng_from_seed(1);
        for _ in 0..50 {
            let pl = random_planted(&mut rng, &p);
            assert!(pl.complex.validate().is_empty());
            assert!(pl.complex.len() <= p.max_generators);
        }
    }

    #[test]
    fn random_maps_are_chain_maps() {
        let p = RandomParams::default().with_field(FieldSpec::new(3).unwrap());
        let mut rng = rng_from_seed(2);
        for _ in 0..50 {
            let (_, _, f) = random_cone_input(&mut rng, &p).unwrap();
            assert!(f.validate().is_ok());
        }
    }
}
