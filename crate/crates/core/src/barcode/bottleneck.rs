//! Exact bottleneck distance, matched degree by degree.
//!
//! A `τ`-matching pairs bars of equal degree whose endpoints differ by at most
//! `τ`; infinite bars pair only with infinite bars; an unmatched bar must have
//! length at most `2τ`. The distance is the least feasible `τ`, found among
//! the finitely many endpoint differences and half-lengths.

use std::collections::BTreeSet;

use super::GradedBarcode;
use crate::exponent::{Distance, Endpoint, Exponent, Rational};

#[derive(Clone)]
struct Item {
    birth: Exponent,
    death: Endpoint,
}

impl Item {
    fn half_length(&self) -> Option<Rational> {
        self.death
            .finite()
            .map(|d| (d - &self.birth).into_rational() / Rational::from_integer(2.into()))
    }
}

fn expand(b: &GradedBarcode, k: i64) -> Vec<Item> {
    let mut out = Vec::new();
    for bar in b.bars().filter(|bar| bar.degree == k) {
        for _ in 0..bar.mult {
            out.push(Item {
                birth: bar.birth.clone(),
                death: bar.death.clone(),
            });
        }
    }
    out
}

/// `max(|Δbirth|, |Δdeath|)`, or `None` when one is finite and the other not.
fn pair_cost(x: &Item, y: &Item) -> Option<Rational> {
    let db = (&x.birth - &y.birth).abs().into_rational();
    match (&x.death, &y.death) {
        (Endpoint::Infinite, Endpoint::Infinite) => Some(db),
        (Endpoint::Finite(a), Endpoint::Finite(b)) => Some(db.max((a - b).abs().into_rational())),
        _ => None,
    }
}

/// Whether a perfect matching exists in the graph of `τ`-admissible pairs
/// between `xs ∪ diag(ys)` and `ys ∪ diag(xs)`.
fn feasible(xs: &[Item], ys: &[Item], tau: &Rational) -> bool {
    let (n, m) = (xs.len(), ys.len());
    let two_tau = tau * Rational::from_integer(2.into());
    let short = |it: &Item| it.half_length().is_some_and(|h| h * Rational::from_integer(2.into()) <= two_tau);
    // left: 0..n are xs, n..n+m are diagonal copies of ys
    // right: 0..m are ys, m..m+n are diagonal copies of xs
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            if pair_cost(x, y).is_some_and(|c| &c <= tau) {
                adj[i].push(j);
            }
        }
        if short(x) {
            adj[i].push(m + i);
        }
    }
    for (j, y) in ys.iter().enumerate() {
        if short(y) {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }
    let mut matched: Vec<Option<usize>> = vec![None; n + m];
    for u in 0..n + m {
        let mut seen = vec![false; n + m];
        if !augment(u, &adj, &mut matched, &mut seen) {
            return false;
        }
    }
    true
}

fn augment(u: usize, adj: &[Vec<usize>], matched: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &v in &adj[u] {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        if matched[v].is_none_or(|w| augment(w, adj, matched, seen)) {
            matched[v] = Some(u);
            return true;
        }
    }
    false
}

fn degree_distance(xs: &[Item], ys: &[Item]) -> Option<Rational> {
    let inf = |v: &[Item]| v.iter().filter(|i| i.death.is_infinite()).count();
    if inf(xs) != inf(ys) {
        return None;
    }
    let mut cands: BTreeSet<Rational> = BTreeSet::new();
    cands.insert(Rational::from_integer(0.into()));
    for it in xs.iter().chain(ys) {
        if let Some(h) = it.half_length() {
            cands.insert(h);
        }
    }
    for x in xs {
        for y in ys {
            if pair_cost(x, y).is_some() {
                cands.insert((&x.birth - &y.birth).abs().into_rational());
                if let (Endpoint::Finite(a), Endpoint::Finite(b)) = (&x.death, &y.death) {
                    cands.insert((a - b).abs().into_rational());
                }
            }
        }
    }
    cands.into_iter().find(|tau| feasible(xs, ys, tau))
}

/// Bottleneck distance; infinite when some degree has different numbers of
/// infinite bars.
pub fn bottleneck(b1: &GradedBarcode, b2: &GradedBarcode) -> Distance {
    let mut degrees: BTreeSet<i64> = b1.degrees().into_iter().collect();
    degrees.extend(b2.degrees());
    let mut best = Rational::from_integer(0.into());
    for k in degrees {
        match degree_distance(&expand(b1, k), &expand(b2, k)) {
            Some(d) => best = best.max(d),
            None => return Distance::Infinite,
        }
    }
    Distance::Finite(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::rat;

    fn bars(v: &[(i64, i64, Option<i64>)]) -> GradedBarcode {
        GradedBarcode::from_bars(v.iter().map(|&(k, b, d)| {
            (
                k,
                Exponent::int(b),
                d.map_or(Endpoint::Infinite, |d| Endpoint::Finite(Exponent::int(d))),
                1,
            )
        }))
        .unwrap()
    }

    #[test]
    fn single_finite_bar_against_empty() {
        let d = bottleneck(&bars(&[(0, 0, Some(3))]), &GradedBarcode::new());
        assert_eq!(d, Distance::Finite(Rational::new(3.into(), 2.into())));
    }

    #[test]
    fn infinite_mismatch() {
        assert_eq!(
            bottleneck(&bars(&[(0, 0, None)]), &GradedBarcode::new()),
            Distance::Infinite
        );
        assert_eq!(
            bottleneck(&bars(&[(0, 0, None)]), &bars(&[(1, 0, None)])),
            Distance::Infinite
        );
    }

    #[test]
    fn matching_beats_discarding() {
        // [0,10) vs [1,10): match with cost 1 rather than discard (cost 5)
        let d = bottleneck(&bars(&[(0, 0, Some(10))]), &bars(&[(0, 1, Some(10))]));
        assert_eq!(d, Distance::Finite(rat(1)));
        let d = bottleneck(&bars(&[(0, 0, None)]), &bars(&[(0, 4, None)]));
        assert_eq!(d, Distance::Finite(rat(4)));
    }

    #[test]
    fn degrees_do_not_mix() {
        let d = bottleneck(&bars(&[(0, 0, Some(4))]), &bars(&[(1, 0, Some(4))]));
        assert_eq!(d, Distance::Finite(rat(2)));
    }
}
