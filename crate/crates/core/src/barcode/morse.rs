//! Step-function Morse data `(P, H, Q)` of a filtered complex.
//!
//! `P_k(s) = dim C_k^{≤s}`, `H_k(s)` counts degree-`k` bars alive at `s`,
//! and `Q_k(s) = rank(∂: C_{k+1}^{≤s} → C_k)`. They satisfy
//! `P_k − H_k = Q_k + Q_{k−1}`, i.e. `P(x) − H(x) = (1+x) Q(x)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::barcode_of;
use crate::error::{Error, Result};
use crate::fcomplex::FilteredComplex;
use crate::stepfn::StepFn;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorseData {
    #[serde(rename = "P")]
    pub p: BTreeMap<i64, StepFn>,
    #[serde(rename = "H")]
    pub h: BTreeMap<i64, StepFn>,
    #[serde(rename = "Q")]
    pub q: BTreeMap<i64, StepFn>,
}

impl MorseData {
    fn get(map: &BTreeMap<i64, StepFn>, k: i64) -> StepFn {
        map.get(&k).cloned().unwrap_or_default()
    }

    pub fn p_at(&self, k: i64) -> StepFn {
        Self::get(&self.p, k)
    }

    pub fn h_at(&self, k: i64) -> StepFn {
        Self::get(&self.h, k)
    }

    pub fn q_at(&self, k: i64) -> StepFn {
        Self::get(&self.q, k)
    }

    /// Checks `P_k − H_k = Q_k + Q_{k−1}` for every degree present.
    pub fn identity_holds(&self) -> bool {
        let mut degrees: Vec<i64> = self.p.keys().chain(self.h.keys()).copied().collect();
        degrees.extend(self.q.keys().flat_map(|&k| [k, k + 1]));
        degrees.iter().all(|&k| {
            &self.p_at(k) - &self.h_at(k) == &self.q_at(k) + &self.q_at(k - 1)
        })
    }
}

pub fn morse(c: &FilteredComplex) -> Result<MorseData> {
    let barcode = barcode_of(c)?;
    let f = c.field();
    let gens = c.generators();
    let d = c.boundary_matrix();
    let mut p = BTreeMap::new();
    let mut h = BTreeMap::new();
    let mut q = BTreeMap::new();
    for k in c.degrees() {
        let pk = StepFn::from_jumps(
            gens.iter()
                .filter(|g| g.degree == k)
                .map(|g| (g.filtration.clone(), 1)),
        );
        p.insert(k, pk);
        let hk = barcode.sigma_degree(k);
        if !hk.is_zero() {
            h.insert(k, hk);
        }
        // Q_{k-1}: rank of ∂ on C_k^{≤s}, sampled at every level where it can change
        let below: Vec<usize> = (0..c.len()).filter(|&i| gens[i].degree == k - 1).collect();
        let mut prev = 0i64;
        let mut jumps = Vec::new();
        for lvl in c.filtration_levels() {
            let cols: Vec<usize> = (0..c.len())
                .filter(|&i| gens[i].degree == k && gens[i].filtration <= lvl)
                .collect();
            let r = if below.is_empty() || cols.is_empty() {
                0
            } else {
                d.select(&below, &cols).rank(&f) as i64
            };
            if r != prev {
                jumps.push((lvl, r - prev));
                prev = r;
            }
        }
        let qk = StepFn::from_jumps(jumps);
        if !qk.is_zero() {
            q.insert(k - 1, qk);
        }
    }
    let data = MorseData { p, h, q };
    if !data.identity_holds() {
        return Err(Error::Internal("P - H = (1+x)Q failed".into()));
    }
    Ok(data)
}
