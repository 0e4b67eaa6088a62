use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{flat_solve, quasi_invariant_dim, FlatBasis, PolyVectorField};
use crate::algebra::serial::poly_to_json;
use crate::algebra::{poly_determinant, Matrix};
use crate::error::Result;
use crate::veesys::CovectorSystem;
use crate::{MultiPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicResult {
    pub is_harmonic: bool,
    /// Ascending; sums to |A| when harmonic.
    pub degrees: Vec<u32>,
    pub sections: Vec<PolyVectorField>,
    pub potentials: Vec<MultiPoly>,
    /// Solution-space dimension for every κ solved.
    pub dimensions: BTreeMap<u32, usize>,
    /// Quasi-invariant dimensions by degree; filled only when not harmonic.
    pub quasi_invariants: BTreeMap<u32, usize>,
    pub multisets_tried: usize,
}

impl HarmonicResult {
    pub fn to_json(&self) -> Value {
        let table = |m: &BTreeMap<u32, usize>| -> Value {
            m.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
        };
        let mut doc = json!({
            "is_harmonic": self.is_harmonic,
            "degrees": self.degrees,
            "solution_dimensions": table(&self.dimensions),
            "multisets_tried": self.multisets_tried,
        });
        if self.is_harmonic {
            doc["potentials"] = self.potentials.iter().map(poly_to_json).collect::<Vec<_>>().into();
            doc["sections"] =
                self.sections.iter().map(|s| s.iter().map(poly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>().into();
        } else {
            doc["quasi_invariant_dimensions"] = table(&self.quasi_invariants);
        }
        doc
    }
}

/// Searches for n flat sections with degrees summing to |A| and a generically
/// nonsingular component matrix. κ runs from 1 up to |A| − (n − 1); the
/// search stops at the first κ that completes a valid choice.
pub fn harmonic_test(sys: &CovectorSystem) -> Result<HarmonicResult> {
    let n = sys.dimension();
    let total = sys.len() as u32;
    let max_kappa = total + 1 - n as u32;
    let mut bases: BTreeMap<u32, FlatBasis> = BTreeMap::new();
    let mut dimensions = BTreeMap::new();
    let mut tried = 0;
    for kappa in 1..=max_kappa {
        let basis = flat_solve(sys, kappa)?;
        dimensions.insert(kappa, basis.dim());
        if basis.dim() == 0 {
            continue;
        }
        bases.insert(kappa, basis);
        for multiset in multisets_with_top(&bases, kappa, n, total) {
            tried += 1;
            if let Some(chosen) = choose_sections(&bases, &multiset, n) {
                let mut degrees = Vec::new();
                let mut sections = Vec::new();
                let mut potentials = Vec::new();
                for (k, idx) in chosen {
                    degrees.push(k);
                    sections.push(bases[&k].sections[idx].clone());
                    potentials.push(bases[&k].potentials[idx].clone());
                }
                return Ok(HarmonicResult {
                    is_harmonic: true,
                    degrees,
                    sections,
                    potentials,
                    dimensions,
                    quasi_invariants: BTreeMap::new(),
                    multisets_tried: tried,
                });
            }
        }
    }
    let mut quasi_invariants = BTreeMap::new();
    for degree in 0..=max_kappa + 1 {
        quasi_invariants.insert(degree, quasi_invariant_dim(sys, degree)?.dim());
    }
    Ok(HarmonicResult {
        is_harmonic: false,
        degrees: Vec::new(),
        sections: Vec::new(),
        potentials: Vec::new(),
        dimensions,
        quasi_invariants,
        multisets_tried: tried,
    })
}

/// Multisets of n degrees summing to `total` that use `top` at least once,
/// with all parts ≤ top and multiplicity bounded by solution dimension.
/// Returned as ascending (κ, count) lists.
fn multisets_with_top(bases: &BTreeMap<u32, FlatBasis>, top: u32, n: usize, total: u32) -> Vec<Vec<(u32, usize)>> {
    let avail: Vec<(u32, usize)> = bases.iter().filter(|(k, _)| **k < top).map(|(k, b)| (*k, b.dim())).rev().collect();
    let mut out = Vec::new();
    let top_dim = bases[&top].dim();
    for t in 1..=top_dim.min(n) {
        let used = top * t as u32;
        if used > total {
            break;
        }
        let mut acc = vec![(top, t)];
        fill(&avail, 0, n - t, total - used, &mut acc, &mut out);
    }
    out
}

fn fill(
    avail: &[(u32, usize)],
    from: usize,
    slots: usize,
    remaining: u32,
    acc: &mut Vec<(u32, usize)>,
    out: &mut Vec<Vec<(u32, usize)>>,
) {
    if slots == 0 {
        if remaining == 0 {
            let mut m = acc.clone();
            m.sort();
            out.push(m);
        }
        return;
    }
    for (i, &(k, dim)) in avail.iter().enumerate().skip(from) {
        for t in (1..=dim.min(slots)).rev() {
            let used = k * t as u32;
            if used > remaining {
                continue;
            }
            acc.push((k, t));
            fill(avail, i + 1, slots - t, remaining - used, acc, out);
            acc.pop();
        }
    }
}

/// Picks basis sections for the multiset, trying subsets in canonical order.
/// Returns (κ, basis index) pairs on success.
fn choose_sections(bases: &BTreeMap<u32, FlatBasis>, multiset: &[(u32, usize)], n: usize) -> Option<Vec<(u32, usize)>> {
    let per_kappa: Vec<Vec<Vec<usize>>> = multiset.iter().map(|&(k, t)| combinations(bases[&k].dim(), t)).collect();
    let mut choice = vec![0usize; multiset.len()];
    loop {
        let picked: Vec<(u32, usize)> = multiset
            .iter()
            .zip(&choice)
            .zip(&per_kappa)
            .flat_map(|((&(k, _), &c), combos)| combos[c].iter().map(move |&i| (k, i)))
            .collect();
        let rows: Vec<&PolyVectorField> = picked.iter().map(|(k, i)| &bases[k].sections[*i]).collect();
        if rows.len() == n && nonsingular(&rows) {
            return Some(picked);
        }
        // odometer over the per-κ subset choices
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return None;
            }
            choice[pos] += 1;
            if choice[pos] < per_kappa[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for i in start..n {
            acc.push(i);
            rec(i + 1, n, k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Whether det(rows) is not the zero polynomial. A nonzero value at an
/// integer point proves it; otherwise the determinant is expanded exactly.
pub(crate) fn nonsingular(rows: &[&PolyVectorField]) -> bool {
    let n = rows.len();
    for point in sample_points(n, 3) {
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.eval(&point)).collect()).collect())
            .expect("square");
        if !m.determinant().expect("square").is_zero() {
            return true;
        }
    }
    let owned: Vec<PolyVectorField> = rows.iter().map(|r| (*r).clone()).collect();
    !poly_determinant(&owned).is_zero()
}

/// Deterministic integer points with entries in [−60, 60].
pub(crate) fn sample_points(n: usize, count: usize) -> Vec<Vec<Rational>> {
    let mut state: u64 = 0x2545_F491_4F6C_DD1D;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 121) as i64 - 60
    };
    (0..count).map(|_| (0..n).map(|_| Rational::from_integer(next().into())).collect()).collect()
}
