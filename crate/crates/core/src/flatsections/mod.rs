//! Polynomial flat sections of the ∨-connection and their potentials.
//!
//! A section ψ of degree κ is flat iff its potential F (with ψ = G_A⁻¹∇F)
//! satisfies, for all ξ, η,
//!
//! ```text
//! ∂_ξ∂_η F = κ Σ_α w_α v_α(ξ) v_α(η) ∂_{α∨}F / α(x),   α∨ = G_A⁻¹ v_α.
//! ```
//!
//! Because the directions are pairwise non-proportional, clearing
//! denominators is equivalent to requiring that α(x) divide ∂_{α∨}F for
//! every α and that the identity hold with each fraction replaced by the
//! exact quotient. Both conditions are linear in the coefficients of F.

mod harmonic;
mod sections;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::algebra::serial::poly_to_json;
use crate::algebra::{monomials_of_degree, Monomial, Poly, SparseSystem, Vars};
use crate::error::{Error, Result};
use crate::veesys::{dual_form, CovectorSystem};
use crate::{MultiPoly, RatMatrix, Rational};

pub use harmonic::{harmonic_test, HarmonicResult};
pub use sections::{euler_field, lower, section_properties, SectionProperties};

/// A vector field, one polynomial per coordinate.
pub type PolyVectorField = Vec<MultiPoly>;

#[derive(Clone, Debug, PartialEq)]
pub struct FlatBasis {
    pub kappa: u32,
    pub sections: Vec<PolyVectorField>,
    pub potentials: Vec<MultiPoly>,
}

impl FlatBasis {
    pub fn dim(&self) -> usize {
        self.potentials.len()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kappa": self.kappa,
            "dimension": self.dim(),
            "potentials": self.potentials.iter().map(poly_to_json).collect::<Vec<_>>(),
            "sections": self.sections.iter().map(|s| s.iter().map(poly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Data shared by the solvers: directions, weights and duals as rationals.
struct Setup {
    vars: Vars,
    n: usize,
    directions: Vec<Vec<Rational>>,
    weights: Vec<Rational>,
    duals: Vec<Vec<Rational>>,
    dual_form: RatMatrix,
}

impl Setup {
    fn new(sys: &CovectorSystem) -> Result<Self> {
        let gi = dual_form(sys)?;
        let directions: Vec<Vec<Rational>> = sys.covectors().iter().map(|c| c.direction_q()).collect();
        let duals = directions.iter().map(|v| gi.mul_vec(v)).collect();
        Ok(Setup {
            vars: sys.vars(),
            n: sys.dimension(),
            weights: sys.covectors().iter().map(|c| c.weight.clone()).collect(),
            directions,
            duals,
            dual_form: gi,
        })
    }

    fn section_of(&self, potential: &MultiPoly) -> PolyVectorField {
        let grad = potential.gradient();
        (0..self.n)
            .map(|i| {
                let mut acc = Poly::zero(&self.vars);
                for (j, g) in grad.iter().enumerate() {
                    acc.add_scaled(g, &self.dual_form[(i, j)]);
                }
                acc
            })
            .collect()
    }
}

/// Accumulates sparse rows keyed by (equation group, monomial).
#[derive(Default)]
struct RowBuilder {
    rows: BTreeMap<(usize, Monomial), Vec<(usize, Rational)>>,
}

impl RowBuilder {
    fn add(&mut self, group: usize, p: &MultiPoly, col: usize, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (m, c) in p.terms() {
            self.rows.entry((group, m.clone())).or_default().push((col, c * scale));
        }
    }

    fn into_system(self, ncols: usize) -> SparseSystem {
        let mut sys = SparseSystem::new(ncols);
        for (_, row) in self.rows {
            let mut merged: BTreeMap<usize, Rational> = BTreeMap::new();
            for (j, c) in row {
                *merged.entry(j).or_insert_with(Rational::zero) += c;
            }
            sys.push_row(merged);
        }
        sys
    }
}

fn combine(vars: &Vars, basis: &[Monomial], coeffs: &[Rational]) -> MultiPoly {
    Poly::from_terms(vars, basis.iter().cloned().zip(coeffs.iter().cloned()))
}

/// Pairs (i, j) with i ≤ j, and the group index used for their equations.
fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

/// ψ = G_A⁻¹∇F.
pub fn section_of_potential(sys: &CovectorSystem, potential: &MultiPoly) -> Result<PolyVectorField> {
    if potential.nvars() != sys.dimension() {
        return Err(Error::Dimension(format!(
            "polynomial has {} variables, system has dimension {}",
            potential.nvars(),
            sys.dimension()
        )));
    }
    let setup = Setup::new(sys)?;
    Ok(setup.section_of(&potential.with_vars(&setup.vars)))
}

/// Potentials of degree κ+1 solving the EPD system, with their sections.
pub fn flat_solve(sys: &CovectorSystem, kappa: u32) -> Result<FlatBasis> {
    if kappa == 0 {
        return Err(Error::Input("kappa must be at least 1".into()));
    }
    let setup = Setup::new(sys)?;
    let n = setup.n;
    let m = setup.directions.len();
    let basis = monomials_of_degree(n, kappa + 1);
    let k = Rational::from_integer(kappa.into());
    let mut rows = RowBuilder::default();
    for (col, mono) in basis.iter().enumerate() {
        let f = Poly::monomial(&setup.vars, mono.clone(), Rational::one());
        let mut quotients = Vec::with_capacity(m);
        for a in 0..m {
            let (quot, rem) = f.directional_derivative(&setup.duals[a]).div_rem_linear(&setup.directions[a]);
            rows.add(a, &rem, col, &Rational::one());
            quotients.push(quot);
        }
        for (p, (i, j)) in pairs(n).enumerate() {
            let group = m + p;
            rows.add(group, &f.derivative(i).derivative(j), col, &Rational::one());
            for (a, q) in quotients.iter().enumerate() {
                let c = &setup.weights[a] * &setup.directions[a][i] * &setup.directions[a][j] * &k;
                rows.add(group, q, col, &-c);
            }
        }
    }
    let kernel = rows.into_system(basis.len()).kernel();
    let potentials: Vec<MultiPoly> = kernel.iter().map(|c| combine(&setup.vars, &basis, c)).collect();
    let sections = potentials.iter().map(|f| setup.section_of(f)).collect();
    Ok(FlatBasis { kappa, sections, potentials })
}

/// Flat sections of degree κ found directly from the first-order system
/// ∂_j ψ = κ Σ_α w_α v_j (v·ψ / α(x)) α∨, without assuming a potential.
pub fn flat_solve_raw(sys: &CovectorSystem, kappa: u32) -> Result<Vec<PolyVectorField>> {
    if kappa == 0 {
        return Err(Error::Input("kappa must be at least 1".into()));
    }
    let setup = Setup::new(sys)?;
    let n = setup.n;
    let m = setup.directions.len();
    let basis = monomials_of_degree(n, kappa);
    let nb = basis.len();
    let k = Rational::from_integer(kappa.into());
    let mut rows = RowBuilder::default();
    for (b, mono) in basis.iter().enumerate() {
        let f = Poly::monomial(&setup.vars, mono.clone(), Rational::one());
        let divided: Vec<(MultiPoly, MultiPoly)> = setup.directions.iter().map(|v| f.div_rem_linear(v)).collect();
        for comp in 0..n {
            let col = comp * nb + b;
            // v·ψ picks up v_comp · f; its remainder must vanish
            for (a, (_, rem)) in divided.iter().enumerate() {
                rows.add(a, rem, col, &setup.directions[a][comp]);
            }
            for j in 0..n {
                rows.add(m + j * n + comp, &f.derivative(j), col, &Rational::one());
                for (a, (quot, _)) in divided.iter().enumerate() {
                    let vc = &setup.directions[a][comp];
                    if vc.is_zero() {
                        continue;
                    }
                    let base = &setup.weights[a] * &setup.directions[a][j] * vc * &k;
                    for (l, u) in setup.duals[a].iter().enumerate() {
                        rows.add(m + j * n + l, quot, col, &-(&base * u));
                    }
                }
            }
        }
    }
    let kernel = rows.into_system(n * nb).kernel();
    Ok(kernel
        .iter()
        .map(|c| (0..n).map(|comp| combine(&setup.vars, &basis, &c[comp * nb..(comp + 1) * nb])).collect())
        .collect())
}

/// [`flat_solve`], additionally checking that the first-order system has
/// exactly the span of the potential sections.
pub fn flat_solve_checked(sys: &CovectorSystem, kappa: u32) -> Result<FlatBasis> {
    let basis = flat_solve(sys, kappa)?;
    let raw = flat_solve_raw(sys, kappa)?;
    if !same_span(&basis.sections, &raw) {
        return Err(Error::InvalidSystem(format!(
            "kappa = {kappa}: potential form gives {} sections, first-order system {}",
            basis.dim(),
            raw.len()
        )));
    }
    Ok(basis)
}

/// Whether two lists of vector fields span the same rational space.
pub fn same_span(a: &[PolyVectorField], b: &[PolyVectorField]) -> bool {
    let flatten = |fields: &[PolyVectorField]| -> Vec<BTreeMap<(usize, Monomial), Rational>> {
        fields
            .iter()
            .map(|f| {
                f.iter()
                    .enumerate()
                    .flat_map(|(i, p)| p.terms().map(move |(m, c)| ((i, m.clone()), c.clone())))
                    .collect()
            })
            .collect()
    };
    let (fa, fb) = (flatten(a), flatten(b));
    let keys: Vec<(usize, Monomial)> = {
        let mut k: Vec<_> = fa.iter().chain(&fb).flat_map(|m| m.keys().cloned()).collect();
        k.sort();
        k.dedup();
        k
    };
    let to_rows = |maps: &[BTreeMap<(usize, Monomial), Rational>]| -> Vec<Vec<Rational>> {
        maps.iter().map(|m| keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(Rational::zero)).collect()).collect()
    };
    let rank = |rows: Vec<Vec<Rational>>| {
        if rows.is_empty() || keys.is_empty() {
            0
        } else {
            RatMatrix::from_rows(rows).expect("rectangular").rank()
        }
    };
    let (ra, rb) = (to_rows(&fa), to_rows(&fb));
    let joint: Vec<Vec<Rational>> = ra.iter().chain(&rb).cloned().collect();
    let r = rank(joint);
    r == rank(ra) && r == rank(rb)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiInvariants {
    pub degree: u32,
    pub basis: Vec<MultiPoly>,
}

impl QuasiInvariants {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Homogeneous p of the given degree with α(x) | ∂_{α∨} p for every α.
pub fn quasi_invariant_dim(sys: &CovectorSystem, degree: u32) -> Result<QuasiInvariants> {
    let setup = Setup::new(sys)?;
    let basis = monomials_of_degree(setup.n, degree);
    let mut rows = RowBuilder::default();
    for (col, mono) in basis.iter().enumerate() {
        let f = Poly::monomial(&setup.vars, mono.clone(), Rational::one());
        for (a, (u, v)) in setup.duals.iter().zip(&setup.directions).enumerate() {
            let (_, rem) = f.directional_derivative(u).div_rem_linear(v);
            rows.add(a, &rem, col, &Rational::one());
        }
    }
    let kernel = rows.into_system(basis.len()).kernel();
    Ok(QuasiInvariants { degree, basis: kernel.iter().map(|c| combine(&setup.vars, &basis, c)).collect() })
}

/// Whether `f` satisfies the EPD system with parameter κ. For κ ≥ 1 this is
/// the divided form of the cleared-denominator identity; for κ = 0 it says
/// every second derivative vanishes.
pub fn epd_check(sys: &CovectorSystem, f: &MultiPoly, kappa: u32) -> Result<bool> {
    if f.nvars() != sys.dimension() {
        return Err(Error::Dimension(format!(
            "polynomial has {} variables, system has dimension {}",
            f.nvars(),
            sys.dimension()
        )));
    }
    let setup = Setup::new(sys)?;
    let f = f.with_vars(&setup.vars);
    let n = setup.n;
    let mut quotients = Vec::with_capacity(setup.directions.len());
    if kappa > 0 {
        for (u, v) in setup.duals.iter().zip(&setup.directions) {
            let (quot, rem) = f.directional_derivative(u).div_rem_linear(v);
            if !rem.is_zero() {
                return Ok(false);
            }
            quotients.push(quot);
        }
    }
    let k = Rational::from_integer(kappa.into());
    for (i, j) in pairs(n) {
        let mut lhs = f.derivative(i).derivative(j);
        for (a, q) in quotients.iter().enumerate() {
            let c = &setup.weights[a] * &setup.directions[a][i] * &setup.directions[a][j] * &k;
            lhs.add_scaled(q, &-c);
        }
        if !lhs.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};
    use crate::families::{an_system, bn_system};
    use crate::veesys::{canonical_form, WeightedCovector};

    fn four_lines(a: Rational) -> CovectorSystem {
        let (sys, _) = CovectorSystem::from_vectors(
            2,
            vec![
                (vec![int(1), int(0)], int(1)),
                (vec![int(0), int(1)], int(1)),
                (vec![int(1), int(-1)], int(1)),
                (vec![int(1), -a], int(1)),
            ],
        )
        .unwrap();
        sys
    }

    fn euler_potential(sys: &CovectorSystem) -> MultiPoly {
        let g = canonical_form(sys);
        let x: Vec<MultiPoly> = (0..sys.dimension()).map(|i| Poly::var(&sys.vars(), i)).collect();
        let mut f = Poly::zero(&sys.vars());
        for i in 0..sys.dimension() {
            for j in 0..sys.dimension() {
                f.add_scaled(&(&x[i] * &x[j]), &(g[(i, j)].clone() / int(2)));
            }
        }
        f
    }

    #[test]
    fn euler_field_at_kappa_one() {
        let sys = an_system(&[int(1), int(2), int(3)]).unwrap();
        let basis = flat_solve(&sys, 1).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(same_span(&basis.sections, &[euler_field(&sys)]));
        assert!(epd_check(&sys, &euler_potential(&sys), 1).unwrap());
    }

    #[test]
    fn four_lines_need_a_harmonic_bundle() {
        for a in [int(3), int(-2), rat(5, 3), rat(-1, 3)] {
            assert_eq!(flat_solve(&four_lines(a), 3).unwrap().dim(), 0);
        }
        // slopes {0, ∞, 1, a} have cross-ratio −1 exactly for a ∈ {−1, 2, 1/2}
        for a in [int(-1), int(2), rat(1, 2)] {
            assert_eq!(flat_solve(&four_lines(a), 3).unwrap().dim(), 1);
        }
    }

    #[test]
    fn raw_and_potential_forms_agree() {
        let sys = bn_system(&[rat(1, 2), int(1), int(2), rat(3, 5)]).unwrap();
        for kappa in 1..=5 {
            flat_solve_checked(&sys, kappa).unwrap();
        }
    }

    #[test]
    fn quasi_invariants_of_b3_minus_one() {
        let sys = bn_system(&[int(-1), int(1), int(1), int(3)]).unwrap();
        assert_eq!(quasi_invariant_dim(&sys, 0).unwrap().dim(), 1);
        assert_eq!(quasi_invariant_dim(&sys, 3).unwrap().dim(), 0);
        assert_eq!(quasi_invariant_dim(&sys, 4).unwrap().dim(), 2);
    }

    #[test]
    fn epd_rejects_wrong_kappa() {
        let sys = an_system(&[int(1), int(1), int(1)]).unwrap();
        let basis = flat_solve(&sys, 2).unwrap();
        assert_eq!(basis.dim(), 1);
        let f = &basis.potentials[0];
        assert!(epd_check(&sys, f, 2).unwrap());
        assert!(!epd_check(&sys, f, 3).unwrap());
    }

    #[test]
    fn kappa_zero_is_an_input_error() {
        let sys = CovectorSystem::new(1, vec![WeightedCovector::new(vec![1], int(1))]).unwrap();
        assert!(matches!(flat_solve(&sys, 0), Err(Error::Input(_))));
    }
}
