//! Hyperplane arrangements: intersection lattice, Möbius function, Poincaré
//! polynomial and its factorization, restriction and deletion, and Saito's
//! freeness criterion. Weights play no role here.

mod saito;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

pub use saito::{is_logarithmic, saito_criterion, FreenessCertificate};

use crate::algebra::scalar::format_rational;
use crate::algebra::{Matrix, Monomial, Poly, Vars};
use crate::error::{Error, Result};
use crate::veesys::{primitive_i64, CovectorSystem};
use crate::{MultiPoly, Rational};

/// Distinct hyperplanes through the origin, stored as primitive integer
/// normals with first nonzero entry positive, sorted. Need not span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dimension: usize,
    normals: Vec<Vec<i64>>,
}

impl Arrangement {
    pub fn new(dimension: usize, normals: Vec<Vec<i64>>) -> Result<Self> {
        let mut out = Vec::with_capacity(normals.len());
        for v in normals {
            if v.len() != dimension {
                return Err(Error::Dimension(format!("normal {v:?} is not in dimension {dimension}")));
            }
            let q: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
            if q.iter().all(Zero::is_zero) {
                return Err(Error::InvalidSystem("zero normal".into()));
            }
            out.push(primitive_i64(&q)?.0);
        }
        out.sort();
        out.dedup();
        Ok(Arrangement { dimension, normals: out })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn normals(&self) -> &[Vec<i64>] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    pub fn rank(&self) -> usize {
        if self.normals.is_empty() {
            return 0;
        }
        Matrix::from_rows(self.normals.iter().map(|v| to_q(v)).collect()).expect("rectangular").rank()
    }

    /// Q = Π v·x over the primitive normals.
    pub fn defining_polynomial(&self) -> MultiPoly {
        let vars = Vars::indexed("x", 1, self.dimension);
        self.normals
            .iter()
            .fold(Poly::constant(&vars, Rational::one()), |acc, v| &acc * &Poly::linear_form(&vars, &to_q(v)))
    }

    /// A ∖ H.
    pub fn delete(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let mut normals = self.normals.clone();
        normals.remove(index);
        Ok(Arrangement { dimension: self.dimension, normals })
    }

    /// A^H, in the chart of H that drops the pivot coordinate p of its normal
    /// v: a normal u becomes (u_j − u_p v_j / v_p)_{j ≠ p}. Normals that
    /// vanish on H disappear; coincident images merge.
    pub fn restrict(&self, index: usize) -> Result<Self> {
        self.check_index(index)?;
        let v = &self.normals[index];
        let p = v.iter().position(|&x| x != 0).expect("nonzero normal");
        let vp = Rational::from_integer(v[p].into());
        let mut images = Vec::new();
        for (k, u) in self.normals.iter().enumerate() {
            if k == index {
                continue;
            }
            let up = Rational::from_integer(u[p].into());
            let image: Vec<Rational> = (0..self.dimension)
                .filter(|&j| j != p)
                .map(|j| Rational::from_integer(u[j].into()) - &up * Rational::from_integer(v[j].into()) / &vp)
                .collect();
            if image.iter().any(|x| !x.is_zero()) {
                images.push(primitive_i64(&image)?.0);
            }
        }
        Arrangement::new(self.dimension - 1, images)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.normals.len() {
            return Err(Error::Input(format!("hyperplane index {index} out of range (have {})", self.normals.len())));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({ "dimension": self.dimension, "normals": self.normals })
    }
}

impl From<&CovectorSystem> for Arrangement {
    fn from(sys: &CovectorSystem) -> Self {
        Arrangement { dimension: sys.dimension(), normals: sys.directions() }
    }
}

impl From<&Arrangement> for Arrangement {
    fn from(a: &Arrangement) -> Self {
        a.clone()
    }
}

fn to_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

/// Restriction to the hyperplane of covector `index`, as an arrangement-only
/// system with unit weights.
pub fn restrict_arrangement(sys: &CovectorSystem, index: usize) -> Result<CovectorSystem> {
    let restricted = Arrangement::from(sys).restrict(index)?;
    let name = format!("{} restricted to {:?}", sys.name().unwrap_or("system"), sys.directions()[index]);
    Ok(CovectorSystem::arrangement(restricted.dimension, restricted.normals)?.with_name(name))
}

/// One flat: the row space of the normals containing it, in reduced echelon
/// form, and the indices of those normals.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeElement {
    pub basis: Vec<Vec<Rational>>,
    pub hyperplanes: Vec<usize>,
    pub mobius: i64,
}

impl LatticeElement {
    pub fn codim(&self) -> usize {
        self.basis.len()
    }
}

/// Elements ordered by (codimension, echelon key); element 0 is the ambient
/// space with μ = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionLattice {
    pub arrangement: Arrangement,
    pub elements: Vec<LatticeElement>,
}

impl IntersectionLattice {
    pub fn rank(&self) -> usize {
        self.elements.iter().map(LatticeElement::codim).max().unwrap_or(0)
    }

    /// Number of flats of each codimension.
    pub fn level_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank() + 1];
        for e in &self.elements {
            sizes[e.codim()] += 1;
        }
        sizes
    }

    pub fn to_json(&self) -> Value {
        json!({
            "arrangement": self.arrangement.to_json(),
            "level_sizes": self.level_sizes(),
            "elements": self.elements.iter().map(|e| json!({
                "codim": e.codim(),
                "basis": e.basis.iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "hyperplanes": e.hyperplanes,
                "mobius": e.mobius,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Reduces `v` against RREF rows; zero iff v lies in their span.
fn reduce(rows: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    let mut v = v.to_vec();
    for r in rows {
        let p = r.iter().position(|x| !x.is_zero()).expect("nonzero echelon row");
        if !v[p].is_zero() {
            let f = v[p].clone();
            for (a, b) in v.iter_mut().zip(r) {
                *a -= &f * b;
            }
        }
    }
    v
}

pub fn intersection_lattice(arr: impl Into<Arrangement>) -> IntersectionLattice {
    let arr: Arrangement = arr.into();
    let normals: Vec<Vec<Rational>> = arr.normals.iter().map(|v| to_q(v)).collect();
    let contained = |basis: &[Vec<Rational>]| -> Vec<usize> {
        (0..normals.len()).filter(|&k| reduce(basis, &normals[k]).iter().all(Zero::is_zero)).collect()
    };
    let mut levels: Vec<BTreeMap<Vec<Vec<Rational>>, Vec<usize>>> = vec![BTreeMap::from([(Vec::new(), Vec::new())])];
    loop {
        let mut next = BTreeMap::new();
        for (basis, hyps) in levels.last().expect("nonempty") {
            for (k, v) in normals.iter().enumerate() {
                if hyps.binary_search(&k).is_ok() {
                    continue;
                }
                let mut rows = basis.clone();
                rows.push(v.clone());
                let key = Matrix::from_rows(rows).expect("rectangular").rref_rows();
                if let std::collections::btree_map::Entry::Vacant(slot) = next.entry(key) {
                    let h = contained(slot.key());
                    slot.insert(h);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    let mut elements: Vec<LatticeElement> = levels
        .into_iter()
        .flat_map(|level| level.into_iter())
        .map(|(basis, hyperplanes)| LatticeElement { basis, hyperplanes, mobius: 0 })
        .collect();
    // μ(X) = −Σ_{Y < X} μ(Y); Y < X iff Y's hyperplanes are a proper subset
    for i in 0..elements.len() {
        if i == 0 {
            elements[0].mobius = 1;
            continue;
        }
        let mut sum = 0i64;
        for j in 0..i {
            if elements[j].codim() < elements[i].codim()
                && is_subset(&elements[j].hyperplanes, &elements[i].hyperplanes)
            {
                sum += elements[j].mobius;
            }
        }
        elements[i].mobius = -sum;
    }
    IntersectionLattice { arrangement: arr, elements }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The variable set `t` for Poincaré polynomials.
pub fn t_var() -> Vars {
    Vars::new(["t"])
}

/// π(t) = Σ_X μ(X) (−t)^{codim X}.
pub fn poincare_polynomial(lat: &IntersectionLattice) -> MultiPoly {
    let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
    for e in &lat.elements {
        let sign = if e.codim() % 2 == 0 { 1 } else { -1 };
        *coeffs.entry(e.codim()).or_default() += sign * e.mobius;
    }
    univariate(&coeffs.into_iter().map(|(d, c)| (d, BigInt::from(c))).collect::<Vec<_>>())
}

fn univariate(coeffs: &[(usize, BigInt)]) -> MultiPoly {
    Poly::from_terms(
        &t_var(),
        coeffs.iter().map(|(d, c)| (Monomial::new(vec![*d as u32]), Rational::from_integer(c.clone()))),
    )
}

/// Π (1 + b t) over the given b.
pub fn product_of_linear_factors(bs: &[u64]) -> MultiPoly {
    let t = t_var();
    bs.iter().fold(Poly::constant(&t, Rational::one()), |acc, &b| {
        &acc * &univariate(&[(0, BigInt::one()), (1, BigInt::from(b))]).with_vars(&t)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// p = Π (1 + b_i t), b ascending.
    Factors(Vec<u64>),
    /// Factors extracted before getting stuck, and the cofactor's
    /// coefficients (constant term first), which has no root −1/b with b a
    /// positive integer.
    NotFactorable { found: Vec<u64>, remainder: Vec<BigInt> },
}

impl Factorization {
    pub fn factors(&self) -> Option<&[u64]> {
        match self {
            Factorization::Factors(f) => Some(f),
            Factorization::NotFactorable { .. } => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Factorization::Factors(f) => json!({ "factorizable": true, "factors": f }),
            Factorization::NotFactorable { found, remainder } => json!({
                "factorizable": false,
                "factors_found": found,
                "remainder": remainder.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Splits p into factors 1 + b t with b positive integers by repeatedly
/// extracting roots −1/b, b ranging over the divisors of the leading
/// coefficient.
pub fn factorization_check(p: &MultiPoly) -> Result<Factorization> {
    if p.nvars() != 1 {
        return Err(Error::Input(format!("expected a univariate polynomial, got {} variables", p.nvars())));
    }
    let degree = p.total_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![BigInt::zero(); degree + 1];
    for (m, c) in p.terms() {
        if !c.is_integer() {
            return Err(Error::Input(format!("coefficient {} is not an integer", format_rational(c))));
        }
        coeffs[m.exponents()[0] as usize] = c.to_integer();
    }
    if !coeffs[0].is_one() {
        return Err(Error::Input("constant term must be 1".into()));
    }
    let mut found = Vec::new();
    'outer: while coeffs.len() > 1 {
        let lead = coeffs.last().expect("nonempty").abs();
        let lead = lead.to_u64().ok_or_else(|| Error::Unsupported("leading coefficient exceeds 64 bits".into()))?;
        for b in divisors(lead) {
            let bb = BigInt::from(b);
            // p(−1/b)·b^d = Σ a_k (−1)^k b^{d−k}
            let d = coeffs.len() - 1;
            let mut value = BigInt::zero();
            for (k, a) in coeffs.iter().enumerate() {
                let term = a * bb.pow((d - k) as u32);
                if k % 2 == 0 {
                    value += term;
                } else {
                    value -= term;
                }
            }
            if value.is_zero() {
                // divide by 1 + b t
                let mut q = Vec::with_capacity(d);
                let mut prev = BigInt::zero();
                for a in coeffs.iter().take(d) {
                    let next = a - &bb * &prev;
                    q.push(next.clone());
                    prev = next;
                }
                coeffs = q;
                found.push(b);
                continue 'outer;
            }
        }
        found.sort_unstable();
        return Ok(Factorization::NotFactorable { found, remainder: coeffs });
    }
    found.sort_unstable();
    Ok(Factorization::Factors(found))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};
    use crate::families::{bn_system, boolean, braid, instantiate, Family, FamilySpec};

    fn poly_t(coeffs: &[i64]) -> MultiPoly {
        univariate(&coeffs.iter().enumerate().map(|(d, &c)| (d, BigInt::from(c))).collect::<Vec<_>>())
    }

    #[test]
    fn boolean_lattice() {
        let lat = intersection_lattice(&boolean(3));
        assert_eq!(lat.elements.len(), 8);
        assert_eq!(poincare_polynomial(&lat), product_of_linear_factors(&[1, 1, 1]));
    }

    #[test]
    fn braid_three_is_a_pentagon() {
        let lat = intersection_lattice(&braid(3));
        assert_eq!(lat.level_sizes(), vec![1, 3, 1]);
        assert_eq!(lat.elements.last().unwrap().mobius, 2);
        assert_eq!(lat.elements[0].mobius, 1);
    }

    #[test]
    fn braid_four_poincare() {
        let lat = intersection_lattice(&braid(4));
        assert_eq!(poincare_polynomial(&lat), product_of_linear_factors(&[1, 2, 3]));
    }

    #[test]
    fn restricted_coxeter_b3_lattice() {
        let sys = bn_system(&[int(-1), int(1), int(1), int(3)]).unwrap();
        let p = poincare_polynomial(&intersection_lattice(&sys));
        assert_eq!(p, poly_t(&[1, 7, 15, 9]));
        assert_eq!(factorization_check(&p).unwrap(), Factorization::Factors(vec![1, 3, 3]));
    }

    #[test]
    fn f3_counterexample_does_not_factor() {
        let sys = instantiate(&FamilySpec::new(Family::F3).with("s", rat(-1, 2))).unwrap();
        let p = poincare_polynomial(&intersection_lattice(&sys));
        assert_eq!(p, poly_t(&[1, 10, 35, 26]));
        match factorization_check(&p).unwrap() {
            Factorization::NotFactorable { found, remainder } => {
                assert_eq!(found, vec![1]);
                assert_eq!(remainder, vec![BigInt::from(1), BigInt::from(9), BigInt::from(26)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn factorization_edge_cases() {
        assert_eq!(factorization_check(&poly_t(&[1])).unwrap(), Factorization::Factors(vec![]));
        assert!(factorization_check(&poly_t(&[2, 1])).is_err());
        assert!(factorization_check(&Poly::constant(&Vars::indexed("x", 1, 2), int(1))).is_err());
        let half = Poly::from_terms(&t_var(), [(Monomial::new(vec![0]), int(1)), (Monomial::new(vec![1]), rat(1, 2))]);
        assert!(factorization_check(&half).is_err());
        // 1 + 2t + 2t² has no real roots
        assert!(factorization_check(&poly_t(&[1, 2, 2])).unwrap().factors().is_none());
    }

    #[test]
    fn restriction_of_coordinate_and_b_arrangements() {
        let b = Arrangement::from(&boolean(3));
        let last = b.normals().iter().position(|v| v == &vec![0, 0, 1]).unwrap();
        assert_eq!(b.restrict(last).unwrap(), Arrangement::from(&boolean(2)));

        let b3 = Arrangement::from(&bn_system(&[int(1), int(1), int(1), int(1)]).unwrap());
        let b2 = Arrangement::from(&bn_system(&[int(1), int(1), int(1)]).unwrap());
        let e3 = b3.normals().iter().position(|v| v == &vec![0, 0, 1]).unwrap();
        assert_eq!(b3.restrict(e3).unwrap(), b2);
    }

    #[test]
    fn deletion_restriction_on_braid_four() {
        let arr = Arrangement::from(&braid(4));
        let t = Poly::var(&t_var(), 0);
        for h in 0..arr.len() {
            let whole = poincare_polynomial(&intersection_lattice(&arr));
            let del = poincare_polynomial(&intersection_lattice(arr.delete(h).unwrap()));
            let res = poincare_polynomial(&intersection_lattice(arr.restrict(h).unwrap()));
            assert_eq!(whole, &del + &(&t * &res));
        }
    }

    #[test]
    fn restrict_arrangement_marks_result() {
        let sys = braid(4);
        let r = restrict_arrangement(&sys, 0).unwrap();
        assert!(r.is_arrangement_only());
        assert_eq!(r.dimension(), 2);
        assert!(restrict_arrangement(&sys, 99).is_err());
    }

    #[test]
    fn divisors_are_sorted() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }
}
