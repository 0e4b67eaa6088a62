use num_traits::One;
use serde_json::{json, Value};

use super::PolyVectorField;
use crate::algebra::serial::poly_to_json;
use crate::algebra::Poly;
use crate::error::{Error, Result};
use crate::veesys::{canonical_form, CovectorSystem};
use crate::{MultiPoly, Rational};

/// The Euler field Σ x_i ∂_i.
pub fn euler_field(sys: &CovectorSystem) -> PolyVectorField {
    let vars = sys.vars();
    (0..sys.dimension()).map(|i| Poly::var(&vars, i)).collect()
}

/// G_A ψ, the covector field paired with ψ by the canonical form.
pub fn lower(sys: &CovectorSystem, psi: &[MultiPoly]) -> PolyVectorField {
    let g = canonical_form(sys);
    let vars = sys.vars();
    (0..sys.dimension())
        .map(|i| {
            let mut acc = Poly::zero(&vars);
            for (j, p) in psi.iter().enumerate() {
                acc.add_scaled(p, &g[(i, j)]);
            }
            acc
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SectionProperties {
    pub is_gradient: bool,
    pub potential: Option<MultiPoly>,
    pub is_logarithmic: bool,
    pub degree: Option<u32>,
}

impl SectionProperties {
    pub fn to_json(&self) -> Value {
        json!({
            "is_gradient": self.is_gradient,
            "potential": self.potential.as_ref().map(poly_to_json),
            "is_logarithmic": self.is_logarithmic,
            "degree": self.degree,
        })
    }
}

/// Relabels the components to the system's coordinates `x1..xn`.
pub(crate) fn in_system_vars(sys: &CovectorSystem, psi: &[MultiPoly]) -> Result<PolyVectorField> {
    let n = sys.dimension();
    if psi.len() != n {
        return Err(Error::Dimension(format!("field has {} components, system has dimension {n}", psi.len())));
    }
    if let Some(p) = psi.iter().find(|p| p.nvars() != n) {
        return Err(Error::Dimension(format!("component has {} variables, expected {n}", p.nvars())));
    }
    let vars = sys.vars();
    Ok(psi.iter().map(|p| p.with_vars(&vars)).collect())
}

/// v·X divisible by v·x for every direction v.
pub(crate) fn tangent_to_all(sys: &CovectorSystem, field: &[MultiPoly]) -> bool {
    sys.covectors().iter().all(|c| {
        let v = c.direction_q();
        let mut pairing = Poly::zero(&sys.vars());
        for (vi, p) in v.iter().zip(field) {
            pairing.add_scaled(p, vi);
        }
        pairing.divisible_by_linear(&v)
    })
}

/// Common degree of the nonzero components, if there is one.
pub(crate) fn field_degree(field: &[MultiPoly]) -> Option<u32> {
    let mut degree = None;
    for p in field.iter().filter(|p| !p.is_zero()) {
        let d = p.homogeneous_degree()?;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => return None,
            _ => {}
        }
    }
    degree
}

/// Integrates a closed polynomial 1-form ω: each homogeneous piece of
/// degree d contributes (1/(d+1)) Σ x_i ω_i.
fn integrate(omega: &[MultiPoly]) -> MultiPoly {
    let vars = omega[0].vars().clone();
    let mut f = Poly::zero(&vars);
    let max = omega.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    for d in 0..=max {
        let scale = Rational::one() / Rational::from_integer((d + 1).into());
        for (i, w) in omega.iter().enumerate() {
            let piece = w.homogeneous_component(d);
            if !piece.is_zero() {
                f.add_scaled(&(&Poly::var(&vars, i) * &piece), &scale);
            }
        }
    }
    f
}

pub fn section_properties(sys: &CovectorSystem, psi: &[MultiPoly]) -> Result<SectionProperties> {
    let psi = in_system_vars(sys, psi)?;
    let omega = lower(sys, &psi);
    let n = sys.dimension();
    let closed = (0..n).all(|i| (i + 1..n).all(|j| omega[i].derivative(j) == omega[j].derivative(i)));
    let potential = closed.then(|| integrate(&omega)).filter(|f| f.gradient() == omega);
    Ok(SectionProperties {
        is_gradient: potential.is_some(),
        potential,
        is_logarithmic: tangent_to_all(sys, &psi),
        degree: field_degree(&psi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::families::an_system;
    use crate::veesys::WeightedCovector;

    #[test]
    fn euler_field_properties() {
        let sys = an_system(&[int(1), int(2), int(3)]).unwrap();
        let props = section_properties(&sys, &euler_field(&sys)).unwrap();
        assert!(props.is_gradient && props.is_logarithmic);
        assert_eq!(props.degree, Some(1));
        let f = props.potential.unwrap();
        // F(x) = ½ xᵀ G_A x, so F(e1) = ½ G_11
        let g = canonical_form(&sys);
        assert_eq!(f.eval(&[int(1), int(0)]), g[(0, 0)].clone() / int(2));
    }

    #[test]
    fn constant_field_is_not_logarithmic() {
        let sys = CovectorSystem::new(1, vec![WeightedCovector::new(vec![1], int(1))]).unwrap();
        let vars = sys.vars();
        let d1 = vec![Poly::constant(&vars, Rational::one())];
        let props = section_properties(&sys, &d1).unwrap();
        assert!(!props.is_logarithmic);
        assert!(props.is_gradient);
    }
}
