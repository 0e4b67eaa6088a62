use num_traits::Zero;
use serde_json::{json, Value};

use super::Arrangement;
use crate::algebra::scalar::format_rational;
use crate::algebra::serial::poly_to_json;
use crate::algebra::{poly_determinant, Poly, Vars};
use crate::error::{Error, Result};
use crate::flatsections::PolyVectorField;
use crate::{MultiPoly, Rational};

fn checked_field(arr: &Arrangement, field: &[MultiPoly], vars: &Vars) -> Result<PolyVectorField> {
    let n = arr.dimension();
    if field.len() != n {
        return Err(Error::Input(format!("field has {} components, arrangement has dimension {n}", field.len())));
    }
    if let Some(p) = field.iter().find(|p| p.nvars() != n) {
        return Err(Error::Input(format!("component has {} variables, expected {n}", p.nvars())));
    }
    Ok(field.iter().map(|p| p.with_vars(vars)).collect())
}

fn tangent(arr: &Arrangement, field: &[MultiPoly], vars: &Vars) -> bool {
    arr.normals().iter().all(|v| {
        let v: Vec<Rational> = v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        let mut pairing = Poly::zero(vars);
        for (vi, p) in v.iter().zip(field) {
            pairing.add_scaled(p, vi);
        }
        pairing.divisible_by_linear(&v)
    })
}

/// v·X divisible by v·x for every normal v.
pub fn is_logarithmic(arr: impl Into<Arrangement>, field: &[MultiPoly]) -> Result<bool> {
    let arr: Arrangement = arr.into();
    let vars = Vars::indexed("x", 1, arr.dimension());
    let field = checked_field(&arr, field, &vars)?;
    Ok(tangent(&arr, &field, &vars))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FreenessCertificate {
    pub fields: Vec<PolyVectorField>,
    pub degrees: Vec<u32>,
    pub logarithmic: Vec<bool>,
    pub hyperplanes: usize,
    /// c with det = c·Q; zero when det is not a multiple of Q.
    pub det_ratio: Rational,
    pub valid: bool,
}

impl FreenessCertificate {
    /// Whether det = c·Q with c ≠ 0.
    pub fn det_is_multiple_of_q(&self) -> bool {
        !self.det_ratio.is_zero()
    }

    pub fn degree_sum(&self) -> u32 {
        self.degrees.iter().sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.valid,
            "degrees": self.degrees,
            "degree_sum": self.degree_sum(),
            "hyperplanes": self.hyperplanes,
            "logarithmic": self.logarithmic,
            "det_ratio": format_rational(&self.det_ratio),
            "fields": self.fields.iter().map(|f| f.iter().map(poly_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Saito's criterion: n logarithmic fields whose degrees sum to |A| and
/// whose component determinant is a nonzero constant multiple of Q.
pub fn saito_criterion(arr: impl Into<Arrangement>, fields: &[PolyVectorField]) -> Result<FreenessCertificate> {
    let arr: Arrangement = arr.into();
    let n = arr.dimension();
    if fields.len() != n {
        return Err(Error::Input(format!("need {n} fields, got {}", fields.len())));
    }
    let vars = Vars::indexed("x", 1, n);
    let fields: Vec<PolyVectorField> = fields.iter().map(|f| checked_field(&arr, f, &vars)).collect::<Result<_>>()?;
    let mut degrees = Vec::with_capacity(n);
    for (k, f) in fields.iter().enumerate() {
        match field_degree(f) {
            Some(d) => degrees.push(d),
            None => return Err(Error::Input(format!("field {k} is zero or not homogeneous"))),
        }
    }
    let logarithmic: Vec<bool> = fields.iter().map(|f| tangent(&arr, f, &vars)).collect();
    let det = poly_determinant(&fields);
    let q = arr.defining_polynomial();
    let det_ratio = match (det.leading_term(), q.leading_term()) {
        (Some((md, cd)), Some((mq, cq))) if md == mq => {
            let c = cd / cq;
            if det == q.scale(&c) {
                c
            } else {
                Rational::zero()
            }
        }
        _ => Rational::zero(),
    };
    let degree_sum: u32 = degrees.iter().sum();
    let valid = logarithmic.iter().all(|&b| b) && degree_sum as usize == arr.len() && !det_ratio.is_zero();
    Ok(FreenessCertificate { fields, degrees, logarithmic, hyperplanes: arr.len(), det_ratio, valid })
}

/// Common degree of the nonzero components.
fn field_degree(field: &[MultiPoly]) -> Option<u32> {
    let mut degree = None;
    for p in field.iter().filter(|p| !p.is_zero()) {
        let d = p.homogeneous_degree()?;
        if degree.is_some_and(|e| e != d) {
            return None;
        }
        degree = Some(d);
    }
    degree
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;
    use crate::algebra::Monomial;
    use crate::families::{an_system, bn_system, boolean, braid};
    use crate::flatsections::{euler_field, harmonic_test};

    fn mono(vars: &Vars, e: &[u32]) -> MultiPoly {
        Poly::monomial(vars, Monomial::new(e.to_vec()), int(1))
    }

    #[test]
    fn euler_and_constant_fields() {
        let sys = braid(4);
        assert!(is_logarithmic(&sys, &euler_field(&sys)).unwrap());
        let b1 = boolean(1);
        let d1 = vec![Poly::constant(&b1.vars(), int(1))];
        assert!(!is_logarithmic(&b1, &d1).unwrap());
        assert!(is_logarithmic(&b1, &[]).is_err());
    }

    #[test]
    fn restricted_d5_basis() {
        // x3(x1² − x2²)(x1² − x3²)(x2² − x3²) with X1 = E, X2 = Σ x_i³ ∂_i, X3 = x1x2x3² Σ x_i⁻¹ ∂_i
        let arr = Arrangement::new(
            3,
            vec![
                vec![0, 0, 1],
                vec![1, 1, 0],
                vec![1, -1, 0],
                vec![1, 0, 1],
                vec![1, 0, -1],
                vec![0, 1, 1],
                vec![0, 1, -1],
            ],
        )
        .unwrap();
        let v = Vars::indexed("x", 1, 3);
        let x1 = vec![mono(&v, &[1, 0, 0]), mono(&v, &[0, 1, 0]), mono(&v, &[0, 0, 1])];
        let x2 = vec![mono(&v, &[3, 0, 0]), mono(&v, &[0, 3, 0]), mono(&v, &[0, 0, 3])];
        let x3 = vec![mono(&v, &[0, 1, 2]), mono(&v, &[1, 0, 2]), mono(&v, &[1, 1, 1])];
        assert!(is_logarithmic(&arr, &x3).unwrap());
        let cert = saito_criterion(&arr, &[x1, x2, x3]).unwrap();
        assert!(cert.valid, "{cert:?}");
        assert_eq!(cert.degrees, vec![1, 3, 3]);
    }

    #[test]
    fn harmonic_sections_certify_freeness() {
        let sys = an_system(&[int(1), int(1), int(1), int(1)]).unwrap();
        let res = harmonic_test(&sys).unwrap();
        let cert = saito_criterion(&sys, &res.sections).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.degree_sum(), 6);
    }

    #[test]
    fn repeated_euler_field_is_singular() {
        let sys = bn_system(&[int(1), int(1), int(2)]).unwrap();
        let e = euler_field(&sys);
        let cert = saito_criterion(&sys, &[e.clone(), e]).unwrap();
        assert!(!cert.valid);
        assert!(cert.det_ratio.is_zero());
        assert!(saito_criterion(&sys, &[euler_field(&sys)]).is_err());
    }
}
