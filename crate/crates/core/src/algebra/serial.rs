//! JSON encodings. Rationals travel as strings `"p/q"` (or `"p"`),
//! polynomials as `{variables, terms: [{exponents, coeff}]}` with terms in
//! descending graded-lex order.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::matrix::Matrix;
use super::poly::{Monomial, Poly, Vars};
use super::scalar::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// `#[serde(with = "rational_str")]` for `Rational` fields.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let v = Value::deserialize(d)?;
        rational_from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "rational_vec")]` for `Vec<Rational>` fields.
pub mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let values = Vec::<Value>::deserialize(d)?;
        values.iter().map(rational_from_json).collect::<Result<_>>().map_err(serde::de::Error::custom)
    }
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts `"p/q"` strings and JSON integers. Floats are rejected.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("expected rational string, found {other}"))),
    }
}

pub fn vector_to_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_json).collect())
}

pub fn matrix_to_json(m: &Matrix<Rational>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Matrix<Rational>> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| Error::Parse("matrix row must be an array".into()))?
                .iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    exponents: Vec<u32>,
    #[serde(with = "rational_str")]
    coeff: Rational,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    variables: Vec<String>,
    terms: Vec<TermJson>,
}

pub fn poly_to_json(p: &Poly<Rational>) -> Value {
    let doc = PolyJson {
        variables: p.vars().names().to_vec(),
        terms: p.terms().rev().map(|(m, c)| TermJson { exponents: m.exponents().to_vec(), coeff: c.clone() }).collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn poly_from_json(v: &Value) -> Result<Poly<Rational>> {
    let doc: PolyJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let vars = Vars::new(doc.variables);
    let mut p = Poly::zero(&vars);
    for t in doc.terms {
        if t.exponents.len() != vars.len() {
            return Err(Error::Parse(format!("term has {} exponents for {} variables", t.exponents.len(), vars.len())));
        }
        p.add_term(Monomial::new(t.exponents), t.coeff);
    }
    Ok(p)
}

/// A vector field as `{"components": [poly, ...]}`.
pub fn field_to_json(components: &[Poly<Rational>]) -> Value {
    serde_json::json!({ "components": components.iter().map(poly_to_json).collect::<Vec<_>>() })
}

pub fn field_from_json(v: &Value) -> Result<Vec<Poly<Rational>>> {
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("vector field needs a \"components\" array".into()))?;
    let polys = comps.iter().map(poly_from_json).collect::<Result<Vec<_>>>()?;
    if let Some(first) = polys.first() {
        if polys.iter().any(|p| p.vars() != first.vars()) {
            return Err(Error::Parse("vector field components use different variables".into()));
        }
    }
    Ok(polys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat};

    #[test]
    fn rationals_round_trip_as_strings() {
        assert_eq!(rational_to_json(&rat(-3, 6)), Value::String("-1/2".into()));
        assert_eq!(rational_to_json(&int(4)), Value::String("4".into()));
        assert_eq!(rational_from_json(&Value::String("6/4".into())).unwrap(), rat(3, 2));
        assert_eq!(rational_from_json(&serde_json::json!(7)).unwrap(), int(7));
        assert!(rational_from_json(&serde_json::json!(0.5)).is_err());
    }

    #[test]
    fn polynomial_terms_descend() {
        let vars = Vars::indexed("x", 1, 2);
        let x = Poly::<Rational>::var(&vars, 0);
        let y = Poly::var(&vars, 1);
        let p = &(&x * &x) + &(&y.scale(&rat(1, 2)) + &Poly::constant(&vars, int(3)));
        let j = poly_to_json(&p);
        let exps: Vec<Vec<u32>> = j["terms"]
            .as_array()
            .unwrap()
            .iter()
            .map(|t| serde_json::from_value(t["exponents"].clone()).unwrap())
            .collect();
        assert_eq!(exps, vec![vec![2, 0], vec![0, 1], vec![0, 0]]);
        assert_eq!(poly_from_json(&j).unwrap(), p);
    }
}
