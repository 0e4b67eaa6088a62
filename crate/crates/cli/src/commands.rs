use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use vee_core::algebra::serial::{field_from_json, matrix_to_json, poly_from_json, poly_to_json, vector_to_json};
use vee_core::arrangements::{
    factorization_check, intersection_lattice, poincare_polynomial, restrict_arrangement, saito_criterion,
    Factorization,
};
use vee_core::families::{instantiate, parse_params, FamilySpec};
use vee_core::flatsections::{
    flat_solve, harmonic_test, quasi_invariant_dim, section_properties, HarmonicResult, PolyVectorField,
};
use vee_core::potentials::{potential_set, PotentialFamily};
use vee_core::veesys::{canonical_form, dual_form, holonomy_check, irreducible_components, vee_check, CovectorSystem};
use vee_core::{Error, MultiPoly, Result};

use crate::report::Outcome;

/// A parsed system file together with its canonical serialization.
pub struct Input {
    pub system: CovectorSystem,
    pub canonical: String,
    pub notes: Vec<String>,
}

pub fn load_system(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let (system, notes) = CovectorSystem::from_json(&doc)?;
    let canonical = system.to_json().to_string();
    Ok(Input { system, canonical, notes })
}

fn with_notes(mut payload: Value, input: &Input) -> Value {
    if !input.notes.is_empty() {
        payload["input_notes"] = json!(input.notes);
    }
    payload
}

/// Folds a degenerate canonical form into a failing outcome; other errors
/// propagate.
fn degenerate_fails(result: Result<Outcome>) -> Result<Outcome> {
    match result {
        Err(Error::DegenerateForm { kernel }) => {
            Ok(Outcome::fail(json!({ "degenerate_form": true }), json!({ "kernel": kernel })))
        }
        other => other,
    }
}

pub fn check(input: &Input) -> Result<Outcome> {
    degenerate_fails((|| {
        let report = vee_check(&input.system)?;
        let doc = report.to_json(&input.system);
        let first_failure = doc["planes"].as_array().and_then(|ps| ps.iter().find(|p| p["passed"] == false)).cloned();
        Ok(Outcome::judged(
            report.is_vee_system,
            doc,
            || json!({ "plane": first_failure, "failures": report.failures }),
        ))
    })())
    .map(|o| Outcome { payload: with_notes(o.payload, input), ..o })
}

pub fn canonical(input: &Input) -> Result<Outcome> {
    let g = canonical_form(&input.system);
    let payload = json!({ "canonical_form": matrix_to_json(&g), "is_zero": g.is_zero() });
    Ok(Outcome::pass(with_notes(payload, input)))
}

pub fn dual(input: &Input) -> Result<Outcome> {
    degenerate_fails((|| {
        let gi = dual_form(&input.system)?;
        let duals: Vec<Value> = input
            .system
            .covectors()
            .iter()
            .map(|c| json!({ "direction": c.direction, "dual": vector_to_json(&gi.mul_vec(&c.direction_q())) }))
            .collect();
        Ok(Outcome::pass(json!({ "dual_form": matrix_to_json(&gi), "duals": duals })))
    })())
}

pub fn holonomy(input: &Input) -> Result<Outcome> {
    degenerate_fails((|| {
        let report = holonomy_check(&input.system)?;
        let doc = report.to_json(&input.system);
        let first = doc["failing_planes"].get(0).cloned();
        Ok(Outcome::judged(report.passes, doc, || json!({ "plane": first })))
    })())
}

pub fn components(input: &Input) -> Result<Outcome> {
    let comps = irreducible_components(&input.system);
    Ok(Outcome::pass(json!({
        "count": comps.len(),
        "components": comps.iter().map(CovectorSystem::to_json).collect::<Vec<_>>(),
    })))
}

pub fn flat(input: &Input, kappa: u32) -> Result<Outcome> {
    degenerate_fails((|| {
        let basis = flat_solve(&input.system, kappa)?;
        let mut doc = basis.to_json();
        let props = basis
            .sections
            .iter()
            .map(|s| section_properties(&input.system, s).map(|p| p.to_json()))
            .collect::<Result<Vec<_>>>()?;
        doc["properties"] = json!(props);
        Ok(Outcome::judged(basis.dim() > 0, doc, || json!({ "kappa": kappa, "dimension": 0 })))
    })())
}

fn quasi_table(res: &HarmonicResult) -> Value {
    let map: Map<String, Value> = res.quasi_invariants.iter().map(|(d, n)| (format!("deg{d}"), json!(n))).collect();
    Value::Object(map)
}

pub fn harmonic(input: &Input) -> Result<Outcome> {
    degenerate_fails((|| {
        let res = harmonic_test(&input.system)?;
        let mut doc = res.to_json();
        if !res.is_harmonic {
            let table = quasi_table(&res);
            return Ok(Outcome::fail(doc, json!({ "quasi_invariants": table, "solution_dimensions": res.dimensions })));
        }
        let cert = saito_criterion(&input.system, &res.sections)?;
        doc["freeness"] = cert.to_json();
        Ok(Outcome::judged(cert.valid, doc, || json!({ "freeness": "sections fail the determinant test" })))
    })())
}

pub fn quasi(input: &Input, degree: u32) -> Result<Outcome> {
    degenerate_fails((|| {
        let q = quasi_invariant_dim(&input.system, degree)?;
        Ok(Outcome::pass(json!({
            "degree": degree,
            "dimension": q.dim(),
            "basis": q.basis.iter().map(poly_to_json).collect::<Vec<_>>(),
        })))
    })())
}

pub fn potentials(family: &str, params: &str) -> Result<Outcome> {
    let family: PotentialFamily = family.parse()?;
    let (set, sys) = potential_set(family, &parse_params(params)?)?;
    let checks = set.verify(&sys)?;
    let mut doc = set.to_json();
    doc["epd_check"] = json!(checks);
    doc["system"] = sys.to_json();
    let failing = set.kappas().into_iter().zip(&checks).find(|(_, ok)| !**ok).map(|(k, _)| k);
    Ok(Outcome::judged(failing.is_none(), doc, || json!({ "kappa": failing })))
}

pub fn family(name: &str, params: &str) -> Result<(Outcome, String)> {
    let spec = FamilySpec::parse(name, params)?;
    let sys = instantiate(&spec)?;
    Ok((Outcome::pass(sys.to_json()), spec.label()))
}

pub fn poincare_coefficients(p: &MultiPoly) -> Vec<String> {
    let degree = p.total_degree().unwrap_or(0) as usize;
    let mut out = vec!["0".to_owned(); degree + 1];
    for (m, c) in p.terms() {
        out[m.exponents()[0] as usize] = c.to_string();
    }
    out
}

pub fn arr_lattice(input: &Input) -> Result<Outcome> {
    Ok(Outcome::pass(intersection_lattice(&input.system).to_json()))
}

pub fn arr_poincare(input: &Input) -> Result<Outcome> {
    let p = poincare_polynomial(&intersection_lattice(&input.system));
    Ok(Outcome::pass(json!({ "poincare": poly_to_json(&p), "coefficients": poincare_coefficients(&p) })))
}

pub fn arr_factor(input: &Input) -> Result<Outcome> {
    let p = poincare_polynomial(&intersection_lattice(&input.system));
    let f = factorization_check(&p)?;
    let mut doc = json!({ "coefficients": poincare_coefficients(&p), "factorization": f.to_json() });
    match f {
        Factorization::Factors(_) => Ok(Outcome::pass(doc)),
        Factorization::NotFactorable { found, remainder } => {
            doc["factorizable"] = json!(false);
            Ok(Outcome::fail(
                doc,
                json!({
                    "factors_found": found,
                    "remainder_without_integer_root": remainder.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            ))
        }
    }
}

pub fn arr_restrict(input: &Input, hyperplane: usize) -> Result<Outcome> {
    Ok(Outcome::pass(restrict_arrangement(&input.system, hyperplane)?.to_json()))
}

pub fn load_fields(path: &Path) -> Result<(Vec<PolyVectorField>, String)> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let list = doc
        .get("fields")
        .unwrap_or(&doc)
        .as_array()
        .ok_or_else(|| Error::Parse("expected a list of fields or {\"fields\": [...]}".into()))?;
    // A field is {"components": [...]} or a bare list of polynomials, the
    // shape `harmonic` prints under freeness.fields.
    let fields = list
        .iter()
        .map(|f| match f.as_array() {
            Some(comps) => comps.iter().map(poly_from_json).collect(),
            None => field_from_json(f),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((fields, doc.to_string()))
}

pub fn arr_saito(input: &Input, fields: &[PolyVectorField]) -> Result<Outcome> {
    let cert = saito_criterion(&input.system, fields)?;
    let doc = cert.to_json();
    Ok(Outcome::judged(cert.valid, doc, || {
        json!({
            "non_logarithmic": cert.logarithmic.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i).collect::<Vec<_>>(),
            "degree_sum": cert.degree_sum(),
            "hyperplanes": cert.hyperplanes,
            "det_is_constant_multiple_of_q": cert.det_is_multiple_of_q(),
        })
    }))
}
