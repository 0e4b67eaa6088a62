//! Weighted covector configurations.
//!
//! A covector α is stored as a primitive integer direction `v` together with
//! the rational weight `w` for which α⊗α = w·v⊗v. Every formula used by this
//! crate is quadratic in each covector, so square roots never appear; a
//! negative weight stands for a covector with purely imaginary scale.

mod check;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::serial::{rational_from_json, rational_to_json};
use crate::algebra::{primitive_integer_vector, Matrix, Poly, Vars};
use crate::error::{Error, Result};
use crate::{MultiPoly, RatMatrix, Rational};

pub use check::{
    canonical_form, dual_form, holonomy_check, irreducible_components, planes, rho, vee_check, vee_dual,
    well_distributed_check, HolonomyReport, Plane, PlaneKind, PlaneRecord, VeeReport, WellDistributed,
};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedCovector {
    pub direction: Vec<i64>,
    pub weight: Rational,
}

impl WeightedCovector {
    pub fn new(direction: Vec<i64>, weight: Rational) -> Self {
        WeightedCovector { direction, weight }
    }

    pub fn direction_q(&self) -> Vec<Rational> {
        self.direction.iter().map(|&d| Rational::from_integer(d.into())).collect()
    }

    /// The linear form `v·x`.
    pub fn linear_form(&self, vars: &Vars) -> MultiPoly {
        Poly::linear_form(vars, &self.direction_q())
    }
}

/// A finite set of pairwise non-collinear weighted covectors whose
/// directions span the dual space, kept sorted by direction.
#[derive(Clone, Debug, PartialEq)]
pub struct CovectorSystem {
    dimension: usize,
    covectors: Vec<WeightedCovector>,
    name: Option<String>,
    arrangement_only: bool,
}

impl CovectorSystem {
    /// Validates and sorts. Directions must already be primitive with a
    /// positive leading entry, and weights nonzero.
    pub fn new(dimension: usize, mut covectors: Vec<WeightedCovector>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidSystem("dimension must be positive".into()));
        }
        for c in &covectors {
            if c.direction.len() != dimension {
                return Err(Error::Dimension(format!(
                    "direction {:?} has length {}, expected {dimension}",
                    c.direction,
                    c.direction.len()
                )));
            }
            if !is_primitive(&c.direction) {
                return Err(Error::InvalidSystem(format!(
                    "direction {:?} is not primitive with positive leading entry",
                    c.direction
                )));
            }
            if c.weight.is_zero() {
                return Err(Error::InvalidSystem(format!("direction {:?} has zero weight", c.direction)));
            }
        }
        covectors.sort_by(|a, b| a.direction.cmp(&b.direction));
        if let Some(w) = covectors.windows(2).find(|w| w[0].direction == w[1].direction) {
            return Err(Error::InvalidSystem(format!("direction {:?} appears twice", w[0].direction)));
        }
        let sys = CovectorSystem { dimension, covectors, name: None, arrangement_only: false };
        let rank = sys.direction_matrix().rank();
        if rank < dimension {
            return Err(Error::InvalidSystem(format!(
                "directions span a {rank}-dimensional subspace of a {dimension}-dimensional space"
            )));
        }
        Ok(sys)
    }

    /// Builds a system from arbitrary nonzero rational vectors, rescaling
    /// each to a primitive integer direction and the weight by the square of
    /// the scale. Zero weights are dropped; their directions are returned.
    pub fn from_vectors(dimension: usize, items: Vec<(Vec<Rational>, Rational)>) -> Result<(Self, Vec<Vec<i64>>)> {
        let mut covectors = Vec::new();
        let mut dropped = Vec::new();
        for (v, w) in items {
            let (direction, factor) = primitive_i64(&v)?;
            if w.is_zero() {
                dropped.push(direction);
                continue;
            }
            covectors.push(WeightedCovector { direction, weight: w * &factor * &factor });
        }
        Ok((CovectorSystem::new(dimension, covectors)?, dropped))
    }

    /// Unit-weight system for arrangement computations; refused by the
    /// ∨-checks.
    pub fn arrangement(dimension: usize, directions: Vec<Vec<i64>>) -> Result<Self> {
        let covectors = directions
            .into_iter()
            .map(|d| WeightedCovector { direction: d, weight: Rational::from_integer(1.into()) })
            .collect();
        let mut sys = CovectorSystem::new(dimension, covectors)?;
        sys.arrangement_only = true;
        Ok(sys)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn covectors(&self) -> &[WeightedCovector] {
        &self.covectors
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_arrangement_only(&self) -> bool {
        self.arrangement_only
    }

    pub fn directions(&self) -> Vec<Vec<i64>> {
        self.covectors.iter().map(|c| c.direction.clone()).collect()
    }

    /// The |A|×n matrix whose rows are the directions.
    pub fn direction_matrix(&self) -> RatMatrix {
        Matrix::from_rows(self.covectors.iter().map(|c| c.direction_q()).collect())
            .unwrap_or_else(|_| Matrix::zeros(0, self.dimension))
    }

    /// Coordinates `x1..xn`.
    pub fn vars(&self) -> Vars {
        Vars::indexed("x", 1, self.dimension)
    }

    /// Product of the linear forms `v·x`, one per direction.
    pub fn defining_polynomial(&self) -> MultiPoly {
        let vars = self.vars();
        self.covectors
            .iter()
            .fold(Poly::constant(&vars, Rational::from_integer(1.into())), |acc, c| &acc * &c.linear_form(&vars))
    }

    /// Same directions, all weights multiplied by `factor`.
    pub fn rescaled(&self, factor: &Rational) -> Result<Self> {
        if factor.is_zero() {
            return Err(Error::Parameter("rescaling factor must be nonzero".into()));
        }
        let mut out = self.clone();
        for c in out.covectors.iter_mut() {
            c.weight *= factor;
        }
        Ok(out)
    }

    /// Same system with one weight replaced.
    pub fn reweighted(&self, index: usize, weight: Rational) -> Result<Self> {
        if index >= self.len() {
            return Err(Error::Input(format!("covector index {index} out of range")));
        }
        if weight.is_zero() {
            return Err(Error::InvalidSystem("zero weight".into()));
        }
        let mut out = self.clone();
        out.covectors[index].weight = weight;
        Ok(out)
    }

    /// Index of the covector with the given direction, if present.
    pub fn position(&self, direction: &[i64]) -> Option<usize> {
        self.covectors.iter().position(|c| c.direction == direction)
    }

    pub fn to_json(&self) -> Value {
        let mut doc = json!({
            "dimension": self.dimension,
            "covectors": self.covectors.iter().map(|c| json!({
                "direction": c.direction,
                "weight": rational_to_json(&c.weight),
            })).collect::<Vec<_>>(),
        });
        if let Some(name) = &self.name {
            doc["name"] = json!(name);
        }
        if self.arrangement_only {
            doc["arrangement_only"] = json!(true);
        }
        doc
    }

    /// Parses the JSON form, flipping signs of directions whose leading entry
    /// is negative. Returns the system and a note per normalization applied.
    pub fn from_json(doc: &Value) -> Result<(Self, Vec<String>)> {
        let dimension =
            doc.get("dimension")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse("missing positive integer \"dimension\"".into()))? as usize;
        let entries = doc
            .get("covectors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"covectors\" array".into()))?;
        let mut notes = Vec::new();
        let mut covectors = Vec::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            let direction: Vec<i64> = e
                .get("direction")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("covector {i}: missing \"direction\"")))?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse(format!("covector {i}: non-integer entry {x}"))))
                .collect::<Result<_>>()?;
            let weight = match e.get("weight") {
                Some(w) => rational_from_json(w)?,
                None => return Err(Error::Parse(format!("covector {i}: missing \"weight\""))),
            };
            let mut direction = direction;
            if direction.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                notes.push(format!("covector {i}: direction {direction:?} negated"));
                direction.iter_mut().for_each(|x| *x = -*x);
            }
            covectors.push(WeightedCovector { direction, weight });
        }
        if covectors.windows(2).any(|w| w[0].direction > w[1].direction) {
            notes.push("covectors re-sorted by direction".into());
        }
        let mut sys = CovectorSystem::new(dimension, covectors)?;
        sys.name = doc.get("name").and_then(Value::as_str).map(str::to_owned);
        sys.arrangement_only = doc.get("arrangement_only").and_then(Value::as_bool).unwrap_or(false);
        Ok((sys, notes))
    }
}

fn is_primitive(v: &[i64]) -> bool {
    let Some(&lead) = v.iter().find(|&&x| x != 0) else { return false };
    lead > 0 && v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x)) == 1
}

/// Primitive integer direction of a nonzero rational vector together with
/// the factor `f` such that `v = f·direction`.
pub fn primitive_i64(v: &[Rational]) -> Result<(Vec<i64>, Rational)> {
    let (ints, factor) = primitive_integer_vector(v).ok_or_else(|| Error::InvalidSystem("zero direction".into()))?;
    let direction = ints
        .iter()
        .map(|x: &BigInt| x.to_i64().ok_or_else(|| Error::Unsupported(format!("direction entry {x} exceeds 64 bits"))))
        .collect::<Result<Vec<_>>>()?;
    Ok((direction, factor.abs()))
}

/// Distinct directions in canonical order; helper for set comparisons.
pub fn direction_set(sys: &CovectorSystem) -> BTreeSet<Vec<i64>> {
    sys.covectors.iter().map(|c| c.direction.clone()).collect()
}
