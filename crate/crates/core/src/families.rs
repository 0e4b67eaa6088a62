//! Named ∨-systems with rational parameters.
//!
//! Squared scales are used as weights throughout, so a family whose scales
//! involve `t` only through `t²` takes `s = t²`. Covectors whose weight
//! vanishes at the chosen parameters are dropped and listed in the name.
//!
//! A_n(c) and braid(n) live on the hyperplane Σx = 0 of an (n+1)-space; they
//! are emitted in the chart `y_i = x_i − x_0`, where `e_i − e_j ↦ y_i − y_j`
//! and `e_i − e_0 ↦ y_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::scalar::rational_to_i64;
use crate::algebra::{format_rational, parse_rational};
use crate::error::{Error, Result};
use crate::veesys::CovectorSystem;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    An,
    Bn,
    F4,
    F3,
    G3,
    D3,
    Ab4,
    Ab4A1First,
    Ab4A1Second,
    DihedralB2,
    Boolean,
    Braid,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::An,
        Family::Bn,
        Family::F4,
        Family::F3,
        Family::G3,
        Family::D3,
        Family::Ab4,
        Family::Ab4A1First,
        Family::Ab4A1Second,
        Family::DihedralB2,
        Family::Boolean,
        Family::Braid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::An => "an",
            Family::Bn => "bn",
            Family::F4 => "f4",
            Family::F3 => "f3",
            Family::G3 => "g3",
            Family::D3 => "d3",
            Family::Ab4 => "ab4",
            Family::Ab4A1First => "ab4_a1_1",
            Family::Ab4A1Second => "ab4_a1_2",
            Family::DihedralB2 => "dihedral_b2",
            Family::Boolean => "boolean",
            Family::Braid => "braid",
        }
    }

    /// Parameter names the family reads; `c` stands for `c0..cn`.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Family::An | Family::Bn => &["c"],
            Family::F4 | Family::F3 | Family::Ab4A1First | Family::Ab4A1Second => &["s"],
            Family::G3 => &["t"],
            Family::D3 => &["t", "s"],
            Family::Ab4 => &["k"],
            Family::DihedralB2 => &["a2", "b2"],
            Family::Boolean | Family::Braid => &["n"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        if let Some(f) = Family::ALL.iter().find(|f| f.name() == key) {
            return Ok(*f);
        }
        match key.as_str() {
            "h3" | "h4" | "i2" | "dihedral" => Err(Error::Unsupported(format!(
                "{s}: irrational coordinates unsupported (only the B2 dihedral instance is rational)"
            ))),
            _ => Err(Error::Input(format!(
                "unknown family {s:?}; expected one of {}",
                Family::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}

/// A family with its named rational parameters. The list `c0..cn` is stored
/// under keys `c0`, `c1`, ….
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub params: BTreeMap<String, Rational>,
}

impl FamilySpec {
    pub fn new(family: Family) -> Self {
        FamilySpec { family, params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: Rational) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    /// Sets `c0..cn`.
    pub fn with_c(mut self, c: &[Rational]) -> Self {
        self.params.retain(|k, _| !is_c_key(k));
        for (i, v) in c.iter().enumerate() {
            self.params.insert(format!("c{i}"), v.clone());
        }
        self
    }

    /// Parses `key=value` pairs separated by commas. `c=a:b:c` is shorthand
    /// for `c0=a,c1=b,c2=c`.
    pub fn parse(family: &str, params: &str) -> Result<Self> {
        let spec = FamilySpec { family: family.parse()?, params: parse_params(params)? };
        for key in spec.params.keys() {
            let known = spec.family.parameters().iter().any(|p| *p == key || (*p == "c" && is_c_key(key)));
            if !known {
                return Err(Error::Parameter(format!("family {} has no parameter {key:?}", spec.family)));
            }
        }
        Ok(spec)
    }

    pub fn get(&self, key: &str) -> Result<&Rational> {
        self.params.get(key).ok_or_else(|| Error::Parameter(format!("family {} needs parameter {key}", self.family)))
    }

    /// `c0..cn` in order; errors if absent or not contiguous.
    pub fn c(&self) -> Result<Vec<Rational>> {
        let count = self.params.keys().filter(|k| is_c_key(k)).count();
        if count < 2 {
            return Err(Error::Parameter(format!("family {} needs c0..cn with n ≥ 1", self.family)));
        }
        (0..count).map(|i| self.get(&format!("c{i}")).cloned()).collect()
    }

    fn count(&self, key: &str, min: i64) -> Result<usize> {
        let v = self.get(key)?;
        match rational_to_i64(v) {
            Some(n) if n >= min => Ok(n as usize),
            _ => Err(Error::Parameter(format!("{key} must be an integer ≥ {min}, got {}", format_rational(v)))),
        }
    }

    /// Human-readable label such as `bn(c=-1:1:1:3)`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        let c: Vec<String> = self
            .params
            .iter()
            .filter(|(k, _)| is_c_key(k))
            .map(|(k, v)| (k[1..].parse::<usize>().unwrap_or(0), format_rational(v)))
            .collect::<BTreeMap<_, _>>()
            .into_values()
            .collect();
        if !c.is_empty() {
            parts.push(format!("c={}", c.join(":")));
        }
        for (k, v) in self.params.iter().filter(|(k, _)| !is_c_key(k)) {
            parts.push(format!("{k}={}", format_rational(v)));
        }
        format!("{}({})", self.family, parts.join(","))
    }
}

fn is_c_key(k: &str) -> bool {
    k.len() > 1 && k.starts_with('c') && k[1..].chars().all(|ch| ch.is_ascii_digit())
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

fn vector(entries: &[i64]) -> Vec<Rational> {
    entries.iter().map(|&x| q(x)).collect()
}

/// `e_i + sign·e_j`.
fn pair(n: usize, i: usize, j: usize, sign: i64) -> Vec<Rational> {
    let mut v = unit(n, i);
    v[j] = q(sign);
    v
}

fn forbid(cond: bool, message: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Err(Error::Parameter(message()))
    } else {
        Ok(())
    }
}

/// Parses `key=value` pairs separated by commas into a parameter map.
/// `c=a:b:c` expands to `c0=a,c1=b,c2=c`.
pub fn parse_params(params: &str) -> Result<BTreeMap<String, Rational>> {
    let mut out = BTreeMap::new();
    for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) =
            item.split_once('=').ok_or_else(|| Error::Parse(format!("parameter {item:?} is not key=value")))?;
        let key = key.trim();
        if key == "c" {
            out.retain(|k: &String, _| !is_c_key(k));
            for (i, v) in value.split(':').enumerate() {
                out.insert(format!("c{i}"), parse_rational(v.trim())?);
            }
        } else {
            out.insert(key.to_owned(), parse_rational(value.trim())?);
        }
    }
    Ok(out)
}

pub fn instantiate(spec: &FamilySpec) -> Result<CovectorSystem> {
    let (dim, items) = match spec.family {
        Family::An => an(&spec.c()?)?,
        Family::Bn => bn(&spec.c()?)?,
        Family::F4 => f4(spec.get("s")?),
        Family::F3 => f3(spec.get("s")?),
        Family::G3 => g3(spec.get("t")?)?,
        Family::D3 => d3(spec.get("t")?, spec.get("s")?)?,
        Family::Ab4 => ab4(spec.get("k")?)?,
        Family::Ab4A1First => ab4_a1_first(spec.get("s")?)?,
        Family::Ab4A1Second => ab4_a1_second(spec.get("s")?)?,
        Family::DihedralB2 => dihedral_b2(spec.get("a2")?, spec.get("b2")?)?,
        Family::Boolean => {
            let n = spec.count("n", 1)?;
            (n, (0..n).map(|i| (unit(n, i), q(1))).collect())
        }
        Family::Braid => {
            let n = spec.count("n", 2)?;
            an(&vec![q(1); n])?
        }
    };
    let (sys, dropped) = CovectorSystem::from_vectors(dim, items).map_err(|e| match e {
        Error::InvalidSystem(msg) => Error::Parameter(format!("{}: {msg}", spec.label())),
        other => other,
    })?;
    let mut name = spec.label();
    if !dropped.is_empty() {
        let dirs: Vec<String> = dropped.iter().map(|d| format!("{d:?}")).collect();
        name.push_str(&format!(" [zero weight dropped: {}]", dirs.join(" ")));
    }
    Ok(sys.with_name(name))
}

type Items = (usize, Vec<(Vec<Rational>, Rational)>);

fn check_c(c: &[Rational], from: usize) -> Result<Rational> {
    for (i, ci) in c.iter().enumerate().skip(from) {
        forbid(ci.is_zero(), || format!("c{i} = 0: all c_i are assumed to be non-zero"))?;
    }
    let sigma: Rational = c.iter().sum();
    forbid(sigma.is_zero(), || "degenerate canonical form: σ = c0 + … + cn = 0".into())?;
    Ok(sigma)
}

fn an(c: &[Rational]) -> Result<Items> {
    check_c(c, 0)?;
    let n = c.len() - 1;
    let mut items = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            items.push((pair(n, i - 1, j - 1, -1), &c[i] * &c[j]));
        }
    }
    for i in 1..=n {
        items.push((unit(n, i - 1), &c[0] * &c[i]));
    }
    Ok((n, items))
}

fn bn(c: &[Rational]) -> Result<Items> {
    check_c(c, 1)?;
    let n = c.len() - 1;
    let mut items = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for sign in [1, -1] {
                items.push((pair(n, i - 1, j - 1, sign), &c[i] * &c[j]));
            }
        }
    }
    for i in 1..=n {
        items.push((unit(n, i - 1), q(2) * &c[i] * (&c[i] + &c[0])));
    }
    Ok((n, items))
}

/// `(1, ±1, …, ±1)` in dimension n.
fn sign_vectors(n: usize) -> Vec<Vec<Rational>> {
    (0..1usize << (n - 1))
        .map(|mask| {
            let mut v = vec![q(1)];
            for k in 0..n - 1 {
                v.push(q(if mask >> k & 1 == 0 { 1 } else { -1 }));
            }
            v
        })
        .collect()
}

fn roots_d(n: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(pair(n, i, j, 1));
            out.push(pair(n, i, j, -1));
        }
    }
    out
}

fn f4(s: &Rational) -> Items {
    let mut items: Vec<_> = roots_d(4).into_iter().map(|v| (v, q(1))).collect();
    items.extend((0..4).map(|i| (unit(4, i), q(2) * s)));
    items.extend(sign_vectors(4).into_iter().map(|v| (v, s / q(2))));
    (4, items)
}

fn f3(s: &Rational) -> Items {
    let a = q(4) * s + q(2);
    let mut items: Vec<_> = roots_d(3).into_iter().map(|v| (v, q(1))).collect();
    items.extend((0..3).map(|i| (unit(3, i), a.clone())));
    items.extend(sign_vectors(3).into_iter().map(|v| (v, q(2) * s)));
    (3, items)
}

fn g3(t: &Rational) -> Result<Items> {
    forbid(t.is_zero() || *t == r(-1, 2), || format!("G3 requires t ≠ 0, −1/2 (got t = {})", format_rational(t)))?;
    let a = q(2) * t + q(1);
    let b = (q(2) * t - q(1)) / q(3);
    let c = q(3) / t;
    let mut items = vec![
        (vector(&[1, 0, 0]), a.clone()),
        (vector(&[0, 1, 0]), a.clone()),
        (vector(&[1, 1, 0]), a),
        (vector(&[1, -1, 0]), b.clone()),
        (vector(&[2, 1, 0]), b.clone()),
        (vector(&[1, 2, 0]), b),
        (vector(&[0, 0, 1]), c),
    ];
    for d in [[1, 0, 1], [1, 0, -1], [0, 1, 1], [0, 1, -1], [1, 1, 1], [1, 1, -1]] {
        items.push((vector(&d), q(1)));
    }
    Ok((3, items))
}

fn d3(t: &Rational, s: &Rational) -> Result<Items> {
    forbid(t.is_zero() || s.is_zero() || (s + t + q(1)).is_zero(), || {
        format!("D3 requires s, t ≠ 0 and s + t + 1 ≠ 0 (got t = {}, s = {})", format_rational(t), format_rational(s))
    })?;
    let mut items: Vec<_> = sign_vectors(3).into_iter().map(|v| (v, q(1))).collect();
    items.push((unit(3, 0), q(2) * (s + t - q(1))));
    items.push((unit(3, 1), q(2) * (s - t + q(1)) / t));
    items.push((unit(3, 2), q(2) * (t - s + q(1)) / s));
    Ok((3, items))
}

fn ab4(k: &Rational) -> Result<Items> {
    forbid(k.is_zero() || *k == r(-1, 3), || format!("AB4 requires k ≠ 0, −1/3 (got k = {})", format_rational(k)))?;
    let a = (q(3) * k + q(1)) / q(2);
    let b = (q(3) * k - q(1)) / q(4);
    let c = (q(1) - k) / (q(2) * k);
    let mut items: Vec<_> = (0..3).map(|i| (unit(4, i), a.clone())).collect();
    for v in roots_d(3) {
        let mut w = v;
        w.push(q(0));
        items.push((w, b.clone()));
    }
    items.push((unit(4, 3), c));
    // (e1 ± e2 ± e3 ± e4)/2 with squared scale 1/4
    items.extend(sign_vectors(4).into_iter().map(|v| (v, r(1, 4))));
    Ok((4, items))
}

fn ab4_a1_first(s: &Rational) -> Result<Items> {
    forbid(*s == q(-1) || *s == r(-1, 2), || {
        format!("(AB4,A1)_1 requires t² ≠ −1, −1/2 (got s = {})", format_rational(s))
    })?;
    let mut items = vec![
        (vector(&[1, 0, 0]), q(2) * (q(2) * s + q(1))),
        (vector(&[0, 1, 0]), q(8) * (s + q(1))),
        (vector(&[0, 0, 1]), q(2) * s * (q(2) * s - q(1)) / (s + q(1))),
        (vector(&[1, 1, 0]), q(2)),
        (vector(&[1, -1, 0]), q(2)),
        (vector(&[1, 0, 1]), q(2) * s),
        (vector(&[1, 0, -1]), q(2) * s),
    ];
    for (a, b) in [(2, 1), (2, -1), (-2, 1), (-2, -1)] {
        items.push((vector(&[1, a, b]), s.clone()));
    }
    Ok((3, items))
}

fn ab4_a1_second(s: &Rational) -> Result<Items> {
    forbid(*s == q(-1) || *s == r(-1, 2) || *s == r(-1, 4), || {
        format!("(AB4,A1)_2 requires t² ≠ −1, −1/2, −1/4 (got s = {})", format_rational(s))
    })?;
    let mut items = vec![
        (vector(&[1, 1, 0]), q(1)),
        (vector(&[1, 0, 1]), q(1)),
        (vector(&[0, 1, 1]), q(1)),
        (vector(&[1, 0, 0]), q(2)),
        (vector(&[0, 1, 0]), q(2)),
        (vector(&[0, 0, 1]), q(2)),
        (vector(&[1, 1, 1]), q(2) * s / (s + q(1))),
    ];
    let d = q(1) / (q(4) * s + q(1));
    for v in [[1, -1, 0], [1, 0, -1], [0, 1, -1]] {
        items.push((vector(&v), d.clone()));
    }
    Ok((3, items))
}

fn dihedral_b2(a2: &Rational, b2: &Rational) -> Result<Items> {
    forbid(a2.is_zero() || b2.is_zero(), || "dihedral B2 requires a², b² ≠ 0".into())?;
    let half = b2 / q(2);
    Ok((
        2,
        vec![
            (vector(&[1, 0]), a2.clone()),
            (vector(&[0, 1]), a2.clone()),
            (vector(&[1, 1]), half.clone()),
            (vector(&[1, -1]), half),
        ],
    ))
}

/// Convenience constructors.
pub fn an_system(c: &[Rational]) -> Result<CovectorSystem> {
    instantiate(&FamilySpec::new(Family::An).with_c(c))
}

pub fn bn_system(c: &[Rational]) -> Result<CovectorSystem> {
    instantiate(&FamilySpec::new(Family::Bn).with_c(c))
}

pub fn one_param(family: Family, key: &str, value: Rational) -> Result<CovectorSystem> {
    instantiate(&FamilySpec::new(family).with(key, value))
}

pub fn boolean(n: usize) -> CovectorSystem {
    one_param(Family::Boolean, "n", q(n as i64)).expect("n ≥ 1")
}

/// Braid arrangement of n points: rank n−1, reduced coordinates.
pub fn braid(n: usize) -> CovectorSystem {
    one_param(Family::Braid, "n", q(n as i64)).expect("n ≥ 2")
}

/// Number of indices i ≥ 1 with c_i + c_0 = 0.
pub fn vanishing_normals(c: &[Rational]) -> usize {
    c.iter().skip(1).filter(|ci| (*ci + &c[0]).is_zero()).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::veesys::{canonical_form, vee_check, WeightedCovector};

    fn cs(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(n, d)| r(n, d)).collect()
    }

    #[test]
    fn a2_in_reduced_coordinates() {
        let sys = an_system(&cs(&[(1, 1), (1, 1), (1, 1)])).unwrap();
        assert_eq!(sys.dimension(), 2);
        assert_eq!(
            sys.covectors(),
            &[
                WeightedCovector::new(vec![0, 1], q(1)),
                WeightedCovector::new(vec![1, -1], q(1)),
                WeightedCovector::new(vec![1, 0], q(1)),
            ]
        );
    }

    #[test]
    fn b3_with_two_vanishing_normals() {
        let sys = bn_system(&cs(&[(-1, 1), (1, 1), (1, 1), (3, 1)])).unwrap();
        let got: Vec<(Vec<i64>, Rational)> =
            sys.covectors().iter().map(|c| (c.direction.clone(), c.weight.clone())).collect();
        let mut want = vec![
            (vec![1, 1, 0], q(1)),
            (vec![1, -1, 0], q(1)),
            (vec![1, 0, 1], q(3)),
            (vec![1, 0, -1], q(3)),
            (vec![0, 1, 1], q(3)),
            (vec![0, 1, -1], q(3)),
            (vec![0, 0, 1], q(12)),
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(sys.name().unwrap().contains("zero weight dropped"));
    }

    #[test]
    fn f4_has_24_covectors() {
        let sys = one_param(Family::F4, "s", q(1)).unwrap();
        assert_eq!(sys.len(), 24);
        assert_eq!(canonical_form(&sys), crate::algebra::Matrix::identity(4).scale(&q(12)));
        assert!(vee_check(&sys).unwrap().is_vee_system);
    }

    #[test]
    fn f3_at_the_complex_point_has_zero_form() {
        let sys = one_param(Family::F3, "s", r(-1, 2)).unwrap();
        assert_eq!(sys.len(), 10);
        assert!(canonical_form(&sys).is_zero());
        assert!(sys.covectors().iter().any(|c| c.weight == q(-1)));
    }

    #[test]
    fn published_exclusions() {
        assert!(one_param(Family::G3, "t", q(0)).is_err());
        assert!(one_param(Family::G3, "t", r(-1, 2)).is_err());
        assert!(one_param(Family::Ab4, "k", r(-1, 3)).is_err());
        assert!(one_param(Family::Ab4, "k", q(0)).is_err());
        let d3 = |t, s| instantiate(&FamilySpec::new(Family::D3).with("t", t).with("s", s));
        assert!(d3(q(0), q(1)).is_err());
        assert!(d3(q(1), q(-2)).is_err());
        assert!(bn_system(&cs(&[(1, 1), (0, 1), (1, 1)])).is_err());
        let err = an_system(&cs(&[(1, 1), (1, 1), (-2, 1)])).unwrap_err();
        assert!(err.to_string().contains("degenerate canonical form"));
        assert!(matches!("h3".parse::<Family>(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn special_parameter_counts() {
        assert_eq!(one_param(Family::Ab4, "k", q(2)).unwrap().len(), 18);
        assert_eq!(one_param(Family::Ab4, "k", q(1)).unwrap().len(), 17);
        assert_eq!(one_param(Family::Ab4, "k", r(1, 3)).unwrap().len(), 12);
        assert_eq!(one_param(Family::G3, "t", q(1)).unwrap().len(), 13);
        assert_eq!(one_param(Family::G3, "t", r(1, 2)).unwrap().len(), 10);
        assert_eq!(one_param(Family::Ab4A1First, "s", q(1)).unwrap().len(), 11);
        assert_eq!(one_param(Family::Ab4A1First, "s", r(1, 2)).unwrap().len(), 10);
        assert_eq!(one_param(Family::Ab4A1Second, "s", q(1)).unwrap().len(), 10);
        assert_eq!(one_param(Family::Ab4A1Second, "s", q(0)).unwrap().len(), 9);
        assert_eq!(one_param(Family::F4, "s", q(0)).unwrap().len(), 12);
        assert_eq!(braid(4).len(), 6);
        assert_eq!(boolean(3).len(), 3);
    }

    #[test]
    fn parameter_parsing() {
        let spec = FamilySpec::parse("bn", "c=-1:1:1:3").unwrap();
        assert_eq!(spec.c().unwrap(), cs(&[(-1, 1), (1, 1), (1, 1), (3, 1)]));
        let spec = FamilySpec::parse("d3", "t=3/2, s=3/2").unwrap();
        assert_eq!(spec.label(), "d3(s=3/2,t=3/2)");
        assert!(FamilySpec::parse("f4", "k=1").is_err());
        assert!(FamilySpec::parse("nope", "").is_err());
    }
}
