//! Closed-form potentials of the classical families.
//!
//! For A_n(c) the potential F_κ is the coefficient of u^{κ+1} in
//! Π_{i=0..n} (1 − x_i u)^{λ_i} with λ_i = κ c_i / σ, which expands as
//! Σ_{μ ⊢ κ+1} (−1)^{l(μ)} z_μ⁻¹ p_μ^λ. B_n(c) uses the same expansion in the
//! squares x_i² with λ_i = (2k−1) c_i / (2σ). Potentials for A_n are built in
//! the ambient variables `x0..xn` and mapped to the system chart
//! y_i = x_i − x_0 by [`reduce_to_subspace_an`].

mod f4;
mod partitions;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde_json::{json, Value};

pub use f4::{f4_invariant, f4_potentials};
pub use partitions::{partitions, z_mu};

use crate::algebra::scalar::format_rational;
use crate::algebra::serial::poly_to_json;
use crate::algebra::{poly_determinant, Poly, Vars};
use crate::error::{Error, Result};
use crate::families::{instantiate, Family, FamilySpec};
use crate::flatsections::epd_check;
use crate::veesys::CovectorSystem;
use crate::{MultiPoly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PowerKind {
    /// p_s = Σ λ_i x_i^s
    P,
    /// q_s = Σ λ_i x_i^{2s}
    Q,
}

/// λ-weighted power sums, indexed by s ≥ 1.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformedPowerSums {
    pub kind: PowerKind,
    pub lambda: Vec<Rational>,
    pub values: BTreeMap<u32, MultiPoly>,
}

impl DeformedPowerSums {
    /// Power sums for s = 1..=max_s over `vars`, one λ per variable.
    pub fn new(kind: PowerKind, lambda: &[Rational], vars: &Vars, max_s: u32) -> Self {
        assert_eq!(lambda.len(), vars.len(), "one λ per variable");
        let step = match kind {
            PowerKind::P => 1,
            PowerKind::Q => 2,
        };
        let values = (1..=max_s)
            .map(|s| {
                let mut sum = Poly::zero(vars);
                for (i, l) in lambda.iter().enumerate() {
                    sum.add_scaled(&Poly::var(vars, i).pow(step * s), l);
                }
                (s, sum)
            })
            .collect();
        DeformedPowerSums { kind, lambda: lambda.to_vec(), values }
    }

    pub fn get(&self, s: u32) -> &MultiPoly {
        &self.values[&s]
    }

    /// p_μ = Π_j p_{μ_j}.
    pub fn of_partition(&self, mu: &[u32]) -> MultiPoly {
        let vars = self.values[&1].vars();
        mu.iter().fold(Poly::constant(vars, Rational::one()), |acc, &s| &acc * self.get(s))
    }

    /// Σ_{μ ⊢ m} (−1)^{l(μ)} z_μ⁻¹ p_μ.
    pub fn partition_sum(&self, m: u32) -> MultiPoly {
        let vars = self.values[&1].vars();
        let mut out = Poly::zero(vars);
        for mu in partitions(m) {
            let sign = if mu.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
            out.add_scaled(&self.of_partition(&mu), &(sign / Rational::from_integer(z_mu(&mu))));
        }
        out
    }

    /// (−1)^m / m! · det of the m×m Newton matrix with p_{i−j+1} on and
    /// below the diagonal and i on the superdiagonal.
    pub fn determinant_form(&self, m: u32) -> MultiPoly {
        let vars = self.values[&1].vars();
        let size = m as usize;
        let rows: Vec<Vec<MultiPoly>> = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if j <= i {
                            self.get((i - j + 1) as u32).clone()
                        } else if j == i + 1 {
                            Poly::constant(vars, Rational::from_integer((i + 1).into()))
                        } else {
                            Poly::zero(vars)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut factorial = Rational::one();
        for k in 2..=m {
            factorial *= Rational::from_integer(k.into());
        }
        let sign = if m.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
        poly_determinant(&rows).scale(&(sign / factorial))
    }
}

/// Variables `x0..xn` for the ambient space of A_n.
pub fn ambient_vars(n: usize) -> Vars {
    Vars::indexed("x", 0, n + 1)
}

fn sigma_of(c: &[Rational], from: usize) -> Result<Rational> {
    if c.len() < 2 {
        return Err(Error::Parameter("need c0 and at least one c_i".into()));
    }
    for (i, ci) in c.iter().enumerate().skip(from) {
        if ci.is_zero() {
            return Err(Error::Parameter(format!("c{i} = 0: all c_i must be non-zero")));
        }
    }
    let sigma: Rational = c.iter().sum();
    if sigma.is_zero() {
        return Err(Error::Parameter("σ = c0 + … + cn = 0".into()));
    }
    Ok(sigma)
}

fn check_kappa(kappa: u32, n: usize, what: &str) -> Result<()> {
    if kappa == 0 || kappa as usize > n {
        return Err(Error::Parameter(format!("{what} must lie in 1..={n} (got {kappa})")));
    }
    Ok(())
}

/// λ_i = κ c_i / σ for A_n(c).
pub fn lambda_an(c: &[Rational], kappa: u32) -> Result<Vec<Rational>> {
    let sigma = sigma_of(c, 0)?;
    let k = Rational::from_integer(kappa.into());
    Ok(c.iter().map(|ci| &k * ci / &sigma).collect())
}

/// λ_i = (2k − 1) c_i / (2σ) for i = 1..n of B_n(c). c₀ enters through σ only.
pub fn lambda_bn(c: &[Rational], k: u32) -> Result<Vec<Rational>> {
    let sigma = sigma_of(c, 1)?;
    let scale = Rational::from_integer((2 * k - 1).into()) / (Rational::from_integer(2.into()) * sigma);
    Ok(c[1..].iter().map(|ci| ci * &scale).collect())
}

/// F_κ for A_n(c) in `x0..xn`, as the partition sum.
pub fn potential_an(c: &[Rational], kappa: u32) -> Result<MultiPoly> {
    let sums = an_power_sums(c, kappa)?;
    Ok(sums.partition_sum(kappa + 1))
}

/// F_κ for A_n(c) in `x0..xn`, as the Newton determinant.
pub fn potential_an_determinant(c: &[Rational], kappa: u32) -> Result<MultiPoly> {
    let sums = an_power_sums(c, kappa)?;
    Ok(sums.determinant_form(kappa + 1))
}

fn an_power_sums(c: &[Rational], kappa: u32) -> Result<DeformedPowerSums> {
    let n = c.len().saturating_sub(1);
    let lambda = lambda_an(c, kappa)?;
    check_kappa(kappa, n, "κ")?;
    Ok(DeformedPowerSums::new(PowerKind::P, &lambda, &ambient_vars(n), kappa + 1))
}

/// Coefficient of u^order in Π_i (1 − b_i u)^{λ_i}, each factor truncated
/// to its binomial series through u^order.
fn binomial_product_coefficient(lambda: &[Rational], bases: &[MultiPoly], order: u32) -> MultiPoly {
    let vars = bases[0].vars().clone();
    // series[d] holds the coefficient of u^d
    let mut series = vec![Poly::zero(&vars); order as usize + 1];
    series[0] = Poly::constant(&vars, Rational::one());
    for (l, b) in lambda.iter().zip(bases) {
        let mut factor = Vec::with_capacity(order as usize + 1);
        let mut binom = Rational::one();
        let mut power = Poly::constant(&vars, Rational::one());
        for k in 0..=order {
            if k > 0 {
                binom = binom * (l - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
                power = &power * b;
            }
            let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
            factor.push(power.scale(&(&binom * sign)));
        }
        let mut next = vec![Poly::zero(&vars); order as usize + 1];
        for (i, s) in series.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
            for (j, f) in factor.iter().enumerate().take(order as usize + 1 - i) {
                if !f.is_zero() {
                    next[i + j] = &next[i + j] + &(s * f);
                }
            }
        }
        series = next;
    }
    series.swap_remove(order as usize)
}

/// Coefficient of x⁻¹ in x^κ Π (1 − x_i/x)^{λ_i}, from the binomial series
/// of each factor. Independent of the power-sum machinery.
pub fn series_oracle_an(c: &[Rational], kappa: u32) -> Result<MultiPoly> {
    let n = c.len().saturating_sub(1);
    let lambda = lambda_an(c, kappa)?;
    check_kappa(kappa, n, "κ")?;
    let vars = ambient_vars(n);
    let bases: Vec<MultiPoly> = (0..=n).map(|i| Poly::var(&vars, i)).collect();
    Ok(binomial_product_coefficient(&lambda, &bases, kappa + 1))
}

/// F_k for B_n(c) in `x1..xn`: the partition sum over μ ⊢ k with q in place
/// of p. Homogeneous of degree 2k; its flat section has κ = 2k − 1.
pub fn potential_bn(c: &[Rational], k: u32) -> Result<MultiPoly> {
    let sums = bn_power_sums(c, k)?;
    Ok(sums.partition_sum(k))
}

pub fn potential_bn_determinant(c: &[Rational], k: u32) -> Result<MultiPoly> {
    let sums = bn_power_sums(c, k)?;
    Ok(sums.determinant_form(k))
}

fn bn_power_sums(c: &[Rational], k: u32) -> Result<DeformedPowerSums> {
    let n = c.len().saturating_sub(1);
    let lambda = lambda_bn(c, k)?;
    check_kappa(k, n, "k")?;
    Ok(DeformedPowerSums::new(PowerKind::Q, &lambda, &Vars::indexed("x", 1, n), k))
}

/// Res_∞ Π (x² − x_i²)^{λ_i}, i.e. the coefficient of v^k in
/// Π (1 − x_i² v)^{λ_i}, for an arbitrary exponent vector.
pub fn residue_bn(lambda: &[Rational], k: u32) -> MultiPoly {
    let vars = Vars::indexed("x", 1, lambda.len());
    let bases: Vec<MultiPoly> = (0..lambda.len()).map(|i| Poly::var(&vars, i).pow(2)).collect();
    binomial_product_coefficient(lambda, &bases, k)
}

/// Restricts an ambient A_n potential to the hyperplane p₁^λ = 0 and writes
/// it in the chart y_i = x_i − x_0: x_0 = t, x_i = y_i + t with
/// t = −Σ_{i≥1} λ_i y_i / Σλ. κ is read off as deg F − 1.
pub fn reduce_to_subspace_an(f: &MultiPoly, c: &[Rational]) -> Result<MultiPoly> {
    let n = c.len().saturating_sub(1);
    if f.nvars() != n + 1 {
        return Err(Error::Dimension(format!("potential has {} variables, expected {}", f.nvars(), n + 1)));
    }
    let kappa = match f.homogeneous_degree() {
        Some(d) if d >= 2 => d - 1,
        _ => return Err(Error::Input("expected a homogeneous potential of degree ≥ 2".into())),
    };
    let lambda = lambda_an(c, kappa)?;
    let total: Rational = lambda.iter().sum();
    let y = Vars::indexed("x", 1, n);
    let mut t = Poly::zero(&y);
    for (i, l) in lambda.iter().enumerate().skip(1) {
        t.add_scaled(&Poly::var(&y, i - 1), &(-l / &total));
    }
    let mut images = vec![t.clone()];
    images.extend((0..n).map(|i| &Poly::var(&y, i) + &t));
    Ok(f.substitute(&images))
}

/// det ‖∂F_i/∂x_j‖_{i,j=0..n} = ε λ₀⋯λ_n Π_{i<j}(x_i − x_j) with
/// ε = (−1)^{n(n−1)/2}. Every row uses the same λ = c/σ: F₀ = p₁^λ and F_i is
/// the coefficient of u^{i+1} in Π(1 − x_j u)^{λ_j} for i = 1..n.
pub fn jacobian_identity_check(c: &[Rational]) -> Result<bool> {
    let (lhs, rhs) = jacobian_sides(c)?;
    Ok(lhs == rhs)
}

/// Both sides of the Jacobian identity as polynomials.
pub fn jacobian_sides(c: &[Rational]) -> Result<(MultiPoly, MultiPoly)> {
    let lambda = lambda_an(c, 1)?;
    Ok(jacobian_sides_for(&lambda))
}

/// The Jacobian identity evaluated at one point, without expanding the
/// determinant symbolically.
pub fn jacobian_identity_at(c: &[Rational], point: &[Rational]) -> Result<bool> {
    let lambda = lambda_an(c, 1)?;
    if point.len() != lambda.len() {
        return Err(Error::Dimension(format!("point has {} coordinates, expected {}", point.len(), lambda.len())));
    }
    let rows = jacobian_rows(&lambda).iter().map(|row| row.iter().map(|p| p.eval(point)).collect()).collect();
    let lhs = crate::RatMatrix::from_rows(rows)?.determinant()?;
    Ok(lhs == jacobian_rhs(&lambda).eval(point))
}

fn jacobian_rows(lambda: &[Rational]) -> Vec<Vec<MultiPoly>> {
    let n = lambda.len() - 1;
    let sums = DeformedPowerSums::new(PowerKind::P, lambda, &ambient_vars(n), n as u32 + 1);
    let mut rows = vec![sums.get(1).gradient()];
    rows.extend((1..=n as u32).map(|i| sums.partition_sum(i + 1).gradient()));
    rows
}

fn jacobian_rhs(lambda: &[Rational]) -> MultiPoly {
    let n = lambda.len() - 1;
    let vars = ambient_vars(n);
    let sign = if (n * n.saturating_sub(1) / 2).is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let mut rhs = Poly::constant(&vars, lambda.iter().product::<Rational>() * sign);
    for i in 0..=n {
        for j in i + 1..=n {
            rhs = &rhs * &(&Poly::var(&vars, i) - &Poly::var(&vars, j));
        }
    }
    rhs
}

fn jacobian_sides_for(lambda: &[Rational]) -> (MultiPoly, MultiPoly) {
    (poly_determinant(&jacobian_rows(lambda)), jacobian_rhs(lambda))
}

/// x₁⋯x_{n−m} (x_{n−m+1}⋯x_n)²: the extra potential of B_n(c) at
/// c₁ = … = c_{n−m} = −c₀ = 1, c_{n−m+1} = … = c_n = 2, where the first n − m
/// coordinate hyperplanes disappear. Degree n + m, κ = n + m − 1.
pub fn zaslavsky_potential(n: usize, m: usize) -> Result<MultiPoly> {
    if m == 0 || m >= n {
        return Err(Error::Parameter(format!("zaslavsky needs 1 ≤ m ≤ n − 1 (got n = {n}, m = {m})")));
    }
    let vars = Vars::indexed("x", 1, n);
    let mut f = Poly::constant(&vars, Rational::one());
    for i in 0..n {
        f = &f * &Poly::var(&vars, i).pow(if i < n - m { 1 } else { 2 });
    }
    Ok(f)
}

/// c = (−1, 1, …, 1, 2, …, 2) with n − m ones and m twos.
pub fn zaslavsky_parameters(n: usize, m: usize) -> Vec<Rational> {
    let mut c = vec![-Rational::one()];
    c.extend((0..n).map(|i| Rational::from_integer(if i < n - m { 1 } else { 2 }.into())));
    c
}

/// F₁ = x₁² + x₂², F₂ = 2(x₁⁴ − 6x₁²x₂² + x₂⁴) + 6 (a² − b²)/(a² + b²) (x₁² + x₂²)².
pub fn dihedral_b2_potentials(a2: &Rational, b2: &Rational) -> Result<PotentialSet> {
    if a2.is_zero() || b2.is_zero() || (a2 + b2).is_zero() {
        return Err(Error::Parameter("dihedral B2 requires a², b² ≠ 0 and a² + b² ≠ 0".into()));
    }
    let vars = Vars::indexed("x", 1, 2);
    let x = Poly::var(&vars, 0);
    let y = Poly::var(&vars, 1);
    let r2 = &x.pow(2) + &y.pow(2);
    let mut f2 = Poly::from_terms(
        &vars,
        [(vec![4, 0], 2), (vec![2, 2], -12), (vec![0, 4], 2)]
            .into_iter()
            .map(|(e, c)| (crate::algebra::Monomial::new(e), Rational::from_integer(c.into()))),
    );
    f2.add_scaled(&r2.pow(2), &(Rational::from_integer(6.into()) * (a2 - b2) / (a2 + b2)));
    let spec = FamilySpec::new(Family::DihedralB2).with("a2", a2.clone()).with("b2", b2.clone());
    Ok(PotentialSet::new(PotentialFamily::DihedralB2, spec.label(), vec![(1, r2), (3, f2)]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PotentialFamily {
    An,
    Bn,
    F4,
    Zaslavsky,
    DihedralB2,
}

impl PotentialFamily {
    pub const ALL: [PotentialFamily; 5] = [Self::An, Self::Bn, Self::F4, Self::Zaslavsky, Self::DihedralB2];

    pub fn name(self) -> &'static str {
        match self {
            Self::An => "an",
            Self::Bn => "bn",
            Self::F4 => "f4",
            Self::Zaslavsky => "zaslavsky",
            Self::DihedralB2 => "dihedral-b2",
        }
    }
}

impl fmt::Display for PotentialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PotentialFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Self::ALL.into_iter().find(|f| f.name() == key || (key == "dihedral" && *f == Self::DihedralB2)).ok_or_else(
            || {
                let names: Vec<_> = Self::ALL.iter().map(|f| f.name()).collect();
                Error::Parse(format!("unknown potential family {s:?} (expected one of {})", names.join(", ")))
            },
        )
    }
}

/// Potentials of one instantiated system, in its own coordinates, with
/// nondecreasing κ.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialSet {
    pub family: PotentialFamily,
    pub label: String,
    pub potentials: Vec<(u32, MultiPoly)>,
}

impl PotentialSet {
    pub fn new(family: PotentialFamily, label: String, mut potentials: Vec<(u32, MultiPoly)>) -> Self {
        potentials.sort_by_key(|(k, _)| *k);
        PotentialSet { family, label, potentials }
    }

    pub fn kappas(&self) -> Vec<u32> {
        self.potentials.iter().map(|(k, _)| *k).collect()
    }

    /// epd_check of every member at its κ.
    pub fn verify(&self, sys: &CovectorSystem) -> Result<Vec<bool>> {
        self.potentials.iter().map(|(k, f)| epd_check(sys, f, *k)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "family": self.family.name(),
            "label": self.label,
            "potentials": self.potentials.iter().map(|(k, f)| json!({
                "kappa": k,
                "degree": f.homogeneous_degree(),
                "polynomial": poly_to_json(f),
            })).collect::<Vec<_>>(),
        })
    }
}

/// The potential set of a family together with the system it belongs to.
///
/// Parameters: `an`/`bn` take `c = c0:…:cn`; `f4` takes `s`; `zaslavsky`
/// takes `n` and `m`; `dihedral-b2` takes `a2` and `b2`.
pub fn potential_set(
    family: PotentialFamily,
    params: &BTreeMap<String, Rational>,
) -> Result<(PotentialSet, CovectorSystem)> {
    let get = |key: &str| {
        params.get(key).cloned().ok_or_else(|| Error::Parameter(format!("{family} requires parameter {key}")))
    };
    let count = |key: &str| -> Result<usize> {
        let v = get(key)?;
        if !v.is_integer() || v < Rational::one() {
            return Err(Error::Parameter(format!("{key} must be a positive integer (got {})", format_rational(&v))));
        }
        usize::try_from(v.to_integer()).map_err(|_| Error::Parameter(format!("{key} too large")))
    };
    let with_params = |f: Family| params.iter().fold(FamilySpec::new(f), |spec, (k, v)| spec.with(k, v.clone()));
    match family {
        PotentialFamily::An => {
            let spec = with_params(Family::An);
            let c = spec.c()?;
            let sys = instantiate(&spec)?;
            let n = c.len() - 1;
            let mut out = Vec::new();
            for kappa in 1..=n as u32 {
                out.push((kappa, reduce_to_subspace_an(&potential_an(&c, kappa)?, &c)?));
            }
            Ok((PotentialSet::new(family, spec.label(), out), sys))
        }
        PotentialFamily::Bn => {
            let spec = with_params(Family::Bn);
            let c = spec.c()?;
            let sys = instantiate(&spec)?;
            let n = c.len() - 1;
            let out = (1..=n as u32).map(|k| Ok((2 * k - 1, potential_bn(&c, k)?))).collect::<Result<_>>()?;
            Ok((PotentialSet::new(family, spec.label(), out), sys))
        }
        PotentialFamily::F4 => {
            let s = get("s")?;
            let sys = instantiate(&FamilySpec::new(Family::F4).with("s", s.clone()))?;
            Ok((f4_potentials(&s)?, sys))
        }
        PotentialFamily::Zaslavsky => {
            let (n, m) = (count("n")?, count("m")?);
            let z = zaslavsky_potential(n, m)?;
            let c = zaslavsky_parameters(n, m);
            let spec = FamilySpec::new(Family::Bn).with_c(&c);
            let sys = instantiate(&spec)?;
            let mut out = (1..n as u32).map(|k| Ok((2 * k - 1, potential_bn(&c, k)?))).collect::<Result<Vec<_>>>()?;
            out.push(((n + m - 1) as u32, z));
            Ok((PotentialSet::new(family, format!("zaslavsky(n={n},m={m})"), out), sys))
        }
        PotentialFamily::DihedralB2 => {
            let (a2, b2) = (get("a2")?, get("b2")?);
            let sys = instantiate(&FamilySpec::new(Family::DihedralB2).with("a2", a2.clone()).with("b2", b2.clone()))?;
            Ok((dihedral_b2_potentials(&a2, &b2)?, sys))
        }
    }
}
