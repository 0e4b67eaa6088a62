use std::collections::BTreeMap;

use num_traits::Zero;
use serde_json::{json, Value};

use super::{CovectorSystem, WeightedCovector};
use crate::algebra::serial::{matrix_to_json, rational_to_json};
use crate::algebra::{dot, format_rational, Matrix};
use crate::error::{Error, Result};
use crate::{RatMatrix, Rational};

/// G_A = Σ w·v vᵀ.
pub fn canonical_form(sys: &CovectorSystem) -> RatMatrix {
    let n = sys.dimension();
    let mut g = Matrix::zeros(n, n);
    for c in sys.covectors() {
        for i in 0..n {
            if c.direction[i] == 0 {
                continue;
            }
            for j in 0..n {
                if c.direction[j] != 0 {
                    g[(i, j)] += &c.weight * Rational::from_integer((c.direction[i] * c.direction[j]).into());
                }
            }
        }
    }
    g
}

/// G_A⁻¹, or `DegenerateForm` carrying a kernel basis of G_A.
pub fn dual_form(sys: &CovectorSystem) -> Result<RatMatrix> {
    let g = canonical_form(sys);
    g.inverse().ok_or_else(|| Error::DegenerateForm {
        kernel: g.kernel_basis().iter().map(|v| v.iter().map(format_rational).collect()).collect(),
    })
}

/// α∨ on directions: G_A⁻¹ v.
pub fn vee_dual(sys: &CovectorSystem, index: usize) -> Result<Vec<Rational>> {
    let c = sys.covectors().get(index).ok_or_else(|| Error::Input(format!("covector index {index} out of range")))?;
    Ok(dual_form(sys)?.mul_vec(&c.direction_q()))
}

/// ρ(t_α) = w (G_A⁻¹v) vᵀ for every covector, in system order.
pub fn rho(sys: &CovectorSystem) -> Result<Vec<RatMatrix>> {
    let gi = dual_form(sys)?;
    Ok(sys
        .covectors()
        .iter()
        .map(|c| {
            let v = c.direction_q();
            Matrix::outer(&gi.mul_vec(&v), &v).scale(&c.weight)
        })
        .collect())
}

/// A two-dimensional span containing at least two directions.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane {
    /// Reduced row echelon basis of the span.
    pub basis: Vec<Vec<Rational>>,
    pub members: Vec<usize>,
}

/// All planes, ordered by echelon key.
pub fn planes(sys: &CovectorSystem) -> Vec<Plane> {
    let dirs: Vec<Vec<Rational>> = sys.covectors().iter().map(WeightedCovector::direction_q).collect();
    let mut groups: BTreeMap<Vec<Vec<Rational>>, Vec<usize>> = BTreeMap::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            let key = Matrix::from_rows(vec![dirs[i].clone(), dirs[j].clone()]).expect("equal lengths").rref_rows();
            let members = groups.entry(key).or_default();
            for k in [i, j] {
                if !members.contains(&k) {
                    members.push(k);
                }
            }
        }
    }
    groups
        .into_iter()
        .map(|(basis, mut members)| {
            members.sort_unstable();
            Plane { basis, members }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaneKind {
    TwoCovector,
    MultiCovector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlaneRecord {
    pub covectors: Vec<usize>,
    pub kind: PlaneKind,
    pub nu: Option<Rational>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VeeReport {
    pub is_vee_system: bool,
    pub canonical_form: RatMatrix,
    pub planes: Vec<PlaneRecord>,
    pub failures: Vec<String>,
}

impl VeeReport {
    pub fn to_json(&self, sys: &CovectorSystem) -> Value {
        json!({
            "is_vee_system": self.is_vee_system,
            "canonical_form": matrix_to_json(&self.canonical_form),
            "planes": self.planes.iter().map(|p| {
                let mut rec = json!({
                    "covectors": p.covectors.iter().map(|&i| &sys.covectors()[i].direction).collect::<Vec<_>>(),
                    "kind": match p.kind { PlaneKind::TwoCovector => "two-covector", PlaneKind::MultiCovector => "multi-covector" },
                    "passed": p.passed,
                });
                if let Some(nu) = &p.nu {
                    rec["nu"] = rational_to_json(nu);
                }
                rec
            }).collect::<Vec<_>>(),
            "failures": self.failures,
        })
    }

    pub fn failing_planes(&self) -> impl Iterator<Item = &PlaneRecord> {
        self.planes.iter().filter(|p| !p.passed)
    }
}

fn refuse_arrangement(sys: &CovectorSystem) -> Result<()> {
    if sys.is_arrangement_only() {
        return Err(Error::InvalidSystem("system is arrangement-only; supply weights before running ∨-checks".into()));
    }
    Ok(())
}

/// Plane-wise ∨-conditions. Two-covector planes need vᵀG_A⁻¹v' = 0; larger
/// planes need Σ_β w_β (v_βᵀG_A⁻¹φ) v_β = ν φ for φ in the plane, with one ν.
pub fn vee_check(sys: &CovectorSystem) -> Result<VeeReport> {
    refuse_arrangement(sys)?;
    let g = canonical_form(sys);
    let gi = dual_form(sys)?;
    let covs = sys.covectors();
    let dirs: Vec<Vec<Rational>> = covs.iter().map(WeightedCovector::direction_q).collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for plane in planes(sys) {
        let label = || plane.members.iter().map(|&i| format!("{:?}", covs[i].direction)).collect::<Vec<_>>().join(", ");
        if plane.members.len() == 2 {
            let (a, b) = (plane.members[0], plane.members[1]);
            let passed = gi.bilinear(&dirs[a], &dirs[b]).is_zero();
            if !passed {
                failures.push(format!("two-covector plane {{{}}}: duals not orthogonal", label()));
            }
            records.push(PlaneRecord {
                covectors: plane.members.clone(),
                kind: PlaneKind::TwoCovector,
                nu: None,
                passed,
            });
            continue;
        }
        let mut nus = Vec::with_capacity(2);
        let mut passed = true;
        for phi in &plane.basis {
            let dual_phi = gi.mul_vec(phi);
            let mut image = vec![Rational::zero(); sys.dimension()];
            for &b in &plane.members {
                let coeff = &covs[b].weight * dot(&dirs[b], &dual_phi);
                for (x, d) in image.iter_mut().zip(&dirs[b]) {
                    *x += &coeff * d;
                }
            }
            let pivot = phi.iter().position(|x| !x.is_zero()).expect("basis row nonzero");
            let nu = image[pivot].clone() / &phi[pivot];
            if image.iter().zip(phi).any(|(x, p)| *x != &nu * p) {
                passed = false;
            }
            nus.push(nu);
        }
        if nus.windows(2).any(|w| w[0] != w[1]) {
            passed = false;
        }
        if !passed {
            failures.push(format!(
                "plane {{{}}}: restricted operator is not scalar (diagonal values {})",
                label(),
                nus.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            ));
        }
        records.push(PlaneRecord {
            covectors: plane.members.clone(),
            kind: PlaneKind::MultiCovector,
            nu: if passed { nus.into_iter().next() } else { None },
            passed,
        });
    }
    Ok(VeeReport { is_vee_system: failures.is_empty(), canonical_form: g, planes: records, failures })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolonomyReport {
    pub passes: bool,
    /// Member indices of each plane with a nonvanishing commutator.
    pub failing_planes: Vec<Vec<usize>>,
}

impl HolonomyReport {
    pub fn to_json(&self, sys: &CovectorSystem) -> Value {
        json!({
            "passes": self.passes,
            "failing_planes": self.failing_planes.iter().map(|p| {
                p.iter().map(|&i| &sys.covectors()[i].direction).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })
    }
}

/// [ρ(t_α), Σ_{β∈Π} ρ(t_β)] = 0 for every plane Π and α ∈ Π.
pub fn holonomy_check(sys: &CovectorSystem) -> Result<HolonomyReport> {
    refuse_arrangement(sys)?;
    let reps = rho(sys)?;
    let n = sys.dimension();
    let mut failing = Vec::new();
    for plane in planes(sys) {
        let total = plane.members.iter().fold(Matrix::zeros(n, n), |acc, &b| &acc + &reps[b]);
        if plane.members.iter().any(|&a| !reps[a].commutator(&total).is_zero()) {
            failing.push(plane.members);
        }
    }
    Ok(HolonomyReport { passes: failing.is_empty(), failing_planes: failing })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WellDistributed {
    pub proportional: bool,
    pub mu: Option<Rational>,
}

/// Whether G_A = μ·G for some rational μ (μ = 0 allowed).
pub fn well_distributed_check(sys: &CovectorSystem, g: &RatMatrix) -> Result<WellDistributed> {
    let n = sys.dimension();
    if g.rows() != n || g.cols() != n {
        return Err(Error::Dimension(format!("form is {}×{}, system has dimension {n}", g.rows(), g.cols())));
    }
    if !g.is_symmetric() {
        return Err(Error::Input("form is not symmetric".into()));
    }
    if g.determinant()?.is_zero() {
        return Err(Error::Input("form is degenerate".into()));
    }
    let ga = canonical_form(sys);
    let (i, j) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !g[(i, j)].is_zero())
        .expect("nondegenerate form has a nonzero entry");
    let mu = ga[(i, j)].clone() / &g[(i, j)];
    let proportional = ga == g.scale(&mu);
    Ok(WellDistributed { proportional, mu: proportional.then_some(mu) })
}

/// Splits the system into span-complementary components. Each component is
/// expressed in the reduced echelon basis of its span.
///
/// Two covectors share a component iff they lie on a common circuit of the
/// direction matroid; the fundamental circuits of one greedy basis already
/// generate this relation.
pub fn irreducible_components(sys: &CovectorSystem) -> Vec<CovectorSystem> {
    let dirs: Vec<Vec<Rational>> = sys.covectors().iter().map(WeightedCovector::direction_q).collect();
    let mut parent: Vec<usize> = (0..dirs.len()).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    let mut basis: Vec<usize> = Vec::new();
    for e in 0..dirs.len() {
        let mut cols: Vec<usize> = basis.clone();
        cols.push(e);
        // columns are the candidate vectors; a kernel vector is a dependency
        let m = Matrix::from_rows(
            (0..sys.dimension()).map(|r| cols.iter().map(|&c| dirs[c][r].clone()).collect()).collect(),
        )
        .expect("rectangular");
        match m.kernel_basis().into_iter().next() {
            None => basis.push(e),
            Some(dep) => {
                for (k, &b) in basis.iter().enumerate() {
                    if !dep[k].is_zero() {
                        let (x, y) = (find(&mut parent, b), find(&mut parent, e));
                        parent[x] = y;
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..dirs.len() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    groups.sort();
    let base = sys.name().unwrap_or("system");
    groups
        .iter()
        .enumerate()
        .map(|(k, members)| {
            let basis = Matrix::from_rows(members.iter().map(|&i| dirs[i].clone()).collect())
                .expect("equal lengths")
                .rref_rows();
            let pivots: Vec<usize> =
                basis.iter().map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
            let items = members
                .iter()
                .map(|&i| {
                    let coords = pivots.iter().map(|&p| dirs[i][p].clone()).collect();
                    (coords, sys.covectors()[i].weight.clone())
                })
                .collect();
            let (mut comp, _) =
                CovectorSystem::from_vectors(basis.len(), items).expect("component spans its own basis");
            comp.arrangement_only = sys.is_arrangement_only();
            comp.with_name(format!("{base} component {}", k + 1))
        })
        .collect()
}
