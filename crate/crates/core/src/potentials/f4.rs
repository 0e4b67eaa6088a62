use num_traits::One;

use super::{PotentialFamily, PotentialSet};
use crate::algebra::{Poly, Vars};
use crate::error::Result;
use crate::families::{instantiate, Family, FamilySpec};
use crate::veesys::dual_form;
use crate::{MultiPoly, Rational};

/// I_m = Σ_{i<j} (x_i − x_j)^m + (x_i + x_j)^m in four variables.
pub fn f4_invariant(m: u32) -> MultiPoly {
    let vars = Vars::indexed("x", 1, 4);
    let mut out = Poly::zero(&vars);
    for i in 0..4 {
        for j in i + 1..4 {
            let (xi, xj) = (Poly::var(&vars, i), Poly::var(&vars, j));
            out = &out + &(&xi - &xj).pow(m);
            out = &out + &(&xi + &xj).pow(m);
        }
    }
    out
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Σ coeff · Π I_m^e over the listed (coefficient, [(m, e)]) terms.
fn combine(terms: &[(Rational, &[(u32, u32)])], inv: &dyn Fn(u32) -> MultiPoly) -> MultiPoly {
    let vars = Vars::indexed("x", 1, 4);
    let mut out = Poly::zero(&vars);
    for (c, factors) in terms {
        let mut prod = Poly::constant(&vars, Rational::one());
        for &(m, e) in *factors {
            prod = &prod * &inv(m).pow(e);
        }
        out.add_scaled(&prod, c);
    }
    out
}

/// The four F₄(s) potentials (s = t²), κ = 1, 5, 7, 11, as polynomials in the
/// basic invariants I₂, I₆, I₈, I₁₂.
pub fn f4_potentials(s: &Rational) -> Result<PotentialSet> {
    let spec = FamilySpec::new(Family::F4).with("s", s.clone());
    // s = −1 makes the form degenerate; report its kernel
    dual_form(&instantiate(&spec)?)?;
    let cache: Vec<MultiPoly> = [2, 6, 8, 12].into_iter().map(f4_invariant).collect();
    let inv = |m: u32| match m {
        2 => cache[0].clone(),
        6 => cache[1].clone(),
        8 => cache[2].clone(),
        12 => cache[3].clone(),
        _ => unreachable!("only I2, I6, I8, I12 enter"),
    };
    let s1 = s + q(1);
    let s2 = s * s;
    let s3 = &s2 * s;

    let f2 = inv(2);
    let f6 = combine(&[(q(648) * &s1, &[(6, 1)]), (-(q(5) * (q(5) + q(4) * s)), &[(2, 3)])], &inv);
    let f8 = combine(
        &[
            (q(69984) * s1.pow(2), &[(8, 1)]),
            (-(q(9072) * (q(7) + q(2) * s) * &s1), &[(2, 1), (6, 1)]),
            (q(35) * (q(49) + q(46) * s + q(4) * &s2), &[(2, 4)]),
        ],
        &inv,
    );
    let f12 = combine(
        &[
            (q(10077696) * s1.pow(3), &[(12, 1)]),
            (-(q(384912) * (q(11) + q(8) * s) * s1.pow(2)), &[(8, 1), (2, 2)]),
            (q(769824) * (q(4) * s - q(11)) * s1.pow(2), &[(6, 2)]),
            (q(7128) * (q(319) + q(376) * s + q(112) * &s2) * &s1, &[(6, 1), (2, 3)]),
            (-(q(11) * (q(3641) + q(7032) * s + q(4560) * &s2 + q(1048) * &s3)), &[(2, 6)]),
        ],
        &inv,
    );
    debug_assert!(!f12.is_zero());
    Ok(PotentialSet::new(PotentialFamily::F4, spec.label(), vec![(1, f2), (5, f6), (7, f8), (11, f12)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::rat;
    use crate::error::Error;
    use crate::flatsections::epd_check;

    #[test]
    fn invariants_have_the_right_degrees() {
        for m in [2, 6, 8, 12] {
            assert_eq!(f4_invariant(m).homogeneous_degree(), Some(m));
        }
        // I2 = 6 Σ x_i²
        assert_eq!(f4_invariant(2).eval(&[q(1), q(0), q(0), q(0)]), q(6));
    }

    #[test]
    fn degenerate_parameter_is_refused() {
        assert!(matches!(f4_potentials(&q(-1)), Err(Error::DegenerateForm { .. })));
    }

    #[test]
    fn potentials_satisfy_epd() {
        for s in [q(1), rat(1, 2), q(2)] {
            let set = f4_potentials(&s).unwrap();
            let sys = instantiate(&FamilySpec::new(Family::F4).with("s", s)).unwrap();
            assert_eq!(set.kappas(), vec![1, 5, 7, 11]);
            for (k, f) in &set.potentials {
                assert!(epd_check(&sys, f, *k).unwrap(), "kappa {k}");
            }
        }
    }
}
