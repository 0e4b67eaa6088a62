use num_traits::{Signed, Zero};
use proptest::prelude::*;
use vee_core::algebra::{int, Matrix, Monomial, Poly};
use vee_core::arrangements::{
    factorization_check, intersection_lattice, poincare_polynomial, product_of_linear_factors, t_var, Arrangement,
};
use vee_core::families::braid;
use vee_core::MultiPoly;

fn arrangement() -> impl Strategy<Value = Arrangement> {
    (1usize..=4)
        .prop_flat_map(|n| {
            prop::collection::vec(prop::collection::vec(-2i64..=2, n), 1..=8).prop_map(move |vs| {
                let vs = vs.into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect();
                Arrangement::new(n, vs).unwrap()
            })
        })
        .prop_filter("at least one hyperplane", |a| !a.is_empty())
}

fn rank_of(normals: &[&Vec<i64>]) -> usize {
    if normals.is_empty() {
        return 0;
    }
    Matrix::from_rows(normals.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect()).unwrap().rank()
}

/// Whitney's subset expansion Σ_B (−1)^{|B|} (−t)^{rank B}.
fn whitney(arr: &Arrangement) -> MultiPoly {
    let vars = t_var();
    let mut p = Poly::zero(&vars);
    let m = arr.len();
    for mask in 0u32..(1 << m) {
        let subset: Vec<&Vec<i64>> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| &arr.normals()[i]).collect();
        let r = rank_of(&subset) as u32;
        let sign = if (subset.len() as u32 + r).is_multiple_of(2) { 1 } else { -1 };
        p.add_term(Monomial::new(vec![r]), int(sign));
    }
    p
}

fn poincare(arr: &Arrangement) -> MultiPoly {
    poincare_polynomial(&intersection_lattice(arr))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn deletion_restriction(arr in arrangement(), pick in any::<prop::sample::Index>()) {
        let h = pick.index(arr.len());
        let t = Poly::var(&t_var(), 0);
        let del = poincare(&arr.delete(h).unwrap());
        let res = poincare(&arr.restrict(h).unwrap());
        prop_assert_eq!(poincare(&arr), &del + &(&t * &res));
    }

    #[test]
    fn matches_whitney_expansion(arr in arrangement()) {
        prop_assert_eq!(poincare(&arr), whitney(&arr));
    }

    #[test]
    fn mobius_signs_alternate(arr in arrangement()) {
        let lat = intersection_lattice(&arr);
        for x in &lat.elements {
            let sign = if x.codim() % 2 == 0 { 1 } else { -1 };
            prop_assert!(x.mobius * sign > 0, "mu = {} at codim {}", x.mobius, x.codim());
        }
        prop_assert_eq!(lat.rank(), arr.rank());
        prop_assert_eq!(lat.level_sizes()[1], arr.len());
    }

    #[test]
    fn poincare_vanishes_at_minus_one(arr in arrangement()) {
        let p = poincare(&arr);
        prop_assert!(p.eval(&[int(-1)]).is_zero());
        prop_assert!(p.terms().all(|(_, c)| c.is_positive()));
        prop_assert_eq!(p.coeff(&Monomial::new(vec![1])), int(arr.len() as i64));
    }

    #[test]
    fn factorization_round_trips(bs in prop::collection::vec(0u64..=7, 1..=4)) {
        let mut bs = bs;
        bs.sort();
        let p = product_of_linear_factors(&bs);
        let got = factorization_check(&p).unwrap();
        let nonzero: Vec<u64> = bs.into_iter().filter(|&b| b > 0).collect();
        prop_assert_eq!(got.factors(), Some(nonzero.as_slice()));
    }
}

/// Arnold: the braid arrangement of n points has Poincaré polynomial
/// Π_{k<n} (1 + kt).
#[test]
fn braid_arrangements_follow_arnold() {
    for n in 2..=5 {
        let expected = product_of_linear_factors(&(1..n as u64).collect::<Vec<_>>());
        assert_eq!(poincare(&Arrangement::from(&braid(n))), expected);
    }
}

#[test]
fn products_multiply() {
    // A × B in ℝ² ⊕ ℝ²: two lines ⊕ three lines.
    let arr = Arrangement::new(
        4,
        vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 1]],
    )
    .unwrap();
    let left = Arrangement::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
    let right = Arrangement::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
    assert_eq!(poincare(&arr), &poincare(&left) * &poincare(&right).with_vars(&t_var()));
}

mod saito {
    use super::*;
    use vee_core::arrangements::saito_criterion;
    use vee_core::families::an_system;
    use vee_core::flatsections::harmonic_test;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        /// Triangular recombination X₃ ↦ X₃ + ℓ·X₂ keeps a basis and its determinant.
        #[test]
        fn certificate_survives_unimodular_recombination(l in prop::collection::vec(-3i64..=3, 3), swap in any::<bool>()) {
            let sys = an_system(&[int(1), int(2), int(3), int(4)]).unwrap();
            let res = harmonic_test(&sys).unwrap();
            let base = saito_criterion(&sys, &res.sections).unwrap();
            prop_assert!(base.valid);
            let mut fields = res.sections.clone();
            let ell = Poly::linear_form(&sys.vars(), &l.iter().map(|&x| int(x)).collect::<Vec<_>>());
            let shifted: Vec<MultiPoly> =
                fields[2].iter().zip(&fields[1]).map(|(a, b)| a + &(&ell.with_vars(a.vars()) * b)).collect();
            fields[2] = shifted;
            if swap {
                fields.swap(0, 1);
            }
            let cert = saito_criterion(&sys, &fields).unwrap();
            prop_assert!(cert.valid);
            let expected = if swap { -base.det_ratio.clone() } else { base.det_ratio.clone() };
            prop_assert_eq!(cert.det_ratio, expected);
        }
    }
}
