use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vee_core::algebra::{homogeneous_basis, int, rat, Poly};
use vee_core::families::{an_system, bn_system};
use vee_core::flatsections::{epd_check, flat_solve};
use vee_core::potentials::{
    ambient_vars, potential_an, potential_an_determinant, potential_bn, reduce_to_subspace_an, series_oracle_an,
};
use vee_core::veesys::{dual_form, CovectorSystem};
use vee_core::{MultiPoly, Rational};

/// Undivided EPD identity: Q·∂_i∂_jF = κ Σ_α w α_i α_j (Q/α)·∂_{α∨}F for
/// all i ≤ j, with Q the product of all linear forms.
fn epd_cleared(sys: &CovectorSystem, f: &MultiPoly, kappa: u32) -> bool {
    let vars = sys.vars();
    let f = f.with_vars(&vars);
    let gi = dual_form(sys).unwrap();
    let q = sys.defining_polynomial();
    let k = int(kappa.into());
    let n = sys.dimension();
    let terms: Vec<(Vec<Rational>, Rational, MultiPoly)> = sys
        .covectors()
        .iter()
        .map(|c| {
            let v = c.direction_q();
            let (q_over, rem) = q.div_rem_linear(&v);
            assert!(rem.is_zero());
            let grad = f.directional_derivative(&gi.mul_vec(&v));
            (v, c.weight.clone(), &q_over * &grad)
        })
        .collect();
    (0..n).all(|i| {
        (i..n).all(|j| {
            let mut lhs = &q * &f.derivative(i).derivative(j);
            for (v, w, term) in &terms {
                lhs.add_scaled(term, &-(w * &v[i] * &v[j] * &k));
            }
            lhs.is_zero()
        })
    })
}

/// The rational-function form evaluated at points off the arrangement.
fn epd_at_points(sys: &CovectorSystem, f: &MultiPoly, kappa: u32, rng: &mut ChaCha8Rng) -> bool {
    let vars = sys.vars();
    let f = f.with_vars(&vars);
    let gi = dual_form(sys).unwrap();
    let n = sys.dimension();
    let k = int(kappa.into());
    let grads: Vec<MultiPoly> =
        sys.covectors().iter().map(|c| f.directional_derivative(&gi.mul_vec(&c.direction_q()))).collect();
    let mut checked = 0;
    while checked < 5 {
        let x: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-50..=50), rng.gen_range(1..=13))).collect();
        let alphas: Vec<Rational> =
            sys.covectors().iter().map(|c| c.direction_q().iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        if alphas.iter().any(Zero::is_zero) {
            continue;
        }
        for i in 0..n {
            for j in i..n {
                let mut rhs = Rational::zero();
                for ((c, a), g) in sys.covectors().iter().zip(&alphas).zip(&grads) {
                    let v = c.direction_q();
                    rhs += &c.weight * &v[i] * &v[j] * g.eval(&x) / a;
                }
                if f.derivative(i).derivative(j).eval(&x) != &k * rhs {
                    return false;
                }
            }
        }
        checked += 1;
    }
    true
}

fn small_systems() -> Vec<CovectorSystem> {
    vec![
        an_system(&[int(1), int(2), int(3)]).unwrap(),
        an_system(&[int(1), int(1), int(1), int(1)]).unwrap(),
        an_system(&[int(2), int(-1), int(3), int(1)]).unwrap(),
        bn_system(&[int(1), int(1), int(2)]).unwrap(),
        bn_system(&[int(1), int(1), int(2), int(3)]).unwrap(),
    ]
}

#[test]
fn flat_potentials_pass_all_three_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for sys in small_systems() {
        let mut found = 0;
        for kappa in 1..=5 {
            for f in flat_solve(&sys, kappa).unwrap().potentials {
                assert!(epd_check(&sys, &f, kappa).unwrap());
                assert!(epd_cleared(&sys, &f, kappa));
                assert!(epd_at_points(&sys, &f, kappa, &mut rng));
                found += 1;
            }
        }
        assert!(found >= sys.dimension());
    }
}

#[test]
fn divided_form_agrees_with_cleared_form_on_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut accepted, mut rejected) = (0, 0);
    for sys in small_systems() {
        for kappa in 1..=3 {
            let genuine = flat_solve(&sys, kappa).unwrap().potentials;
            let basis = homogeneous_basis(sys.dimension(), kappa + 1);
            for trial in 0..6 {
                // Half the trials perturb a genuine potential, half are noise.
                let mut f = match genuine.first() {
                    Some(g) if trial % 2 == 0 => g.with_vars(&sys.vars()),
                    _ => Poly::zero(&sys.vars()),
                };
                if trial % 3 != 0 || f.is_zero() {
                    let b = &basis[rng.gen_range(0..basis.len())];
                    f.add_scaled(&b.with_vars(&sys.vars()), &rat(rng.gen_range(1..=5), rng.gen_range(1..=3)));
                }
                let divided = epd_check(&sys, &f, kappa).unwrap();
                assert_eq!(divided, epd_cleared(&sys, &f, kappa), "{f}");
                if divided {
                    accepted += 1;
                } else {
                    rejected += 1;
                }
            }
        }
    }
    assert!(accepted > 0 && rejected > 0);
}

fn nonzero_c(len: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=6, 1i64..=3, any::<bool>()), len)
        .prop_map(|v| v.into_iter().map(|(n, d, neg)| rat(if neg { -n } else { n }, d)).collect::<Vec<_>>())
        .prop_filter("sigma must not vanish", |c| !c.iter().sum::<Rational>().is_zero())
}

fn permuted<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&i| v[i].clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn an_forms_agree(c in (2usize..=4).prop_flat_map(nonzero_c), kappa in 1u32..=3) {
        prop_assume!(kappa < c.len() as u32);
        let p = potential_an(&c, kappa).unwrap();
        prop_assert_eq!(&p, &potential_an_determinant(&c, kappa).unwrap());
        prop_assert_eq!(&p, &series_oracle_an(&c, kappa).unwrap());
        prop_assert_eq!(p.homogeneous_degree(), Some(kappa + 1));
    }

    #[test]
    fn an_potential_is_symmetric(c in nonzero_c(4), perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle(), kappa in 1u32..=3) {
        let f = potential_an(&c, kappa).unwrap();
        let g = potential_an(&permuted(&c, &perm), kappa).unwrap();
        let vars = ambient_vars(3);
        let images: Vec<MultiPoly> = (0..4).map(|i| Poly::var(&vars, perm.iter().position(|&p| p == i).unwrap())).collect();
        prop_assert_eq!(f.substitute(&images), g);
    }

    #[test]
    fn bn_potential_is_even_and_symmetric(c in nonzero_c(4), flip in 0usize..3, k in 1u32..=2) {
        let f = potential_bn(&c, k).unwrap();
        let vars = f.vars().clone();
        let n = f.nvars();
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let x = Poly::var(&vars, i);
                if i == flip % n { -&x } else { x }
            })
            .collect();
        prop_assert_eq!(f.substitute(&images), f.clone());
        let mut swapped_c = c.clone();
        swapped_c.swap(1, 2);
        let swap: Vec<MultiPoly> = (0..n).map(|i| Poly::var(&vars, match i { 0 => 1, 1 => 0, j => j })).collect();
        prop_assert_eq!(f.substitute(&swap), potential_bn(&swapped_c, k).unwrap());
    }

    #[test]
    fn reduced_an_potentials_are_flat(c in (3usize..=4).prop_flat_map(nonzero_c), kappa in 1u32..=3) {
        prop_assume!(kappa < c.len() as u32);
        let sys = an_system(&c).unwrap();
        let f = reduce_to_subspace_an(&potential_an(&c, kappa).unwrap(), &c).unwrap();
        prop_assert!(epd_check(&sys, &f, kappa).unwrap());
        prop_assert!(epd_cleared(&sys, &f, kappa));
    }
}

#[test]
fn first_potential_of_two_points() {
    // λ = (1/2, 1/2): F₁ = −p₂/2 + p₁²/2 = −(x₀ − x₁)²/8.
    let f = potential_an(&[int(1), int(1)], 1).unwrap();
    let vars = ambient_vars(1);
    let d = &Poly::var(&vars, 0) - &Poly::var(&vars, 1);
    assert_eq!(f, (&d * &d).scale(&rat(-1, 8)));
}
