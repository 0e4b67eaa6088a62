use num_traits::{One, Zero};
use proptest::prelude::*;
use vee_core::algebra::{monomials_of_degree, poly_determinant, rat, Matrix, Monomial, Poly, SparseSystem, Vars};
use vee_core::{MultiPoly, RatMatrix, Rational};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn poly3() -> impl Strategy<Value = MultiPoly> {
    let vars = Vars::indexed("x", 1, 3);
    let monos: Vec<Monomial> = (0..=3).flat_map(|d| monomials_of_degree(3, d)).collect();
    prop::collection::vec((0..monos.len(), small_rational()), 0..6).prop_map(move |terms| {
        let mut p = Poly::zero(&vars);
        for (i, c) in terms {
            p.add_term(monos[i].clone(), c);
        }
        p
    })
}

fn matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(small_rational(), n * n)
        .prop_map(move |v| Matrix::from_rows(v.chunks(n).map(<[Rational]>::to_vec).collect()).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&b), &a - &b);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly3(), b in poly3(), x in point()) {
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
    }

    #[test]
    fn leibniz_rule(a in poly3(), b in poly3(), i in 0usize..3) {
        let lhs = (&a * &b).derivative(i);
        let rhs = &(&a.derivative(i) * &b) + &(&a * &b.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute(a in poly3()) {
        prop_assert_eq!(a.derivative(0).derivative(2), a.derivative(2).derivative(0));
    }

    #[test]
    fn linear_division_reconstructs(a in poly3(), form in prop::collection::vec(-3i64..=3, 3)) {
        prop_assume!(form.iter().any(|&f| f != 0));
        let form: Vec<Rational> = form.into_iter().map(|f| rat(f, 1)).collect();
        let (q, r) = a.div_rem_linear(&form);
        let l = Poly::linear_form(a.vars(), &form);
        prop_assert_eq!(&(&q * &l) + &r, a.clone());
        let product = &a * &l;
        prop_assert!(product.divisible_by_linear(&form));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        let ab = &a * &b;
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
        prop_assert_eq!(a.transpose().determinant().unwrap(), a.determinant().unwrap());
    }

    #[test]
    fn rank_nullity(v in prop::collection::vec(-2i64..=2, 12)) {
        let m = Matrix::from_rows(v.chunks(4).map(|r| r.iter().map(|&x| rat(x, 1)).collect()).collect()).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), 4);
        for k in &kernel {
            prop_assert!(m.mul_vec(k).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_is_two_sided(a in matrix(3)) {
        match a.inverse() {
            Some(inv) => {
                prop_assert_eq!(&a * &inv, Matrix::identity(3));
                prop_assert_eq!(&inv * &a, Matrix::identity(3));
            }
            None => prop_assert!(a.determinant().unwrap().is_zero()),
        }
    }

    #[test]
    fn multimodular_kernel_matches_exact(v in prop::collection::vec((-20i64..=20, 1i64..=7), 15)) {
        let mut sys = SparseSystem::new(5);
        for row in v.chunks(5).take(2) {
            sys.push_row(row.iter().enumerate().map(|(j, &(n, d))| (j, rat(n, d))));
        }
        let fast = sys.kernel();
        let exact = sys.kernel_exact();
        prop_assert_eq!(fast.len(), exact.len());
        for k in &fast {
            prop_assert!(sys.is_solution(k));
        }
        let stacked = Matrix::from_rows(fast.iter().chain(&exact).cloned().collect()).unwrap();
        prop_assert_eq!(stacked.rank(), exact.len());
    }

    #[test]
    fn polynomial_determinant_agrees_with_evaluation(
        entries in prop::collection::vec(poly3(), 4),
        x in point(),
    ) {
        let rows = vec![entries[0..2].to_vec(), entries[2..4].to_vec()];
        let det = poly_determinant(&rows);
        let numeric = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|p| p.eval(&x)).collect()).collect())
            .unwrap()
            .determinant()
            .unwrap();
        prop_assert_eq!(det.eval(&x), numeric);
    }
}

#[test]
fn one_is_multiplicative_identity() {
    let vars = Vars::indexed("x", 1, 2);
    let p = &Poly::var(&vars, 0) + &Poly::constant(&vars, rat(3, 2));
    let one = Poly::constant(&vars, Rational::one());
    assert_eq!(&p * &one, p);
}
