//! Randomized algebraic identities of the variational bicomplex.

mod support;

use jetvar::forms::JetForm;
use jetvar::kernel::{DiffPoly, JetSpace};
use jetvar::symmetry::{lie_derivative, required_order};
use jetvar::variational::{euler_lagrange_density, lepage_full, LagrangianProblem};
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(100)
}

fn form_of_random_degree(seed: u64) -> (JetSpace, JetForm) {
    let mut r = rng(seed);
    let s = space(3);
    let degree = r.gen_range(0..=4);
    let order = r.gen_range(0..=2);
    let f = random_form(&mut r, &s, degree, order, 3);
    (s, f)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn d_squared_vanishes(seed in any::<u64>()) {
        let (_, f) = form_of_random_degree(seed);
        prop_assert!(f.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn horizontal_d_squared_vanishes(seed in any::<u64>()) {
        let (_, f) = form_of_random_degree(seed);
        prop_assert!(f.horizontal_d().horizontal_d().is_zero());
    }

    #[test]
    fn horizontal_and_vertical_d_anticommute(seed in any::<u64>()) {
        let (_, f) = form_of_random_degree(seed);
        let s = &f.horizontal_d().vertical_d() + &f.vertical_d().horizontal_d();
        prop_assert!(s.is_zero());
        prop_assert!(f.vertical_d().vertical_d().is_zero());
        prop_assert_eq!(&f.horizontal_d() + &f.vertical_d(), f.exterior_d());
    }

    #[test]
    fn contact_components_reconstitute(seed in any::<u64>()) {
        let (_, f) = form_of_random_degree(seed);
        let mut sum = JetForm::zero(f.n(), f.degree());
        for k in 0..=f.degree() {
            sum = &sum + &f.contact_component(k);
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn euler_lagrange_ignores_divergences(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = space(4);
        let l = random_poly(&mut r, &s, 2, 4, 3, true, true);
        let div = random_divergence(&mut r, &s, 2);
        let m = s.m();
        prop_assert_eq!(euler_lagrange_density(m, &(&l + &div)), euler_lagrange_density(m, &l));
        prop_assert!(euler_lagrange_density(m, &div).values().all(DiffPoly::is_zero));
    }

    #[test]
    fn lie_derivative_commutes_with_contact_projection(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = space(3);
        let degree = r.gen_range(1..=4);
        let rho = random_form(&mut r, &s, degree, 1, 3);
        let field = random_projectable_field(&mut r, &s);
        let order = required_order(&rho);
        let lie = lie_derivative(&rho, &field, order).unwrap();
        for k in 0..=degree {
            let lhs = lie.contact_component(k);
            let rhs = lie_derivative(&rho.contact_component(k), &field, order).unwrap();
            prop_assert_eq!(lhs, rhs, "k = {}", k);
        }
    }

    #[test]
    fn interior_product_is_an_antiderivation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = space(3);
        let (p, q) = (r.gen_range(1..=3), r.gen_range(1..=3));
        let alpha = random_form(&mut r, &s, p, 1, 2);
        let beta = random_form(&mut r, &s, q, 1, 2);
        let x = random_frame_vector(&mut r, &s, 1);
        let lhs = alpha.wedge(&beta).interior_product(&x).unwrap();
        let first = alpha.interior_product(&x).unwrap().wedge(&beta);
        let second = alpha.wedge(&beta.interior_product(&x).unwrap());
        let rhs = if p % 2 == 0 { &first + &second } else { &first - &second };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn full_equivalent_of_a_null_lagrangian_is_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = space(2);
        let l = random_first_order_null(&mut r, &s);
        let p = LagrangianProblem::new(s, l, 1).unwrap();
        prop_assert!(lepage_full(&p).unwrap().exterior_d().is_zero());
    }
}
