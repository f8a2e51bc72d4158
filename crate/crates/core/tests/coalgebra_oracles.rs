//! The coalgebra operations checked against direct manipulation of the
//! series they stand for.

use kahan_aromas::algebra::rational::{random_rational, rat};
use kahan_aromas::algebra::{Polynomial, Rational};
use kahan_aromas::coalgebra::series::det_identity_plus_uhf;
use kahan_aromas::coalgebra::{
    compose_with_bseries, eta_functional, multiply_functionals, newton_series, q_functional, series_evaluate,
    CoefficientFunctional, ForestFunctional,
};
use kahan_aromas::field::{det_shifted, kahan_series, QuadraticVectorField};
use kahan_aromas::graphs::enumerate_multisets;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_gamma(rng: &mut ChaCha8Rng, support: usize, truncation: usize) -> CoefficientFunctional {
    let mut g = CoefficientFunctional::new(truncation);
    for m in enumerate_multisets(support, Some(2)) {
        g.set(m, random_rational(rng, 4, 3)).unwrap();
    }
    g
}

/// `p(Phi(x), h)` through `h^order`, from the closed-form expansion of the map.
fn pull_back(f: &QuadraticVectorField, p: &Polynomial, order: u32) -> Polynomial {
    let series = kahan_series(f, order);
    let hv = f.h_var();
    let phi: Vec<Polynomial> = (0..f.dim())
        .map(|i| {
            series.iter().enumerate().fold(Polynomial::zero(f.nvars()), |acc, (k, c)| {
                &acc + &(&c[i] * &Polynomial::var(f.nvars(), hv).pow(k as u32))
            })
        })
        .collect();
    p.substitute_truncated(&phi, hv, order)
}

#[test]
fn central_identity_through_h5() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..10 {
        let n = 2 + trial % 2;
        let f = QuadraticVectorField::random(&mut rng, n, false, 3, 2);
        let gamma = random_gamma(&mut rng, 3, 5);
        let hv = f.h_var();
        let p = series_evaluate(&gamma, &f);
        let lhs = &(&det_shifted(&f, &rat(-1, 2)) * &pull_back(&f, &p, 5))
            - &(&p * &pull_back(&f, &det_shifted(&f, &rat(1, 2)), 5));
        let rhs = series_evaluate(&q_functional(&gamma, 5).unwrap(), &f);
        assert_eq!(lhs.truncate(hv, 5), rhs, "trial {trial}");
    }
}

#[test]
fn product_of_series_is_series_of_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
    let a = random_gamma(&mut rng, 4, 4);
    let b = random_gamma(&mut rng, 4, 4);
    let lhs = (&series_evaluate(&a, &f) * &series_evaluate(&b, &f)).truncate(f.h_var(), 4);
    assert_eq!(lhs, series_evaluate(&multiply_functionals(&a, &b), &f));
}

#[test]
fn composition_with_the_kahan_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for n in [2, 3] {
        let f = QuadraticVectorField::random(&mut rng, n, false, 3, 2);
        let gamma = random_gamma(&mut rng, 4, 4);
        let lhs = pull_back(&f, &series_evaluate(&gamma, &f), 4);
        let composed = compose_with_bseries(&ForestFunctional::Kahan, &gamma).unwrap();
        assert_eq!(lhs, series_evaluate(&composed, &f), "n={n}");
    }
}

#[test]
fn composition_with_explicit_euler() {
    // Euler: 1 on the single vertex, 0 on larger trees
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
    let gamma = random_gamma(&mut rng, 3, 3);
    let hv = f.h_var();
    let euler: Vec<Polynomial> = (0..2)
        .map(|i| &Polynomial::var(3, i) + &(&Polynomial::var(3, hv) * &f.components()[i]))
        .collect();
    let lhs = series_evaluate(&gamma, &f).substitute_truncated(&euler, hv, 3);
    let b = ForestFunctional::Multiplicative([("[]".to_string(), Rational::from_integer(1.into()))].into());
    assert_eq!(lhs, series_evaluate(&compose_with_bseries(&b, &gamma).unwrap(), &f));
}

#[test]
fn girard_newton_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for trial in 0..20 {
        let d = 2 + trial % 3;
        // f = A x has constant Jacobian A
        let linear: Vec<(usize, usize, Rational)> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, random_rational(&mut rng, 5, 3)))
            .collect();
        let mut l = vec![vec![Rational::zero(); d]; d];
        for (i, j, v) in linear {
            l[i][j] = v;
        }
        let f = QuadraticVectorField::new(vec![vec![vec![Rational::zero(); d]; d]; d], l, vec![Rational::zero(); d])
            .unwrap();
        let s = newton_series(&f, d + 2);
        let hv = f.h_var();
        assert_eq!(s.truncate(hv, d as u32), det_identity_plus_uhf(&f), "d={d}");
        for k in [d + 1, d + 2] {
            assert!(s.coefficient_of(hv, k as u32).is_zero(), "d={d} k={k}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn eta_characters_multiply(a in -4i64..5, b in -4i64..5, c in 1i64..4) {
        let u = rat(a, c);
        let v = rat(b, c);
        let prod = multiply_functionals(&eta_functional(&u, 4), &eta_functional(&v, 4));
        let mut rng = ChaCha8Rng::seed_from_u64((a * 31 + b * 7 + c) as u64);
        let f = QuadraticVectorField::random(&mut rng, 2, false, 2, 2);
        let lhs = (&det_shifted(&f, &u) * &det_shifted(&f, &v)).truncate(f.h_var(), 4);
        prop_assert_eq!(series_evaluate(&prod, &f), lhs);
    }

    #[test]
    fn multiplication_is_commutative_and_unital(seed in 0u64..1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_gamma(&mut rng, 3, 3);
        let b = random_gamma(&mut rng, 3, 3);
        prop_assert_eq!(multiply_functionals(&a, &b), multiply_functionals(&b, &a));
        let e = CoefficientFunctional::counit(3);
        prop_assert_eq!(multiply_functionals(&a, &e), a.clone());
    }
}
