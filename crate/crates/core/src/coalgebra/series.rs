//! Aromatic B-series `sum h^{|alpha|} gamma(alpha) / sigma(alpha) F(alpha)`
//! as polynomials in `(x, h)`.


use super::bseries::eta_value;
use super::functional::CoefficientFunctional;
use crate::algebra::matrix::poly_determinant;
use crate::algebra::{Monomial, Polynomial, Rational};
use crate::field::{AromaEvaluator, QuadraticVectorField};
use crate::graphs::enumerate_multisets;

/// The B-series of `gamma` over its whole support.
pub fn series_evaluate(gamma: &CoefficientFunctional, f: &QuadraticVectorField) -> Polynomial {
    series_evaluate_with(gamma, &AromaEvaluator::new(f))
}

pub fn series_evaluate_with(gamma: &CoefficientFunctional, eval: &AromaEvaluator<'_>) -> Polynomial {
    let f = eval.field();
    let mut out = Polynomial::zero(f.nvars());
    for (m, v) in gamma.iter() {
        let c = v / Rational::from_integer(m.symmetry().into());
        let fm = eval.multiset(m);
        if fm.is_zero() {
            continue;
        }
        out += &fm.scale(&c).mul_monomial(Monomial::var(f.h_var(), m.order() as u32));
    }
    out
}

/// The B-series of the characters `eta_u` with `u` symbolic, over variables
/// `(x, h, u)`: every product of cycles of order at most `max_order`.
pub fn newton_series(f: &QuadraticVectorField, max_order: usize) -> Polynomial {
    let eval = AromaEvaluator::new(f);
    let nv = f.nvars() + 1;
    let (hv, uv) = (f.h_var(), f.nvars());
    let one = Rational::from_integer(1.into());
    let mut out = Polynomial::zero(nv);
    for m in enumerate_multisets(max_order, Some(1)) {
        let fm = eval.multiset(&m);
        if fm.is_zero() {
            continue;
        }
        let k = m.order() as u32;
        let c = eta_value(&one, &m) / Rational::from_integer(m.symmetry().into());
        let hu = Monomial::var(hv, k).mul(Monomial::var(uv, k));
        out += &fm.embed(nv).scale(&c).mul_monomial(hu);
    }
    out
}

/// `det(I + u h f'(x))` over `(x, h, u)`.
pub fn det_identity_plus_uhf(f: &QuadraticVectorField) -> Polynomial {
    let n = f.dim();
    let nv = f.nvars() + 1;
    let uh = &Polynomial::var(nv, f.h_var()) * &Polynomial::var(nv, f.nvars());
    let jac = f.jacobian();
    let m: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = &uh * &jac[i][j].embed(nv);
                    if i == j {
                        e += &Polynomial::one(nv);
                    }
                    e
                })
                .collect()
        })
        .collect();
    poly_determinant(&m, nv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::coalgebra::bseries::eta_functional;
    use crate::field::det_shifted;
    use rand::SeedableRng;

    #[test]
    fn eta_series_is_the_shifted_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..=3 {
            let f = QuadraticVectorField::random(&mut rng, n, false, 3, 2);
            for u in [rat(-1, 2), rat(1, 2)] {
                assert_eq!(series_evaluate(&eta_functional(&u, n), &f), det_shifted(&f, &u), "n={n}");
            }
        }
    }

    #[test]
    fn symbolic_newton_identity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
        let s = newton_series(&f, 4);
        assert_eq!(s.truncate(f.h_var(), 2), det_identity_plus_uhf(&f));
        assert!(s.truncate(f.h_var(), 4).coefficient_of(f.h_var(), 3).is_zero());
        assert!(s.coefficient_of(f.h_var(), 4).is_zero());
    }
}
