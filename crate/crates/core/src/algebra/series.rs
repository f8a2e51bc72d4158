//! Taylor expansion of rational functions in one distinguished variable.

use num_traits::One;

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Coefficients of `var^0 .. var^order` of `r` about `var = 0`.
///
/// The constant part of the denominator must be a nonzero constant, so every
/// coefficient is a polynomial.
pub fn series_in_h(r: &RationalFunction, var: usize, order: u32) -> Result<Vec<Polynomial>> {
    let den = r.den();
    let d0 = den.coefficient_of(var, 0);
    if d0.is_zero() {
        return Err(Error::VanishingDenominator);
    }
    if !d0.is_constant() {
        return Err(Error::NonPolynomialSeries);
    }
    let inv = Rational::one() / d0.constant_term();
    let den_k: Vec<Polynomial> = (0..=order).map(|k| den.coefficient_of(var, k)).collect();
    let mut out: Vec<Polynomial> = Vec::with_capacity(order as usize + 1);
    for k in 0..=order {
        let mut c = r.num().coefficient_of(var, k);
        for j in 1..=k {
            if !den_k[j as usize].is_zero() {
                c = &c - &(&den_k[j as usize] * &out[(k - j) as usize]);
            }
        }
        out.push(c.scale(&inv));
    }
    Ok(out)
}

/// Reassembles `sum c_k var^k`.
pub fn from_coefficients(coeffs: &[Polynomial], var: usize) -> Polynomial {
    let nvars = coeffs.first().map_or(1, |c| c.nvars());
    let mut acc = Polynomial::zero(nvars);
    for (k, c) in coeffs.iter().enumerate() {
        acc += &c.mul_monomial(super::poly::Monomial::var(var, k as u32));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // variables: x, y, h
    fn v(i: usize) -> Polynomial {
        Polynomial::var(3, i)
    }

    #[test]
    fn geometric_series() {
        let one = Polynomial::one(3);
        let r = RationalFunction::new(one.clone(), &one - &(&v(2) * &v(0))).unwrap();
        let s = series_in_h(&r, 2, 2).unwrap();
        assert_eq!(s, vec![one, v(0), &v(0) * &v(0)]);
    }

    #[test]
    fn geometric_series_times_x() {
        let one = Polynomial::one(3);
        let r = RationalFunction::new(v(0), &one - &(&v(2) * &v(0))).unwrap();
        assert_eq!(series_in_h(&r, 2, 1).unwrap(), vec![v(0), &v(0) * &v(0)]);
    }

    #[test]
    fn polynomial_input() {
        let one = Polynomial::one(3);
        let p = &one + &(&(&v(2) * &v(2)) * &v(1));
        let s = series_in_h(&RationalFunction::from_polynomial(p), 2, 2).unwrap();
        assert_eq!(s, vec![one, Polynomial::zero(3), v(1)]);
    }

    #[test]
    fn vanishing_denominator() {
        let r = RationalFunction::new(v(0), v(2)).unwrap();
        assert_eq!(series_in_h(&r, 2, 1).unwrap_err(), Error::VanishingDenominator);
        let r = RationalFunction::new(v(0), &v(0) + &v(2)).unwrap();
        assert_eq!(series_in_h(&r, 2, 1).unwrap_err(), Error::NonPolynomialSeries);
    }

    fn arb_h_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..3, 0u32..2, 0u32..3), -5i64..6), 0..5).prop_map(|ts| {
            Polynomial::from_terms(
                3,
                ts.into_iter().map(|((a, b, c), n)| (vec![a, b, c], crate::algebra::rational::int(n))),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn truncated_product_with_denominator_recovers_numerator(num in arb_h_poly(), tail in arb_h_poly(), c0 in 1i64..4) {
            let h = v(2);
            let den = &Polynomial::constant(3, crate::algebra::rational::int(c0)) + &(&h * &tail);
            let r = RationalFunction::new(num.clone(), den.clone()).unwrap();
            let order = 4;
            let s = from_coefficients(&series_in_h(&r, 2, order).unwrap(), 2);
            let diff = &(&s * &den) - &num;
            prop_assert!(diff.truncate(2, order).is_zero());
        }
    }
}
