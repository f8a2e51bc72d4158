//! Exact checks of the Darboux identity `P(Phi(x)) = det DPhi(x) P(x)`.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::modular::PrimeField;
use crate::algebra::rational::random_rational;
use crate::algebra::ratfunc::rf_substitute;
use crate::algebra::{Polynomial, Rational};
use crate::field::{det_shifted, KahanMap, QuadraticVectorField};

/// The pieces of the Kahan map the identity needs, computed once per field.
pub struct DarbouxContext {
    pub map: KahanMap,
    /// `det(I + h/2 f'(x))`.
    pub plus: Polynomial,
}

impl DarbouxContext {
    pub fn new(f: &QuadraticVectorField) -> Self {
        DarbouxContext { map: KahanMap::new(f), plus: det_shifted(f, &Rational::new(1.into(), 2.into())) }
    }

    pub fn field(&self) -> &QuadraticVectorField {
        self.map.field()
    }

    /// `det^E [det P(Phi) - P det(I + h/2 f'(Phi))]` with the smallest `E`
    /// that clears all denominators.
    pub fn residual(&self, p: &Polynomial) -> Polynomial {
        let n = self.field().dim();
        let phi = self.map.components();
        let det = self.map.denominator();
        let dp = p.degree_prefix(n);
        let e = dp.saturating_sub(1).max(n as u32);
        let a = rf_substitute(p, &phi, dp).expect("shared denominator");
        let b = rf_substitute(&self.plus, &phi, n as u32).expect("shared denominator");
        &(&det.pow(e + 1 - dp) * &a) - &(&det.pow(e - n as u32) * &(p * &b))
    }

    /// The uncleared residual at one point modulo `field.modulus()`; `None`
    /// when the point is singular there.
    pub fn residual_mod(&self, p: &Polynomial, field: &PrimeField, point: &[u64]) -> Option<u64> {
        let n = self.field().dim();
        let det = self.map.denominator().to_mod(field)?.eval(field, point);
        let inv = field.inv(det)?;
        let mut image: Vec<u64> = Vec::with_capacity(n + 1);
        for num in self.map.numerators() {
            image.push(field.mul(num.to_mod(field)?.eval(field, point), inv));
        }
        image.push(point[n]);
        let pm = p.to_mod(field)?;
        let lhs = field.mul(det, pm.eval(field, &image));
        let rhs = field.mul(pm.eval(field, point), self.plus.to_mod(field)?.eval(field, &image));
        Some(field.sub(lhs, rhs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensityCheck {
    Verified,
    /// A point `(x, h)` where the cleared residual is nonzero, with its value.
    Counterexample { point: Vec<Rational>, residual: Rational },
}

impl DensityCheck {
    pub fn is_verified(&self) -> bool {
        matches!(self, DensityCheck::Verified)
    }
}

/// Exact verification; on failure, a witness point from a seeded search.
pub fn verify_density(f: &QuadraticVectorField, p: &Polynomial) -> DensityCheck {
    let ctx = DarbouxContext::new(f);
    let r = ctx.residual(&lift(p, f.nvars()));
    if r.is_zero() {
        return DensityCheck::Verified;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let n = f.dim();
    loop {
        let point: Vec<Rational> = (0..=n).map(|_| random_rational(&mut rng, 20, 7)).collect();
        let v = r.eval(&point);
        if !v.is_zero() && !ctx.map.denominator().eval(&point).is_zero() {
            return DensityCheck::Counterexample { point, residual: v };
        }
    }
}

/// `p` over the field's variables; a polynomial in `x` alone is embedded.
pub(crate) fn lift(p: &Polynomial, nvars: usize) -> Polynomial {
    if p.nvars() == nvars {
        p.clone()
    } else {
        p.embed(nvars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::transform::canonical_poisson;
    use crate::field::hamiltonian_field;
    use crate::field::quadratic::coordinate;

    #[test]
    fn hamiltonian_determinant_is_a_density() {
        let x = Polynomial::var(2, 0);
        let y = Polynomial::var(2, 1);
        let h = &(&x.pow(3) + &(&x * &y.pow(2))) + &y.pow(2);
        let f = hamiltonian_field(&canonical_poisson(1), &h).unwrap();
        let ctx = DarbouxContext::new(&f);
        let p = ctx.map.denominator().clone();
        assert_eq!(verify_density(&f, &p), DensityCheck::Verified);
    }

    #[test]
    fn a_coordinate_is_not_a_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
        match verify_density(&f, &coordinate(2, 0)) {
            DensityCheck::Counterexample { point, residual } => {
                assert!(!residual.is_zero());
                let ctx = DarbouxContext::new(&f);
                assert_eq!(ctx.residual(&coordinate(2, 0)).eval(&point), residual);
            }
            DensityCheck::Verified => panic!("x is not a density"),
        }
    }
}
