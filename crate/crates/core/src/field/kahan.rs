//! Kahan's discretization `x' = x + h (I - h/2 f'(x))^{-1} f(x)` as an exact
//! birational map, with all components over the common denominator
//! `det(I - h/2 f'(x))`.

use num_traits::One;

use super::quadratic::{coordinate, h_power, QuadraticVectorField};
use crate::algebra::matrix::{poly_adjugate, poly_determinant};
use crate::algebra::ratfunc::rf_substitute;
use crate::algebra::series::series_in_h;
use crate::algebra::{Polynomial, Rational, RationalFunction};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct KahanMap {
    field: QuadraticVectorField,
    numerators: Vec<Polynomial>,
    denominator: Polynomial,
}

/// `I + c h f'(x)` with polynomial entries.
pub fn shifted_jacobian(f: &QuadraticVectorField, c: &Rational) -> Vec<Vec<Polynomial>> {
    let n = f.dim();
    let ch = h_power(n, 1, c.clone());
    let jac = f.jacobian();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = &ch * &jac[i][j];
                    if i == j {
                        e += &Polynomial::one(f.nvars());
                    }
                    e
                })
                .collect()
        })
        .collect()
}

/// `det(I + c h f'(x))` as a polynomial in `(x, h)`.
pub fn det_shifted(f: &QuadraticVectorField, c: &Rational) -> Polynomial {
    poly_determinant(&shifted_jacobian(f, c), f.nvars())
}

impl KahanMap {
    pub fn new(f: &QuadraticVectorField) -> Self {
        let n = f.dim();
        let half = Rational::new((-1).into(), 2.into());
        let m = shifted_jacobian(f, &half);
        let det = poly_determinant(&m, f.nvars());
        let adj = poly_adjugate(&m, f.nvars());
        let h = h_power(n, 1, Rational::one());
        let numerators = (0..n)
            .map(|i| {
                let mut adj_f = Polynomial::zero(f.nvars());
                for j in 0..n {
                    if !adj[i][j].is_zero() {
                        adj_f += &(&adj[i][j] * &f.components()[j]);
                    }
                }
                &(&coordinate(n, i) * &det) + &(&h * &adj_f)
            })
            .collect();
        KahanMap { field: f.clone(), numerators, denominator: det }
    }

    pub fn field(&self) -> &QuadraticVectorField {
        &self.field
    }

    pub fn numerators(&self) -> &[Polynomial] {
        &self.numerators
    }

    /// `det(I - h/2 f'(x))`.
    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn components(&self) -> Vec<RationalFunction> {
        self.numerators
            .iter()
            .map(|p| RationalFunction::new(p.clone(), self.denominator.clone()).unwrap())
            .collect()
    }

    /// The map with step `-h`.
    pub fn reversed(&self) -> KahanMap {
        let hv = self.field.h_var();
        let m1 = -Rational::one();
        KahanMap {
            field: self.field.clone(),
            numerators: self.numerators.iter().map(|p| p.scale_var(hv, &m1)).collect(),
            denominator: self.denominator.scale_var(hv, &m1),
        }
    }

    /// `det(I + h/2 f'(Phi)) / det(I - h/2 f'(x))`, with the inner
    /// denominator cleared.
    pub fn det_jacobian(&self) -> RationalFunction {
        let n = self.field.dim();
        let half = Rational::new(1.into(), 2.into());
        let plus = det_shifted(&self.field, &half);
        let num = rf_substitute(&plus, &self.components(), n as u32).unwrap();
        RationalFunction::new(num, self.denominator.pow(n as u32 + 1)).unwrap()
    }

    /// Determinant of the Jacobian of the map, differentiated directly.
    pub fn det_jacobian_direct(&self) -> RationalFunction {
        let n = self.field.dim();
        let d = &self.denominator;
        let dd: Vec<Polynomial> = (0..n).map(|j| d.partial_derivative(j)).collect();
        let rows: Vec<Vec<Polynomial>> = self
            .numerators
            .iter()
            .map(|p| (0..n).map(|j| &(&p.partial_derivative(j) * d) - &(p * &dd[j])).collect())
            .collect();
        let num = poly_determinant(&rows, self.field.nvars());
        RationalFunction::new(num, d.pow(2 * n as u32)).unwrap()
    }

    /// Component-wise h-expansion of the map: entry `k` holds the `h^k`
    /// coefficients.
    pub fn series_in_h(&self, order: u32) -> Result<Vec<Vec<Polynomial>>> {
        let hv = self.field.h_var();
        let per_component: Vec<Vec<Polynomial>> = self
            .components()
            .iter()
            .map(|r| series_in_h(r, hv, order))
            .collect::<Result<_>>()?;
        Ok((0..=order as usize).map(|k| per_component.iter().map(|c| c[k].clone()).collect()).collect())
    }
}

/// Closed-form h-expansion: `x + sum_{k>=1} 2^{1-k} (f')^{k-1} f h^k`.
/// Entry `k` holds the vector coefficient of `h^k`.
pub fn kahan_series(f: &QuadraticVectorField, order: u32) -> Vec<Vec<Polynomial>> {
    let n = f.dim();
    let jac = f.jacobian();
    let mut out = vec![(0..n).map(|i| coordinate(n, i)).collect::<Vec<_>>()];
    let mut v = f.components().to_vec();
    let mut scale = Rational::one();
    for k in 1..=order {
        if k > 1 {
            v = (0..n)
                .map(|i| {
                    (0..n).fold(Polynomial::zero(f.nvars()), |acc, j| {
                        if jac[i][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&jac[i][j] * &v[j])
                        }
                    })
                })
                .collect();
            scale /= Rational::from_integer(2.into());
        }
        out.push(v.iter().map(|p| p.scale(&scale)).collect());
    }
    out
}

/// Compares two maps with one shared denominator each, by cross-multiplication.
pub fn maps_equal(a: &[RationalFunction], b: &[RationalFunction]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

/// Whether the map is the identity on `x_1..x_dim`.
pub fn is_identity(map: &[RationalFunction], dim: usize) -> bool {
    map.iter().enumerate().all(|(i, r)| {
        let lhs = r.num();
        let rhs = &coordinate(dim, i) * r.den();
        (lhs - &rhs).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use serde_json::json;

    fn field(v: serde_json::Value) -> QuadraticVectorField {
        QuadraticVectorField::from_json(&v).unwrap()
    }

    #[test]
    fn zero_field_gives_identity() {
        let k = KahanMap::new(&QuadraticVectorField::zero(2));
        assert!(is_identity(&k.components(), 2));
        assert_eq!(k.det_jacobian(), RationalFunction::from_polynomial(Polynomial::one(3)));
    }

    #[test]
    fn one_dimensional_square() {
        // f = x^2: x' = x / (1 - h x), det = 1 / (1 - h x)^2
        let k = KahanMap::new(&field(json!({"dim": 1, "quadratic": [[1,1,1,"1"]]})));
        let x = coordinate(1, 0);
        let one = Polynomial::one(2);
        let d = &one - &(&x * &h_power(1, 1, int(1)));
        let expect = RationalFunction::new(x, d.clone()).unwrap();
        assert_eq!(k.components()[0], expect);
        let det = RationalFunction::new(one, &d * &d).unwrap();
        assert_eq!(k.det_jacobian(), det);
        assert_eq!(k.det_jacobian_direct(), det);
    }

    #[test]
    fn linear_field_is_the_cayley_transform() {
        // f = lambda x: x' = (1 + h lambda / 2) / (1 - h lambda / 2) x
        let k = KahanMap::new(&field(json!({"dim": 1, "linear": [[1,1,"3"]]})));
        let x = coordinate(1, 0);
        let one = Polynomial::one(2);
        let num = &x * &(&one + &h_power(1, 1, rat(3, 2)));
        let den = &one - &h_power(1, 1, rat(3, 2));
        assert_eq!(k.components()[0], RationalFunction::new(num, den).unwrap());
    }

    #[test]
    fn series_matches_closed_form() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(11);
        let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
        let k = KahanMap::new(&f);
        assert_eq!(k.series_in_h(5).unwrap(), kahan_series(&f, 5));
        let s = kahan_series(&f, 2);
        assert_eq!(s[1], f.components().to_vec());
    }

    #[test]
    fn self_adjoint() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(5);
        let f = QuadraticVectorField::random(&mut rng, 2, false, 3, 2);
        let k = KahanMap::new(&f);
        let back = k.reversed().components();
        let composed: Vec<RationalFunction> =
            k.components().iter().map(|c| c.compose(&back).unwrap()).collect();
        assert!(composed.iter().enumerate().all(|(i, r)| *r == RationalFunction::from_polynomial(coordinate(2, i))));
    }
}
