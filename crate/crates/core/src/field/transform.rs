//! Affine changes of coordinates and canonical Hamiltonian fields.

use num_traits::{One, Zero};

use super::kahan::KahanMap;
use super::quadratic::{coordinate, h_power, QuadraticVectorField};
use crate::algebra::matrix::poly_adjugate;
use crate::algebra::{Polynomial, Rational, RationalFunction, RationalMatrix};
use crate::error::{Error, Result};

/// The field `g(x) = A^{-1} f(A x + v)`.
pub fn affine_pullback(f: &QuadraticVectorField, a: &RationalMatrix, v: &[Rational]) -> Result<QuadraticVectorField> {
    let n = f.dim();
    if a.rows() != n || a.cols() != n || v.len() != n {
        return Err(Error::Dimension(format!("affine map must be {n}x{n} with a length-{n} shift")));
    }
    let inv = a.inverse()?;
    let images = affine_images(a, v, f.nvars());
    let fa: Vec<Polynomial> = f.components().iter().map(|p| p.substitute(&images)).collect();
    let g: Vec<Polynomial> = (0..n)
        .map(|i| {
            (0..n).fold(Polynomial::zero(f.nvars()), |acc, j| {
                if inv.get(i, j).is_zero() {
                    acc
                } else {
                    &acc + &fa[j].scale(inv.get(i, j))
                }
            })
        })
        .collect();
    QuadraticVectorField::from_components(&g)
}

/// The polynomials `(A x + v)_i` over `nvars` variables.
pub fn affine_images(a: &RationalMatrix, v: &[Rational], nvars: usize) -> Vec<Polynomial> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut p = Polynomial::constant(nvars, v[i].clone());
            for j in 0..n {
                if !a.get(i, j).is_zero() {
                    p += &Polynomial::var(nvars, j).scale(a.get(i, j));
                }
            }
            p
        })
        .collect()
}

/// The field `J grad H` for a constant skew `J` and `H` of degree at most 3.
/// `H` may be given over `n` or `n + 1` variables.
pub fn hamiltonian_field(j: &RationalMatrix, hamiltonian: &Polynomial) -> Result<QuadraticVectorField> {
    let n = j.rows();
    if j.cols() != n {
        return Err(Error::Dimension("Poisson matrix must be square".into()));
    }
    if !j.is_skew() {
        return Err(Error::NotSkew);
    }
    let h = embed_hamiltonian(hamiltonian, n)?;
    let grad: Vec<Polynomial> = (0..n).map(|i| h.partial_derivative(i)).collect();
    let comps: Vec<Polynomial> = (0..n)
        .map(|i| {
            (0..n).fold(Polynomial::zero(n + 1), |acc, k| {
                if j.get(i, k).is_zero() {
                    acc
                } else {
                    &acc + &grad[k].scale(j.get(i, k))
                }
            })
        })
        .collect();
    QuadraticVectorField::from_components(&comps)
}

fn embed_hamiltonian(hamiltonian: &Polynomial, n: usize) -> Result<Polynomial> {
    let h = match hamiltonian.nvars() {
        k if k == n => hamiltonian.embed(n + 1),
        k if k == n + 1 => {
            if hamiltonian.degree_in(n) > 0 {
                return Err(Error::InvalidParameters("the Hamiltonian must not depend on h".into()));
            }
            hamiltonian.clone()
        }
        k => return Err(Error::ArityMismatch { expected: n, found: k }),
    };
    let d = h.total_degree();
    if d > 3 {
        return Err(Error::DegreeTooHigh { allowed: 3, found: d });
    }
    Ok(h)
}

/// The modified Hamiltonian `H + (h/3) grad H^T (I - h/2 f')^{-1} f` with
/// `f = J grad H`, which the Kahan map preserves exactly.
pub fn modified_hamiltonian(j: &RationalMatrix, hamiltonian: &Polynomial) -> Result<RationalFunction> {
    let f = hamiltonian_field(j, hamiltonian)?;
    let n = f.dim();
    let h = embed_hamiltonian(hamiltonian, n)?;
    let kahan = KahanMap::new(&f);
    let det = kahan.denominator();
    let half = Rational::new((-1).into(), 2.into());
    let m = super::kahan::shifted_jacobian(&f, &half);
    let adj = poly_adjugate(&m, f.nvars());
    let grad: Vec<Polynomial> = (0..n).map(|i| h.partial_derivative(i)).collect();
    let mut quad = Polynomial::zero(f.nvars());
    for a in 0..n {
        if grad[a].is_zero() {
            continue;
        }
        let mut row = Polynomial::zero(f.nvars());
        for b in 0..n {
            if !adj[a][b].is_zero() {
                row += &(&adj[a][b] * &f.components()[b]);
            }
        }
        quad += &(&grad[a] * &row);
    }
    let third = h_power(n, 1, Rational::new(1.into(), 3.into()));
    let num = &(&h * det) + &(&third * &quad);
    RationalFunction::new(num, det.clone())
}

/// `sum_i c_i x_i` over `dim + 1` variables.
pub fn linear_form(c: &[Rational]) -> Polynomial {
    let n = c.len();
    c.iter().enumerate().fold(Polynomial::zero(n + 1), |acc, (i, ci)| &acc + &coordinate(n, i).scale(ci))
}

/// The standard symplectic matrix of size `2m`.
pub fn canonical_poisson(m: usize) -> RationalMatrix {
    let mut j = RationalMatrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        j.set(i, m + i, Rational::one());
        j.set(m + i, i, -Rational::one());
    }
    j
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::algebra::ratfunc::rf_substitute;
    use serde_json::json;

    #[test]
    fn identity_pullback() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        let f = QuadraticVectorField::random(&mut rng, 3, false, 4, 3);
        let g = affine_pullback(&f, &RationalMatrix::identity(3), &[int(0), int(0), int(0)]).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn scaling_x_squared() {
        let f = QuadraticVectorField::from_json(&json!({"dim": 1, "quadratic": [[1,1,1,"1"]]})).unwrap();
        let a = RationalMatrix::identity(1).scale(&int(2));
        let g = affine_pullback(&f, &a, &[int(0)]).unwrap();
        assert_eq!(g.quadratic_coeff(0, 0, 0), &int(2));
        assert!(affine_pullback(&f, &RationalMatrix::zeros(1, 1), &[int(0)]).is_err());
    }

    #[test]
    fn skew_and_degree_checks() {
        let x = Polynomial::var(2, 0);
        let sym = RationalMatrix::identity(2);
        assert_eq!(hamiltonian_field(&sym, &x).unwrap_err(), Error::NotSkew);
        let quartic = x.pow(4);
        assert!(matches!(
            modified_hamiltonian(&canonical_poisson(1), &quartic).unwrap_err(),
            Error::DegreeTooHigh { .. }
        ));
        assert!(modified_hamiltonian(&canonical_poisson(1), &Polynomial::zero(2)).unwrap().is_zero());
    }

    #[test]
    fn modified_hamiltonian_of_a_cubic_is_invariant() {
        // H = x^3 / 3 in the plane, f = (0, -x^2)
        let x = Polynomial::var(2, 0);
        let h = x.pow(3).scale(&Rational::new(1.into(), 3.into()));
        let j = canonical_poisson(1);
        let ht = modified_hamiltonian(&j, &h).unwrap();
        let f = hamiltonian_field(&j, &h).unwrap();
        let map = KahanMap::new(&f).components();
        let moved = ht.compose(&map).unwrap();
        assert_eq!(moved, ht);
        // the clearing helper agrees with compose
        let d = ht.num().degree_prefix(2).max(ht.den().degree_prefix(2));
        let num = rf_substitute(ht.num(), &map, d).unwrap();
        assert!(!num.is_zero());
    }
}
