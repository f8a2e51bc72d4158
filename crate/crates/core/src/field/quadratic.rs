use num_traits::Zero;
use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::poly::json_rational;
use crate::algebra::rational::{format_rational, random_rational};
use crate::algebra::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};

/// `f_i = sum_{j<=k} a[i][j][k] x_j x_k + sum_j b[i][j] x_j + c[i]`.
///
/// Polynomials derived from a field live over `dim + 1` variables: the
/// coordinates followed by the step size `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticVectorField {
    dim: usize,
    quadratic: Vec<Vec<Vec<Rational>>>,
    linear: Vec<Vec<Rational>>,
    constant: Vec<Rational>,
    components: Vec<Polynomial>,
}

impl QuadraticVectorField {
    /// `quadratic[i][j][k]` is read only for `j <= k`.
    pub fn new(
        quadratic: Vec<Vec<Vec<Rational>>>,
        linear: Vec<Vec<Rational>>,
        constant: Vec<Rational>,
    ) -> Result<Self> {
        let n = constant.len();
        if n == 0 || n + 2 > crate::algebra::poly::MAX_VARS {
            return Err(Error::InvalidField(format!("dimension {n} is not supported")));
        }
        let ok = quadratic.len() == n
            && quadratic.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n))
            && linear.len() == n
            && linear.iter().all(|r| r.len() == n);
        if !ok {
            return Err(Error::Dimension("coefficient tensors do not match the dimension".into()));
        }
        let mut quadratic = quadratic;
        for m in quadratic.iter_mut() {
            for j in 0..n {
                for k in 0..j {
                    m[j][k] = Rational::zero();
                }
            }
        }
        let nv = n + 1;
        let components = (0..n)
            .map(|i| {
                let mut terms = Vec::new();
                for j in 0..n {
                    for k in j..n {
                        let mut e = vec![0; nv];
                        e[j] += 1;
                        e[k] += 1;
                        terms.push((Monomial::from_exponents(&e), quadratic[i][j][k].clone()));
                    }
                    terms.push((Monomial::var(j, 1), linear[i][j].clone()));
                }
                terms.push((Monomial::ONE, constant[i].clone()));
                Polynomial::from_monomials(nv, terms)
            })
            .collect();
        Ok(QuadraticVectorField { dim: n, quadratic, linear, constant, components })
    }

    pub fn zero(n: usize) -> Self {
        let z = Rational::zero();
        Self::new(vec![vec![vec![z.clone(); n]; n]; n], vec![vec![z.clone(); n]; n], vec![z; n]).unwrap()
    }

    /// Reads a field from polynomial components in `x_1..x_n` (an extra
    /// trailing `h` variable is allowed but must not occur).
    pub fn from_components(components: &[Polynomial]) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::InvalidField("no components".into()));
        }
        let z = Rational::zero();
        let mut quadratic = vec![vec![vec![z.clone(); n]; n]; n];
        let mut linear = vec![vec![z.clone(); n]; n];
        let mut constant = vec![z; n];
        for (i, p) in components.iter().enumerate() {
            if p.nvars() < n {
                return Err(Error::ArityMismatch { expected: n, found: p.nvars() });
            }
            for (m, c) in p.terms() {
                if (n..p.nvars()).any(|v| m.exponent(v) > 0) {
                    return Err(Error::InvalidField("components depend on a parameter".into()));
                }
                let vars: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(m.exponent(v) as usize)).collect();
                match vars.as_slice() {
                    [] => constant[i] = c.clone(),
                    [j] => linear[i][*j] = c.clone(),
                    [j, k] => quadratic[i][*j][*k] = c.clone(),
                    _ => return Err(Error::DegreeTooHigh { allowed: 2, found: m.degree_prefix(n) }),
                }
            }
        }
        Self::new(quadratic, linear, constant)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of polynomial variables: coordinates plus `h`.
    pub fn nvars(&self) -> usize {
        self.dim + 1
    }

    pub fn h_var(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    /// Stored coefficient of `x_j x_k` in `f_i` (zero for `j > k`).
    pub fn quadratic_coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.quadratic[i][j][k]
    }

    pub fn linear_coeff(&self, i: usize, j: usize) -> &Rational {
        &self.linear[i][j]
    }

    pub fn constant_coeff(&self, i: usize) -> &Rational {
        &self.constant[i]
    }

    /// Symmetrized quadratic tensor: `f_i = sum_{j,k} a_sym[i][j][k] x_j x_k + ...`.
    pub fn a_sym(&self, i: usize, j: usize, k: usize) -> Rational {
        if j == k {
            self.quadratic[i][j][j].clone()
        } else {
            let (j, k) = (j.min(k), j.max(k));
            &self.quadratic[i][j][k] / Rational::from_integer(2.into())
        }
    }

    /// The constant `d^2 f_i / dx_j dx_k = 2 a_sym[i][j][k]`.
    pub fn second_derivative(&self, i: usize, j: usize, k: usize) -> Rational {
        self.a_sym(i, j, k) * Rational::from_integer(2.into())
    }

    /// `jac[i][j] = d f_i / d x_j`.
    pub fn jacobian(&self) -> Vec<Vec<Polynomial>> {
        self.components
            .iter()
            .map(|fi| (0..self.dim).map(|j| fi.partial_derivative(j)).collect())
            .collect()
    }

    pub fn divergence(&self) -> Polynomial {
        (0..self.dim).fold(Polynomial::zero(self.nvars()), |acc, i| &acc + &self.components[i].partial_derivative(i))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.linear.iter().flatten().all(|x| x.is_zero()) && self.constant.iter().all(|x| x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    /// Rescales time: the field `c * f`.
    pub fn scaled(&self, c: &Rational) -> Self {
        Self::from_components(&self.components.iter().map(|p| p.scale(c)).collect::<Vec<_>>()).unwrap()
    }

    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        let mut point = x.to_vec();
        point.resize(self.nvars(), Rational::zero());
        self.components.iter().map(|p| p.eval(&point)).collect()
    }

    /// Random field with entries `n/d`, `|n| <= bound`, `d <= max_den`.
    pub fn random<R: Rng>(rng: &mut R, dim: usize, homogeneous: bool, bound: i64, max_den: i64) -> Self {
        let z = Rational::zero();
        let mut quadratic = vec![vec![vec![z.clone(); dim]; dim]; dim];
        let mut linear = vec![vec![z.clone(); dim]; dim];
        let mut constant = vec![z; dim];
        for i in 0..dim {
            for j in 0..dim {
                for k in j..dim {
                    quadratic[i][j][k] = random_rational(rng, bound, max_den);
                }
                if !homogeneous {
                    linear[i][j] = random_rational(rng, bound, max_den);
                }
            }
            if !homogeneous {
                constant[i] = random_rational(rng, bound, max_den);
            }
        }
        Self::new(quadratic, linear, constant).unwrap()
    }

    pub fn to_json(&self) -> Value {
        let n = self.dim;
        let mut quadratic = Vec::new();
        let mut linear = Vec::new();
        let mut constant = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in j..n {
                    let c = &self.quadratic[i][j][k];
                    if !c.is_zero() {
                        quadratic.push(json!([i + 1, j + 1, k + 1, format_rational(c)]));
                    }
                }
                if !self.linear[i][j].is_zero() {
                    linear.push(json!([i + 1, j + 1, format_rational(&self.linear[i][j])]));
                }
            }
            if !self.constant[i].is_zero() {
                constant.push(json!([i + 1, format_rational(&self.constant[i])]));
            }
        }
        json!({ "dim": n, "quadratic": quadratic, "linear": linear, "constant": constant })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("vector field: {m}"));
        let n = v.get("dim").and_then(Value::as_u64).ok_or_else(|| bad("missing integer `dim`"))? as usize;
        if n == 0 {
            return Err(bad("`dim` must be positive"));
        }
        let z = Rational::zero();
        let mut quadratic = vec![vec![vec![z.clone(); n]; n]; n];
        let mut linear = vec![vec![z.clone(); n]; n];
        let mut constant = vec![z; n];
        let index = |x: &Value| -> Result<usize> {
            let i = x.as_u64().ok_or_else(|| bad("indices must be positive integers"))? as usize;
            if i == 0 || i > n {
                return Err(bad(&format!("index {i} out of range 1..={n}")));
            }
            Ok(i - 1)
        };
        let entries = |key: &str, len: usize| -> Result<Vec<Vec<Value>>> {
            match v.get(key) {
                None | Some(Value::Null) => Ok(Vec::new()),
                Some(Value::Array(a)) => a
                    .iter()
                    .map(|e| match e.as_array() {
                        Some(e) if e.len() == len => Ok(e.clone()),
                        _ => Err(bad(&format!("`{key}` entries must have {len} elements"))),
                    })
                    .collect(),
                Some(_) => Err(bad(&format!("`{key}` must be an array"))),
            }
        };
        for e in entries("quadratic", 4)? {
            let (i, j, k) = (index(&e[0])?, index(&e[1])?, index(&e[2])?);
            let (j, k) = (j.min(k), j.max(k));
            quadratic[i][j][k] += json_rational(&e[3])?;
        }
        for e in entries("linear", 3)? {
            linear[index(&e[0])?][index(&e[1])?] += json_rational(&e[2])?;
        }
        for e in entries("constant", 2)? {
            constant[index(&e[0])?] += json_rational(&e[1])?;
        }
        Self::new(quadratic, linear, constant)
    }

    /// Variable names for display: `x1..xn, h` (and `u` if requested).
    pub fn variable_names(&self) -> Vec<String> {
        variable_names(self.dim)
    }
}

pub fn variable_names(dim: usize) -> Vec<String> {
    let mut names: Vec<String> = if dim <= 3 {
        ["x", "y", "z"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{i}")).collect()
    };
    names.push("h".into());
    names.push("u".into());
    names
}

/// `x_i` as a polynomial over `dim + 1` variables.
pub fn coordinate(dim: usize, i: usize) -> Polynomial {
    Polynomial::var(dim + 1, i)
}

/// The constant 1 over `dim + 1` variables.
pub fn unit(dim: usize) -> Polynomial {
    Polynomial::one(dim + 1)
}

/// `c * h^k` over `dim + 1` variables.
pub fn h_power(dim: usize, k: u32, c: Rational) -> Polynomial {
    Polynomial::monomial(dim + 1, Monomial::var(dim, k), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn lv_special() -> QuadraticVectorField {
        QuadraticVectorField::from_json(&json!({
            "dim": 3,
            "quadratic": [[1,1,2,"1"],[1,1,3,"1"],[2,1,2,"-1"],[2,2,3,"-1"],[3,2,3,"1"],[3,1,3,"-1"]]
        }))
        .unwrap()
    }

    #[test]
    fn second_derivatives_are_twice_the_symmetrized_tensor() {
        // f = 3 x^2 + 5 x y  in the first component
        let f = QuadraticVectorField::from_json(&json!({
            "dim": 2, "quadratic": [[1,1,1,"3"],[1,1,2,"5"]]
        }))
        .unwrap();
        let jac = f.jacobian();
        let dxx = jac[0][0].partial_derivative(0).constant_term();
        let dxy = jac[0][0].partial_derivative(1).constant_term();
        assert_eq!(dxx, int(6));
        assert_eq!(dxy, int(5));
        assert_eq!(f.second_derivative(0, 0, 0), dxx);
        assert_eq!(f.second_derivative(0, 0, 1), dxy);
        assert_eq!(f.second_derivative(0, 1, 0), dxy);
        assert_eq!(f.a_sym(0, 1, 0), rat(5, 2));
    }

    #[test]
    fn divergence_examples() {
        assert!(QuadraticVectorField::zero(3).divergence().is_zero());
        let f = lv_special();
        let (x, y) = (coordinate(3, 0), coordinate(3, 1));
        assert_eq!(f.divergence(), (&y - &x).scale(&int(2)));
    }

    #[test]
    fn json_round_trip() {
        let f = lv_special();
        assert_eq!(QuadraticVectorField::from_json(&f.to_json()).unwrap(), f);
        assert!(QuadraticVectorField::from_json(&json!({"dim": 2, "linear": [[3,1,"1"]]})).is_err());
    }

    #[test]
    fn components_round_trip() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let f = QuadraticVectorField::random(&mut rng, 3, false, 5, 3);
        assert_eq!(QuadraticVectorField::from_components(f.components()).unwrap(), f);
    }
}
