//! Generators for the example systems, with JSON parameters and seeded draws.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::algebra::poly::json_rational;
use crate::algebra::rational::{format_rational, random_rational};
use crate::algebra::{Polynomial, Rational, RationalMatrix};
use crate::error::{Error, Result};
use crate::field::quadratic::coordinate;
use crate::field::transform::canonical_poisson;
use crate::field::{hamiltonian_field, QuadraticVectorField};

pub struct SystemSpec {
    pub name: &'static str,
    pub description: &'static str,
    /// Parameter names and shapes, as shown by `corpus list`.
    pub params: &'static str,
}

pub const SYSTEMS: &[SystemSpec] = &[
    SystemSpec {
        name: "lv",
        description: "Lotka-Volterra: x' = x(b z - c y), y' = y(-a z + c x), z' = z(a y - b x)",
        params: "a, b, c: rational",
    },
    SystemSpec {
        name: "lv_divfree",
        description: "divergence free Lotka-Volterra (x(y - z), y(z - x), z(x - y))",
        params: "none",
    },
    SystemSpec {
        name: "lv_special",
        description: "Lotka-Volterra case (x(y + z), -y(x + z), z(y - x))",
        params: "none",
    },
    SystemSpec {
        name: "dressing",
        description: "dressing chain x' = -y^2 + z^2 - b + c, y' = x^2 - z^2 + a - c, z' = -x^2 + y^2 - a + b",
        params: "a, b, c: rational",
    },
    SystemSpec {
        name: "ishii",
        description: "volume preserving Ishii family, quadratic coefficients tied to the linear part by k",
        params: "b2, b3, c1, c2, c3, k: rational",
    },
    SystemSpec {
        name: "nambu_homogeneous",
        description: "x' = grad(x^T A x) x grad(x^T B x)",
        params: "A, B: symmetric 3x3",
    },
    SystemSpec {
        name: "nambu_inhomogeneous",
        description: "x' = grad H x grad K with H = x^T Hm x + hv^T x, K = x^T Km x + kv^T x",
        params: "H, K: symmetric 3x3; hv, kv: 3-vectors",
    },
    SystemSpec {
        name: "divfree_abc",
        description: "homogeneous divergence free field (x^T A x, x^T B x, x^T C x) in R^3",
        params: "A, B: symmetric 3x3; c11, c12, c22: rational (the rest of C is fixed by the divergence)",
    },
    SystemSpec {
        name: "hamiltonian_canonical",
        description: "x' = J grad H with the standard symplectic J and cubic H",
        params: "n: 2 or 4; H: polynomial terms over n variables",
    },
];

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

fn scalar(params: &Value, key: &str) -> Result<Rational> {
    let v = params.get(key).ok_or_else(|| bad(format!("missing parameter `{key}`")))?;
    json_rational(v)
}

fn vector(params: &Value, key: &str, n: usize) -> Result<Vec<Rational>> {
    let v = params.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("`{key}` must be an array")))?;
    if v.len() != n {
        return Err(bad(format!("`{key}` must have {n} entries")));
    }
    v.iter().map(json_rational).collect()
}

fn matrix(params: &Value, key: &str, n: usize) -> Result<RationalMatrix> {
    let rows = params.get(key).and_then(Value::as_array).ok_or_else(|| bad(format!("`{key}` must be a matrix")))?;
    if rows.len() != n {
        return Err(bad(format!("`{key}` must be {n}x{n}")));
    }
    let data = rows
        .iter()
        .map(|r| {
            let r = r.as_array().filter(|r| r.len() == n).ok_or_else(|| bad(format!("`{key}` must be {n}x{n}")))?;
            r.iter().map(json_rational).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RationalMatrix::from_rows(data)
}

pub(crate) fn symmetric(params: &Value, key: &str) -> Result<RationalMatrix> {
    let m = matrix(params, key, 3)?;
    if !m.is_symmetric() {
        return Err(bad(format!("`{key}` must be symmetric")));
    }
    Ok(m)
}

fn matrix_json(m: &RationalMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| Value::String(format_rational(m.get(i, j)))).collect()))
            .collect(),
    )
}

fn rats_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|q| Value::String(format_rational(q))).collect())
}

fn random_symmetric<R: Rng>(rng: &mut R, bound: i64) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in i..3 {
            let v = random_rational(rng, bound, 1);
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    m
}

fn x(i: usize) -> Polynomial {
    coordinate(3, i)
}

/// `x^T M x` over `(x, y, z, h)`.
pub fn quadratic_form(m: &RationalMatrix) -> Polynomial {
    let mut p = Polynomial::zero(4);
    for i in 0..3 {
        for j in 0..3 {
            if !m.get(i, j).is_zero() {
                p += &(&x(i) * &x(j)).scale(m.get(i, j));
            }
        }
    }
    p
}

fn c(q: &Rational) -> Polynomial {
    Polynomial::constant(4, q.clone())
}

/// `M x + v` over `(x, y, z, h)`.
fn affine(m: &RationalMatrix, v: &[Rational]) -> Vec<Polynomial> {
    (0..3)
        .map(|i| (0..3).fold(c(&v[i]), |acc, j| &acc + &x(j).scale(m.get(i, j))))
        .collect()
}

fn cross(a: &[Polynomial], b: &[Polynomial]) -> Vec<Polynomial> {
    (0..3)
        .map(|i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            &(&a[j] * &b[k]) - &(&a[k] * &b[j])
        })
        .collect()
}

pub fn lv(a: &Rational, b: &Rational, cc: &Rational) -> QuadraticVectorField {
    let (xx, y, z) = (x(0), x(1), x(2));
    let comps = [
        &xx * &(&z.scale(b) - &y.scale(cc)),
        &y * &(&xx.scale(cc) - &z.scale(a)),
        &z * &(&y.scale(a) - &xx.scale(b)),
    ];
    QuadraticVectorField::from_components(&comps).unwrap()
}

pub fn lv_divfree() -> QuadraticVectorField {
    let m1 = -Rational::one();
    lv(&m1, &m1, &m1)
}

pub fn lv_special() -> QuadraticVectorField {
    let one = Rational::one();
    lv(&one, &one, &-one.clone())
}

pub fn dressing(a: &Rational, b: &Rational, cc: &Rational) -> QuadraticVectorField {
    let sq = |i: usize| &x(i) * &x(i);
    let comps = [
        &(&sq(2) - &sq(1)) + &c(&(cc - b)),
        &(&sq(0) - &sq(2)) + &c(&(a - cc)),
        &(&sq(1) - &sq(0)) + &c(&(b - a)),
    ];
    QuadraticVectorField::from_components(&comps).unwrap()
}

/// Derived quantities of the Ishii parametrization.
pub struct IshiiParams {
    pub b2: Rational,
    pub b3: Rational,
    pub c1: Rational,
    pub c2: Rational,
    pub c3: Rational,
    pub k: Rational,
}

impl IshiiParams {
    pub fn a1(&self) -> Rational {
        &self.b2 * &self.c3 - &self.b3 * &self.c2
    }

    pub fn a2(&self) -> Rational {
        &self.c2 * &self.c3 + &self.b3 * &self.c1
    }

    pub fn a3(&self) -> Rational {
        -(&self.b2 * &self.c1 + &self.c2 * &self.c2)
    }

    pub fn field(&self) -> QuadraticVectorField {
        let (a1, a2) = (self.a1(), self.a2());
        let a11 = &self.k * &a2 * &self.c3;
        let a12 = -(&self.k * (&a1 * &self.c3 + &a2 * &self.b3));
        let a22 = &self.k * &a1 * &self.b3;
        let (xx, y, z) = (x(0), x(1), x(2));
        let comps = [
            &(&xx.scale(&-self.c2.clone()) + &y.scale(&self.b2)) + &z.scale(&self.b3),
            &(&xx.scale(&self.c1) + &y.scale(&self.c2)) + &z.scale(&self.c3),
            &(&(&xx * &xx).scale(&a11) + &(&xx * &y).scale(&a12)) + &(&y * &y).scale(&a22),
        ];
        QuadraticVectorField::from_components(&comps).unwrap()
    }

    /// The integral `z + k/2 (c3 x - b3 y)^2 - k h^2/8 (A2 x - A1 y)^2` of the map.
    pub fn modified_integral(&self) -> Polynomial {
        let l1 = &x(0).scale(&self.c3) - &x(1).scale(&self.b3);
        let l2 = &x(0).scale(&self.a2()) - &x(1).scale(&self.a1());
        let h2 = Polynomial::var(4, 3).pow(2);
        let half_k = &self.k / Rational::from_integer(2.into());
        let eighth_k = &self.k / Rational::from_integer(8.into());
        &(&x(2) + &(&l1 * &l1).scale(&half_k)) - &(&h2 * &(&l2 * &l2)).scale(&eighth_k)
    }

    pub fn from_json(p: &Value) -> Result<Self> {
        Ok(IshiiParams {
            b2: scalar(p, "b2")?,
            b3: scalar(p, "b3")?,
            c1: scalar(p, "c1")?,
            c2: scalar(p, "c2")?,
            c3: scalar(p, "c3")?,
            k: scalar(p, "k")?,
        })
    }
}

pub fn nambu_homogeneous(a: &RationalMatrix, b: &RationalMatrix) -> QuadraticVectorField {
    let z = vec![Rational::zero(); 3];
    let two = Rational::from_integer(2.into());
    let comps = cross(&affine(&a.scale(&two), &z), &affine(&b.scale(&two), &z));
    QuadraticVectorField::from_components(&comps).unwrap()
}

pub fn nambu_inhomogeneous(
    hm: &RationalMatrix,
    hv: &[Rational],
    km: &RationalMatrix,
    kv: &[Rational],
) -> QuadraticVectorField {
    let two = Rational::from_integer(2.into());
    let comps = cross(&affine(&hm.scale(&two), hv), &affine(&km.scale(&two), kv));
    QuadraticVectorField::from_components(&comps).unwrap()
}

/// `(x^T A x, x^T B x, x^T C x)` with the third column of `C` chosen so the
/// divergence vanishes.
pub fn divfree_abc(a: &RationalMatrix, b: &RationalMatrix, c11: &Rational, c12: &Rational, c22: &Rational) -> QuadraticVectorField {
    let mut cm = RationalMatrix::zeros(3, 3);
    cm.set(0, 0, c11.clone());
    cm.set(0, 1, c12.clone());
    cm.set(1, 0, c12.clone());
    cm.set(1, 1, c22.clone());
    for j in 0..3 {
        let v = -(a.get(j, 0) + b.get(j, 1));
        cm.set(j, 2, v.clone());
        cm.set(2, j, v);
    }
    QuadraticVectorField::from_components(&[quadratic_form(a), quadratic_form(b), quadratic_form(&cm)]).unwrap()
}

pub fn hamiltonian_canonical(hamiltonian: &Polynomial) -> Result<QuadraticVectorField> {
    let n = hamiltonian.nvars();
    if n == 0 || n % 2 == 1 {
        return Err(bad("the canonical Hamiltonian system needs an even dimension"));
    }
    hamiltonian_field(&canonical_poisson(n / 2), hamiltonian)
}

/// Builds a system from JSON parameters.
pub fn get_system(name: &str, params: &Value) -> Result<QuadraticVectorField> {
    let f = match name {
        "lv" => lv(&scalar(params, "a")?, &scalar(params, "b")?, &scalar(params, "c")?),
        "lv_divfree" => lv_divfree(),
        "lv_special" => lv_special(),
        "dressing" => dressing(&scalar(params, "a")?, &scalar(params, "b")?, &scalar(params, "c")?),
        "ishii" => IshiiParams::from_json(params)?.field(),
        "nambu_homogeneous" => nambu_homogeneous(&symmetric(params, "A")?, &symmetric(params, "B")?),
        "nambu_inhomogeneous" => nambu_inhomogeneous(
            &symmetric(params, "H")?,
            &vector(params, "hv", 3)?,
            &symmetric(params, "K")?,
            &vector(params, "kv", 3)?,
        ),
        "divfree_abc" => {
            let f = divfree_abc(
                &symmetric(params, "A")?,
                &symmetric(params, "B")?,
                &scalar(params, "c11")?,
                &scalar(params, "c12")?,
                &scalar(params, "c22")?,
            );
            if !f.divergence().is_zero() {
                return Err(bad("divergence does not vanish"));
            }
            f
        }
        "hamiltonian_canonical" => {
            let n = params.get("n").and_then(Value::as_u64).ok_or_else(|| bad("`n` must be 2 or 4"))? as usize;
            if n != 2 && n != 4 {
                return Err(bad("`n` must be 2 or 4"));
            }
            let h = Polynomial::from_json(params.get("H").ok_or_else(|| bad("missing `H`"))?, n)?;
            hamiltonian_canonical(&h)?
        }
        other => return Err(Error::UnknownSystem(other.to_string())),
    };
    Ok(f)
}

/// Seeded random parameters for a system; degenerate draws are redrawn.
pub fn sample_params<R: Rng>(name: &str, rng: &mut R) -> Result<Value> {
    let r = |rng: &mut R| Value::String(format_rational(&random_rational(rng, 3, 1)));
    let nonzero = |rng: &mut R| loop {
        let q = random_rational(rng, 3, 1);
        if !q.is_zero() {
            return Value::String(format_rational(&q));
        }
    };
    Ok(match name {
        "lv" | "dressing" => json!({"a": r(rng), "b": r(rng), "c": r(rng)}),
        "lv_divfree" | "lv_special" => json!({}),
        "ishii" => loop {
            let p = json!({
                "b2": nonzero(rng), "b3": nonzero(rng), "c1": nonzero(rng),
                "c2": nonzero(rng), "c3": nonzero(rng), "k": nonzero(rng)
            });
            let ip = IshiiParams::from_json(&p)?;
            let lead = &ip.a1() * &ip.c3 - &ip.a2() * &ip.b3;
            if !ip.a1().is_zero() && !ip.a2().is_zero() && !ip.a3().is_zero() && !lead.is_zero() {
                break p;
            }
        },
        "nambu_homogeneous" => json!({
            "A": matrix_json(&random_symmetric(rng, 3)),
            "B": matrix_json(&random_symmetric(rng, 3)),
        }),
        "nambu_inhomogeneous" => {
            let hm = random_symmetric(rng, 2);
            let hv: Vec<Rational> = (0..3).map(|_| random_rational(rng, 2, 1)).collect();
            let km = random_symmetric(rng, 2);
            let kv: Vec<Rational> = (0..3).map(|_| random_rational(rng, 2, 1)).collect();
            json!({"H": matrix_json(&hm), "hv": rats_json(&hv), "K": matrix_json(&km), "kv": rats_json(&kv)})
        }
        "divfree_abc" => json!({
            "A": matrix_json(&random_symmetric(rng, 3)),
            "B": matrix_json(&random_symmetric(rng, 3)),
            "c11": r(rng), "c12": r(rng), "c22": r(rng),
        }),
        "hamiltonian_canonical" => json!({"n": 2, "H": random_cubic(rng, 2).to_json()}),
        other => return Err(Error::UnknownSystem(other.to_string())),
    })
}

pub fn seeded_params(name: &str, seed: u64) -> Result<Value> {
    sample_params(name, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
}

/// A cubic with random coefficients; for `n = 4` only a sparse selection of
/// monomials, which keeps the 4-dimensional checks affordable.
pub fn random_cubic<R: Rng>(rng: &mut R, n: usize) -> Polynomial {
    let mut p = Polynomial::zero(n);
    let mut add = |rng: &mut R, e: Vec<u32>| {
        let q = loop {
            let q = random_rational(rng, 3, 2);
            if !q.is_zero() {
                break q;
            }
        };
        p = &p + &Polynomial::from_terms(n, vec![(e, q)]).unwrap();
    };
    if n <= 2 {
        for a in 0..=3u32 {
            for b in 0..=(3 - a) {
                if a + b >= 2 {
                    let mut e = vec![0; n];
                    e[0] = a;
                    if n > 1 {
                        e[1] = b;
                    } else if b > 0 {
                        continue;
                    }
                    add(rng, e);
                }
            }
        }
    } else {
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 3;
            add(rng, e);
            let mut e = vec![0; n];
            e[i] = 1;
            e[(i + 1) % n] = 1;
            add(rng, e);
        }
        let mut e = vec![0; n];
        e[0] = 1;
        e[1] = 1;
        e[2] = 1;
        add(rng, e);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lotka_volterra_cases() {
        let f = lv_divfree();
        assert!(f.divergence().is_zero());
        let (xx, y, z) = (x(0), x(1), x(2));
        assert_eq!(f.components()[0], &xx * &(&y - &z));
        let g = lv_special();
        assert_eq!(g.components()[1], -(&y * &(&xx + &z)));
        assert_eq!(g.components()[2], &z * &(&y - &xx));
    }

    #[test]
    fn dressing_chain_is_a_linear_image_of_lotka_volterra() {
        let a = RationalMatrix::from_rows(vec![
            vec![int(1), int(0), int(1)],
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(1)],
        ])
        .unwrap();
        let pulled = crate::field::affine_pullback(&lv(&int(1), &int(1), &int(1)), &a, &[int(0), int(0), int(0)]).unwrap();
        assert_eq!(pulled, dressing(&int(0), &int(0), &int(0)));
    }

    #[test]
    fn nambu_integrals_are_conserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = sample_params("nambu_homogeneous", &mut rng).unwrap();
        let f = get_system("nambu_homogeneous", &p).unwrap();
        let a = symmetric(&p, "A").unwrap();
        let h1 = quadratic_form(&a);
        let lie = (0..3).fold(Polynomial::zero(4), |acc, i| &acc + &(&h1.partial_derivative(i) * &f.components()[i]));
        assert!(lie.is_zero());
        assert!(f.divergence().is_zero());
    }

    #[test]
    fn generated_fields_satisfy_their_constraints() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for spec in SYSTEMS {
            let p = sample_params(spec.name, &mut rng).unwrap();
            let f = get_system(spec.name, &p).unwrap();
            match spec.name {
                "lv_divfree" | "nambu_homogeneous" | "nambu_inhomogeneous" | "divfree_abc" | "dressing"
                | "hamiltonian_canonical" => assert!(f.divergence().is_zero(), "{}", spec.name),
                _ => {}
            }
        }
    }

    #[test]
    fn schema_violations_are_rejected() {
        let p = json!({"A": [[1,2,0],[0,1,0],[0,0,1]], "B": [[1,0,0],[0,1,0],[0,0,1]]});
        assert!(matches!(get_system("nambu_homogeneous", &p), Err(Error::InvalidParameters(_))));
        assert!(matches!(get_system("nope", &json!({})), Err(Error::UnknownSystem(_))));
        assert!(get_system("lv", &json!({"a": 1})).is_err());
    }
}
