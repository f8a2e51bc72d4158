//! Stored expectations for the example systems, checked against the solver.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::systems::{get_system, lv_divfree, quadratic_form, seeded_params, symmetric, IshiiParams};
use crate::algebra::{Monomial, Polynomial, Rational, RationalFunction, RationalMatrix};
use crate::coalgebra::CoefficientFunctional;
use crate::darboux::solve::polynomial_span_coordinates;
use crate::darboux::{
    conjecture_check, cycle_condition, first_integrals, gamma_space, parameter_independent_solve, solve_darboux,
    Augmenter, ConjectureOutcome, DarbouxContext, Parity,
};
use crate::error::{Error, Result};
use crate::field::quadratic::coordinate;
use crate::field::transform::canonical_poisson;
use crate::field::{modified_hamiltonian, AromaEvaluator, KahanMap, QuadraticVectorField};
use crate::graphs::{parse_multiset, AromaMultiset};

pub const FIXTURES: &[(&str, &str)] = &[
    ("lv", include_str!("../../fixtures/lv.json")),
    ("lv_divfree", include_str!("../../fixtures/lv_divfree.json")),
    ("lv_special", include_str!("../../fixtures/lv_special.json")),
    ("dressing", include_str!("../../fixtures/dressing.json")),
    ("ishii", include_str!("../../fixtures/ishii.json")),
    ("nambu_homogeneous", include_str!("../../fixtures/nambu_homogeneous.json")),
    ("nambu_inhomogeneous", include_str!("../../fixtures/nambu_inhomogeneous.json")),
    ("divfree_abc", include_str!("../../fixtures/divfree_abc.json")),
    ("hamiltonian_canonical", include_str!("../../fixtures/hamiltonian_canonical.json")),
];

#[derive(Clone, Debug)]
pub struct GoldenCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct GoldenReport {
    pub system: String,
    pub params: Value,
    pub checks: Vec<GoldenCheck>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "system": self.system,
            "params": self.params,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

pub fn fixture(name: &str) -> Result<Value> {
    let (_, text) = FIXTURES.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownSystem(name.into()))?;
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("fixture {name}: {e}")))
}

/// Parameters of a fixture: stored ones, or a seeded draw (`seed` overrides
/// the stored seed).
pub fn fixture_params(name: &str, seed: Option<u64>) -> Result<Value> {
    let fx = fixture(name)?;
    if let Some(p) = fx.get("params") {
        return Ok(p.clone());
    }
    let s = seed.or_else(|| fx["seed"].as_u64()).unwrap_or(0);
    seeded_params(name, s)
}

struct Ctx<'a> {
    name: &'a str,
    fixture: &'a Value,
    params: &'a Value,
    field: &'a QuadraticVectorField,
    seed: u64,
}

type Outcome = Result<(bool, String)>;

fn h_power(f: &QuadraticVectorField, k: u32) -> Polynomial {
    Polynomial::one(f.nvars()).mul_monomial(Monomial::var(f.h_var(), k))
}

fn ms(s: &str) -> AromaMultiset {
    parse_multiset(s).unwrap()
}

fn gamma_at(g: &CoefficientFunctional, s: &str) -> Rational {
    g.get(&ms(s)).unwrap_or_else(|_| Rational::zero())
}

fn check_solve(c: &Ctx, spec: &Value) -> Outcome {
    let order = spec["order"].as_u64().ok_or_else(|| Error::Parse("solve order".into()))? as usize;
    let parity: Parity = spec["parity"].as_str().unwrap_or("even").parse()?;
    let sol = solve_darboux(c.field, order, parity, &[], c.seed)?;
    let mut ok = sol.all_verified();
    let mut detail = format!("dimension {}", sol.dimension());
    if let Some(d) = spec["dimension"].as_u64() {
        ok &= sol.dimension() == d as usize;
    }
    if let Some(gs) = spec["gammas"].as_array() {
        for (i, g) in gs.iter().enumerate() {
            let want = CoefficientFunctional::from_json(g, order)?;
            let same = i < sol.dimension() && sol.gamma(i) == want;
            if !same {
                detail.push_str(&format!("; vector {i} differs from {g}"));
            }
            ok &= same;
        }
    }
    Ok((ok, detail))
}

fn divergence_free(c: &Ctx) -> Outcome {
    Ok((c.field.divergence().is_zero(), "div f = 0".into()))
}

/// Every verified even density with a constant term needs div f = 0.
fn leading_term(c: &Ctx) -> Outcome {
    let sol = solve_darboux(c.field, 4, Parity::Even, &[], c.seed)?;
    let with_constant = (0..sol.dimension()).filter(|&i| sol.vectors[i].verified && !gamma_at(&sol.gamma(i), "1").is_zero()).count();
    let ok = with_constant == 0 || c.field.divergence().is_zero();
    Ok((ok, format!("{with_constant} densities with a constant term")))
}

/// `F(C3) = alpha F(C2(;[]))`, and every order-4 density has
/// `gamma(C2) = (alpha - 3)/12 gamma(1)`.
fn cycle_condition_check(c: &Ctx) -> Outcome {
    let cond = cycle_condition(c.field);
    let Some(alpha) = cond.alpha.clone() else {
        return Ok((false, format!("no alpha: {cond:?}")));
    };
    let sol = solve_darboux(c.field, 4, Parity::Even, &[], c.seed)?;
    let k = (&alpha - Rational::from_integer(3.into())) / Rational::from_integer(12.into());
    let ok = sol.dimension() > 0
        && (0..sol.dimension()).all(|i| {
            let g = sol.gamma(i);
            gamma_at(&g, "C2(;)") == &k * &gamma_at(&g, "1")
        });
    Ok((ok, format!("alpha = {alpha}")))
}

fn has_pure_parity(p: &Polynomial, hv: usize) -> bool {
    let mut parities = p.terms().map(|(m, _)| m.exponent(hv) % 2);
    match parities.next() {
        None => true,
        Some(first) => parities.all(|q| q == first),
    }
}

fn parity_pure(c: &Ctx) -> Outcome {
    let sol = solve_darboux(c.field, 4, Parity::Both, &[], c.seed)?;
    let hv = c.field.h_var();
    let ok = sol.all_verified() && sol.densities().iter().all(|p| has_pure_parity(p, hv));
    Ok((ok, format!("{} densities", sol.dimension())))
}

fn conjecture(c: &Ctx) -> Outcome {
    let r = conjecture_check(c.field, c.seed)?;
    Ok((r.outcome != ConjectureOutcome::Counterexample, format!("{:?}", r.outcome)))
}

fn sum_of_coordinates(f: &QuadraticVectorField) -> Polynomial {
    (0..f.dim()).fold(Polynomial::zero(f.nvars()), |acc, i| &acc + &coordinate(f.dim(), i))
}

fn augmented_first_integral(c: &Ctx) -> Outcome {
    let i0 = sum_of_coordinates(c.field);
    let aug = Augmenter { label: "I0".into(), polynomial: i0.clone() };
    let sol = solve_darboux(c.field, 4, Parity::Even, &[aug], c.seed)?;
    let fi = first_integrals(&sol, c.seed)?;
    let target = RationalFunction::from_polynomial(i0);
    let ok = sol.all_verified() && fi.ratios.iter().any(|r| *r == target);
    Ok((ok, format!("{} ratios", fi.ratios.len())))
}

/// `h^2 z^2` is a density (the h-independent combination `-4 z^2`), and
/// `(x + y + z)^2` is a combination of the ratios of densities.
fn h_independent_sector(c: &Ctx) -> Outcome {
    let sol = solve_darboux(c.field, 4, Parity::Both, &[], c.seed)?;
    let z = coordinate(3, 2);
    let sector = sol.contains(&(&h_power(c.field, 2) * &(&z * &z)));
    let fi = first_integrals(&sol, c.seed)?;
    let s = sum_of_coordinates(c.field);
    let den = fi.ratios[0].den().clone();
    let common = fi.ratios.iter().all(|r| *r.den() == den);
    let nums: Vec<Polynomial> = fi.ratios.iter().map(|r| r.num().clone()).collect();
    let i1 = common && polynomial_span_coordinates(&nums, &(&(&s * &s) * &den)).is_some();
    Ok((sector && i1 && fi.independent == 2, format!("independent integrals: {}", fi.independent)))
}

fn matches_divergence_free_lv(c: &Ctx) -> Outcome {
    let mut ok = true;
    for order in [4, 6] {
        let a = gamma_space(c.field, order, Parity::Even, c.seed)?;
        let b = gamma_space(&lv_divfree(), order, Parity::Even, c.seed)?;
        ok &= a.same_as(&b);
    }
    Ok((ok, "gamma spaces at orders 4 and 6".into()))
}

fn volume_preserving(f: &QuadraticVectorField) -> bool {
    KahanMap::new(f).det_jacobian() == RationalFunction::from_polynomial(Polynomial::one(f.nvars()))
}

fn ishii_family(c: &Ctx) -> Outcome {
    let seeds: Vec<u64> = c.fixture["family_seeds"].as_array().map(|a| a.iter().filter_map(Value::as_u64).collect()).unwrap_or_default();
    let mut draws = Vec::new();
    let mut fields = Vec::new();
    for s in seeds {
        let p = seeded_params("ishii", s)?;
        fields.push(get_system("ishii", &p)?);
        draws.push(IshiiParams::from_json(&p)?);
    }
    let fam = parameter_independent_solve(&fields, 6, Parity::Even, c.seed)?;
    let mut ok = fam.dimension() >= 2 && fam.all_verified();
    for ((f, ip), ds) in fields.iter().zip(&draws).zip(&fam.densities) {
        ok &= volume_preserving(f);
        ok &= polynomial_span_coordinates(ds, &Polynomial::one(4)).is_some();
        ok &= polynomial_span_coordinates(ds, &ishii_second_density(ip)).is_some();
    }
    Ok((ok, format!("family dimension {}", fam.dimension())))
}

/// `h^4 (2 A3^2 + 4 k (A1 c3 - A2 b3)^2 H1)` with `H1` the modified integral.
pub fn ishii_second_density(ip: &IshiiParams) -> Polynomial {
    let lead = &ip.a1() * &ip.c3 - &ip.a2() * &ip.b3;
    let four_k = &ip.k * Rational::from_integer(4.into());
    let a3 = ip.a3();
    let inner = &Polynomial::constant(4, Rational::from_integer(2.into()) * &a3 * &a3)
        + &ip.modified_integral().scale(&(&four_k * &lead * &lead));
    &inner * &Polynomial::one(4).mul_monomial(Monomial::var(3, 4))
}

fn nambu_integrals(c: &Ctx) -> Outcome {
    let mut ok = true;
    for key in ["A", "B"] {
        let h = quadratic_form(&symmetric(c.params, key)?);
        let lie = (0..3).fold(Polynomial::zero(4), |acc, i| &acc + &(&h.partial_derivative(i) * &c.field.components()[i]));
        ok &= lie.is_zero();
    }
    Ok((ok, "grad H . f = 0".into()))
}

/// `adj(adj A + adj B) - adj(adj A) - adj(adj B) - B adj(A) B - A adj(B) A`.
pub fn nambu_c_matrix(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    let (aa, ab) = (a.adjugate()?, b.adjugate()?);
    let m = aa.add(&ab).adjugate()?.sub(&aa.adjugate()?).sub(&ab.adjugate()?);
    Ok(m.sub(&b.mul(&aa)?.mul(b)?).sub(&a.mul(&ab)?.mul(a)?))
}

fn nambu_density(c: &Ctx) -> Outcome {
    let (a, b) = (symmetric(c.params, "A")?, symmetric(c.params, "B")?);
    let eval = AromaEvaluator::new(c.field);
    let c2 = eval.multiset(&ms("C2(;)"));
    let c4 = eval.multiset(&ms("C4(;;;)"));
    let formula = quadratic_form(&nambu_c_matrix(&a, &b)?).scale(&Rational::from_integer(32.into()));
    let half = Rational::new(1.into(), 2.into());
    let four_cycle = c4 == (&c2 * &c2).scale(&half);
    let sol = solve_darboux(c.field, 4, Parity::Even, &[], c.seed)?;
    let base = &Polynomial::one(4) - &(&h_power(c.field, 2) * &c2).scale(&Rational::new(1.into(), 24.into()));
    let square = &base * &base;
    let verified = DarbouxContext::new(c.field).residual(&square).is_zero() && sol.contains(&square);
    Ok((c2 == formula && four_cycle && verified, format!("F(C2) = 32 x^T C x: {}", c2 == formula)))
}

fn inhomogeneous_leading_terms(c: &Ctx) -> Outcome {
    let max_terms = c.fixture["max_terms"].as_u64().unwrap_or(10) as usize;
    let sol = solve_darboux(c.field, 6, Parity::Even, &[], c.seed)?;
    let c2 = AromaEvaluator::new(c.field).multiset(&ms("C2(;)"));
    let target = &Polynomial::one(4) - &(&h_power(c.field, 2) * &c2).scale(&Rational::new(1.into(), 12.into()));
    let Some((gamma, density)) = sol.with_leading_terms(&target, 3) else {
        return Ok((false, "no density with the leading terms".into()));
    };
    let verified = DarbouxContext::new(c.field).residual(&density).is_zero();
    let ok = verified && gamma_at(&gamma, "1").is_one() && gamma.support_len() <= max_terms;
    Ok((ok, format!("{} aroma terms", gamma.support_len())))
}

fn canonical_hamiltonian(c: &Ctx) -> Outcome {
    let n = c.field.dim();
    let h = Polynomial::from_json(&c.params["H"], n)?;
    let map = KahanMap::new(c.field);
    let det_ok = DarbouxContext::new(c.field).residual(map.denominator()).is_zero();
    let ht = modified_hamiltonian(&canonical_poisson(n / 2), &h)?;
    let inv_ok = ht.compose(&map.components())? == ht;
    Ok((det_ok && inv_ok, format!("density {det_ok}, modified Hamiltonian preserved {inv_ok}")))
}

fn run_named(c: &Ctx, name: &str) -> Outcome {
    match name {
        "divergence_free" => divergence_free(c),
        "leading_term" => leading_term(c),
        "cycle_condition" => cycle_condition_check(c),
        "parity_pure" => parity_pure(c),
        "conjecture" => conjecture(c),
        "augmented_first_integral" => augmented_first_integral(c),
        "h_independent_sector" => h_independent_sector(c),
        "matches_divergence_free_lv" => matches_divergence_free_lv(c),
        "volume_preserving" => Ok((volume_preserving(c.field), "det DPhi = 1".into())),
        "ishii_family" => ishii_family(c),
        "nambu_integrals" => nambu_integrals(c),
        "nambu_density" => nambu_density(c),
        "inhomogeneous_leading_terms" => inhomogeneous_leading_terms(c),
        "canonical_hamiltonian" => canonical_hamiltonian(c),
        other => Err(Error::Parse(format!("unknown check `{other}` in fixture {}", c.name))),
    }
}

/// Runs the stored expectations for a system. Failed expectations are
/// reported in the result; only an unknown system is an error.
pub fn golden_suite(name: &str, seed: Option<u64>) -> Result<GoldenReport> {
    let fx = fixture(name)?;
    let params = fixture_params(name, seed)?;
    let field = get_system(name, &params)?;
    let ctx = Ctx { name, fixture: &fx, params: &params, field: &field, seed: seed.unwrap_or(0) };
    let mut checks = Vec::new();
    let record = |checks: &mut Vec<GoldenCheck>, name: String, r: Outcome| {
        let (passed, detail) = r.unwrap_or_else(|e| (false, format!("error: {e}")));
        checks.push(GoldenCheck { name, passed, detail });
    };
    for spec in fx["solves"].as_array().into_iter().flatten() {
        let label = format!("solve order {} {}", spec["order"], spec["parity"].as_str().unwrap_or("even"));
        record(&mut checks, label, check_solve(&ctx, spec));
    }
    for check in fx["checks"].as_array().into_iter().flatten().filter_map(Value::as_str) {
        record(&mut checks, check.to_string(), run_named(&ctx, check));
    }
    Ok(GoldenReport { system: name.to_string(), params, checks })
}

/// Text summary of a golden report, one line per check.
pub fn golden_text(r: &GoldenReport) -> String {
    let mut out = format!("{}: {}\n", r.system, if r.passed() { "pass" } else { "FAIL" });
    for c in &r.checks {
        out.push_str(&format!("  [{}] {}: {}\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_names_a_system() {
        for (name, _) in FIXTURES {
            let fx = fixture(name).unwrap();
            assert_eq!(fx["system"], *name);
            assert!(fixture_params(name, None).is_ok());
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn nambu_c_matrix_of_diagonal_forms() {
        // A = I, B = diag(1, 2, 3): diag(12, 21, 28) - I - diag(6, 12, 18) - diag(1, 4, 9) - diag(6, 3, 2)
        let d = |v: [i64; 3]| {
            let mut m = RationalMatrix::zeros(3, 3);
            for (i, x) in v.into_iter().enumerate() {
                m.set(i, i, Rational::from_integer(x.into()));
            }
            m
        };
        assert_eq!(nambu_c_matrix(&d([1, 1, 1]), &d([1, 2, 3])).unwrap(), d([-2, 1, -2]));
        assert_eq!(nambu_c_matrix(&d([1, 1, 1]), &d([1, 1, 1])).unwrap(), d([0, 0, 0]));
    }
}
