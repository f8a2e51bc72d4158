//! JSON reports and text or LaTeX renderings of solver results.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::analysis::{Conditions, CycleCondition, FirstIntegrals};
use super::conjecture::{ConjectureOutcome, ConjectureReport};
use super::solve::DarbouxSolution;
use crate::algebra::rational::format_rational;
use crate::algebra::{Polynomial, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::field::quadratic::variable_names;
use crate::graphs::AromaMultiset;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
}

/// One summand `coeff h^power factors...` of a rendered series.
#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: Rational,
    pub h_power: usize,
    pub factors: Vec<String>,
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

pub fn render_terms(terms: &[Term], format: Format) -> String {
    let terms: Vec<&Term> = terms.iter().filter(|t| !t.coeff.is_zero()).collect();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = t.coeff.abs();
        let mut parts: Vec<String> = Vec::new();
        if !a.is_one() || (t.h_power == 0 && t.factors.is_empty()) {
            parts.push(match format {
                Format::Text if a.is_integer() => a.to_string(),
                Format::Text => format!("({})", format_rational(&a)),
                Format::Latex => latex_rational(&a),
            });
        }
        match (t.h_power, format) {
            (0, _) => {}
            (1, _) => parts.push("h".into()),
            (k, Format::Text) => parts.push(format!("h^{k}")),
            (k, Format::Latex) => parts.push(format!("h^{{{k}}}")),
        }
        parts.extend(t.factors.iter().cloned());
        out.push_str(&parts.join(" "));
    }
    out
}

pub fn aroma_factor(m: &AromaMultiset, format: Format) -> Option<String> {
    if m.is_unit() {
        return None;
    }
    Some(match format {
        Format::Text => format!("F({})", m.encode()),
        Format::Latex => format!("F(\\texttt{{{}}})", m.encode()),
    })
}

/// The density of solution `i` as an aromatic series, with coefficients
/// `gamma / sigma`.
pub fn render_solution(sol: &DarbouxSolution, i: usize, format: Format) -> String {
    let terms: Vec<Term> = sol
        .basis
        .elements
        .iter()
        .zip(&sol.vectors[i].coords)
        .map(|(e, c)| {
            let mut factors = Vec::new();
            if let Some(a) = e.augmenter {
                factors.push(sol.basis.augmenters[a].label.clone());
            }
            factors.extend(aroma_factor(&e.multiset, format));
            Term {
                coeff: c / Rational::from_integer(e.multiset.symmetry().into()),
                h_power: e.order(),
                factors,
            }
        })
        .collect();
    render_terms(&terms, format)
}

fn names_for(p: &Polynomial) -> Vec<String> {
    variable_names(p.nvars().saturating_sub(1))
}

pub fn polynomial_text(p: &Polynomial) -> String {
    p.display_with(&names_for(p))
}

pub fn rational_function_text(r: &RationalFunction) -> String {
    if *r.den() == Polynomial::one(r.nvars()) {
        polynomial_text(r.num())
    } else {
        format!("({}) / ({})", polynomial_text(r.num()), polynomial_text(r.den()))
    }
}

pub fn rational_function_json(r: &RationalFunction) -> Value {
    json!({
        "numerator": r.num().to_json(),
        "denominator": r.den().to_json(),
        "text": rational_function_text(r),
    })
}

pub fn first_integrals_json(fi: &Result<FirstIntegrals>) -> Value {
    match fi {
        Ok(fi) => json!({
            "ratios": fi.ratios.iter().map(rational_function_json).collect::<Vec<_>>(),
            "independent": fi.independent,
        }),
        Err(Error::NoNontrivialIntegral) => json!({"ratios": [], "independent": 0, "note": "all densities are proportional"}),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn optional_rational(q: &Option<Rational>) -> Value {
    q.as_ref().map_or(Value::Null, |q| Value::String(format_rational(q)))
}

pub fn cycle_condition_json(c: &CycleCondition) -> Value {
    json!({"holds": c.holds, "alpha": optional_rational(&c.alpha), "both_zero": c.both_zero})
}

pub fn conditions_json(c: &Conditions) -> Value {
    json!({"div_free": c.div_free, "cond1": cycle_condition_json(&c.cond1), "fcond2": c.fcond2})
}

fn relation_json(terms: &[(AromaMultiset, Rational)]) -> Value {
    let mut map = Map::new();
    for (m, c) in terms {
        map.insert(m.encode().to_string(), Value::String(format_rational(c)));
    }
    Value::Object(map)
}

/// The full solver report.
pub fn solution_json(
    sol: &DarbouxSolution,
    max_order: usize,
    first_integrals: &Result<FirstIntegrals>,
    conditions: &Conditions,
) -> Value {
    let basis: Vec<String> = (0..sol.basis.len()).map(|k| sol.basis.label(k)).collect();
    let dropped: Vec<String> = sol.basis.dropped.iter().map(|(m, a)| sol.basis.label_of(m, *a)).collect();
    let solutions: Vec<Value> = (0..sol.dimension())
        .map(|i| {
            let mut aug = Map::new();
            for (label, g) in sol.augmenter_coeffs(i) {
                aug.insert(label, g.to_json());
            }
            json!({
                "gamma": sol.gamma(i).to_json(),
                "augmenter_coeffs": Value::Object(aug),
                "polynomial": sol.vectors[i].density.to_json(),
                "series": render_solution(sol, i, Format::Text),
                "verified": sol.vectors[i].verified,
            })
        })
        .collect();
    json!({
        "field": sol.field.to_json(),
        "order": max_order,
        "parity": sol.parity.to_string(),
        "basis": basis,
        "dropped": dropped,
        "solutions": solutions,
        "first_integrals": first_integrals_json(first_integrals),
        "conditions": conditions_json(conditions),
    })
}

pub fn solution_text(sol: &DarbouxSolution, format: Format) -> String {
    let mut out = String::new();
    if sol.dimension() == 0 {
        out.push_str("no density in the aromatic span\n");
    }
    for i in 0..sol.dimension() {
        let tag = if sol.vectors[i].verified { "verified" } else { "NOT verified" };
        match format {
            Format::Text => out.push_str(&format!("g{} = {}  [{tag}]\n", i + 1, render_solution(sol, i, format))),
            Format::Latex => out.push_str(&format!("g_{{{}}} &= {} \\\\\n", i + 1, render_solution(sol, i, format))),
        }
    }
    out
}

pub fn conjecture_json(r: &ConjectureReport) -> Value {
    let outcome = match r.outcome {
        ConjectureOutcome::HypothesisFails => "hypothesis_fails",
        ConjectureOutcome::Degenerate => "degenerate",
        ConjectureOutcome::Confirmed => "confirmed",
        ConjectureOutcome::Counterexample => "potential_counterexample",
    };
    json!({
        "hypothesis_holds": r.hypothesis.holds && !r.hypothesis.both_zero,
        "hypothesis": cycle_condition_json(&r.hypothesis),
        "outcome": outcome,
        "expected_gamma_c2": optional_rational(&r.expected_c2),
        "gamma": r.gamma.as_ref().map_or(Value::Null, |g| g.to_json()),
        "polynomial": r.density.as_ref().map_or(Value::Null, |p| p.to_json()),
        "verified": r.verified,
        "order4_weights": relation_json(&r.order4_weights),
        "order4_relations": r.order4_relations.iter().map(|t| relation_json(t)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::corpus::systems::lv_divfree;
    use crate::darboux::{necessary_conditions, solve_darboux, Parity};
    use crate::graphs::parse_multiset;

    #[test]
    fn divergence_free_density_renders_like_the_display() {
        let f = lv_divfree();
        let sol = solve_darboux(&f, 4, Parity::Even, &[], 0).unwrap();
        assert_eq!(render_solution(&sol, 0, Format::Text), "1 - (1/8) h^2 F(C2(;))");
        assert_eq!(render_solution(&sol, 0, Format::Latex), "1 - \\frac{1}{8} h^{2} F(\\texttt{C2(;)})");
        let v = solution_json(&sol, 4, &Err(Error::NoNontrivialIntegral), &necessary_conditions(&f));
        assert_eq!(v["solutions"][0]["gamma"], json!({"1": "1", "C2(;)": "-1/4"}));
        assert_eq!(v["parity"], "even");
        assert_eq!(v["conditions"]["cond1"]["alpha"], "0");
    }

    #[test]
    fn term_rendering() {
        let t = |c, k, f: &[&str]| Term { coeff: c, h_power: k, factors: f.iter().map(|s| s.to_string()).collect() };
        let terms = [t(rat(-1, 1), 0, &[]), t(rat(3, 1), 1, &["I0"]), t(rat(-2, 5), 4, &["F(C4(;;;))"])];
        assert_eq!(render_terms(&terms, Format::Text), "-1 + 3 h I0 - (2/5) h^4 F(C4(;;;))");
        assert_eq!(aroma_factor(&parse_multiset("1").unwrap(), Format::Text), None);
    }
}
