use std::fs;
use std::path::Path;

use kahan_aromas::algebra::rational::format_rational;
use kahan_aromas::algebra::{Polynomial, Rational};
use kahan_aromas::coalgebra::q::format_linear_form;
use kahan_aromas::coalgebra::{eta_value, q_table};
use kahan_aromas::corpus::{get_system, golden_suite, golden_text, seeded_params, SYSTEMS};
use kahan_aromas::darboux::report::{
    aroma_factor, conditions_json, conjecture_json, polynomial_text, rational_function_json, render_terms,
    solution_json, solution_text, Format, Term,
};
use kahan_aromas::darboux::{
    conjecture_check, first_integrals, necessary_conditions, solve_darboux, verify_density, Augmenter,
    ConjectureOutcome, DensityCheck, Parity,
};
use kahan_aromas::error::Error;
use kahan_aromas::field::{aroma_function, kahan_series, KahanMap, QuadraticVectorField};
use kahan_aromas::graphs::{enumerate_aromas, enumerate_multisets, parse_multiset, AromaMultiset};
use serde_json::{json, Value};

use crate::opts::*;

pub struct Output {
    pub text: String,
    pub code: u8,
}

pub struct CliError {
    pub message: String,
    pub code: u8,
}

type CliResult<T> = Result<T, CliError>;

fn input_error(message: impl Into<String>) -> CliError {
    CliError { message: message.into(), code: 2 }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::VerificationFailed(_) | Error::EmptyIntersection | Error::NoNontrivialIntegral | Error::EmptyBasis => 1,
            _ => 2,
        };
        CliError { message: e.to_string(), code }
    }
}

fn format_of(cli: &Cli) -> Format {
    match cli.format {
        OutputFormat::Latex => Format::Latex,
        _ => Format::Text,
    }
}

/// JSON for `--format json`, otherwise the given rendering.
fn emit(cli: &Cli, value: &Value, rendered: impl FnOnce(Format) -> String) -> String {
    match cli.format {
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(value).unwrap()),
        _ => {
            let mut s = rendered(format_of(cli));
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

fn ok(text: String) -> CliResult<Output> {
    Ok(Output { text, code: 0 })
}

fn check_order(cli: &Cli, order: usize) -> CliResult<()> {
    if order > cli.order_cap && !cli.allow_high_order {
        return Err(input_error(format!(
            "order {order} exceeds the cap {}; pass --allow-high-order to proceed",
            cli.order_cap
        )));
    }
    Ok(())
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input_error(format!("{}: malformed JSON: {e}", path.display())))
}

fn parse_json_arg(s: &str) -> CliResult<Value> {
    serde_json::from_str(s).map_err(|e| input_error(format!("malformed JSON parameters: {e}")))
}

fn system_field(name: &str, params: Option<&str>, seed: u64) -> CliResult<(QuadraticVectorField, Value)> {
    let p = match params {
        Some(s) => parse_json_arg(s)?,
        None => seeded_params(name, seed)?,
    };
    Ok((get_system(name, &p)?, p))
}

fn load_field(source: &FieldSource, params: &SystemParams) -> CliResult<QuadraticVectorField> {
    match (&source.field, &source.system) {
        (Some(path), _) => Ok(QuadraticVectorField::from_json(&read_json(path)?)?),
        (None, Some(name)) => Ok(system_field(name, params.params.as_deref(), params.seed)?.0),
        (None, None) => Err(input_error("give --field or --system")),
    }
}

/// Reads a polynomial over `n + 1` variables; one over `n` is embedded.
fn polynomial_for(v: &Value, dim: usize) -> CliResult<Polynomial> {
    let nvars = v
        .as_array()
        .and_then(|a| a.first())
        .and_then(|t| t.get(0))
        .and_then(Value::as_array)
        .map_or(dim + 1, Vec::len);
    if nvars != dim && nvars != dim + 1 {
        return Err(Error::ArityMismatch { expected: dim + 1, found: nvars }.into());
    }
    Ok(Polynomial::from_json(v, nvars)?.embed(dim + 1))
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Aromas(c) => aromas(cli, c),
        Command::Field(FieldCmd::Eval { source, params, aroma }) => {
            let f = load_field(source, params)?;
            let m = parse_multiset(aroma)?;
            let p = aroma_function(&f, &m);
            let v = json!({"aroma": m.encode(), "polynomial": p.to_json(), "text": polynomial_text(&p)});
            ok(emit(cli, &v, |_| polynomial_text(&p)))
        }
        Command::Kahan(c) => kahan(cli, c),
        Command::Hopf(c) => hopf(cli, c),
        Command::Darboux(c) => darboux(cli, c),
        Command::Check(c) => check(cli, c),
        Command::Corpus(c) => corpus(cli, c),
    }
}

fn aromas(cli: &Cli, c: &AromasCmd) -> CliResult<Output> {
    match c {
        AromasCmd::Enumerate { order, multisets, max_indegree } => {
            check_order(cli, *order)?;
            let items: Vec<AromaMultiset> = if *multisets {
                enumerate_multisets(*order, None).into_iter().filter(|m| m.order() == *order).collect()
            } else if *order == 0 {
                Vec::new()
            } else {
                enumerate_aromas(*order)?.into_iter().map(AromaMultiset::single).collect()
            };
            let items: Vec<AromaMultiset> =
                items.into_iter().filter(|m| max_indegree.map_or(true, |k| m.max_indegree() <= k)).collect();
            let v = json!({
                "order": order,
                "count": items.len(),
                "items": items.iter().map(|m| json!({"encoding": m.encode(), "sigma": m.symmetry()})).collect::<Vec<_>>(),
            });
            ok(emit(cli, &v, |fmt| {
                items
                    .iter()
                    .map(|m| match fmt {
                        Format::Text => format!("{}\t{}\n", m.encode(), m.symmetry()),
                        Format::Latex => format!("\\texttt{{{}}} & {} \\\\\n", m.encode(), m.symmetry()),
                    })
                    .collect()
            }))
        }
        AromasCmd::Sigma { encoding } => {
            let m = parse_multiset(encoding)?;
            let v = json!({"encoding": m.encode(), "order": m.order(), "sigma": m.symmetry()});
            ok(emit(cli, &v, |_| m.symmetry().to_string()))
        }
    }
}

fn kahan(cli: &Cli, c: &KahanCmd) -> CliResult<Output> {
    match c {
        KahanCmd::Map { source, params } => {
            let f = load_field(source, params)?;
            let k = KahanMap::new(&f);
            let names = f.variable_names();
            let v = json!({
                "numerators": k.numerators().iter().map(Polynomial::to_json).collect::<Vec<_>>(),
                "denominator": k.denominator().to_json(),
            });
            ok(emit(cli, &v, |_| {
                let mut s = format!("denominator: {}\n", polynomial_text(k.denominator()));
                for (i, p) in k.numerators().iter().enumerate() {
                    s.push_str(&format!("{}' numerator: {}\n", names[i], polynomial_text(p)));
                }
                s
            }))
        }
        KahanCmd::Det { source, params } => {
            let f = load_field(source, params)?;
            let d = KahanMap::new(&f).det_jacobian().normalized();
            let v = rational_function_json(&d);
            ok(emit(cli, &v, |_| v["text"].as_str().unwrap_or_default().to_string()))
        }
        KahanCmd::Series { source, params, order } => {
            check_order(cli, *order)?;
            let f = load_field(source, params)?;
            let s = kahan_series(&f, *order as u32);
            let names = f.variable_names();
            let v = json!({
                "order": order,
                "coefficients": s.iter().map(|c| c.iter().map(Polynomial::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            });
            ok(emit(cli, &v, |_| {
                let mut out = String::new();
                for (k, c) in s.iter().enumerate() {
                    for (i, p) in c.iter().enumerate() {
                        out.push_str(&format!("h^{k} [{}]: {}\n", names[i], polynomial_text(p)));
                    }
                }
                out
            }))
        }
    }
}

fn hopf(cli: &Cli, c: &HopfCmd) -> CliResult<Output> {
    match c {
        HopfCmd::QTable { order, max_indegree } => {
            check_order(cli, *order)?;
            let table = q_table(*order, *max_indegree);
            let rows: Vec<Value> = table
                .iter()
                .map(|(m, form)| {
                    let coeffs: serde_json::Map<String, Value> =
                        form.iter().map(|(a, c)| (a.encode().to_string(), Value::String(format_rational(c)))).collect();
                    json!({"multiset": m.encode(), "coefficients": coeffs, "expression": format_linear_form(form)})
                })
                .collect();
            let v = json!({"order": order, "rows": rows});
            ok(emit(cli, &v, |fmt| {
                table
                    .iter()
                    .map(|(m, form)| match fmt {
                        Format::Text => format!("<Q(g), {}> = {}\n", m.encode(), format_linear_form(form)),
                        Format::Latex => {
                            let terms: Vec<Term> = form
                                .iter()
                                .map(|(a, c)| Term {
                                    coeff: c.clone(),
                                    h_power: 0,
                                    factors: vec![format!("\\gamma(\\texttt{{{}}})", a.encode())],
                                })
                                .collect();
                            format!(
                                "\\langle Q(\\gamma), \\texttt{{{}}} \\rangle &= {} \\\\\n",
                                m.encode(),
                                render_terms(&terms, Format::Latex)
                            )
                        }
                    })
                    .collect()
            }))
        }
        HopfCmd::Newton { order, dim } => {
            if *dim == 0 {
                return Err(input_error("--dim must be positive"));
            }
            let order = order.unwrap_or(*dim);
            check_order(cli, order)?;
            let one = Rational::from_integer(1.into());
            let zero = Rational::from_integer(0.into());
            let terms: Vec<(AromaMultiset, Rational)> = enumerate_multisets(order, None)
                .into_iter()
                .filter_map(|m| {
                    let c = eta_value(&one, &m) / Rational::from_integer(m.symmetry().into());
                    (c != zero).then_some((m, c))
                })
                .collect();
            let v = json!({
                "dim": dim,
                "order": order,
                "terms": terms.iter().map(|(m, c)| json!({"multiset": m.encode(), "coefficient": format_rational(c), "power": m.order()})).collect::<Vec<_>>(),
                "vanishing_orders": ((*dim + 1)..=order).collect::<Vec<_>>(),
            });
            ok(emit(cli, &v, |fmt| {
                let rendered: Vec<Term> = terms
                    .iter()
                    .map(|(m, c)| {
                        let k = m.order();
                        let mut factors = Vec::new();
                        match (k, fmt) {
                            (0, _) => {}
                            (1, _) => factors.push("u".to_string()),
                            (k, Format::Text) => factors.push(format!("u^{k}")),
                            (k, Format::Latex) => factors.push(format!("u^{{{k}}}")),
                        }
                        factors.extend(aroma_factor(m, fmt));
                        Term { coeff: c.clone(), h_power: k, factors }
                    })
                    .collect();
                render_terms(&rendered, fmt)
            }))
        }
    }
}

fn parse_augmenters(path: &Path, dim: usize) -> CliResult<Vec<Augmenter>> {
    let v = read_json(path)?;
    let items = v.as_array().ok_or_else(|| input_error("augmenters must be a JSON array"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let label = item.get("label").and_then(Value::as_str).map_or_else(|| format!("I{i}"), str::to_string);
            let p = item.get("polynomial").ok_or_else(|| input_error("augmenter needs `polynomial`"))?;
            Ok(Augmenter { label, polynomial: polynomial_for(p, dim)? })
        })
        .collect()
}

fn parity_of(p: ParityArg) -> Parity {
    match p {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
        ParityArg::Both => Parity::Both,
    }
}

fn darboux(cli: &Cli, c: &DarbouxCmd) -> CliResult<Output> {
    match c {
        DarbouxCmd::Solve { source, params, order, parity, augment } => {
            check_order(cli, *order)?;
            let f = load_field(source, params)?;
            let augs = match augment {
                Some(path) => parse_augmenters(path, f.dim())?,
                None => Vec::new(),
            };
            let sol = solve_darboux(&f, *order, parity_of(*parity), &augs, params.seed)?;
            let fi = first_integrals(&sol, params.seed);
            let v = solution_json(&sol, *order, &fi, &necessary_conditions(&f));
            let text = emit(cli, &v, |fmt| {
                let mut s = solution_text(&sol, fmt);
                if let Some(ratios) = v["first_integrals"]["ratios"].as_array() {
                    for r in ratios {
                        s.push_str(&format!("integral: {}\n", r["text"].as_str().unwrap_or_default()));
                    }
                }
                s
            });
            let code = if sol.dimension() == 0 || !sol.all_verified() { 1 } else { 0 };
            Ok(Output { text, code })
        }
        DarbouxCmd::Verify { source, params, density } => {
            let f = load_field(source, params)?;
            let v = read_json(density)?;
            let polys: Vec<Value> = if let Some(sols) = v.get("solutions").and_then(Value::as_array) {
                sols.iter().map(|s| s["polynomial"].clone()).collect()
            } else if let Some(p) = v.get("polynomial") {
                vec![p.clone()]
            } else {
                vec![v]
            };
            let mut results = Vec::new();
            let mut all = true;
            for p in &polys {
                let p = polynomial_for(p, f.dim())?;
                match verify_density(&f, &p) {
                    DensityCheck::Verified => results.push(json!({"verified": true})),
                    DensityCheck::Counterexample { point, residual } => {
                        all = false;
                        results.push(json!({
                            "verified": false,
                            "point": point.iter().map(format_rational).collect::<Vec<_>>(),
                            "residual": format_rational(&residual),
                        }));
                    }
                }
            }
            let out = json!({"verified": all, "densities": results});
            let text = emit(cli, &out, |_| if all { "verified".into() } else { "NOT verified".into() });
            Ok(Output { text, code: if all { 0 } else { 1 } })
        }
    }
}

fn check(cli: &Cli, c: &CheckCmd) -> CliResult<Output> {
    match c {
        CheckCmd::Conditions { source, params } => {
            let f = load_field(source, params)?;
            let cond = necessary_conditions(&f);
            let v = conditions_json(&cond);
            ok(emit(cli, &v, |_| {
                format!(
                    "div f = 0: {}\nF(C3) = alpha F(C2(;[])): {} (alpha = {}, both zero: {})\nF(C1([])) = F(C1()*C1()): {}\n",
                    cond.div_free,
                    cond.cond1.holds,
                    cond.cond1.alpha.as_ref().map_or("none".into(), format_rational),
                    cond.cond1.both_zero,
                    cond.fcond2
                )
            }))
        }
        CheckCmd::Conjecture { source, params } => {
            let f = load_field(source, params)?;
            match conjecture_check(&f, params.seed) {
                Err(Error::SingularConjecture) => {
                    let v = json!({"hypothesis_holds": true, "alpha": "-3", "outcome": "singular"});
                    ok(emit(cli, &v, |_| "alpha = -3: the conjectured density is singular; skipped".into()))
                }
                Err(e) => Err(e.into()),
                Ok(r) => {
                    let v = conjecture_json(&r);
                    let text = emit(cli, &v, |_| {
                        let mut s = format!("outcome: {}\n", v["outcome"].as_str().unwrap_or_default());
                        if let Some(a) = &r.hypothesis.alpha {
                            s.push_str(&format!("alpha = {}\n", format_rational(a)));
                        }
                        if let Some(p) = &r.density {
                            s.push_str(&format!("density: {}\n", polynomial_text(p)));
                        }
                        s
                    });
                    let code = if r.outcome == ConjectureOutcome::Counterexample { 1 } else { 0 };
                    Ok(Output { text, code })
                }
            }
        }
    }
}

fn corpus(cli: &Cli, c: &CorpusCmd) -> CliResult<Output> {
    match c {
        CorpusCmd::List => {
            let v: Vec<Value> = SYSTEMS
                .iter()
                .map(|s| json!({"name": s.name, "description": s.description, "params": s.params}))
                .collect();
            ok(emit(cli, &Value::Array(v), |_| {
                SYSTEMS.iter().map(|s| format!("{}\t{}\t[{}]\n", s.name, s.description, s.params)).collect()
            }))
        }
        CorpusCmd::Field { name, params, seed } => {
            let (f, _) = system_field(name, params.as_deref(), *seed)?;
            let names = f.variable_names();
            let v = f.to_json();
            ok(emit(cli, &v, |_| {
                f.components()
                    .iter()
                    .enumerate()
                    .map(|(i, p)| format!("{}' = {}\n", names[i], polynomial_text(p)))
                    .collect()
            }))
        }
        CorpusCmd::Run { name, seed } => {
            let r = golden_suite(name, *seed)?;
            let v = r.to_json();
            let text = emit(cli, &v, |_| golden_text(&r));
            Ok(Output { text, code: if r.passed() { 0 } else { 1 } })
        }
    }
}
