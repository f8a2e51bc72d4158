//! The linear map `Q` sending coefficients of a B-series `P` to the
//! coefficients of `det(I - h/2 f'(x)) P(Phi(x)) - P(x) det(I + h/2 f'(Phi(x)))`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::bseries::{eta_value, kahan_coeff};
use super::coproduct::{coproduct_comodule, coproduct_disjoint};
use super::functional::CoefficientFunctional;
use crate::algebra::rational::format_rational;
use crate::algebra::Rational;
use crate::error::Result;
use crate::graphs::{enumerate_multisets, AromaMultiset};

/// A linear form in the values `gamma(mu)`.
pub type LinearForm = BTreeMap<AromaMultiset, Rational>;

fn add_to(form: &mut LinearForm, key: &AromaMultiset, c: Rational) {
    if c.is_zero() {
        return;
    }
    let v = form.remove(key).unwrap_or_else(Rational::zero) + c;
    if !v.is_zero() {
        form.insert(key.clone(), v);
    }
}

/// `Q(gamma)(alpha)` as a linear form in `gamma`.
pub fn q_linear(alpha: &AromaMultiset) -> LinearForm {
    let minus_half = Rational::new((-1).into(), 2.into());
    let half = Rational::new(1.into(), 2.into());
    let mut form = LinearForm::new();
    for (beta, rest, c) in coproduct_disjoint(alpha).terms() {
        let eta_beta = eta_value(&minus_half, beta);
        for (forest, mu, d) in coproduct_comodule(rest).terms() {
            let phi = kahan_coeff(forest);
            if phi.is_zero() {
                continue;
            }
            let w = c * d * phi;
            add_to(&mut form, mu, &w * &eta_beta);
            add_to(&mut form, beta, -(&w * eta_value(&half, mu)));
        }
    }
    form
}

pub fn q_apply(gamma: &CoefficientFunctional, alpha: &AromaMultiset) -> Result<Rational> {
    let mut v = Rational::zero();
    for (mu, c) in q_linear(alpha) {
        v += c * gamma.get(&mu)?;
    }
    Ok(v)
}

/// `Q(gamma)` on every multiset up to `max_order`.
pub fn q_functional(gamma: &CoefficientFunctional, max_order: usize) -> Result<CoefficientFunctional> {
    let mut out = CoefficientFunctional::new(max_order);
    for alpha in enumerate_multisets(max_order, None) {
        let v = q_apply(gamma, &alpha)?;
        out.set(alpha, v)?;
    }
    Ok(out)
}

/// Rows of `Q` up to `order`: each multiset with its linear form. With
/// `max_indegree`, only multisets that survive for fields of that degree.
pub fn q_table(order: usize, max_indegree: Option<usize>) -> Vec<(AromaMultiset, LinearForm)> {
    enumerate_multisets(order, max_indegree)
        .into_iter()
        .map(|m| {
            let f = q_linear(&m);
            (m, f)
        })
        .collect()
}

/// The matrix of `Q` on multisets up to `order`, in enumeration order.
pub fn q_matrix(order: usize, max_indegree: Option<usize>) -> (Vec<AromaMultiset>, Vec<Vec<Rational>>) {
    let basis = enumerate_multisets(order, max_indegree);
    let index: BTreeMap<&AromaMultiset, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = basis
        .iter()
        .map(|m| {
            let mut row = vec![Rational::zero(); basis.len()];
            for (mu, c) in q_linear(m) {
                if let Some(&j) = index.get(&mu) {
                    row[j] = c;
                }
            }
            row
        })
        .collect();
    (basis, rows)
}

/// `gamma(C2(;)) - 1/4 gamma(1)` style rendering; `0` for the empty form.
pub fn format_linear_form(form: &LinearForm) -> String {
    if form.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in form.iter().enumerate() {
        let neg = c < &Rational::zero();
        let a = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !a.is_one() {
            s.push_str(&format_rational(&a));
            s.push(' ');
        }
        s.push_str(&format!("g({m})"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::graphs::parse_multiset;

    fn form(pairs: &[(&str, Rational)]) -> LinearForm {
        pairs.iter().map(|(s, c)| (parse_multiset(s).unwrap(), c.clone())).collect()
    }

    #[test]
    fn table_through_order_three() {
        let q = rat(1, 4);
        let h = rat(1, 2);
        let rows: Vec<(&str, LinearForm)> = vec![
            ("1", form(&[])),
            ("C1()", form(&[("1", int(-1))])),
            ("C1([])", form(&[("C1()", int(1)), ("1", -h.clone())])),
            ("C2(;)", form(&[])),
            ("C1()*C1()", form(&[("C1()", int(-2))])),
            ("C2(;[])", form(&[("C2(;)", int(1)), ("1", q.clone())])),
            ("C1([[]])", form(&[("C1([])", int(1)), ("C1()", h.clone()), ("1", -q.clone())])),
            ("C3(;;)", form(&[("1", -q.clone())])),
            (
                "C1()*C1([])",
                form(&[("C1()*C1()", int(1)), ("C1([])", int(-1)), ("C1()", int(-1)), ("1", -q.clone())]),
            ),
            ("C1()*C2(;)", form(&[("C2(;)", int(-1)), ("1", q.clone())])),
            ("C1()*C1()*C1()", form(&[("C1()*C1()", int(-3)), ("1", -q.clone())])),
        ];
        for (a, expect) in rows {
            assert_eq!(q_linear(&parse_multiset(a).unwrap()), expect, "{a}");
        }
    }

    #[test]
    fn rendering() {
        let f = form(&[("C2(;)", int(1)), ("1", rat(1, 4))]);
        assert_eq!(format_linear_form(&f), "1/4 g(1) + g(C2(;))");
        assert_eq!(format_linear_form(&form(&[("1", int(-1))])), "-g(1)");
        assert_eq!(format_linear_form(&LinearForm::new()), "0");
    }

    #[test]
    fn matrix_rows_follow_enumeration_order() {
        let (basis, m) = q_matrix(2, Some(2));
        assert_eq!(basis[0], AromaMultiset::unit());
        assert_eq!(m[1][0], int(-1));
    }
}
