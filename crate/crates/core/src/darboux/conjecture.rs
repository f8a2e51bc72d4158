//! Instance check of the conjectured density for divergence-free homogeneous
//! quadratic fields in three dimensions satisfying `F(C3) = alpha F(C2(;[]))`.

use num_traits::One;

use super::analysis::{cycle_condition, kernel_relations, CycleCondition};
use super::basis::Parity;
use super::solve::solve_darboux;
use super::verify::DarbouxContext;
use crate::algebra::{Monomial, Polynomial, Rational};
use crate::coalgebra::CoefficientFunctional;
use crate::error::{Error, Result};
use crate::field::{AromaEvaluator, QuadraticVectorField};
use crate::graphs::{parse_multiset, AromaMultiset};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjectureOutcome {
    /// `F(C3)` is not a multiple of `F(C2(;[]))`; nothing is asserted.
    HypothesisFails,
    /// Both aromatic functions vanish, so no `alpha` is singled out.
    Degenerate,
    /// A verified density with the predicted low-order terms exists.
    Confirmed,
    /// No combination of the computed densities has the predicted terms.
    Counterexample,
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub hypothesis: CycleCondition,
    pub outcome: ConjectureOutcome,
    /// Predicted coefficient on `C2(;)`: `(alpha - 3) / 12`.
    pub expected_c2: Option<Rational>,
    pub gamma: Option<CoefficientFunctional>,
    pub density: Option<Polynomial>,
    pub verified: bool,
    /// Nonzero coefficients of the density on order-4 multisets.
    pub order4_weights: Vec<(AromaMultiset, Rational)>,
    /// Relations among order-4 aromatic functions of the field.
    pub order4_relations: Vec<Vec<(AromaMultiset, Rational)>>,
}

impl ConjectureReport {
    pub fn is_counterexample(&self) -> bool {
        self.outcome == ConjectureOutcome::Counterexample
    }
}

/// Checks the field against the conjectured density
/// `1 + (alpha - 3)/24 h^2 F(C2) + O(h^4)` at order 4.
pub fn conjecture_check(f: &QuadraticVectorField, seed: u64) -> Result<ConjectureReport> {
    if f.dim() != 3 || !f.is_homogeneous() || !f.divergence().is_zero() {
        return Err(Error::InvalidField(
            "the conjecture concerns divergence-free homogeneous quadratic fields in three dimensions".into(),
        ));
    }
    let hypothesis = cycle_condition(f);
    let relations = kernel_relations(f, 4);
    let order4_relations: Vec<_> =
        relations.terms().into_iter().filter(|r| r.first().is_some_and(|(m, _)| m.order() == 4)).collect();
    let mut report = ConjectureReport {
        hypothesis: hypothesis.clone(),
        outcome: ConjectureOutcome::HypothesisFails,
        expected_c2: None,
        gamma: None,
        density: None,
        verified: false,
        order4_weights: Vec::new(),
        order4_relations,
    };
    if hypothesis.both_zero {
        report.outcome = ConjectureOutcome::Degenerate;
        return Ok(report);
    }
    let Some(alpha) = hypothesis.alpha.clone() else {
        return Ok(report);
    };
    if alpha == Rational::from_integer((-3).into()) {
        return Err(Error::SingularConjecture);
    }
    let three = Rational::from_integer(3.into());
    let expected = (&alpha - &three) / Rational::from_integer(12.into());
    report.expected_c2 = Some(expected.clone());

    let hv = f.h_var();
    let c2 = parse_multiset("C2(;)").unwrap();
    let fc2 = AromaEvaluator::new(f).multiset(&c2);
    let half = Rational::new(1.into(), 2.into());
    let target = &Polynomial::one(f.nvars()) + &fc2.scale(&(&expected * &half)).mul_monomial(Monomial::var(hv, 2));

    let sol = solve_darboux(f, 4, Parity::Even, &[], seed)?;
    let Some((gamma, density)) = sol.with_leading_terms(&target, 3) else {
        report.outcome = ConjectureOutcome::Counterexample;
        return Ok(report);
    };
    report.verified = DarbouxContext::new(f).residual(&density).is_zero();
    report.order4_weights = gamma.iter().filter(|(m, _)| m.order() == 4).map(|(m, c)| (m.clone(), c.clone())).collect();
    // gamma(1) and gamma(C2) are read off the functional when C2 is a basis element
    let pattern = gamma.get(&AromaMultiset::unit()).unwrap().is_one()
        && (gamma.get(&c2).unwrap() == expected || !sol.basis.elements.iter().any(|e| e.multiset == c2));
    report.outcome = if report.verified && pattern { ConjectureOutcome::Confirmed } else { ConjectureOutcome::Counterexample };
    report.gamma = Some(gamma);
    report.density = Some(density);
    Ok(report)
}
