//! Kernel relations among aromatic functions, first integrals from ratios of
//! densities, and the necessary conditions on a field.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::solve::DarbouxSolution;
use crate::algebra::matrix::in_span;
use crate::algebra::ratfunc::proportionality;
use crate::algebra::rational::random_rational;
use crate::algebra::{Monomial, Polynomial, Rational, RationalFunction, RationalMatrix};
use crate::error::{Error, Result};
use crate::field::{AromaEvaluator, QuadraticVectorField};
use crate::graphs::{enumerate_multisets, parse_multiset, AromaMultiset};

/// Linear relations `sum c_k F(alpha_k) = 0` among multisets of one order.
#[derive(Clone, Debug)]
pub struct KernelRelations {
    pub max_order: usize,
    /// Multisets of each order, in canonical order.
    pub multisets: BTreeMap<usize, Vec<AromaMultiset>>,
    /// Canonical basis of the relations of each order, as coefficient vectors
    /// over `multisets[order]`.
    pub relations: BTreeMap<usize, Vec<Vec<Rational>>>,
}

impl KernelRelations {
    pub fn count(&self) -> usize {
        self.relations.values().map(Vec::len).sum()
    }

    /// Whether `sum c F(alpha) = 0` follows from the relations. All terms
    /// must share one order.
    pub fn contains(&self, terms: &[(AromaMultiset, Rational)]) -> bool {
        let Some((first, _)) = terms.first() else { return true };
        let order = first.order();
        let Some(ms) = self.multisets.get(&order) else { return false };
        let mut v = vec![Rational::zero(); ms.len()];
        for (m, c) in terms {
            match ms.iter().position(|x| x == m) {
                Some(i) if m.order() == order => v[i] += c,
                _ => return false,
            }
        }
        v.iter().all(Zero::is_zero) || in_span(&self.relations[&order], &v)
    }

    /// The relations as lists of (multiset, coefficient).
    pub fn terms(&self) -> Vec<Vec<(AromaMultiset, Rational)>> {
        let mut out = Vec::new();
        for (order, rels) in &self.relations {
            for r in rels {
                out.push(
                    self.multisets[order]
                        .iter()
                        .zip(r)
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(m, c)| (m.clone(), c.clone()))
                        .collect(),
                );
            }
        }
        out
    }
}

/// Canonical nullspace of `c -> sum c_k p_k` over monomial coefficients.
pub(crate) fn linear_relations(polys: &[Polynomial]) -> Vec<Vec<Rational>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let mut m = RationalMatrix::zeros(index.len(), polys.len());
    for (j, p) in polys.iter().enumerate() {
        for (mono, c) in p.terms() {
            m.set(index[&mono], j, c.clone());
        }
    }
    m.nullspace()
}

/// Exact relations among all multisets of each order up to `max_order`,
/// including those that vanish for every quadratic field.
pub fn kernel_relations(f: &QuadraticVectorField, max_order: usize) -> KernelRelations {
    let eval = AromaEvaluator::new(f);
    let mut multisets: BTreeMap<usize, Vec<AromaMultiset>> = BTreeMap::new();
    for m in enumerate_multisets(max_order, None) {
        multisets.entry(m.order()).or_default().push(m);
    }
    let relations = multisets
        .iter()
        .map(|(&order, ms)| {
            let polys: Vec<Polynomial> = ms.iter().map(|m| eval.multiset(m)).collect();
            (order, linear_relations(&polys))
        })
        .collect();
    KernelRelations { max_order, multisets, relations }
}

#[derive(Clone, Debug)]
pub struct FirstIntegrals {
    pub ratios: Vec<RationalFunction>,
    /// Rank of the Jacobian of the ratios in `x` at a random point.
    pub independent: usize,
}

/// `p` divided by the largest power of `h` dividing it.
pub fn strip_h_content(p: &Polynomial, h_var: usize) -> Polynomial {
    if p.is_zero() {
        return p.clone();
    }
    p.div_var_power(h_var, p.min_degree_in(h_var)).unwrap()
}

/// Ratios `g_i / g_1` of densities with their powers of `h` removed.
pub fn first_integrals_of(densities: &[Polynomial], dim: usize, seed: u64) -> Result<FirstIntegrals> {
    if densities.len() < 2 {
        return Ok(FirstIntegrals { ratios: Vec::new(), independent: 0 });
    }
    let g: Vec<Polynomial> = densities.iter().map(|p| strip_h_content(p, dim)).collect();
    if g[1..].iter().all(|p| proportionality(p, &g[0]).is_some()) {
        return Err(Error::NoNontrivialIntegral);
    }
    let ratios: Vec<RationalFunction> = g[1..]
        .iter()
        .map(|p| RationalFunction::new(p.clone(), g[0].clone()).map(|r| r.normalized()))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = loop {
        let p: Vec<Rational> = (0..=dim).map(|_| random_rational(&mut rng, 20, 7)).collect();
        if !g[0].eval(&p).is_zero() {
            break p;
        }
    };
    let jac: Vec<Vec<Rational>> = ratios
        .iter()
        .map(|r| (0..dim).map(|j| r.partial_derivative(j).eval(&point).unwrap()).collect())
        .collect();
    let independent = RationalMatrix::from_rows_with_cols(jac, dim)?.rank();
    Ok(FirstIntegrals { ratios, independent })
}

pub fn first_integrals(sol: &DarbouxSolution, seed: u64) -> Result<FirstIntegrals> {
    first_integrals_of(&sol.densities(), sol.field.dim(), seed)
}

/// `F(C3) = alpha F(C2 with a tail)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCondition {
    pub holds: bool,
    pub alpha: Option<Rational>,
    pub both_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conditions {
    pub div_free: bool,
    pub cond1: CycleCondition,
    /// `F(C1([])) = F(C1() C1())`.
    pub fcond2: bool,
}

pub fn cycle_condition(f: &QuadraticVectorField) -> CycleCondition {
    let eval = AromaEvaluator::new(f);
    let c3 = eval.multiset(&parse_multiset("C3(;;)").unwrap());
    let t2 = eval.multiset(&parse_multiset("C2(;[])").unwrap());
    if t2.is_zero() {
        let both_zero = c3.is_zero();
        return CycleCondition { holds: both_zero, alpha: None, both_zero };
    }
    let alpha = proportionality(&c3, &t2);
    CycleCondition { holds: alpha.is_some(), alpha, both_zero: false }
}

pub fn necessary_conditions(f: &QuadraticVectorField) -> Conditions {
    let eval = AromaEvaluator::new(f);
    let lt = eval.multiset(&parse_multiset("C1([])").unwrap());
    let ll = eval.multiset(&parse_multiset("C1()*C1()").unwrap());
    Conditions { div_free: f.divergence().is_zero(), cond1: cycle_condition(f), fcond2: lt == ll }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::corpus::systems::{lv_divfree, lv_special};
    use crate::darboux::{solve_darboux, Parity};
    use crate::field::quadratic::coordinate;
    use serde_json::json;

    #[test]
    fn generic_field_has_only_quadratic_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let f = QuadraticVectorField::random(&mut rng, 3, false, 3, 2);
        let k = kernel_relations(&f, 3);
        let filtered = enumerate_multisets(3, None).iter().filter(|m| m.max_indegree() > 2).count();
        assert_eq!(k.count(), filtered);
        assert!(k.contains(&[(parse_multiset("C1([][])").unwrap(), int(1))]));
    }

    #[test]
    fn four_cycle_relation_for_divergence_free_fields() {
        let k = kernel_relations(&lv_divfree(), 4);
        let c2sq = parse_multiset("C2(;)*C2(;)").unwrap();
        let c4 = parse_multiset("C4(;;;)").unwrap();
        assert!(k.contains(&[(c4.clone(), int(2)), (c2sq.clone(), int(-1))]));
        assert!(!k.contains(&[(c4, int(1)), (c2sq, int(-1))]));
    }

    #[test]
    fn special_lotka_volterra_integrals() {
        let sol = solve_darboux(&lv_special(), 4, Parity::Both, &[], 3).unwrap();
        let fi = first_integrals(&sol, 1).unwrap();
        assert_eq!(fi.independent, 2);
        let s = &(&coordinate(3, 0) + &coordinate(3, 1)) + &coordinate(3, 2);
        // both ratios share the denominator z^2; (x+y+z)^2 is a combination of them
        let den = fi.ratios[0].den().clone();
        assert!(fi.ratios.iter().all(|r| *r.den() == den));
        let nums: Vec<Polynomial> = fi.ratios.iter().map(|r| r.num().clone()).collect();
        let c = crate::darboux::solve::polynomial_span_coordinates(&nums, &(&(&s * &s) * &den)).unwrap();
        assert!(c.iter().all(|x| !x.is_zero()));
    }

    #[test]
    fn single_density_gives_no_integrals() {
        let fi = first_integrals_of(&[Polynomial::one(4)], 3, 0).unwrap();
        assert!(fi.ratios.is_empty());
        let p = Polynomial::one(4);
        assert_eq!(first_integrals_of(&[p.clone(), p.scale(&int(2))], 3, 0).unwrap_err(), Error::NoNontrivialIntegral);
    }

    #[test]
    fn conditions_on_known_fields() {
        let c = necessary_conditions(&lv_divfree());
        assert!(c.div_free);
        assert_eq!(c.cond1, CycleCondition { holds: true, alpha: Some(int(0)), both_zero: false });
        let g = QuadraticVectorField::from_json(&json!({"dim": 3, "quadratic": [[1,1,1,"1/2"]]})).unwrap();
        assert!(!necessary_conditions(&g).div_free);
        // f = x^2: F(C1([])) = 2 * 2x * x^2 and F(C1() C1()) = 4x^2 differ
        let sq = QuadraticVectorField::from_json(&json!({"dim": 1, "quadratic": [[1,1,1,"1"]]})).unwrap();
        assert!(!necessary_conditions(&sq).fcond2);
    }
}
