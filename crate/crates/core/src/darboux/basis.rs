//! A maximal independent set of weighted aromatic functions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use crate::algebra::{Monomial, Polynomial, Rational};
use crate::error::{Error, Result};
use crate::field::{AromaEvaluator, QuadraticVectorField};
use crate::graphs::{enumerate_multisets, AromaMultiset};

/// Multisets with a vertex of indegree 3 or more vanish on quadratic fields.
pub const QUADRATIC_MAX_INDEGREE: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
    Both,
}

impl Parity {
    pub fn admits(self, order: usize) -> bool {
        match self {
            Parity::Even => order % 2 == 0,
            Parity::Odd => order % 2 == 1,
            Parity::Both => true,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::Both => "both",
        })
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            "both" => Ok(Parity::Both),
            _ => Err(Error::Parse(format!("parity must be even, odd or both, got `{s}`"))),
        }
    }
}

/// A known polynomial used to multiply every aromatic function, typically a
/// first integral found elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Augmenter {
    pub label: String,
    pub polynomial: Polynomial,
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub multiset: AromaMultiset,
    pub augmenter: Option<usize>,
    /// `F(alpha)` times the augmenter.
    pub function: Polynomial,
    /// `h^{|alpha|} / sigma(alpha)` times `function`.
    pub weighted: Polynomial,
}

impl BasisElement {
    pub fn order(&self) -> usize {
        self.multiset.order()
    }
}

#[derive(Clone, Debug)]
pub struct Basis {
    pub dim: usize,
    pub max_order: usize,
    pub elements: Vec<BasisElement>,
    pub augmenters: Vec<Augmenter>,
    /// Enumerated candidates found dependent on earlier ones.
    pub dropped: Vec<(AromaMultiset, Option<usize>)>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn label(&self, k: usize) -> String {
        let e = &self.elements[k];
        self.label_of(&e.multiset, e.augmenter)
    }

    pub fn label_of(&self, m: &AromaMultiset, aug: Option<usize>) -> String {
        match aug {
            None => m.encode().to_string(),
            Some(a) => format!("{}*{}", self.augmenters[a].label, m.encode()),
        }
    }

    /// The elements whose order has the given parity, keeping their order.
    pub fn restrict(&self, parity: Parity) -> Basis {
        let keep = |m: &AromaMultiset| parity.admits(m.order());
        Basis {
            dim: self.dim,
            max_order: self.max_order,
            elements: self.elements.iter().filter(|e| keep(&e.multiset)).cloned().collect(),
            augmenters: self.augmenters.clone(),
            dropped: self.dropped.iter().filter(|(m, _)| keep(m)).cloned().collect(),
        }
    }

    /// `sum_k c_k weighted_k`.
    pub fn combine(&self, coords: &[Rational]) -> Polynomial {
        let nvars = self.dim + 1;
        let mut p = Polynomial::zero(nvars);
        for (c, e) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                p += &e.weighted.scale(c);
            }
        }
        p
    }
}

/// Incremental row echelon form over sparse coefficient vectors; each stored
/// row is keyed by its largest monomial.
#[derive(Default)]
pub(crate) struct SparseEchelon {
    rows: FxHashMap<Monomial, BTreeMap<Monomial, Rational>>,
}

impl SparseEchelon {
    fn reduce(&self, p: &Polynomial) -> BTreeMap<Monomial, Rational> {
        let mut v: BTreeMap<Monomial, Rational> = p.terms().map(|(m, c)| (m, c.clone())).collect();
        while let Some((&lead, c)) = v.last_key_value() {
            let Some(row) = self.rows.get(&lead) else { break };
            let factor = c / &row[&lead];
            for (m, rc) in row {
                let e = v.entry(*m).or_insert_with(Rational::zero);
                *e -= &factor * rc;
                if e.is_zero() {
                    v.remove(m);
                }
            }
        }
        v
    }

    /// Adds `p` if it is independent of the stored rows.
    pub(crate) fn insert(&mut self, p: &Polynomial) -> bool {
        let v = self.reduce(p);
        match v.last_key_value() {
            None => false,
            Some((&lead, _)) => {
                self.rows.insert(lead, v);
                true
            }
        }
    }
}

fn weight(m: &AromaMultiset, h_var: usize, nvars: usize) -> Polynomial {
    let c = Rational::new(1.into(), m.symmetry().into());
    Polynomial::monomial(nvars, Monomial::var(h_var, m.order() as u32), c)
}

/// Enumerates filtered multisets up to `max_order` in (order, encoding)
/// order, then each augmenter times each multiset, keeping an element only if
/// its weighted function is independent of the ones kept before it.
pub fn build_basis(f: &QuadraticVectorField, max_order: usize, augmenters: &[Augmenter]) -> Result<Basis> {
    let nvars = f.nvars();
    let augs: Vec<Augmenter> = augmenters
        .iter()
        .map(|a| {
            let p = match a.polynomial.nvars() {
                k if k == f.dim() => a.polynomial.embed(nvars),
                k if k == nvars => a.polynomial.clone(),
                k => return Err(Error::ArityMismatch { expected: nvars, found: k }),
            };
            Ok(Augmenter { label: a.label.clone(), polynomial: p })
        })
        .collect::<Result<_>>()?;
    let eval = AromaEvaluator::new(f);
    let multisets = enumerate_multisets(max_order, Some(QUADRATIC_MAX_INDEGREE));
    let mut echelon = SparseEchelon::default();
    let mut elements = Vec::new();
    let mut dropped = Vec::new();
    let slots = std::iter::once(None).chain((0..augs.len()).map(Some));
    for aug in slots {
        for m in &multisets {
            let fm = eval.multiset(m);
            let function = match aug {
                None => fm,
                Some(a) => &fm * &augs[a].polynomial,
            };
            let weighted = &function * &weight(m, f.h_var(), nvars);
            if echelon.insert(&weighted) {
                elements.push(BasisElement { multiset: m.clone(), augmenter: aug, function, weighted });
            } else {
                dropped.push((m.clone(), aug));
            }
        }
    }
    Ok(Basis { dim: f.dim(), max_order, elements, augmenters: augs, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::parse_multiset;
    use serde_json::json;

    #[test]
    fn zero_field_keeps_only_the_unit() {
        let b = build_basis(&QuadraticVectorField::zero(3), 4, &[]).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.elements[0].multiset.is_unit());
    }

    #[test]
    fn one_dimensional_square_drops_one_of_two() {
        let f = QuadraticVectorField::from_json(&json!({"dim": 1, "quadratic": [[1,1,1,"1"]]})).unwrap();
        let b = build_basis(&f, 2, &[]).unwrap();
        let order2: Vec<_> = b.elements.iter().filter(|e| e.order() == 2).map(|e| e.multiset.encode()).collect();
        assert_eq!(order2, vec!["C1()*C1()"]);
        assert!(b.dropped.iter().any(|(m, _)| *m == parse_multiset("C2(;)").unwrap()));
    }

    #[test]
    fn parity_restriction_and_parsing() {
        let b = build_basis(&QuadraticVectorField::zero(2), 2, &[]).unwrap();
        assert_eq!(b.restrict(Parity::Odd).len(), 0);
        assert_eq!(b.restrict(Parity::Even).len(), 1);
        assert_eq!("both".parse::<Parity>().unwrap(), Parity::Both);
        assert!("neither".parse::<Parity>().is_err());
    }
}
