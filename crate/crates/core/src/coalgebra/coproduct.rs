//! The splitting coproduct on multisets of aromas and the comodule map
//! given by admissible cuts.

use std::collections::BTreeMap;

use num_integer::binomial;
use num_traits::{One, Zero};

use super::functional::{CoefficientFunctional, ForestFunctional, TensorSum};
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::graphs::{enumerate_multisets, Aroma, AromaMultiset, Forest, RootedTree};

/// Every way to split `alpha` into two submultisets, with the number of ways
/// to choose the first factor among equal aromas.
pub fn coproduct_disjoint(alpha: &AromaMultiset) -> TensorSum<AromaMultiset, AromaMultiset> {
    let groups = alpha.groups();
    let mut out = TensorSum::new();
    let mut counts = vec![0usize; groups.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut c = 1u64;
        for ((a, m), &k) in groups.iter().zip(&counts) {
            left.extend(std::iter::repeat(a.clone()).take(k));
            right.extend(std::iter::repeat(a.clone()).take(m - k));
            c *= binomial(*m as u64, k as u64);
        }
        out.add_term(AromaMultiset::new(left), AromaMultiset::new(right), Rational::from_integer(c.into()));
        let mut i = 0;
        loop {
            if i == groups.len() {
                return out;
            }
            if counts[i] < groups[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

/// Ways to keep the root of `t` while cutting edges below it: pairs of
/// (detached forest, remaining tree).
fn keep_root(t: &RootedTree) -> Vec<(Forest, RootedTree)> {
    let mut acc: Vec<(Forest, Vec<RootedTree>)> = vec![(Forest::empty(), Vec::new())];
    for c in t.children() {
        let opts = hanging(c);
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for (cut, kept) in &acc {
            for (oc, ok) in &opts {
                let mut k = kept.clone();
                if let Some(r) = ok {
                    k.push(r.clone());
                }
                next.push((cut.union(oc), k));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(f, k)| (f, RootedTree::new(k))).collect()
}

/// Ways to treat a subtree hanging by an edge: cut the edge, or keep it and
/// recurse.
fn hanging(t: &RootedTree) -> Vec<(Forest, Option<RootedTree>)> {
    let mut out = vec![(Forest::new(vec![t.clone()]), None)];
    out.extend(keep_root(t).into_iter().map(|(f, r)| (f, Some(r))));
    out
}

fn aroma_cuts(a: &Aroma) -> Vec<(Forest, Aroma)> {
    let mut acc: Vec<(Forest, Vec<Forest>)> = vec![(Forest::empty(), Vec::new())];
    for deco in a.decorations() {
        let mut per: Vec<(Forest, Vec<RootedTree>)> = vec![(Forest::empty(), Vec::new())];
        for t in deco.trees() {
            let opts = hanging(t);
            let mut next = Vec::new();
            for (cut, kept) in &per {
                for (oc, ok) in &opts {
                    let mut k = kept.clone();
                    if let Some(r) = ok {
                        k.push(r.clone());
                    }
                    next.push((cut.union(oc), k));
                }
            }
            per = next;
        }
        let mut next = Vec::new();
        for (cut, decos) in &acc {
            for (pc, kept) in &per {
                let mut d = decos.clone();
                d.push(Forest::new(kept.clone()));
                next.push((cut.union(pc), d));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(f, d)| (f, Aroma::new(d))).collect()
}

/// The admissible-cut comodule map: each term detaches a forest of subtrees
/// through non-cycle edges, at most one cut on any path to the cycle.
pub fn coproduct_comodule(alpha: &AromaMultiset) -> TensorSum<Forest, AromaMultiset> {
    let mut acc: Vec<(Forest, Vec<Aroma>)> = vec![(Forest::empty(), Vec::new())];
    for a in alpha.aromas() {
        let cuts = aroma_cuts(a);
        let mut next = Vec::with_capacity(acc.len() * cuts.len());
        for (f, rest) in &acc {
            for (cf, ca) in &cuts {
                let mut r = rest.clone();
                r.push(ca.clone());
                next.push((f.union(cf), r));
            }
        }
        acc = next;
    }
    let mut out = TensorSum::new();
    for (f, r) in acc {
        out.add_term(f, AromaMultiset::new(r), Rational::one());
    }
    out
}

/// The convolution product `(a * b)(alpha) = sum a(beta) b(rest)` over the
/// splitting coproduct, on every multiset up to the smaller truncation.
pub fn multiply_functionals(a: &CoefficientFunctional, b: &CoefficientFunctional) -> CoefficientFunctional {
    let trunc = a.truncation().min(b.truncation());
    let mut out = CoefficientFunctional::new(trunc);
    for alpha in enumerate_multisets(trunc, None) {
        let mut v = Rational::zero();
        for (l, r, c) in coproduct_disjoint(&alpha).terms() {
            let x = a.get(l).unwrap();
            if x.is_zero() {
                continue;
            }
            v += c * x * b.get(r).unwrap();
        }
        out.set(alpha, v).unwrap();
    }
    out
}

/// The composition `(b . gamma)(alpha) = sum b(F) gamma(mu)` over admissible
/// cuts; the B-series of the result is the B-series of `gamma` evaluated at
/// the image of the B-series method with coefficients `b`.
pub fn compose_with_bseries(b: &ForestFunctional, gamma: &CoefficientFunctional) -> Result<CoefficientFunctional> {
    if !b.is_unital() {
        return Err(Error::NotUnital);
    }
    let trunc = gamma.truncation();
    let mut cache: BTreeMap<Forest, Rational> = BTreeMap::new();
    let mut out = CoefficientFunctional::new(trunc);
    for alpha in enumerate_multisets(trunc, None) {
        let mut v = Rational::zero();
        for (f, mu, d) in coproduct_comodule(&alpha).terms() {
            let g = gamma.get(mu)?;
            if g.is_zero() {
                continue;
            }
            let bf = cache.entry(f.clone()).or_insert_with(|| b.value(f)).clone();
            v += d * bf * g;
        }
        out.set(alpha, v)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;
    use crate::graphs::{parse_forest, parse_multiset};

    fn ms(s: &str) -> AromaMultiset {
        parse_multiset(s).unwrap()
    }

    #[test]
    fn splitting_a_repeated_product() {
        let alpha = ms("C1()*C1()*C1([])");
        let d = coproduct_disjoint(&alpha);
        let expect = [
            ("1", "C1()*C1()*C1([])", 1),
            ("C1()", "C1()*C1([])", 2),
            ("C1()*C1()", "C1([])", 1),
            ("C1([])", "C1()*C1()", 1),
            ("C1()*C1([])", "C1()", 2),
            ("C1()*C1()*C1([])", "1", 1),
        ];
        assert_eq!(d.len(), expect.len());
        for (l, r, c) in expect {
            assert_eq!(d.coefficient(&ms(l), &ms(r)), int(c), "{l} | {r}");
        }
    }

    #[test]
    fn cuts_of_the_tailed_two_cycle() {
        let d = coproduct_comodule(&ms("C2(;[])"));
        assert_eq!(d.len(), 2);
        assert_eq!(d.coefficient(&Forest::empty(), &ms("C2(;[])")), int(1));
        assert_eq!(d.coefficient(&parse_forest("[]").unwrap(), &ms("C2(;)")), int(1));
    }

    #[test]
    fn cuts_of_a_chain_stay_admissible() {
        // loop carrying a chain of two: cut nothing, the lower edge, or the upper edge
        let d = coproduct_comodule(&ms("C1([[]])"));
        assert_eq!(d.len(), 3);
        assert_eq!(d.coefficient(&parse_forest("[[]]").unwrap(), &ms("C1()")), int(1));
        assert_eq!(d.coefficient(&parse_forest("[]").unwrap(), &ms("C1([])")), int(1));
    }

    #[test]
    fn equal_cuts_merge() {
        // two leaves on a loop: cutting either one gives the same term
        let d = coproduct_comodule(&ms("C1([][])"));
        assert_eq!(d.coefficient(&parse_forest("[]").unwrap(), &ms("C1([])")), int(2));
        assert_eq!(d.coefficient(&parse_forest("[][]").unwrap(), &ms("C1()")), int(1));
    }

    #[test]
    fn counit_is_neutral() {
        let mut g = CoefficientFunctional::new(3);
        for (i, m) in enumerate_multisets(3, None).into_iter().enumerate() {
            g.set(m, int(i as i64 - 4)).unwrap();
        }
        let e = CoefficientFunctional::counit(3);
        assert_eq!(multiply_functionals(&g, &e), g);
        assert_eq!(multiply_functionals(&e, &g), g);
        let id = ForestFunctional::General([("1".to_string(), int(1))].into_iter().collect());
        assert_eq!(compose_with_bseries(&id, &g).unwrap(), g);
    }

    #[test]
    fn non_unital_composition_fails() {
        let b = ForestFunctional::General(BTreeMap::new());
        assert_eq!(compose_with_bseries(&b, &CoefficientFunctional::counit(2)).unwrap_err(), Error::NotUnital);
    }
}
