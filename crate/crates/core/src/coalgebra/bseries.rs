//! Distinguished coefficient maps: the Kahan method's forest coefficients and
//! the characters whose B-series are `det(I + u h f')`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::functional::CoefficientFunctional;
use crate::algebra::Rational;
use crate::graphs::{enumerate_multisets, AromaMultiset, Forest, RootedTree};

/// `2^{1-|t|}` on tall trees, 0 on other trees.
pub fn kahan_tree_coeff(t: &RootedTree) -> Rational {
    if t.is_tall() {
        Rational::new(BigInt::one(), BigInt::one() << (t.size() - 1))
    } else {
        Rational::zero()
    }
}

/// The Kahan coefficient extended multiplicatively to forests.
pub fn kahan_coeff(f: &Forest) -> Rational {
    f.trees().iter().map(kahan_tree_coeff).fold(Rational::one(), |a, b| a * b)
}

/// `prod (-1)^{k-1} u^k` over the cycles of a product of bare cycles, 0 on
/// anything else.
pub fn eta_value(u: &Rational, alpha: &AromaMultiset) -> Rational {
    if !alpha.is_product_of_cycles() {
        return Rational::zero();
    }
    let mut v = Rational::one();
    for a in alpha.aromas() {
        let k = a.cycle_length();
        let mut t = num_traits::pow(u.clone(), k);
        if k % 2 == 0 {
            t = -t;
        }
        v *= t;
    }
    v
}

/// `eta_value(u, .)` tabulated up to `truncation`.
pub fn eta_functional(u: &Rational, truncation: usize) -> CoefficientFunctional {
    let mut g = CoefficientFunctional::new(truncation);
    for m in enumerate_multisets(truncation, Some(1)) {
        if m.is_product_of_cycles() {
            g.set(m.clone(), eta_value(u, &m)).unwrap();
        }
    }
    g
}
