//! Quotients of polynomials, compared by cross-multiplication.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{substitute_homogenized, Polynomial};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        if num.nvars() != den.nvars() {
            return Err(Error::ArityMismatch { expected: num.nvars(), found: den.nvars() });
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.nvars());
        RationalFunction { num: p, den }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cheap normalization: cancels common monomial factors, returns a
    /// polynomial when the denominator divides the numerator, and otherwise
    /// makes the denominator primitive with positive leading coefficient. No
    /// multivariate gcd is attempted.
    pub fn normalized(&self) -> Self {
        if self.num.is_zero() {
            return RationalFunction::from_polynomial(Polynomial::zero(self.nvars()));
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for v in 0..self.nvars() {
            let k = num.min_degree_in(v).min(den.min_degree_in(v));
            if k > 0 {
                num = num.div_var_power(v, k).unwrap();
                den = den.div_var_power(v, k).unwrap();
            }
        }
        if let Some(q) = num.div_exact(&den) {
            return RationalFunction::from_polynomial(q);
        }
        let (s, den) = den.primitive_part();
        let num = num.scale(&(Rational::one() / s));
        RationalFunction { num, den }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        Ok(self.num.eval(point) / d)
    }

    pub fn inverse(&self) -> Result<Self> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        let num = &(&self.num.partial_derivative(var) * &self.den) - &(&self.num * &self.den.partial_derivative(var));
        RationalFunction { num, den: &self.den * &self.den }.normalized()
    }

    /// Composition with a map whose entries share one denominator.
    pub fn compose(&self, map: &[RationalFunction]) -> Result<Self> {
        let k = map.len();
        let d = self.num.degree_prefix(k).max(self.den.degree_prefix(k));
        let num = rf_substitute(&self.num, map, d)?;
        let den = rf_substitute(&self.den, map, d)?;
        RationalFunction::new(num, den)
    }

    /// `var -> c * var`.
    pub fn scale_var(&self, var: usize, c: &Rational) -> Self {
        RationalFunction { num: self.num.scale_var(var, c), den: self.den.scale_var(var, c) }
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFunction {}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction { num: &self.num + &rhs.num, den: self.den.clone() };
        }
        RationalFunction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction { num: &self.num * &rhs.num, den: &self.den * &rhs.den }
    }
}

/// `d^clear_power * p(map)` where every entry of `map` has denominator `d`.
/// `map[i]` replaces variable `i`; later variables of `p` are kept.
pub fn rf_substitute(p: &Polynomial, map: &[RationalFunction], clear_power: u32) -> Result<Polynomial> {
    let (nums, den) = split_common_denominator(map)?;
    let deg = p.degree_prefix(map.len());
    if clear_power < deg {
        return Err(Error::ClearPowerTooSmall { clear_power, degree: deg });
    }
    let target = den.as_ref().map_or(p.nvars(), |d| d.nvars());
    Ok(substitute_homogenized(p, &nums, den.as_ref(), clear_power, None, target))
}

/// Like [`rf_substitute`] but drops powers of `var` above `max` throughout.
pub fn rf_substitute_truncated(
    p: &Polynomial,
    map: &[RationalFunction],
    clear_power: u32,
    var: usize,
    max: u32,
) -> Result<Polynomial> {
    let (nums, den) = split_common_denominator(map)?;
    let deg = p.degree_prefix(map.len());
    if clear_power < deg {
        return Err(Error::ClearPowerTooSmall { clear_power, degree: deg });
    }
    let target = den.as_ref().map_or(p.nvars(), |d| d.nvars());
    Ok(substitute_homogenized(p, &nums, den.as_ref(), clear_power, Some((var, max)), target))
}

fn split_common_denominator(map: &[RationalFunction]) -> Result<(Vec<Polynomial>, Option<Polynomial>)> {
    let Some(first) = map.first() else {
        return Ok((Vec::new(), None));
    };
    if map.iter().any(|r| r.den != first.den) {
        return Err(Error::DenominatorMismatch);
    }
    let den = (!(first.den.is_constant() && first.den.constant_term().is_one())).then(|| first.den.clone());
    Ok((map.iter().map(|r| r.num.clone()).collect(), den))
}

/// The rational `c` with `p = c * q`, if there is one.
pub fn proportionality(p: &Polynomial, q: &Polynomial) -> Option<Rational> {
    if q.is_zero() {
        return p.is_zero().then(Rational::zero);
    }
    let (m, c) = q.terms().next().map(|(m, c)| (m, c.clone()))?;
    let ratio = p.coefficient(m) / c;
    (q.scale(&ratio) == *p).then_some(ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::int;

    // variables: x, h
    fn x() -> Polynomial {
        Polynomial::var(2, 0)
    }
    fn h() -> Polynomial {
        Polynomial::var(2, 1)
    }
    fn one() -> Polynomial {
        Polynomial::one(2)
    }
    fn map() -> Vec<RationalFunction> {
        vec![RationalFunction::new(x(), &one() - &(&h() * &x())).unwrap()]
    }

    #[test]
    fn substitute_into_x() {
        assert_eq!(rf_substitute(&x(), &map(), 1).unwrap(), x());
    }

    #[test]
    fn substitute_into_x_squared() {
        assert_eq!(rf_substitute(&(&x() * &x()), &map(), 2).unwrap(), &x() * &x());
    }

    #[test]
    fn substitute_into_x_plus_one() {
        let got = rf_substitute(&(&x() + &one()), &map(), 1).unwrap();
        assert_eq!(got, &(&one() + &x()) - &(&h() * &x()));
    }

    #[test]
    fn clear_power_too_small() {
        let err = rf_substitute(&(&x() * &x()), &map(), 1).unwrap_err();
        assert_eq!(err, Error::ClearPowerTooSmall { clear_power: 1, degree: 2 });
    }

    #[test]
    fn extra_clear_power_multiplies_by_denominator() {
        let p = &(&x() * &x()) + &one();
        let d = map()[0].den().clone();
        for k in 2..5 {
            let a = rf_substitute(&p, &map(), k + 1).unwrap();
            let b = rf_substitute(&p, &map(), k).unwrap();
            assert_eq!(a, &d * &b);
        }
    }

    #[test]
    fn mismatched_denominators_are_rejected() {
        let m = vec![
            RationalFunction::new(x(), one()).unwrap(),
            RationalFunction::new(x(), &one() + &h()).unwrap(),
        ];
        assert_eq!(rf_substitute(&x(), &m, 1).unwrap_err(), Error::DenominatorMismatch);
    }

    #[test]
    fn cross_multiplication_equality() {
        let a = RationalFunction::new(&x() * &x(), &x() * &h()).unwrap();
        let b = RationalFunction::new(x(), h()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.normalized().num(), &x());
        let c = RationalFunction::new(x().scale(&int(2)), h().scale(&int(2))).unwrap();
        assert_eq!(c.normalized().den(), &h());
    }
}
