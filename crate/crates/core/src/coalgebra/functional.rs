use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::algebra::rational::{format_rational, parse_rational};
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::graphs::{parse_multiset, AromaMultiset, Forest};

/// A finitely supported map from aroma multisets to rationals. Values on
/// multisets above `truncation` are unknown, and asking for them is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct CoefficientFunctional {
    values: BTreeMap<AromaMultiset, Rational>,
    truncation: usize,
}

impl CoefficientFunctional {
    pub fn new(truncation: usize) -> Self {
        CoefficientFunctional { values: BTreeMap::new(), truncation }
    }

    /// The counit: 1 on the unit, 0 elsewhere.
    pub fn counit(truncation: usize) -> Self {
        let mut g = Self::new(truncation);
        g.set(AromaMultiset::unit(), Rational::one()).unwrap();
        g
    }

    pub fn from_values<I>(truncation: usize, values: I) -> Result<Self>
    where
        I: IntoIterator<Item = (AromaMultiset, Rational)>,
    {
        let mut g = Self::new(truncation);
        for (m, v) in values {
            let old = g.get(&m)?;
            g.set(m, old + v)?;
        }
        Ok(g)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn set(&mut self, m: AromaMultiset, v: Rational) -> Result<()> {
        if m.order() > self.truncation {
            return Err(Error::Truncated { truncation: self.truncation, requested: m.order() });
        }
        if v.is_zero() {
            self.values.remove(&m);
        } else {
            self.values.insert(m, v);
        }
        Ok(())
    }

    pub fn get(&self, m: &AromaMultiset) -> Result<Rational> {
        if m.order() > self.truncation {
            return Err(Error::Truncated { truncation: self.truncation, requested: m.order() });
        }
        Ok(self.values.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    /// Nonzero entries in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&AromaMultiset, &Rational)> {
        self.values.iter()
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut g = Self::new(self.truncation);
        for (m, v) in &self.values {
            g.set(m.clone(), v * c).unwrap();
        }
        g
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut g = Self::new(self.truncation.min(other.truncation));
        for (m, v) in self.values.iter().chain(other.values.iter()) {
            if m.order() <= g.truncation {
                let old = g.get(m).unwrap();
                g.set(m.clone(), old + v).unwrap();
            }
        }
        g
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (m, v) in &self.values {
            map.insert(m.encode().to_string(), Value::String(format_rational(v)));
        }
        Value::Object(map)
    }

    pub fn from_json(v: &Value, truncation: usize) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("functional must be a JSON object".into()))?;
        let mut g = Self::new(truncation);
        for (k, val) in obj {
            let m = parse_multiset(k)?;
            let q = match val {
                Value::String(s) => parse_rational(s)?,
                other => crate::algebra::poly::json_rational(other)?,
            };
            g.set(m, q)?;
        }
        Ok(g)
    }
}

impl fmt::Debug for CoefficientFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// A functional on forests.
#[derive(Clone, Debug)]
pub enum ForestFunctional {
    /// Kahan's B-series coefficients: `2^{1-|t|}` on tall trees, 0 on other
    /// trees, extended multiplicatively.
    Kahan,
    /// Values on trees (by encoding; missing trees are 0), extended multiplicatively.
    Multiplicative(BTreeMap<String, Rational>),
    /// Values on whole forests (by encoding, "1" for the empty forest).
    General(BTreeMap<String, Rational>),
}

impl ForestFunctional {
    pub fn value(&self, forest: &Forest) -> Rational {
        match self {
            ForestFunctional::Kahan => super::bseries::kahan_coeff(forest),
            ForestFunctional::Multiplicative(tv) => forest
                .trees()
                .iter()
                .map(|t| tv.get(t.encode()).cloned().unwrap_or_else(Rational::zero))
                .fold(Rational::one(), |a, b| a * b),
            ForestFunctional::General(fv) => fv.get(&forest.encode()).cloned().unwrap_or_else(Rational::zero),
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        !matches!(self, ForestFunctional::General(_))
    }

    pub fn is_unital(&self) -> bool {
        self.value(&Forest::empty()).is_one()
    }
}

/// A formal sum of pure tensors with rational coefficients; like terms merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSum<A: Ord, B: Ord> {
    terms: BTreeMap<(A, B), Rational>,
}

impl<A: Ord + Clone, B: Ord + Clone> TensorSum<A, B> {
    pub fn new() -> Self {
        TensorSum { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, a: A, b: B, c: Rational) {
        let key = (a, b);
        let v = self.terms.remove(&key).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&A, &B, &Rational)> {
        self.terms.iter().map(|((a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, a: &A, b: &B) -> Rational {
        self.terms.get(&(a.clone(), b.clone())).cloned().unwrap_or_else(Rational::zero)
    }
}

impl<A: Ord + Clone, B: Ord + Clone> Default for TensorSum<A, B> {
    fn default() -> Self {
        Self::new()
    }
}
