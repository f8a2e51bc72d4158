//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Exponent vectors are packed into a `u64`, eight bits per variable with the
//! first variable in the most significant byte, so integer order on the packed
//! word is lexicographic order on exponent vectors. That order is the global
//! term order used for iteration and serialization. In a field of dimension
//! `n` the variables are `x1 < ... < xn < h < u`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use serde_json::Value;

use super::modular::PrimeField;
use super::rational::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 8;
const MAX_EXPONENT: u32 = 255;
const CARRY_MASK: u64 = 0x0101_0101_0101_0100;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    #[inline]
    fn shift(var: usize) -> u32 {
        ((MAX_VARS - 1 - var) * 8) as u32
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS, "at most {MAX_VARS} variables");
        let mut w = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e <= MAX_EXPONENT, "exponent {e} exceeds {MAX_EXPONENT}");
            w |= (e as u64) << Self::shift(i);
        }
        Monomial(w)
    }

    pub fn var(var: usize, e: u32) -> Monomial {
        assert!(e <= MAX_EXPONENT);
        Monomial((e as u64) << Self::shift(var))
    }

    #[inline]
    pub fn exponent(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exponent(v)).collect()
    }

    #[inline]
    pub fn total_degree(self) -> u32 {
        self.0.to_le_bytes().iter().map(|&b| b as u32).sum()
    }

    /// Degree in the first `k` variables.
    pub fn degree_prefix(self, k: usize) -> u32 {
        (0..k).map(|v| self.exponent(v)).sum()
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        let s = self.0.checked_add(other.0).expect("exponent overflow");
        assert!((s ^ self.0 ^ other.0) & CARRY_MASK == 0, "exponent overflow");
        Monomial(s)
    }

    pub fn with_exponent(self, var: usize, e: u32) -> Monomial {
        assert!(e <= MAX_EXPONENT);
        let sh = Self::shift(var);
        Monomial((self.0 & !(0xffu64 << sh)) | ((e as u64) << sh))
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Monomial, Rational)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial { nvars, terms: Vec::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, Monomial::ONE, c)
    }

    pub fn monomial(nvars: usize, m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.push((m, c));
        }
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var < nvars);
        Self::monomial(nvars, Monomial::var(var, 1), Rational::one())
    }

    /// Builds a polynomial from explicit exponent vectors; like terms are merged.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        if nvars > MAX_VARS {
            return Err(Error::Dimension(format!("at most {MAX_VARS} variables")));
        }
        let mut raw = Vec::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::ArityMismatch { expected: nvars, found: exps.len() });
            }
            if exps.iter().any(|&e| e > MAX_EXPONENT) {
                return Err(Error::Parse(format!("exponent above {MAX_EXPONENT}")));
            }
            raw.push((Monomial::from_exponents(&exps), c));
        }
        Ok(Self::from_monomials(nvars, raw))
    }

    pub(crate) fn from_monomials(nvars: usize, mut raw: Vec<(Monomial, Rational)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &Rational)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms
            .binary_search_by(|(t, _)| t.cmp(&m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(Monomial::ONE)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Monomial::ONE)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total_degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Total degree in the first `k` variables.
    pub fn degree_prefix(&self, k: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree_prefix(k)).max().unwrap_or(0)
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).min().unwrap_or(0)
    }

    /// The same polynomial viewed in a larger variable list (new variables appended).
    pub fn embed(&self, nvars: usize) -> Polynomial {
        assert!(nvars >= self.nvars && nvars <= MAX_VARS);
        Polynomial { nvars, terms: self.terms.clone() }
    }

    /// Drops trailing variables, which must not occur.
    pub fn restrict(&self, nvars: usize) -> Result<Polynomial> {
        for (m, _) in &self.terms {
            if (nvars..self.nvars).any(|v| m.exponent(v) > 0) {
                return Err(Error::ArityMismatch { expected: nvars, found: self.nvars });
            }
        }
        Ok(Polynomial { nvars, terms: self.terms.clone() })
    }

    fn check_same(&self, other: &Polynomial) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials over different variable lists; embed first"
        );
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    /// Exact division by `var^k`; `None` if some term has a smaller power.
    /// The quotient `self / d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let &(lm_d, ref lc_d) = d.terms.last()?;
        let mut r = self.clone();
        let mut q = Polynomial::zero(self.nvars);
        while let Some(&(lm, ref lc)) = r.terms.last() {
            if !(0..self.nvars).all(|v| lm.exponent(v) >= lm_d.exponent(v)) {
                return None;
            }
            let m = Monomial(lm.0 - lm_d.0);
            let c = lc / lc_d;
            r = &r - &d.mul_monomial(m).scale(&c);
            q += &Polynomial::monomial(self.nvars, m, c);
        }
        Some(q)
    }

    pub fn div_var_power(&self, var: usize, k: u32) -> Option<Polynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            if e < k {
                return None;
            }
            terms.push((m.with_exponent(var, e - k), c.clone()));
        }
        Some(Polynomial { nvars: self.nvars, terms })
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Polynomial {
        assert!(var < self.nvars);
        let raw = self
            .terms
            .iter()
            .filter_map(|(m, c)| {
                let e = m.exponent(var);
                (e > 0).then(|| (m.with_exponent(var, e - 1), c * Rational::from_integer(e.into())))
            })
            .collect();
        Polynomial::from_monomials(self.nvars, raw)
    }

    /// Coefficient of `var^k`, as a polynomial in which `var` no longer occurs.
    pub fn coefficient_of(&self, var: usize, k: u32) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(var) == k)
            .map(|(m, c)| (m.with_exponent(var, 0), c.clone()))
            .collect();
        Polynomial::from_monomials(self.nvars, terms)
    }

    /// Drops all terms with `var` degree above `max`.
    pub fn truncate(&self, var: usize, max: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exponent(var) <= max)
                .cloned()
                .collect(),
        }
    }

    /// Keeps only terms whose `var` exponent has the given parity.
    pub fn parity_part(&self, var: usize, even: bool) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.exponent(var) % 2 == 0) == even)
                .cloned()
                .collect(),
        }
    }

    /// Replaces `var` by `c * var`.
    pub fn scale_var(&self, var: usize, c: &Rational) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(m, x)| (*m, x * num_traits::pow(c.clone(), m.exponent(var) as usize)))
            .collect();
        Polynomial::from_monomials(self.nvars, terms)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|x| vec![Rational::one(), x.clone()]).collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..self.nvars {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e {
                    let next = powers[v].last().unwrap() * &point[v];
                    powers[v].push(next);
                }
                t *= &powers[v][e];
            }
            acc += t;
        }
        acc
    }

    /// Substitutes values for the given variables, keeping the others symbolic.
    pub fn eval_partial(&self, assignments: &[(usize, Rational)]) -> Polynomial {
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m = *m;
                let mut c = c.clone();
                for (v, x) in assignments {
                    let e = m.exponent(*v);
                    if e > 0 {
                        c *= num_traits::pow(x.clone(), e as usize);
                        m = m.with_exponent(*v, 0);
                    }
                }
                (m, c)
            })
            .collect();
        Polynomial::from_monomials(self.nvars, raw)
    }

    pub fn to_mod(&self, field: &PrimeField) -> Option<ModPolynomial> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((*m, field.from_rational(c)?));
        }
        Some(ModPolynomial { nvars: self.nvars, terms })
    }

    /// Simultaneous substitution of `values[i]` for variable `i`, for the
    /// first `values.len()` variables; the remaining variables are kept.
    pub fn substitute(&self, values: &[Polynomial]) -> Polynomial {
        let nsub = values.len();
        assert!(nsub <= self.nvars);
        let target = values.first().map(|v| v.nvars).unwrap_or(self.nvars);
        assert!(target >= self.nvars || nsub == self.nvars);
        let deg = self.degree_prefix(nsub);
        substitute_homogenized(self, values, None, deg, None, target)
    }

    /// Substitution followed by dropping `var` powers above `max` (applied to
    /// every intermediate product, so it is cheap for truncated series).
    pub fn substitute_truncated(&self, values: &[Polynomial], var: usize, max: u32) -> Polynomial {
        let nsub = values.len();
        let target = values.first().map(|v| v.nvars).unwrap_or(self.nvars);
        let deg = self.degree_prefix(nsub);
        substitute_homogenized(self, values, None, deg, Some((var, max)), target)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    Value::Array(vec![
                        Value::Array(m.exponents(self.nvars).into_iter().map(Value::from).collect()),
                        Value::String(format_rational(c)),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(value: &Value, nvars: usize) -> Result<Polynomial> {
        let bad = |msg: &str| Error::Parse(format!("polynomial: {msg}"));
        let arr = value.as_array().ok_or_else(|| bad("expected an array of terms"))?;
        let mut terms = Vec::with_capacity(arr.len());
        for t in arr {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term must be [exponents, coefficient]"))?;
            let exps = pair[0]
                .as_array()
                .ok_or_else(|| bad("exponent vector must be an array"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("exponents must be non-negative integers")))
                .collect::<Result<Vec<u32>>>()?;
            let c = json_rational(&pair[1])?;
            terms.push((exps, c));
        }
        Polynomial::from_terms(nvars, terms)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&v| m.exponent(v) > 0)
                .map(|v| match m.exponent(v) {
                    1 => names[v].clone(),
                    e => format!("{}^{}", names[v], e),
                })
                .collect();
            if mono.is_empty() {
                out.push_str(&format_rational(&a));
            } else {
                if !a.is_one() {
                    if a.is_integer() {
                        out.push_str(&format!("{a}*"));
                    } else {
                        out.push_str(&format!("({a})*"));
                    }
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }

    /// Multiplies by the lcm of the denominators and divides by the gcd of the
    /// numerators, giving a primitive integer polynomial; returns it with the
    /// factor `s` such that `self = s * primitive`.
    pub fn primitive_part(&self) -> (Rational, Polynomial) {
        if self.is_zero() {
            return (Rational::one(), self.clone());
        }
        let l = super::rational::lcm_of_denominators(self.terms.iter().map(|(_, c)| c));
        let g = self
            .terms
            .iter()
            .fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.numer() * (&l / c.denom()))));
        let mut s = Rational::new(g, l);
        if self.terms.last().unwrap().1.is_negative() {
            s = -s;
        }
        (s.clone(), self.scale(&(Rational::one() / s)))
    }
}

pub(crate) fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| Error::Parse(format!("coefficient {n} must be an integer or a \"p/q\" string"))),
        other => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("v{i}")).collect();
        write!(f, "Polynomial[{}]({})", self.nvars, self.display_with(&names))
    }
}

/// A polynomial with coefficients reduced modulo a prime, for fast evaluation.
#[derive(Clone, Debug)]
pub struct ModPolynomial {
    nvars: usize,
    terms: Vec<(Monomial, u64)>,
}

impl ModPolynomial {
    pub fn eval(&self, field: &PrimeField, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = 0u64;
        let mut powers: Vec<Vec<u64>> = point.iter().map(|&x| vec![1, x]).collect();
        for (m, c) in &self.terms {
            let mut t = *c;
            for (v, pw) in powers.iter_mut().enumerate() {
                let e = m.exponent(v) as usize;
                if e == 0 {
                    continue;
                }
                while pw.len() <= e {
                    let next = field.mul(*pw.last().unwrap(), point[v]);
                    pw.push(next);
                }
                t = field.mul(t, pw[e]);
            }
            acc = field.add(acc, t);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials: the workhorse behind multiplication and substitution.

#[derive(Clone, Debug, Default)]
pub(crate) struct ZPoly {
    terms: Vec<(Monomial, BigInt)>,
}

impl ZPoly {
    fn one() -> ZPoly {
        ZPoly { terms: vec![(Monomial::ONE, BigInt::one())] }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `p = z / den`, with `z` integral.
    fn from_poly(p: &Polynomial) -> (ZPoly, BigInt) {
        let l = super::rational::lcm_of_denominators(p.terms.iter().map(|(_, c)| c));
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&l / c.denom())))
            .collect();
        (ZPoly { terms }, l)
    }

    fn to_poly(&self, nvars: usize, den: &BigInt) -> Polynomial {
        Polynomial {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, Rational::new(c.clone(), den.clone())))
                .collect(),
        }
    }

    fn max_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }

    fn add(&self, other: &ZPoly) -> ZPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a.1 + &b.1;
                    if !s.is_zero() {
                        out.push((a.0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        ZPoly { terms: out }
    }

    fn mul(&self, other: &ZPoly, trunc: Option<(usize, u32)>) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::default();
        }
        let (small, large) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let keep = |m: Monomial| trunc.map_or(true, |(v, max)| m.exponent(v) <= max);
        let count_bits = 64 - (small.terms.len() as u64).leading_zeros() as u64;
        let mut terms: Vec<(Monomial, BigInt)>;
        if small.max_bits() + large.max_bits() + count_bits < 126 {
            let sa: Vec<(Monomial, i128)> = small.terms.iter().map(|(m, c)| (*m, c.to_i128().unwrap())).collect();
            let la: Vec<(Monomial, i128)> = large.terms.iter().map(|(m, c)| (*m, c.to_i128().unwrap())).collect();
            let mut acc: FxHashMap<Monomial, i128> = FxHashMap::default();
            acc.reserve(la.len() * 2);
            for (ma, ca) in &sa {
                for (mb, cb) in &la {
                    let m = ma.mul(*mb);
                    if keep(m) {
                        *acc.entry(m).or_insert(0) += ca * cb;
                    }
                }
            }
            terms = acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(m, c)| (m, BigInt::from(c)))
                .collect();
        } else {
            let mut acc: FxHashMap<Monomial, BigInt> = FxHashMap::default();
            acc.reserve(large.terms.len() * 2);
            for (ma, ca) in &small.terms {
                for (mb, cb) in &large.terms {
                    let m = ma.mul(*mb);
                    if keep(m) {
                        let prod = ca * cb;
                        match acc.get_mut(&m) {
                            Some(e) => *e += prod,
                            None => {
                                acc.insert(m, prod);
                            }
                        }
                    }
                }
            }
            terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        ZPoly { terms }
    }
}

fn mul_polys(a: &Polynomial, b: &Polynomial) -> Polynomial {
    a.check_same(b);
    if a.is_zero() || b.is_zero() {
        return Polynomial::zero(a.nvars);
    }
    let (za, da) = ZPoly::from_poly(a);
    let (zb, db) = ZPoly::from_poly(b);
    za.mul(&zb, None).to_poly(a.nvars, &(da * db))
}

/// Computes `den^clear * p(nums / den)` where `nums[i]` replaces variable `i`
/// (`den = 1` when `None`). Variables of `p` past `nums.len()` are kept; all
/// inputs and the result live over `target_nvars` variables.
pub(crate) fn substitute_homogenized(
    p: &Polynomial,
    nums: &[Polynomial],
    den: Option<&Polynomial>,
    clear: u32,
    trunc: Option<(usize, u32)>,
    target_nvars: usize,
) -> Polynomial {
    let nsub = nums.len();
    if p.is_zero() {
        return Polynomial::zero(target_nvars);
    }
    debug_assert!(clear >= p.degree_prefix(nsub));
    for q in nums.iter().chain(den) {
        assert_eq!(q.nvars, target_nvars, "substitution values over a different variable list");
    }
    // Scale everything to integers: nums[i] = zn[i]/an[i], den = zd/ad.
    let (zn, an): (Vec<ZPoly>, Vec<BigInt>) = nums.iter().map(ZPoly::from_poly).unzip();
    let (zd, ad) = match den {
        Some(d) => ZPoly::from_poly(d),
        None => (ZPoly::one(), BigInt::one()),
    };

    // Group terms of p by their substituted exponent vector; the coefficient of
    // each group is a polynomial in the kept variables. Fold the scalar
    // factors an^-a * ad^-(clear-|a|) into it.
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<(Monomial, Rational)>> = Default::default();
    for (m, c) in &p.terms {
        let a: Vec<u32> = (0..nsub).map(|v| m.exponent(v)).collect();
        let mut rest = *m;
        for v in 0..nsub {
            rest = rest.with_exponent(v, 0);
        }
        groups.entry(a).or_default().push((rest, c.clone()));
    }
    let mut scaled: Vec<(Vec<u32>, Vec<(Monomial, Rational)>)> = Vec::with_capacity(groups.len());
    for (a, terms) in groups {
        let s: u32 = a.iter().sum();
        let mut den_factor = num_traits::pow(ad.clone(), (clear - s) as usize);
        for (v, &e) in a.iter().enumerate() {
            den_factor *= num_traits::pow(an[v].clone(), e as usize);
        }
        let f = Rational::new(BigInt::one(), den_factor);
        scaled.push((a, terms.into_iter().map(|(m, c)| (m, c * &f)).collect()));
    }
    let lcm = super::rational::lcm_of_denominators(scaled.iter().flat_map(|(_, t)| t.iter().map(|(_, c)| c)));
    let int_groups: Vec<(Vec<u32>, ZPoly)> = scaled
        .into_iter()
        .map(|(a, terms)| {
            let mut t: Vec<(Monomial, BigInt)> = terms
                .into_iter()
                .map(|(m, c)| (m, c.numer() * (&lcm / c.denom())))
                .collect();
            t.sort_unstable_by(|x, y| x.0.cmp(&y.0));
            (a, ZPoly { terms: t })
        })
        .collect();

    // G_s = sum_{|a| = s} c_a * nums^a, by Horner over the substituted variables.
    let max_s = int_groups.iter().map(|(a, _)| a.iter().sum::<u32>()).max().unwrap_or(0);
    let mut g: Vec<ZPoly> = Vec::with_capacity(max_s as usize + 1);
    for s in 0..=max_s {
        let items: Vec<(&[u32], &ZPoly)> = int_groups
            .iter()
            .filter(|(a, _)| a.iter().sum::<u32>() == s)
            .map(|(a, z)| (a.as_slice(), z))
            .collect();
        g.push(horner(&items, 0, &zn, trunc));
    }
    // result = sum_s den^(clear - s) G_s, by Horner in den.
    let mut acc = ZPoly::default();
    for s in 0..=clear {
        if !acc.is_zero() && den.is_some() {
            acc = acc.mul(&zd, trunc);
        }
        if let Some(gs) = g.get(s as usize) {
            acc = acc.add(gs);
        }
    }
    acc.to_poly(target_nvars, &lcm)
}

fn horner(items: &[(&[u32], &ZPoly)], var: usize, nums: &[ZPoly], trunc: Option<(usize, u32)>) -> ZPoly {
    if items.is_empty() {
        return ZPoly::default();
    }
    if var == nums.len() {
        debug_assert_eq!(items.len(), 1);
        return items[0].1.clone();
    }
    let max_e = items.iter().map(|(a, _)| a[var]).max().unwrap();
    let mut acc = ZPoly::default();
    for e in (0..=max_e).rev() {
        if !acc.is_zero() {
            acc = acc.mul(&nums[var], trunc);
        }
        let sub: Vec<(&[u32], &ZPoly)> = items.iter().filter(|(a, _)| a[var] == e).cloned().collect();
        if !sub.is_empty() {
            acc = acc.add(&horner(&sub, var + 1, nums, trunc));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Operators

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_same(rhs);
        let (a, b) = (&self.terms, &rhs.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = &a[i].1 + &b[j].1;
                    if !s.is_zero() {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Polynomial { nvars: self.nvars, terms: out }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        *self = &*self + rhs;
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        mul_polys(self, rhs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        mul_polys(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    fn xy() -> (Polynomial, Polynomial) {
        (Polynomial::var(2, 0), Polynomial::var(2, 1))
    }

    #[test]
    fn difference_of_squares() {
        let (x, y) = xy();
        let lhs = &(&x + &y) * &(&x - &y);
        let rhs = &(&x * &x) - &(&y * &y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn derivative_of_x2y() {
        let (x, y) = xy();
        let p = &(&x * &x) * &y;
        assert_eq!(p.partial_derivative(0), (&x * &y).scale(&int(2)));
        assert_eq!(p.partial_derivative(1), &x * &x);
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let err = Polynomial::from_terms(2, vec![(vec![1, 0, 0], int(1))]).unwrap_err();
        assert_eq!(err, Error::ArityMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let p = Polynomial::from_terms(1, vec![(vec![1], int(2)), (vec![1], int(-2))]).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn term_order_is_lex_with_first_variable_most_significant() {
        let a = Monomial::from_exponents(&[1, 0]);
        let b = Monomial::from_exponents(&[0, 5]);
        assert!(b < a);
        assert_eq!(a.exponents(2), vec![1, 0]);
    }

    #[test]
    #[should_panic(expected = "exponent overflow")]
    fn exponent_overflow_panics() {
        let x = Polynomial::var(1, 0);
        let big = x.pow(200);
        let _ = &big * &big;
    }

    #[test]
    fn simultaneous_substitution() {
        // p(x, y) = x*y with x <- y, y <- x + 1  ==> y*(x+1)
        let (x, y) = xy();
        let p = &x * &y;
        let one = Polynomial::one(2);
        let q = p.substitute(&[y.clone(), &x + &one]);
        assert_eq!(q, &y * &(&x + &one));
    }

    #[test]
    fn json_round_trip() {
        let p = Polynomial::from_terms(2, vec![(vec![2, 0], rat(-1, 8)), (vec![0, 0], int(1))]).unwrap();
        let v = p.to_json();
        assert_eq!(v.to_string(), r#"[[[0,0],"1"],[[2,0],"-1/8"]]"#);
        assert_eq!(Polynomial::from_json(&v, 2).unwrap(), p);
    }

    #[test]
    fn evaluation() {
        let (x, y) = xy();
        let p = &(&x * &x) - &y.scale(&rat(1, 2));
        assert_eq!(p.eval(&[int(3), int(4)]), int(7));
    }

    #[test]
    fn large_coefficient_products_take_the_bigint_path() {
        let x = Polynomial::var(1, 0);
        let c = Rational::from_integer(BigInt::from(3u32).pow(90));
        let p = &x.scale(&c) + &Polynomial::one(1);
        let sq = &p * &p;
        assert_eq!(sq.coefficient(Monomial::var(0, 2)), &c * &c);
        assert_eq!(sq.coefficient(Monomial::var(0, 1)), &c * int(2));
    }

    fn arb_poly() -> impl Strategy<Value = Polynomial> {
        proptest::collection::vec(((0u32..3, 0u32..3, 0u32..2), -9i64..9, 1i64..5), 0..6).prop_map(|ts| {
            Polynomial::from_terms(3, ts.into_iter().map(|((a, b, c), n, d)| (vec![a, b, c], rat(n, d)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&(&a + &b) - &b - a.clone()).is_zero());
        }

        #[test]
        fn substitution_commutes_with_evaluation(a in arb_poly(), b in arb_poly(), p in arb_poly()) {
            let point = [rat(1, 2), rat(-2, 3), rat(3, 1)];
            let sub = p.substitute(&[a.clone(), b.clone()]);
            let direct = p.eval(&[a.eval(&point), b.eval(&point), point[2].clone()]);
            prop_assert_eq!(sub.eval(&point), direct);
        }

        #[test]
        fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
            let shifted = &(&a * &b) + &Polynomial::var(3, 2).pow(3);
            if let Some(q) = shifted.div_exact(&b) {
                prop_assert_eq!(&q * &b, shifted);
            }
        }
    }
}
