//! Coefficients of aromatic densities: candidates from sampled evaluations
//! modulo large primes, then exact symbolic verification.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::basis::{build_basis, Augmenter, Basis, Parity};
use super::verify::DarbouxContext;
use crate::algebra::matrix::span_coordinates;
use crate::algebra::modular::{crt, large_primes, PrimeField};
use crate::algebra::poly::ModPolynomial;
use crate::algebra::ratfunc::rf_substitute;
use crate::algebra::rational::{random_rational, rational_reconstruction};
use crate::algebra::{Monomial, Polynomial, Rational, RationalMatrix};
use crate::coalgebra::CoefficientFunctional;
use crate::error::{Error, Result};
use crate::field::QuadraticVectorField;

const MAX_PRIMES: usize = 64;

#[derive(Clone, Debug)]
pub struct SolutionVector {
    /// Coordinates over the basis elements.
    pub coords: Vec<Rational>,
    pub density: Polynomial,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct DarbouxSolution {
    pub field: QuadraticVectorField,
    pub parity: Parity,
    pub basis: Basis,
    pub vectors: Vec<SolutionVector>,
}

impl DarbouxSolution {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn densities(&self) -> Vec<Polynomial> {
        self.vectors.iter().map(|v| v.density.clone()).collect()
    }

    pub fn all_verified(&self) -> bool {
        self.vectors.iter().all(|v| v.verified)
    }

    /// The coefficients on plain aromatic functions.
    pub fn gamma(&self, i: usize) -> CoefficientFunctional {
        self.part(i, None)
    }

    /// The coefficients on aromatic functions times each augmenter.
    pub fn augmenter_coeffs(&self, i: usize) -> Vec<(String, CoefficientFunctional)> {
        (0..self.basis.augmenters.len())
            .map(|a| (self.basis.augmenters[a].label.clone(), self.part(i, Some(a))))
            .collect()
    }

    fn part(&self, i: usize, aug: Option<usize>) -> CoefficientFunctional {
        let mut g = CoefficientFunctional::new(self.basis.max_order);
        for (e, c) in self.basis.elements.iter().zip(&self.vectors[i].coords) {
            if e.augmenter == aug {
                g.set(e.multiset.clone(), c.clone()).unwrap();
            }
        }
        g
    }

    /// Coordinates of `p` in the span of the densities, if it lies there.
    pub fn span_coordinates(&self, p: &Polynomial) -> Option<Vec<Rational>> {
        polynomial_span_coordinates(&self.densities(), p)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.span_coordinates(p).is_some()
    }

    /// A combination of the densities agreeing with `target` through
    /// `h^through`, as (coefficients on plain aromatic functions, density).
    pub fn with_leading_terms(&self, target: &Polynomial, through: u32) -> Option<(CoefficientFunctional, Polynomial)> {
        let hv = self.field.h_var();
        let low: Vec<Polynomial> = self.vectors.iter().map(|v| v.density.truncate(hv, through)).collect();
        let lambda = polynomial_span_coordinates(&low, &target.truncate(hv, through))?;
        let mut gamma = CoefficientFunctional::new(self.basis.max_order);
        let mut density = Polynomial::zero(self.field.nvars());
        for (j, l) in lambda.iter().enumerate() {
            if !l.is_zero() {
                gamma = gamma.add(&self.gamma(j).scale(l));
                density += &self.vectors[j].density.scale(l);
            }
        }
        Some((gamma, density))
    }
}

/// Solves `sum x_i basis_i = target` over the monomial coefficients.
pub fn polynomial_span_coordinates(basis: &[Polynomial], target: &Polynomial) -> Option<Vec<Rational>> {
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in basis.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let vec_of = |p: &Polynomial| {
        let mut v = vec![Rational::zero(); index.len()];
        for (m, c) in p.terms() {
            v[index[&m]] = c.clone();
        }
        v
    };
    let rows: Vec<Vec<Rational>> = basis.iter().map(vec_of).collect();
    span_coordinates(&rows, &vec_of(target))
}

/// Finds every combination of the basis that is a density of the Kahan map,
/// running even and odd parts separately for `Parity::Both`.
pub fn solve_darboux(
    f: &QuadraticVectorField,
    max_order: usize,
    parity: Parity,
    augmenters: &[Augmenter],
    seed: u64,
) -> Result<DarbouxSolution> {
    let full = build_basis(f, max_order, augmenters)?;
    let ctx = DarbouxContext::new(f);
    let parts = match parity {
        Parity::Both => vec![Parity::Even, Parity::Odd],
        p => vec![p],
    };
    let mut basis = full.restrict(parts[0]);
    basis.elements.clear();
    basis.dropped.clear();
    let mut vectors: Vec<SolutionVector> = Vec::new();
    for part in parts {
        let sub = full.restrict(part);
        if sub.is_empty() {
            continue;
        }
        let offset = basis.len();
        let found = solve_basis(&ctx, &sub, seed)?;
        for v in &mut vectors {
            v.coords.extend(std::iter::repeat(Rational::zero()).take(sub.len()));
        }
        for mut v in found {
            let mut coords = vec![Rational::zero(); offset];
            coords.append(&mut v.coords);
            v.coords = coords;
            vectors.push(v);
        }
        basis.elements.extend(sub.elements);
        basis.dropped.extend(sub.dropped);
    }
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    Ok(DarbouxSolution { field: f.clone(), parity, basis, vectors })
}

/// Solution vectors over a fixed basis: two sampled attempts, then the fully
/// symbolic system.
pub fn solve_basis(ctx: &DarbouxContext, basis: &Basis, seed: u64) -> Result<Vec<SolutionVector>> {
    if basis.is_empty() {
        return Err(Error::EmptyBasis);
    }
    for attempt in 0..2u64 {
        let s = seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let Ok(candidates) = discover(ctx, basis, s) else { continue };
        if let Some(v) = verify_candidates(ctx, basis, candidates, s) {
            return Ok(v);
        }
    }
    symbolic_solve(ctx, basis)
}

fn sample_points(ctx: &DarbouxContext, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let n = ctx.field().dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p: Vec<Rational> = (0..=n).map(|_| random_rational(&mut rng, 20, 7)).collect();
        if p[n].is_zero() || ctx.map.denominator().eval(&p).is_zero() {
            continue;
        }
        out.push(p);
    }
    out
}

struct ModContext {
    field: PrimeField,
    det: ModPolynomial,
    nums: Vec<ModPolynomial>,
    plus: ModPolynomial,
    columns: Vec<ModPolynomial>,
}

impl ModContext {
    fn new(ctx: &DarbouxContext, basis: &Basis, p: u64) -> Option<Self> {
        let field = PrimeField::new(p);
        Some(ModContext {
            det: ctx.map.denominator().to_mod(&field)?,
            nums: ctx.map.numerators().iter().map(|q| q.to_mod(&field)).collect::<Option<_>>()?,
            plus: ctx.plus.to_mod(&field)?,
            columns: basis.elements.iter().map(|e| e.weighted.to_mod(&field)).collect::<Option<_>>()?,
            field,
        })
    }

    /// One row `det e_k(Phi) - e_k det(I + h/2 f'(Phi))`, or `None` if the
    /// point is singular modulo p.
    fn row(&self, point: &[Rational]) -> Option<Vec<u64>> {
        let fp = &self.field;
        let x: Vec<u64> = point.iter().map(|q| fp.from_rational(q)).collect::<Option<_>>()?;
        let det = self.det.eval(fp, &x);
        let inv = fp.inv(det)?;
        let mut image: Vec<u64> = self.nums.iter().map(|q| fp.mul(q.eval(fp, &x), inv)).collect();
        image.push(*x.last().unwrap());
        let plus = self.plus.eval(fp, &image);
        Some(
            self.columns
                .iter()
                .map(|c| fp.sub(fp.mul(det, c.eval(fp, &image)), fp.mul(c.eval(fp, &x), plus)))
                .collect(),
        )
    }
}

fn leading_columns(vectors: &[Vec<u64>]) -> Vec<usize> {
    vectors.iter().map(|v| v.iter().position(|&x| x != 0).unwrap_or(v.len())).collect()
}

/// Candidate kernel vectors: the canonical nullspace of the sampled system
/// modulo several primes, lifted by Chinese remaindering and rational
/// reconstruction, accepted once an unused prime confirms them.
fn discover(ctx: &DarbouxContext, basis: &Basis, seed: u64) -> Result<Vec<Vec<Rational>>> {
    let k = basis.len();
    let points = sample_points(ctx, 2 * k + 16, seed);
    let mut moduli: Vec<u64> = Vec::new();
    let mut residues: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut shape: Option<Vec<usize>> = None;
    let mut candidate: Option<Vec<Vec<Rational>>> = None;
    for p in large_primes(MAX_PRIMES) {
        let Some(mc) = ModContext::new(ctx, basis, p) else { continue };
        let Some(rows) = points.iter().map(|pt| mc.row(pt)).collect::<Option<Vec<_>>>() else { continue };
        let null = mc.field.nullspace(rows, k);
        if null.is_empty() {
            // full rank modulo p implies full rank over the rationals
            return Ok(Vec::new());
        }
        let lead = leading_columns(&null);
        match &shape {
            Some(s) if null.len() > s.len() => continue,
            Some(s) if null.len() == s.len() && *s != lead => continue,
            Some(s) if null.len() == s.len() => {}
            _ => {
                shape = Some(lead);
                moduli.clear();
                residues.clear();
                candidate = None;
            }
        }
        if let Some(c) = &candidate {
            let agrees = c.iter().zip(&null).all(|(cv, nv)| {
                cv.iter().zip(nv).all(|(q, &r)| mc.field.from_rational(q) == Some(r))
            });
            if agrees {
                return Ok(candidate.unwrap());
            }
        }
        moduli.push(p);
        residues.push(null);
        candidate = reconstruct(&residues, &moduli);
    }
    Err(Error::VerificationFailed("modular reconstruction did not stabilise".into()))
}

fn reconstruct(residues: &[Vec<Vec<u64>>], moduli: &[u64]) -> Option<Vec<Vec<Rational>>> {
    let (nv, k) = (residues[0].len(), residues[0][0].len());
    let mut out = vec![vec![Rational::zero(); k]; nv];
    let mut buf = Vec::with_capacity(moduli.len());
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            buf.clear();
            buf.extend(residues.iter().map(|r| r[i][j]));
            if buf.iter().all(|&r| r == 0) {
                continue;
            }
            let (a, m): (BigInt, BigInt) = crt(&buf, moduli);
            *slot = rational_reconstruction(&a, &m)?;
        }
    }
    Some(out)
}

/// Checks each candidate at a fresh point modulo a prime outside the
/// discovery range, then exactly.
fn verify_candidates(
    ctx: &DarbouxContext,
    basis: &Basis,
    candidates: Vec<Vec<Rational>>,
    seed: u64,
) -> Option<Vec<SolutionVector>> {
    let field = PrimeField::new(*large_primes(MAX_PRIMES + 1).last().unwrap());
    let probe = sample_points(ctx, 1, seed ^ 0x5bd1_e995).pop().unwrap();
    let point: Vec<u64> = probe.iter().map(|q| field.from_rational(q)).collect::<Option<_>>()?;
    let mut out = Vec::with_capacity(candidates.len());
    for coords in candidates {
        let density = basis.combine(&coords);
        if let Some(r) = ctx.residual_mod(&density, &field, &point) {
            if r != 0 {
                return None;
            }
        }
        if !ctx.residual(&density).is_zero() {
            return None;
        }
        out.push(SolutionVector { coords, density, verified: true });
    }
    Some(out)
}

/// The exact nullspace of the fully expanded, uniformly cleared system.
pub fn symbolic_solve(ctx: &DarbouxContext, basis: &Basis) -> Result<Vec<SolutionVector>> {
    let n = ctx.field().dim() as u32;
    let phi = ctx.map.components();
    let det = ctx.map.denominator();
    let dmax = basis.elements.iter().map(|e| e.weighted.degree_prefix(n as usize)).max().unwrap_or(0);
    let e = dmax.saturating_sub(1).max(n);
    let b = rf_substitute(&ctx.plus, &phi, n)?;
    let cleared_b = &det.pow(e - n) * &b;
    let columns: Vec<Polynomial> = basis
        .elements
        .iter()
        .map(|el| {
            let d = el.weighted.degree_prefix(n as usize);
            let a = rf_substitute(&el.weighted, &phi, d)?;
            Ok(&(&det.pow(e + 1 - d) * &a) - &(&el.weighted * &cleared_b))
        })
        .collect::<Result<_>>()?;
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for c in &columns {
        for (m, _) in c.terms() {
            let next = index.len();
            index.entry(m).or_insert(next);
        }
    }
    let mut m = RationalMatrix::zeros(index.len(), columns.len());
    for (j, c) in columns.iter().enumerate() {
        for (mono, v) in c.terms() {
            m.set(index[&mono], j, v.clone());
        }
    }
    Ok(m.nullspace()
        .into_iter()
        .map(|coords| {
            let density = basis.combine(&coords);
            SolutionVector { coords, density, verified: true }
        })
        .collect())
}
