//! Densities whose aromatic coefficients work for every member of a family.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::analysis::linear_relations;
use super::basis::{Parity, QUADRATIC_MAX_INDEGREE};
use super::solve::solve_darboux;
use super::verify::DarbouxContext;
use crate::algebra::matrix::{intersect_subspaces, rref_rows};
use crate::algebra::{Monomial, Polynomial, Rational};
use crate::coalgebra::CoefficientFunctional;
use crate::error::{Error, Result};
use crate::field::{AromaEvaluator, QuadraticVectorField};
use crate::graphs::{enumerate_multisets, AromaMultiset};

#[derive(Clone, Debug)]
pub struct FamilySolution {
    pub max_order: usize,
    pub parity: Parity,
    /// Common coordinates: filtered multisets of the chosen parity.
    pub multisets: Vec<AromaMultiset>,
    /// Coefficient vectors over `multisets`, reduced modulo the relations
    /// shared by all instances.
    pub vectors: Vec<Vec<Rational>>,
    /// `densities[i][j]`: vector `j` evaluated on instance `i`.
    pub densities: Vec<Vec<Polynomial>>,
    pub verified: Vec<Vec<bool>>,
}

impl FamilySolution {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn gamma(&self, j: usize) -> CoefficientFunctional {
        CoefficientFunctional::from_values(
            self.max_order,
            self.multisets.iter().cloned().zip(self.vectors[j].iter().cloned()),
        )
        .unwrap()
    }

    pub fn all_verified(&self) -> bool {
        self.verified.iter().flatten().all(|&v| v)
    }
}

fn weighted(m: &AromaMultiset, fm: &Polynomial, h_var: usize) -> Polynomial {
    let c = Rational::new(1.into(), m.symmetry().into());
    fm.scale(&c).mul_monomial(Monomial::var(h_var, m.order() as u32))
}

/// Reduces `v` to zero on the last nonzero coordinate of each relation, with
/// the relations echelonized from the right.
fn reduce_modulo(v: &mut [Rational], relations_from_right: &[(usize, Vec<Rational>)]) {
    for (pivot, row) in relations_from_right {
        if v[*pivot].is_zero() {
            continue;
        }
        let c = v[*pivot].clone();
        for (x, r) in v.iter_mut().zip(row) {
            if !r.is_zero() {
                *x -= &c * r;
            }
        }
    }
}

fn echelon_from_right(rows: &[Vec<Rational>], cols: usize) -> Vec<(usize, Vec<Rational>)> {
    let reversed: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().rev().cloned().collect()).collect();
    rref_rows(reversed, cols)
        .into_iter()
        .map(|r| {
            let row: Vec<Rational> = r.into_iter().rev().collect();
            let pivot = row.iter().rposition(|x| !x.is_zero()).unwrap();
            (pivot, row)
        })
        .collect()
}

/// The coefficient vectors over the filtered multisets of one parity that
/// give a density of one field, together with those giving zero.
#[derive(Clone, Debug)]
pub struct GammaSpace {
    pub multisets: Vec<AromaMultiset>,
    /// Canonical basis of all density-giving vectors, kernel included.
    pub preimage: Vec<Vec<Rational>>,
    /// Canonical basis of the vectors whose weighted function vanishes.
    pub kernel: Vec<Vec<Rational>>,
    weighted: Vec<Polynomial>,
}

impl GammaSpace {
    /// Number of independent densities, the kernel not counted.
    pub fn dimension(&self) -> usize {
        self.preimage.len() - self.kernel.len()
    }

    /// Equality as subspaces; the coordinates are canonical.
    pub fn same_as(&self, other: &GammaSpace) -> bool {
        self.multisets == other.multisets && self.preimage == other.preimage
    }
}

pub fn filtered_multisets(max_order: usize, parity: Parity) -> Vec<AromaMultiset> {
    enumerate_multisets(max_order, Some(QUADRATIC_MAX_INDEGREE))
        .into_iter()
        .filter(|m| parity.admits(m.order()))
        .collect()
}

pub fn gamma_space(f: &QuadraticVectorField, max_order: usize, parity: Parity, seed: u64) -> Result<GammaSpace> {
    let multisets = filtered_multisets(max_order, parity);
    let cols = multisets.len();
    let index: BTreeMap<&AromaMultiset, usize> = multisets.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut by_order: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, m) in multisets.iter().enumerate() {
        by_order.entry(m.order()).or_default().push(i);
    }
    let eval = AromaEvaluator::new(f);
    let fs: Vec<Polynomial> = multisets.iter().map(|m| weighted(m, &eval.multiset(m), f.h_var())).collect();
    let mut kernel = Vec::new();
    for idx in by_order.values() {
        let polys: Vec<Polynomial> = idx.iter().map(|&i| fs[i].clone()).collect();
        for r in linear_relations(&polys) {
            let mut v = vec![Rational::zero(); cols];
            for (&i, c) in idx.iter().zip(r) {
                v[i] = c;
            }
            kernel.push(v);
        }
    }
    let sol = solve_darboux(f, max_order, parity, &[], seed)?;
    let mut span = kernel.clone();
    for v in &sol.vectors {
        let mut full = vec![Rational::zero(); cols];
        for (e, c) in sol.basis.elements.iter().zip(&v.coords) {
            full[index[&e.multiset]] = c.clone();
        }
        span.push(full);
    }
    Ok(GammaSpace { preimage: rref_rows(span, cols), kernel: rref_rows(kernel, cols), multisets, weighted: fs })
}

/// Intersects, over all instances, the coefficient vectors that give a
/// density on that instance, then removes the directions that vanish on every
/// instance. Each resulting density is verified on each instance.
pub fn parameter_independent_solve(
    instances: &[QuadraticVectorField],
    max_order: usize,
    parity: Parity,
    seed: u64,
) -> Result<FamilySolution> {
    if instances.len() < 2 {
        return Err(Error::TooFewInstances { min: 2, got: instances.len() });
    }
    let spaces: Vec<GammaSpace> =
        instances.iter().map(|f| gamma_space(f, max_order, parity, seed)).collect::<Result<_>>()?;
    let multisets = spaces[0].multisets.clone();
    let cols = multisets.len();
    let mut preimage = spaces[0].preimage.clone();
    let mut common_kernel = spaces[0].kernel.clone();
    for s in &spaces[1..] {
        preimage = intersect_subspaces(&preimage, &s.preimage, cols);
        common_kernel = intersect_subspaces(&common_kernel, &s.kernel, cols);
    }

    let kernel = echelon_from_right(&common_kernel, cols);
    let reduced: Vec<Vec<Rational>> = preimage
        .into_iter()
        .map(|mut v| {
            reduce_modulo(&mut v, &kernel);
            v
        })
        .collect();
    let vectors: Vec<Vec<Rational>> =
        rref_rows(reduced, cols).into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    if vectors.is_empty() {
        return Err(Error::EmptyIntersection);
    }

    let mut densities = Vec::new();
    let mut verified = Vec::new();
    for (f, space) in instances.iter().zip(&spaces) {
        let ctx = DarbouxContext::new(f);
        let ds: Vec<Polynomial> = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&space.weighted)
                    .filter(|(c, _)| !c.is_zero())
                    .fold(Polynomial::zero(f.nvars()), |acc, (c, p)| &acc + &p.scale(c))
            })
            .collect();
        verified.push(ds.iter().map(|d| ctx.residual(d).is_zero()).collect());
        densities.push(ds);
    }
    Ok(FamilySolution { max_order, parity, multisets, vectors, densities, verified })
}
