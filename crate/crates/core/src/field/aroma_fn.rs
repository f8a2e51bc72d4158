//! Elementary differentials of trees and aromatic functions of aromas.
//!
//! A vertex with `m` incoming edges contributes the `m`-th derivative of the
//! field component it is indexed by. For a quadratic field only `m <= 2`
//! survives, so each tree is a vector-valued contraction of `f`, `f'` and the
//! constant `f''`, and an aroma is the trace of a product of matrices, one per
//! cycle vertex.

use std::cell::RefCell;

use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::quadratic::QuadraticVectorField;
use crate::algebra::{Polynomial, Rational};
use crate::graphs::{Aroma, AromaMultiset, Forest, RootedTree};

pub struct AromaEvaluator<'f> {
    field: &'f QuadraticVectorField,
    jac: Vec<Vec<Polynomial>>,
    hess: Vec<Vec<Vec<Rational>>>,
    trees: RefCell<FxHashMap<String, Vec<Polynomial>>>,
    aromas: RefCell<FxHashMap<String, Polynomial>>,
}

impl<'f> AromaEvaluator<'f> {
    pub fn new(field: &'f QuadraticVectorField) -> Self {
        let n = field.dim();
        let hess = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| field.second_derivative(i, j, k)).collect()).collect())
            .collect();
        AromaEvaluator {
            field,
            jac: field.jacobian(),
            hess,
            trees: RefCell::default(),
            aromas: RefCell::default(),
        }
    }

    pub fn field(&self) -> &QuadraticVectorField {
        self.field
    }

    fn zero(&self) -> Polynomial {
        Polynomial::zero(self.field.nvars())
    }

    /// `sum_{j,k} f''_i[j][k] u_j v_k`.
    fn hessian_apply(&self, u: &[Polynomial], v: &[Polynomial]) -> Vec<Polynomial> {
        let n = self.field.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.zero();
                for j in 0..n {
                    if u[j].is_zero() {
                        continue;
                    }
                    // sum_k hess[i][j][k] v_k is linear in v, so form it first
                    let mut w = self.zero();
                    for k in 0..n {
                        if !self.hess[i][j][k].is_zero() {
                            w += &v[k].scale(&self.hess[i][j][k]);
                        }
                    }
                    if !w.is_zero() {
                        acc += &(&u[j] * &w);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn tree(&self, t: &RootedTree) -> Vec<Polynomial> {
        if let Some(v) = self.trees.borrow().get(t.encode()) {
            return v.clone();
        }
        let n = self.field.dim();
        let out = match t.children() {
            [] => self.field.components().to_vec(),
            [c] => {
                let fc = self.tree(c);
                (0..n)
                    .map(|i| {
                        let mut acc = self.zero();
                        for j in 0..n {
                            if !self.jac[i][j].is_zero() && !fc[j].is_zero() {
                                acc += &(&self.jac[i][j] * &fc[j]);
                            }
                        }
                        acc
                    })
                    .collect()
            }
            [a, b] => {
                let (fa, fb) = (self.tree(a), self.tree(b));
                self.hessian_apply(&fa, &fb)
            }
            _ => vec![self.zero(); n],
        };
        self.trees.borrow_mut().insert(t.encode().to_string(), out.clone());
        out
    }

    /// The matrix of a cycle vertex carrying `forest`: entry `[i][j]` is the
    /// factor when the vertex has index `i` and its cycle predecessor index `j`.
    fn cycle_vertex_matrix(&self, forest: &Forest) -> Option<Vec<Vec<Polynomial>>> {
        let n = self.field.dim();
        match forest.trees() {
            [] => Some(self.jac.clone()),
            [t] => {
                let ft = self.tree(t);
                Some(
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    let mut acc = self.zero();
                                    for k in 0..n {
                                        if !self.hess[i][j][k].is_zero() {
                                            acc += &ft[k].scale(&self.hess[i][j][k]);
                                        }
                                    }
                                    acc
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }

    pub fn aroma(&self, a: &Aroma) -> Polynomial {
        if let Some(v) = self.aromas.borrow().get(a.encode()) {
            return v.clone();
        }
        let n = self.field.dim();
        let mut product: Option<Vec<Vec<Polynomial>>> = None;
        let mut vanishes = false;
        for forest in a.decorations() {
            let Some(m) = self.cycle_vertex_matrix(forest) else {
                vanishes = true;
                break;
            };
            product = Some(match product {
                None => m,
                Some(p) => mat_mul(&m, &p, n, self.field.nvars()),
            });
        }
        let out = if vanishes {
            self.zero()
        } else {
            let p = product.unwrap();
            (0..n).fold(self.zero(), |acc, i| &acc + &p[i][i])
        };
        self.aromas.borrow_mut().insert(a.encode().to_string(), out.clone());
        out
    }

    pub fn multiset(&self, m: &AromaMultiset) -> Polynomial {
        m.aromas()
            .iter()
            .fold(Polynomial::one(self.field.nvars()), |acc, a| &acc * &self.aroma(a))
    }
}

fn mat_mul(a: &[Vec<Polynomial>], b: &[Vec<Polynomial>], n: usize, nvars: usize) -> Vec<Vec<Polynomial>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Polynomial::zero(nvars);
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc += &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn elementary_differential(f: &QuadraticVectorField, t: &RootedTree) -> Vec<Polynomial> {
    AromaEvaluator::new(f).tree(t)
}

pub fn aroma_function(f: &QuadraticVectorField, m: &AromaMultiset) -> Polynomial {
    AromaEvaluator::new(f).multiset(m)
}
