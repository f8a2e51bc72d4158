//! Dense exact linear algebra over Q.
//!
//! Elimination is fraction-free (Bareiss) on an integer scaling of the input,
//! so intermediate entries stay integral and bounded by minors of the input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;
use super::rational::{lcm_of_denominators, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![vec![Rational::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vec<Rational>>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    /// An empty-row matrix still needs a column count.
    pub fn from_rows_with_cols(data: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(RationalMatrix { rows: data.len(), cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| row.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let data = self.data.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self.data[i][j] == self.data[j][i]))
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self.data[i][j] == -&self.data[j][i]))
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .iter()
            .map(|row| {
                let l = lcm_of_denominators(row.iter());
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        bareiss_echelon(self.integer_rows(), self.cols).1.len()
    }

    /// Canonical basis of the right nullspace: the reduced row echelon form of
    /// the kernel, so each vector's first nonzero entry is 1.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (ech, pivots) = bareiss_echelon(self.integer_rows(), self.cols);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut s = Rational::zero();
                for j in pc + 1..self.cols {
                    if !ech[r][j].is_zero() && !v[j].is_zero() {
                        s += Rational::from_integer(ech[r][j].clone()) * &v[j];
                    }
                }
                v[pc] = -s / Rational::from_integer(ech[r][pc].clone());
            }
            basis.push(v);
        }
        rref_rows(basis, self.cols)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        let mut scale = Rational::one();
        let mut rows = Vec::with_capacity(n);
        for row in &self.data {
            let l = lcm_of_denominators(row.iter());
            scale /= Rational::from_integer(l.clone());
            rows.push(row.iter().map(|q| q.numer() * (&l / q.denom())).collect::<Vec<_>>());
        }
        let mut sign = Rational::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !rows[i][k].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != k {
                rows.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &rows[i][j] * &rows[k][k] - &rows[i][k] * &rows[k][j];
                    rows[i][j] = v / &prev;
                }
                rows[i][k] = BigInt::zero();
            }
            prev = rows[k][k].clone();
        }
        Ok(sign * scale * Rational::from_integer(prev))
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug: Vec<Vec<Rational>> = self
            .data
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                r
            })
            .collect();
        let pivots = rref_in_place(&mut aug, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        Ok(RationalMatrix { rows: n, cols: n, data: aug.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    pub fn adjugate(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Dimension("adjugate of a non-square matrix".into()));
        }
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor: Vec<Vec<Rational>> = (0..n)
                    .filter(|&r| r != j)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| self.data[r][c].clone()).collect())
                    .collect();
                let d = RationalMatrix::from_rows_with_cols(minor, n - 1)?.determinant()?;
                adj.data[i][j] = if (i + j) % 2 == 0 { d } else { -d };
            }
        }
        Ok(adj)
    }
}

/// Fraction-free forward elimination. Returns the echelon rows (zero rows
/// removed) and their pivot columns.
fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).min_by_key(|&i| rows[i][c].bits()) else {
            continue;
        };
        rows.swap(r, sel);
        let (top, bottom) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                // still needs the Bareiss scaling to keep the invariant
                for j in c + 1..cols {
                    if !row[j].is_zero() {
                        row[j] = &row[j] * &pivot_row[c] / &prev;
                    }
                }
                continue;
            }
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = &row[j] * &pivot_row[c] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Reduced row echelon form over Q, in place; returns pivot columns. Only the
/// first `pivot_cols` columns are eligible as pivots.
pub fn rref_in_place(rows: &mut Vec<Vec<Rational>>, pivot_cols: usize) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = Rational::one() / &rows[r][c];
        for v in rows[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &factor * &pivot_row[j];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    pivots
}

/// Canonical basis (reduced row echelon form) of the span of `rows`.
pub fn rref_rows(mut rows: Vec<Vec<Rational>>, cols: usize) -> Vec<Vec<Rational>> {
    debug_assert!(rows.iter().all(|r| r.len() == cols));
    rref_in_place(&mut rows, cols);
    rows
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let cols = v.len();
    let r0 = RationalMatrix::from_rows_with_cols(basis.to_vec(), cols).unwrap().rank();
    let mut with = basis.to_vec();
    with.push(v.to_vec());
    RationalMatrix::from_rows_with_cols(with, cols).unwrap().rank() == r0
}

/// Canonical basis of the intersection of two subspaces given by spanning sets.
pub fn intersect_subspaces(a: &[Vec<Rational>], b: &[Vec<Rational>], cols: usize) -> Vec<Vec<Rational>> {
    let a = rref_rows(a.to_vec(), cols);
    let b = rref_rows(b.to_vec(), cols);
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum s_i a_i = sum t_j b_j: the nullspace of [A^T | -B^T].
    let na = a.len();
    let mut m = RationalMatrix::zeros(cols, na + b.len());
    for (i, v) in a.iter().enumerate() {
        for (k, x) in v.iter().enumerate() {
            m.data[k][i] = x.clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for (k, x) in v.iter().enumerate() {
            m.data[k][na + j] = -x;
        }
    }
    let vectors: Vec<Vec<Rational>> = m
        .nullspace()
        .into_iter()
        .map(|st| {
            let mut v = vec![Rational::zero(); cols];
            for (i, s) in st[..na].iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                for k in 0..cols {
                    v[k] += s * &a[i][k];
                }
            }
            v
        })
        .collect();
    rref_rows(vectors, cols)
}

/// Solves for `x` with `sum x_i basis_i = v`, if `v` is in the span. Free
/// coordinates are set to zero.
pub fn span_coordinates(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let mut aug: Vec<Vec<Rational>> = (0..v.len())
        .map(|r| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(v[r].clone());
            row
        })
        .collect();
    let full = aug.clone();
    let pivots = rref_in_place(&mut aug, k);
    let mut x = vec![Rational::zero(); k];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[k].clone();
    }
    // the reduced system drops rows, so check the solution against the original
    full.iter()
        .all(|row| row[..k].iter().zip(&x).fold(Rational::zero(), |acc, (a, b)| acc + a * b) == row[k])
        .then_some(x)
}

/// Normalizes a vector so its first nonzero entry is 1.
pub fn normalize_leading(v: &[Rational]) -> Vec<Rational> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = Rational::one() / lead;
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

/// Sign of the leading entry, used when reporting.
pub fn leading_sign(v: &[Rational]) -> i32 {
    v.iter().find(|x| !x.is_zero()).map_or(0, |x| if x.is_negative() { -1 } else { 1 })
}

/// Determinant of a small square matrix of polynomials, by permutation expansion.
pub fn poly_determinant(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = m.len();
    match n {
        0 => Polynomial::one(nvars),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            // cofactor expansion along the first row
            let mut acc = Polynomial::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor = poly_minor(m, 0, j);
                let term = &m[0][j] * &poly_determinant(&minor, nvars);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn poly_minor(m: &[Vec<Polynomial>], row: usize, col: usize) -> Vec<Vec<Polynomial>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, p)| p.clone()).collect())
        .collect()
}

/// Adjugate (transposed cofactor matrix) of a small polynomial matrix.
pub fn poly_adjugate(m: &[Vec<Polynomial>], nvars: usize) -> Vec<Vec<Polynomial>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![Polynomial::one(nvars)]];
    }
    let mut adj = vec![vec![Polynomial::zero(nvars); n]; n];
    for i in 0..n {
        for j in 0..n {
            let d = poly_determinant(&poly_minor(m, j, i), nvars);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(RationalMatrix::identity(3).nullspace().is_empty());
    }

    #[test]
    fn zero_matrix_has_full_nullspace() {
        let ns = RationalMatrix::zeros(2, 3).nullspace();
        assert_eq!(ns.len(), 3);
        assert_eq!(ns[0], vec![int(1), int(0), int(0)]);
    }

    #[test]
    fn rank_one_two_by_two() {
        let ns = m(&[&[1, 2], &[2, 4]]).nullspace();
        assert_eq!(ns, vec![vec![int(1), rat(-1, 2)]]);
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.determinant().unwrap(), int(18));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RationalMatrix::identity(3));
        let adj = a.adjugate().unwrap();
        assert_eq!(adj, inv.scale(&int(18)));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse().unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn intersection_of_planes_is_a_line() {
        let a = vec![vec![int(1), int(0), int(0)], vec![int(0), int(1), int(0)]];
        let b = vec![vec![int(0), int(1), int(0)], vec![int(0), int(0), int(1)]];
        assert_eq!(intersect_subspaces(&a, &b, 3), vec![vec![int(0), int(1), int(0)]]);
    }

    #[test]
    fn coordinates_in_span() {
        let basis = vec![vec![int(1), int(1)], vec![int(0), int(1)]];
        assert_eq!(span_coordinates(&basis, &[int(2), int(5)]), Some(vec![int(2), int(3)]));
        let line = vec![vec![int(1), int(1)]];
        assert_eq!(span_coordinates(&line, &[int(1), int(2)]), None);
        assert!(!in_span(&line, &[int(1), int(2)]));
    }

    fn arb_matrix() -> impl Strategy<Value = RationalMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec((-3i64..4, 1i64..3), c), r).prop_map(|rows| {
                RationalMatrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|(n, d)| rat(n, d)).collect()).collect())
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn nullspace_is_exact_and_complete(a in arb_matrix()) {
            let ns = a.nullspace();
            for v in &ns {
                prop_assert!(a.mul_vec(v).iter().all(|x| x.is_zero()));
                let lead = v.iter().find(|x| !x.is_zero()).unwrap();
                prop_assert!(lead.is_one());
            }
            prop_assert_eq!(a.rank() + ns.len(), a.cols());
        }
    }
}
