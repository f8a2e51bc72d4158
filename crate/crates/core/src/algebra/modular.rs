//! Arithmetic in Z/pZ for word-sized primes, used to find candidate nullspaces
//! quickly before they are reconstructed over Q and checked exactly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(is_prime(p));
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a as u128 + b as u128;
        (s % self.p as u128) as u64
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.p)).to_u64().expect("reduced value fits")
    }

    pub fn from_i64(&self, n: i64) -> u64 {
        (n as i128).rem_euclid(self.p as i128) as u64
    }

    /// `None` when the denominator is divisible by p.
    pub fn from_rational(&self, q: &Rational) -> Option<u64> {
        let d = self.from_bigint(q.denom());
        let n = self.from_bigint(q.numer());
        self.inv(d).map(|di| self.mul(n, di))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<u64>>, cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows.len() {
                break;
            }
            let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, sel);
            let inv = self.inv(rows[r][c]).unwrap();
            for v in rows[r].iter_mut().skip(c) {
                *v = self.mul(*v, inv);
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c] == 0 {
                    continue;
                }
                let factor = row[c];
                for j in c..cols {
                    if pivot_row[j] != 0 {
                        row[j] = self.sub(row[j], self.mul(factor, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(pivots.len());
        pivots
    }

    /// Canonical nullspace basis: the reduced row echelon form of the kernel.
    pub fn nullspace(&self, mut rows: Vec<Vec<u64>>, cols: usize) -> Vec<Vec<u64>> {
        let pivots = self.rref(&mut rows, cols);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; cols];
                v[f] = 1;
                for (row, &pc) in rows.iter().zip(&pivots) {
                    v[pc] = self.neg(row[f]);
                }
                v
            })
            .collect();
        self.rref(&mut basis, cols);
        basis
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below 2^62, in decreasing order.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Chinese remaindering of `residues[i] mod moduli[i]` into `[0, prod)`.
pub fn crt(residues: &[u64], moduli: &[u64]) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut m = BigInt::from(1u32);
    for (&r, &p) in residues.iter().zip(moduli) {
        let pb = BigInt::from(p);
        // acc + m * t = r (mod p)
        let field = PrimeField::new(p);
        let acc_p = field.from_bigint(&acc);
        let m_p = field.from_bigint(&m);
        let t = field.mul(field.sub(r, acc_p), field.inv(m_p).expect("coprime moduli"));
        acc += &m * BigInt::from(t);
        m *= pb;
    }
    (acc, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn primes_are_prime() {
        let ps = large_primes(3);
        assert_eq!(ps.len(), 3);
        assert!(ps.iter().all(|&p| is_prime(p) && p < (1 << 62)));
        assert!(is_prime(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(!is_prime(2_305_843_009_213_693_953));
    }

    #[test]
    fn nullspace_mod_p_matches_hand_elimination() {
        let f = PrimeField::new(large_primes(1)[0]);
        // [[1,2],[2,4]] -> (1, -1/2)
        let ns = f.nullspace(vec![vec![1, 2], vec![2, 4]], 2);
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0][0], 1);
        assert_eq!(Some(ns[0][1]), f.from_rational(&rat(-1, 2)));
    }

    #[test]
    fn crt_combines() {
        let (v, m) = crt(&[2, 3], &[5, 7]);
        assert_eq!(v, BigInt::from(17));
        assert_eq!(m, BigInt::from(35));
    }
}
