//! Arbitrary precision rationals.
//!
//! `BigRational` already keeps itself reduced with a positive denominator, so
//! it is used directly. This module adds the string format used on the wire
//! ("p/q" or "p") and a few conversions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q", "p", or "-p/q" (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Draws `n/d` with `n` in `num_range` and `d` in `1..=max_den`.
pub fn random_rational<R: Rng>(rng: &mut R, num_bound: i64, max_den: i64) -> Rational {
    let n = rng.gen_range(-num_bound..=num_bound);
    let d = rng.gen_range(1..=max_den);
    rat(n, d)
}

pub fn lcm_of_denominators<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Rational reconstruction of `a mod m`: finds `r/s` with `|r|, s <= sqrt(m/2)`.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    // r1 = a * t1 mod m, so a = r1 / t1
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-7", "3/4", "-22/7"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("4/-8").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn reconstruction_recovers_small_fractions() {
        let m: BigInt = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        for q in [rat(-1, 4), rat(1, 96), rat(355, 113), int(0), int(-5)] {
            let e = q.denom().extended_gcd(&m);
            let a = (q.numer() * e.x).mod_floor(&m);
            assert_eq!(rational_reconstruction(&a, &m), Some(q));
        }
    }
}
