//! Exact modular and rational arithmetic primitives.
//!
//! Every operation is pure integer or rational arithmetic; there is no
//! floating point anywhere. `Rational` is an arbitrary precision fraction
//! kept fully reduced with a positive denominator, so equality is value
//! equality.

use std::fmt;

use num::{BigInt, BigRational};

use crate::Error;

/// Exact rational number: arbitrary precision, always fully reduced,
/// denominator always positive.
pub type Rational = BigRational;

/// The fraction `num/den`, reduced. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The canonical representative of a residue class: an integer in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// Reduce any integer to its canonical representative in `[0, p)`.
pub(crate) fn reduce<T: Into<i128>>(a: T, p: u64) -> u64 {
    debug_assert!(p > 0);
    a.into().rem_euclid(p as i128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Extended Euclidean inverse; `None` when `gcd(a, p) != 1`.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if p == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quotient = old_r / r;
        (old_r, r) = (r, old_r - quotient * r);
        (old_s, s) = (s, old_s - quotient * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(reduce(old_s, p))
}

/// Deterministic trial-division primality test. Fine for the sweep ranges
/// used here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn ensure_odd_prime(p: u64) -> Result<(), Error> {
    if p < 3 || p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime { p });
    }
    Ok(())
}

/// The unique representative of `a` in `[0, p)`. Works for negative `a`.
pub fn mod_rep(a: i64, p: u64) -> Result<Residue, Error> {
    if p == 0 {
        return Err(Error::ZeroModulus);
    }
    Ok(Residue {
        value: reduce(a, p),
        modulus: p,
    })
}

/// The inverse of `a` modulo `p`, by the extended Euclidean algorithm.
pub fn mod_inv(a: i64, p: u64) -> Result<Residue, Error> {
    if p == 0 {
        return Err(Error::ZeroModulus);
    }
    match inv_mod(reduce(a, p), p) {
        Some(value) => Ok(Residue { value, modulus: p }),
        None => Err(Error::NotCoprime {
            value: a,
            modulus: p,
        }),
    }
}

/// Legendre symbol of `m` and the odd prime `p`: `1` for a nonzero
/// quadratic residue, `-1` for a non-residue, `0` when `p | m`.
///
/// Computed by Euler's criterion; [`legendre_by_scan`] is the independent
/// reference implementation the tests cross-check against.
pub fn legendre(m: i64, p: u64) -> Result<i32, Error> {
    ensure_odd_prime(p)?;
    let r = reduce(m, p);
    if r == 0 {
        return Ok(0);
    }
    let e = pow_mod(r, (p - 1) / 2, p);
    debug_assert!(e == 1 || e == p - 1);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Legendre symbol by exhaustive scan of all squares modulo `p`.
pub fn legendre_by_scan(m: i64, p: u64) -> Result<i32, Error> {
    ensure_odd_prime(p)?;
    let r = reduce(m, p);
    if r == 0 {
        return Ok(0);
    }
    for k in 1..p {
        if mul_mod(k, k, p) == r {
            return Ok(1);
        }
    }
    Ok(-1)
}

/// Which case of the bracket addition rule applies to `[X + Y]_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketCase {
    /// `[X]_p < p - [Y]_p`, so `[X+Y]_p = [X]_p + [Y]_p`.
    NoWrap,
    /// `[X]_p >= p - [Y]_p`, so `[X+Y]_p = [X]_p + [Y]_p - p`.
    Wrap,
}

/// Case analysis for reducing a sum of two canonical representatives.
pub fn bracket_sum_case(x: i64, y: i64, p: u64) -> Result<BracketCase, Error> {
    if p == 0 {
        return Err(Error::ZeroModulus);
    }
    if reduce(x, p) < p - reduce(y, p) {
        Ok(BracketCase::NoWrap)
    } else {
        Ok(BracketCase::Wrap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{One, Zero};
    use proptest::prelude::*;

    #[test]
    fn mod_rep_examples() {
        assert_eq!(mod_rep(7, 5).unwrap().value(), 2);
        assert_eq!(mod_rep(0, 5).unwrap().value(), 0);
        assert_eq!(mod_rep(-3, 5).unwrap().value(), 2);
        assert_eq!(mod_rep(3, 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn mod_inv_examples() {
        for p in [2u64, 3, 7, 10, 97] {
            assert_eq!(mod_inv(1, p).unwrap().value(), 1 % p);
        }
        assert_eq!(mod_inv(3, 7).unwrap().value(), 5);
        assert_eq!(
            mod_inv(2, 4),
            Err(Error::NotCoprime {
                value: 2,
                modulus: 4
            })
        );
    }

    #[test]
    fn mod_inv_matches_exhaustive_scan() {
        for p in 1..=60u64 {
            for a in 0..p.max(1) {
                let brute = (0..p).find(|x| mul_mod(a, *x, p) == 1 % p);
                match mod_inv(a as i64, p) {
                    Ok(r) => assert_eq!(Some(r.value()), brute, "a={a} p={p}"),
                    Err(_) => assert_eq!(brute, None, "a={a} p={p}"),
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(2, 7).unwrap(), 1); // 3^2 = 9 = 2 mod 7
        assert_eq!(legendre(3, 7).unwrap(), -1); // squares mod 7 are {0,1,2,4}
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(5, 2), Err(Error::NotOddPrime { p: 2 }));
        assert_eq!(legendre(5, 9), Err(Error::NotOddPrime { p: 9 }));
    }

    #[test]
    fn legendre_euler_agrees_with_scan() {
        for p in (3..=500u64).filter(|p| is_prime(*p)) {
            for m in 0..p {
                assert_eq!(
                    legendre(m as i64, p).unwrap(),
                    legendre_by_scan(m as i64, p).unwrap(),
                    "m={m} p={p}"
                );
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative_and_balanced() {
        for p in (3..=500u64).filter(|p| is_prime(*p)) {
            let symbols: Vec<i32> = (0..p).map(|m| legendre(m as i64, p).unwrap()).collect();
            let residues = (1..p).filter(|m| symbols[*m as usize] == 1).count() as u64;
            assert_eq!(residues, (p - 1) / 2, "p={p}");
            for m1 in 0..p {
                for m2 in 0..p {
                    let prod = mul_mod(m1, m2, p);
                    assert_eq!(
                        symbols[prod as usize],
                        symbols[m1 as usize] * symbols[m2 as usize],
                        "p={p} m1={m1} m2={m2}"
                    );
                }
            }
        }
    }

    #[test]
    fn bracket_case_examples() {
        assert_eq!(bracket_sum_case(1, 2, 5).unwrap(), BracketCase::NoWrap);
        assert_eq!(bracket_sum_case(3, 4, 5).unwrap(), BracketCase::Wrap);
        assert_eq!(bracket_sum_case(0, 0, 5).unwrap(), BracketCase::NoWrap);
    }

    #[test]
    fn bracket_case_reproduces_modular_addition() {
        for p in 1..=200u64 {
            for x in 0..p {
                for y in 0..p {
                    let sum = match bracket_sum_case(x as i64, y as i64, p).unwrap() {
                        BracketCase::NoWrap => x + y,
                        BracketCase::Wrap => x + y - p,
                    };
                    assert_eq!(sum, reduce(x as i64 + y as i64, p), "x={x} y={y} p={p}");
                }
            }
        }
    }

    #[test]
    fn residue_negation_pairs() {
        for p in 1..=1000u64 {
            for a in (-2500..2500i64).step_by(7) {
                let fwd = mod_rep(a, p).unwrap().value();
                let bwd = mod_rep(-a, p).unwrap().value();
                assert!(fwd + bwd == 0 || fwd + bwd == p);
            }
        }
    }

    #[test]
    fn inverses_invert() {
        for p in 1..=1000u64 {
            for a in 1..p.max(2) {
                if num::integer::gcd(a, p) == 1 {
                    let inv = mod_inv(a as i64, p).unwrap().value();
                    assert_eq!(mod_rep((a * inv) as i64, p).unwrap().value(), 1 % p);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn bracket_case_on_arbitrary_integers(x in -2000i64..2000, y in -2000i64..2000, p in 1u64..200) {
            let sum = match bracket_sum_case(x, y, p).unwrap() {
                BracketCase::NoWrap => reduce(x, p) + reduce(y, p),
                BracketCase::Wrap => reduce(x, p) + reduce(y, p) - p,
            };
            prop_assert_eq!(sum, reduce(x + y, p));
        }

        #[test]
        fn rational_addition_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rat(a, b);
            let y = rat(c, d);
            prop_assert_eq!((&x + &y) - &y, x);
        }

        #[test]
        fn rationals_stay_reduced(a in -1000i64..1000, b in 1i64..1000) {
            let x = rat(a, b);
            prop_assert!(x.denom() > &BigInt::zero());
            prop_assert_eq!(num::integer::gcd(x.numer().clone(), x.denom().clone()), BigInt::one());
        }
    }
}
