//! The mod-p image of the relative invariant and its quadratic-residue
//! description for prime p.
//!
//! Reducing `f(s, .)` modulo `p` gives a subset of `Z/pZ` written
//! `sbar(L(p, q))` here. For an odd prime `p` it is characterized by
//! Legendre symbols: `a` lies in the image exactly when `a = 0` or
//! `(-a/p) = (q/p)` (suite `theorem2` of the verifier), the image has
//! exactly `(p+1)/2` elements, `0` is hit once, and every other member
//! exactly twice. For `p = 2` the image is all of `Z/2Z` and the
//! multiplicity statements fail, so the sweeps treat `p = 2` separately.

use std::collections::BTreeMap;

use crate::dinvariants::{self, LensSpace};
use crate::modarith;
use crate::relative;
use crate::Error;

/// The image of `f(s, .) mod p` with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SbarSet {
    p: u64,
    q: u64,
    members: Vec<u64>,
    multiplicity: BTreeMap<u64, u64>,
}

impl SbarSet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Members in ascending order.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    /// How many `n` in `[0, p)` hit each member.
    pub fn multiplicity(&self) -> &BTreeMap<u64, u64> {
        &self.multiplicity
    }
}

/// Compute `sbar(L(p, q))` from an actual relative-invariant table (the
/// d-invariant route) and cross-check it against the direct congruence
/// image `{[-n^2 q]_p}`. Composite `p` is allowed; the set is defined for
/// any valid lens space.
pub fn sbar(p: u64, q: u64) -> Result<SbarSet, Error> {
    let space = LensSpace::new(p, q)?;
    let spin = dinvariants::spin_structures(&space).labels()[0];
    let table = relative::rel_f_table(&space, spin as i64)?;
    let mut multiplicity = BTreeMap::new();
    for n in 0..p {
        *multiplicity
            .entry(modarith::reduce(table.values()[n as usize], p))
            .or_insert(0u64) += 1;
    }
    let members: Vec<u64> = multiplicity.keys().copied().collect();
    // Independent route through the congruence f(s, n) = -n^2 q.
    let mut by_congruence: Vec<u64> = (0..p)
        .map(|n| modarith::reduce(-((n as i128) * (n as i128)) * q as i128, p))
        .collect();
    by_congruence.sort_unstable();
    by_congruence.dedup();
    assert_eq!(
        members, by_congruence,
        "table image and congruence image disagree for L({p},{q})"
    );
    Ok(SbarSet {
        p,
        q,
        members,
        multiplicity,
    })
}

/// The Legendre-symbol description of the image for an odd prime `p`:
/// `{ a : a = 0 or (-a/p) = (q/p) }`, ascending. Rejects composite `p`
/// and `p = 2`.
pub fn residue_characterization(p: u64, q: u64) -> Result<Vec<u64>, Error> {
    if p < 3 || !modarith::is_prime(p) {
        return Err(Error::NotOddPrime { p });
    }
    LensSpace::new(p, q)?;
    let target = modarith::legendre(q as i64, p)?;
    Ok((0..p)
        .filter(|&a| a == 0 || modarith::legendre(-(a as i64), p).expect("odd prime") == target)
        .collect())
}

/// One failed check in a [`verify_theorem2_and_corollary`] sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem2Failure {
    pub p: u64,
    pub q: u64,
    pub detail: String,
}

/// Outcome of the quadratic-residue sweep.
#[derive(Debug, Clone)]
pub struct Theorem2Report {
    pub p_max: u64,
    pub primes_checked: u64,
    pub sets_checked: u64,
    pub failures: Vec<Theorem2Failure>,
}

impl Theorem2Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every odd prime `p <= p_max` and every `q` in `[1, p)`: the image
/// equals the Legendre characterization, has `(p+1)/2` members, hits `0`
/// once and every nonzero member exactly twice.
#[allow(clippy::manual_div_ceil)] // (p + 1) / 2 is the stated cardinality
pub fn verify_theorem2_and_corollary(p_max: u64) -> Theorem2Report {
    let mut report = Theorem2Report {
        p_max,
        primes_checked: 0,
        sets_checked: 0,
        failures: Vec::new(),
    };
    for p in (3..=p_max).filter(|p| p % 2 == 1 && modarith::is_prime(*p)) {
        report.primes_checked += 1;
        for q in 1..p {
            report.sets_checked += 1;
            let set = sbar(p, q).expect("valid prime pair");
            let mut fail = |detail: String| {
                report.failures.push(Theorem2Failure { p, q, detail });
            };
            let expected = residue_characterization(p, q).expect("odd prime");
            if set.members() != expected {
                fail("image differs from Legendre characterization".to_string());
            }
            if set.members().len() as u64 != (p + 1) / 2 {
                fail(format!(
                    "image has {} members, expected {}",
                    set.members().len(),
                    (p + 1) / 2
                ));
            }
            if set.multiplicity().get(&0) != Some(&1) {
                fail("multiplicity of 0 is not 1".to_string());
            }
            if set
                .multiplicity()
                .iter()
                .any(|(&a, &count)| a != 0 && count != 2)
            {
                fail("a nonzero member is not hit exactly twice".to_string());
            }
        }
    }
    report
}
