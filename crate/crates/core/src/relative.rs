//! The relative invariant `f(s, n)` and its identities.
//!
//! Fixing a spin structure `s` of `L(p, q)` renormalizes the d-invariants
//! into an integer-valued function on `Z/pZ`:
//!
//! ```text
//! f(s, n) = p d(s + nq) - p d(s)
//! ```
//!
//! It satisfies `f(s, 0) = 0`, the step rule
//! `f(s, n+1) = f(s, n) + p - 1 - 2[s + nq]_p`, and the congruence
//! `f(s, n) = -n^2 q (mod p)`. Construction asserts all three, so a
//! [`RelFnTable`] in hand is already checked.

use num::ToPrimitive;

use crate::dinvariants::{self, DInvTable, LensSpace};
use crate::modarith::{self, BracketCase};
use crate::Error;

/// The integer table `n -> f(s, n)` for one spin structure `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelFnTable {
    space: LensSpace,
    spin: u64,
    values: Vec<i64>,
}

impl RelFnTable {
    pub fn space(&self) -> &LensSpace {
        &self.space
    }

    pub fn spin(&self) -> u64 {
        self.spin
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `f(s, n)` for any integer `n` (reduced mod p).
    pub fn value(&self, n: i64) -> i64 {
        self.values[modarith::reduce(n, self.space.p()) as usize]
    }
}

/// Build `f(s, .)` from a lens space and a spin structure label.
pub fn rel_f_table(space: &LensSpace, s: i64) -> Result<RelFnTable, Error> {
    rel_f_table_from(&dinvariants::d_table(space), s)
}

/// Same as [`rel_f_table`], reusing an already computed d-table.
pub(crate) fn rel_f_table_from(table: &DInvTable, s: i64) -> Result<RelFnTable, Error> {
    let space = *table.space();
    let (p, q) = (space.p(), space.q());
    if !dinvariants::spin_structures(&space).contains(s) {
        return Err(Error::NotSpinStructure {
            label: modarith::reduce(s, p),
            p,
            q,
        });
    }
    let s = modarith::reduce(s, p) as i64;
    let base = table.value(s);
    let p_rat = modarith::rat_int(p as i64);
    let values: Vec<i64> = (0..p as i64)
        .map(|n| {
            let scaled = (table.value(s + n * q as i64) - base) * &p_rat;
            // p (d(s+nq) - d(s)) clears denominators; anything else is a bug.
            assert!(scaled.is_integer(), "non-integral f for {space} s={s} n={n}");
            scaled
                .to_integer()
                .to_i64()
                .expect("f value out of machine range")
        })
        .collect();
    let out = RelFnTable {
        space,
        spin: s as u64,
        values,
    };
    debug_assert!(out.values[0] == 0);
    debug_assert!(check_rel_recursion(&out).ok);
    debug_assert!(congruence_failure(&out).is_none());
    Ok(out)
}

/// Locate the first `n` (if any) with `f(s, n) != -n^2 q (mod p)`.
pub(crate) fn congruence_failure(table: &RelFnTable) -> Option<u64> {
    let p = table.space.p();
    let q = table.space.q();
    (0..p).find(|&n| {
        let expected = modarith::reduce(-((n as i128) * (n as i128)) * q as i128, p);
        modarith::reduce(table.values[n as usize], p) != expected
    })
}

/// Pass/fail outcome of re-checking the step rule on a table, with the
/// first failing index when it fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelRecursionReport {
    pub ok: bool,
    pub first_failure: Option<u64>,
}

/// Verify `f(s, n+1) = f(s, n) + p - 1 - 2[s + nq]_p` for `n = 0..p-1`,
/// with wraparound back to `f(s, 0) = 0` at `n = p-1`.
pub fn check_rel_recursion(table: &RelFnTable) -> RelRecursionReport {
    let p = table.space.p();
    let q = table.space.q();
    let s = table.spin as i64;
    for n in 0..p {
        let step = p as i64 - 1 - 2 * modarith::reduce(s + (n * q) as i64, p) as i64;
        let next = table.values[((n + 1) % p) as usize];
        if next != table.values[n as usize] + step {
            return RelRecursionReport {
                ok: false,
                first_failure: Some(n),
            };
        }
    }
    RelRecursionReport {
        ok: true,
        first_failure: None,
    }
}

/// Outcome of building `g` two ways from a pair of relative tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GFunctionReport {
    pub p: u64,
    pub agree: bool,
    /// First `(m, via_first, via_second)` disagreement, if any.
    pub first_mismatch: Option<(u64, i64, i64)>,
}

/// Build `g(m) = f1(s1, m q') = f2(s2, m u' q')` from both sides and report
/// whether the two constructions agree for every `m`. Agreement for some
/// unit `u` and compatible spin choice is exactly the situation the
/// classification argument runs in.
pub fn g_function(
    space1: &LensSpace,
    s1: i64,
    space2: &LensSpace,
    s2: i64,
    u: i64,
) -> Result<GFunctionReport, Error> {
    let p = space1.p();
    if p != space2.p() {
        return Err(Error::ModulusMismatch {
            left: p,
            right: space2.p(),
        });
    }
    let u_red = modarith::reduce(u, p);
    let u_inv = modarith::inv_mod(u_red, p).ok_or(Error::NotAUnit {
        value: u,
        modulus: p,
    })?;
    let f1 = rel_f_table(space1, s1)?;
    let f2 = rel_f_table(space2, s2)?;
    // q1 is a unit mod p by coprimality.
    let q_inv = modarith::inv_mod(space1.q() % p, p).expect("q coprime to p");
    let mut first_mismatch = None;
    for m in 0..p {
        let via_first = f1.values[modarith::mul_mod(m, q_inv, p) as usize];
        let via_second =
            f2.values[modarith::mul_mod(m, modarith::mul_mod(u_inv, q_inv, p), p) as usize];
        if via_first != via_second {
            first_mismatch = Some((m, via_first, via_second));
            break;
        }
    }
    Ok(GFunctionReport {
        p,
        agree: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// Does `[s1+m]_p + [s2+(m+q)u]_p = [s2+mu]_p + [s1+m+uq]_p` hold?
pub fn four_bracket_identity_holds(p: u64, s1: i64, s2: i64, u: i64, q: i64, m: i64) -> bool {
    let r = |a: i128| modarith::reduce(a, p);
    let (s1, s2, u, q, m) = (s1 as i128, s2 as i128, u as i128, q as i128, m as i128);
    r(s1 + m) + r(s2 + (m + q) * u) == r(s2 + m * u) + r(s1 + m + u * q)
}

/// Does `[s1+m]_p < p - [uq]_p` hold exactly when `[s2+mu]_p < p - [uq]_p`?
/// Evaluated through [`modarith::bracket_sum_case`].
pub fn threshold_equivalence_holds(p: u64, s1: i64, s2: i64, u: i64, q: i64, m: i64) -> bool {
    let uq = modarith::reduce(u as i128 * q as i128, p) as i64;
    let case_of = |x: i128| -> BracketCase {
        modarith::bracket_sum_case(modarith::reduce(x, p) as i64, uq, p).expect("p > 0")
    };
    case_of(s1 as i128 + m as i128) == case_of(s2 as i128 + m as i128 * u as i128)
}

/// One failed check in a [`verify_lemma3`] sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma3Failure {
    pub p: u64,
    pub q: u64,
    pub spin: u64,
    pub detail: String,
}

/// Outcome of the relative-invariant identity sweep.
#[derive(Debug, Clone)]
pub struct Lemma3SweepReport {
    pub p_max: u64,
    pub tables_checked: u64,
    pub failures: Vec<Lemma3Failure>,
}

impl Lemma3SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Sweep every coprime `(p, q)` with `p <= p_max` and every spin structure,
/// and check the three identities of `f` exactly: the base value, the step
/// rule (including wraparound), and the congruence `f(s, n) = -n^2 q`.
/// Integrality is asserted by construction.
pub fn verify_lemma3(p_max: u64) -> Lemma3SweepReport {
    let mut report = Lemma3SweepReport {
        p_max,
        tables_checked: 0,
        failures: Vec::new(),
    };
    for space in dinvariants::coprime_spaces(p_max) {
        let table = dinvariants::d_table(&space);
        for &s in dinvariants::spin_structures(&space).labels() {
            report.tables_checked += 1;
            let f = rel_f_table_from(&table, s as i64).expect("spin label is valid");
            let mut fail = |detail: String| {
                report.failures.push(Lemma3Failure {
                    p: space.p(),
                    q: space.q(),
                    spin: s,
                    detail,
                });
            };
            if f.values[0] != 0 {
                fail(format!("f(s,0) = {} instead of 0", f.values[0]));
            }
            let step = check_rel_recursion(&f);
            if !step.ok {
                fail(format!("step rule fails at n={:?}", step.first_failure));
            }
            if let Some(n) = congruence_failure(&f) {
                fail(format!("congruence fails at n={n}"));
            }
        }
    }
    report
}
