//! d-invariants of lens spaces.
//!
//! `L(p, q)` carries `p` spin-c structures, identified with labels in
//! `Z/pZ`; the distinguished homology generator acts on labels by adding
//! `q`. The orientation convention is fixed once and for all: `L(p, q)` is
//! `-p/q` surgery on the unknot. With that convention the d-invariant at
//! label `i` satisfies the exact recursion
//!
//! ```text
//! d(L(p, q), i) = 1/4 - (2[i]_p + 1 - p - q)^2 / (4pq) - d(L(q, [p]_q), [i]_q)
//! ```
//!
//! which bottoms out at `d(S^3) = 0`, and the one-step shift rule
//!
//! ```text
//! d(L(p, q), i + q) - d(L(p, q), i) = (p - 1 - 2[i]_p) / p.
//! ```
//!
//! The recursion and the shift rule are independent routes to the same
//! table; [`d_table`] uses the recursion, [`d_table_by_shift_propagation`]
//! anchors one label by recursion and walks the rest with the shift rule.

use std::fmt;

use num::{BigInt, Zero};

use crate::modarith::{self, Rational};
use crate::Error;

// Labels and their doubles must fit comfortably in i64/i128 arithmetic.
const MAX_P: u64 = 1 << 31;

/// The lens space `L(p, q)`, with `0 < q < p` coprime, oriented as `-p/q`
/// surgery on the unknot. `L(1, 0)` is the three-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LensSpace {
    p: u64,
    q: u64,
}

impl LensSpace {
    pub fn new(p: u64, q: u64) -> Result<Self, Error> {
        if p == 0 {
            return Err(Error::LensRange { p, q });
        }
        if p > MAX_P {
            return Err(Error::LensTooLarge { p });
        }
        if p == 1 {
            return if q == 0 {
                Ok(LensSpace { p, q })
            } else {
                Err(Error::LensRange { p, q })
            };
        }
        if q == 0 || q >= p {
            return Err(Error::LensRange { p, q });
        }
        if num::integer::gcd(p, q) != 1 {
            return Err(Error::LensNotCoprime { p, q });
        }
        Ok(LensSpace { p, q })
    }

    /// The three-sphere, as the degenerate pair `L(1, 0)`.
    pub fn s3() -> Self {
        LensSpace { p: 1, q: 0 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_s3(&self) -> bool {
        self.p == 1
    }
}

impl fmt::Display for LensSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// The full map label -> d-value of a lens space, one exact rational per
/// label in `[0, p)`. Label arguments are reduced, so any integer indexes
/// the table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DInvTable {
    space: LensSpace,
    values: Vec<Rational>,
}

impl DInvTable {
    pub fn space(&self) -> &LensSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// d-value at any integer label (reduced mod p).
    pub fn value(&self, label: i64) -> &Rational {
        &self.values[modarith::reduce(label, self.space.p) as usize]
    }

    /// Does the table satisfy the one-step shift rule at every index?
    pub fn shift_relation_holds(&self) -> bool {
        let p = self.space.p;
        (0..p).all(|i| {
            self.value(i as i64 + self.space.q as i64) - self.value(i as i64)
                == shift_delta(p, i as i64)
        })
    }

    /// Is the table symmetric under conjugation about each spin structure?
    pub fn conjugation_symmetric(&self) -> bool {
        let p = self.space.p as i64;
        spin_structures(&self.space).labels().iter().all(|&s| {
            (0..p).all(|n| self.value(s as i64 + n) == self.value(s as i64 - n))
        })
    }
}

/// The right-hand side of the shift rule: `(p - 1 - 2[i]_p) / p`.
pub fn shift_delta(p: u64, label: i64) -> Rational {
    let i = modarith::reduce(label, p);
    Rational::new(
        BigInt::from(p as i64 - 1 - 2 * i as i64),
        BigInt::from(p),
    )
}

fn grading_term(p: u64, q: u64, i: u64) -> Rational {
    // 1/4 - (2i + 1 - p - q)^2 / (4pq), for i already reduced into [0, p)
    let t = 2 * i as i128 + 1 - p as i128 - q as i128;
    Rational::new(BigInt::from(1), BigInt::from(4))
        - Rational::new(BigInt::from(t * t), BigInt::from(4 * p as i128 * q as i128))
}

fn d_rec(p: u64, q: u64, i: u64) -> Rational {
    if p == 1 {
        return Rational::zero();
    }
    grading_term(p, q, i) - d_rec(q, p % q, i % q)
}

/// d-invariant of `space` at one label, by direct recursion. Any integer
/// label is accepted and reduced.
pub fn d_invariant(space: &LensSpace, label: i64) -> Rational {
    d_rec(space.p, space.q, modarith::reduce(label, space.p))
}

/// The Euclidean parameter chain `(p, q), (q, [p]_q), ...` down to the
/// three-sphere. Shared by the whole table so each level is computed once.
fn euclidean_chain(space: &LensSpace) -> Vec<(u64, u64)> {
    let mut chain = Vec::new();
    let (mut p, mut q) = (space.p, space.q);
    while p > 1 {
        chain.push((p, q));
        (p, q) = (q, p % q);
    }
    chain
}

/// Full d-table of `space` by the recursion, evaluated bottom-up along the
/// Euclidean chain.
pub fn d_table(space: &LensSpace) -> DInvTable {
    let mut values = vec![Rational::zero()];
    for &(p, q) in euclidean_chain(space).iter().rev() {
        let mut next = Vec::with_capacity(p as usize);
        for i in 0..p {
            next.push(grading_term(p, q, i) - &values[(i % q) as usize]);
        }
        values = next;
    }
    let table = DInvTable {
        space: *space,
        values,
    };
    debug_assert!(table.shift_relation_holds());
    debug_assert!(table.conjugation_symmetric());
    table
}

/// Full d-table by the independent route: one label anchored by the
/// recursion, every other value propagated with the shift rule alone.
pub fn d_table_by_shift_propagation(space: &LensSpace) -> DInvTable {
    let p = space.p;
    let mut values = vec![Rational::zero(); p as usize];
    values[0] = d_invariant(space, 0);
    let mut label = 0u64;
    for _ in 1..p {
        let next = (label + space.q) % p;
        values[next as usize] = &values[label as usize] + shift_delta(p, label as i64);
        label = next;
    }
    DInvTable {
        space: *space,
        values,
    }
}

/// The set of spin structures of `space`: the integral values among
/// `(q - 1)/2` and `(p + q - 1)/2`. One label when `p` is odd, two when
/// `p` is even.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinSet {
    modulus: u64,
    labels: Vec<u64>,
}

impl SpinSet {
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn contains(&self, label: i64) -> bool {
        self.labels.contains(&modarith::reduce(label, self.modulus))
    }
}

pub fn spin_structures(space: &LensSpace) -> SpinSet {
    let (p, q) = (space.p, space.q);
    let mut labels = Vec::new();
    if q >= 1 && (q - 1) % 2 == 0 {
        labels.push((q - 1) / 2);
    }
    if (p + q - 1) % 2 == 0 {
        labels.push(((p + q - 1) / 2) % p);
    }
    labels.sort_unstable();
    labels.dedup();
    debug_assert_eq!(labels.len(), if p % 2 == 0 { 2 } else { 1 });
    SpinSet { modulus: p, labels }
}

/// Conjugation in labels: reflection `i -> [2s - i]_p` about the spin
/// structure `s`. Rejects `s` outside the spin set.
pub fn conjugate_label(space: &LensSpace, s: i64, i: i64) -> Result<u64, Error> {
    let spin = spin_structures(space);
    let s = modarith::reduce(s, space.p);
    if !spin.contains(s as i64) {
        return Err(Error::NotSpinStructure {
            label: s,
            p: space.p,
            q: space.q,
        });
    }
    Ok(modarith::reduce(2 * s as i128 - i as i128, space.p))
}

/// The d-table of the orientation reverse: pointwise negation, same labels.
pub fn reverse_orientation_table(table: &DInvTable) -> DInvTable {
    DInvTable {
        space: table.space,
        values: table.values.iter().map(|v| -v).collect(),
    }
}

/// Which of the table checks a sweep failure came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftCheckKind {
    /// The one-step shift rule at some label.
    ShiftRule,
    /// Recursion table vs shift-propagated table.
    DualRoute,
    /// Spin structure count (one for odd p, two for even).
    SpinCount,
    /// Conjugation symmetry about a spin structure.
    Conjugation,
}

/// One failed check in a [`verify_shift`] sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftFailure {
    pub p: u64,
    pub q: u64,
    pub kind: ShiftCheckKind,
    pub detail: String,
}

/// Outcome of the shift / dual-route / spin-symmetry sweep.
#[derive(Debug, Clone)]
pub struct ShiftSweepReport {
    pub p_max: u64,
    pub tables_checked: u64,
    pub failures: Vec<ShiftFailure>,
}

impl ShiftSweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_of(&self, kind: ShiftCheckKind) -> Vec<&ShiftFailure> {
        self.failures.iter().filter(|f| f.kind == kind).collect()
    }
}

/// Sweep every coprime `(p, q)` with `p <= p_max` and check, exactly:
/// the shift rule at every label, equality of the recursion table with the
/// shift-propagated table, the spin structure count (one for odd `p`, two
/// for even), and conjugation symmetry about every spin structure.
pub fn verify_shift(p_max: u64) -> ShiftSweepReport {
    let mut report = ShiftSweepReport {
        p_max,
        tables_checked: 0,
        failures: Vec::new(),
    };
    for space in coprime_spaces(p_max) {
        let (p, q) = (space.p(), space.q());
        report.tables_checked += 1;
        let table = d_table(&space);
        let mut fail = |kind: ShiftCheckKind, detail: String| {
            report.failures.push(ShiftFailure { p, q, kind, detail });
        };
        for i in 0..p as i64 {
            let lhs = table.value(i + q as i64) - table.value(i);
            if lhs != shift_delta(p, i) {
                fail(
                    ShiftCheckKind::ShiftRule,
                    format!("shift rule fails at label {i}"),
                );
            }
        }
        let propagated = d_table_by_shift_propagation(&space);
        if propagated.values() != table.values() {
            fail(
                ShiftCheckKind::DualRoute,
                "recursion and shift-propagation tables differ".to_string(),
            );
        }
        let spin = spin_structures(&space);
        let expected = if p % 2 == 0 { 2 } else { 1 };
        if spin.labels().len() != expected {
            fail(
                ShiftCheckKind::SpinCount,
                format!("expected {expected} spin structures"),
            );
        }
        for &s in spin.labels() {
            for n in 0..p as i64 {
                if table.value(s as i64 + n) != table.value(s as i64 - n) {
                    fail(
                        ShiftCheckKind::Conjugation,
                        format!("conjugation symmetry fails at s={s}, n={n}"),
                    );
                }
            }
        }
    }
    report
}

/// All valid lens spaces with `p <= p_max`, including the three-sphere,
/// in lexicographic order.
pub(crate) fn coprime_spaces(p_max: u64) -> Vec<LensSpace> {
    let mut out = Vec::new();
    if p_max >= 1 {
        out.push(LensSpace::s3());
    }
    for p in 2..=p_max {
        for q in 1..p {
            if num::integer::gcd(p, q) == 1 {
                out.push(LensSpace { p, q });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{rat, rat_int};
    use proptest::prelude::*;

    fn space(p: u64, q: u64) -> LensSpace {
        LensSpace::new(p, q).unwrap()
    }

    #[test]
    fn lens_space_validation() {
        assert!(LensSpace::new(5, 2).is_ok());
        assert!(LensSpace::new(1, 0).is_ok());
        assert_eq!(
            LensSpace::new(4, 2),
            Err(Error::LensNotCoprime { p: 4, q: 2 })
        );
        assert_eq!(LensSpace::new(5, 5), Err(Error::LensRange { p: 5, q: 5 }));
        assert_eq!(LensSpace::new(5, 0), Err(Error::LensRange { p: 5, q: 0 }));
        assert_eq!(LensSpace::new(1, 1), Err(Error::LensRange { p: 1, q: 1 }));
        assert_eq!(LensSpace::new(0, 0), Err(Error::LensRange { p: 0, q: 0 }));
    }

    #[test]
    fn three_sphere_is_zero() {
        assert_eq!(d_invariant(&LensSpace::s3(), 0), rat_int(0));
        assert_eq!(d_table(&LensSpace::s3()).values(), &[rat_int(0)]);
    }

    #[test]
    fn small_tables_match_hand_evaluation() {
        // Single-step evaluations of the recursion with base value 0.
        let l21 = d_table(&space(2, 1));
        assert_eq!(l21.values(), &[rat(-1, 4), rat(1, 4)]);

        let l31 = d_table(&space(3, 1));
        assert_eq!(l31.values(), &[rat(-1, 2), rat(1, 6), rat(1, 6)]);

        let l51 = d_table(&space(5, 1));
        assert_eq!(
            l51.values(),
            &[rat_int(-1), rat(-1, 5), rat(1, 5), rat(1, 5), rat(-1, 5)]
        );
    }

    #[test]
    fn single_label_recursion_matches_table() {
        for p in 2..=40u64 {
            for q in 1..p {
                if num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let sp = space(p, q);
                let table = d_table(&sp);
                for i in 0..p as i64 {
                    assert_eq!(&d_invariant(&sp, i), table.value(i), "L({p},{q}) i={i}");
                }
            }
        }
    }

    #[test]
    fn spin_structure_examples() {
        assert_eq!(spin_structures(&space(5, 1)).labels(), &[0]);
        assert_eq!(spin_structures(&space(5, 2)).labels(), &[3]);
        assert_eq!(spin_structures(&space(2, 1)).labels(), &[0, 1]);
    }

    #[test]
    fn spin_structures_solve_doubling_congruence() {
        // Independent route: the spin labels are exactly the solutions of
        // 2i = q - 1 (mod p).
        for p in 2..=100u64 {
            for q in 1..p {
                if num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let sp = space(p, q);
                let by_congruence: Vec<u64> = (0..p)
                    .filter(|i| {
                        modarith::reduce(2 * *i as i64, p) == modarith::reduce(q as i64 - 1, p)
                    })
                    .collect();
                assert_eq!(spin_structures(&sp).labels(), by_congruence, "L({p},{q})");
            }
        }
    }

    #[test]
    fn conjugate_label_examples() {
        assert_eq!(conjugate_label(&space(5, 1), 0, 0).unwrap(), 0);
        assert_eq!(conjugate_label(&space(5, 1), 0, 1).unwrap(), 4);
        assert_eq!(conjugate_label(&space(5, 2), 3, 4).unwrap(), 2);
        assert_eq!(
            conjugate_label(&space(5, 1), 1, 0),
            Err(Error::NotSpinStructure {
                label: 1,
                p: 5,
                q: 1
            })
        );
    }

    #[test]
    fn both_symmetry_axes_reflect_the_table() {
        // Reflections about both half-integral axes, written with doubled
        // axis values 2x = q - 1 and 2x = p + q - 1, preserve the table even
        // when x itself is not an integer label.
        for p in 2..=60u64 {
            for q in 1..p {
                if num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let table = d_table(&space(p, q));
                for two_x in [q as i64 - 1, p as i64 + q as i64 - 1] {
                    for i in 0..p as i64 {
                        assert_eq!(
                            table.value(two_x - i),
                            table.value(i),
                            "L({p},{q}) axis 2x={two_x} i={i}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn reverse_orientation_examples() {
        let l31 = d_table(&space(3, 1));
        let rev = reverse_orientation_table(&l31);
        assert_eq!(rev.values(), &[rat(1, 2), rat(-1, 6), rat(-1, 6)]);
        assert_eq!(reverse_orientation_table(&rev), l31);
        let s3 = d_table(&LensSpace::s3());
        assert_eq!(reverse_orientation_table(&s3).values(), s3.values());
    }

    #[test]
    fn sweep_is_clean_at_small_scale() {
        let report = verify_shift(60);
        assert!(report.passed(), "{:?}", report.failures);
        assert!(report.tables_checked > 0);
    }

    proptest! {
        #[test]
        fn labels_are_periodic(p in 2u64..80, q_seed in 1u64..80, i in -300i64..300) {
            let q = (1..p).find(|q| num::integer::gcd(p, *q) == 1 && (q_seed % p) <= *q).unwrap_or(1);
            let sp = space(p, q);
            prop_assert_eq!(d_invariant(&sp, i), d_invariant(&sp, i + p as i64));
        }
    }
}
