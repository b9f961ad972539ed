//! Command implementations behind the `lensd` binary.
//!
//! Output is deterministic: equal arguments produce byte-identical output.
//! Rationals are rendered exactly, as `num` or `num/den`; JSON adds a
//! clearly labeled decimal approximation for human readers. JSON records
//! share one shape: `{"command", "params", "payload", "version"}` with
//! keys in sorted order.

use num::ToPrimitive;
use serde_json::{json, Value};

use crate::classify;
use crate::dinvariants::{self, LensSpace};
use crate::lemma_oracles;
use crate::modarith::{self, Rational};
use crate::relative;
use crate::residues;
use crate::Error;

/// Version stamped on every machine-readable record.
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Shift,
    Lemma3,
    Theorem1,
    Theorem2,
    Lemma4,
    Lemma5,
    All,
}

impl Suite {
    fn name(&self) -> &'static str {
        match self {
            Suite::Shift => "shift",
            Suite::Lemma3 => "lemma3",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Lemma4 => "lemma4",
            Suite::Lemma5 => "lemma5",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Profile {
    /// Small caps, suitable for CI (well under a minute).
    Quick,
    /// The full desk-scale caps the acceptance suite pins.
    Full,
}

impl Profile {
    fn name(&self) -> &'static str {
        match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        }
    }
}

/// Per-suite sweep caps (each an inclusive bound on p).
#[derive(Debug, Clone, Copy)]
pub struct SweepCaps {
    pub shift: u64,
    pub lemma3: u64,
    pub theorem1: u64,
    pub theorem2: u64,
    pub lemma4: u64,
    pub lemma5: u64,
}

impl SweepCaps {
    pub fn quick() -> Self {
        SweepCaps {
            shift: 60,
            lemma3: 60,
            theorem1: 16,
            theorem2: 100,
            lemma4: 30,
            lemma5: 16,
        }
    }

    pub fn full() -> Self {
        SweepCaps {
            shift: 200,
            lemma3: 200,
            theorem1: 50,
            theorem2: 500,
            lemma4: 100,
            lemma5: 40,
        }
    }

    pub fn for_profile(profile: Profile) -> Self {
        match profile {
            Profile::Quick => Self::quick(),
            Profile::Full => Self::full(),
        }
    }
}

/// Exact rendering of a rational: `num` when integral, `num/den` otherwise.
pub fn rational_str(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_json(command: &str, params: Value, payload: Value) -> String {
    let record = json!({
        "command": command,
        "params": params,
        "payload": payload,
        "version": FORMAT_VERSION,
    });
    let mut out = serde_json::to_string_pretty(&record).expect("serializable");
    out.push('\n');
    out
}

/// Exact d-invariant table of `L(p, q)` with spin markers.
pub fn cmd_dtable(p: u64, q: u64, format: Format) -> Result<String, Error> {
    let space = LensSpace::new(p, q)?;
    let table = dinvariants::d_table(&space);
    let spin = dinvariants::spin_structures(&space);
    match format {
        Format::Plain => {
            let mut out = format!("# dtable p={p} q={q}\n");
            for (label, value) in table.values().iter().enumerate() {
                let marker = if spin.contains(label as i64) { " spin" } else { "" };
                out.push_str(&format!("{label} {}{marker}\n", rational_str(value)));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("label,d,spin\n");
            for (label, value) in table.values().iter().enumerate() {
                out.push_str(&format!(
                    "{label},{},{}\n",
                    rational_str(value),
                    spin.contains(label as i64)
                ));
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .values()
                .iter()
                .enumerate()
                .map(|(label, value)| {
                    json!({
                        "label": label,
                        "d": rational_str(value),
                        "d_approx": value.to_f64(),
                        "spin": spin.contains(label as i64),
                    })
                })
                .collect();
            Ok(render_json(
                "dtable",
                json!({ "p": p, "q": q }),
                json!({ "rows": rows }),
            ))
        }
    }
}

/// Homeomorphism and d-isomorphism verdict for `L(p, q1)` vs `L(p, q2)`.
pub fn cmd_classify(
    p: u64,
    q1: u64,
    q2: u64,
    require_spin_compat: bool,
    format: Format,
) -> Result<String, Error> {
    let verdict = classify::classify_pair(p, q1, q2)?;
    let d_iso_exists = if require_spin_compat {
        !verdict.spin_compatible_witnesses.is_empty()
    } else {
        !verdict.witnesses.is_empty()
    };
    let agreement = verdict.homeomorphic == d_iso_exists;
    let spin_compatible = |iso: &classify::TorsorIso| {
        verdict
            .spin_compatible_witnesses
            .iter()
            .any(|w| w.iso == *iso)
    };
    match format {
        Format::Plain => {
            let mut out = format!(
                "# classify p={p} q1={q1} q2={q2} require_spin_compat={require_spin_compat}\n"
            );
            out.push_str(&format!("homeomorphic: {}\n", verdict.homeomorphic));
            out.push_str(&format!("d_iso_exists: {d_iso_exists}\n"));
            out.push_str(&format!("agreement: {agreement}\n"));
            for iso in &verdict.witnesses {
                out.push_str(&format!(
                    "witness c={} u={} spin_compatible={}\n",
                    iso.offset(),
                    iso.unit(),
                    spin_compatible(iso)
                ));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from(
                "p,q1,q2,homeomorphic,d_iso_exists,agreement,offset,unit,spin_compatible\n",
            );
            if verdict.witnesses.is_empty() {
                out.push_str(&format!(
                    "{p},{q1},{q2},{},{d_iso_exists},{agreement},,,\n",
                    verdict.homeomorphic
                ));
            }
            for iso in &verdict.witnesses {
                out.push_str(&format!(
                    "{p},{q1},{q2},{},{d_iso_exists},{agreement},{},{},{}\n",
                    verdict.homeomorphic,
                    iso.offset(),
                    iso.unit(),
                    spin_compatible(iso)
                ));
            }
            Ok(out)
        }
        Format::Json => {
            let witnesses: Vec<Value> = verdict
                .witnesses
                .iter()
                .map(|iso| {
                    let spin_map: Option<Vec<Value>> = verdict
                        .spin_compatible_witnesses
                        .iter()
                        .find(|w| w.iso == *iso)
                        .map(|w| {
                            w.spin_map
                                .iter()
                                .map(|(from, to)| json!([from, to]))
                                .collect()
                        });
                    json!({
                        "offset": iso.offset(),
                        "unit": iso.unit(),
                        "spin_compatible": spin_compatible(iso),
                        "spin_map": spin_map,
                    })
                })
                .collect();
            Ok(render_json(
                "classify",
                json!({
                    "p": p,
                    "q1": q1,
                    "q2": q2,
                    "require_spin_compat": require_spin_compat,
                }),
                json!({
                    "homeomorphic": verdict.homeomorphic,
                    "d_iso_exists": d_iso_exists,
                    "agreement": agreement,
                    "witnesses": witnesses,
                }),
            ))
        }
    }
}

/// Image of the relative invariant mod p, with multiplicities and (for odd
/// prime p) the Legendre-characterization comparison.
pub fn cmd_sbar(p: u64, q: u64, format: Format) -> Result<String, Error> {
    let set = residues::sbar(p, q)?;
    let prime = modarith::is_prime(p);
    // The Legendre description only applies to odd primes; p = 2 and
    // composite p are emitted with the comparison marked not applicable.
    let characterization_match: Option<bool> = residues::residue_characterization(p, q)
        .ok()
        .map(|expected| expected == set.members());
    let match_str = match characterization_match {
        Some(true) => "match",
        Some(false) => "mismatch",
        None => "not applicable",
    };
    match format {
        Format::Plain => {
            let mut out = format!("# sbar p={p} q={q} prime={prime}\n");
            for member in set.members() {
                out.push_str(&format!(
                    "member {member} multiplicity {}\n",
                    set.multiplicity()[member]
                ));
            }
            out.push_str(&format!("characterization: {match_str}\n"));
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::from("member,multiplicity\n");
            for member in set.members() {
                out.push_str(&format!("{member},{}\n", set.multiplicity()[member]));
            }
            Ok(out)
        }
        Format::Json => {
            let members: Vec<Value> = set
                .members()
                .iter()
                .map(|m| json!({ "member": m, "multiplicity": set.multiplicity()[m] }))
                .collect();
            Ok(render_json(
                "sbar",
                json!({ "p": p, "q": q }),
                json!({
                    "prime": prime,
                    "members": members,
                    "characterization_match": characterization_match,
                }),
            ))
        }
    }
}

/// Result of one verification sub-suite.
struct SuiteOutcome {
    name: &'static str,
    p_max: u64,
    checks: u64,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl SuiteOutcome {
    fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn run_shift(p_max: u64) -> SuiteOutcome {
    let report = dinvariants::verify_shift(p_max);
    SuiteOutcome {
        name: "shift",
        p_max,
        checks: report.tables_checked,
        failures: report
            .failures
            .iter()
            .map(|f| format!("p={} q={} [{:?}]: {}", f.p, f.q, f.kind, f.detail))
            .collect(),
        notes: Vec::new(),
    }
}

fn run_lemma3(p_max: u64) -> SuiteOutcome {
    let report = relative::verify_lemma3(p_max);
    SuiteOutcome {
        name: "lemma3",
        p_max,
        checks: report.tables_checked,
        failures: report
            .failures
            .iter()
            .map(|f| format!("p={} q={} s={}: {}", f.p, f.q, f.spin, f.detail))
            .collect(),
        notes: Vec::new(),
    }
}

fn run_theorem1(p_max: u64) -> SuiteOutcome {
    let report = classify::verify_theorem1(p_max);
    let mut failures = Vec::new();
    for f in &report.equivalence_failures {
        failures.push(format!(
            "p={} q1={} q2={}: witness existence disagrees with homeomorphism",
            f.p, f.q1, f.q2
        ));
    }
    failures.extend(report.witness_constraint_failures.iter().cloned());
    failures.extend(report.bracket_failures.iter().cloned());
    let mut notes = vec![format!("bracket checks run: {}", report.bracket_checks)];
    if report.spin_flag_discrepancies.is_empty() {
        notes.push(
            "dropping the spin-compatibility requirement changed no verdict".to_string(),
        );
    } else {
        for d in &report.spin_flag_discrepancies {
            notes.push(format!(
                "p={} q1={} q2={}: d-preserving map exists only without spin compatibility",
                d.p, d.q1, d.q2
            ));
        }
    }
    SuiteOutcome {
        name: "theorem1",
        p_max,
        checks: report.pairs_checked,
        failures,
        notes,
    }
}

fn run_theorem2(p_max: u64) -> SuiteOutcome {
    let report = residues::verify_theorem2_and_corollary(p_max);
    let mut failures: Vec<String> = report
        .failures
        .iter()
        .map(|f| format!("p={} q={}: {}", f.p, f.q, f.detail))
        .collect();
    // The p = 2 special case: the image is all of Z/2Z.
    let mut checks = report.sets_checked;
    if p_max >= 2 {
        checks += 1;
        match residues::sbar(2, 1) {
            Ok(set) if set.members() == [0, 1] => {}
            other => failures.push(format!("sbar(2,1) is not Z/2Z: {other:?}")),
        }
    }
    SuiteOutcome {
        name: "theorem2",
        p_max,
        checks,
        failures,
        notes: Vec::new(),
    }
}

fn run_lemma4(p_max: u64) -> SuiteOutcome {
    let mut checks = 0u64;
    let mut failures = Vec::new();
    for p in 4..=p_max.max(3) {
        let report = lemma_oracles::check_lemma4(p);
        checks += report.specs_checked;
        for v in &report.violations {
            failures.push(format!(
                "p={} h0={} n={} C={}: unexpected satisfier",
                v.p, v.h0, v.n, v.c
            ));
        }
        if report.shift_reduction_mismatches > 0 {
            failures.push(format!(
                "p={p}: {} threshold-shift mismatches",
                report.shift_reduction_mismatches
            ));
        }
    }
    SuiteOutcome {
        name: "lemma4",
        p_max,
        checks,
        failures,
        notes: Vec::new(),
    }
}

fn run_lemma5(p_max: u64) -> SuiteOutcome {
    let capped = p_max.min(128);
    let mut notes = Vec::new();
    if capped < p_max {
        notes.push(format!("cap reduced to {capped} (oracle limit)"));
    }
    let mut checks = 0u64;
    let mut failures = Vec::new();
    for p in 4..=capped.max(3) {
        let report = lemma_oracles::check_lemma5(p);
        checks += report.satisfying_pairs;
        for v in &report.violations {
            failures.push(format!(
                "p={} C={} (x={}, y={}) vs (X={}, Y={}): {}",
                v.p, v.c, v.x, v.y, v.big_x, v.big_y, v.detail
            ));
        }
        if report.reflection_failures > 0 {
            failures.push(format!(
                "p={p}: {} reflection pairs missing",
                report.reflection_failures
            ));
        }
    }
    SuiteOutcome {
        name: "lemma5",
        p_max,
        checks,
        failures,
        notes,
    }
}

/// Rendered verification output plus the overall verdict (used for the
/// exit code: nonzero exactly when a counterexample is present).
pub struct VerifyOutcome {
    pub rendered: String,
    pub passed: bool,
}

/// Run one suite (or all of them) at the given caps and render the report.
pub fn cmd_verify(
    suite: Suite,
    profile: Profile,
    pmax_override: Option<u64>,
    format: Format,
) -> VerifyOutcome {
    let caps = SweepCaps::for_profile(profile);
    let cap = |base: u64| pmax_override.unwrap_or(base);
    let outcomes: Vec<SuiteOutcome> = match suite {
        Suite::Shift => vec![run_shift(cap(caps.shift))],
        Suite::Lemma3 => vec![run_lemma3(cap(caps.lemma3))],
        Suite::Theorem1 => vec![run_theorem1(cap(caps.theorem1))],
        Suite::Theorem2 => vec![run_theorem2(cap(caps.theorem2))],
        Suite::Lemma4 => vec![run_lemma4(cap(caps.lemma4))],
        Suite::Lemma5 => vec![run_lemma5(cap(caps.lemma5))],
        Suite::All => vec![
            run_shift(cap(caps.shift)),
            run_lemma3(cap(caps.lemma3)),
            run_theorem1(cap(caps.theorem1)),
            run_theorem2(cap(caps.theorem2)),
            run_lemma4(cap(caps.lemma4)),
            run_lemma5(cap(caps.lemma5)),
        ],
    };
    let passed = outcomes.iter().all(|o| o.passed());
    let rendered = match format {
        Format::Plain => {
            let mut out = format!(
                "# verify suite={} profile={} pmax={}\n",
                suite.name(),
                profile.name(),
                pmax_override.map_or("default".to_string(), |v| v.to_string()),
            );
            for o in &outcomes {
                out.push_str(&format!(
                    "{}: pmax={} checks={} failures={} {}\n",
                    o.name,
                    o.p_max,
                    o.checks,
                    o.failures.len(),
                    if o.passed() { "PASS" } else { "FAIL" }
                ));
                for f in &o.failures {
                    out.push_str(&format!("  counterexample: {f}\n"));
                }
                for n in &o.notes {
                    out.push_str(&format!("  note: {n}\n"));
                }
            }
            out.push_str(&format!(
                "overall: {}\n",
                if passed { "PASS" } else { "FAIL" }
            ));
            out
        }
        Format::Csv => {
            let mut out = String::from("suite,p_max,checks,failures,passed\n");
            for o in &outcomes {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    o.name,
                    o.p_max,
                    o.checks,
                    o.failures.len(),
                    o.passed()
                ));
            }
            out
        }
        Format::Json => {
            let suites: Vec<Value> = outcomes
                .iter()
                .map(|o| {
                    json!({
                        "name": o.name,
                        "p_max": o.p_max,
                        "checks": o.checks,
                        "failures": o.failures,
                        "notes": o.notes,
                        "passed": o.passed(),
                    })
                })
                .collect();
            render_json(
                "verify",
                json!({
                    "suite": suite.name(),
                    "profile": profile.name(),
                    "pmax": pmax_override,
                }),
                json!({ "suites": suites, "passed": passed }),
            )
        }
    };
    VerifyOutcome { rendered, passed }
}
