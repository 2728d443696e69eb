//! The claim registry and its reports.
//!
//! A claim pairs a problem from [`registry`] with expected values from the
//! golden file `data/claims.toml`. [`verify_claim`] sieves (or runs the
//! witness constructors) and returns a [`Report`] whose verdict is
//! `confirmed`, `refuted` (with a concrete counterexample), `inconclusive`
//! or, for conjectures, `consistent`.

pub mod registry;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{admits, least_n};
use crate::error::{Error, Result};
use crate::form::RepProblem;
use crate::sieve::{count_all, find_tuple, sieve_representable, RepSet};
use crate::witness::construct_for;
pub use registry::{registry, CheckDef, ClaimDef, Restriction};

/// The golden data, embedded at build time.
pub const GOLDEN: &str = include_str!("../../data/claims.toml");

/// Default limit for exception-set and threshold claims.
pub const DEFAULT_LIMIT: u64 = 200_000;
/// Default limit for conjectures.
pub const CONJECTURE_LIMIT: u64 = 400_000;
/// Width of witness sweeps above the least admissible `n`.
pub const SWEEP_SPAN: u64 = 5_000;
/// Representable integers re-checked with explicit tuples per confirmed claim.
pub const SAMPLES: usize = 5;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenEntry {
    pub id: String,
    pub kind: String,
    #[serde(default)]
    pub check: Option<String>,
    pub locus: String,
    #[serde(default)]
    pub exceptions: Option<Vec<u64>>,
    #[serde(default)]
    pub bound: Option<u64>,
    #[serde(default)]
    pub sharp: Option<bool>,
    #[serde(default)]
    pub unique: Option<Vec<u64>>,
}

#[derive(Deserialize)]
struct GoldenFile {
    claim: Vec<GoldenEntry>,
}

pub fn golden() -> Result<Vec<GoldenEntry>> {
    let file: GoldenFile =
        toml::from_str(GOLDEN).map_err(|e| Error::Format(format!("claims.toml: {e}")))?;
    Ok(file.claim)
}

/// What a claim asserts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    /// The (restricted) exception set is exactly this list.
    Exceptions(Vec<u64>),
    /// Every `n > bound` is representable; if `sharp`, `bound` itself is not.
    Threshold { bound: u64, sharp: bool },
    /// The constructor succeeds on every admissible `n`.
    Sweep,
    /// Uniquely representable integers form a subset of this list.
    UniqueSubset(Vec<u64>),
    /// Evidence only.
    Observe,
}

#[derive(Debug, Clone)]
pub struct Claim {
    pub def: ClaimDef,
    pub locus: String,
    pub expected: Expected,
}

impl Claim {
    pub fn id(&self) -> &'static str {
        self.def.id
    }

    /// The largest constant the claim names, if any.
    fn largest_constant(&self) -> u64 {
        match &self.expected {
            Expected::Exceptions(v) | Expected::UniqueSubset(v) => v.last().copied().unwrap_or(0),
            Expected::Threshold { bound, .. } => *bound,
            Expected::Sweep | Expected::Observe => 0,
        }
    }

    /// Smallest limit at which the claim can be decided.
    pub fn min_limit(&self) -> Result<u64> {
        if let CheckDef::Sweep { theorem, params } = self.def.check {
            return Ok(least_n(theorem, params)? as u64);
        }
        let c = self.largest_constant();
        Ok(if self.def.conjecture {
            c + c / 2
        } else {
            c + c / 4
        }
        .max(100))
    }

    pub fn default_limit(&self) -> Result<u64> {
        if let CheckDef::Sweep { .. } = self.def.check {
            return Ok(self.min_limit()? + SWEEP_SPAN);
        }
        let base = if self.def.conjecture {
            CONJECTURE_LIMIT
        } else {
            DEFAULT_LIMIT
        };
        Ok(base.max(self.min_limit()?))
    }
}

fn merge(def: ClaimDef, g: GoldenEntry) -> Result<Claim> {
    let bad = |why: &str| Error::Format(format!("claims.toml entry {}: {why}", g.id));
    if g.kind != def.kind() {
        return Err(bad(&format!(
            "kind {:?} but the registry says {:?}",
            g.kind,
            def.kind()
        )));
    }
    if def.conjecture && g.check.as_deref() != Some(def.check_name()) {
        return Err(bad(&format!(
            "check {:?} but the registry says {:?}",
            g.check,
            def.check_name()
        )));
    }
    let expected = match &def.check {
        CheckDef::Exceptions => Expected::Exceptions(
            g.exceptions
                .clone()
                .ok_or_else(|| bad("missing exceptions"))?,
        ),
        CheckDef::Threshold => Expected::Threshold {
            bound: g.bound.ok_or_else(|| bad("missing bound"))?,
            sharp: g.sharp.ok_or_else(|| bad("missing sharp"))?,
        },
        CheckDef::Sweep { .. } => Expected::Sweep,
        CheckDef::Uniqueness { .. } => {
            Expected::UniqueSubset(g.unique.clone().ok_or_else(|| bad("missing unique"))?)
        }
        CheckDef::MultiplesOfFour | CheckDef::Probe => Expected::Observe,
    };
    if let Expected::Exceptions(v) | Expected::UniqueSubset(v) = &expected {
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("expected list must be strictly increasing"));
        }
    }
    Ok(Claim {
        def,
        locus: g.locus,
        expected,
    })
}

/// Registry and golden data merged, checking that they list the same ids in the same order.
pub fn claims() -> Result<Vec<Claim>> {
    let defs = registry();
    let gold = golden()?;
    if defs.len() != gold.len() {
        return Err(Error::Format(format!(
            "registry has {} claims, claims.toml has {}",
            defs.len(),
            gold.len()
        )));
    }
    defs.into_iter()
        .zip(gold)
        .map(|(d, g)| {
            if d.id != g.id {
                return Err(Error::Format(format!(
                    "registry id {} does not match claims.toml id {}",
                    d.id, g.id
                )));
            }
            merge(d, g)
        })
        .collect()
}

pub fn find_claim(id: &str) -> Result<Claim> {
    claims()?
        .into_iter()
        .find(|c| c.id() == id)
        .ok_or_else(|| Error::UnknownClaim(id.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Confirmed,
    Refuted,
    Inconclusive,
    /// Conjectures: no contradiction up to the limit.
    Consistent,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Confirmed => "confirmed",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Consistent => "consistent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    pub n: u64,
    pub tuple: Vec<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptions: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_exception: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable_tail: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample_tuple: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub swept: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unique: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub missing_multiples_of_4: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Sample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub verdict: Verdict,
    pub limit: u64,
    pub evidence: Evidence,
    pub paper_locus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl Report {
    /// The same report with the wall time dropped, for byte-stable output.
    pub fn without_timing(mut self) -> Self {
        self.wall_ms = None;
        self
    }
}

/// Verifies `id` at `limit` (its default limit if `None`).
pub fn verify_claim(id: &str, limit: Option<u64>) -> Result<Report> {
    run_claim(&find_claim(id)?, limit)
}

/// Verifies one claim. Fails if `limit` is below the claim's minimum.
pub fn run_claim(claim: &Claim, limit: Option<u64>) -> Result<Report> {
    let start = Instant::now();
    let min = claim.min_limit()?;
    let limit = match limit {
        Some(l) if l < min => {
            return Err(Error::LimitTooSmall {
                id: claim.id().to_string(),
                limit: l,
                min,
            })
        }
        Some(l) => l,
        None => claim.default_limit()?,
    };
    let (verdict, evidence) = evaluate(claim, limit)?;
    Ok(Report {
        id: claim.id().to_string(),
        verdict,
        limit,
        evidence,
        paper_locus: claim.locus.clone(),
        wall_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Verifies every claim selected by `filter`, in parallel, in registry order.
///
/// With an explicit `limit`, claims whose minimum exceeds it are reported
/// inconclusive instead of failing the whole run.
pub fn verify_all(
    limit: Option<u64>,
    filter: impl Fn(&Claim) -> bool + Sync,
) -> Result<Vec<Report>> {
    let claims: Vec<Claim> = claims()?.into_iter().filter(|c| filter(c)).collect();
    claims
        .par_iter()
        .map(|c| match run_claim(c, limit) {
            Err(Error::LimitTooSmall { limit, min, .. }) => Ok(Report {
                id: c.id().to_string(),
                verdict: Verdict::Inconclusive,
                limit,
                evidence: Evidence {
                    note: Some(format!("limit below the claim's minimum {min}")),
                    ..Default::default()
                },
                paper_locus: c.locus.clone(),
                wall_ms: Some(0),
            }),
            other => other,
        })
        .collect()
}

fn restricted_exceptions(set: &RepSet, restrict: Restriction) -> Vec<u64> {
    set.exceptions()
        .into_iter()
        .filter(|&n| restrict.admits(n))
        .collect()
}

fn tail_start(limit: u64) -> u64 {
    limit - limit / 5
}

fn seed_for(id: &str) -> u64 {
    id.bytes()
        .fold(0x517c_c1b7_2722_0a95_u64, |h, b| {
            h.rotate_left(5) ^ b as u64
        })
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Re-derives `SAMPLES` random representable integers by explicit search.
fn samples(claim: &Claim, set: &RepSet) -> Result<std::result::Result<Vec<Sample>, u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed_for(claim.id()));
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < SAMPLES && tries < 10_000 {
        tries += 1;
        let n = rng.gen_range(0..=set.limit());
        if !set.contains(n) || !claim.def.restrict.admits(n) {
            continue;
        }
        match find_tuple(&claim.def.problem, n)? {
            Some(tuple) => out.push(Sample { n, tuple }),
            None => return Ok(Err(n)),
        }
    }
    Ok(Ok(out))
}

fn tuple_for(problem: &RepProblem, n: u64) -> Result<Option<Vec<i64>>> {
    find_tuple(problem, n)
}

fn confirm(claim: &Claim) -> Verdict {
    if claim.def.conjecture {
        Verdict::Consistent
    } else {
        Verdict::Confirmed
    }
}

fn evaluate(claim: &Claim, limit: u64) -> Result<(Verdict, Evidence)> {
    match (&claim.def.check, &claim.expected) {
        (CheckDef::Exceptions, Expected::Exceptions(expected)) => {
            check_exceptions(claim, limit, expected)
        }
        (CheckDef::Threshold, Expected::Threshold { bound, sharp }) => {
            check_threshold(claim, limit, *bound, *sharp)
        }
        (CheckDef::Sweep { theorem, params }, _) => check_sweep(claim, limit, *theorem, *params),
        (CheckDef::Uniqueness { diagonal }, Expected::UniqueSubset(expected)) => {
            check_uniqueness(claim, limit, diagonal, expected)
        }
        (CheckDef::MultiplesOfFour, _) => {
            let set = sieve_representable(&claim.def.problem, limit)?;
            let missing: Vec<u64> = set
                .exceptions()
                .into_iter()
                .filter(|n| n % 4 == 0 && *n > 0)
                .collect();
            let upper = missing.iter().filter(|&&n| n > limit / 2).count();
            let ev = Evidence {
                max_exception: missing.last().copied(),
                missing_multiples_of_4: Some(missing.len() as u64),
                note: Some(format!(
                    "{} missing positive multiples of 4 up to {limit}, {upper} of them above {}; infinitude cannot be decided by sieving",
                    missing.len(),
                    limit / 2
                )),
                exceptions: Some(missing.into_iter().take(20).collect()),
                ..Default::default()
            };
            Ok((Verdict::Inconclusive, ev))
        }
        (CheckDef::Probe, _) => {
            let set = sieve_representable(&claim.def.problem, limit)?;
            let exc = restricted_exceptions(&set, claim.def.restrict);
            let max = exc.last().copied();
            let stable = max.is_none_or(|m| m < tail_start(limit));
            let ev = Evidence {
                max_exception: max,
                stable_tail: Some(stable),
                note: Some(format!("{} admissible exceptions up to {limit}", exc.len())),
                ..Default::default()
            };
            Ok((
                if stable {
                    Verdict::Consistent
                } else {
                    Verdict::Inconclusive
                },
                ev,
            ))
        }
        (check, exp) => Err(Error::Format(format!(
            "claim {}: check {check:?} does not fit {exp:?}",
            claim.id()
        ))),
    }
}

fn check_exceptions(claim: &Claim, limit: u64, expected: &[u64]) -> Result<(Verdict, Evidence)> {
    let set = sieve_representable(&claim.def.problem, limit)?;
    let exc = restricted_exceptions(&set, claim.def.restrict);
    let stable = exc.last().is_none_or(|&m| m < tail_start(limit));
    let mut ev = Evidence {
        max_exception: exc.last().copied(),
        stable_tail: Some(stable),
        exceptions: Some(exc.clone()),
        ..Default::default()
    };
    let want: BTreeSet<u64> = expected.iter().copied().collect();
    let got: BTreeSet<u64> = exc.iter().copied().collect();
    if let Some(&n) = want.symmetric_difference(&got).next() {
        ev.counterexample = Some(n);
        if set.contains(n) {
            ev.counterexample_tuple = tuple_for(&claim.def.problem, n)?;
            ev.note = Some(format!(
                "{n} is listed as an exception but is representable"
            ));
        } else {
            ev.note = Some(format!("{n} is not representable but is not listed"));
        }
        return Ok((Verdict::Refuted, ev));
    }
    if !stable {
        ev.note = Some("exceptions reach the top fifth of the range".into());
        return Ok((Verdict::Inconclusive, ev));
    }
    match samples(claim, &set)? {
        Ok(s) => ev.samples = s,
        Err(n) => {
            return Err(Error::Contradiction(format!(
                "{}: sieve marks {n} representable, search finds no tuple",
                claim.id()
            )))
        }
    }
    Ok((confirm(claim), ev))
}

fn check_threshold(
    claim: &Claim,
    limit: u64,
    bound: u64,
    sharp: bool,
) -> Result<(Verdict, Evidence)> {
    let set = sieve_representable(&claim.def.problem, limit)?;
    let exc = restricted_exceptions(&set, claim.def.restrict);
    let max = exc.last().copied();
    let mut ev = Evidence {
        max_exception: max,
        stable_tail: Some(max.is_none_or(|m| m < tail_start(limit))),
        ..Default::default()
    };
    if let Some(&n) = exc.iter().find(|&&n| n > bound) {
        ev.counterexample = Some(n);
        ev.note = Some(format!("{n} > {bound} is not representable"));
        return Ok((Verdict::Refuted, ev));
    }
    if sharp && set.contains(bound) {
        ev.counterexample = Some(bound);
        ev.counterexample_tuple = tuple_for(&claim.def.problem, bound)?;
        ev.note = Some(format!(
            "{bound} was expected to be the largest exception but is representable"
        ));
        return Ok((Verdict::Refuted, ev));
    }
    match samples(claim, &set)? {
        Ok(s) => ev.samples = s,
        Err(n) => {
            return Err(Error::Contradiction(format!(
                "{}: sieve marks {n} representable, search finds no tuple",
                claim.id()
            )))
        }
    }
    Ok((confirm(claim), ev))
}

fn check_sweep(
    claim: &Claim,
    limit: u64,
    theorem: crate::bound::TheoremId,
    params: crate::form::FormParams,
) -> Result<(Verdict, Evidence)> {
    let lo = least_n(theorem, params)?;
    let hi = i64::try_from(limit).map_err(|_| Error::Overflow("limit"))?;
    let set = sieve_representable(&claim.def.problem, limit)?;
    let ns: Vec<i64> = (lo..=hi)
        .filter(|&n| admits(theorem, params, n).unwrap_or(false))
        .collect();
    let failures: Vec<(i64, String)> = ns
        .par_iter()
        .filter_map(|&n| match construct_for(theorem, params, n) {
            Ok(t) if t.check().is_ok() && (t.replay() == Ok(t.witness)) => (!set
                .contains(n as u64))
            .then(|| (n, "sieve disagrees with the witness".to_string())),
            Ok(_) => Some((n, "trace does not replay".to_string())),
            Err(e) => Some((n, e.to_string())),
        })
        .collect();
    let mut ev = Evidence {
        swept: Some([lo as u64, limit]),
        witnesses: Some(ns.len() as u64),
        ..Default::default()
    };
    if let Some((n, why)) = failures.into_iter().min_by_key(|f| f.0) {
        ev.counterexample = Some(n as u64);
        ev.note = Some(why);
        return Ok((Verdict::Refuted, ev));
    }
    Ok((Verdict::Confirmed, ev))
}

fn check_uniqueness(
    claim: &Claim,
    limit: u64,
    diagonal: &RepProblem,
    expected: &[u64],
) -> Result<(Verdict, Evidence)> {
    let ordered = count_all(&claim.def.problem, limit)?;
    let diag = count_all(diagonal, limit)?;
    let unique: Vec<u64> = (0..=limit)
        .filter(|&n| (ordered[n as usize] + diag[n as usize]) / 2 == 1)
        .collect();
    let want: BTreeSet<u64> = expected.iter().copied().collect();
    let mut ev = Evidence {
        unique: Some(unique.clone()),
        ..Default::default()
    };
    if let Some(&n) = unique.iter().find(|n| !want.contains(n)) {
        ev.counterexample = Some(n);
        ev.counterexample_tuple = tuple_for(&claim.def.problem, n)?;
        ev.note = Some(format!(
            "{n} has exactly one representation with y <= z but is not listed"
        ));
        return Ok((Verdict::Refuted, ev));
    }
    Ok((Verdict::Consistent, ev))
}

/// One CSV line per report: `id,verdict,limit,max_exception,counterexample,wall_ms,paper_locus`.
pub fn csv_header() -> [&'static str; 7] {
    [
        "id",
        "verdict",
        "limit",
        "max_exception",
        "counterexample",
        "wall_ms",
        "paper_locus",
    ]
}

pub fn csv_row(r: &Report) -> [String; 7] {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    [
        r.id.clone(),
        r.verdict.to_string(),
        r.limit.to_string(),
        opt(r.evidence.max_exception),
        opt(r.evidence.counterexample),
        opt(r.wall_ms),
        r.paper_locus.clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_and_golden_agree() {
        let all = claims().unwrap();
        let ids: BTreeSet<_> = all.iter().map(|c| c.id()).collect();
        assert_eq!(ids.len(), all.len(), "duplicate ids");
        for c in &all {
            c.min_limit().unwrap();
        }
    }

    #[test]
    fn small_exception_claim() {
        let r = verify_claim("S_7_1", Some(20_000)).unwrap();
        assert_eq!(r.verdict, Verdict::Confirmed);
        assert_eq!(r.evidence.exceptions, Some(vec![1, 2, 5]));
        assert_eq!(r.evidence.samples.len(), SAMPLES);
    }

    #[test]
    fn unknown_and_too_small() {
        assert!(matches!(
            verify_claim("nope", None),
            Err(Error::UnknownClaim(_))
        ));
        assert!(matches!(
            verify_claim("p5bar_quad", Some(150)),
            Err(Error::LimitTooSmall { .. })
        ));
    }

    #[test]
    fn refutation_carries_counterexample() {
        let mut c = find_claim("S_7_1").unwrap();
        c.expected = Expected::Exceptions(vec![1, 2, 5, 6]);
        let r = run_claim(&c, Some(5_000)).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        assert_eq!(r.evidence.counterexample, Some(6));
        let t = r.evidence.counterexample_tuple.unwrap();
        assert_eq!(c.def.problem.eval(&t).unwrap(), 6);
    }
}
