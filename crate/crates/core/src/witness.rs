//! Constructive witnesses above the theorem thresholds.
//!
//! Each constructor picks a linear sum `d` (or a shift `B`) inside the
//! relevant window and congruence class, derives the matching square sum `c`
//! (or residual `m`), hands it to a solver from [`crate::squares`], and
//! assembles the final tuple. Every step is recorded in a [`WitnessTrace`]
//! so the construction can be replayed and audited.

use serde::{Deserialize, Serialize};

use crate::bound::{admits, TheoremId};
use crate::error::{Error, Result};
use crate::form::{Domain, FormParams, RepProblem, Weighting};
use crate::interval::{interval, IntervalId, IntervalSpec};
use crate::squares::{
    cauchy_solve, cauchy_solve_z, in_e, ks_solve, lem_ms_solve, CauchyPair, KsSolution, Witness,
};

/// Which lemma solver produced the inner tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    Cauchy,
    CauchyZ,
    Weighted3,
}

/// How the final tuple was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `n = a c + b d` with `(c, d)` fed to a prescribed-sum solver.
    PrescribedSum {
        d: i64,
        c: i64,
        solver: Solver,
        inner: Witness,
    },
    /// `n = 5bB + 5aB² + a m` with `m` represented by the ternary form.
    Shifted {
        shift: i64,
        residual: i64,
        delta: Option<i64>,
        inner: KsSolution,
    },
}

/// A replayable record of one witness construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessTrace {
    pub theorem: TheoremId,
    pub problem: RepProblem,
    /// The integer being represented by `problem`.
    pub n: i64,
    /// The target of the underlying unhalved construction (`2n` for halved forms).
    pub inner_n: i64,
    pub case: String,
    pub interval: IntervalSpec,
    /// Proof-internal quantities (`c0`, `d0`, `q`, `r`, ...).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<(String, i64)>,
    pub construction: Construction,
    pub witness: Witness,
}

impl WitnessTrace {
    /// Re-evaluates the final tuple under `problem` and checks the domain.
    pub fn check(&self) -> Result<()> {
        let value = self.problem.eval(&self.witness.tuple())?;
        if value != self.n {
            return Err(Error::Contradiction(format!(
                "witness {:?} evaluates to {value}, expected {}",
                self.witness.tuple(),
                self.n
            )));
        }
        if !self.witness.in_domain()
            || self
                .problem
                .terms()
                .iter()
                .any(|t| t.domain() != self.witness.domain)
        {
            return Err(Error::Contradiction(format!(
                "witness {:?} is outside its domain",
                self.witness
            )));
        }
        Ok(())
    }

    /// Re-runs the recorded solver step and reassembles the tuple.
    pub fn replay(&self) -> Result<Witness> {
        match &self.construction {
            Construction::PrescribedSum { d, c, solver, .. } => {
                let (c, d) = (*c, *d);
                match solver {
                    Solver::Cauchy => cauchy_solve(c, d),
                    Solver::Weighted3 => lem_ms_solve(c, d),
                    Solver::CauchyZ => {
                        let w = cauchy_solve_z(c, d.abs())?;
                        Ok(if d < 0 { negate(w) } else { w })
                    }
                }
            }
            Construction::Shifted {
                shift, residual, ..
            } => Ok(shift_ks(ks_solve(*residual)?, *shift)),
        }
    }
}

fn negate(w: Witness) -> Witness {
    Witness::new(w.tuple().map(|v| -v), w.domain)
}

fn shift_ks(ks: KsSolution, shift: i64) -> Witness {
    Witness::new(
        [ks.w() + shift, ks.x + shift, ks.y + shift, ks.z + shift],
        Domain::N,
    )
}

fn require(theorem: TheoremId, params: FormParams, n: i64) -> Result<()> {
    theorem.check_hypotheses(params)?;
    if !admits(theorem, params, n)? {
        return Err(Error::Hypothesis(format!(
            "n = {n} is not admissible for {theorem} with (a, b) = {params} (size bound or parity)"
        )));
    }
    Ok(())
}

fn first_in(iv: &IntervalSpec, pred: impl Fn(i64) -> bool) -> Result<Option<i64>> {
    Ok(iv.integers()?.find(|&d| pred(d)))
}

fn no_choice(what: &str, n: i64, params: FormParams, iv: &IntervalSpec) -> Error {
    Error::Contradiction(format!(
        "{what}: no admissible choice in {iv} for n = {n}, (a, b) = {params}"
    ))
}

fn finish(trace: WitnessTrace) -> Result<WitnessTrace> {
    trace.check()?;
    Ok(trace)
}

/// `(case, interval, aux, c, d)` chosen by a construction core.
type CoreChoice = (String, IntervalSpec, Vec<(String, i64)>, i64, i64);

/// Shared body of the unhalved four-term construction on target `target`.
fn unhalved_core(params: FormParams, target: i64) -> Result<CoreChoice> {
    let (a, b) = (params.a(), params.b());
    let iv = interval(IntervalId::I, params, target)?;
    let mut aux = vec![];
    let (case, d) = if (a * b) % 2 != 0 && target % 2 == 0 {
        let d = first_in(&iv, |d| (target - b * d).rem_euclid(2 * a) == a)?
            .ok_or_else(|| no_choice("case 1", target, params, &iv))?;
        if d % 2 == 0 {
            return Err(Error::Contradiction(format!(
                "case 1 produced even d = {d}"
            )));
        }
        ("case 1: 2∤ab, 2|n".to_string(), d)
    } else {
        let label = if a % 2 == 0 && target % 2 != 0 {
            "case 2: 2|a, 2∤n"
        } else {
            "case 2: 2|b, 4∤n"
        };
        let d = first_in(&iv, |d| ((b - a) * d - target).rem_euclid(2 * a) == 0)?
            .ok_or_else(|| no_choice("case 2", target, params, &iv))?;
        aux.push(("c0".to_string(), (target - (b - a) * d) / (2 * a)));
        (label.to_string(), d)
    };
    let c = (target - b * d) / a;
    Ok((case, iv, aux, c, d))
}

fn prescribed(c: i64, d: i64, what: &str) -> Result<Witness> {
    if !CauchyPair::new(c, d).cauchy_ok() {
        return Err(Error::Contradiction(format!(
            "{what}: (c, d) = ({c}, {d}) chosen in the window fails the lemma's preconditions"
        )));
    }
    cauchy_solve(c, d)
}

/// `n = Σ x_i(a x_i + b)` over the naturals, for `n` above the unhalved bound
/// in one of the parity cases `2∤ab, 2|n` / `2|a, 2∤n` / `2|b, 4∤n`.
pub fn witness_unhalved(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Th21, params, n)?;
    let (case, iv, aux, c, d) = unhalved_core(params, n)?;
    let inner = prescribed(c, d, "witness_unhalved")?;
    finish(WitnessTrace {
        theorem: TheoremId::Th21,
        problem: RepProblem::uniform(params, Weighting::Plain, false, Domain::N)?,
        n,
        inner_n: n,
        case,
        interval: iv,
        aux,
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::Cauchy,
            inner,
        },
        witness: inner,
    })
}

/// `n = Σ x_i(a x_i + b)/2` over the naturals for `2∤ab`, via the unhalved
/// construction on `2n`.
pub fn witness_halved(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Th11, params, n)?;
    let target = n.checked_mul(2).ok_or(Error::Overflow("2n"))?;
    let (case, iv, aux, c, d) = unhalved_core(params, target)?;
    let inner = prescribed(c, d, "witness_halved")?;
    finish(WitnessTrace {
        theorem: TheoremId::Th11,
        problem: RepProblem::uniform(params, Weighting::Plain, true, Domain::N)?,
        n,
        inner_n: target,
        case,
        interval: iv,
        aux,
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::Cauchy,
            inner,
        },
        witness: inner,
    })
}

/// Even `n` with `2|a`: `d` in `I` with `n - bd = 2a (mod 4a)`, so `c = 2 (mod 4)`.
pub fn witness_even_quarter(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Th22, params, n)?;
    let (a, b) = (params.a(), params.b());
    let iv = interval(IntervalId::I, params, n)?;
    let d = first_in(&iv, |d| (n - b * d).rem_euclid(4 * a) == 2 * a)?
        .ok_or_else(|| no_choice("witness_even_quarter", n, params, &iv))?;
    let c = (n - b * d) / a;
    if d % 2 != 0 || c.rem_euclid(4) != 2 {
        return Err(Error::Contradiction(format!(
            "even-quarter case produced d = {d}, c = {c}"
        )));
    }
    let inner = prescribed(c, d, "witness_even_quarter")?;
    finish(WitnessTrace {
        theorem: TheoremId::Th22,
        problem: RepProblem::uniform(params, Weighting::Plain, false, Domain::N)?,
        n,
        inner_n: n,
        case: "2|a, 2|n: n-bd ≡ 2a (mod 4a)".into(),
        interval: iv,
        aux: vec![],
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::Cauchy,
            inner,
        },
        witness: inner,
    })
}

/// Picks `δ ∈ {1, -1}` with `4aq + b² + δ` a square mod 5.
fn choose_delta(a: i64, b: i64, q: i64) -> i64 {
    let base = (4 * a * q + b * b).rem_euclid(5);
    [1, -1]
        .into_iter()
        .find(|dl| matches!((base + dl).rem_euclid(5), 0 | 1 | 4))
        .expect("one of base±1 is a square mod 5")
}

fn weighted2_core(
    params: FormParams,
    target: i64,
) -> Result<(IntervalSpec, Construction, Witness, String)> {
    let (a, b) = (params.a(), params.b());
    let iv = interval(IntervalId::J, params, target)?;
    let delta = (target % 5 == 0).then(|| choose_delta(a, b, target / 5));
    let q = target / 5;
    let pick = |shift: i64| {
        if shift < 1 || (5 * (a + b) * shift - target).rem_euclid(2 * a) != 0 {
            return false;
        }
        match delta {
            Some(dl) => {
                let lhs = (2 * a * shift + b).rem_euclid(5).pow(2) % 5;
                lhs == (4 * a * q + b * b + dl).rem_euclid(5)
            }
            None => true,
        }
    };
    let shift =
        first_in(&iv, pick)?.ok_or_else(|| no_choice("witness_weighted2", target, params, &iv))?;
    let rest = target - 5 * b * shift;
    if rest % a != 0 {
        return Err(Error::Contradiction(format!("a ∤ n - 5bB for B = {shift}")));
    }
    let residual = rest / a - 5 * shift * shift;
    if residual < 0 || residual > shift * shift || residual % 2 != 0 || in_e(residual) {
        return Err(Error::Contradiction(format!(
            "residual {residual} for B = {shift} is not an even element of [0, B²] outside E"
        )));
    }
    let inner = ks_solve(residual)?;
    let wit = shift_ks(inner, shift);
    let case = match delta {
        Some(_) => "5|n: δ-twisted residue for B".to_string(),
        None => "5∤n".to_string(),
    };
    Ok((
        iv,
        Construction::Shifted {
            shift,
            residual,
            delta,
            inner,
        },
        wit,
        case,
    ))
}

/// `n = 2w(aw+b) + x(ax+b) + y(ay+b) + z(az+b)` over the naturals.
pub fn witness_weighted2(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Th2, params, n)?;
    let (iv, construction, witness, case) = weighted2_core(params, n)?;
    finish(WitnessTrace {
        theorem: TheoremId::Th2,
        problem: RepProblem::uniform(params, Weighting::Double, false, Domain::N)?,
        n,
        inner_n: n,
        case,
        interval: iv,
        aux: vec![],
        construction,
        witness,
    })
}

/// `n = w(aw+b) + Σ x(ax+b)/2` over the naturals for `2∤ab`, via `2n`.
pub fn witness_weighted2_halved(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Cor2, params, n)?;
    let target = n.checked_mul(2).ok_or(Error::Overflow("2n"))?;
    let (iv, construction, witness, case) = weighted2_core(params, target)?;
    finish(WitnessTrace {
        theorem: TheoremId::Cor2,
        problem: RepProblem::uniform(params, Weighting::Double, true, Domain::N)?,
        n,
        inner_n: target,
        case,
        interval: iv,
        aux: vec![],
        construction,
        witness,
    })
}

fn weighted3_core(params: FormParams, target: i64) -> Result<CoreChoice> {
    let (a, b) = (params.a(), params.b());
    let iv = interval(IntervalId::K, params, target)?;
    let mut aux = vec![];
    let (case, d) = if a % 3 != 0 || target % 3 != 0 {
        let d0 = first_in(&iv, |d| ((b - a) * d - target).rem_euclid(2 * a) == 0)?
            .ok_or_else(|| no_choice("case 1", target, params, &iv))?;
        aux.push(("d0".to_string(), d0));
        let d = if a % 3 != 0 && d0 % 3 == 0 {
            d0 + 2 * a
        } else {
            d0
        };
        if d % 3 == 0 {
            return Err(Error::Contradiction(format!("case 1 left 3 | d = {d}")));
        }
        ("case 1: 3∤a or 3∤n".to_string(), d)
    } else {
        let d0 = first_in(&iv, |d| ((b - a) * d - target).rem_euclid(6 * a) == 0)?
            .ok_or_else(|| no_choice("case 2", target, params, &iv))?;
        if d0 % 3 != 0 {
            return Err(Error::Contradiction(format!(
                "case 2 produced 3 ∤ d0 = {d0}"
            )));
        }
        let q = ((target - b * d0) / a + d0) / 6;
        let r = (q + 1 + d0 / 3).rem_euclid(3);
        aux.extend([
            ("d0".to_string(), d0),
            ("q".to_string(), q),
            ("r".to_string(), r),
        ]);
        ("case 2: 3|a, 3|n".to_string(), d0 + 6 * a * r)
    };
    if !iv.contains(d) {
        return Err(Error::Contradiction(format!(
            "chosen d = {d} left the window {iv}"
        )));
    }
    let c = (target - b * d) / a;
    if d % 3 == 0 && c.rem_euclid(9) != 3 {
        return Err(Error::Contradiction(format!(
            "3 | d = {d} but c = {c} ≢ 3 (mod 9)"
        )));
    }
    Ok((case, iv, aux, c, d))
}

fn weighted3_inner(c: i64, d: i64) -> Result<Witness> {
    if !CauchyPair::new(c, d).weighted_ok() {
        return Err(Error::Contradiction(format!(
            "(c, d) = ({c}, {d}) chosen in K fails the weighted solver's preconditions"
        )));
    }
    lem_ms_solve(c, d)
}

/// `n = 3w(aw+b) + x(ax+b) + y(ay+b) + z(az+b)` over the naturals.
pub fn witness_weighted3(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Th3, params, n)?;
    let (case, iv, aux, c, d) = weighted3_core(params, n)?;
    let inner = weighted3_inner(c, d)?;
    finish(WitnessTrace {
        theorem: TheoremId::Th3,
        problem: RepProblem::uniform(params, Weighting::Triple, false, Domain::N)?,
        n,
        inner_n: n,
        case,
        interval: iv,
        aux,
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::Weighted3,
            inner,
        },
        witness: inner,
    })
}

/// `n = 3w(aw+b)/2 + Σ x(ax+b)/2` over the naturals for odd `a, b`, via `2n`.
pub fn witness_weighted3_halved(params: FormParams, n: i64) -> Result<WitnessTrace> {
    require(TheoremId::Cor19, params, n)?;
    let target = n.checked_mul(2).ok_or(Error::Overflow("2n"))?;
    let (case, iv, aux, c, d) = weighted3_core(params, target)?;
    let inner = weighted3_inner(c, d)?;
    finish(WitnessTrace {
        theorem: TheoremId::Cor19,
        problem: RepProblem::uniform(params, Weighting::Triple, true, Domain::N)?,
        n,
        inner_n: target,
        case,
        interval: iv,
        aux,
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::Weighted3,
            inner,
        },
        witness: inner,
    })
}

/// The integer-variable theorem that applies to `(params, halved, n)`.
pub fn integer_theorem(params: FormParams, halved: bool, n: i64) -> TheoremId {
    if halved {
        TheoremId::Th51
    } else if params.a() % 2 == 0 {
        if n % 2 == 0 {
            TheoremId::Th52EvenAEvenN
        } else {
            TheoremId::Th52EvenAOddN
        }
    } else {
        TheoremId::Th52EvenB
    }
}

/// Four integer-variable terms summing to `n`.
///
/// `d` runs upward from 0 below the upper endpoint of `I` (the only
/// constraint the integer solver needs is `4c > d²`), in the congruence
/// class that makes `4 ∤ c` and `c ≡ d (mod 2)`:
///
/// * halved, `a, b` odd: `2n - bd ≡ a (mod 2a)`, so `c` is odd;
/// * `2|a`, `n` odd, or `2|b`: `(b - a)d ≡ n (mod 2a)`;
/// * `2|a`, `n` even: `n - bd ≡ 2a (mod 4a)`, so `c ≡ 2 (mod 4)`.
pub fn witness_integers(params: FormParams, halved: bool, n: i64) -> Result<WitnessTrace> {
    let theorem = integer_theorem(params, halved, n);
    require(theorem, params, n)?;
    let (a, b) = (params.a(), params.b());
    let target = if halved {
        n.checked_mul(2).ok_or(Error::Overflow("2n"))?
    } else {
        n
    };
    let full = interval(IntervalId::I, params, target)?;
    let window = IntervalSpec {
        lo: crate::bound::RealBound::integer(0),
        hi: full.hi,
        lo_open: false,
        hi_open: true,
    };
    let (case, class): (&str, Box<dyn Fn(i64) -> bool>) = match theorem {
        TheoremId::Th51 => (
            "2∤ab: 2n - bd ≡ a (mod 2a)",
            Box::new(move |d| (target - b * d).rem_euclid(2 * a) == a),
        ),
        TheoremId::Th52EvenAEvenN => (
            "2|a, 2|n: n - bd ≡ 2a (mod 4a)",
            Box::new(move |d| (target - b * d).rem_euclid(4 * a) == 2 * a),
        ),
        _ => (
            "(b - a)d ≡ n (mod 2a)",
            Box::new(move |d| ((b - a) * d - target).rem_euclid(2 * a) == 0),
        ),
    };
    let d = first_in(&window, |d| {
        class(d)
            && (target - b * d) % a == 0
            && CauchyPair::new((target - b * d) / a, d).cauchy_z_ok()
    })?
    .ok_or_else(|| no_choice("witness_integers", target, params, &window))?;
    let c = (target - b * d) / a;
    let inner = cauchy_solve_z(c, d)?;
    finish(WitnessTrace {
        theorem,
        problem: RepProblem::uniform(params, Weighting::Plain, halved, Domain::Z)?,
        n,
        inner_n: target,
        case: case.to_string(),
        interval: window,
        aux: vec![],
        construction: Construction::PrescribedSum {
            d,
            c,
            solver: Solver::CauchyZ,
            inner,
        },
        witness: inner,
    })
}

/// The problem whose representations theorem `theorem` constructs.
pub fn theorem_problem(theorem: TheoremId, params: FormParams) -> Result<RepProblem> {
    use TheoremId::*;
    let (w, halved, domain) = match theorem {
        Th11 => (Weighting::Plain, true, Domain::N),
        Th12Odd | Th12EvenQuarter | Th13 | Th21 | Th22 => (Weighting::Plain, false, Domain::N),
        Th2 => (Weighting::Double, false, Domain::N),
        Cor2 => (Weighting::Double, true, Domain::N),
        Th3 => (Weighting::Triple, false, Domain::N),
        Cor19 => (Weighting::Triple, true, Domain::N),
        Th51 => (Weighting::Plain, true, Domain::Z),
        Th52EvenAEvenN | Th52EvenAOddN | Th52EvenB => (Weighting::Plain, false, Domain::Z),
    };
    RepProblem::uniform(params, w, halved, domain)
}

/// Runs the constructor belonging to `theorem`.
pub fn construct_for(theorem: TheoremId, params: FormParams, n: i64) -> Result<WitnessTrace> {
    use TheoremId::*;
    let trace = match theorem {
        Th11 => witness_halved(params, n),
        Th12Odd | Th13 | Th21 => witness_unhalved(params, n),
        Th12EvenQuarter | Th22 => witness_even_quarter(params, n),
        Th2 => witness_weighted2(params, n),
        Cor2 => witness_weighted2_halved(params, n),
        Th3 => witness_weighted3(params, n),
        Cor19 => witness_weighted3_halved(params, n),
        Th51 => witness_integers(params, true, n),
        Th52EvenAEvenN | Th52EvenAOddN | Th52EvenB => {
            if integer_theorem(params, false, n) != theorem {
                return Err(Error::Hypothesis(format!(
                    "n = {n} does not fall under {theorem}"
                )));
            }
            witness_integers(params, false, n)
        }
    }?;
    Ok(trace)
}

/// Dispatches to the constructor matching a four-term uniform problem.
pub fn construct(problem: &RepProblem, n: i64) -> Result<WitnessTrace> {
    let (params, weighting, halved, domain) = problem
        .uniform_shape()
        .ok_or_else(|| Error::Precondition(format!("no constructor for the problem {problem}")))?;
    match (weighting, halved, domain) {
        (Weighting::Plain, _, Domain::Z) => witness_integers(params, halved, n),
        (Weighting::Plain, true, Domain::N) => witness_halved(params, n),
        (Weighting::Plain, false, Domain::N) if params.a() % 2 == 0 && n % 2 == 0 => {
            witness_even_quarter(params, n)
        }
        (Weighting::Plain, false, Domain::N) => witness_unhalved(params, n),
        (Weighting::Double, false, Domain::N) => witness_weighted2(params, n),
        (Weighting::Double, true, Domain::N) => witness_weighted2_halved(params, n),
        (Weighting::Triple, false, Domain::N) => witness_weighted3(params, n),
        (Weighting::Triple, true, Domain::N) => witness_weighted3_halved(params, n),
        _ => Err(Error::Precondition(format!(
            "no constructor for the problem {problem}"
        ))),
    }
}
