//! Executable side of the claim registry: which problem each claim is about.
//! Expected values live in `data/claims.toml` and are merged in by id.

use crate::bound::TheoremId;
use crate::error::Result;
use crate::form::{Domain, FormParams, RepProblem, Term, Weighting};
use crate::witness::theorem_problem;

/// Extra filter applied to the integers a claim talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    All,
    NotDivisibleBy4,
    Even,
}

impl Restriction {
    pub fn admits(&self, n: u64) -> bool {
        match self {
            Restriction::All => true,
            Restriction::NotDivisibleBy4 => !n.is_multiple_of(4),
            Restriction::Even => n.is_multiple_of(2),
        }
    }
}

/// What the registry does with a claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckDef {
    Exceptions,
    Threshold,
    Sweep {
        theorem: TheoremId,
        params: FormParams,
    },
    /// Unordered (`y <= z`) uniqueness for `x f1 + y f2 + z f2`; the second
    /// problem counts the diagonal `y = z`.
    Uniqueness {
        diagonal: RepProblem,
    },
    MultiplesOfFour,
    Probe,
}

#[derive(Debug, Clone)]
pub struct ClaimDef {
    pub id: &'static str,
    pub conjecture: bool,
    pub problem: RepProblem,
    pub restrict: Restriction,
    pub check: CheckDef,
}

impl ClaimDef {
    /// The `kind` string the golden file must carry.
    pub fn kind(&self) -> &'static str {
        match (&self.check, self.conjecture) {
            (_, true) => "conjecture",
            (CheckDef::Exceptions, false) => "exception-set",
            (CheckDef::Threshold, false) => "threshold",
            (CheckDef::Sweep { .. }, false) => "witness-sweep",
            _ => "conjecture",
        }
    }

    /// The `check` string the golden file carries for conjectures.
    pub fn check_name(&self) -> &'static str {
        match self.check {
            CheckDef::Exceptions => "exceptions",
            CheckDef::Threshold => "threshold",
            CheckDef::Sweep { .. } => "witness-sweep",
            CheckDef::Uniqueness { .. } => "uniqueness",
            CheckDef::MultiplesOfFour => "multiples-of-four",
            CheckDef::Probe => "probe",
        }
    }
}

fn p(a: i64, b: i64) -> FormParams {
    FormParams::new(a, b).expect("registry parameters are valid")
}

fn uni(a: i64, b: i64, w: Weighting, halved: bool, domain: Domain) -> RepProblem {
    RepProblem::uniform(p(a, b), w, halved, domain).expect("registry problems are valid")
}

fn term(a: i64, b: i64, coeff: i64, halved: bool, domain: Domain) -> Term {
    Term::new(p(a, b), coeff, halved, domain).expect("registry terms are valid")
}

fn mixed(terms: &[Term]) -> RepProblem {
    RepProblem::new(terms.to_vec()).expect("registry problems are valid")
}

fn three(a: i64, b: i64, halved: bool, domain: Domain) -> RepProblem {
    RepProblem::repeated(term(a, b, 1, halved, domain), 3).expect("registry problems are valid")
}

struct Builder(Vec<ClaimDef>);

impl Builder {
    fn add(
        &mut self,
        id: &'static str,
        problem: RepProblem,
        restrict: Restriction,
        check: CheckDef,
    ) {
        self.0.push(ClaimDef {
            id,
            conjecture: false,
            problem,
            restrict,
            check,
        });
    }

    fn conj(
        &mut self,
        id: &'static str,
        problem: RepProblem,
        restrict: Restriction,
        check: CheckDef,
    ) {
        self.0.push(ClaimDef {
            id,
            conjecture: true,
            problem,
            restrict,
            check,
        });
    }

    fn sweep(&mut self, id: &'static str, theorem: TheoremId, a: i64, b: i64) -> Result<()> {
        let params = p(a, b);
        let problem = theorem_problem(theorem, params)?;
        self.add(
            id,
            problem,
            Restriction::All,
            CheckDef::Sweep { theorem, params },
        );
        Ok(())
    }
}

/// Every registered claim, in golden-file order.
pub fn registry() -> Vec<ClaimDef> {
    use Domain::{N, Z};
    use Restriction::*;
    use Weighting::*;
    let mut r = Builder(Vec::new());
    let ex = || CheckDef::Exceptions;
    let th = || CheckDef::Threshold;

    // p̄5 = (3,1)/2, p5 = (3,-1)/2, p̄7 = (5,3)/2, p7 = (5,-3)/2, p9 = (7,-5)/2, p10 = (8,-6)/2
    r.add("p5bar_quad", uni(3, 1, Plain, true, N), All, ex());
    r.add("p5_quad", uni(3, -1, Plain, true, N), All, ex());
    r.add("S_5_1", uni(5, 1, Plain, true, Z), All, ex());
    for (id, b) in [("S_7_1", 1), ("S_7_3", 3), ("S_7_5", 5)] {
        r.add(id, uni(7, b, Plain, true, Z), All, ex());
    }
    for (id, b) in [("S_9_1", 1), ("S_9_5", 5), ("S_9_7", 7)] {
        r.add(id, uni(9, b, Plain, true, Z), All, ex());
    }
    r.add("T_4_1", uni(4, 1, Plain, false, Z), All, ex());
    r.add(
        "T_5_2_not_div_4",
        uni(5, 2, Plain, false, Z),
        NotDivisibleBy4,
        ex(),
    );
    r.add(
        "T_5_4_not_div_4",
        uni(5, 4, Plain, false, Z),
        NotDivisibleBy4,
        ex(),
    );
    r.add("weighted2_p5bar", uni(3, 1, Double, true, N), All, ex());
    r.add("weighted2_2_m1", uni(2, -1, Double, false, N), All, ex());
    r.add("weighted3_p5bar", uni(3, 1, Triple, true, N), All, ex());
    r.add("weighted3_5_1_z", uni(5, 1, Triple, true, Z), All, ex());
    r.add("weighted3_7_1_z", uni(7, 1, Triple, true, Z), All, ex());
    r.add("weighted3_7_3_z", uni(7, 3, Triple, true, Z), All, ex());
    r.add("weighted3_4_1_z", uni(4, 1, Triple, false, Z), All, ex());
    r.add("T_4_3", uni(4, 3, Plain, false, Z), All, ex());
    r.add("T_3_2", uni(3, 2, Plain, false, Z), All, ex());
    r.add("weighted2_p5", uni(3, -1, Double, true, N), All, ex());
    r.add("weighted3_p7", uni(5, -3, Triple, true, N), All, ex());
    r.add("weighted3_p9_z", uni(7, -5, Triple, true, Z), All, ex());
    r.add("weighted3_p10_z", uni(8, -6, Triple, true, Z), All, ex());

    r.add("quad_5_1", uni(5, 1, Plain, true, N), All, th());
    r.add("quad_5_m1", uni(5, -1, Plain, true, N), All, th());
    r.add("p7bar_quad", uni(5, 3, Plain, true, N), All, th());
    r.add("p7_quad", uni(5, -3, Plain, true, N), All, th());
    r.add("T_6_1_max_exception", uni(6, 1, Plain, false, Z), All, th());
    r.add("T_6_5_max_exception", uni(6, 5, Plain, false, Z), All, th());
    r.add("quad_4_1_N", uni(4, 1, Plain, false, N), All, th());
    r.add("quad_4_m1_N", uni(4, -1, Plain, false, N), All, th());
    r.add("weighted2_2_1", uni(2, 1, Double, false, N), All, th());
    r.add("weighted3_5_m1", uni(5, -1, Triple, true, N), All, th());
    r.add("weighted3_5_1", uni(5, 1, Triple, true, N), All, th());
    r.add("weighted3_4_m1", uni(4, -1, Triple, false, N), All, th());
    r.add("weighted3_4_1", uni(4, 1, Triple, false, N), All, th());

    use TheoremId::*;
    let sweeps: [(&'static str, TheoremId, i64, i64); 30] = [
        ("sweep_th1.1_5_1", Th11, 5, 1),
        ("sweep_th1.1_3_1", Th11, 3, 1),
        ("sweep_th1.1_1_1", Th11, 1, 1),
        ("sweep_th2.1_5_1", Th21, 5, 1),
        ("sweep_th2.1_2_1", Th21, 2, 1),
        ("sweep_th2.1_2_m1", Th21, 2, -1),
        ("sweep_th2.1_1_2", Th21, 1, 2),
        ("sweep_th2.2_2_1", Th22, 2, 1),
        ("sweep_th2.2_2_m1", Th22, 2, -1),
        ("sweep_th2_1_1", Th2, 1, 1),
        ("sweep_th2_1_2", Th2, 1, 2),
        ("sweep_th2_2_1", Th2, 2, 1),
        ("sweep_th2_2_m1", Th2, 2, -1),
        ("sweep_th2_3_1", Th2, 3, 1),
        ("sweep_cor2_3_1", Cor2, 3, 1),
        ("sweep_cor2_1_1", Cor2, 1, 1),
        ("sweep_th3_1_1", Th3, 1, 1),
        ("sweep_th3_3_1", Th3, 3, 1),
        ("sweep_th3_5_1", Th3, 5, 1),
        ("sweep_th3_2_1", Th3, 2, 1),
        ("sweep_th3_1_2", Th3, 1, 2),
        ("sweep_th3_2_m1", Th3, 2, -1),
        ("sweep_cor1.9_5_1", Cor19, 5, 1),
        ("sweep_cor1.9_3_1", Cor19, 3, 1),
        ("sweep_cor1.9_1_1", Cor19, 1, 1),
        ("sweep_th5.1_5_1", Th51, 5, 1),
        ("sweep_th5.1_3_1", Th51, 3, 1),
        ("sweep_th5.2i-even_2_1", Th52EvenAEvenN, 2, 1),
        ("sweep_th5.2i-odd_2_1", Th52EvenAOddN, 2, 1),
        ("sweep_th5.2ii_3_2", Th52EvenB, 3, 2),
    ];
    for (id, theorem, a, b) in sweeps {
        r.sweep(id, theorem, a, b)
            .expect("registry sweeps satisfy their hypotheses");
    }

    r.conj(
        "conj_mult4_5_2",
        uni(5, 2, Plain, false, Z),
        All,
        CheckDef::MultiplesOfFour,
    );
    r.conj(
        "conj_mult4_5_4",
        uni(5, 4, Plain, false, Z),
        All,
        CheckDef::MultiplesOfFour,
    );
    r.conj("conj_three_p5", three(3, -1, true, N), All, th());
    r.conj("conj_three_p5bar", three(3, 1, true, N), All, th());
    r.conj("conj_three_p6", three(4, -2, true, N), All, th());
    r.conj("conj_three_p6bar", three(4, 2, true, N), All, th());
    let f1 = term(5, 1, 1, false, Z);
    let h1 = |c| term(5, 1, c, true, Z);
    r.conj("conj_mixed_5_1", mixed(&[f1, h1(1), h1(1)]), All, th());
    r.conj(
        "conj_unique_5_1",
        mixed(&[f1, h1(1), h1(1)]),
        All,
        CheckDef::Uniqueness {
            diagonal: mixed(&[f1, h1(2)]),
        },
    );
    r.conj("conj_three_5_1_z", three(5, 1, true, Z), All, ex());
    r.conj("conj_mixed_1_1_3", mixed(&[f1, h1(1), h1(3)]), All, ex());
    r.conj(
        "conj_mixed_2_4_1",
        mixed(&[f1, term(5, 1, 2, false, Z), h1(1)]),
        All,
        ex(),
    );
    r.conj("conj_mixed_1_1_5", mixed(&[f1, h1(1), h1(5)]), All, ex());
    let m = |c| term(5, -1, c, true, N);
    let pl = |c| term(5, 1, c, true, N);
    r.conj(
        "conj_mixed_51",
        mixed(&[m(1), m(1), pl(1), pl(1)]),
        All,
        th(),
    );
    for (id, b) in [
        ("conj_N_1", 1),
        ("conj_N_m1", -1),
        ("conj_N_3", 3),
        ("conj_N_m3", -3),
    ] {
        r.conj(id, three(5, b, true, N), All, th());
    }
    let p7 = |c| term(5, -3, c, true, Z);
    r.conj("conj_p7_1_2_3", mixed(&[p7(1), p7(2), p7(3)]), All, ex());
    r.conj("conj_p7_1_2_5", mixed(&[p7(1), p7(2), p7(5)]), All, ex());
    r.conj("conj_p7_1_1_2", mixed(&[p7(1), p7(1), p7(2)]), All, ex());
    r.conj(
        "conj_gcd_5_1",
        uni(5, 1, Double, false, N),
        Even,
        CheckDef::Probe,
    );
    r.conj(
        "conj_gcd_5_2",
        uni(5, 2, Double, false, N),
        All,
        CheckDef::Probe,
    );
    r.0
}
