use std::cmp::Ordering;

use proptest::prelude::*;

use quadrep_core::bound::{admits, least_n, threshold};
use quadrep_core::verify::{self, Verdict};
use quadrep_core::witness::construct_for;
use quadrep_core::{Domain, FormParams, RealBound, RepProblem, TheoremId, Weighting};

proptest! {
    // Exact sign agrees with floating point whenever the gap is visible.
    #[test]
    fn real_bound_cmp_matches_float(
        lin in -10_000i128..10_000,
        coef in 0i128..50,
        rad in 0i128..1_000_000,
        den in 1i128..100,
        k in -5_000i128..5_000,
    ) {
        let rb = RealBound::new(lin, coef, rad, den);
        let x = rb.approx();
        let exact = rb.cmp_int(k).unwrap();
        if (x - k as f64).abs() > 1e-6 {
            prop_assert_eq!(exact, x.partial_cmp(&(k as f64)).unwrap());
        }
        let f = rb.floor().unwrap();
        prop_assert_ne!(rb.cmp_int(f).unwrap(), Ordering::Less);
        prop_assert_eq!(rb.cmp_int(f + 1).unwrap(), Ordering::Less);
    }

    #[test]
    fn th21_witness_valid_above_bound(off in 0i64..2_000_000) {
        let p = FormParams::new(5, 1).unwrap();
        let n = least_n(TheoremId::Th21, p).unwrap() + off;
        prop_assume!(admits(TheoremId::Th21, p, n).unwrap());
        let t = construct_for(TheoremId::Th21, p, n).unwrap();
        t.check().unwrap();
        prop_assert_eq!(t.replay().unwrap(), t.witness);
    }

    #[test]
    fn th3_witness_valid_above_bound(off in 0i64..2_000_000) {
        let p = FormParams::new(3, 1).unwrap();
        let n = least_n(TheoremId::Th3, p).unwrap() + off;
        prop_assume!(admits(TheoremId::Th3, p, n).unwrap());
        let t = construct_for(TheoremId::Th3, p, n).unwrap();
        t.check().unwrap();
        let problem = RepProblem::uniform(p, Weighting::Triple, false, Domain::N).unwrap();
        prop_assert_eq!(problem.eval(&t.witness.tuple()).unwrap(), n);
    }
}

#[test]
fn th11_bound_for_5_1() {
    let b = threshold(TheoremId::Th11, FormParams::new(5, 1).unwrap()).unwrap();
    assert_eq!(b.to_string(), "1443 + 91*sqrt(246)");
    assert_eq!(least_n(TheoremId::Th11, FormParams::new(5, 1).unwrap()).unwrap(), 2871);
}

#[test]
fn t52_list_misses_fifteen() {
    // x(5x+2) takes only 0, 3, 7 below 16, and no four of them sum to 15.
    let r = verify::verify_claim("T_5_2_not_div_4", None).unwrap();
    assert_eq!(r.verdict, Verdict::Refuted);
    assert_eq!(r.evidence.counterexample, Some(15));
    assert_eq!(r.evidence.exceptions.as_deref(), Some(&[1, 2, 5, 11, 15, 18][..]));
}
