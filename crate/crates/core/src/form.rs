//! Quadratic forms `x(ax+b)` and `x(ax+b)/2`, polygonal numbers, and
//! multi-term representation problems built from them.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The pair `(a, b)` defining `x(ax+b)` or `x(ax+b)/2`.
///
/// Construction enforces `a > 0` and `b >= -a`, so `x(ax+b) >= 0` on the
/// naturals. The theorems additionally need `b > -a` and coprimality; those
/// are exposed as predicates and checked by the callers that need them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct FormParams {
    a: i64,
    b: i64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: i64,
    b: i64,
}

impl TryFrom<RawParams> for FormParams {
    type Error = Error;
    fn try_from(r: RawParams) -> Result<Self> {
        FormParams::new(r.a, r.b)
    }
}

impl From<FormParams> for RawParams {
    fn from(p: FormParams) -> Self {
        RawParams { a: p.a, b: p.b }
    }
}

/// Parity class of `(a, b)` when `gcd(a, b) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityClass {
    OddOdd,
    EvenOdd,
    OddEven,
}

/// Largest `|a|`, `|b|` accepted; keeps every intermediate inside `i128`.
pub const PARAM_CAP: i64 = 1 << 20;

impl FormParams {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 {
            return Err(Error::InvalidParams(format!("a = {a} must be positive")));
        }
        if b < -a {
            return Err(Error::InvalidParams(format!(
                "b = {b} must be at least -a = {}",
                -a
            )));
        }
        if a > PARAM_CAP || b.abs() > PARAM_CAP {
            return Err(Error::InvalidParams(format!(
                "|a|, |b| must not exceed {PARAM_CAP}"
            )));
        }
        Ok(FormParams { a, b })
    }

    #[inline]
    pub fn a(&self) -> i64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> i64 {
        self.b
    }

    /// `b > -a`, the standing hypothesis of every theorem.
    pub fn b_exceeds_minus_a(&self) -> bool {
        self.b > -self.a
    }

    pub fn gcd_ab(&self) -> i64 {
        self.a.gcd(&self.b)
    }

    pub fn coprime(&self) -> bool {
        self.gcd_ab() == 1
    }

    /// `gcd(a, 5b) = 1`.
    pub fn coprime_5b(&self) -> bool {
        self.a.gcd(&(5 * self.b)) == 1
    }

    pub fn parity_class(&self) -> Option<ParityClass> {
        match (self.a.is_odd(), self.b.is_odd()) {
            (true, true) => Some(ParityClass::OddOdd),
            (false, true) => Some(ParityClass::EvenOdd),
            (true, false) => Some(ParityClass::OddEven),
            (false, false) => None,
        }
    }

    /// `x(ax+b)` is even for every integer `x`.
    pub fn halvable(&self) -> bool {
        (self.a + self.b).is_even()
    }

    /// `x(ax+b) >= 0` for every integer `x`, not only `x >= 0`.
    pub fn nonnegative_on_integers(&self) -> bool {
        self.b <= self.a
    }
}

impl fmt::Display for FormParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Evaluates `x(ax+b)/2` (when `halved`) or `x(ax+b)` exactly.
pub fn eval_form(params: FormParams, halved: bool, x: i64) -> Result<i128> {
    let (a, b, xw) = (params.a as i128, params.b as i128, x as i128);
    let inner = a
        .checked_mul(xw)
        .and_then(|ax| ax.checked_add(b))
        .and_then(|t| t.checked_mul(xw))
        .ok_or(Error::Overflow("form evaluation"))?;
    let value = if halved {
        if inner.is_odd() {
            return Err(Error::Parity {
                a: params.a,
                b: params.b,
                x,
                value: inner,
            });
        }
        inner / 2
    } else {
        inner
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolygonalVariant {
    /// `p_m(n)`, `n >= 0`.
    Standard,
    /// `p_m(-n)`, `n >= 0`.
    Second,
    /// `p_m(x)`, `x` ranging over all integers.
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolygonalKind {
    pub m: i64,
    pub variant: PolygonalVariant,
}

impl PolygonalKind {
    pub fn new(m: i64, variant: PolygonalVariant) -> Self {
        PolygonalKind { m, variant }
    }

    /// Variable domain implied by the variant.
    pub fn domain(&self) -> Domain {
        match self.variant {
            PolygonalVariant::Generalized => Domain::Z,
            _ => Domain::N,
        }
    }

    /// The single term `p_m` (or its variant) with coefficient one.
    pub fn term(&self) -> Result<Term> {
        let (params, halved) = polygonal_params(*self)?;
        Term::new(params, 1, halved, self.domain())
    }
}

/// Maps `p_m` to `((m-2, -(m-4)), halved)` and `p̄_m` to `((m-2, m-4), halved)`.
pub fn polygonal_params(kind: PolygonalKind) -> Result<(FormParams, bool)> {
    let m = kind.m;
    if m < 3 {
        return Err(Error::PolygonalOrder(m));
    }
    let b = match kind.variant {
        PolygonalVariant::Standard | PolygonalVariant::Generalized => -(m - 4),
        PolygonalVariant::Second => m - 4,
    };
    Ok((FormParams::new(m - 2, b)?, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    #[serde(rename = "n")]
    N,
    #[serde(rename = "z")]
    Z,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::N => "N",
            Domain::Z => "Z",
        })
    }
}

/// One summand `coeff * f(x)` of a representation problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTerm", into = "RawTerm")]
pub struct Term {
    params: FormParams,
    coeff: i64,
    halved: bool,
    domain: Domain,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    a: i64,
    b: i64,
    #[serde(default = "one")]
    coeff: i64,
    #[serde(default)]
    halved: bool,
    domain: Domain,
}

fn one() -> i64 {
    1
}

impl TryFrom<RawTerm> for Term {
    type Error = Error;
    fn try_from(r: RawTerm) -> Result<Self> {
        Term::new(FormParams::new(r.a, r.b)?, r.coeff, r.halved, r.domain)
    }
}

impl From<Term> for RawTerm {
    fn from(t: Term) -> Self {
        RawTerm {
            a: t.params.a,
            b: t.params.b,
            coeff: t.coeff,
            halved: t.halved,
            domain: t.domain,
        }
    }
}

impl Term {
    pub fn new(params: FormParams, coeff: i64, halved: bool, domain: Domain) -> Result<Self> {
        if coeff <= 0 {
            return Err(Error::InvalidParams(format!(
                "coefficient {coeff} must be positive"
            )));
        }
        if halved && !params.halvable() {
            return Err(Error::InvalidParams(format!(
                "x(ax+b)/2 is not integral for (a, b) = {params}: a and b differ in parity"
            )));
        }
        if domain == Domain::Z && !params.nonnegative_on_integers() {
            return Err(Error::InvalidParams(format!(
                "x(ax+b) takes negative values on Z for (a, b) = {params} (needs b <= a)"
            )));
        }
        Ok(Term {
            params,
            coeff,
            halved,
            domain,
        })
    }

    pub fn params(&self) -> FormParams {
        self.params
    }
    pub fn coeff(&self) -> i64 {
        self.coeff
    }
    pub fn halved(&self) -> bool {
        self.halved
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn value(&self, x: i64) -> Result<i64> {
        if self.domain == Domain::N && x < 0 {
            return Err(Error::Precondition(format!("x = {x} is outside N")));
        }
        eval_form(self.params, self.halved, x)?
            .checked_mul(self.coeff as i128)
            .and_then(|v| i64::try_from(v).ok())
            .ok_or(Error::Overflow("term evaluation"))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.params.a, self.params.b);
        if self.coeff != 1 {
            write!(f, "{}*", self.coeff)?;
        }
        let sign = if b < 0 { '-' } else { '+' };
        write!(f, "x({a}x{sign}{})", b.abs())?;
        if self.halved {
            f.write_str("/2")?;
        }
        write!(f, "[{}]", self.domain)
    }
}

/// Coefficient pattern for four-term problems: `(1,1,1,1)`, `(2,1,1,1)` or `(3,1,1,1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Weighting {
    Plain,
    Double,
    Triple,
}

impl Weighting {
    pub fn from_leading(k: i64) -> Result<Self> {
        match k {
            1 => Ok(Weighting::Plain),
            2 => Ok(Weighting::Double),
            3 => Ok(Weighting::Triple),
            _ => Err(Error::InvalidParams(format!(
                "leading coefficient {k} not in {{1, 2, 3}}"
            ))),
        }
    }

    pub fn leading(&self) -> i64 {
        match self {
            Weighting::Plain => 1,
            Weighting::Double => 2,
            Weighting::Triple => 3,
        }
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.leading(), 1, 1, 1]
    }
}

/// A representation question: which `n` equal `sum_i term_i(x_i)`?
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepProblem {
    terms: Vec<Term>,
}

impl RepProblem {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParams(
                "a problem needs at least one term".into(),
            ));
        }
        Ok(RepProblem { terms })
    }

    /// Four copies of one form with the given coefficient pattern.
    pub fn uniform(
        params: FormParams,
        weighting: Weighting,
        halved: bool,
        domain: Domain,
    ) -> Result<Self> {
        let terms = weighting
            .coeffs()
            .iter()
            .map(|&c| Term::new(params, c, halved, domain))
            .collect::<Result<Vec<_>>>()?;
        RepProblem::new(terms)
    }

    /// `k` copies of one term.
    pub fn repeated(term: Term, k: usize) -> Result<Self> {
        RepProblem::new(vec![term; k])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    /// Evaluates the problem at a tuple, one variable per term.
    pub fn eval(&self, tuple: &[i64]) -> Result<i64> {
        if tuple.len() != self.terms.len() {
            return Err(Error::Precondition(format!(
                "tuple has {} entries, problem has {} terms",
                tuple.len(),
                self.terms.len()
            )));
        }
        self.terms.iter().zip(tuple).try_fold(0i64, |acc, (t, &x)| {
            acc.checked_add(t.value(x)?)
                .ok_or(Error::Overflow("tuple evaluation"))
        })
    }

    /// Leading-coefficient pattern when the problem is four copies of one form.
    pub fn uniform_shape(&self) -> Option<(FormParams, Weighting, bool, Domain)> {
        let first = self.terms.first()?;
        if self.terms.len() != 4 {
            return None;
        }
        let same = |t: &Term| {
            t.params == first.params && t.halved == first.halved && t.domain == first.domain
        };
        if !self.terms.iter().all(same) || self.terms[1..].iter().any(|t| t.coeff != 1) {
            return None;
        }
        let w = Weighting::from_leading(first.coeff).ok()?;
        Some((first.params, w, first.halved, first.domain))
    }
}

impl fmt::Display for RepProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i64, b: i64) -> FormParams {
        FormParams::new(a, b).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_form(p(5, 1), true, 3).unwrap(), 24);
        assert_eq!(eval_form(p(5, 1), true, -2).unwrap(), 9);
        // second pentagonal p̄5(2)
        assert_eq!(eval_form(p(3, 1), true, 2).unwrap(), 7);
    }

    #[test]
    fn eval_errors() {
        assert!(matches!(
            eval_form(p(2, 1), true, 1),
            Err(Error::Parity { .. })
        ));
        let big = p(1 << 20, 1);
        assert!(matches!(
            eval_form(big, false, i64::MAX / 4),
            Err(Error::Overflow(_))
        ));
        assert_eq!(
            eval_form(p(1 << 10, 1 << 10), false, 1 << 30).unwrap(),
            (1i128 << 70) + (1 << 40)
        );
        assert_eq!(
            eval_form(p(1 << 10, -(1 << 10)), true, -(1 << 30)).unwrap(),
            ((1i128 << 70) + (1 << 40)) / 2
        );
    }

    #[test]
    fn params_validation() {
        assert!(FormParams::new(0, 1).is_err());
        assert!(FormParams::new(3, -4).is_err());
        assert!(!FormParams::new(3, -3).unwrap().b_exceeds_minus_a());
        assert!(p(3, -2).b_exceeds_minus_a());
        assert!(!p(5, 1).coprime_5b());
        assert!(p(2, -1).coprime_5b());
        assert_eq!(p(4, 1).parity_class(), Some(ParityClass::EvenOdd));
        assert_eq!(p(5, 2).parity_class(), Some(ParityClass::OddEven));
        assert_eq!(p(4, 2).parity_class(), None);
    }

    #[test]
    fn polygonal_examples() {
        let (fp, h) = polygonal_params(PolygonalKind::new(5, PolygonalVariant::Second)).unwrap();
        assert_eq!((fp, h), (p(3, 1), true));
        assert_eq!(eval_form(fp, h, 1).unwrap(), 2);

        let (fp, h) = polygonal_params(PolygonalKind::new(4, PolygonalVariant::Standard)).unwrap();
        assert_eq!(fp, p(2, 0));
        for x in 0..20 {
            assert_eq!(eval_form(fp, h, x).unwrap(), (x * x) as i128);
        }

        let (fp, h) = polygonal_params(PolygonalKind::new(8, PolygonalVariant::Standard)).unwrap();
        assert_eq!(fp, p(6, -4));
        for x in -20..20 {
            assert_eq!(eval_form(fp, h, x).unwrap(), (x * (3 * x - 2)) as i128);
        }
        assert!(matches!(
            polygonal_params(PolygonalKind::new(2, PolygonalVariant::Standard)),
            Err(Error::PolygonalOrder(2))
        ));
    }

    #[test]
    fn polygonal_round_trip() {
        // p_m(n) = (m-2) n(n-1)/2 + n, p̄_m(n) = p_m(-n)
        for m in 3..=12i64 {
            for n in 0..=100i64 {
                let std = (m - 2) * n * (n - 1) / 2 + n;
                let second = (m - 2) * n * (n + 1) / 2 - n;
                let (fs, _) =
                    polygonal_params(PolygonalKind::new(m, PolygonalVariant::Standard)).unwrap();
                let (fb, _) =
                    polygonal_params(PolygonalKind::new(m, PolygonalVariant::Second)).unwrap();
                assert_eq!(eval_form(fs, true, n).unwrap(), std as i128);
                assert_eq!(eval_form(fb, true, n).unwrap(), second as i128);
                assert_eq!(eval_form(fs, true, -n).unwrap(), second as i128);
            }
        }
        // table values: p5 = x(3x-1)/2, p7 = x(5x-3)/2
        for x in -30..30 {
            assert_eq!(
                eval_form(p(3, -1), true, x).unwrap(),
                (x * (3 * x - 1) / 2) as i128
            );
            assert_eq!(
                eval_form(p(5, -3), true, x).unwrap(),
                (x * (5 * x - 3) / 2) as i128
            );
        }
    }

    #[test]
    fn term_validation() {
        assert!(Term::new(p(2, 1), 1, true, Domain::N).is_err());
        assert!(Term::new(p(1, 2), 1, false, Domain::Z).is_err());
        assert!(Term::new(p(1, 2), 1, false, Domain::N).is_ok());
        assert!(Term::new(p(7, 1), 0, true, Domain::Z).is_err());
        let t = Term::new(p(7, 1), 1, true, Domain::N).unwrap();
        assert!(t.value(-1).is_err());
    }

    #[test]
    fn problem_eval_and_shape() {
        let prob = RepProblem::uniform(p(5, 1), Weighting::Plain, true, Domain::N).unwrap();
        assert_eq!(prob.eval(&[0, 1, 2, 3]).unwrap(), 3 + 11 + 24);
        assert!(prob.eval(&[1, 2]).is_err());
        assert_eq!(prob.uniform_shape().unwrap().1, Weighting::Plain);
        let w3 = RepProblem::uniform(p(4, 1), Weighting::Triple, false, Domain::Z).unwrap();
        assert_eq!(w3.eval(&[1, 0, 0, 0]).unwrap(), 15);
        let json = serde_json::to_string(&w3).unwrap();
        let back: RepProblem = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w3);
    }
}
