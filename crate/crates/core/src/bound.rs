//! Exact real bounds of the shape `(lin + coef * sqrt(rad)) / den` and the
//! theorem thresholds expressed with them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{self, floor_div, isqrt, mul, sign_one_radical};
use crate::error::{Error, Result};
use crate::form::FormParams;

/// An exact real number `(lin + coef * sqrt(rad)) / den` with `den > 0`,
/// `coef >= 0` and `rad >= 0`.
///
/// Comparisons against integers never touch floating point: they reduce to a
/// sign analysis and one integer squaring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RealBound {
    lin: i128,
    coef: i128,
    rad: i128,
    den: i128,
}

impl RealBound {
    pub fn new(lin: i128, coef: i128, rad: i128, den: i128) -> Self {
        assert!(den > 0, "denominator must be positive");
        assert!(
            coef >= 0 && rad >= 0,
            "coefficient and radicand must be nonnegative"
        );
        let (coef, rad) = if coef == 0 || rad == 0 {
            (0, 0)
        } else {
            (coef, rad)
        };
        let g = lin.gcd(&coef).gcd(&den);
        RealBound {
            lin: lin / g,
            coef: coef / g,
            rad,
            den: den / g,
        }
    }

    pub fn integer(k: i128) -> Self {
        RealBound::new(k, 0, 0, 1)
    }

    pub fn lin(&self) -> i128 {
        self.lin
    }
    pub fn coef(&self) -> i128 {
        self.coef
    }
    pub fn rad(&self) -> i128 {
        self.rad
    }
    pub fn den(&self) -> i128 {
        self.den
    }

    /// Exact comparison `self` vs `k`.
    pub fn cmp_int(&self, k: i128) -> Result<Ordering> {
        let shifted = arith::sub(self.lin, mul(k, self.den)?)?;
        sign_one_radical(shifted, self.coef, self.rad)
    }

    /// Multiplies by a positive integer.
    pub fn scale(&self, factor: i128) -> Result<Self> {
        assert!(factor > 0);
        Ok(RealBound::new(
            mul(self.lin, factor)?,
            mul(self.coef, factor)?,
            self.rad,
            self.den,
        ))
    }

    /// Divides by a positive integer.
    pub fn divide(&self, divisor: i128) -> Result<Self> {
        assert!(divisor > 0);
        Ok(RealBound::new(
            self.lin,
            self.coef,
            self.rad,
            mul(self.den, divisor)?,
        ))
    }

    pub fn is_integer(&self) -> bool {
        let s = if self.coef == 0 {
            Some(0)
        } else {
            arith::exact_sqrt(self.coef * self.coef * self.rad)
        };
        matches!(s, Some(s) if (self.lin + s) % self.den == 0)
    }

    /// `floor(self)`.
    pub fn floor(&self) -> Result<i128> {
        let q = if self.coef == 0 {
            0
        } else {
            isqrt(mul(mul(self.coef, self.coef)?, self.rad)?)
        };
        Ok(floor_div(arith::add(self.lin, q)?, self.den))
    }

    /// `min { n : n > self }`.
    pub fn least_integer_above(&self) -> Result<i128> {
        Ok(self.floor()? + 1)
    }

    /// `min { n : n >= self }`.
    pub fn least_integer_at_least(&self) -> Result<i128> {
        let f = self.floor()?;
        Ok(if self.cmp_int(f)? == Ordering::Equal {
            f
        } else {
            f + 1
        })
    }

    /// Floating approximation, for display only.
    pub fn approx(&self) -> f64 {
        (self.lin as f64 + self.coef as f64 * (self.rad as f64).sqrt()) / self.den as f64
    }
}

fn write_ratio(f: &mut fmt::Formatter<'_>, num: i128, den: i128) -> fmt::Result {
    let g = num.gcd(&den).max(1);
    let (n, d) = (num / g, den / g);
    if d == 1 {
        write!(f, "{n}")
    } else {
        write!(f, "{n}/{d}")
    }
}

impl fmt::Display for RealBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef == 0 {
            return write_ratio(f, self.lin, self.den);
        }
        if self.lin != 0 {
            write_ratio(f, self.lin, self.den)?;
            f.write_str(" + ")?;
        }
        if self.coef != self.den {
            write_ratio(f, self.coef, self.den)?;
            f.write_str("*")?;
        }
        write!(f, "sqrt({})", self.rad)
    }
}

/// Identifies which theorem's threshold is meant.
///
/// `Th21` (the unhalved four-term bound) is numerically the same as
/// `Th12Odd` and `Th13`; all three are kept distinct because they carry
/// different hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    Th11,
    Th12Odd,
    Th12EvenQuarter,
    Th13,
    Th21,
    Th22,
    Th2,
    Th3,
    Cor19,
    Cor2,
    Th51,
    Th52EvenAEvenN,
    Th52EvenAOddN,
    Th52EvenB,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::Th11,
        TheoremId::Th12Odd,
        TheoremId::Th12EvenQuarter,
        TheoremId::Th13,
        TheoremId::Th21,
        TheoremId::Th22,
        TheoremId::Th2,
        TheoremId::Th3,
        TheoremId::Cor19,
        TheoremId::Cor2,
        TheoremId::Th51,
        TheoremId::Th52EvenAEvenN,
        TheoremId::Th52EvenAOddN,
        TheoremId::Th52EvenB,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Th11 => "th1.1",
            TheoremId::Th12Odd => "th1.2-odd",
            TheoremId::Th12EvenQuarter => "th1.2-even",
            TheoremId::Th13 => "th1.3",
            TheoremId::Th21 => "th2.1",
            TheoremId::Th22 => "th2.2",
            TheoremId::Th2 => "th2",
            TheoremId::Th3 => "th3",
            TheoremId::Cor19 => "cor1.9",
            TheoremId::Cor2 => "cor2",
            TheoremId::Th51 => "th5.1",
            TheoremId::Th52EvenAEvenN => "th5.2i-even",
            TheoremId::Th52EvenAOddN => "th5.2i-odd",
            TheoremId::Th52EvenB => "th5.2ii",
        }
    }

    /// The bound constrains `n / scale`.
    pub fn scale(&self) -> i128 {
        match self {
            TheoremId::Th12EvenQuarter | TheoremId::Th22 => 4,
            TheoremId::Th3 => 6,
            TheoremId::Cor19 => 3,
            _ => 1,
        }
    }

    /// Whether the inequality on `n / scale` is strict.
    pub fn strict(&self) -> bool {
        !matches!(
            self,
            TheoremId::Th2
                | TheoremId::Cor2
                | TheoremId::Th52EvenAEvenN
                | TheoremId::Th52EvenAOddN
                | TheoremId::Th52EvenB
        )
    }

    /// Parity side condition on `n`, given the form.
    pub fn n_condition(&self, params: FormParams, n: i64) -> bool {
        let (a, b) = (params.a(), params.b());
        match self {
            TheoremId::Th11 | TheoremId::Cor19 | TheoremId::Cor2 | TheoremId::Th51 => true,
            TheoremId::Th12Odd | TheoremId::Th52EvenAOddN => n.is_odd(),
            TheoremId::Th12EvenQuarter | TheoremId::Th22 | TheoremId::Th52EvenAEvenN => n.is_even(),
            TheoremId::Th13 | TheoremId::Th52EvenB => n % 4 != 0,
            TheoremId::Th21 => {
                ((a * b).is_odd() && n.is_even())
                    || (a.is_even() && n.is_odd())
                    || (b.is_even() && n % 4 != 0)
            }
            TheoremId::Th2 => (a * b).is_even() || n.is_even(),
            TheoremId::Th3 => (a * b).is_even() || n.is_even(),
        }
    }

    /// Checks the theorem's hypotheses on `(a, b)`.
    pub fn check_hypotheses(&self, params: FormParams) -> Result<()> {
        let (a, b) = (params.a(), params.b());
        let fail = |why: &str| {
            Err(Error::Hypothesis(format!(
                "{} with (a, b) = {params}: {why}",
                self.name()
            )))
        };
        if !params.b_exceeds_minus_a() {
            return fail("b must exceed -a");
        }
        let need_coprime = !matches!(self, TheoremId::Th2 | TheoremId::Cor2);
        if need_coprime && !params.coprime() {
            return fail("gcd(a, b) != 1");
        }
        match self {
            TheoremId::Th11 if (a * b).is_even() => fail("ab must be odd"),
            TheoremId::Th12Odd | TheoremId::Th12EvenQuarter | TheoremId::Th22 if a.is_odd() => {
                fail("a must be even")
            }
            TheoremId::Th13 if b.is_odd() => fail("b must be even"),
            TheoremId::Th2 if !params.coprime_5b() => fail("gcd(a, 5b) != 1"),
            TheoremId::Cor2 if !params.coprime_5b() => fail("gcd(a, 5b) != 1"),
            TheoremId::Cor2 if (a * b).is_even() => fail("ab must be odd"),
            TheoremId::Cor19 if (a * b).is_even() => fail("a and b must be odd"),
            TheoremId::Th51 if !(b > 0 && a > b && (a * b).is_odd()) => {
                fail("a, b must be positive odd with a > b")
            }
            TheoremId::Th52EvenAEvenN | TheoremId::Th52EvenAOddN | TheoremId::Th52EvenB
                if !(b > 0 && a > b && (a + b).is_odd()) =>
            {
                fail("needs a > b > 0 of opposite parity")
            }
            TheoremId::Th52EvenAEvenN | TheoremId::Th52EvenAOddN if a.is_odd() => {
                fail("a must be even")
            }
            TheoremId::Th52EvenB if b.is_odd() => fail("b must be even"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', ".");
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.name() == key)
            .ok_or_else(|| Error::InvalidParams(format!("unknown theorem id {s:?}")))
    }
}

/// The right-hand side of the theorem's inequality on `n / scale`.
pub fn threshold(theorem: TheoremId, params: FormParams) -> Result<RealBound> {
    theorem.check_hypotheses(params)?;
    let (a, b) = (params.a() as i128, params.b() as i128);
    let th11 = || {
        RealBound::new(
            2 * a * (7 * a * (a - 1) + 1) + (7 * a - 2) * b,
            2 * a * (2 * a - 1) + b,
            6 * (2 * a * (a - 1) + b),
            1,
        )
    };
    let th2 = || {
        RealBound::new(
            550 * a * (60 * a * a + b),
            25 * (120 * a * a + b),
            2 * (60 * a * a + b),
            1,
        )
    };
    let th3_radical = (2 * a * (18 * a - 1) + b, 15 * (2 * a * (9 * a - 1) + b));
    let th3_lin = 66 * a * a * (9 * a - 1) + (33 * a - 1) * b;
    Ok(match theorem {
        TheoremId::Th11 => th11(),
        TheoremId::Th12Odd | TheoremId::Th13 | TheoremId::Th21 => th11().scale(2)?,
        TheoremId::Th12EvenQuarter | TheoremId::Th22 => RealBound::new(
            28 * a * a * a - 14 * a * a + a + (7 * a - 1) * b,
            2 * a * (4 * a - 1) + b,
            3 * (2 * a * (2 * a - 1) + b),
            1,
        ),
        TheoremId::Th2 => th2(),
        TheoremId::Cor2 => th2().divide(2)?,
        TheoremId::Th3 => RealBound::new(th3_lin + a, th3_radical.0, th3_radical.1, 1),
        TheoremId::Cor19 => RealBound::new(th3_lin, th3_radical.0, th3_radical.1, 1),
        TheoremId::Th51 => RealBound::new(a * a * a + 2 * a * b, 0, 0, 2),
        TheoremId::Th52EvenAEvenN => RealBound::integer(4 * a * a * a + 4 * a * b),
        TheoremId::Th52EvenAOddN | TheoremId::Th52EvenB => {
            RealBound::integer(a * a * a + 2 * a * b)
        }
    })
}

/// Whether `n` clears the theorem's size bound (ignoring parity side conditions).
pub fn above_threshold(theorem: TheoremId, params: FormParams, n: i64) -> Result<bool> {
    let bound = threshold(theorem, params)?.scale(theorem.scale())?;
    let ord = bound.cmp_int(n as i128)?;
    Ok(if theorem.strict() {
        ord == Ordering::Less
    } else {
        ord != Ordering::Greater
    })
}

/// Whether `n` satisfies every hypothesis of the theorem: size bound and parity.
pub fn admits(theorem: TheoremId, params: FormParams, n: i64) -> Result<bool> {
    Ok(n >= 0 && theorem.n_condition(params, n) && above_threshold(theorem, params, n)?)
}

/// Least `n` clearing the size bound (parity side conditions not applied).
pub fn least_n(theorem: TheoremId, params: FormParams) -> Result<i64> {
    let bound = threshold(theorem, params)?.scale(theorem.scale())?;
    let n = if theorem.strict() {
        bound.least_integer_above()?
    } else {
        bound.least_integer_at_least()?
    };
    i64::try_from(n.max(0)).map_err(|_| Error::Overflow("threshold"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: i64, b: i64) -> FormParams {
        FormParams::new(a, b).unwrap()
    }

    #[test]
    fn th11_values() {
        let t = threshold(TheoremId::Th11, p(1, 1)).unwrap();
        assert_eq!((t.lin(), t.coef(), t.rad(), t.den()), (7, 3, 6, 1));
        assert_eq!(t.least_integer_above().unwrap(), 15);
        // 7 + 3 sqrt 6 = 14.3484692283495342945918522241...
        assert!((t.approx() - 14.348_469_228_349_534).abs() < 1e-12);

        let t = threshold(TheoremId::Th11, p(5, 1)).unwrap();
        assert_eq!((t.lin(), t.coef(), t.rad()), (1443, 91, 246));
        assert_eq!(t.least_integer_above().unwrap(), 2871);
        assert_eq!(t.to_string(), "1443 + 91*sqrt(246)");

        let t21 = threshold(TheoremId::Th21, p(5, 1)).unwrap();
        assert_eq!((t21.lin(), t21.coef(), t21.rad()), (2886, 182, 246));
        assert_eq!(t21.least_integer_above().unwrap(), 5741);
    }

    #[test]
    fn other_thresholds_against_high_precision() {
        // floors from a 50-digit evaluation of each closed form
        let cases: &[(TheoremId, (i64, i64), i128)] = &[
            (TheoremId::Th22, (2, 1), 364),
            (TheoremId::Th22, (4, 1), 3181),
            (TheoremId::Th22, (2, -1), 312),
            (TheoremId::Th2, (1, 0), 65863),
            (TheoremId::Th2, (2, -1), 524711),
            (TheoremId::Th2, (2, 1), 529102),
            (TheoremId::Th3, (1, 1), 1119),
            (TheoremId::Th3, (3, 1), 31025),
            (TheoremId::Cor19, (5, 1), 145231),
            (TheoremId::Cor19, (1, 1), 1118),
            (TheoremId::Th11, (3, 1), 550),
            (TheoremId::Th11, (5, -1), 2738),
        ];
        for &(th, (a, b), fl) in cases {
            assert_eq!(
                threshold(th, p(a, b)).unwrap().floor().unwrap(),
                fl,
                "{th} {a},{b}"
            );
        }
        assert_eq!(least_n(TheoremId::Th2, p(2, -1)).unwrap(), 524712);
        assert_eq!(least_n(TheoremId::Th2, p(1, 0)).unwrap(), 65864);
        assert_eq!(least_n(TheoremId::Th3, p(1, 1)).unwrap(), 6720);
        assert_eq!(least_n(TheoremId::Th22, p(2, 1)).unwrap(), 1457);
    }

    #[test]
    fn rational_thresholds() {
        let t = threshold(TheoremId::Th51, p(3, 1)).unwrap();
        assert_eq!(t.to_string(), "33/2");
        assert_eq!(t.least_integer_above().unwrap(), 17);
        assert_eq!(
            threshold(TheoremId::Th52EvenAEvenN, p(2, 1)).unwrap(),
            RealBound::integer(40)
        );
        assert_eq!(
            threshold(TheoremId::Th52EvenAOddN, p(2, 1)).unwrap(),
            RealBound::integer(12)
        );
        assert_eq!(
            threshold(TheoremId::Th52EvenB, p(3, 2)).unwrap(),
            RealBound::integer(39)
        );
        assert!(admits(TheoremId::Th52EvenB, p(3, 2), 39).unwrap());
        assert!(!admits(TheoremId::Th52EvenB, p(3, 2), 40).unwrap());
        assert!(!admits(TheoremId::Th52EvenB, p(3, 2), 38).unwrap());
    }

    #[test]
    fn hypotheses_rejected() {
        assert!(matches!(
            threshold(TheoremId::Th2, p(5, 1)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            threshold(TheoremId::Th11, p(2, 1)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            threshold(TheoremId::Th21, p(4, 2)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            threshold(TheoremId::Th13, p(3, 1)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            threshold(TheoremId::Th51, p(3, 5)),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            threshold(TheoremId::Th21, p(3, -3)),
            Err(Error::Hypothesis(_))
        ));
        assert!(threshold(TheoremId::Th2, p(2, -1)).is_ok());
    }

    #[test]
    fn cmp_and_least_on_exact_integers() {
        // (4 + 2 sqrt 9) / 2 = 5
        let b = RealBound::new(4, 2, 9, 2);
        assert!(b.is_integer());
        assert_eq!(b.cmp_int(5).unwrap(), Ordering::Equal);
        assert_eq!(b.least_integer_above().unwrap(), 6);
        assert_eq!(b.least_integer_at_least().unwrap(), 5);
        let neg = RealBound::new(-7, 1, 2, 3);
        assert_eq!(neg.floor().unwrap(), -2);
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("TH1.1".parse::<TheoremId>().unwrap(), TheoremId::Th11);
    }
}
