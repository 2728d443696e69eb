//! The d-selection windows used by the constructive proofs.
//!
//! * `I`: `((sqrt(3a(n-a+b) + 9b²/4) - a - 3b/2)/a, (2/a)(sqrt(an+b²) - b))`, open.
//! * `J`: `[(sqrt(24an+25b²) - 5b)/(12a), (sqrt(4an/5+b²) - b)/(2a)]`, closed.
//! * `K`: `((sqrt(5a(n-a+b) + 25b²/4) - a - 5b/2)/a, (sqrt(6an+9b²) - 3b)/a)`, open.
//!
//! Denominators are cleared so every endpoint is a [`RealBound`] with an
//! integer radicand.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{self, mul, sign_two_radicals, N_CAP};
use crate::bound::RealBound;
use crate::error::{Error, Result};
use crate::form::FormParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalId {
    I,
    J,
    K,
}

impl IntervalId {
    fn name(&self) -> &'static str {
        match self {
            IntervalId::I => "I",
            IntervalId::J => "J",
            IntervalId::K => "K",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSpec {
    pub lo: RealBound,
    pub hi: RealBound,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl IntervalSpec {
    pub fn contains(&self, d: i64) -> bool {
        self.contains_checked(d)
            .expect("interval endpoints fit in i128 for capped n")
    }

    pub fn contains_checked(&self, d: i64) -> Result<bool> {
        let d = d as i128;
        let lo = self.lo.cmp_int(d)?;
        let hi = self.hi.cmp_int(d)?;
        let above_lo = if self.lo_open {
            lo == Ordering::Less
        } else {
            lo != Ordering::Greater
        };
        let below_hi = if self.hi_open {
            hi == Ordering::Greater
        } else {
            hi != Ordering::Less
        };
        Ok(above_lo && below_hi)
    }

    /// Exact comparison of `hi - lo` with `k`.
    pub fn length_cmp(&self, k: i128) -> Result<Ordering> {
        let (h, l) = (&self.hi, &self.lo);
        let den = mul(h.den(), l.den())?;
        let lin = arith::sub(
            arith::sub(mul(h.lin(), l.den())?, mul(l.lin(), h.den())?)?,
            mul(k, den)?,
        )?;
        sign_two_radicals(
            lin,
            mul(h.coef(), l.den())?,
            h.rad(),
            -mul(l.coef(), h.den())?,
            l.rad(),
        )
    }

    /// The smallest integer in the interval, if any.
    pub fn first_integer(&self) -> Result<Option<i64>> {
        let f = self.lo.floor()?;
        let start = if self.lo_open || self.lo.cmp_int(f)? != Ordering::Equal {
            f + 1
        } else {
            f
        };
        let d = i64::try_from(start).map_err(|_| Error::Overflow("interval endpoint"))?;
        Ok(self.contains_checked(d)?.then_some(d))
    }

    /// Integers in the interval, ascending.
    pub fn integers(&self) -> Result<impl Iterator<Item = i64> + '_> {
        let first = self.first_integer()?;
        Ok(first
            .into_iter()
            .flat_map(move |d0| (d0..).take_while(move |&d| self.contains(d))))
    }
}

impl fmt::Display for IntervalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_open { '(' } else { '[' },
            self.lo,
            self.hi,
            if self.hi_open { ')' } else { ']' }
        )
    }
}

fn radicand(id: IntervalId, value: i128) -> Result<i128> {
    if value < 0 {
        Err(Error::NegativeRadicand {
            interval: id.name(),
            radicand: value,
        })
    } else {
        Ok(value)
    }
}

/// Builds the interval `id` for the form `params` and target `n`.
pub fn interval(id: IntervalId, params: FormParams, n: i64) -> Result<IntervalSpec> {
    if !(0..=N_CAP).contains(&n) {
        return Err(Error::Precondition(format!("n = {n} outside [0, 2^48]")));
    }
    let (a, b, n) = (params.a() as i128, params.b() as i128, n as i128);
    Ok(match id {
        IntervalId::I => {
            let lo_rad = radicand(id, 12 * a * (n - a + b) + 9 * b * b)?;
            let hi_rad = radicand(id, a * n + b * b)?;
            IntervalSpec {
                lo: RealBound::new(-2 * a - 3 * b, 1, lo_rad, 2 * a),
                hi: RealBound::new(-2 * b, 2, hi_rad, a),
                lo_open: true,
                hi_open: true,
            }
        }
        IntervalId::J => {
            let lo_rad = radicand(id, 24 * a * n + 25 * b * b)?;
            // sqrt(4an/5 + b²) = sqrt(20an + 25b²) / 5
            let hi_rad = radicand(id, 20 * a * n + 25 * b * b)?;
            IntervalSpec {
                lo: RealBound::new(-5 * b, 1, lo_rad, 12 * a),
                hi: RealBound::new(-5 * b, 1, hi_rad, 10 * a),
                lo_open: false,
                hi_open: false,
            }
        }
        IntervalId::K => {
            let lo_rad = radicand(id, 20 * a * (n - a + b) + 25 * b * b)?;
            let hi_rad = radicand(id, 6 * a * n + 9 * b * b)?;
            IntervalSpec {
                lo: RealBound::new(-2 * a - 5 * b, 1, lo_rad, 2 * a),
                hi: RealBound::new(-3 * b, 1, hi_rad, a),
                lo_open: true,
                hi_open: true,
            }
        }
    })
}
