//! Explicit four-term representations of integers by the quadratic forms
//! `x(ax+b)` and `x(ax+b)/2`.
//!
//! * [`form`], [`bound`], [`interval`]: form evaluation, exact thresholds and
//!   the d-selection windows.
//! * [`squares`]: four squares with prescribed sum and related solvers.
//! * [`witness`]: constructive witnesses above the thresholds.
//! * [`sieve`]: bitset sumsets, exception sets and representation counts.
//! * [`verify`]: the claim registry and its reports.

pub mod arith;
pub mod bound;
pub mod error;
pub mod form;
pub mod interval;
pub mod sieve;
pub mod squares;
pub mod verify;
pub mod witness;

pub use bound::{RealBound, TheoremId};
pub use error::{Error, Result};
pub use form::{Domain, FormParams, RepProblem, Term, Weighting};
pub use interval::{IntervalId, IntervalSpec};
pub use sieve::{sieve_representable, RepSet};
pub use squares::Witness;
pub use witness::{construct, WitnessTrace};
