//! Four squares with a prescribed linear sum, the `3w²`-weighted variant,
//! and the ternary form `x² + y² + z² + (x+y+z)²/2` with its 5-adic
//! exclusion set `E`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, five_adic, isqrt};
use crate::error::{Error, Result};
use crate::form::Domain;

/// A candidate `(c, d)` for the prescribed-sum solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyPair {
    pub c: i64,
    pub d: i64,
}

impl CauchyPair {
    pub fn new(c: i64, d: i64) -> Self {
        CauchyPair { c, d }
    }

    pub fn same_parity(&self) -> bool {
        (self.c - self.d).is_even()
    }

    pub fn four_not_dividing_c(&self) -> bool {
        self.c % 4 != 0
    }

    /// `4c > d²`.
    pub fn lower_quadratic(&self) -> bool {
        4 * self.c as i128 > (self.d as i128).pow(2)
    }

    /// `3c < d² + 2d + 4`.
    pub fn upper_quadratic(&self) -> bool {
        let d = self.d as i128;
        3 * (self.c as i128) < d * d + 2 * d + 4
    }

    /// `6c > d²`.
    pub fn lower_weighted(&self) -> bool {
        6 * self.c as i128 > (self.d as i128).pow(2)
    }

    /// `5c < d² + 2d + 6`.
    pub fn upper_weighted(&self) -> bool {
        let d = self.d as i128;
        5 * (self.c as i128) < d * d + 2 * d + 6
    }

    /// `c = 3 (mod 9)` or `3 ∤ d`.
    pub fn mod9_condition(&self) -> bool {
        self.c.rem_euclid(9) == 3 || self.d % 3 != 0
    }

    /// Preconditions of the natural-number prescribed-sum solver.
    pub fn cauchy_ok(&self) -> bool {
        self.c >= 0
            && self.d >= 0
            && self.same_parity()
            && self.four_not_dividing_c()
            && self.lower_quadratic()
            && self.upper_quadratic()
    }

    /// Preconditions of the integer prescribed-sum solver.
    pub fn cauchy_z_ok(&self) -> bool {
        self.c >= 0
            && self.d >= 0
            && self.same_parity()
            && self.four_not_dividing_c()
            && self.lower_quadratic()
    }

    /// Preconditions of the `3w² + x² + y² + z²` solver.
    pub fn weighted_ok(&self) -> bool {
        self.c >= 1
            && self.d >= 1
            && self.same_parity()
            && self.mod9_condition()
            && self.lower_weighted()
            && self.upper_weighted()
    }
}

/// A solution tuple `(w, x, y, z)` tagged with its variable domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub w: i64,
    pub x: i64,
    pub y: i64,
    pub z: i64,
    pub domain: Domain,
}

impl Witness {
    pub fn new(t: [i64; 4], domain: Domain) -> Self {
        Witness {
            w: t[0],
            x: t[1],
            y: t[2],
            z: t[3],
            domain,
        }
    }

    pub fn tuple(&self) -> [i64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn in_domain(&self) -> bool {
        self.domain == Domain::Z || self.tuple().iter().all(|&v| v >= 0)
    }

    /// `(weight*w² + x² + y² + z², weight*w + x + y + z)`.
    pub fn weighted_sums(&self, weight: i64) -> (i64, i64) {
        let t = self.tuple();
        let sq = weight * t[0] * t[0] + t[1..].iter().map(|v| v * v).sum::<i64>();
        let lin = weight * t[0] + t[1..].iter().sum::<i64>();
        (sq, lin)
    }
}

fn contradiction(what: &str, c: i64, d: i64) -> Error {
    Error::Contradiction(format!(
        "{what}: no solution found for (c, d) = ({c}, {d}) although the lemma guarantees one"
    ))
}

/// Finds `x <= y <= z` with `x >= min_x`, `x + y + z = sum`, `x² + y² + z² = sq`,
/// taking the smallest feasible `x`.
fn solve_three(sum: i64, sq: i64, min_x: i64) -> Option<[i64; 3]> {
    if sq < 0 {
        return None;
    }
    let r = isqrt(sq as i128) as i64;
    let start = min_x.max(-r);
    let end = sum.div_euclid(3).min(r);
    for x in start..=end {
        let s = sum - x;
        let q = sq - x * x;
        let disc = 2 * q - s * s;
        let Some(t) = exact_sqrt(disc as i128) else {
            continue;
        };
        let t = t as i64;
        if (s - t).is_odd() {
            continue;
        }
        let (y, z) = ((s - t) / 2, (s + t) / 2);
        if y >= x {
            return Some([x, y, z]);
        }
    }
    None
}

/// `w² + x² + y² + z² = c`, `w + x + y + z = d` over the naturals.
///
/// Returns the lexicographically smallest solution with `w <= x <= y <= z`.
pub fn cauchy_solve(c: i64, d: i64) -> Result<Witness> {
    let pair = CauchyPair::new(c, d);
    if (c, d) == (0, 0) {
        return Ok(Witness::new([0; 4], Domain::N));
    }
    if !pair.cauchy_ok() {
        return Err(Error::Precondition(format!(
            "(c, d) = ({c}, {d}) needs c = d (mod 2), 4 ∤ c, 4c > d², 3c < d² + 2d + 4"
        )));
    }
    for w in 0..=d / 4 {
        if let Some([x, y, z]) = solve_three(d - w, c - w * w, w) {
            let wit = Witness::new([w, x, y, z], Domain::N);
            debug_assert_eq!(wit.weighted_sums(1), (c, d));
            return checked(wit, 1, c, d);
        }
    }
    Err(contradiction("cauchy_solve", c, d))
}

/// `s² + t² + u² + v² = c`, `s + t + u + v = d` over the integers.
///
/// The smallest component is scanned downward from `d/4`, the remaining
/// ones ascending, so near-balanced tuples are found first.
pub fn cauchy_solve_z(c: i64, d: i64) -> Result<Witness> {
    let pair = CauchyPair::new(c, d);
    if (c, d) == (0, 0) {
        return Ok(Witness::new([0; 4], Domain::Z));
    }
    if !pair.cauchy_z_ok() {
        return Err(Error::Precondition(format!(
            "(c, d) = ({c}, {d}) needs c, d >= 0, c = d (mod 2), 4 ∤ c, 4c > d²"
        )));
    }
    let r = isqrt(c as i128) as i64;
    let mut w = d.div_euclid(4);
    while w >= -r {
        if let Some([x, y, z]) = solve_three(d - w, c - w * w, w) {
            return checked(Witness::new([w, x, y, z], Domain::Z), 1, c, d);
        }
        w -= 1;
    }
    Err(contradiction("cauchy_solve_z", c, d))
}

/// `3w² + x² + y² + z² = c`, `3w + x + y + z = d` over the naturals.
///
/// `w` is scanned downward from `d/3`; the remaining triple is reported with
/// `x >= y >= z`.
pub fn lem_ms_solve(c: i64, d: i64) -> Result<Witness> {
    let pair = CauchyPair::new(c, d);
    if !pair.weighted_ok() {
        return Err(Error::Precondition(format!(
            "(c, d) = ({c}, {d}) needs c, d >= 1, c = d (mod 2), c = 3 (mod 9) or 3 ∤ d, 6c > d², 5c < d² + 2d + 6"
        )));
    }
    for w in (0..=d / 3).rev() {
        if let Some([z, y, x]) = solve_three(d - 3 * w, c - 3 * w * w, 0) {
            return checked(Witness::new([w, x, y, z], Domain::N), 3, c, d);
        }
    }
    Err(contradiction("lem_ms_solve", c, d))
}

fn checked(wit: Witness, weight: i64, c: i64, d: i64) -> Result<Witness> {
    if wit.weighted_sums(weight) != (c, d) || !wit.in_domain() {
        return Err(Error::Contradiction(format!(
            "solver produced invalid tuple {wit:?} for ({c}, {d})"
        )));
    }
    Ok(wit)
}

/// 5-adic decomposition `n = 5^v * m` with `5 ∤ m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiveAdicClass {
    pub n: i64,
    pub v: u32,
    pub m: i64,
}

impl FiveAdicClass {
    /// `None` for `n = 0`, which is never in `E`.
    pub fn of(n: i64) -> Option<Self> {
        assert!(n >= 0);
        (n > 0).then(|| {
            let (v, m) = five_adic(n);
            FiveAdicClass { n, v, m }
        })
    }

    pub fn in_e(&self) -> bool {
        self.v % 2 == 1 && matches!(self.m % 5, 2 | 3)
    }
}

/// Membership in `E = { 5^(2k+1) m : m = ±2 (mod 5) }`.
pub fn in_e(n: i64) -> bool {
    FiveAdicClass::of(n).is_some_and(|c| c.in_e())
}

/// The ternary form `x² + y² + z² + (x+y+z)²/2`, for even `x + y + z`.
pub fn ks_form(x: i64, y: i64, z: i64) -> i64 {
    let s = x + y + z;
    x * x + y * y + z * z + s * s / 2
}

/// A representation of `m` by `x² + y² + z² + (x+y+z)²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsSolution {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl KsSolution {
    /// `-(x + y + z)/2`, so that `m = x² + y² + z² + 2w²` and `2w + x + y + z = 0`.
    pub fn w(&self) -> i64 {
        -(self.x + self.y + self.z) / 2
    }
}

/// 0, 1, -1, 2, -2, ... up to magnitude `r`.
fn outward(r: i64) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=r).flat_map(|k| [k, -k]))
}

/// Solves `x² + y² + z² + (x+y+z)²/2 = m` for even `m ∉ E`.
///
/// For each `(x, y)` the equation is a quadratic in `z`:
/// `3z² + 2sz + (2q + s² - 2m) = 0` with `s = x + y`, `q = x² + y²`,
/// so `z = (-s ± sqrt(6m - 6q - 2s²)) / 3`.
pub fn ks_solve(m: i64) -> Result<KsSolution> {
    if m < 0 || m.is_odd() {
        return Err(Error::Precondition(format!(
            "m = {m} must be a nonnegative even integer"
        )));
    }
    if in_e(m) {
        return Err(Error::Precondition(format!(
            "m = {m} lies in E and is not representable"
        )));
    }
    let r = isqrt(m as i128) as i64;
    // (x, y, z) -> (-x, -y, -z) preserves the form, so x >= 0 suffices.
    for x in 0..=r {
        let ry = isqrt((m - x * x) as i128) as i64;
        for y in outward(ry) {
            let s = x + y;
            let q = x * x + y * y;
            let disc = 6 * m - 6 * q - 2 * s * s;
            let Some(root) = exact_sqrt(disc as i128) else {
                continue;
            };
            let root = root as i64;
            for num in [-s + root, -s - root] {
                if num % 3 == 0 {
                    let z = num / 3;
                    if (s + z).is_even() && ks_form(x, y, z) == m {
                        return Ok(KsSolution { x, y, z });
                    }
                }
            }
        }
    }
    Err(Error::Contradiction(format!(
        "ks_solve: even m = {m} ∉ E has no representation"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All naturals `w <= x <= y <= z` with the given sums, by brute force.
    fn brute_n(c: i64, d: i64) -> Vec<[i64; 4]> {
        let mut out = vec![];
        for w in 0..=d {
            for x in w..=d {
                for y in x..=d {
                    let z = d - w - x - y;
                    if z >= y && w * w + x * x + y * y + z * z == c {
                        out.push([w, x, y, z]);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cauchy_examples() {
        assert_eq!(cauchy_solve(1, 1).unwrap().tuple(), [0, 0, 0, 1]);
        assert_eq!(cauchy_solve(2, 2).unwrap().tuple(), [0, 0, 1, 1]);
        assert_eq!(cauchy_solve(10, 6).unwrap().tuple(), [1, 1, 2, 2]);
        assert_eq!(cauchy_solve(1135, 67).unwrap().tuple(), [14, 17, 17, 19]);
        assert_eq!(brute_n(10, 6)[0], [1, 1, 2, 2]);
        assert_eq!(brute_n(1135, 67)[0], [14, 17, 17, 19]);
        assert_eq!(cauchy_solve(0, 0).unwrap().tuple(), [0; 4]);
    }

    #[test]
    fn cauchy_matches_brute_force_first_solution() {
        for d in 0..=40i64 {
            for c in 0..=450i64 {
                if !CauchyPair::new(c, d).cauchy_ok() {
                    continue;
                }
                let brute = brute_n(c, d);
                assert!(!brute.is_empty(), "lemma fails at ({c}, {d})?");
                assert_eq!(cauchy_solve(c, d).unwrap().tuple(), brute[0]);
            }
        }
    }

    #[test]
    fn cauchy_preconditions() {
        for (c, d) in [(4, 2), (3, 2), (1, 3), (12, 6), (-1, 1)] {
            assert!(
                matches!(cauchy_solve(c, d), Err(Error::Precondition(_))),
                "({c},{d})"
            );
        }
    }

    #[test]
    fn cauchy_z_examples() {
        assert_eq!(cauchy_solve_z(6, 0).unwrap().tuple(), [-1, -1, 0, 2]);
        let mut two = cauchy_solve_z(2, 0).unwrap().tuple();
        two.sort();
        let mut expect = [-1, 1, 0, 0];
        expect.sort();
        assert_eq!(two, expect);
        let w = cauchy_solve_z(10, 2).unwrap();
        assert_eq!(w.weighted_sums(1), (10, 2));
        // (-1, 0, 0, 3) and (1, 1, 2, -2) are both valid here
        assert_eq!(
            Witness::new([-1, 0, 0, 3], Domain::Z).weighted_sums(1),
            (10, 2)
        );
        assert_eq!(
            Witness::new([1, 1, 2, -2], Domain::Z).weighted_sums(1),
            (10, 2)
        );
        assert!(cauchy_solve_z(3, 5).is_err());
    }

    #[test]
    fn lem_ms_examples() {
        assert_eq!(lem_ms_solve(3, 3).unwrap().tuple(), [1, 0, 0, 0]);
        assert_eq!(lem_ms_solve(4, 4).unwrap().tuple(), [1, 1, 0, 0]);
        assert_eq!(lem_ms_solve(5, 5).unwrap().tuple(), [1, 1, 1, 0]);
        // 3 | d and c = 6 (mod 9)
        assert!(lem_ms_solve(6, 6).is_err());
    }

    #[test]
    fn e_membership() {
        assert!(in_e(10));
        assert!(!in_e(50));
        assert!(!in_e(4));
        assert!(!in_e(0));
        assert!(in_e(15));
        assert!(in_e(250));
        assert!(!in_e(500));
        assert_eq!(
            FiveAdicClass::of(250),
            Some(FiveAdicClass { n: 250, v: 3, m: 2 })
        );
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_solve(0).unwrap(), KsSolution { x: 0, y: 0, z: 0 });
        assert_eq!(ks_form(1, 1, 0), 4);
        assert_eq!(ks_form(1, 1, -2), 6);
        for m in [4, 6, 8, 12, 100, 1002] {
            let s = ks_solve(m).unwrap();
            assert_eq!(ks_form(s.x, s.y, s.z), m);
            assert_eq!(s.x * s.x + s.y * s.y + s.z * s.z + 2 * s.w() * s.w(), m);
        }
        assert!(ks_solve(7).is_err());
        assert!(matches!(ks_solve(10), Err(Error::Precondition(_))));
    }

    #[test]
    fn solvers_are_deterministic() {
        for (c, d) in [(1135, 67), (339, 35), (91, 17)] {
            assert_eq!(cauchy_solve(c, d).unwrap(), cauchy_solve(c, d).unwrap());
        }
        assert_eq!(ks_solve(4998).unwrap(), ks_solve(4998).unwrap());
    }
}
