//! Ground truth by sumset sieving.
//!
//! A problem's representable set up to `limit` is built one term at a time:
//! the running bitset is OR-ed with itself shifted by every value of the next
//! term. The output words are split into disjoint ranges processed in
//! parallel, so the result does not depend on the thread count.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{Domain, RepProblem, Term};

/// Default upper bound on sieve limits.
pub const DEFAULT_CAP: u64 = 10_000_000;

const MAGIC: &[u8; 4] = b"QRS1";
const CHUNK_WORDS: usize = 1 << 12;

/// A fixed-size bitset over `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn zeros(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| !self.get(i))
    }

    fn trim(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    /// `{ s + v : s ∈ self, v ∈ shifts }` truncated to `0..len`.
    fn shifted_or(&self, shifts: &[u64]) -> Bitset {
        let mut out = Bitset::new(self.len);
        let src = &self.words;
        out.words
            .par_chunks_mut(CHUNK_WORDS)
            .enumerate()
            .for_each(|(ci, chunk)| {
                let base = ci * CHUNK_WORDS;
                for &v in shifts {
                    let (ws, bs) = ((v / 64) as usize, (v % 64) as u32);
                    for (k, word) in chunk.iter_mut().enumerate() {
                        let j = base + k;
                        if j < ws {
                            continue;
                        }
                        let hi = src[j - ws];
                        let lo = if bs != 0 && j > ws {
                            src[j - ws - 1] >> (64 - bs)
                        } else {
                            0
                        };
                        *word |= (hi << bs) | lo;
                    }
                }
            });
        out.trim();
        out
    }

    fn to_bytes(&self) -> Vec<u8> {
        let nbytes = self.len.div_ceil(8);
        self.words
            .iter()
            .flat_map(|w| w.to_le_bytes())
            .take(nbytes)
            .collect()
    }

    fn from_bytes(bytes: &[u8], len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::Format(format!(
                "bitset payload has {} bytes, expected {}",
                bytes.len(),
                len.div_ceil(8)
            )));
        }
        let mut out = Bitset::new(len);
        for (i, chunk) in bytes.chunks(8).enumerate() {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            out.words[i] = u64::from_le_bytes(buf);
        }
        out.trim();
        Ok(out)
    }
}

/// The values `coeff * f(x) ∈ [0, limit]` of one term, with the `x` producing them.
#[derive(Debug, Clone)]
pub struct ValueStream {
    pairs: Vec<(i64, i64)>,
}

impl ValueStream {
    pub fn new(term: Term, limit: u64) -> Result<Self> {
        let limit = i64::try_from(limit).map_err(|_| Error::Overflow("limit"))?;
        let prm = term.params();
        let (a, b) = (prm.a(), prm.b().abs());
        // beyond X, a x² - |b| |x| > 2 limit >= f(x) / coeff for halved or not
        let x_max = (b + (b * b + 8 * a * limit).sqrt()) / (2 * a) + 2;
        let x_min = match term.domain() {
            Domain::N => 0,
            Domain::Z => -x_max,
        };
        let mut pairs = Vec::new();
        for x in x_min..=x_max {
            let v = term.value(x)?;
            if (0..=limit).contains(&v) {
                pairs.push((v, x));
            }
        }
        pairs.sort_unstable();
        Ok(ValueStream { pairs })
    }

    /// Sorted distinct values.
    pub fn values(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.pairs.iter().map(|&(v, _)| v as u64).collect();
        v.dedup();
        v
    }

    /// `(value, x)` pairs sorted by value, then `x`.
    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }
}

/// The representable integers of a problem on `[0, limit]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepSet {
    limit: u64,
    bits: Bitset,
}

impl RepSet {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.bits.get(n as usize)
    }

    pub fn bits(&self) -> &Bitset {
        &self.bits
    }

    /// Non-representable integers in `[0, limit]`, ascending.
    pub fn exceptions(&self) -> Vec<u64> {
        self.bits.zeros().map(|i| i as u64).collect()
    }

    /// The set restricted to `[0, limit]` for a smaller limit.
    pub fn truncate(&self, limit: u64) -> RepSet {
        let limit = limit.min(self.limit);
        let mut bits = Bitset::new(limit as usize + 1);
        let nw = bits.words.len();
        bits.words.copy_from_slice(&self.bits.words[..nw]);
        bits.trim();
        RepSet { limit, bits }
    }

    /// `QRS1`, the limit as little-endian u64, then the bitset bytes LSB first.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        w.write_all(&self.bits.to_bytes())?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<RepSet> {
        let mut head = [0u8; 12];
        r.read_exact(&mut head)?;
        if &head[..4] != MAGIC {
            return Err(Error::Format("bad magic, expected QRS1".into()));
        }
        let limit = u64::from_le_bytes(head[4..].try_into().expect("8 bytes"));
        if limit > DEFAULT_CAP * 16 {
            return Err(Error::Format(format!("implausible limit {limit} in dump")));
        }
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        Ok(RepSet {
            limit,
            bits: Bitset::from_bytes(&payload, limit as usize + 1)?,
        })
    }
}

/// Sieve settings.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    pub cap: u64,
    /// Directory for `QRS1` dumps; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            cap: DEFAULT_CAP,
            cache_dir: None,
        }
    }
}

impl SieveConfig {
    /// Default cap, cache directory from `QUADREP_CACHE_DIR` if set.
    pub fn from_env() -> Self {
        SieveConfig {
            cap: DEFAULT_CAP,
            cache_dir: std::env::var_os("QUADREP_CACHE_DIR").map(PathBuf::from),
        }
    }
}

fn check_limit(limit: u64, cap: u64) -> Result<()> {
    if limit > cap {
        return Err(Error::LimitCap { limit, cap });
    }
    Ok(())
}

/// Representable integers of `problem` on `[0, limit]` (cap [`DEFAULT_CAP`]).
pub fn sieve_representable(problem: &RepProblem, limit: u64) -> Result<RepSet> {
    sieve_with(problem, limit, &SieveConfig::default())
}

pub fn sieve_with(problem: &RepProblem, limit: u64, cfg: &SieveConfig) -> Result<RepSet> {
    check_limit(limit, cfg.cap)?;
    if let Some(dir) = &cfg.cache_dir {
        let path = cache_path(dir, problem, limit);
        if let Ok(file) = fs::File::open(&path) {
            let set = RepSet::read_from(std::io::BufReader::new(file))?;
            if set.limit == limit {
                return Ok(set);
            }
        }
        let set = sieve_uncached(problem, limit)?;
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension("tmp");
        set.write_to(std::io::BufWriter::new(fs::File::create(&tmp)?))?;
        fs::rename(&tmp, &path)?;
        return Ok(set);
    }
    sieve_uncached(problem, limit)
}

fn sieve_uncached(problem: &RepProblem, limit: u64) -> Result<RepSet> {
    let len = usize::try_from(limit).map_err(|_| Error::Overflow("limit"))? + 1;
    let mut terms = problem.terms().iter();
    let first = terms.next().expect("problems have at least one term");
    let mut bits = Bitset::new(len);
    for v in ValueStream::new(*first, limit)?.values() {
        bits.set(v as usize);
    }
    for t in terms {
        bits = bits.shifted_or(&ValueStream::new(*t, limit)?.values());
    }
    Ok(RepSet { limit, bits })
}

/// Cache file name: the problem's display form reduced to `[0-9A-Za-z_]`, plus the limit.
pub fn cache_path(dir: &Path, problem: &RepProblem, limit: u64) -> PathBuf {
    let key: String = problem
        .to_string()
        .chars()
        .map(|c| match c {
            '0'..='9' | 'a'..='z' | 'A'..='Z' => c,
            '+' => 'p',
            '-' => 'm',
            '*' => 't',
            '/' => 'h',
            _ => '_',
        })
        .collect();
    dir.join(format!("{key}_L{limit}.qrs"))
}

/// Non-representable integers in `[0, limit]`.
pub fn exceptions(problem: &RepProblem, limit: u64) -> Result<Vec<u64>> {
    Ok(sieve_representable(problem, limit)?.exceptions())
}

/// Largest exception in `[0, limit]` and whether the top 20% of the range is exception-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedThreshold {
    pub max_exception: Option<u64>,
    pub stable: bool,
}

impl ObservedThreshold {
    pub fn of(set: &RepSet) -> Self {
        let max_exception = set.exceptions().last().copied();
        let tail_start = set.limit - set.limit / 5;
        ObservedThreshold {
            max_exception,
            stable: max_exception.is_none_or(|m| m < tail_start),
        }
    }
}

pub fn min_threshold_observed(problem: &RepProblem, limit: u64) -> Result<ObservedThreshold> {
    Ok(ObservedThreshold::of(&sieve_representable(problem, limit)?))
}

/// Ordered-tuple representation counts for every `n` in `[0, limit]`.
pub fn count_all(problem: &RepProblem, limit: u64) -> Result<Vec<u64>> {
    check_limit(limit, DEFAULT_CAP)?;
    let len = limit as usize + 1;
    let mut acc = vec![0u64; len];
    acc[0] = 1;
    for t in problem.terms() {
        let mut mult: Vec<(usize, u64)> = Vec::new();
        for &(v, _) in ValueStream::new(*t, limit)?.pairs() {
            match mult.last_mut() {
                Some((last, m)) if *last == v as usize => *m += 1,
                _ => mult.push((v as usize, 1)),
            }
        }
        let prev = acc;
        acc = (0..len)
            .into_par_iter()
            .map(|n| {
                mult.iter()
                    .take_while(|&&(v, _)| v <= n)
                    .map(|&(v, m)| m * prev[n - v])
                    .sum()
            })
            .collect();
    }
    Ok(acc)
}

/// Number of ordered tuples representing `n`.
pub fn count_representations(problem: &RepProblem, n: u64) -> Result<u64> {
    Ok(count_all(problem, n)?[n as usize])
}

/// An explicit tuple for `n`, found by meet-in-the-middle over the last two
/// terms; independent of the bitset sieve.
pub fn find_tuple(problem: &RepProblem, n: u64) -> Result<Option<Vec<i64>>> {
    let terms = problem.terms();
    let streams = terms
        .iter()
        .map(|t| ValueStream::new(*t, n))
        .collect::<Result<Vec<_>>>()?;
    let k = terms.len();
    if k == 1 {
        return Ok(streams[0]
            .pairs()
            .iter()
            .find(|p| p.0 as u64 == n)
            .map(|p| vec![p.1]));
    }
    let mut tails: HashMap<i64, (i64, i64)> = HashMap::new();
    for &(v1, x1) in streams[k - 2].pairs() {
        for &(v2, x2) in streams[k - 1].pairs() {
            if v1 + v2 > n as i64 {
                break;
            }
            tails.entry(v1 + v2).or_insert((x1, x2));
        }
    }
    let mut prefix = Vec::with_capacity(k);
    let found = search_prefix(&streams[..k - 2], n as i64, &tails, &mut prefix);
    let tuple = found.map(|(x1, x2)| {
        prefix.extend([x1, x2]);
        prefix
    });
    if let Some(t) = &tuple {
        if problem.eval(t)? != n as i64 {
            return Err(Error::Contradiction(format!(
                "tuple {t:?} does not evaluate to {n}"
            )));
        }
    }
    Ok(tuple)
}

fn search_prefix(
    streams: &[ValueStream],
    rest: i64,
    tails: &HashMap<i64, (i64, i64)>,
    prefix: &mut Vec<i64>,
) -> Option<(i64, i64)> {
    let Some((head, more)) = streams.split_first() else {
        return tails.get(&rest).copied();
    };
    for &(v, x) in head.pairs() {
        if v > rest {
            break;
        }
        prefix.push(x);
        if let Some(t) = search_prefix(more, rest - v, tails, prefix) {
            return Some(t);
        }
        prefix.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{FormParams, Weighting};

    fn p(a: i64, b: i64) -> FormParams {
        FormParams::new(a, b).unwrap()
    }

    fn naive(problem: &RepProblem, limit: u64) -> Vec<bool> {
        let mut out = vec![false; limit as usize + 1];
        let vals: Vec<Vec<u64>> = problem
            .terms()
            .iter()
            .map(|t| ValueStream::new(*t, limit).unwrap().values())
            .collect();
        fn rec(vals: &[Vec<u64>], acc: u64, limit: u64, out: &mut [bool]) {
            match vals.split_first() {
                None => out[acc as usize] = true,
                Some((h, rest)) => {
                    for &v in h.iter().take_while(|&&v| acc + v <= limit) {
                        rec(rest, acc + v, limit, out);
                    }
                }
            }
        }
        rec(&vals, 0, limit, &mut out);
        out
    }

    #[test]
    fn value_streams() {
        let t = Term::new(p(3, 1), 1, true, Domain::N).unwrap();
        assert_eq!(
            ValueStream::new(t, 30).unwrap().values(),
            vec![0, 2, 7, 15, 26]
        );
        let t = Term::new(p(3, 1), 1, true, Domain::Z).unwrap();
        assert_eq!(
            ValueStream::new(t, 30).unwrap().values(),
            vec![0, 1, 2, 5, 7, 12, 15, 22, 26]
        );
    }

    #[test]
    fn squares_cover_everything() {
        let prob = RepProblem::uniform(p(2, 0), Weighting::Plain, true, Domain::N).unwrap();
        assert!(exceptions(&prob, 100).unwrap().is_empty());
    }

    #[test]
    fn second_pentagonal_exceptions() {
        let prob = RepProblem::uniform(p(3, 1), Weighting::Plain, true, Domain::N).unwrap();
        assert_eq!(
            exceptions(&prob, 1000).unwrap(),
            vec![1, 3, 5, 10, 12, 20, 25, 27, 38, 53, 65, 153, 165]
        );
    }

    #[test]
    fn matches_naive_across_word_boundaries() {
        for (a, b, halved, dom, w) in [
            (5, 1, true, Domain::N, Weighting::Plain),
            (4, -1, false, Domain::N, Weighting::Triple),
            (7, 3, true, Domain::Z, Weighting::Double),
        ] {
            let prob = RepProblem::uniform(p(a, b), w, halved, dom).unwrap();
            for limit in [63, 64, 65, 127, 700] {
                let set = sieve_representable(&prob, limit).unwrap();
                let oracle = naive(&prob, limit);
                for n in 0..=limit {
                    assert_eq!(set.contains(n), oracle[n as usize], "{prob} n={n}");
                }
            }
        }
    }

    #[test]
    fn counts() {
        let sq = Term::new(p(1, 0), 1, false, Domain::Z).unwrap();
        let prob = RepProblem::repeated(sq, 4).unwrap();
        let c = count_all(&prob, 10).unwrap();
        // Jacobi: r4(n) = 8 σ(n) for odd n
        assert_eq!(&c[..6], &[1, 8, 24, 32, 24, 48]);
        assert_eq!(count_representations(&prob, 1).unwrap(), 8);
        let prob = RepProblem::uniform(p(5, 1), Weighting::Plain, true, Domain::N).unwrap();
        assert_eq!(count_representations(&prob, 0).unwrap(), 1);
    }

    #[test]
    fn dump_round_trip_and_prefix() {
        let prob = RepProblem::uniform(p(5, -1), Weighting::Plain, true, Domain::N).unwrap();
        let big = sieve_representable(&prob, 1000).unwrap();
        let mut buf = Vec::new();
        big.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"QRS1");
        assert_eq!(buf.len(), 12 + 1001usize.div_ceil(8));
        assert_eq!(RepSet::read_from(&buf[..]).unwrap(), big);
        assert!(RepSet::read_from(&b"QRS0\0\0\0\0\0\0\0\0"[..]).is_err());
        let small = sieve_representable(&prob, 333).unwrap();
        assert_eq!(big.truncate(333), small);
    }

    #[test]
    fn find_tuple_agrees_with_sieve() {
        let prob = RepProblem::uniform(p(3, 1), Weighting::Double, true, Domain::N).unwrap();
        let set = sieve_representable(&prob, 400).unwrap();
        for n in 0..=400 {
            assert_eq!(
                find_tuple(&prob, n).unwrap().is_some(),
                set.contains(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn cap_enforced() {
        let prob = RepProblem::uniform(p(1, 0), Weighting::Plain, false, Domain::N).unwrap();
        assert!(matches!(
            sieve_representable(&prob, DEFAULT_CAP + 1),
            Err(Error::LimitCap { .. })
        ));
    }
}
