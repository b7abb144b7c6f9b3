//! Inversion sequences, their bargraph statistics, and the brute-force
//! distribution oracle.
//!
//! An inversion sequence of length `n` is `ρ_1 ⋯ ρ_n` with `1 ≤ ρ_i ≤ i`.
//! Reading `ρ_i` as the height of column `i` gives a bargraph.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mpoly::{Exponents, MPoly, Var};
use crate::recur::DistTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("inversion sequence must be nonempty")]
    Empty,
    #[error("entry {index} is {value}, outside [1, {index}]")]
    OutOfRange { index: usize, value: i64 },
    #[error("not a permutation of [{0}]")]
    NotAPermutation(usize),
    #[error("cannot parse sequence: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<u32>")]
pub struct InversionSequence(Vec<u32>);

impl InversionSequence {
    pub fn new(raw: Vec<u32>) -> Result<Self, SeqError> {
        Self::validate(&raw.iter().map(|&v| v as i64).collect::<Vec<_>>())
    }

    /// Checks `1 ≤ ρ_i ≤ i` for every position.
    pub fn validate(raw: &[i64]) -> Result<Self, SeqError> {
        if raw.is_empty() {
            return Err(SeqError::Empty);
        }
        for (k, &v) in raw.iter().enumerate() {
            let index = k + 1;
            if v < 1 || v > index as i64 {
                return Err(SeqError::OutOfRange { index, value: v });
            }
        }
        Ok(Self(raw.iter().map(|&v| v as u32).collect()))
    }

    pub(crate) fn from_vec_unchecked(v: Vec<u32>) -> Self {
        debug_assert!(Self::new(v.clone()).is_ok());
        Self(v)
    }

    /// `1 1 ⋯ 1`, the sequence of the identity permutation.
    pub fn all_ones(n: usize) -> Self {
        Self(vec![1; n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("nonempty")
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn stats(&self) -> StatRecord {
        stats(self)
    }
}

impl TryFrom<Vec<i64>> for InversionSequence {
    type Error = SeqError;
    fn try_from(v: Vec<i64>) -> Result<Self, SeqError> {
        Self::validate(&v)
    }
}

impl From<InversionSequence> for Vec<u32> {
    fn from(s: InversionSequence) -> Self {
        s.0
    }
}

impl fmt::Display for InversionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comma_list(f, &self.0)
    }
}

impl FromStr for InversionSequence {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, SeqError> {
        Self::validate(&parse_comma_list(s)?)
    }
}

/// A permutation of `[n]` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(oneline: Vec<u32>) -> Result<Self, SeqError> {
        let n = oneline.len();
        if n == 0 {
            return Err(SeqError::Empty);
        }
        let mut seen = vec![false; n + 1];
        for &v in &oneline {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(SeqError::NotAPermutation(n));
            }
            seen[v] = true;
        }
        Ok(Self(oneline))
    }

    pub(crate) fn from_vec_unchecked(v: Vec<u32>) -> Self {
        debug_assert!(Self::new(v.clone()).is_ok());
        Self(v)
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn oneline(&self) -> &[u32] {
        &self.0
    }

    /// `π(i)` for `i` in `1..=n`.
    pub fn image(&self, i: u32) -> u32 {
        self.0[i as usize - 1]
    }
}

impl TryFrom<Vec<u32>> for Permutation {
    type Error = SeqError;
    fn try_from(v: Vec<u32>) -> Result<Self, SeqError> {
        Self::new(v)
    }
}

impl From<Permutation> for Vec<u32> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_comma_list(f, &self.0)
    }
}

impl FromStr for Permutation {
    type Err = SeqError;
    fn from_str(s: &str) -> Result<Self, SeqError> {
        let raw = parse_comma_list(s)?;
        if raw.iter().any(|&v| v < 1) {
            return Err(SeqError::NotAPermutation(raw.len()));
        }
        Self::new(raw.into_iter().map(|v| v as u32).collect())
    }
}

fn write_comma_list(f: &mut fmt::Formatter<'_>, v: &[u32]) -> fmt::Result {
    for (k, x) in v.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

fn parse_comma_list(s: &str) -> Result<Vec<i64>, SeqError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(SeqError::Empty);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| SeqError::Parse(format!("bad entry {t:?}")))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StatRecord {
    pub area: u64,
    pub sper: u64,
    pub levels: u32,
    pub descents: u32,
    pub ascents: u32,
}

/// Entry `i` of the result is one more than the number of letters of
/// `[i-1]` to the right of `i` in `π`.
pub fn from_permutation(perm: &Permutation) -> InversionSequence {
    let n = perm.len();
    let mut pos = vec![0usize; n + 1];
    for (k, &v) in perm.oneline().iter().enumerate() {
        pos[v as usize] = k;
    }
    let entries = (1..=n)
        .map(|i| {
            let right_smaller = perm.oneline()[pos[i] + 1..]
                .iter()
                .filter(|&&v| (v as usize) < i)
                .count();
            right_smaller as u32 + 1
        })
        .collect();
    InversionSequence::from_vec_unchecked(entries)
}

/// Inverse of [`from_permutation`]: insert `1, 2, …, n` so that letter `i`
/// ends up with `ρ_i − 1` smaller letters to its right.
pub fn to_permutation(seq: &InversionSequence) -> Permutation {
    let mut line: Vec<u32> = Vec::with_capacity(seq.len());
    for (k, &r) in seq.entries().iter().enumerate() {
        let i = k as u32 + 1;
        let at = line.len() - (r as usize - 1);
        line.insert(at, i);
    }
    Permutation::from_vec_unchecked(line)
}

/// All of `I_n` in lexicographic order (a mixed-radix counter where digit `i`
/// runs over `1..=i`).
pub fn enumerate(n: usize) -> Enumerate {
    Enumerate::with_prefix(n, &[1])
}

/// Lexicographic stream over the members of `I_n` that start with `prefix`.
pub struct Enumerate {
    cur: Option<Vec<u32>>,
    fixed: usize,
}

impl Enumerate {
    /// `prefix` must itself be a valid inversion sequence of length at most `n`.
    pub fn with_prefix(n: usize, prefix: &[u32]) -> Self {
        if n == 0 || prefix.len() > n || prefix.is_empty() {
            return Self { cur: None, fixed: 0 };
        }
        let mut v = prefix.to_vec();
        v.resize(n, 1);
        Self {
            cur: Some(v),
            fixed: prefix.len(),
        }
    }

    fn advance(v: &mut [u32], fixed: usize) -> bool {
        for k in (fixed..v.len()).rev() {
            if v[k] < k as u32 + 1 {
                v[k] += 1;
                return true;
            }
            v[k] = 1;
        }
        false
    }
}

impl Iterator for Enumerate {
    type Item = InversionSequence;

    fn next(&mut self) -> Option<InversionSequence> {
        let cur = self.cur.as_mut()?;
        let out = InversionSequence(cur.clone());
        if !Self::advance(cur, self.fixed) {
            self.cur = None;
        }
        Some(out)
    }
}

/// Area, semi-perimeter, levels, descents and ascents of one sequence.
///
/// The perimeter is `2n + ρ_1 + ρ_n + Σ|ρ_i − ρ_{i−1}|` (horizontal steps,
/// bottom boundary, and the vertical steps), which is always even.
pub fn stats(seq: &InversionSequence) -> StatRecord {
    stats_of(seq.entries())
}

fn stats_of(e: &[u32]) -> StatRecord {
    let n = e.len() as u64;
    let area: u64 = e.iter().map(|&v| v as u64).sum();
    let mut vertical = e[0] as u64 + *e.last().unwrap() as u64;
    let (mut levels, mut descents, mut ascents) = (0u32, 0u32, 0u32);
    for w in e.windows(2) {
        vertical += (w[0] as i64 - w[1] as i64).unsigned_abs();
        match w[0].cmp(&w[1]) {
            std::cmp::Ordering::Equal => levels += 1,
            std::cmp::Ordering::Greater => descents += 1,
            std::cmp::Ordering::Less => ascents += 1,
        }
    }
    debug_assert!(vertical.is_multiple_of(2));
    StatRecord {
        area,
        sper: n + vertical / 2,
        levels,
        descents,
        ascents,
    }
}

type Counts = HashMap<(u32, Exponents), u64>;

fn merge_counts(mut a: Counts, b: Counts) -> Counts {
    if a.len() < b.len() {
        return merge_counts(b, a);
    }
    for (k, c) in b {
        *a.entry(k).or_insert(0) += c;
    }
    a
}

/// Valid prefixes of length `k` (used to split enumeration across workers).
fn prefixes(k: usize) -> Vec<Vec<u32>> {
    Enumerate::with_prefix(k, &[1]).map(|s| s.0).collect()
}

/// Row `n` of a brute-force distribution: entry `i-1` is
/// `Σ_{ρ ∈ I_{n,i}} x^{weight(ρ)}`.
pub(crate) fn brute_row<F>(n: usize, weight: F) -> Vec<MPoly>
where
    F: Fn(&StatRecord) -> Exponents + Sync,
{
    let split = n.min(5);
    let counts = prefixes(split)
        .into_par_iter()
        .map(|pre| {
            let mut local = Counts::new();
            for s in Enumerate::with_prefix(n, &pre) {
                let st = stats_of(&s.0);
                *local.entry((s.last(), weight(&st))).or_insert(0) += 1;
            }
            local
        })
        .reduce(Counts::new, merge_counts);

    let mut row = vec![MPoly::zero(); n];
    for ((last, e), c) in counts {
        row[last as usize - 1] += &MPoly::monomial(BigInt::from(c), e);
    }
    row
}

fn brute_table<F>(n: usize, weight: F) -> DistTable
where
    F: Fn(&StatRecord) -> Exponents + Sync + Copy,
{
    let rows = (1..=n.max(1)).map(|m| brute_row(m, weight)).collect();
    DistTable::from_rows(rows)
}

fn area_sper_exps(st: &StatRecord) -> Exponents {
    let mut e = [0; 5];
    e[Var::P.index()] = st.area as i32;
    e[Var::Q.index()] = st.sper as i32;
    e
}

fn lda_exps(st: &StatRecord) -> Exponents {
    let mut e = [0; 5];
    e[Var::P.index()] = st.levels as i32;
    e[Var::Q.index()] = st.descents as i32;
    e[Var::R.index()] = st.ascents as i32;
    e
}

/// `a_{m,i}(p,q) = Σ_{ρ ∈ I_{m,i}} p^area q^sper` by exhaustive enumeration,
/// for every `m ≤ n`.
pub fn brute_dist_area_sper(n: usize) -> DistTable {
    brute_table(n, area_sper_exps)
}

/// `b_{m,i}(p,q,r) = Σ p^levels q^descents r^ascents` over `I_{m,i}`, `m ≤ n`.
pub fn brute_dist_lda(n: usize) -> DistTable {
    brute_table(n, lda_exps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[u32]) -> InversionSequence {
        InversionSequence::new(v.to_vec()).unwrap()
    }

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(InversionSequence::validate(&[1, 2, 1, 3, 5, 3]).is_ok());
        assert!(InversionSequence::validate(&[1]).is_ok());
        assert_eq!(
            InversionSequence::validate(&[2]).unwrap_err(),
            SeqError::OutOfRange { index: 1, value: 2 }
        );
        assert_eq!(InversionSequence::validate(&[]).unwrap_err(), SeqError::Empty);
        assert_eq!(
            InversionSequence::validate(&[1, 0]).unwrap_err(),
            SeqError::OutOfRange { index: 2, value: 0 }
        );
    }

    #[test]
    fn permutation_conversions() {
        assert_eq!(
            from_permutation(&perm(&[5, 2, 4, 6, 1, 3])),
            seq(&[1, 2, 1, 3, 5, 3])
        );
        assert_eq!(
            to_permutation(&seq(&[1, 2, 1, 3, 5, 3])),
            perm(&[5, 2, 4, 6, 1, 3])
        );
        assert_eq!(
            from_permutation(&Permutation::identity(5)),
            InversionSequence::all_ones(5)
        );
        assert_eq!(from_permutation(&perm(&[3, 2, 1])), seq(&[1, 2, 3]));
        assert_eq!(
            to_permutation(&InversionSequence::all_ones(4)),
            Permutation::identity(4)
        );
    }

    #[test]
    fn round_trip_i4() {
        let all: Vec<_> = enumerate(4).collect();
        assert_eq!(all.len(), 24);
        for s in all {
            assert_eq!(from_permutation(&to_permutation(&s)), s);
        }
    }

    #[test]
    fn enumeration_order() {
        let one: Vec<_> = enumerate(1).collect();
        assert_eq!(one, vec![seq(&[1])]);
        let three: Vec<String> = enumerate(3).map(|s| s.to_string()).collect();
        assert_eq!(three, ["1,1,1", "1,1,2", "1,1,3", "1,2,1", "1,2,2", "1,2,3"]);
        let six: Vec<_> = enumerate(6).collect();
        assert_eq!(six.len(), 720);
        assert_eq!(six[0], InversionSequence::all_ones(6));
        assert_eq!(six[719], seq(&[1, 2, 3, 4, 5, 6]));
    }

    #[test]
    fn stats_examples() {
        let s = stats(&seq(&[1, 2, 1, 3, 5, 3]));
        assert_eq!((s.area, s.sper), (15, 12));
        let s = stats(&seq(&[1, 1, 1]));
        assert_eq!(
            s,
            StatRecord {
                area: 3,
                sper: 4,
                levels: 2,
                descents: 0,
                ascents: 0
            }
        );
        let s = stats(&seq(&[1, 2, 3]));
        assert_eq!(
            s,
            StatRecord {
                area: 6,
                sper: 6,
                levels: 0,
                descents: 0,
                ascents: 2
            }
        );
    }

    #[test]
    fn text_forms() {
        assert_eq!(
            "1,2,1,3,5,3".parse::<InversionSequence>().unwrap(),
            seq(&[1, 2, 1, 3, 5, 3])
        );
        assert!("1,3".parse::<InversionSequence>().is_err());
        assert!("1,,2".parse::<InversionSequence>().is_err());
        assert!("".parse::<InversionSequence>().is_err());
        assert_eq!(
            "5,2,4,6,1,3".parse::<Permutation>().unwrap().to_string(),
            "5,2,4,6,1,3"
        );
        assert!("1,1".parse::<Permutation>().is_err());
        assert!("0,1".parse::<Permutation>().is_err());
    }

    #[test]
    fn stat_record_json() {
        let js = serde_json::to_string(&stats(&seq(&[1, 2, 1, 3, 5, 3]))).unwrap();
        assert_eq!(js, r#"{"area":15,"sper":12,"levels":0,"descents":2,"ascents":3}"#);
    }

    #[test]
    fn brute_small_tables() {
        let a = brute_dist_area_sper(3);
        assert_eq!(a.get(1, 1).to_string(), "p*q^2");
        assert_eq!(a.get(2, 1).to_string(), "p^2*q^3");
        assert_eq!(a.get(2, 2).to_string(), "p^3*q^4");
        assert_eq!(a.get(3, 2), &"p^4*q^5+p^5*q^5".parse().unwrap());

        let b = brute_dist_lda(3);
        assert_eq!(b.get(1, 1), &MPoly::one());
        assert_eq!(b.get(2, 1).to_string(), "p");
        assert_eq!(b.get(2, 2).to_string(), "r");
        assert_eq!(b.get(3, 1), &"q*r+p^2".parse().unwrap());
        assert_eq!(b.get(3, 2), &"2*p*r".parse().unwrap());
        assert_eq!(b.get(3, 3), &"p*r+r^2".parse().unwrap());
    }
}
