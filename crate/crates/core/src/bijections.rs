//! Involutions on inversion sequences and the bijections `f` (levels to
//! cycles) and `g` (ascent-preserving) onto permutations.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::invseq::{InversionSequence, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BijectionError {
    #[error("sequence of length {0} is too short for this map")]
    TooShort(usize),
    #[error("malformed cycles: {0}")]
    MalformedCycles(String),
}

/// Disjoint cycles covering `[n]`, kept in standard form: each cycle starts
/// at its smallest element and cycles are ordered by that element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleForm {
    cycles: Vec<Vec<u32>>,
}

impl CycleForm {
    pub fn new(cycles: Vec<Vec<u32>>) -> Result<Self, BijectionError> {
        let n: usize = cycles.iter().map(Vec::len).sum();
        if n == 0 {
            return Err(BijectionError::MalformedCycles("no elements".into()));
        }
        let mut seen = vec![false; n + 1];
        for c in &cycles {
            if c.is_empty() {
                return Err(BijectionError::MalformedCycles("empty cycle".into()));
            }
            for &v in c {
                let v = v as usize;
                if v == 0 || v > n {
                    return Err(BijectionError::MalformedCycles(format!(
                        "{v} is outside [1, {n}]"
                    )));
                }
                if seen[v] {
                    return Err(BijectionError::MalformedCycles(format!("{v} appears twice")));
                }
                seen[v] = true;
            }
        }
        Ok(Self::normalized(cycles))
    }

    fn normalized(mut cycles: Vec<Vec<u32>>) -> Self {
        for c in &mut cycles {
            let at = c
                .iter()
                .enumerate()
                .min_by_key(|(_, v)| **v)
                .map(|(k, _)| k)
                .unwrap_or(0);
            c.rotate_left(at);
        }
        cycles.sort_by_key(|c| c[0]);
        Self { cycles }
    }

    pub fn from_permutation(perm: &Permutation) -> Self {
        let n = perm.len();
        let mut seen = vec![false; n + 1];
        let mut cycles = Vec::new();
        for start in 1..=n as u32 {
            if seen[start as usize] {
                continue;
            }
            let mut c = Vec::new();
            let mut v = start;
            while !seen[v as usize] {
                seen[v as usize] = true;
                c.push(v);
                v = perm.image(v);
            }
            cycles.push(c);
        }
        Self { cycles }
    }

    pub fn to_permutation(&self) -> Permutation {
        let mut line = vec![0u32; self.len()];
        for c in &self.cycles {
            for (k, &v) in c.iter().enumerate() {
                line[v as usize - 1] = c[(k + 1) % c.len()];
            }
        }
        Permutation::from_vec_unchecked(line)
    }

    pub fn cycles(&self) -> &[Vec<u32>] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// Remove every element larger than `m`, keeping the cyclic order of the rest.
    pub fn restrict(&self, m: u32) -> CycleForm {
        let cycles = self
            .cycles
            .iter()
            .map(|c| c.iter().copied().filter(|&v| v <= m).collect::<Vec<_>>())
            .filter(|c| !c.is_empty())
            .collect();
        Self::normalized(cycles)
    }

    /// The element mapped to `v`.
    fn predecessor(&self, v: u32) -> Option<u32> {
        self.cycles.iter().find_map(|c| {
            let k = c.iter().position(|&x| x == v)?;
            Some(c[(k + c.len() - 1) % c.len()])
        })
    }
}

impl fmt::Display for CycleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            f.write_str("(")?;
            for (k, v) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl FromStr for CycleForm {
    type Err = BijectionError;

    fn from_str(s: &str) -> Result<Self, BijectionError> {
        let bad = |m: &str| BijectionError::MalformedCycles(m.to_string());
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut cycles = Vec::new();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest);
            let body = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
            let close = body.find(')').ok_or_else(|| bad("missing ')'"))?;
            let cycle = body[..close]
                .split(',')
                .map(|t| t.parse::<u32>().map_err(|_| bad(&format!("bad element {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
            rest = &body[close + 1..];
        }
        Self::new(cycles)
    }
}

/// `ρ_i ↦ i + 1 − ρ_i`. Exchanges ascents with levels-plus-descents.
pub fn complement(seq: &InversionSequence) -> InversionSequence {
    let v = seq
        .entries()
        .iter()
        .enumerate()
        .map(|(k, &r)| k as u32 + 2 - r)
        .collect();
    InversionSequence::from_vec_unchecked(v)
}

/// `ρ_2 ↦ 3 − ρ_2`, which changes the area by exactly one.
pub fn area_flip(seq: &InversionSequence) -> Result<InversionSequence, BijectionError> {
    if seq.len() < 2 {
        return Err(BijectionError::TooShort(seq.len()));
    }
    let mut v = seq.entries().to_vec();
    v[1] = 3 - v[1];
    Ok(InversionSequence::from_vec_unchecked(v))
}

/// With `k` the smallest index where `ρ_k ∉ {k−1, k}`, replaces `ρ_{k−1}` by
/// `2k − 3 − ρ_{k−1}`. Returns `None` when no such `k` exists.
pub fn sper_involution(seq: &InversionSequence) -> Option<InversionSequence> {
    let e = seq.entries();
    let k = (2..=e.len()).find(|&i| {
        let r = e[i - 1] as usize;
        r != i - 1 && r != i
    })?;
    let mut v = e.to_vec();
    v[k - 2] = (2 * k - 3) as u32 - v[k - 2];
    Some(InversionSequence::from_vec_unchecked(v))
}

/// With `j` the first index where `ρ_j > 2`, replaces `ρ_{j−1}` by
/// `3 − ρ_{j−1}`. Returns `None` on binary sequences.
pub fn levels_involution(seq: &InversionSequence) -> Option<InversionSequence> {
    let e = seq.entries();
    let j = e.iter().position(|&r| r > 2)?;
    let mut v = e.to_vec();
    v[j - 1] = 3 - v[j - 1];
    Some(InversionSequence::from_vec_unchecked(v))
}

/// `k`-th smallest element (1-based) of `[m] − {skip}`.
fn kth_smallest_skipping(m: u32, skip: u32, k: u32) -> u32 {
    debug_assert!(k < m);
    if k < skip {
        k
    } else {
        k + 1
    }
}

/// Rank (1-based) of `v` within `[m] − {skip}`, `v ≠ skip`.
fn rank_skipping(v: u32, skip: u32) -> u32 {
    if v < skip {
        v
    } else {
        v - 1
    }
}

/// Builds a permutation with `levels(ρ) + 1` cycles by inserting `2, …, n`
/// in turn: a level opens a new cycle; otherwise, if `ρ_j` is the `i`-th
/// smallest element of `[j] − {ρ_{j−1}}`, `j` is placed right after `i`.
pub fn f_levels_to_cycles(seq: &InversionSequence) -> CycleForm {
    let e = seq.entries();
    let mut cycles: Vec<Vec<u32>> = vec![vec![1]];
    for j in 2..=e.len() as u32 {
        let prev = e[j as usize - 2];
        let cur = e[j as usize - 1];
        if cur == prev {
            cycles.push(vec![j]);
            continue;
        }
        let i = rank_skipping(cur, prev);
        for c in cycles.iter_mut() {
            if let Some(at) = c.iter().position(|&v| v == i) {
                c.insert(at + 1, j);
                break;
            }
        }
    }
    CycleForm::normalized(cycles)
}

/// Inverse of [`f_levels_to_cycles`], reading `ρ_j` off the restriction of
/// the cycles to `[j]`.
pub fn f_inverse(cycles: &CycleForm) -> InversionSequence {
    let n = cycles.len() as u32;
    let mut v = vec![1u32];
    for j in 2..=n {
        let prev = v[j as usize - 2];
        let restricted = cycles.restrict(j);
        let pred = restricted.predecessor(j).expect("j is in its restriction");
        if pred == j {
            v.push(prev);
        } else {
            v.push(kth_smallest_skipping(j, prev, pred));
        }
    }
    InversionSequence::from_vec_unchecked(v)
}

/// Appends each `ρ_j` in turn, first shifting the letters in `[ρ_j, j−1]`
/// up by one. Preserves the number of ascents.
pub fn g_ascents(seq: &InversionSequence) -> Permutation {
    let mut line: Vec<u32> = Vec::with_capacity(seq.len());
    for &r in seq.entries() {
        for v in line.iter_mut() {
            if *v >= r {
                *v += 1;
            }
        }
        line.push(r);
    }
    Permutation::from_vec_unchecked(line)
}

/// Inverse of [`g_ascents`]: strip the last letter `v` as `ρ_j`, then shift
/// every larger remaining letter down by one.
pub fn g_inverse(perm: &Permutation) -> InversionSequence {
    let mut line = perm.oneline().to_vec();
    let mut rev = Vec::with_capacity(line.len());
    while let Some(v) = line.pop() {
        rev.push(v);
        for x in line.iter_mut() {
            if *x > v {
                *x -= 1;
            }
        }
    }
    rev.reverse();
    InversionSequence::from_vec_unchecked(rev)
}

pub fn cycle_count(perm: &Permutation) -> usize {
    CycleForm::from_permutation(perm).cycle_count()
}

pub fn ascent_count(perm: &Permutation) -> usize {
    perm.oneline().windows(2).filter(|w| w[0] < w[1]).count()
}
