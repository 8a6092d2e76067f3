//! Set partitions of `[n] = {1, .., n}` and the refinement lattice on them.
//!
//! Orientation: a partition is *smaller* when it is *coarser*. The bottom
//! element `⊥` is the single block `[n]`, the top element `⊤` is the
//! partition into singletons, and `a.leq(&b)` holds when every block of `b`
//! lies inside some block of `a`. Accordingly [`SetPartition::meet`] is the
//! finest common coarsening and [`SetPartition::join`] the coarsest common
//! refinement.
//!
//! Partitions are stored as restricted-growth strings: element `i` (0-based)
//! carries the index of its block, blocks numbered by first occurrence. The
//! derived `Ord` is therefore the lexicographic restricted-growth order that
//! [`enumerate`] follows.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntegerPartition(Vec<usize>);

impl IntegerPartition {
    /// Builds an integer partition from parts in any order. Zero parts are
    /// rejected.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if let Some(pos) = parts.iter().position(|&p| p == 0) {
            return Err(Error::validation(
                "lambda",
                format!("part #{} is zero; parts must be positive", pos + 1),
            ));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(IntegerPartition(parts))
    }

    pub(crate) fn from_unsorted(mut parts: Vec<usize>) -> Self {
        debug_assert!(parts.iter().all(|&p| p > 0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        IntegerPartition(parts)
    }

    pub fn empty() -> Self {
        IntegerPartition(Vec::new())
    }

    /// The partition `1^r` with `r` parts equal to one.
    pub fn ones(r: usize) -> Self {
        IntegerPartition(vec![1; r])
    }

    pub fn single(part: usize) -> Self {
        assert!(part > 0, "parts must be positive");
        IntegerPartition(vec![part])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the parts, `|λ|`.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Parses `"4,2,1"`. Returns the partition and whether the input had to be
    /// reordered to become weakly decreasing.
    pub fn parse_list(text: &str) -> Result<(Self, bool)> {
        let mut parts = Vec::new();
        for piece in text.split(',') {
            let piece = piece.trim();
            let value: usize = piece.parse().map_err(|_| {
                Error::validation("lambda", format!("'{piece}' is not a positive integer"))
            })?;
            parts.push(value);
        }
        let reordered = parts.windows(2).any(|w| w[0] < w[1]);
        Ok((IntegerPartition::new(parts)?, reordered))
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for IntegerPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        IntegerPartition::new(parts).map_err(serde::de::Error::custom)
    }
}

/// A partition of `[n]` in canonical restricted-growth form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u32>,
    blocks: u32,
}

/// Relabels arbitrary block keys by first occurrence.
fn canonicalize<K: std::hash::Hash + Eq + Copy>(keys: impl IntoIterator<Item = K>) -> SetPartition {
    let mut ids: HashMap<K, u32> = HashMap::new();
    let rgs: Vec<u32> = keys
        .into_iter()
        .map(|k| {
            let next = ids.len() as u32;
            *ids.entry(k).or_insert(next)
        })
        .collect();
    SetPartition {
        rgs,
        blocks: ids.len() as u32,
    }
}

impl SetPartition {
    /// The one-block partition `⊥`.
    pub fn bottom(n: usize) -> Self {
        assert!(n > 0, "ground set must be nonempty");
        SetPartition {
            rgs: vec![0; n],
            blocks: 1,
        }
    }

    /// The partition into singletons `⊤`.
    pub fn top(n: usize) -> Self {
        assert!(n > 0, "ground set must be nonempty");
        SetPartition {
            rgs: (0..n as u32).collect(),
            blocks: n as u32,
        }
    }

    /// Accepts a restricted-growth string; fails if it is not canonical.
    pub fn from_rgs(rgs: &[usize]) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::validation("n", "ground set must be nonempty"));
        }
        let mut max: Option<usize> = None;
        for (i, &v) in rgs.iter().enumerate() {
            let bound = max.map_or(0, |m| m + 1);
            if v > bound {
                return Err(Error::validation(
                    "assignment",
                    format!("entry {} is {v}, exceeds restricted-growth bound {bound}", i + 1),
                ));
            }
            max = Some(max.map_or(v, |m| m.max(v)));
        }
        Ok(SetPartition {
            rgs: rgs.iter().map(|&v| v as u32).collect(),
            blocks: max.unwrap() as u32 + 1,
        })
    }

    /// Builds a partition from 1-based blocks given in any order.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("n", "ground set must be nonempty"));
        }
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            let block = block.as_ref();
            if block.is_empty() {
                return Err(Error::validation("blocks", format!("block #{} is empty", b + 1)));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::validation(
                        "blocks",
                        format!("element {e} is outside [1, {n}]"),
                    ));
                }
                if owner[e - 1].is_some() {
                    return Err(Error::validation(
                        "blocks",
                        format!("element {e} occurs more than once"),
                    ));
                }
                owner[e - 1] = Some(b);
            }
        }
        if let Some(missing) = owner.iter().position(Option::is_none) {
            return Err(Error::validation(
                "blocks",
                format!("element {} is not covered by any block", missing + 1),
            ));
        }
        Ok(canonicalize(owner.into_iter().map(Option::unwrap)))
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    /// Number of blocks, `ρ(π)`.
    pub fn rank(&self) -> usize {
        self.blocks as usize
    }

    pub fn assignment(&self) -> &[u32] {
        &self.rgs
    }

    /// Block index (0-based) of the 1-based element `e`.
    pub fn block_of(&self, e: usize) -> usize {
        self.rgs[e - 1] as usize
    }

    fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.rank()];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Number of essential (non-singleton) blocks, `ε(π)`.
    pub fn essential_count(&self) -> usize {
        self.block_sizes().into_iter().filter(|&s| s >= 2).count()
    }

    /// Essential shape `λ(π)`: block sizes minus one over essential blocks.
    pub fn shape(&self) -> IntegerPartition {
        IntegerPartition::from_unsorted(
            self.block_sizes()
                .into_iter()
                .filter(|&s| s >= 2)
                .map(|s| s - 1)
                .collect(),
        )
    }

    /// Multiset of all block sizes, singletons included.
    pub fn block_size_multiset(&self) -> IntegerPartition {
        IntegerPartition::from_unsorted(self.block_sizes())
    }

    /// `(ρ, ε, λ)`.
    pub fn stats(&self) -> (usize, usize, IntegerPartition) {
        (self.rank(), self.essential_count(), self.shape())
    }

    /// Blocks as ascending 1-based element lists, ordered by minimum.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.rank()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i + 1);
        }
        out
    }

    /// Blocks with at least two elements, ordered by minimum.
    pub fn essential_blocks(&self) -> Vec<Vec<usize>> {
        self.blocks().into_iter().filter(|b| b.len() >= 2).collect()
    }

    pub fn is_top(&self) -> bool {
        self.rank() == self.n()
    }

    pub fn is_bottom(&self) -> bool {
        self.rank() == 1
    }

    fn check_same_n(&self, other: &SetPartition) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    /// `self ≤ other`: every block of `other` lies inside a block of `self`.
    pub fn leq(&self, other: &SetPartition) -> Result<bool> {
        self.check_same_n(other)?;
        Ok(self.leq_unchecked(other))
    }

    pub(crate) fn leq_unchecked(&self, other: &SetPartition) -> bool {
        if self.blocks > other.blocks {
            return false;
        }
        let mut image: Vec<Option<u32>> = vec![None; other.rank()];
        for (&mine, &theirs) in self.rgs.iter().zip(&other.rgs) {
            match image[theirs as usize] {
                None => image[theirs as usize] = Some(mine),
                Some(b) if b != mine => return false,
                _ => {}
            }
        }
        true
    }

    /// Strictly smaller (strictly coarser).
    pub fn lt(&self, other: &SetPartition) -> Result<bool> {
        Ok(self != other && self.leq(other)?)
    }

    /// Greatest lower bound: the finest partition coarser than both, i.e. the
    /// transitive closure of the union of the two equivalence relations.
    pub fn meet(&self, other: &SetPartition) -> Result<SetPartition> {
        self.check_same_n(other)?;
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for rgs in [&self.rgs, &other.rgs] {
            let mut first: Vec<Option<usize>> = vec![None; n];
            for (i, &b) in rgs.iter().enumerate() {
                match first[b as usize] {
                    None => first[b as usize] = Some(i),
                    Some(j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Ok(canonicalize(roots))
    }

    /// Least upper bound: the coarsest common refinement, i.e. the
    /// intersection of the two equivalence relations.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        self.check_same_n(other)?;
        Ok(canonicalize(self.rgs.iter().copied().zip(other.rgs.iter().copied())))
    }

    /// Every partition strictly finer than `self` (including `⊤` unless
    /// `self` is `⊤`), in restricted-growth order.
    pub fn strict_refinements(&self) -> Vec<SetPartition> {
        let blocks = self.blocks();
        let splits: Vec<Vec<SetPartition>> = blocks
            .iter()
            .map(|b| Partitions::new(b.len(), None).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; blocks.len()];
        let mut key = vec![(0u32, 0u32); self.n()];
        loop {
            if choice.iter().any(|&c| c > 0) {
                for (bi, block) in blocks.iter().enumerate() {
                    let sub = &splits[bi][choice[bi]];
                    for (pos, &e) in block.iter().enumerate() {
                        key[e - 1] = (bi as u32, sub.rgs[pos]);
                    }
                }
                out.push(canonicalize(key.iter().copied()));
            }
            // odometer; index 0 is the unsplit block
            let mut i = 0;
            loop {
                if i == choice.len() {
                    out.sort();
                    return out;
                }
                choice[i] += 1;
                if choice[i] < splits[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    /// Shape of the interval `[self, finer]`: for every block of `self` that
    /// splits into `b ≥ 2` blocks of `finer`, a part `b - 1`.
    pub fn interval_shape(&self, finer: &SetPartition) -> Result<IntegerPartition> {
        self.check_same_n(finer)?;
        if self == finer || !self.leq_unchecked(finer) {
            return Err(Error::NotComparable(format!(
                "[{self}, {finer}] is not a nontrivial interval"
            )));
        }
        let mut pieces = vec![0usize; self.rank()];
        let mut seen = vec![false; finer.rank()];
        for (&mine, &theirs) in self.rgs.iter().zip(&finer.rgs) {
            if !seen[theirs as usize] {
                seen[theirs as usize] = true;
                pieces[mine as usize] += 1;
            }
        }
        Ok(IntegerPartition::from_unsorted(
            pieces.into_iter().filter(|&b| b >= 2).map(|b| b - 1).collect(),
        ))
    }
}

/// Writes a block; digits run together when every element is a single digit.
pub(crate) fn fmt_block(block: &[usize], n: usize, f: &mut impl fmt::Write) -> fmt::Result {
    let sep = if n < 10 { "" } else { "," };
    for (i, e) in block.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

pub(crate) fn block_string(block: &[usize], n: usize) -> String {
    let mut s = String::new();
    fmt_block(block, n, &mut s).expect("writing to a String");
    s
}

impl fmt::Display for SetPartition {
    /// `12357|468|9`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            fmt_block(b, self.n(), f)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PartitionJson {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PartitionJson {
            n: self.n(),
            blocks: self.blocks(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(d)?;
        SetPartition::from_blocks(raw.n, &raw.blocks).map_err(serde::de::Error::custom)
    }
}

/// Stream of the partitions of `[n]` in lexicographic restricted-growth order,
/// optionally restricted to exactly `k` blocks.
#[derive(Debug, Clone)]
pub struct Partitions {
    rgs: Vec<u32>,
    // prefix maxima of `rgs`
    maxes: Vec<u32>,
    k: Option<usize>,
    done: bool,
}

impl Partitions {
    fn new(n: usize, k: Option<usize>) -> Self {
        Partitions {
            rgs: vec![0; n],
            maxes: vec![0; n],
            k,
            done: n == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        for i in (1..n).rev() {
            if self.rgs[i] <= self.maxes[i - 1] {
                self.rgs[i] += 1;
                self.maxes[i] = self.maxes[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for Partitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        while !self.done {
            let blocks = self.maxes[self.rgs.len() - 1] + 1;
            let current = SetPartition {
                rgs: self.rgs.clone(),
                blocks,
            };
            if !self.advance() {
                self.done = true;
            }
            if self.k.is_none_or(|k| k == blocks as usize) {
                return Some(current);
            }
        }
        None
    }
}

/// All partitions of `[n]` (into exactly `k` blocks when given).
pub fn enumerate(n: usize, k: Option<usize>) -> Result<Partitions> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    if let Some(k) = k {
        if k == 0 || k > n {
            return Err(Error::validation("k", format!("{k} is outside [1, {n}]")));
        }
    }
    Ok(Partitions::new(n, k))
}

static STIRLING2: RwLock<Vec<Vec<BigUint>>> = RwLock::new(Vec::new());
static BELL_TRIANGLE: RwLock<Vec<Vec<BigUint>>> = RwLock::new(Vec::new());

/// Stirling number of the second kind `S(n, k)`; zero when `k > n`.
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    {
        let table = STIRLING2.read().unwrap();
        if let Some(row) = table.get(n) {
            return row[k].clone();
        }
    }
    let mut table = STIRLING2.write().unwrap();
    if table.is_empty() {
        table.push(vec![BigUint::one()]);
    }
    while table.len() <= n {
        let prev = table.last().unwrap();
        let i = table.len();
        let mut row = vec![BigUint::zero(); i + 1];
        for j in 1..=i {
            let stay = if j < i { &prev[j] * j } else { BigUint::zero() };
            row[j] = stay + &prev[j - 1];
        }
        table.push(row);
    }
    table[n][k].clone()
}

/// Bell number `B(n)`, from the Bell triangle.
pub fn bell(n: usize) -> BigUint {
    {
        let table = BELL_TRIANGLE.read().unwrap();
        if let Some(row) = table.get(n) {
            return row[0].clone();
        }
    }
    let mut table = BELL_TRIANGLE.write().unwrap();
    if table.is_empty() {
        table.push(vec![BigUint::one()]);
    }
    while table.len() <= n {
        let prev = table.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(prev[prev.len() - 1].clone());
        for p in prev {
            let next = row.last().unwrap() + p;
            row.push(next);
        }
        table.push(row);
    }
    table[n][0].clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::from_blocks(n, blocks).unwrap()
    }

    #[test]
    fn from_blocks_reads_written_partitions() {
        let pi1 = p(9, &[&[1, 2, 3, 5, 7], &[9], &[4, 6, 8]]);
        assert_eq!(pi1.rank(), 3);
        assert_eq!(pi1.to_string(), "12357|468|9");
        assert!(p(3, &[&[1], &[2], &[3]]).is_top());
        assert!(p(4, &[&[1, 2, 3, 4]]).is_bottom());
    }

    #[test]
    fn from_blocks_names_offending_element() {
        let overlap = SetPartition::from_blocks(4, &[vec![1, 2], vec![2, 3, 4]]).unwrap_err();
        assert!(overlap.to_string().contains("element 2"), "{overlap}");
        let gap = SetPartition::from_blocks(4, &[vec![1, 2], vec![4]]).unwrap_err();
        assert!(gap.to_string().contains("element 3"), "{gap}");
        let range = SetPartition::from_blocks(3, &[vec![1, 2, 3, 7]]).unwrap_err();
        assert!(range.to_string().contains("element 7"), "{range}");
    }

    #[test]
    fn stats_of_worked_examples() {
        let pi1 = p(9, &[&[1, 2, 3, 5, 7], &[9], &[4, 6, 8]]);
        let pi2 = p(9, &[&[1, 5], &[2, 3], &[7], &[9], &[4, 6, 8]]);
        assert_eq!(pi1.stats(), (3, 2, IntegerPartition(vec![4, 2])));
        assert_eq!(pi2.stats(), (5, 3, IntegerPartition(vec![2, 1, 1])));
        assert_eq!(SetPartition::top(6).stats(), (6, 0, IntegerPartition::empty()));
        assert!(pi1.leq(&pi2).unwrap());
        assert!(!pi2.leq(&pi1).unwrap());
    }

    #[test]
    fn leq_examples() {
        let a = p(4, &[&[1, 2], &[3, 4]]);
        let b = p(4, &[&[1, 3], &[2, 4]]);
        assert!(a.leq(&a).unwrap());
        assert!(!a.leq(&b).unwrap());
        assert!(!b.leq(&a).unwrap());
        assert!(matches!(
            a.leq(&SetPartition::top(5)),
            Err(Error::SizeMismatch { left: 4, right: 5 })
        ));
    }

    #[test]
    fn meet_and_join_examples() {
        let a = p(4, &[&[1, 2], &[3, 4]]);
        let b = p(4, &[&[1, 3], &[2, 4]]);
        assert_eq!(a.meet(&b).unwrap(), SetPartition::bottom(4));
        let c = p(4, &[&[1, 2], &[3], &[4]]);
        assert_eq!(a.join(&c).unwrap(), c);
        assert_eq!(a.join(&b).unwrap(), SetPartition::top(4));
        let top = SetPartition::top(4);
        assert_eq!(a.meet(&top).unwrap(), a);
        assert_eq!(a.join(&top).unwrap(), top);
        assert!(a.meet(&SetPartition::top(3)).is_err());
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate(4, Some(2)).unwrap().count(), 7);
        assert_eq!(enumerate(3, None).unwrap().count(), 5);
        let only: Vec<_> = enumerate(1, Some(1)).unwrap().collect();
        assert_eq!(only, vec![SetPartition::bottom(1)]);
        assert!(enumerate(3, Some(4)).is_err());
        assert!(enumerate(3, Some(0)).is_err());
        assert!(enumerate(0, None).is_err());
    }

    #[test]
    fn enumeration_is_strictly_increasing_in_rgs_order() {
        let all: Vec<_> = enumerate(6, None).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.first().unwrap(), &SetPartition::bottom(6));
        assert_eq!(all.last().unwrap(), &SetPartition::top(6));
    }

    /// Independent oracle: the plain triangular recurrence, in `u128`.
    fn stirling_oracle(n: usize, k: usize) -> u128 {
        let mut t = vec![vec![0u128; n + 1]; n + 1];
        t[0][0] = 1;
        for i in 1..=n {
            for j in 1..=i {
                t[i][j] = j as u128 * t[i - 1][j] + t[i - 1][j - 1];
            }
        }
        t[n][k]
    }

    #[test]
    fn stirling_and_bell_values() {
        assert_eq!(stirling2(5, 3), BigUint::from(25u32));
        assert_eq!(stirling_oracle(5, 3), 25);
        for n in 0..12 {
            assert_eq!(stirling2(n, n), BigUint::one());
        }
        assert_eq!(bell(4), BigUint::from(15u32));
        assert_eq!(bell(0), BigUint::one());
        assert_eq!(stirling2(3, 5), BigUint::zero());
        for n in 0..30 {
            for k in 0..=n {
                assert_eq!(stirling2(n, k), BigUint::from(stirling_oracle(n, k)));
            }
        }
    }

    #[test]
    fn interval_shapes() {
        let pi1 = p(9, &[&[1, 2, 3, 5, 7], &[9], &[4, 6, 8]]);
        let pi2 = p(9, &[&[1, 5], &[2, 3], &[7], &[9], &[4, 6, 8]]);
        let pi3 = p(9, &[&[1], &[5], &[2, 3], &[7], &[9], &[4, 6], &[8]]);
        assert_eq!(pi1.interval_shape(&pi2).unwrap(), IntegerPartition(vec![2]));
        assert_eq!(pi2.interval_shape(&pi3).unwrap(), IntegerPartition(vec![1, 1]));
        assert_eq!(pi1.interval_shape(&SetPartition::top(9)).unwrap(), pi1.shape());
        assert!(pi2.interval_shape(&pi1).is_err());
        assert!(pi2.interval_shape(&pi2).is_err());
    }

    #[test]
    fn strict_refinements_match_filtered_enumeration() {
        for n in 1..=6 {
            let all: Vec<_> = enumerate(n, None).unwrap().collect();
            for a in &all {
                let expected: Vec<_> = all
                    .iter()
                    .filter(|b| *b != a && a.leq(b).unwrap())
                    .cloned()
                    .collect();
                assert_eq!(a.strict_refinements(), expected, "{a}");
            }
        }
    }

    #[test]
    fn from_rgs_rejects_non_canonical() {
        assert!(SetPartition::from_rgs(&[0, 1, 0, 2]).is_ok());
        assert!(SetPartition::from_rgs(&[1, 0]).is_err());
        assert!(SetPartition::from_rgs(&[0, 2]).is_err());
    }

    #[test]
    fn json_accepts_any_block_order() {
        let text = r#"{"n": 9, "blocks": [[7,5,3,2,1],[9],[8,6,4]]}"#;
        let parsed: SetPartition = serde_json::from_str(text).unwrap();
        let out = serde_json::to_string(&parsed).unwrap();
        assert_eq!(out, r#"{"n":9,"blocks":[[1,2,3,5,7],[4,6,8],[9]]}"#);
        assert!(serde_json::from_str::<SetPartition>(r#"{"n":3,"blocks":[[1,2]]}"#).is_err());
    }

    #[test]
    fn integer_partition_parsing() {
        let (l, reordered) = IntegerPartition::parse_list("1,2,1").unwrap();
        assert_eq!(l.parts(), &[2, 1, 1]);
        assert!(reordered);
        let (l, reordered) = IntegerPartition::parse_list("3, 1").unwrap();
        assert_eq!(l.parts(), &[3, 1]);
        assert!(!reordered);
        assert!(IntegerPartition::parse_list("2,0").is_err());
        assert!(IntegerPartition::parse_list("a").is_err());
        assert_eq!(l.to_string(), "(3,1)");
    }
}
