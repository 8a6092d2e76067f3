//! Chains in `L_[n] ∖ {⊤}`, leveled trees, and the bijection between them.
//!
//! A chain `π₁ < π₂ < … < π_k` becomes a tree whose internal vertices are the
//! essential blocks occurring anywhere in the chain. A block sits on the last
//! level `i` at which it is still a block of `π_i`. Levels live on internal
//! vertices only; leaves are implicit and attach to the deepest vertex whose
//! label contains them.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{block_string, enumerate, IntegerPartition, SetPartition};

/// A strictly increasing sequence of partitions of `[n]`, `⊤` excluded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    n: usize,
    partitions: Vec<SetPartition>,
}

impl Chain {
    pub fn empty(n: usize) -> Self {
        Chain {
            n,
            partitions: Vec::new(),
        }
    }

    /// Validates strict increase under refinement and absence of `⊤`.
    pub fn new(n: usize, partitions: Vec<SetPartition>) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("n", "must be at least 1"));
        }
        for (i, p) in partitions.iter().enumerate() {
            if p.n() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: p.n(),
                });
            }
            if p.is_top() {
                return Err(Error::validation(
                    "partitions",
                    format!("entry {} is the top partition, which chains exclude", i + 1),
                ));
            }
        }
        for (i, w) in partitions.windows(2).enumerate() {
            if !w[0].lt(&w[1])? {
                return Err(Error::validation(
                    "partitions",
                    format!(
                        "entries {} and {} are not strictly increasing ({} vs {})",
                        i + 1,
                        i + 2,
                        w[0],
                        w[1]
                    ),
                ));
            }
        }
        Ok(Chain { n, partitions })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, partitions: Vec<SetPartition>) -> Self {
        Chain { n, partitions }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Length `k` of the chain, which is also the codimension of its stratum.
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partitions(&self) -> &[SetPartition] {
        &self.partitions
    }

    /// `ρ(π₁)`, or `n` for the empty chain.
    pub fn base_size(&self) -> usize {
        self.partitions.first().map_or(self.n, SetPartition::rank)
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subchain_of(&self, other: &Chain) -> bool {
        self.n == other.n && self.partitions.iter().all(|p| other.partitions.contains(p))
    }

    /// The union of two chains if it is again a chain.
    pub fn union(&self, other: &Chain) -> Result<Option<Chain>> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut merged: Vec<SetPartition> = self
            .partitions
            .iter()
            .chain(&other.partitions)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        // comparable partitions of equal rank coincide, so rank order is the
        // only candidate total order
        merged.sort_by_key(SetPartition::rank);
        for w in merged.windows(2) {
            if w[0].rank() == w[1].rank() || !w[0].leq_unchecked(&w[1]) {
                return Ok(None);
            }
        }
        Ok(Some(Chain::from_sorted_unchecked(self.n, merged)))
    }
}

impl fmt::Display for Chain {
    /// `[1234 < 12|34 < 12|3|4]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.partitions.iter().enumerate() {
            if i > 0 {
                write!(f, " < ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    n: usize,
    partitions: Vec<SetPartition>,
}

impl Serialize for Chain {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ChainJson {
            n: self.n,
            partitions: self.partitions.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ChainJson::deserialize(d)?;
        Chain::new(raw.n, raw.partitions).map_err(serde::de::Error::custom)
    }
}

/// A collection of subsets of `[n]`, each of size at least two, any two of
/// which are nested or disjoint.
///
/// Members are kept sorted by decreasing size, then lexicographically, so a
/// member always precedes its subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nest {
    n: usize,
    members: Vec<Vec<usize>>,
}

fn nest_order(a: &Vec<usize>, b: &Vec<usize>) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.cmp(b))
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    // both sorted ascending
    let mut it = big.iter();
    small.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return false,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    true
}

impl Nest {
    pub fn empty(n: usize) -> Self {
        Nest {
            n,
            members: Vec::new(),
        }
    }

    pub fn new(n: usize, members: Vec<Vec<usize>>) -> Result<Self> {
        let mut cleaned = Vec::with_capacity(members.len());
        for mut m in members {
            m.sort_unstable();
            if m.len() < 2 {
                return Err(Error::validation(
                    "nest",
                    format!("member {m:?} has fewer than two elements"),
                ));
            }
            if m.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::validation("nest", format!("member {m:?} repeats an element")));
            }
            if let Some(&e) = m.iter().find(|&&e| e == 0 || e > n) {
                return Err(Error::validation("nest", format!("element {e} is outside [1, {n}]")));
            }
            cleaned.push(m);
        }
        cleaned.sort_by(nest_order);
        for i in 0..cleaned.len() {
            for j in i + 1..cleaned.len() {
                let (a, b) = (&cleaned[i], &cleaned[j]);
                if a == b {
                    return Err(Error::validation("nest", format!("member {a:?} listed twice")));
                }
                if !disjoint(a, b) && !is_subset(b, a) {
                    return Err(Error::validation(
                        "nest",
                        format!("members {a:?} and {b:?} overlap without nesting"),
                    ));
                }
            }
        }
        Ok(Nest { n, members: cleaned })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the smallest member strictly containing member `i`.
    fn parent_of(&self, i: usize) -> Option<usize> {
        // members before `i` are at least as large; the closest superset is
        // the last one that contains it
        (0..i).rev().find(|&j| {
            self.members[j].len() > self.members[i].len() && is_subset(&self.members[i], &self.members[j])
        })
    }
}

impl fmt::Display for Nest {
    /// `{1234,12,34}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            f.write_str(&block_string(m, self.n))?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct NestJson {
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for Nest {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NestJson {
            n: self.n,
            members: self.members.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Nest {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = NestJson::deserialize(d)?;
        Nest::new(raw.n, raw.members).map_err(serde::de::Error::custom)
    }
}

/// One vertex of a tree in its JSON form. Vertex 0 is the root, with label
/// `[n]`, no parent, and level 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeVertex {
    pub label: Vec<usize>,
    pub parent: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
}

/// Checks the shared shape invariants of rooted and leveled trees and returns
/// the nest of non-root labels.
fn nest_from_vertices(n: usize, vertices: &[TreeVertex]) -> Result<Nest> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    let root = vertices
        .first()
        .ok_or_else(|| Error::validation("vertices", "missing root vertex"))?;
    if root.parent.is_some() {
        return Err(Error::validation("vertices", "vertex 0 must be the root (parent null)"));
    }
    let mut root_label = root.label.clone();
    root_label.sort_unstable();
    if root_label != (1..=n).collect::<Vec<_>>() {
        return Err(Error::validation("vertices", "root label must be [1, n]"));
    }
    for (i, v) in vertices.iter().enumerate().skip(1) {
        match v.parent {
            Some(p) if p < vertices.len() && p != i => {}
            _ => {
                return Err(Error::validation(
                    "vertices",
                    format!("vertex {i} has no valid parent"),
                ))
            }
        }
    }
    let nest = Nest::new(n, vertices.iter().skip(1).map(|v| v.label.clone()).collect())?;
    // the stated parents must agree with label containment
    let position: HashMap<&Vec<usize>, usize> =
        nest.members.iter().enumerate().map(|(i, m)| (m, i)).collect();
    for (i, v) in vertices.iter().enumerate().skip(1) {
        let mut label = v.label.clone();
        label.sort_unstable();
        let expected = nest.parent_of(position[&label]).map(|j| &nest.members[j]);
        let stated = v.parent.unwrap();
        let stated_label = if stated == 0 {
            None
        } else {
            let mut l = vertices[stated].label.clone();
            l.sort_unstable();
            Some(l)
        };
        if stated_label.as_ref() != expected {
            return Err(Error::validation(
                "vertices",
                format!("vertex {i} has parent {stated}, inconsistent with its label"),
            ));
        }
    }
    Ok(nest)
}

/// A rooted tree with leaves labeled `1..n` and no 2-valent vertices other
/// than possibly the root. Its internal vertices correspond to a [`Nest`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootedTree {
    nest: Nest,
}

impl RootedTree {
    pub fn from_nest(nest: Nest) -> Self {
        RootedTree { nest }
    }

    pub fn new(n: usize, vertices: &[TreeVertex]) -> Result<Self> {
        Ok(RootedTree {
            nest: nest_from_vertices(n, vertices)?,
        })
    }

    pub fn n(&self) -> usize {
        self.nest.n
    }

    pub fn nest(&self) -> &Nest {
        &self.nest
    }

    /// Labels of non-root vertices; vertex `i + 1` has label `labels()[i]`.
    pub fn labels(&self) -> &[Vec<usize>] {
        &self.nest.members
    }

    /// Parent vertex index (0 = root) of vertex `v ≥ 1`.
    pub fn parent(&self, v: usize) -> usize {
        self.nest.parent_of(v - 1).map_or(0, |j| j + 1)
    }

    pub fn vertices(&self) -> Vec<TreeVertex> {
        let mut out = vec![TreeVertex {
            label: (1..=self.n()).collect(),
            parent: None,
            level: None,
        }];
        for (i, m) in self.nest.members.iter().enumerate() {
            out.push(TreeVertex {
                label: m.clone(),
                parent: Some(self.parent(i + 1)),
                level: None,
            });
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    vertices: Vec<TreeVertex>,
}

impl Serialize for RootedTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson {
            n: self.n(),
            vertices: self.vertices(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootedTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TreeJson::deserialize(d)?;
        RootedTree::new(raw.n, &raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// A rooted tree together with levels on its internal vertices: the root is on
/// level 0, levels strictly increase away from the root, and every level
/// `1..=k` is used.
///
/// Non-root vertices are stored sorted by `(level, label)`, which makes the
/// representation canonical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LeveledTree {
    n: usize,
    // (level, label, parent) for non-root vertices; parent 0 is the root and
    // parent j ≥ 1 refers to entry j - 1
    vertices: Vec<(usize, Vec<usize>, usize)>,
}

impl LeveledTree {
    /// Validates a tree given in JSON vertex form (vertex 0 is the root).
    pub fn new(n: usize, vertices: &[TreeVertex]) -> Result<Self> {
        nest_from_vertices(n, vertices)?;
        if vertices[0].level.unwrap_or(0) != 0 {
            return Err(Error::validation("vertices", "root must be on level 0"));
        }
        let mut levels = Vec::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate().skip(1) {
            let level = v
                .level
                .ok_or_else(|| Error::validation("vertices", format!("vertex {i} has no level")))?;
            if level == 0 {
                return Err(Error::validation(
                    "vertices",
                    format!("vertex {i} is not the root but has level 0"),
                ));
            }
            let parent = v.parent.unwrap();
            let parent_level = if parent == 0 { 0 } else { vertices[parent].level.unwrap_or(0) };
            if level <= parent_level {
                return Err(Error::validation(
                    "vertices",
                    format!("vertex {i} has level {level}, not above its parent's {parent_level}"),
                ));
            }
            levels.push(level);
        }
        let height = levels.iter().copied().max().unwrap_or(0);
        if let Some(gap) = (1..=height).find(|l| !levels.contains(l)) {
            return Err(Error::validation(
                "vertices",
                format!("level {gap} is unoccupied; levels must cover 1..{height}"),
            ));
        }
        let raw: Vec<(usize, Vec<usize>, usize)> = vertices
            .iter()
            .skip(1)
            .zip(levels)
            .map(|(v, level)| {
                let mut label = v.label.clone();
                label.sort_unstable();
                (level, label, v.parent.unwrap())
            })
            .collect();
        Ok(Self::canonical(n, raw))
    }

    /// Sorts vertices by `(level, label)` and rewrites parent indices.
    /// `raw` parents use the same convention as the stored form.
    fn canonical(n: usize, raw: Vec<(usize, Vec<usize>, usize)>) -> Self {
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| (raw[a].0, &raw[a].1).cmp(&(raw[b].0, &raw[b].1)));
        let mut new_index = vec![0usize; raw.len()];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos + 1;
        }
        let vertices = order
            .iter()
            .map(|&old| {
                let (level, label, parent) = raw[old].clone();
                let parent = if parent == 0 { 0 } else { new_index[parent - 1] };
                (level, label, parent)
            })
            .collect();
        LeveledTree { n, vertices }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of levels `k` below the root.
    pub fn height(&self) -> usize {
        self.vertices.iter().map(|v| v.0).max().unwrap_or(0)
    }

    /// Number of internal vertices besides the root.
    pub fn internal_count(&self) -> usize {
        self.vertices.len()
    }

    /// JSON vertex form, root first.
    pub fn vertices(&self) -> Vec<TreeVertex> {
        let mut out = vec![TreeVertex {
            label: (1..=self.n).collect(),
            parent: None,
            level: Some(0),
        }];
        out.extend(self.vertices.iter().map(|(level, label, parent)| TreeVertex {
            label: label.clone(),
            parent: Some(*parent),
            level: Some(*level),
        }));
        out
    }

    /// `(label, level)` of each non-root vertex, canonical order.
    pub fn labeled_levels(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.vertices.iter().map(|(level, label, _)| (label.as_slice(), *level))
    }

    /// Leaves attached directly to vertex `v` (0 = root).
    pub fn leaves_of(&self, v: usize) -> Vec<usize> {
        let mut owner = vec![0usize; self.n];
        // smaller labels are written last, so the deepest container wins
        let mut by_size: Vec<usize> = (0..self.vertices.len()).collect();
        by_size.sort_by_key(|&i| std::cmp::Reverse(self.vertices[i].1.len()));
        for i in by_size {
            for &e in &self.vertices[i].1 {
                owner[e - 1] = i + 1;
            }
        }
        (1..=self.n).filter(|&e| owner[e - 1] == v).collect()
    }

    /// Graphviz rendering: one rank per level, leaves on the bottom rank,
    /// internal vertices annotated `label@level`.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "digraph leveled_tree {{").unwrap();
        writeln!(s, "  node [shape=ellipse];").unwrap();
        writeln!(s, "  {{ rank=same; v0 [label=\"root@0\"]; }}").unwrap();
        for level in 1..=self.height() {
            write!(s, "  {{ rank=same;").unwrap();
            for (i, (l, label, _)) in self.vertices.iter().enumerate() {
                if *l == level {
                    write!(s, " v{} [label=\"{}@{}\"];", i + 1, block_string(label, self.n), l).unwrap();
                }
            }
            writeln!(s, " }}").unwrap();
        }
        write!(s, "  {{ rank=same;").unwrap();
        for e in 1..=self.n {
            write!(s, " leaf{e} [label=\"{e}\", shape=plaintext];").unwrap();
        }
        writeln!(s, " }}").unwrap();
        for (i, (_, _, parent)) in self.vertices.iter().enumerate() {
            writeln!(s, "  v{parent} -> v{};", i + 1).unwrap();
        }
        for v in 0..=self.vertices.len() {
            for e in self.leaves_of(v) {
                writeln!(s, "  v{v} -> leaf{e};").unwrap();
            }
        }
        writeln!(s, "}}").unwrap();
        s
    }
}

impl fmt::Display for LeveledTree {
    /// `12357@1 15@2 468@2 23@3 46@3`; `root` for a tree without internal
    /// vertices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vertices.is_empty() {
            return write!(f, "root");
        }
        for (i, (level, label, _)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}@{}", block_string(label, self.n), level)?;
        }
        Ok(())
    }
}

impl Serialize for LeveledTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeJson {
            n: self.n,
            vertices: self.vertices(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LeveledTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TreeJson::deserialize(d)?;
        LeveledTree::new(raw.n, &raw.vertices).map_err(serde::de::Error::custom)
    }
}

/// The leveled tree of a chain.
pub fn chain_to_tree(chain: &Chain) -> LeveledTree {
    // label -> index into `raw`
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut raw: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut previous: Option<&SetPartition> = None;
    for (i, pi) in chain.partitions().iter().enumerate() {
        let level = i + 1;
        for block in pi.essential_blocks() {
            if let Some(&j) = index.get(&block) {
                raw[j].0 = level;
                continue;
            }
            let parent = match previous {
                None => 0,
                Some(prev) => {
                    let b = prev.block_of(block[0]);
                    let container = &prev.blocks()[b];
                    index[container] + 1
                }
            };
            index.insert(block.clone(), raw.len());
            raw.push((level, block, parent));
        }
        previous = Some(pi);
    }
    LeveledTree::canonical(chain.n(), raw)
}

/// The chain of a leveled tree: `a` and `b` share a block of `π_i` exactly
/// when the vertex separating them lies on level `i` or deeper.
pub fn tree_to_chain(tree: &LeveledTree) -> Chain {
    let n = tree.n;
    // root path (non-root vertex indices, root side first) for every leaf
    let mut deepest = vec![0usize; n];
    let mut by_size: Vec<usize> = (0..tree.vertices.len()).collect();
    by_size.sort_by_key(|&i| std::cmp::Reverse(tree.vertices[i].1.len()));
    for &i in &by_size {
        for &e in &tree.vertices[i].1 {
            deepest[e - 1] = i + 1;
        }
    }
    let paths: Vec<Vec<usize>> = deepest
        .iter()
        .map(|&v| {
            let mut path = Vec::new();
            let mut cur = v;
            while cur != 0 {
                path.push(cur);
                cur = tree.vertices[cur - 1].2;
            }
            path.reverse();
            path
        })
        .collect();
    let partitions = (1..=tree.height())
        .map(|level| {
            let keys = paths.iter().enumerate().map(|(e, path)| {
                path.iter()
                    .find(|&&v| tree.vertices[v - 1].0 >= level)
                    .map_or(tree.vertices.len() + 1 + e, |&v| v)
            });
            let labels: Vec<usize> = keys.collect();
            SetPartition::from_blocks(n, &group_by_key(&labels)).expect("keys induce a partition")
        })
        .collect();
    Chain::from_sorted_unchecked(n, partitions)
}

fn group_by_key(keys: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (e, &k) in keys.iter().enumerate() {
        match groups.iter_mut().find(|g| g.0 == k) {
            Some(g) => g.1.push(e + 1),
            None => groups.push((k, vec![e + 1])),
        }
    }
    groups.into_iter().map(|g| g.1).collect()
}

/// The map η: erase levels.
pub fn forget(tree: &LeveledTree) -> RootedTree {
    RootedTree::from_nest(
        Nest::new(tree.n, tree.vertices.iter().map(|v| v.1.clone()).collect())
            .expect("leveled tree labels form a nest"),
    )
}

/// `λ₀, λ₁, …, λ_k`: `λ₀ = (ρ(π₁))` and `λ_i` is the shape of `[π_i, π_{i+1}]`
/// with `π_{k+1} = ⊤`.
pub fn lambda_sequence(chain: &Chain) -> Result<Vec<IntegerPartition>> {
    let first = chain.partitions().first().ok_or_else(|| {
        Error::validation("chain", "the empty chain has no lambda sequence")
    })?;
    let top = SetPartition::top(chain.n());
    let mut out = vec![IntegerPartition::single(first.rank())];
    let parts = chain.partitions();
    for (i, p) in parts.iter().enumerate() {
        let next = parts.get(i + 1).unwrap_or(&top);
        out.push(p.interval_shape(next)?);
    }
    Ok(out)
}

/// All essential blocks occurring anywhere in the chain.
pub fn nest_of(chain: &Chain) -> Nest {
    let members: BTreeSet<Vec<usize>> = chain
        .partitions()
        .iter()
        .flat_map(SetPartition::essential_blocks)
        .collect();
    Nest::new(chain.n(), members.into_iter().collect()).expect("blocks of a chain form a nest")
}

/// Depth-first stream of chains in `L_[n] ∖ {⊤}`, empty chain first.
pub struct Chains {
    n: usize,
    length: Option<usize>,
    path: Vec<SetPartition>,
    stack: Vec<(Rc<Vec<SetPartition>>, usize)>,
    cache: HashMap<SetPartition, Rc<Vec<SetPartition>>>,
    started: bool,
}

impl Chains {
    fn refinements(&mut self, p: &SetPartition) -> Rc<Vec<SetPartition>> {
        if let Some(r) = self.cache.get(p) {
            return r.clone();
        }
        let mut r = p.strict_refinements();
        r.retain(|q| !q.is_top());
        let r = Rc::new(r);
        // the cache is only worth its memory while the lattice is small
        if self.n <= 8 {
            self.cache.insert(p.clone(), r.clone());
        }
        r
    }
}

impl Iterator for Chains {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        if !self.started {
            self.started = true;
            let roots: Vec<SetPartition> = enumerate(self.n, None)
                .expect("n validated")
                .filter(|p| !p.is_top())
                .collect();
            if self.length != Some(0) {
                self.stack.push((Rc::new(roots), 0));
            }
            if self.length.is_none_or(|l| l == 0) {
                return Some(Chain::empty(self.n));
            }
        }
        loop {
            let depth = self.stack.len();
            let (candidates, idx) = self.stack.last_mut()?;
            if *idx == candidates.len() {
                self.stack.pop();
                continue;
            }
            let p = candidates[*idx].clone();
            *idx += 1;
            self.path.truncate(depth - 1);
            self.path.push(p.clone());
            let len = self.path.len();
            if self.length.is_none_or(|l| len < l) {
                let children = self.refinements(&p);
                self.stack.push((children, 0));
            }
            if self.length.is_none_or(|l| len == l) {
                return Some(Chain::from_sorted_unchecked(self.n, self.path.clone()));
            }
        }
    }
}

/// Every chain in `L_[n] ∖ {⊤}` exactly once, optionally only those of the
/// given length.
pub fn enumerate_chains(n: usize, length: Option<usize>) -> Result<Chains> {
    if n < 2 {
        return Err(Error::validation("n", "must be at least 2"));
    }
    if let Some(l) = length {
        if l > n - 1 {
            return Err(Error::validation(
                "length",
                format!("{l} is outside [0, {}]", n - 1),
            ));
        }
    }
    Ok(Chains {
        n,
        length,
        path: Vec::new(),
        stack: Vec::new(),
        cache: HashMap::new(),
        started: false,
    })
}

/// Depth-first stream of nests on `[n]`, empty nest first.
pub struct Nests {
    n: usize,
    subsets: Vec<u64>,
    chosen: Vec<usize>,
    // next candidate index to try at the current depth
    cursor: usize,
    started: bool,
}

fn compatible(a: u64, b: u64) -> bool {
    let both = a & b;
    both == 0 || both == a || both == b
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect()
}

impl Nests {
    fn current(&self) -> Nest {
        Nest::new(
            self.n,
            self.chosen.iter().map(|&i| mask_to_vec(self.subsets[i])).collect(),
        )
        .expect("compatible subsets form a nest")
    }
}

impl Iterator for Nests {
    type Item = Nest;

    fn next(&mut self) -> Option<Nest> {
        if !self.started {
            self.started = true;
            return Some(Nest::empty(self.n));
        }
        loop {
            let found = (self.cursor..self.subsets.len()).find(|&j| {
                self.chosen
                    .iter()
                    .all(|&i| compatible(self.subsets[i], self.subsets[j]))
            });
            match found {
                Some(j) => {
                    self.chosen.push(j);
                    self.cursor = j + 1;
                    return Some(self.current());
                }
                None => {
                    let last = self.chosen.pop()?;
                    self.cursor = last + 1;
                }
            }
        }
    }
}

/// Every nest on `[n]`, including the empty one, exactly once.
pub fn enumerate_nests(n: usize) -> Result<Nests> {
    if n < 2 {
        return Err(Error::validation("n", "must be at least 2"));
    }
    if n > 63 {
        return Err(Error::validation("n", "nest enumeration supports n ≤ 63"));
    }
    let mut subsets: Vec<u64> = (1u64..1 << n).filter(|m| m.count_ones() >= 2).collect();
    subsets.sort_by(|&a, &b| nest_order(&mask_to_vec(a), &mask_to_vec(b)));
    Ok(Nests {
        n,
        subsets,
        chosen: Vec::new(),
        cursor: 0,
        started: false,
    })
}

/// The leveled trees over one rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtaFiber {
    pub count: BigUint,
    pub assignments: Option<Vec<LeveledTree>>,
}

/// All level assignments turning `tree` into a leveled tree. The count is
/// always computed; the trees themselves only when `list` is set.
pub fn eta_fiber(tree: &RootedTree, list: bool) -> EtaFiber {
    let k = tree.labels().len();
    assert!(k < 64, "trees with 64 or more internal vertices are not supported");
    // parent as a non-root index, None for children of the root
    let parents: Vec<Option<usize>> = (1..=k)
        .map(|v| match tree.parent(v) {
            0 => None,
            p => Some(p - 1),
        })
        .collect();
    let full: u64 = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    let mut memo: HashMap<u64, BigUint> = HashMap::new();
    let count = count_assignments(&parents, 0, full, &mut memo);

    let assignments = list.then(|| {
        let mut out = Vec::new();
        let mut levels = vec![0usize; k];
        list_assignments(tree, &parents, 0, full, 1, &mut levels, &mut out);
        out
    });
    EtaFiber { count, assignments }
}

fn available(parents: &[Option<usize>], assigned: u64) -> u64 {
    let mut avail = 0u64;
    for (v, p) in parents.iter().enumerate() {
        let ready = p.is_none_or(|p| assigned >> p & 1 == 1);
        if assigned >> v & 1 == 0 && ready {
            avail |= 1 << v;
        }
    }
    avail
}

/// Nonempty submasks of `mask`, descending.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut sub = mask;
    std::iter::from_fn(move || {
        if sub == 0 {
            return None;
        }
        let cur = sub;
        sub = (sub - 1) & mask;
        Some(cur)
    })
}

fn count_assignments(
    parents: &[Option<usize>],
    assigned: u64,
    full: u64,
    memo: &mut HashMap<u64, BigUint>,
) -> BigUint {
    if assigned == full {
        return BigUint::one();
    }
    if let Some(c) = memo.get(&assigned) {
        return c.clone();
    }
    let mut total = BigUint::zero();
    for level_set in submasks(available(parents, assigned)) {
        total += count_assignments(parents, assigned | level_set, full, memo);
    }
    memo.insert(assigned, total.clone());
    total
}

fn list_assignments(
    tree: &RootedTree,
    parents: &[Option<usize>],
    assigned: u64,
    full: u64,
    level: usize,
    levels: &mut Vec<usize>,
    out: &mut Vec<LeveledTree>,
) {
    if assigned == full {
        let raw = tree
            .labels()
            .iter()
            .enumerate()
            .map(|(v, label)| (levels[v], label.clone(), parents[v].map_or(0, |p| p + 1)))
            .collect();
        out.push(LeveledTree::canonical(tree.n(), raw));
        return;
    }
    for level_set in submasks(available(parents, assigned)) {
        for (v, slot) in levels.iter_mut().enumerate() {
            if level_set >> v & 1 == 1 {
                *slot = level;
            }
        }
        list_assignments(tree, parents, assigned | level_set, full, level + 1, levels, out);
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn p(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::from_blocks(n, blocks).unwrap()
    }

    pub(crate) fn nine_point_chain() -> Chain {
        Chain::new(
            9,
            vec![
                p(9, &[&[1, 2, 3, 5, 7], &[9], &[4, 6, 8]]),
                p(9, &[&[1, 5], &[2, 3], &[7], &[9], &[4, 6, 8]]),
                p(9, &[&[1], &[5], &[2, 3], &[7], &[9], &[4, 6], &[8]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn chain_validation() {
        let a = p(4, &[&[1, 2], &[3, 4]]);
        let b = p(4, &[&[1, 3], &[2, 4]]);
        assert!(Chain::new(4, vec![a.clone(), b]).is_err());
        assert!(Chain::new(4, vec![a.clone(), a.clone()]).is_err());
        assert!(Chain::new(4, vec![a, SetPartition::top(4)]).is_err());
        assert!(Chain::new(4, vec![SetPartition::bottom(3)]).is_err());
    }

    #[test]
    fn nine_point_chain_to_tree() {
        let tree = chain_to_tree(&nine_point_chain());
        let got: Vec<(String, usize)> = tree
            .labeled_levels()
            .map(|(l, lv)| (block_string(l, 9), lv))
            .collect();
        let expected = [("12357", 1), ("15", 2), ("468", 2), ("23", 3), ("46", 3)];
        assert_eq!(got.len(), expected.len());
        for (label, level) in expected {
            assert!(got.contains(&(label.to_string(), level)), "{label}@{level} missing");
        }
        assert_eq!(tree.to_string(), "12357@1 15@2 468@2 23@3 46@3");
        assert_eq!(tree_to_chain(&tree), nine_point_chain());
        assert_eq!(tree.leaves_of(0), vec![9]);
    }

    #[test]
    fn trivial_trees() {
        let t = chain_to_tree(&Chain::empty(3));
        assert_eq!(t.internal_count(), 0);
        assert_eq!(t.leaves_of(0), vec![1, 2, 3]);
        assert_eq!(tree_to_chain(&t), Chain::empty(3));

        let t = chain_to_tree(&Chain::new(4, vec![SetPartition::bottom(4)]).unwrap());
        assert_eq!(t.to_string(), "1234@1");
        assert_eq!(t.leaves_of(1), vec![1, 2, 3, 4]);
        assert!(t.leaves_of(0).is_empty());
    }

    #[test]
    fn lambda_sequences() {
        let seq = lambda_sequence(&nine_point_chain()).unwrap();
        let shown: Vec<String> = seq.iter().map(|l| l.to_string()).collect();
        assert_eq!(shown, ["(3)", "(2)", "(1,1)", "(1,1)"]);

        let bottom = Chain::new(5, vec![SetPartition::bottom(5)]).unwrap();
        let seq = lambda_sequence(&bottom).unwrap();
        assert_eq!(seq, vec![IntegerPartition::single(1), IntegerPartition::single(4)]);

        let c = Chain::new(4, vec![SetPartition::bottom(4), p(4, &[&[1, 2], &[3, 4]])]).unwrap();
        let seq = lambda_sequence(&c).unwrap();
        assert_eq!(
            seq,
            vec![
                IntegerPartition::single(1),
                IntegerPartition::single(1),
                IntegerPartition::ones(2)
            ]
        );
        assert!(lambda_sequence(&Chain::empty(4)).is_err());
    }

    #[test]
    fn nests_of_chains() {
        let c = Chain::new(
            4,
            vec![
                SetPartition::bottom(4),
                p(4, &[&[1, 2], &[3, 4]]),
                p(4, &[&[1, 2], &[3], &[4]]),
            ],
        )
        .unwrap();
        assert_eq!(nest_of(&c).to_string(), "{1234,12,34}");
        assert!(nest_of(&Chain::empty(4)).is_empty());
        assert_eq!(nest_of(&nine_point_chain()).to_string(), "{12357,468,15,23,46}");
    }

    #[test]
    fn chain_counts_small() {
        assert_eq!(enumerate_chains(4, None).unwrap().count(), 64);
        assert_eq!(enumerate_chains(4, Some(3)).unwrap().count(), 18);
        let two: Vec<_> = enumerate_chains(2, None).unwrap().collect();
        assert_eq!(
            two,
            vec![Chain::empty(2), Chain::new(2, vec![SetPartition::bottom(2)]).unwrap()]
        );
        assert!(enumerate_chains(4, Some(4)).is_err());
        assert!(enumerate_chains(1, None).is_err());
    }

    #[test]
    fn chains_are_valid_and_distinct() {
        let all: Vec<_> = enumerate_chains(5, None).unwrap().collect();
        let distinct: BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), all.len());
        for c in &all {
            assert_eq!(Chain::new(5, c.partitions().to_vec()).unwrap(), *c);
        }
    }

    #[test]
    fn nest_counts_small() {
        assert_eq!(enumerate_nests(2).unwrap().count(), 2);
        assert_eq!(enumerate_nests(3).unwrap().count(), 8);
        assert_eq!(enumerate_nests(4).unwrap().count(), 52);
        let all: BTreeSet<Nest> = enumerate_nests(4).unwrap().collect();
        assert_eq!(all.len(), 52);
    }

    #[test]
    fn nest_validation() {
        assert!(Nest::new(4, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(Nest::new(4, vec![vec![1]]).is_err());
        assert!(Nest::new(4, vec![vec![1, 5]]).is_err());
        assert!(Nest::new(4, vec![vec![1, 2], vec![2, 1]]).is_err());
        assert!(Nest::new(4, vec![vec![1, 2], vec![1, 2, 3]]).is_ok());
    }

    #[test]
    fn eta_fiber_of_two_cherries() {
        let tree = RootedTree::from_nest(Nest::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap());
        let fiber = eta_fiber(&tree, true);
        assert_eq!(fiber.count, BigUint::from(3u32));
        let trees = fiber.assignments.unwrap();
        assert_eq!(trees.len(), 3);
        for t in &trees {
            assert_eq!(forget(t), tree);
        }
        let single = RootedTree::from_nest(Nest::new(2, vec![vec![1, 2]]).unwrap());
        assert_eq!(eta_fiber(&single, false).count, BigUint::one());
        let bare = RootedTree::from_nest(Nest::empty(3));
        assert_eq!(eta_fiber(&bare, true).assignments.unwrap().len(), 1);
    }

    #[test]
    fn leveled_tree_json_round_trip_and_validation() {
        let tree = chain_to_tree(&nine_point_chain());
        let text = serde_json::to_string(&tree).unwrap();
        assert!(text.starts_with(r#"{"n":9,"vertices":[{"label":[1,2,3,4,5,6,7,8,9],"parent":null,"level":0},{"label":[1,2,3,5,7],"parent":0,"level":1}"#), "{text}");
        let back: LeveledTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, tree);

        let bad_level = r#"{"n":4,"vertices":[{"label":[1,2,3,4],"parent":null,"level":0},
            {"label":[1,2],"parent":0,"level":2}]}"#;
        assert!(serde_json::from_str::<LeveledTree>(bad_level).is_err());
        let not_increasing = r#"{"n":4,"vertices":[{"label":[1,2,3,4],"parent":null,"level":0},
            {"label":[1,2,3],"parent":0,"level":1},{"label":[1,2],"parent":1,"level":1}]}"#;
        assert!(serde_json::from_str::<LeveledTree>(not_increasing).is_err());
        let wrong_parent = r#"{"n":4,"vertices":[{"label":[1,2,3,4],"parent":null,"level":0},
            {"label":[1,2,3],"parent":0,"level":1},{"label":[1,2],"parent":0,"level":2}]}"#;
        assert!(serde_json::from_str::<LeveledTree>(wrong_parent).is_err());
        let ok = r#"{"n":4,"vertices":[{"label":[1,2,3,4],"parent":null,"level":0},
            {"label":[1,2,3],"parent":0,"level":1},{"label":[1,2],"parent":1,"level":2}]}"#;
        assert!(serde_json::from_str::<LeveledTree>(ok).is_ok());
    }

    #[test]
    fn dot_has_one_rank_per_level() {
        let dot = chain_to_tree(&nine_point_chain()).to_dot();
        assert_eq!(dot.matches("rank=same").count(), 5);
        assert!(dot.contains("\"12357@1\""));
        assert!(dot.contains("\"46@3\""));
        assert!(dot.contains("leaf9 [label=\"9\", shape=plaintext]"));
    }

    #[test]
    fn union_of_chains() {
        let bottom = Chain::new(4, vec![SetPartition::bottom(4)]).unwrap();
        let mid = Chain::new(4, vec![p(4, &[&[1, 2], &[3, 4]])]).unwrap();
        let u = bottom.union(&mid).unwrap().unwrap();
        assert_eq!(u.len(), 2);
        let x = Chain::new(4, vec![p(4, &[&[1, 2], &[3], &[4]])]).unwrap();
        let y = Chain::new(4, vec![p(4, &[&[1], &[2], &[3, 4]])]).unwrap();
        assert_eq!(x.union(&y).unwrap(), None);
    }
}
