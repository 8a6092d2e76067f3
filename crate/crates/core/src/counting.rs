//! Strata, divisor and blowup-center counts, all by recurrence.

use std::fmt::Write as _;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{stirling2, IntegerPartition};

static Z_MEMO: RwLock<Vec<BigUint>> = RwLock::new(Vec::new());

/// `Z(n) = Σ_{k=1}^{n-1} S(n,k) Z(k)` with `Z(1) = 1`: the number of chains in
/// `L_[n] ∖ {⊤}` that contain `⊥`.
pub fn z(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    if let Some(v) = Z_MEMO.read().unwrap().get(n) {
        return Ok(v.clone());
    }
    let mut memo = Z_MEMO.write().unwrap();
    if memo.is_empty() {
        // index 0 is unused padding
        memo.push(BigUint::zero());
        memo.push(BigUint::one());
    }
    while memo.len() <= n {
        let m = memo.len();
        let value = (1..m).fold(BigUint::zero(), |acc, k| acc + stirling2(m, k) * &memo[k]);
        memo.push(value);
    }
    Ok(memo[n].clone())
}

/// Number of strata of the polydiagonal compactification: `2·Z(n)`.
pub fn polydiag_strata(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::validation("n", "must be at least 2"));
    }
    Ok(z(n)? * 2u32)
}

fn binomial_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for k in 1..=n {
        let next = &row[k - 1] * (n - k + 1) / k;
        row.push(next);
    }
    row
}

/// Number of nests on `[n]`, the empty nest included: the strata count of the
/// Fulton–MacPherson compactification.
///
/// With `g(s)` the number of nests on an `s`-set all of whose members are
/// proper subsets, the full count is `f(s) = 2·g(s)` (the whole set is either a
/// member or not). The maximal members of a proper nest are the essential
/// blocks of a partition other than the one-block partition, and each carries
/// a nest containing itself, so `g(s) = Σ_{j<s} C(s-1, j-1)·a(j)·f(s-j)` where
/// `a(1) = 1` and `a(j) = g(j)`.
pub fn fm_strata(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::validation("n", "must be at least 2"));
    }
    let mut a = vec![BigUint::zero(), BigUint::one()];
    let mut f = vec![BigUint::one(), BigUint::one()];
    for s in 2..=n {
        let binom = binomial_row(s - 1);
        let g = (1..s).fold(BigUint::zero(), |acc, j| acc + &binom[j - 1] * &a[j] * &f[s - j]);
        f.push(&g * 2u32);
        a.push(g);
    }
    Ok(f[n].clone())
}

/// Number of chains of length `k` in `L_[n] ∖ {⊤}`, i.e. strata of
/// codimension `k`.
///
/// The last element of a length-`k` chain has some rank `j < n` and the rest
/// of the chain lives in `[⊥, π_k) ≅ L_[j] ∖ {⊤}`, so
/// `W(n, k) = Σ_j S(n, j)·W(j, k-1)` with `W(·, 0) = 1`.
pub fn strata_by_codim(n: usize, k: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    if k > n.saturating_sub(1) {
        return Err(Error::validation(
            "codim",
            format!("{k} is outside [0, {}]", n.saturating_sub(1)),
        ));
    }
    // w[j] = W(j, current length)
    let mut w: Vec<BigUint> = vec![BigUint::one(); n + 1];
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); n + 1];
        for (m, slot) in next.iter_mut().enumerate().skip(1) {
            *slot = (1..m).fold(BigUint::zero(), |acc, j| acc + stirling2(m, j) * &w[j]);
        }
        w = next;
    }
    Ok(w[n].clone())
}

/// One row of the strata table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataRow {
    pub n: usize,
    #[serde(serialize_with = "crate::serde_util::biguint_str")]
    pub fm_strata: BigUint,
    #[serde(serialize_with = "crate::serde_util::biguint_str")]
    pub polydiag_strata: BigUint,
}

/// Strata counts of both compactifications for `n = 2..=max_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrataTable {
    pub rows: Vec<StrataRow>,
}

impl StrataTable {
    pub fn new(max_n: usize) -> Result<Self> {
        if max_n < 2 {
            return Err(Error::validation("max-n", "must be at least 2"));
        }
        let rows = (2..=max_n)
            .map(|n| {
                Ok(StrataRow {
                    n,
                    fm_strata: fm_strata(n)?,
                    polydiag_strata: polydiag_strata(n)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(StrataTable { rows })
    }

    /// Header row and one line per `n`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,fm_strata,polydiag_strata\n");
        for r in &self.rows {
            writeln!(s, "{},{},{}", r.n, r.fm_strata, r.polydiag_strata).unwrap();
        }
        s
    }

    /// Transposed layout: a row of `n`, then one row per compactification.
    pub fn to_text(&self) -> String {
        let mut lines = [
            vec!["n".to_string()],
            vec!["X[n]".to_string()],
            vec!["X<n>".to_string()],
        ];
        for r in &self.rows {
            lines[0].push(r.n.to_string());
            lines[1].push(r.fm_strata.to_string());
            lines[2].push(r.polydiag_strata.to_string());
        }
        let cols = lines[0].len();
        let widths: Vec<usize> = (0..cols)
            .map(|c| lines.iter().map(|l| l[c].len()).max().unwrap())
            .collect();
        let mut s = String::new();
        for line in &lines {
            let cells: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(c, (cell, w))| {
                    if c == 0 {
                        format!("{cell:<w$}")
                    } else {
                        format!("{cell:>w$}")
                    }
                })
                .collect();
            writeln!(s, "{}", cells.join("  ")).unwrap();
        }
        s
    }
}

/// Integer partitions of `total` into exactly `parts` parts, in decreasing
/// lexicographic order.
pub fn integer_partitions(total: usize, parts: usize) -> Vec<IntegerPartition> {
    fn go(rest: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
        if slots == 0 {
            if rest == 0 {
                out.push(IntegerPartition::from_unsorted(cur.clone()));
            }
            return;
        }
        if rest < slots {
            return;
        }
        let hi = cap.min(rest - (slots - 1));
        for v in (1..=hi).rev() {
            cur.push(v);
            go(rest - v, slots - 1, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(IntegerPartition::empty());
        }
        return out;
    }
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// Number of set partitions of `[Σ sizes]` whose block sizes are `sizes`:
/// `N! / (Π sᵢ! · Π mⱼ!)` with `mⱼ` the multiplicities of equal sizes.
pub fn partitions_with_block_sizes(sizes: &IntegerPartition) -> BigUint {
    let factorial = |k: usize| (1..=k).fold(BigUint::one(), |acc, i| acc * i);
    let mut denom = BigUint::one();
    for &s in sizes.parts() {
        denom *= factorial(s);
    }
    let parts = sizes.parts();
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
        denom *= factorial(j);
        i += j;
    }
    factorial(sizes.weight()) / denom
}

/// Blowup centers sharing a block-size multiset within one stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterGroup {
    /// Block sizes of the partitions, singletons included. Not the essential
    /// shape, which subtracts one from each size.
    pub block_sizes: IntegerPartition,
    #[serde(serialize_with = "crate::serde_util::biguint_str")]
    pub count: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaStage {
    /// Number of blocks `k` of the partitions blown up at this stage.
    pub stage: usize,
    pub groups: Vec<CenterGroup>,
}

impl ThetaStage {
    pub fn total(&self) -> BigUint {
        self.groups.iter().map(|g| &g.count).sum()
    }
}

/// Stages `k = 2..=n-2` of the blowdown to the Fulton–MacPherson space. Stage
/// `k` blows up the strata labeled by partitions with `k` blocks of which at
/// least two are essential. Empty for `n ≤ 3`, where the map is the identity.
pub fn theta_schedule(n: usize) -> Vec<ThetaStage> {
    (2..n.saturating_sub(1))
        .map(|k| ThetaStage {
            stage: k,
            groups: integer_partitions(n, k)
                .into_iter()
                .filter(|sizes| sizes.parts().iter().filter(|&&s| s >= 2).count() >= 2)
                .map(|sizes| CenterGroup {
                    count: partitions_with_block_sizes(&sizes),
                    block_sizes: sizes,
                })
                .collect(),
        })
        .collect()
}

/// Stages `k = 1..=n-1` of the construction itself, with `S(n, k)` centers
/// each.
pub fn construction_schedule(n: usize) -> Result<Vec<(usize, BigUint)>> {
    if n < 2 {
        return Err(Error::validation("n", "must be at least 2"));
    }
    Ok((1..n).map(|k| (k, stirling2(n, k))).collect())
}
