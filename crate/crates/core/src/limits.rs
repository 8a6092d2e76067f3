//! Limits of colliding configurations.
//!
//! A one-parameter family of configurations degenerating at `t = 0` is
//! summarized by its collision exponents: `|x_i − x_j| ~ t^{e_ij}`. Those
//! exponents determine which stratum of `X⟨n⟩` the family limits to.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::SetPartition;
use crate::trees::{chain_to_tree, nest_of, Chain, LeveledTree, Nest};

/// Symmetric matrix of nonnegative collision exponents; `0` means the pair
/// does not collide.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproachProfile {
    n: usize,
    exponents: Vec<Vec<BigRational>>,
}

impl ApproachProfile {
    /// Diagonal entries are ignored.
    pub fn new(exponents: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = exponents.len();
        if n < 2 {
            return Err(Error::validation("n", "a profile needs at least two points"));
        }
        for (i, row) in exponents.iter().enumerate() {
            if row.len() != n {
                return Err(Error::validation(
                    "exponents",
                    format!("row {} has {} entries, expected {n}", i + 1, row.len()),
                ));
            }
        }
        // symmetric matrix checks read clearer with explicit indices
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if exponents[i][j].is_negative() {
                    return Err(Error::validation(
                        "exponents",
                        format!("entry ({},{}) is negative", i + 1, j + 1),
                    ));
                }
                if exponents[i][j] != exponents[j][i] {
                    return Err(Error::validation(
                        "exponents",
                        format!("entries ({},{}) and ({},{}) differ", i + 1, j + 1, j + 1, i + 1),
                    ));
                }
            }
        }
        let mut exponents = exponents;
        for (i, row) in exponents.iter_mut().enumerate() {
            row[i] = BigRational::zero();
        }
        Ok(ApproachProfile { n, exponents })
    }

    /// Builds a profile from the strictly upper triangle, row by row.
    pub fn from_pairs(n: usize, f: impl Fn(usize, usize) -> BigRational) -> Result<Self> {
        let mut e = vec![vec![BigRational::zero(); n]; n];
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            for j in i + 1..n {
                e[i][j] = f(i + 1, j + 1);
                e[j][i] = e[i][j].clone();
            }
        }
        ApproachProfile::new(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `e_ij` for 1-based `i ≠ j`.
    pub fn exponent(&self, i: usize, j: usize) -> &BigRational {
        &self.exponents[i - 1][j - 1]
    }

    /// Multiplies every exponent by `factor > 0`.
    pub fn scaled(&self, factor: &BigRational) -> Result<Self> {
        if !factor.is_positive() {
            return Err(Error::validation("factor", "must be positive"));
        }
        ApproachProfile::new(
            self.exponents
                .iter()
                .map(|row| row.iter().map(|e| e * factor).collect())
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ProfileJson {
    n: usize,
    exponents: Vec<Vec<Option<RationalJson>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RationalJson {
    Text(String),
    Int(i64),
}

impl RationalJson {
    fn parse(&self, field: &str) -> Result<BigRational> {
        match self {
            RationalJson::Int(i) => Ok(BigRational::from_integer(BigInt::from(*i))),
            RationalJson::Text(t) => t.trim().parse::<BigRational>().map_err(|_| {
                Error::validation(field, format!("'{t}' is not a rational number p/q"))
            }),
        }
    }
}

impl Serialize for ApproachProfile {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let exponents = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| (i != j).then(|| RationalJson::Text(self.exponents[i][j].to_string())))
                    .collect()
            })
            .collect();
        ProfileJson { n: self.n, exponents }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApproachProfile {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ProfileJson::deserialize(d)?;
        if raw.exponents.len() != raw.n {
            return Err(D::Error::custom(format!(
                "exponents: expected {} rows, got {}",
                raw.n,
                raw.exponents.len()
            )));
        }
        let mut rows = Vec::with_capacity(raw.n);
        for (i, row) in raw.exponents.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                out.push(match cell {
                    None if i == j => BigRational::zero(),
                    None => {
                        return Err(D::Error::custom(format!(
                            "exponents: entry ({},{}) is null off the diagonal",
                            i + 1,
                            j + 1
                        )))
                    }
                    Some(r) => r.parse("exponents").map_err(D::Error::custom)?,
                });
            }
            rows.push(out);
        }
        ApproachProfile::new(rows).map_err(D::Error::custom)
    }
}

/// Outcome of the ultrametric check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileCheck {
    pub ok: bool,
    /// 1-based, ascending, each triple listed once.
    pub violations: Vec<[usize; 3]>,
}

/// Checks `e_ik ≥ min(e_ij, e_jk)` for every triple.
pub fn validate(profile: &ApproachProfile) -> ProfileCheck {
    let n = profile.n;
    let e = &profile.exponents;
    let mut bad = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                if e[i][k] < e[i][j].clone().min(e[j][k].clone()) {
                    let mut t = [i + 1, j + 1, k + 1];
                    t.sort_unstable();
                    bad.insert(t);
                }
            }
        }
    }
    ProfileCheck {
        ok: bad.is_empty(),
        violations: bad.into_iter().collect(),
    }
}

/// Polynomial curves `t ↦ x_i(t) ∈ 𝔸^m` with rational coefficients; entry
/// `[i][c][d]` is the coefficient of `t^d` in coordinate `c` of point `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproachCurves {
    m: usize,
    curves: Vec<Vec<Vec<BigRational>>>,
}

impl ApproachCurves {
    pub fn new(m: usize, curves: Vec<Vec<Vec<BigRational>>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("m", "must be at least 1"));
        }
        if curves.len() < 2 {
            return Err(Error::validation("curves", "need at least two points"));
        }
        for (i, c) in curves.iter().enumerate() {
            if c.len() != m {
                return Err(Error::validation(
                    "curves",
                    format!("point {} has {} coordinates, expected {m}", i + 1, c.len()),
                ));
            }
        }
        Ok(ApproachCurves { m, curves })
    }

    pub fn n(&self) -> usize {
        self.curves.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

#[derive(Serialize, Deserialize)]
struct CurvesJson {
    n: usize,
    m: usize,
    curves: Vec<Vec<Vec<RationalJson>>>,
}

impl Serialize for ApproachCurves {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let curves = self
            .curves
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| c.iter().map(|q| RationalJson::Text(q.to_string())).collect())
                    .collect()
            })
            .collect();
        CurvesJson { n: self.n(), m: self.m, curves }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApproachCurves {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CurvesJson::deserialize(d)?;
        if raw.curves.len() != raw.n {
            return Err(D::Error::custom(format!(
                "curves: expected {} points, got {}",
                raw.n,
                raw.curves.len()
            )));
        }
        let curves = raw
            .curves
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| c.iter().map(|q| q.parse("curves")).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ApproachCurves::new(raw.m, curves).map_err(D::Error::custom)
    }
}

/// Lowest power of `t` with a nonzero coefficient in `a − b`.
fn valuation(a: &[BigRational], b: &[BigRational]) -> Option<usize> {
    let zero = BigRational::zero();
    (0..a.len().max(b.len())).find(|&d| a.get(d).unwrap_or(&zero) != b.get(d).unwrap_or(&zero))
}

/// `e_ij` = order of vanishing of `x_i − x_j` at `t = 0`.
pub fn profile_from_curves(curves: &ApproachCurves) -> Result<ApproachProfile> {
    let n = curves.n();
    let mut e = vec![vec![BigRational::zero(); n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in i + 1..n {
            let v = curves.curves[i]
                .iter()
                .zip(&curves.curves[j])
                .filter_map(|(a, b)| valuation(a, b))
                .min()
                .ok_or_else(|| {
                    Error::validation(
                        "curves",
                        format!("points {} and {} follow identical curves", i + 1, j + 1),
                    )
                })?;
            e[i][j] = BigRational::from_integer(BigInt::from(v));
            e[j][i] = e[i][j].clone();
        }
    }
    ApproachProfile::new(e)
}

/// The limiting stratum of a degenerating family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub chain: Chain,
    pub tree: LeveledTree,
    pub nest: Nest,
}

/// `π_j` groups the points whose mutual exponents reach the `j`-th smallest
/// positive value.
pub fn classify(profile: &ApproachProfile) -> Result<Classification> {
    let check = validate(profile);
    if let Some(t) = check.violations.first() {
        return Err(Error::validation(
            "exponents",
            format!(
                "ultrametric law fails on {} triple(s), first ({},{},{})",
                check.violations.len(),
                t[0],
                t[1],
                t[2]
            ),
        ));
    }
    let n = profile.n;
    let levels: BTreeSet<&BigRational> = profile
        .exponents
        .iter()
        .flatten()
        .filter(|e| e.is_positive())
        .collect();
    let mut partitions = Vec::with_capacity(levels.len());
    for s in levels {
        // the relation e ≥ s is transitive on a valid profile, so each point
        // joins the block of the first earlier point it is related to
        let mut rgs = vec![0usize; n];
        let mut next = 0;
        for i in 0..n {
            rgs[i] = match (0..i).find(|&j| &profile.exponents[i][j] >= s) {
                Some(j) => rgs[j],
                None => {
                    next += 1;
                    next - 1
                }
            };
        }
        partitions.push(SetPartition::from_rgs(&rgs)?);
    }
    let chain = Chain::new(n, partitions)?;
    Ok(Classification {
        tree: chain_to_tree(&chain),
        nest: nest_of(&chain),
        chain,
    })
}
