//! Strata of `X⟨n⟩`, bricks, and the product lattices `L_λ` that stratify
//! bricks.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{IntegerPartition, SetPartition};
use crate::trees::{lambda_sequence, Chain};

/// The brick `M^m_λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Brick {
    pub m: usize,
    pub shape: IntegerPartition,
    pub dim: usize,
    pub simple: bool,
}

impl Brick {
    pub fn new(m: usize, shape: IntegerPartition) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("m", "must be at least 1"));
        }
        if shape.is_empty() {
            return Err(Error::validation("lambda", "must have at least one part"));
        }
        Ok(Brick {
            m,
            dim: m * shape.weight() - 1,
            simple: shape.len() == 1,
            shape,
        })
    }
}

impl fmt::Display for Brick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M^{}_{}", self.m, self.shape)
    }
}

/// The closed stratum `S_γ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub n: usize,
    pub m: usize,
    pub chain: Chain,
    pub codim: usize,
    pub base_size: usize,
    pub fibers: Vec<Brick>,
}

impl Stratum {
    pub fn new(chain: Chain, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("m", "must be at least 1"));
        }
        let fibers = if chain.is_empty() {
            Vec::new()
        } else {
            lambda_sequence(&chain)?
                .into_iter()
                .skip(1)
                .map(|l| Brick::new(m, l))
                .collect::<Result<_>>()?
        };
        Ok(Stratum {
            n: chain.n(),
            m,
            codim: chain.len(),
            base_size: chain.base_size(),
            fibers,
            chain,
        })
    }

    pub fn dimension(&self) -> usize {
        self.m * self.n - self.codim
    }

    /// `m·n − codim = m·ρ(π₁) + Σ dim M^m_{λ_i}`.
    pub fn dimension_identity_holds(&self) -> bool {
        let fiber_dims: usize = self.fibers.iter().map(|b| b.dim).sum();
        self.dimension() == self.m * self.base_size + fiber_dims
    }

    /// `S_γ ⊇ S_γ′` exactly when `γ ⊆ γ′`.
    pub fn contains(&self, other: &Stratum) -> bool {
        self.chain.is_subchain_of(&other.chain)
    }

    pub fn intersect(&self, other: &Stratum) -> Result<Option<Stratum>> {
        if self.m != other.m {
            return Err(Error::validation("m", "strata live in different spaces"));
        }
        intersect(&self.chain, &other.chain, self.m)
    }
}

/// `S_γ ∩ S_γ′`, nonempty exactly when `γ ∪ γ′` is a chain.
pub fn intersect(a: &Chain, b: &Chain, m: usize) -> Result<Option<Stratum>> {
    a.union(b)?.map(|c| Stratum::new(c, m)).transpose()
}

/// The exceptional divisor `D^π`: a bundle over `X⟨ρ(π)⟩` with fiber
/// `M^m_{λ(π)}`.
pub fn divisor_fiber(pi: &SetPartition, m: usize) -> Result<(usize, Brick)> {
    if pi.is_top() {
        return Err(Error::validation("partition", "the top partition carries no divisor"));
    }
    Ok((pi.rank(), Brick::new(m, pi.shape())?))
}

/// Base of a tower description: the compactification `X⟨r⟩` for closed
/// strata, the configuration space `Conf(X,r)` for open ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "size", rename_all = "snake_case")]
pub enum Base {
    Compactified(usize),
    Configuration(usize),
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Compactified(r) => write!(f, "X<{r}>"),
            Base::Configuration(r) => write!(f, "Conf(X,{r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundleDescription {
    pub base: Base,
    pub fibers: Vec<Brick>,
    pub open: bool,
    pub dimension: usize,
}

impl fmt::Display for BundleDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if !self.fibers.is_empty() {
            let sep = if self.open { " <- open " } else { " <- " };
            f.write_str(sep)?;
            for (i, b) in self.fibers.iter().enumerate() {
                if i > 0 {
                    f.write_str(" x ")?;
                }
                write!(f, "{b}")?;
            }
        }
        Ok(())
    }
}

/// `S_γ` as an iterated bundle over `X⟨ρ(π₁)⟩` (or `∘S_γ` over
/// `Conf(X, ρ(π₁))` when `open`). The empty chain describes the whole space.
pub fn bundle_description(chain: &Chain, m: usize, open: bool) -> Result<BundleDescription> {
    let stratum = Stratum::new(chain.clone(), m)?;
    if !stratum.dimension_identity_holds() {
        return Err(Error::Identity(format!("dimension bookkeeping fails for {chain}")));
    }
    let base = if open {
        Base::Configuration(stratum.base_size)
    } else {
        Base::Compactified(stratum.base_size)
    };
    Ok(BundleDescription {
        base,
        dimension: stratum.dimension(),
        fibers: stratum.fibers,
        open,
    })
}

/// An element of `L_λ = L_[ν₁+1] × ⋯ × L_[ν_r+1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductPartition(Vec<SetPartition>);

impl ProductPartition {
    pub fn bottom(shape: &IntegerPartition) -> Self {
        ProductPartition(shape.parts().iter().map(|&v| SetPartition::bottom(v + 1)).collect())
    }

    pub fn top(shape: &IntegerPartition) -> Self {
        ProductPartition(shape.parts().iter().map(|&v| SetPartition::top(v + 1)).collect())
    }

    pub fn factors(&self) -> &[SetPartition] {
        &self.0
    }

    pub fn leq(&self, other: &ProductPartition) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| a.leq(b).unwrap_or(false))
    }

    /// All strictly finer elements, in lexicographic factor order.
    pub fn strict_refinements(&self) -> Vec<ProductPartition> {
        let options: Vec<Vec<SetPartition>> = self
            .0
            .iter()
            .map(|p| std::iter::once(p.clone()).chain(p.strict_refinements()).collect())
            .collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; options.len()];
        loop {
            if choice.iter().any(|&c| c > 0) {
                out.push(ProductPartition(
                    choice.iter().zip(&options).map(|(&c, o)| o[c].clone()).collect(),
                ));
            }
            let mut i = options.len();
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }

    /// Shape of `[self, finer]`: the factor shapes merged.
    pub fn interval_shape(&self, finer: &ProductPartition) -> Result<IntegerPartition> {
        if self == finer || !self.leq(finer) {
            return Err(Error::NotComparable(format!(
                "[{self}, {finer}] is not a nontrivial interval"
            )));
        }
        let mut parts = Vec::new();
        for (a, b) in self.0.iter().zip(&finer.0) {
            if a != b {
                parts.extend_from_slice(a.interval_shape(b)?.parts());
            }
        }
        IntegerPartition::new(parts)
    }
}

impl fmt::Display for ProductPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// A chain in the open interval `(⊥_λ, ⊤_λ)` with its factor shapes
/// `λ₀, …, λ_k`; the closed stratum is `M^m_{λ₀} × ⋯ × M^m_{λ_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrickStratum {
    pub chain: Vec<ProductPartition>,
    pub factors: Vec<IntegerPartition>,
}

/// Every stratum of the brick `M^m_λ`, empty chain first, depth-first.
pub fn brick_strata(shape: &IntegerPartition) -> Result<Vec<BrickStratum>> {
    if shape.is_empty() {
        return Err(Error::validation("lambda", "must have at least one part"));
    }
    let bottom = ProductPartition::bottom(shape);
    let top = ProductPartition::top(shape);
    let mut out = Vec::new();
    let mut chain = Vec::new();
    walk(&bottom, &top, &mut chain, &mut out)?;
    Ok(out)
}

fn walk(
    bottom: &ProductPartition,
    top: &ProductPartition,
    chain: &mut Vec<ProductPartition>,
    out: &mut Vec<BrickStratum>,
) -> Result<()> {
    let mut factors = Vec::with_capacity(chain.len() + 1);
    let mut prev = bottom;
    for p in chain.iter().chain(std::iter::once(top)) {
        factors.push(prev.interval_shape(p)?);
        prev = p;
    }
    out.push(BrickStratum { chain: chain.clone(), factors });
    let last = chain.last().unwrap_or(bottom).clone();
    for next in last.strict_refinements() {
        if next == *top {
            continue;
        }
        chain.push(next);
        walk(bottom, top, chain, out)?;
        chain.pop();
    }
    Ok(())
}

/// Closed fibration `Π_r → M^m_{1^r} → (M^m_1)^r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFibration {
    pub fiber: Brick,
    pub base: Vec<Brick>,
}

/// Fibrations of a compound brick: the open one
/// `∘M¹_{1^r} → ∘M^m_λ → ∏ ∘M^m_{ν_i}` whose fiber is a torus of rank
/// `r − 1`, and for `λ = 1^r` the closed one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrickDecomposition {
    pub brick: Brick,
    pub torus_rank: usize,
    pub open_fiber: Brick,
    pub open_base: Vec<Brick>,
    pub closed: Option<ClosedFibration>,
}

pub fn brick_decomposition(shape: &IntegerPartition, m: usize) -> Result<BrickDecomposition> {
    let brick = Brick::new(m, shape.clone())?;
    if brick.simple {
        return Err(Error::validation("lambda", "a simple brick has no compound decomposition"));
    }
    let r = shape.len();
    let singles = |m: usize, parts: &[usize]| -> Result<Vec<Brick>> {
        parts.iter().map(|&v| Brick::new(m, IntegerPartition::single(v))).collect()
    };
    let open_fiber = Brick::new(1, IntegerPartition::ones(r))?;
    let closed = if shape.parts().iter().all(|&v| v == 1) {
        Some(ClosedFibration {
            fiber: open_fiber.clone(),
            base: singles(m, shape.parts())?,
        })
    } else {
        None
    };
    Ok(BrickDecomposition {
        open_base: singles(m, shape.parts())?,
        torus_rank: r - 1,
        open_fiber,
        closed,
        brick,
    })
}

/// `λ ≤ λ′` in `Λ_r`: `λ′` refines `λ`, i.e. the parts of `λ′` can be grouped
/// so that the groups sum to the parts of `λ`.
pub fn brick_order_leq(coarse: &IntegerPartition, fine: &IntegerPartition) -> Result<bool> {
    if coarse.weight() != fine.weight() {
        return Err(Error::validation(
            "lambda",
            format!(
                "weights differ: |{coarse}| = {} but |{fine}| = {}",
                coarse.weight(),
                fine.weight()
            ),
        ));
    }
    if fine.len() < coarse.len() {
        return Ok(false);
    }
    let mut bins = coarse.parts().to_vec();
    Ok(pack(fine.parts(), &mut bins))
}

// Place the (descending) parts one by one into bins with remaining capacity.
fn pack(items: &[usize], bins: &mut [usize]) -> bool {
    let Some((&first, rest)) = items.split_first() else {
        return bins.iter().all(|&b| b == 0);
    };
    for i in 0..bins.len() {
        // bins with equal remaining capacity are interchangeable
        if bins[i] < first || bins[..i].contains(&bins[i]) {
            continue;
        }
        bins[i] -= first;
        if pack(rest, bins) {
            bins[i] += first;
            return true;
        }
        bins[i] += first;
    }
    false
}
