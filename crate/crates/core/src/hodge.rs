//! Virtual Hodge polynomials of `X⟨n⟩`, its strata, and bricks.
//!
//! Everything lives in `u = z·z̄`; `x` stands for the Hodge polynomial of the
//! `m`-dimensional base variety `X`. Stratum polynomials multiply base and
//! fiber contributions, which presumes the tower bundles are Zariski-locally
//! trivial.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::RwLock;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{stirling2, IntegerPartition};
use crate::polyring::{h, UPoly, XPoly};
use crate::strata::brick_strata;
use crate::trees::{enumerate_chains, lambda_sequence, Chain};

/// Write-once memo table.
#[derive(Debug)]
struct Memo<K, V>(RwLock<HashMap<K, V>>);

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    fn new() -> Self {
        Memo(RwLock::new(HashMap::new()))
    }

    fn get(&self, k: &K) -> Option<V> {
        self.0.read().expect("memo lock").get(k).cloned()
    }

    fn get_or_try(&self, k: &K, f: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.get(k) {
            return Ok(v);
        }
        let v = f()?;
        Ok(self.0.write().expect("memo lock").entry(k.clone()).or_insert(v).clone())
    }
}

fn big(v: num_bigint::BigUint) -> UPoly {
    UPoly::constant(BigInt::from(v))
}

/// Polynomial machinery for a fixed base dimension `m`.
#[derive(Debug)]
pub struct HodgeContext {
    m: usize,
    u: Memo<usize, XPoly>,
    conf: Memo<usize, XPoly>,
    brick: Memo<IntegerPartition, UPoly>,
    open_brick: Memo<IntegerPartition, UPoly>,
}

impl HodgeContext {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::validation("m", "must be at least 1"));
        }
        Ok(HodgeContext {
            m,
            u: Memo::new(),
            conf: Memo::new(),
            brick: Memo::new(),
            open_brick: Memo::new(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `U^m_n = x^n + Σ_{k<n} S(n,k)·h_{(n−k)m}·U^m_k`, `U^m_1 = x`.
    pub fn u_poly(&self, n: usize) -> Result<XPoly> {
        check_n(n)?;
        if let Some(p) = self.u.get(&n) {
            return Ok(p);
        }
        self.u.get_or_try(&n, || {
            let mut acc = XPoly::x_pow(n);
            for k in 1..n {
                let c = &big(stirling2(n, k)) * &h((n - k) * self.m)?;
                if !c.is_zero() {
                    acc += &self.u_poly(k)?.scale(&c);
                }
            }
            Ok(acc)
        })
    }

    /// The nonrecursive form: `x^n + Σ_s x^s Σ_{s=j₀<⋯<j_r=n}
    /// Π_i S(j_i, j_{i−1})·h_{(j_i − j_{i−1})m}`.
    pub fn u_poly_closed(&self, n: usize) -> Result<XPoly> {
        check_n(n)?;
        if n > 30 {
            return Err(Error::validation("n", "closed form is limited to n <= 30"));
        }
        let mut acc = XPoly::x_pow(n);
        for s in 1..n {
            let interior = n - s - 1;
            let mut coeff = UPoly::zero();
            for mask in 0u64..(1 << interior) {
                let mut js = vec![s];
                js.extend((0..interior).filter(|b| mask >> b & 1 == 1).map(|b| s + 1 + b));
                js.push(n);
                let mut term = UPoly::one();
                for w in js.windows(2) {
                    term = &(&term * &big(stirling2(w[1], w[0]))) * &h((w[1] - w[0]) * self.m)?;
                    if term.is_zero() {
                        break;
                    }
                }
                coeff += &term;
            }
            acc += &XPoly::term(coeff, s);
        }
        Ok(acc)
    }

    /// `e(Conf(X,n))`, from `x^n = Σ_k S(n,k)·e(Conf(X,k))`.
    pub fn conf_poly(&self, n: usize) -> Result<XPoly> {
        check_n(n)?;
        if let Some(p) = self.conf.get(&n) {
            return Ok(p);
        }
        self.conf.get_or_try(&n, || {
            let mut acc = XPoly::x_pow(n);
            for k in 1..n {
                acc = &acc - &self.conf_poly(k)?.scale(&big(stirling2(n, k)));
            }
            Ok(acc)
        })
    }

    /// `e(∘M^m_λ) = Π_i Π_{j=1}^{ν_i} (u^m − j) / (u − 1)`.
    pub fn open_brick_poly(&self, shape: &IntegerPartition) -> Result<UPoly> {
        check_shape(shape)?;
        self.open_brick.get_or_try(shape, || {
            let um = UPoly::monomial(1, self.m);
            let mut prod = UPoly::one();
            for &v in shape.parts() {
                for j in 1..=v {
                    prod = &prod * &(&um - &UPoly::constant(j));
                }
            }
            prod.exact_div(&UPoly::from_i64s(&[-1, 1]))
        })
    }

    /// `e(M^m_λ)`: open-brick contributions summed over the strata of the
    /// brick.
    pub fn brick_poly(&self, shape: &IntegerPartition) -> Result<UPoly> {
        check_shape(shape)?;
        self.brick.get_or_try(shape, || {
            let mut acc = UPoly::zero();
            for stratum in brick_strata(shape)? {
                let mut term = UPoly::one();
                for f in &stratum.factors {
                    term = &term * &self.open_brick_poly(f)?;
                }
                acc += &term;
            }
            Ok(acc)
        })
    }

    /// `e(S_γ)` (closed) or `e(∘S_γ)` (open).
    pub fn stratum_poly(&self, chain: &Chain, open: bool) -> Result<XPoly> {
        if chain.is_empty() {
            return if open { self.conf_poly(chain.n()) } else { self.u_poly(chain.n()) };
        }
        let lambdas = lambda_sequence(chain)?;
        let base = chain.base_size();
        let mut fiber = UPoly::one();
        for l in &lambdas[1..] {
            let f = if open { self.open_brick_poly(l)? } else { self.brick_poly(l)? };
            fiber = &fiber * &f;
        }
        let base = if open { self.conf_poly(base)? } else { self.u_poly(base)? };
        Ok(base.scale(&fiber))
    }

    /// Checks `Σ_γ e(∘S_γ) = U^m_n` over all chains.
    pub fn consistency_check(&self, n: usize) -> Result<ConsistencyReport> {
        if n < 2 {
            return Err(Error::validation("n", "must be at least 2"));
        }
        let mut total = XPoly::zero();
        let mut chains = 0usize;
        for chain in enumerate_chains(n, None)? {
            total += &self.stratum_poly(&chain, true)?;
            chains += 1;
        }
        let expected = self.u_poly(n)?;
        let mut diff = Vec::new();
        let xdeg = expected.coeffs().len().max(total.coeffs().len());
        for s in 0..xdeg {
            let (e, a) = (expected.coeff(s), total.coeff(s));
            for d in 0..e.coeffs().len().max(a.coeffs().len()) {
                if e.coeff(d) != a.coeff(d) {
                    diff.push(CoefficientDiff {
                        x_power: s,
                        u_power: d,
                        expected: e.coeff(d).to_string(),
                        actual: a.coeff(d).to_string(),
                    });
                }
            }
        }
        Ok(ConsistencyReport {
            ok: diff.is_empty(),
            m: self.m,
            n,
            chains,
            diff,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::validation("n", "must be at least 1"));
    }
    Ok(())
}

fn check_shape(shape: &IntegerPartition) -> Result<()> {
    if shape.is_empty() {
        return Err(Error::validation("lambda", "must have at least one part"));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientDiff {
    pub x_power: usize,
    pub u_power: usize,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub ok: bool,
    pub m: usize,
    pub n: usize,
    pub chains: usize,
    pub diff: Vec<CoefficientDiff>,
}

pub fn u_poly(m: usize, n: usize) -> Result<XPoly> {
    HodgeContext::new(m)?.u_poly(n)
}

pub fn u_poly_closed(m: usize, n: usize) -> Result<XPoly> {
    HodgeContext::new(m)?.u_poly_closed(n)
}

/// Independent of `m`.
pub fn conf_poly(n: usize) -> Result<XPoly> {
    HodgeContext::new(1)?.conf_poly(n)
}

pub fn open_brick_poly(m: usize, shape: &IntegerPartition) -> Result<UPoly> {
    HodgeContext::new(m)?.open_brick_poly(shape)
}

pub fn brick_poly(m: usize, shape: &IntegerPartition) -> Result<UPoly> {
    HodgeContext::new(m)?.brick_poly(shape)
}

pub fn stratum_poly(m: usize, chain: &Chain, open: bool) -> Result<XPoly> {
    HodgeContext::new(m)?.stratum_poly(chain, open)
}

pub fn consistency_check(m: usize, n: usize) -> Result<ConsistencyReport> {
    HodgeContext::new(m)?.consistency_check(n)
}
