//! Dense polynomials with arbitrary-precision integer coefficients.
//!
//! [`UPoly`] is univariate in `u`, where `u = t² = z·z̄`. [`XPoly`] is a
//! polynomial in `x` (standing for the Hodge polynomial of the base variety)
//! whose coefficients are `UPoly`s.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Remainder, Result};

/// Variable used when rendering: `u`, or `t` with doubled exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Var {
    #[default]
    U,
    T,
}

impl Var {
    fn name(self) -> char {
        match self {
            Var::U => 'u',
            Var::T => 't',
        }
    }

    fn exponent(self, d: usize) -> usize {
        match self {
            Var::U => d,
            Var::T => 2 * d,
        }
    }
}

/// Polynomial in `u`; index `i` holds the coefficient of `u^i`. No trailing
/// zeros, so the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly(Vec<BigInt>);

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        UPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![BigInt::one()])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        UPoly::new(vec![c.into()])
    }

    /// `c·u^d`
    pub fn monomial(c: impl Into<BigInt>, d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = c.into();
        UPoly::new(coeffs)
    }

    /// The polynomial `u`.
    pub fn u() -> Self {
        UPoly::monomial(1, 1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.0.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, at: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * at + c)
    }

    pub fn pow(&self, e: u32) -> UPoly {
        (0..e).fold(UPoly::one(), |acc, _| &acc * self)
    }

    /// Coefficients read the same in both directions.
    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    /// `self / divisor`, failing unless the division is exact over the
    /// integers.
    pub fn exact_div(&self, divisor: &UPoly) -> Result<UPoly> {
        let lead = divisor
            .0
            .last()
            .ok_or_else(|| Error::validation("divisor", "division by the zero polynomial"))?;
        let dq = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dq {
            return if self.is_zero() {
                Ok(UPoly::zero())
            } else {
                Err(Error::Divisibility {
                    remainder: Remainder(rem),
                })
            };
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dq];
        for i in (0..quot.len()).rev() {
            let top = &rem[i + dq];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::Divisibility {
                    remainder: Remainder(UPoly::new(rem).0),
                });
            }
            for (j, d) in divisor.0.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        let rem = UPoly::new(rem);
        if !rem.is_zero() {
            return Err(Error::Divisibility { remainder: Remainder(rem.0) });
        }
        Ok(UPoly::new(quot))
    }

    pub fn render(&self, var: Var) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (d, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if negative {
                s.push('-');
            } else if !s.is_empty() {
                s.push('+');
            }
            let abs = c.abs();
            if d == 0 || !abs.is_one() {
                s.push_str(&abs.to_string());
            }
            if d > 0 {
                s.push(var.name());
                let e = var.exponent(d);
                if e > 1 {
                    s.push_str(&format!("^{e}"));
                }
            }
        }
        s
    }

    fn term_count(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Var::U))
    }
}

impl Add<&UPoly> for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let len = self.0.len().max(rhs.0.len());
        UPoly::new((0..len).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&UPoly> for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let len = self.0.len().max(rhs.0.len());
        UPoly::new((0..len).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&UPoly> for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        &self + &rhs
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        &self - &rhs
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        &self * &rhs
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        -&self
    }
}

impl AddAssign<&UPoly> for UPoly {
    fn add_assign(&mut self, rhs: &UPoly) {
        *self = &*self + rhs;
    }
}

impl Serialize for UPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::serde_util::bigint_vec_str(&self.0, s)
    }
}

/// Accepts coefficients as decimal strings or JSON integers.
#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffJson {
    Text(String),
    Int(i64),
}

impl<'de> Deserialize<'de> for UPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<CoeffJson>::deserialize(d)?;
        let coeffs = raw
            .into_iter()
            .map(|c| match c {
                CoeffJson::Int(i) => Ok(BigInt::from(i)),
                CoeffJson::Text(t) => t
                    .trim()
                    .parse::<BigInt>()
                    .map_err(|_| serde::de::Error::custom(format!("'{t}' is not an integer"))),
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(UPoly::new(coeffs))
    }
}

/// `h_d = u + u² + … + u^{d-1}`, the Hodge polynomial of `ℙ^{d-1}` minus one.
pub fn h(d: usize) -> Result<UPoly> {
    if d == 0 {
        return Err(Error::validation("d", "must be at least 1"));
    }
    let mut coeffs = vec![BigInt::one(); d];
    coeffs[0] = BigInt::zero();
    Ok(UPoly::new(coeffs))
}

/// `1 + u + … + u^{d-1}`, the Hodge polynomial of `ℙ^{d-1}`.
pub fn projective(d: usize) -> Result<UPoly> {
    if d == 0 {
        return Err(Error::validation("d", "must be at least 1"));
    }
    Ok(UPoly::new(vec![BigInt::one(); d]))
}

/// Polynomial in `x` with [`UPoly`] coefficients; index `s` holds the
/// coefficient of `x^s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct XPoly(Vec<UPoly>);

impl XPoly {
    pub fn new(mut coeffs: Vec<UPoly>) -> Self {
        while coeffs.last().is_some_and(UPoly::is_zero) {
            coeffs.pop();
        }
        XPoly(coeffs)
    }

    pub fn zero() -> Self {
        XPoly(Vec::new())
    }

    pub fn one() -> Self {
        XPoly::constant(UPoly::one())
    }

    pub fn constant(c: UPoly) -> Self {
        XPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        XPoly::x_pow(1)
    }

    pub fn x_pow(s: usize) -> Self {
        let mut coeffs = vec![UPoly::zero(); s + 1];
        coeffs[s] = UPoly::one();
        XPoly(coeffs)
    }

    /// `c·x^s`
    pub fn term(c: UPoly, s: usize) -> Self {
        let mut coeffs = vec![UPoly::zero(); s + 1];
        coeffs[s] = c;
        XPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.0
    }

    pub fn coeff(&self, s: usize) -> UPoly {
        self.0.get(s).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn scale(&self, c: &UPoly) -> XPoly {
        XPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> XPoly {
        (0..e).fold(XPoly::one(), |acc, _| &acc * self)
    }

    /// Substitutes `value` for `x`.
    pub fn eval_x(&self, value: &XPoly) -> XPoly {
        self.0
            .iter()
            .rev()
            .fold(XPoly::zero(), |acc, c| &(&acc * value) + &XPoly::constant(c.clone()))
    }

    /// Substitutes a polynomial in `u` for `x`.
    pub fn eval_u(&self, value: &UPoly) -> UPoly {
        self.0.iter().rev().fold(UPoly::zero(), |acc, c| &(&acc * value) + c)
    }

    pub fn render(&self, var: Var) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (p, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let x = match p {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{p}"),
            };
            let body = c.render(var);
            let term = if p == 0 {
                body
            } else if c.is_one() {
                x
            } else if c == &-UPoly::one() {
                format!("-{x}")
            } else if c.degree() == Some(0) {
                format!("{body}{x}")
            } else if c.term_count() == 1 {
                format!("{body}*{x}")
            } else {
                format!("({body})*{x}")
            };
            if !s.is_empty() && !term.starts_with('-') {
                s.push('+');
            }
            s.push_str(&term);
        }
        s
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Var::U))
    }
}

impl Add<&XPoly> for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        let len = self.0.len().max(rhs.0.len());
        XPoly::new((0..len).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub<&XPoly> for &XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        let len = self.0.len().max(rhs.0.len());
        XPoly::new((0..len).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul<&XPoly> for &XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![UPoly::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        XPoly::new(out)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for XPoly {
    type Output = XPoly;
    fn add(self, rhs: XPoly) -> XPoly {
        &self + &rhs
    }
}

impl Sub for XPoly {
    type Output = XPoly;
    fn sub(self, rhs: XPoly) -> XPoly {
        &self - &rhs
    }
}

impl Mul for XPoly {
    type Output = XPoly;
    fn mul(self, rhs: XPoly) -> XPoly {
        &self * &rhs
    }
}

impl AddAssign<&XPoly> for XPoly {
    fn add_assign(&mut self, rhs: &XPoly) {
        *self = &*self + rhs;
    }
}

impl Serialize for XPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for XPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(XPoly::new(Vec::<UPoly>::deserialize(d)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_i64s(c)
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&up(&[1, 1]) * &up(&[-1, 1]), up(&[-1, 0, 1]));
        let cube = XPoly::x().pow(3).eval_x(&XPoly::constant(up(&[1, 1])));
        assert_eq!(cube, XPoly::constant(up(&[1, 3, 3, 1])));
        let p = XPoly::new(vec![up(&[0, 2]), up(&[1])]);
        assert_eq!(&p + &XPoly::zero(), p);
        assert_eq!(XPoly::x().pow(2).eval_u(&up(&[1, 1])), up(&[1, 2, 1]));
    }

    #[test]
    fn exact_division() {
        assert_eq!(up(&[-1, 0, 1]).exact_div(&up(&[-1, 1])).unwrap(), up(&[1, 1]));
        let prod = &up(&[-1, 1]) * &up(&[-2, 1]);
        assert_eq!(prod.exact_div(&up(&[-1, 1])).unwrap(), up(&[-2, 1]));
        match up(&[1, 0, 1]).exact_div(&up(&[-1, 1])) {
            Err(Error::Divisibility { remainder }) => {
                assert_eq!(remainder.0, vec![BigInt::from(2)]);
            }
            other => panic!("expected divisibility error, got {other:?}"),
        }
        assert!(up(&[1, 1]).exact_div(&UPoly::zero()).is_err());
        assert!(up(&[1, 1]).exact_div(&up(&[0, 2])).is_err());
        assert_eq!(UPoly::zero().exact_div(&up(&[3])).unwrap(), UPoly::zero());
    }

    #[test]
    fn h_and_projective() {
        assert_eq!(h(3).unwrap(), up(&[0, 1, 1]));
        assert_eq!(h(1).unwrap(), UPoly::zero());
        assert_eq!(h(2).unwrap(), UPoly::u());
        assert!(h(0).is_err());
        assert_eq!(projective(2).unwrap(), up(&[1, 1]));
        assert_eq!(projective(1).unwrap(), UPoly::one());
        for d in 2..12 {
            assert_eq!(projective(d).unwrap(), &h(d).unwrap() + &UPoly::one());
            let step = &projective(d + 1).unwrap() - &projective(d).unwrap();
            assert_eq!(step, UPoly::monomial(1, d));
        }
    }

    #[test]
    fn h_shape() {
        for d in 1..15 {
            let p = h(d).unwrap();
            assert!(p.coeffs().iter().all(|c| !c.is_negative()));
            assert_eq!(p.degree(), if d == 1 { None } else { Some(d - 1) });
            assert_eq!(p.eval(&BigInt::one()), BigInt::from(d - 1));
        }
    }

    #[test]
    fn rendering() {
        assert_eq!(up(&[1, 4, 1]).to_string(), "u^2+4u+1");
        assert_eq!(up(&[1, 4, 1]).render(Var::T), "t^4+4t^2+1");
        assert_eq!(up(&[-2, 1]).to_string(), "u-2");
        assert_eq!(up(&[1, 0, -1]).to_string(), "-u^2+1");
        assert_eq!(UPoly::zero().to_string(), "0");
        let p = XPoly::new(vec![UPoly::zero(), UPoly::u(), UPoly::one()]);
        assert_eq!(p.to_string(), "x^2+u*x");
        assert_eq!(p.render(Var::T), "x^2+t^2*x");
        let q = XPoly::new(vec![up(&[2]), up(&[-3]), up(&[0, 1, 1]), -&UPoly::one()]);
        assert_eq!(q.to_string(), "-x^3+(u^2+u)*x^2-3x+2");
    }

    #[test]
    fn json_form() {
        let p = XPoly::new(vec![UPoly::zero(), up(&[0, 1]), up(&[1])]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"[[],["0","1"],["1"]]"#);
        assert_eq!(serde_json::from_str::<XPoly>(&text).unwrap(), p);
        assert_eq!(serde_json::from_str::<UPoly>("[1, \"-2\", 0]").unwrap(), up(&[1, -2]));
    }

    fn small_poly() -> impl Strategy<Value = UPoly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|c| UPoly::from_i64s(&c))
    }

    fn small_xpoly() -> impl Strategy<Value = XPoly> {
        prop::collection::vec(small_poly(), 0..4).prop_map(XPoly::new)
    }

    proptest! {
        #[test]
        fn upoly_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn xpoly_ring_axioms(a in small_xpoly(), b in small_xpoly(), c in small_xpoly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn exact_div_inverts_mul(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }

        #[test]
        fn eval_is_a_ring_map(a in small_xpoly(), b in small_xpoly(), v in small_poly()) {
            prop_assert_eq!((&a * &b).eval_u(&v), &a.eval_u(&v) * &b.eval_u(&v));
            prop_assert_eq!((&a + &b).eval_u(&v), &a.eval_u(&v) + &b.eval_u(&v));
        }
    }
}
