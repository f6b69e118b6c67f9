//! Polynomials in the curvature-jet symbols over Q(a).
//!
//! Symbol `j` stands for the j-th derivative of the affine curvature at the
//! base point: `p = k'`, `q = k''`, then `r`, `s`, ... for higher jets.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::ratfunc::RationalFunc;
use super::{AlgebraError, Rational};

/// Total degree allowed in the jet symbols unless raised explicitly.
pub const DEFAULT_DEGREE_CAP: u32 = 2;

const SYMBOLS: [&str; 4] = ["p", "q", "r", "s"];

pub fn symbol_name(index: usize) -> String {
    match SYMBOLS.get(index.wrapping_sub(1)) {
        Some(s) => (*s).to_string(),
        None => format!("k{index}"),
    }
}

/// Exponent vector `(e_1, e_2, ...)` for `p^e_1 q^e_2 ...`, without
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The single symbol with 1-based index `j`.
    pub fn symbol(j: usize) -> Self {
        assert!(j >= 1, "jet symbols are 1-based");
        let mut e = vec![0; j];
        e[j - 1] = 1;
        Monomial(e)
    }

    pub fn from_exponents(mut e: Vec<u8>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Monomial(e)
    }

    pub fn exponent(&self, j: usize) -> u8 {
        self.0.get(j.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial::from_exponents(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    /// Removes symbol `j`, returning the remaining monomial and its exponent.
    fn without(&self, j: usize) -> (Monomial, u8) {
        let mut e = self.0.clone();
        let k = match e.get_mut(j - 1) {
            Some(slot) => std::mem::take(slot),
            None => 0,
        };
        (Monomial::from_exponents(e), k)
    }
}

impl Ord for Monomial {
    /// Graded; within a degree, `p` before `q` before `r`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&symbol_name(i + 1))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Finite sum of `coefficient * monomial` with nonzero coefficients.
///
/// Carries a degree cap; products that would exceed it are rejected, which
/// surfaces derivation bugs instead of silently growing the expression.
#[derive(Clone, Debug)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, RationalFunc>,
    cap: u32,
}

impl PartialEq for ParamPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for ParamPoly {}

impl Default for ParamPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new(), cap: DEFAULT_DEGREE_CAP }
    }

    pub fn constant(c: RationalFunc) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(RationalFunc::from_int(c))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::constant(RationalFunc::constant(c))
    }

    /// `p` for `j = 1`, `q` for `j = 2`, ...
    pub fn symbol(j: usize) -> Self {
        Self::term(Monomial::symbol(j), RationalFunc::one())
    }

    pub fn p() -> Self {
        Self::symbol(1)
    }

    pub fn q() -> Self {
        Self::symbol(2)
    }

    pub fn term(m: Monomial, c: RationalFunc) -> Self {
        let mut out = Self::zero();
        if !c.is_zero() {
            out.cap = out.cap.max(m.degree());
            out.terms.insert(m, c);
        }
        out
    }

    pub fn with_cap(mut self, cap: u32) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &RationalFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> RationalFunc {
        self.terms.get(m).cloned().unwrap_or_else(RationalFunc::zero)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_part(&self) -> RationalFunc {
        self.coeff(&Monomial::one())
    }

    /// The value as an element of Q(a), if no jet symbol occurs.
    pub fn as_constant(&self) -> Option<RationalFunc> {
        match self.terms.len() {
            0 => Some(RationalFunc::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest exponent of symbol `j` occurring in any term.
    pub fn degree_in(&self, j: usize) -> u8 {
        self.terms.keys().map(|m| m.exponent(j)).max().unwrap_or(0)
    }

    fn insert_add(&mut self, m: Monomial, c: RationalFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &RationalFunc) -> Self {
        if c.is_zero() {
            return ParamPoly { terms: BTreeMap::new(), cap: self.cap };
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            cap: self.cap,
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&RationalFunc::constant(c.clone()))
    }

    pub fn try_mul(&self, rhs: &ParamPoly) -> Result<ParamPoly, AlgebraError> {
        let cap = self.cap.max(rhs.cap);
        let mut out = ParamPoly { terms: BTreeMap::new(), cap };
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let m = m1.mul(m2);
                if m.degree() > cap {
                    return Err(AlgebraError::DegreeCap { degree: m.degree(), cap });
                }
                out.insert_add(m, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coeffs<E>(
        &self,
        mut f: impl FnMut(&RationalFunc) -> Result<RationalFunc, E>,
    ) -> Result<ParamPoly, E> {
        let mut out = ParamPoly { terms: BTreeMap::new(), cap: self.cap };
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Substitutes symbol `j := value`.
    pub fn substitute(&self, j: usize, value: &RationalFunc) -> ParamPoly {
        let mut out = ParamPoly { terms: BTreeMap::new(), cap: self.cap };
        for (m, c) in &self.terms {
            let (rest, e) = m.without(j);
            out.insert_add(rest, c * &value.pow(e as u32));
        }
        out
    }

    /// Evaluates numerically at `a` and the given symbol values (`p`, `q`, ...).
    pub fn eval_f64(&self, a: f64, symbols: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = m
                    .0
                    .iter()
                    .enumerate()
                    .map(|(i, &e)| symbols.get(i).copied().unwrap_or(0.0).powi(e as i32))
                    .product();
                c.eval_f64(a) * mono
            })
            .sum()
    }
}

impl Add<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out.cap = self.cap.max(rhs.cap);
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&ParamPoly> for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        self + &(-rhs)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            cap: self.cap,
        }
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

super::forward_binops!(ParamPoly; Add add, Sub sub);

impl fmt::Display for ParamPoly {
    /// Terms in graded order joined by ` + `, e.g. `2*a/(a+3) + (a^2)*p`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_like_terms() {
        let two = RationalFunc::from_int(2);
        let x = &ParamPoly::p() + &ParamPoly::q();
        let y = &x + &x;
        assert_eq!(y, &ParamPoly::p().scale(&two) + &ParamPoly::q().scale(&two));
        assert!((&y - &y).is_zero());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let p = ParamPoly::p();
        let p2 = p.try_mul(&p).unwrap();
        assert_eq!(p2.total_degree(), 2);
        assert!(matches!(p2.try_mul(&p), Err(AlgebraError::DegreeCap { degree: 3, cap: 2 })));
        assert!(p2.with_cap(3).try_mul(&p).is_ok());
    }

    #[test]
    fn substitution_kills_symbol() {
        let x = &ParamPoly::from_int(3) + &ParamPoly::p().scale(&RationalFunc::var());
        assert_eq!(x.substitute(1, &RationalFunc::zero()), ParamPoly::from_int(3));
        assert_eq!(x.degree_in(1), 1);
        assert_eq!(x.degree_in(2), 0);
    }

    #[test]
    fn display_order() {
        let x = &(&ParamPoly::q() + &ParamPoly::p().scale(&RationalFunc::var())) + &ParamPoly::from_int(-1);
        assert_eq!(x.to_string(), "-1 + (a)*p + q");
        assert_eq!(symbol_name(3), "r");
        assert_eq!(symbol_name(7), "k7");
    }
}
