//! Dense univariate polynomials over the rationals in the chord variable `a`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};

/// Polynomial `c0 + c1*a + ... + cn*a^n` with exact rational coefficients.
///
/// The coefficient vector never carries trailing zeros, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `a`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Convenience for small integer coefficients, ascending.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading();
        if lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Euclidean division; panics on a zero divisor (callers check first).
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let inv_lc = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &inv_lc;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &UniPoly) -> Option<UniPoly> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// Exact square root when `self` is the square of a rational polynomial.
    /// Returns the root with positive leading coefficient.
    pub fn sqrt(&self) -> Option<UniPoly> {
        let Some(deg) = self.degree() else {
            return Some(Self::zero());
        };
        if deg % 2 == 1 {
            return None;
        }
        let half = deg / 2;
        let lead = rational_sqrt(&self.leading())?;
        let mut root = vec![Rational::zero(); half + 1];
        root[half] = lead.clone();
        let two_lead = &lead + &lead;
        // match coefficients of a^(deg-i) from the top down
        for i in 1..=half {
            let mut acc = self.coeff(deg - i);
            for j in 1..i {
                acc -= &root[half - j] * &root[half - i + j];
            }
            root[half - i] = acc / &two_lead;
        }
        let root = Self::from_coeffs(root);
        (&root * &root == *self).then_some(root)
    }
}

/// Rational square root, if the value is a perfect square.
pub(crate) fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn poly_gcd(u: &UniPoly, v: &UniPoly) -> UniPoly {
    let mut a = u.monic();
    let mut b = v.monic();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    a
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

super::forward_binops!(UniPoly; Add add, Sub sub, Mul mul);

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl fmt::Display for UniPoly {
    /// Descending degree with explicit signs: `2/3*a^4-4/3*a^2+2/3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if !first {
                f.write_str("+")?;
            }
            first = false;
            let mag = c.abs();
            let var = match deg {
                0 => String::new(),
                1 => "a".to_string(),
                d => format!("a^{d}"),
            };
            if deg == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&var)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), var)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[1, 1])), p(&[1, 1]));
    }

    #[test]
    fn gcd_with_unit() {
        assert_eq!(poly_gcd(&p(&[3, 1]), &p(&[1])), p(&[1]));
    }

    #[test]
    fn gcd_shared_factor() {
        let a3 = p(&[3, 1]);
        let u = &a3 * &a3;
        let v = &a3 * &p(&[-1, 1]);
        assert_eq!(poly_gcd(&u, &v), a3);
    }

    #[test]
    fn gcd_zero_zero() {
        assert!(poly_gcd(&UniPoly::zero(), &UniPoly::zero()).is_zero());
        assert_eq!(poly_gcd(&UniPoly::zero(), &p(&[2, 4])), p(&[1, 2]).monic());
    }

    #[test]
    fn division_round_trip() {
        let u = p(&[5, -3, 0, 2, 7]);
        let v = p(&[1, 0, 3]);
        let (q, r) = u.div_rem(&v);
        assert_eq!(&(&q * &v) + &r, u);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn square_roots() {
        let s = p(&[3, -2, 5]);
        assert_eq!((&s * &s).sqrt(), Some(s));
        assert_eq!(p(&[1, 0, 2]).sqrt(), None);
        assert_eq!(p(&[0, 1]).sqrt(), None);
    }

    #[test]
    fn display_is_descending() {
        assert_eq!(p(&[1, 3]).to_string(), "3*a+1");
        assert_eq!(p(&[-1, 0, -1]).to_string(), "-a^2-1");
        let q = UniPoly::from_coeffs(vec![Rational::new(2.into(), 3.into()), Rational::zero(), Rational::new((-4).into(), 3.into())]);
        assert_eq!(q.to_string(), "-4/3*a^2+2/3");
    }
}
