//! Elements of the field Q(a), kept in lowest terms with a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{poly_gcd, UniPoly};
use super::{AlgebraError, Rational};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
///
/// Because the representation is canonical, derived equality is exact
/// equality in Q(a).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunc {
    num: UniPoly,
    den: UniPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RationalFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = poly_gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let lc = den.leading();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunc { num, den }
    }

    pub fn zero() -> Self {
        RationalFunc { num: UniPoly::zero(), den: UniPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        RationalFunc { num: UniPoly::constant(c), den: UniPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::constant(Rational::new(n.into(), d.into()))
    }

    /// The variable `a`.
    pub fn var() -> Self {
        Self::from_poly(UniPoly::var())
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RationalFunc { num: p, den: UniPoly::one() }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.degree().unwrap_or(0) == 0 && self.den.is_one()).then(|| self.num.coeff(0))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn pow(&self, n: u32) -> Self {
        // lowest terms are preserved by powers
        RationalFunc { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Quotient-rule derivative in `a`.
    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(n, &self.den * &self.den)
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(AlgebraError::Pole(format!("{self} at a = {x}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    /// Substitutes `a := inner`, i.e. returns `self(inner(a))`.
    pub fn compose(&self, inner: &RationalFunc) -> Result<Self, AlgebraError> {
        let horner = |p: &UniPoly| {
            let mut acc = RationalFunc::zero();
            for c in p.coeffs().iter().rev() {
                acc = &(&acc * inner) + &RationalFunc::constant(c.clone());
            }
            acc
        };
        let d = horner(&self.den);
        if d.is_zero() {
            return Err(AlgebraError::Pole(format!("{self} at a = {inner}")));
        }
        horner(&self.num).checked_div(&d)
    }

    /// Exact square root in Q(a), when one exists. Sign is chosen so the
    /// numerator has positive leading coefficient.
    pub fn sqrt(&self) -> Option<Self> {
        let n = self.num.sqrt();
        let d = self.den.sqrt();
        match (n, d) {
            (Some(n), Some(d)) => Some(Self::normalized(n, d)),
            _ => {
                // allow a rational square factor between numerator and denominator
                let lc = self.num.leading();
                let n = self.num.scale(&lc.recip()).sqrt()?;
                let d = self.den.sqrt()?;
                let c = super::poly::rational_sqrt(&lc)?;
                Some(Self::normalized(n.scale(&c), d))
            }
        }
    }
}

/// One of the four field operations, normalized.
pub fn rf_arith(op: ArithOp, x: &RationalFunc, y: &RationalFunc) -> Result<RationalFunc, AlgebraError> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

pub fn rf_derivative(f: &RationalFunc) -> RationalFunc {
    f.derivative()
}

impl Add<&RationalFunc> for &RationalFunc {
    type Output = RationalFunc;
    fn add(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunc::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunc::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub<&RationalFunc> for &RationalFunc {
    type Output = RationalFunc;
    fn sub(self, rhs: &RationalFunc) -> RationalFunc {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunc> for &RationalFunc {
    type Output = RationalFunc;
    fn mul(self, rhs: &RationalFunc) -> RationalFunc {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RationalFunc { num: &self.num * &rhs.num, den: UniPoly::one() };
        }
        RationalFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        RationalFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RationalFunc {
    type Output = RationalFunc;
    fn neg(self) -> RationalFunc {
        -&self
    }
}

super::forward_binops!(RationalFunc; Add add, Sub sub, Mul mul);

impl fmt::Display for RationalFunc {
    /// Canonical text, e.g. `-(3*a+1)/(a+3)`. The sign always sits on the
    /// numerator; multi-term factors are parenthesised.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let neg = self.num.leading().is_negative();
        let mag = if neg { -&self.num } else { self.num.clone() };
        if neg {
            f.write_str("-")?;
        }
        if mag.term_count() > 1 {
            write!(f, "({mag})")?;
        } else {
            write!(f, "{mag}")?;
        }
        if self.den.term_count() > 1 {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl RationalFunc {
    pub fn to_f64_at(&self, a: f64) -> f64 {
        self.eval_f64(a)
    }

    /// Value as `f64` when constant.
    pub fn constant_f64(&self) -> Option<f64> {
        self.as_constant().and_then(|c| c.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UniPoly {
        UniPoly::from_ints(c)
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunc {
        RationalFunc::new(poly(n), poly(d)).unwrap()
    }

    fn b0() -> RationalFunc {
        rf(&[-1, -3], &[3, 1])
    }

    #[test]
    fn add_over_common_denominator() {
        assert_eq!(rf(&[1], &[3, 1]) + rf(&[2], &[3, 1]), rf(&[3], &[3, 1]));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        let x = rf(&[-1, 1], &[3, 1]);
        let y = rf(&[3, 1], &[-1, 1]);
        assert!((x * y).is_one());
    }

    #[test]
    fn self_subtraction_is_zero() {
        let x = b0();
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            rf_arith(ArithOp::Div, &b0(), &RationalFunc::zero()),
            Err(AlgebraError::DivisionByZero)
        );
        assert!(RationalFunc::new(poly(&[1]), UniPoly::zero()).is_err());
    }

    #[test]
    fn normalization_is_monic_and_coprime() {
        let x = RationalFunc::new(poly(&[-2, 0, 2]), poly(&[4, 4])).unwrap();
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(x, RationalFunc::from_poly(poly(&[-1, 1]).scale(&half)));
        assert!(x.den().leading().is_one());
    }

    #[test]
    fn derivatives() {
        assert_eq!(rf(&[0, 0, 1], &[1]).derivative(), rf(&[0, 2], &[1]));
        assert_eq!(rf(&[1], &[3, 1]).derivative(), rf(&[-1], &[9, 6, 1]));
        // d/da [-(3a+1)/(a+3)] = -8/(a+3)^2
        let d = b0().derivative();
        assert_eq!(d, rf(&[-8], &[9, 6, 1]));
        // cross-check by exact evaluation
        for a in 0..3 {
            let a = Rational::from_integer(a.into());
            let expected = Rational::from_integer((-8).into()) / ((&a + Rational::from_integer(3.into())).pow(2));
            assert_eq!(d.eval(&a).unwrap(), expected);
        }
    }

    #[test]
    fn mobius_involution() {
        assert_eq!(b0().compose(&b0()).unwrap(), RationalFunc::var());
    }

    #[test]
    fn compose_detects_pole() {
        let f = rf(&[1], &[3, 1]);
        assert!(matches!(f.compose(&RationalFunc::from_int(-3)), Err(AlgebraError::Pole(_))));
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(b0().to_string(), "-(3*a+1)/(a+3)");
        assert_eq!(rf(&[1], &[3, 1]).to_string(), "1/(a+3)");
        assert_eq!(rf(&[-8], &[9, 6, 1]).to_string(), "-8/(a^2+6*a+9)");
        assert_eq!(rf(&[0, 2], &[1]).to_string(), "2*a");
        assert_eq!(RationalFunc::zero().to_string(), "0");
    }

    #[test]
    fn square_root_with_rational_factor() {
        let x = rf(&[1, 1], &[3, 1]);
        let sq = (&x * &x).scale(&Rational::new(4.into(), 9.into()));
        let r = sq.sqrt().unwrap();
        assert_eq!(&r * &r, sq);
    }
}
