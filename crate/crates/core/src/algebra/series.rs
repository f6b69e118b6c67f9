//! Truncated power series in `eps` with `ParamPoly` coefficients.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::parampoly::ParamPoly;
use super::ratfunc::RationalFunc;
use super::{AlgebraError, Rational};

/// `c_0 + c_1 eps + ... + c_N eps^N + O(eps^(N+1))`.
///
/// `order` is `N`: the highest known coefficient. Sums and products keep
/// the smaller of the two operand orders.
#[derive(Clone, Debug)]
pub struct EpsSeries {
    order: usize,
    coeffs: Vec<ParamPoly>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

impl EpsSeries {
    pub fn zero(order: usize) -> Self {
        EpsSeries { order, coeffs: vec![ParamPoly::zero(); order + 1] }
    }

    /// Builds from leading coefficients, padding with zeros up to `order`.
    /// Coefficients past `order` are dropped.
    pub fn from_coeffs(order: usize, mut coeffs: Vec<ParamPoly>) -> Self {
        coeffs.resize(order + 1, ParamPoly::zero());
        EpsSeries { order, coeffs }
    }

    pub fn constant(order: usize, c: ParamPoly) -> Self {
        Self::monomial(order, 0, c)
    }

    /// `c * eps^k` (zero if `k > order`).
    pub fn monomial(order: usize, k: usize, c: ParamPoly) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series `eps` itself.
    pub fn eps(order: usize) -> Self {
        Self::monomial(order, 1, ParamPoly::from_int(1))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &ParamPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ParamPoly::is_zero)
    }

    /// Index of the first nonzero coefficient, `None` if all known vanish.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Forgets coefficients above `order`.
    pub fn truncate(&self, order: usize) -> Result<Self, AlgebraError> {
        if order > self.order {
            return Err(AlgebraError::InsufficientOrder { requested: order, available: self.order });
        }
        Ok(EpsSeries { order, coeffs: self.coeffs[..=order].to_vec() })
    }

    /// Exact multiplication by `eps^k`; the known range grows by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![ParamPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        EpsSeries { order: self.order + k, coeffs }
    }

    /// Exact division by `eps^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Result<Self, AlgebraError> {
        if k > self.order {
            return Err(AlgebraError::InsufficientOrder { requested: k, available: self.order });
        }
        if let Some(i) = self.coeffs[..k].iter().position(|c| !c.is_zero()) {
            return Err(AlgebraError::NonzeroLowOrder(i));
        }
        Ok(EpsSeries { order: self.order - k, coeffs: self.coeffs[k..].to_vec() })
    }

    /// Structural equality; refuses to compare series of different orders.
    pub fn compare(&self, other: &Self) -> Result<bool, AlgebraError> {
        if self.order != other.order {
            return Err(AlgebraError::OrderMismatch(self.order, other.order));
        }
        Ok(self.coeffs == other.coeffs)
    }

    pub fn scale(&self, c: &ParamPoly) -> Result<Self, AlgebraError> {
        Ok(EpsSeries {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x.try_mul(c)).collect::<Result<_, _>>()?,
        })
    }

    pub fn scale_rf(&self, c: &RationalFunc) -> Self {
        EpsSeries { order: self.order, coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale_rf(&RationalFunc::constant(c.clone()))
    }

    /// Cauchy product truncated to the smaller order.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        let order = self.order.min(rhs.order);
        let mut out = Self::zero(order);
        for (i, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if y.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = &out.coeffs[i + j] + &x.try_mul(y)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, AlgebraError> {
        let mut out = Self::constant(self.order, ParamPoly::from_int(1));
        for _ in 0..n {
            out = out.try_mul(self)?;
        }
        Ok(out)
    }

    /// Applies `f` to each coefficient.
    pub fn map_coeffs(&self, f: impl FnMut(&ParamPoly) -> ParamPoly) -> Self {
        EpsSeries { order: self.order, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Numeric value of the truncated sum at `(a, eps)` with symbol values.
    pub fn eval_f64(&self, a: f64, eps: f64, symbols: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * eps + c.eval_f64(a, symbols))
    }
}

pub fn series_arith(op: SeriesOp, x: &EpsSeries, y: &EpsSeries) -> Result<EpsSeries, AlgebraError> {
    match op {
        SeriesOp::Add => Ok(x + y),
        SeriesOp::Sub => Ok(x - y),
        SeriesOp::Mul => x.try_mul(y),
    }
}

impl Add<&EpsSeries> for &EpsSeries {
    type Output = EpsSeries;
    fn add(self, rhs: &EpsSeries) -> EpsSeries {
        let order = self.order.min(rhs.order);
        EpsSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl Sub<&EpsSeries> for &EpsSeries {
    type Output = EpsSeries;
    fn sub(self, rhs: &EpsSeries) -> EpsSeries {
        let order = self.order.min(rhs.order);
        EpsSeries {
            order,
            coeffs: (0..=order).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl Neg for &EpsSeries {
    type Output = EpsSeries;
    fn neg(self) -> EpsSeries {
        self.map_coeffs(|c| -c)
    }
}

super::forward_binops!(EpsSeries; Add add, Sub sub);

impl fmt::Display for EpsSeries {
    /// `[c0] + [c1]*eps + [c2]*eps^2 + O(eps^3)`, skipping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match k {
                0 => write!(f, "[{c}] + ")?,
                1 => write!(f, "[{c}]*eps + ")?,
                _ => write!(f, "[{c}]*eps^{k} + ")?,
            }
        }
        write!(f, "O(eps^{})", self.order + 1)
    }
}

/// Column vector of three series sharing one truncation order.
#[derive(Clone, Debug)]
pub struct SeriesVec3 {
    pub x: EpsSeries,
    pub y: EpsSeries,
    pub z: EpsSeries,
}

impl SeriesVec3 {
    pub fn new(x: EpsSeries, y: EpsSeries, z: EpsSeries) -> Result<Self, AlgebraError> {
        if x.order != y.order || x.order != z.order {
            return Err(AlgebraError::OrderMismatch(x.order, y.order.max(z.order)));
        }
        Ok(SeriesVec3 { x, y, z })
    }

    /// Constant vector with rational entries.
    pub fn constant(order: usize, v: [i64; 3]) -> Self {
        let c = |k: i64| EpsSeries::constant(order, ParamPoly::from_int(k));
        SeriesVec3 { x: c(v[0]), y: c(v[1]), z: c(v[2]) }
    }

    pub fn order(&self) -> usize {
        self.x.order
    }

    pub fn truncate(&self, order: usize) -> Result<Self, AlgebraError> {
        Ok(SeriesVec3 { x: self.x.truncate(order)?, y: self.y.truncate(order)?, z: self.z.truncate(order)? })
    }

    pub fn shift_down(&self, k: usize) -> Result<Self, AlgebraError> {
        Ok(SeriesVec3 { x: self.x.shift_down(k)?, y: self.y.shift_down(k)?, z: self.z.shift_down(k)? })
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        SeriesVec3 { x: &self.x - &rhs.x, y: &self.y - &rhs.y, z: &self.z - &rhs.z }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        SeriesVec3 { x: &self.x + &rhs.x, y: &self.y + &rhs.y, z: &self.z + &rhs.z }
    }

    pub fn scale(&self, c: &ParamPoly) -> Result<Self, AlgebraError> {
        Ok(SeriesVec3 { x: self.x.scale(c)?, y: self.y.scale(c)?, z: self.z.scale(c)? })
    }
}

/// Determinant of the matrix with columns `c1, c2, c3`, by cofactor
/// expansion along the third row.
pub fn series_det3(c1: &SeriesVec3, c2: &SeriesVec3, c3: &SeriesVec3) -> Result<EpsSeries, AlgebraError> {
    if c1.order() != c2.order() || c1.order() != c3.order() {
        return Err(AlgebraError::OrderMismatch(c1.order(), c2.order().max(c3.order())));
    }
    let minor = |u: &SeriesVec3, v: &SeriesVec3| -> Result<EpsSeries, AlgebraError> {
        Ok(&u.x.try_mul(&v.y)? - &u.y.try_mul(&v.x)?)
    };
    let t1 = c1.z.try_mul(&minor(c2, c3)?)?;
    let t2 = c2.z.try_mul(&minor(c1, c3)?)?;
    let t3 = c3.z.try_mul(&minor(c1, c2)?)?;
    Ok(&(&t1 - &t2) + &t3)
}

/// Taylor-expands `f(center + increment)` in the increment:
/// `sum_k f^(k)(center) / k! * increment^k` through the increment's order.
pub fn rf_compose_shift(
    f: &RationalFunc,
    center: &RationalFunc,
    increment: &EpsSeries,
) -> Result<EpsSeries, AlgebraError> {
    if !increment.coeff(0).is_zero() {
        return Err(AlgebraError::NonzeroLowOrder(0));
    }
    let order = increment.order();
    let mut out = EpsSeries::zero(order);
    let mut deriv = f.clone();
    let mut power = EpsSeries::constant(order, ParamPoly::from_int(1));
    let mut factorial = Rational::from_integer(1.into());
    for k in 0..=order {
        if k > 0 {
            deriv = deriv.derivative();
            power = power.try_mul(increment)?;
            factorial *= Rational::from_integer((k as i64).into());
            if power.is_zero() {
                break;
            }
        }
        let value = deriv.compose(center)?;
        if value.is_zero() {
            continue;
        }
        out = &out + &power.scale_rf(&value.scale(&factorial.recip()));
    }
    Ok(out)
}

/// [`rf_compose_shift`] applied termwise to a jet-symbol polynomial.
pub fn param_compose_shift(
    f: &ParamPoly,
    center: &RationalFunc,
    increment: &EpsSeries,
) -> Result<EpsSeries, AlgebraError> {
    let mut out = EpsSeries::zero(increment.order());
    for (m, c) in f.terms() {
        let shifted = rf_compose_shift(c, center, increment)?;
        let mono = ParamPoly::term(m.clone(), RationalFunc::one()).with_cap(f.cap());
        out = &out + &shifted.scale(&mono)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::UniPoly;

    fn one(order: usize) -> EpsSeries {
        EpsSeries::constant(order, ParamPoly::from_int(1))
    }

    #[test]
    fn product_of_conjugates() {
        let e = EpsSeries::eps(3);
        let x = &one(3) + &e;
        let y = &one(3) - &e;
        let expected = &one(3) - &EpsSeries::monomial(3, 2, ParamPoly::from_int(1));
        assert!(x.try_mul(&y).unwrap().compare(&expected).unwrap());
    }

    #[test]
    fn product_past_truncation_vanishes() {
        let e = EpsSeries::eps(3);
        let e3 = EpsSeries::monomial(3, 3, ParamPoly::from_int(1));
        let prod = series_arith(SeriesOp::Mul, &e, &e3).unwrap();
        assert!(prod.is_zero());
        assert_eq!(prod.order(), 3);
    }

    #[test]
    fn sum_of_symbol_terms() {
        let x = EpsSeries::monomial(3, 2, ParamPoly::p());
        let y = EpsSeries::monomial(3, 2, ParamPoly::q());
        let s = series_arith(SeriesOp::Add, &x, &y).unwrap();
        assert_eq!(s.coeff(2), &(&ParamPoly::p() + &ParamPoly::q()));
    }

    #[test]
    fn mismatched_orders() {
        let x = one(3);
        let y = one(4);
        assert_eq!(x.compare(&y), Err(AlgebraError::OrderMismatch(3, 4)));
        assert_eq!((&x + &y).order(), 3);
        assert!(SeriesVec3::new(one(3), one(3), one(4)).is_err());
    }

    #[test]
    fn determinant_of_unit_columns() {
        let e1 = SeriesVec3::constant(2, [1, 0, 0]);
        let e2 = SeriesVec3::constant(2, [0, 1, 0]);
        let e3 = SeriesVec3::constant(2, [0, 0, 1]);
        let d = series_det3(&e1, &e2, &e3).unwrap();
        assert!(d.compare(&one(2)).unwrap());
        assert!(series_det3(&e1, &e2, &e1).unwrap().is_zero());
    }

    #[test]
    fn shifts() {
        let e = EpsSeries::eps(3);
        let up = e.shift_up(2);
        assert_eq!(up.order(), 5);
        assert_eq!(up.valuation(), Some(3));
        assert!(up.shift_down(2).unwrap().compare(&e).unwrap());
        assert_eq!(e.shift_down(2).unwrap_err(), AlgebraError::NonzeroLowOrder(1));
    }

    #[test]
    fn compose_shift_of_square() {
        // a^2 at c + eps = c^2 + 2c eps + eps^2
        let f = RationalFunc::from_poly(UniPoly::from_ints(&[0, 0, 1]));
        let c = RationalFunc::from_poly(UniPoly::from_ints(&[0, 1]));
        let s = rf_compose_shift(&f, &c, &EpsSeries::eps(3)).unwrap();
        assert_eq!(s.coeff(0).as_constant().unwrap(), c.pow(2));
        assert_eq!(s.coeff(1).as_constant().unwrap(), c.scale(&Rational::from_integer(2.into())));
        assert_eq!(s.coeff(2).as_constant().unwrap(), RationalFunc::one());
        assert!(s.coeff(3).is_zero());
    }

    #[test]
    fn compose_shift_mobius_involution() {
        let b0 = RationalFunc::new(UniPoly::from_ints(&[-1, -3]), UniPoly::from_ints(&[3, 1])).unwrap();
        let s = rf_compose_shift(&b0, &b0, &EpsSeries::zero(3)).unwrap();
        assert_eq!(s.coeff(0).as_constant().unwrap(), RationalFunc::var());
        assert!(s.coeff(1).is_zero());
    }

    #[test]
    fn compose_shift_pole() {
        let f = RationalFunc::new(UniPoly::one(), UniPoly::from_ints(&[3, 1])).unwrap();
        let err = rf_compose_shift(&f, &RationalFunc::from_int(-3), &EpsSeries::eps(2)).unwrap_err();
        assert!(matches!(err, AlgebraError::Pole(_)));
    }

    #[test]
    fn display() {
        let s = &one(2) + &EpsSeries::monomial(2, 2, ParamPoly::p());
        assert_eq!(s.to_string(), "[1] + [p]*eps^2 + O(eps^3)");
    }
}
