//! Jets of an affinely parameterized curve at a normalized base point, and
//! their Taylor series along shifted parameters.

use crate::algebra::{AlgebraError, EpsSeries, ParamPoly, Rational, SeriesVec3, DEFAULT_DEGREE_CAP};

/// Orientation of the normalized affine curvature at the base point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum KSign {
    Plus,
    Minus,
}

impl KSign {
    pub fn value(self) -> i64 {
        match self {
            KSign::Plus => 1,
            KSign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(KSign::Plus),
            -1 => Some(KSign::Minus),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            KSign::Plus => "+1",
            KSign::Minus => "-1",
        }
    }
}

/// Derivatives `gamma, gamma', ..., gamma^(n)` at the base point, with
/// `gamma = (0,0)`, `gamma' = (1,0)`, `gamma'' = (0,1)` and the rest
/// generated by `gamma''' = -k gamma'`, `k = k_sign`, `k' = p`, `k'' = q`, ...
#[derive(Clone, Debug)]
pub struct JetData {
    pub k_sign: KSign,
    derivs: Vec<[ParamPoly; 2]>,
}

impl JetData {
    pub fn max_order(&self) -> usize {
        self.derivs.len() - 1
    }

    pub fn derivative(&self, n: usize) -> &[ParamPoly; 2] {
        &self.derivs[n]
    }

    /// The same jet with every curvature derivative set to zero (a conic).
    pub fn conic(&self) -> JetData {
        let zero = crate::algebra::RationalFunc::zero();
        let derivs = self
            .derivs
            .iter()
            .map(|[x, y]| {
                let kill = |c: &ParamPoly| (1..=self.max_order()).fold(c.clone(), |acc, j| acc.substitute(j, &zero));
                [kill(x), kill(y)]
            })
            .collect();
        JetData { k_sign: self.k_sign, derivs }
    }
}

/// Jet through order 5, enough for the `eps^7` condition.
pub fn gamma_jet(k_sign: KSign) -> JetData {
    gamma_jet_to(k_sign, 5, DEFAULT_DEGREE_CAP)
}

/// Jet through `max_order` (at least 2) with the given jet-symbol degree cap.
pub fn gamma_jet_to(k_sign: KSign, max_order: usize, cap: u32) -> JetData {
    let c = |v: i64| ParamPoly::from_int(v).with_cap(cap);
    let mut derivs = vec![[c(0), c(0)], [c(1), c(0)], [c(0), c(1)]];
    // k^(j): the constant sign for j = 0, then the jet symbols
    let kj = |j: usize| if j == 0 { c(k_sign.value()) } else { ParamPoly::symbol(j).with_cap(cap) };
    for m in 3..=max_order {
        // differentiate gamma''' = -k gamma' (m - 3) times (Leibniz)
        let n = m - 3;
        let mut comp = [c(0), c(0)];
        for j in 0..=n {
            let binom = ParamPoly::from_rational(Rational::from_integer(binomial(n, j).into()));
            let factor = kj(j).try_mul(&binom).expect("binomial is a constant");
            for (axis, slot) in comp.iter_mut().enumerate() {
                let term = factor.try_mul(&derivs[n - j + 1][axis]).expect("jet degree within cap");
                *slot = &*slot - &term;
            }
        }
        derivs.push(comp);
    }
    derivs.truncate(max_order + 1);
    JetData { k_sign, derivs }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn taylor(jet: &JetData, shift: &EpsSeries, first: usize, last: usize, order: usize) -> Result<[EpsSeries; 2], AlgebraError> {
    let shift = shift.truncate(order)?;
    let mut out = [EpsSeries::zero(order), EpsSeries::zero(order)];
    let mut power = EpsSeries::constant(order, ParamPoly::from_int(1));
    let mut fact = Rational::from_integer(1.into());
    for n in 0..=(last - first) {
        if n > 0 {
            power = power.try_mul(&shift)?;
            fact *= Rational::from_integer((n as i64).into());
            if power.is_zero() {
                break;
            }
        }
        let inv = fact.recip();
        for (axis, slot) in out.iter_mut().enumerate() {
            let c = jet.derivative(first + n)[axis].scale_rational(&inv);
            if !c.is_zero() {
                *slot = &*slot + &power.scale(&c)?;
            }
        }
    }
    Ok(out)
}

fn check_shift(shift: &EpsSeries, available: usize) -> Result<(), AlgebraError> {
    if !shift.coeff(0).is_zero() {
        return Err(AlgebraError::NonzeroLowOrder(0));
    }
    if shift.order() > available {
        return Err(AlgebraError::InsufficientOrder { requested: shift.order(), available });
    }
    Ok(())
}

/// Homogeneous lift `(gamma(s), 1)` of the curve at parameter offset `s`,
/// where `s = shift` is a series without constant term. The result has the
/// shift's order, which may not exceed the jet's order.
pub fn curve_series(jet: &JetData, shift: &EpsSeries) -> Result<SeriesVec3, AlgebraError> {
    check_shift(shift, jet.max_order())?;
    let order = shift.order();
    let [x, y] = taylor(jet, shift, 0, jet.max_order(), order)?;
    SeriesVec3::new(x, y, EpsSeries::constant(order, ParamPoly::from_int(1)))
}

/// Lift `(gamma'(s), 0)` of the tangent vector at offset `s`. The shift's
/// order may not exceed the jet's order minus one.
pub fn tangent_series(jet: &JetData, shift: &EpsSeries) -> Result<SeriesVec3, AlgebraError> {
    check_shift(shift, jet.max_order() - 1)?;
    let order = shift.order();
    let [x, y] = taylor(jet, shift, 1, jet.max_order(), order)?;
    SeriesVec3::new(x, y, EpsSeries::zero(order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RationalFunc, UniPoly};

    fn pp(c: i64) -> ParamPoly {
        ParamPoly::from_int(c)
    }

    #[test]
    fn plus_jets() {
        let j = gamma_jet(KSign::Plus);
        assert_eq!(j.derivative(3), &[pp(-1), pp(0)]);
        assert_eq!(j.derivative(4), &[-ParamPoly::p(), pp(-1)]);
        assert_eq!(j.derivative(5), &[&pp(1) - &ParamPoly::q(), ParamPoly::p().scale_rational(&Rational::from_integer((-2).into()))]);
    }

    #[test]
    fn minus_jets() {
        let j = gamma_jet(KSign::Minus);
        assert_eq!(j.derivative(3), &[pp(1), pp(0)]);
        assert_eq!(j.derivative(4), &[-ParamPoly::p(), pp(1)]);
        // -(q g' + 2p g'' + k g''') with k = -1
        assert_eq!(j.derivative(5), &[&pp(1) - &ParamPoly::q(), ParamPoly::p().scale_rational(&Rational::from_integer((-2).into()))]);
    }

    #[test]
    fn longer_jets_use_higher_symbols() {
        let j = gamma_jet_to(KSign::Plus, 6, 3);
        // gamma^(6) = -(k''' g' + 3k'' g'' + 3k' g''' + k g^(4))
        //           = (-r + 3p + p, -3q + 1)
        let x = &ParamPoly::p().scale_rational(&Rational::from_integer(4.into())) - &ParamPoly::symbol(3);
        let y = &pp(1) - &ParamPoly::q().scale_rational(&Rational::from_integer(3.into()));
        assert_eq!(j.derivative(6), &[x, y]);
    }

    fn a_eps(order: usize) -> EpsSeries {
        EpsSeries::monomial(order, 1, ParamPoly::constant(RationalFunc::var()))
    }

    fn a_pow(n: u32, c: (i64, i64)) -> ParamPoly {
        ParamPoly::constant(RationalFunc::from_poly(UniPoly::var().pow(n)).scale(&crate::algebra::rat(c.0, c.1)))
    }

    #[test]
    fn curve_series_first_line() {
        let s = curve_series(&gamma_jet(KSign::Plus), &a_eps(5)).unwrap();
        // x: a eps - a^3 eps^3/6 - a^4 eps^4 p/24 + a^5 eps^5 (1-q)/120
        assert_eq!(s.x.coeff(1), &a_pow(1, (1, 1)));
        assert!(s.x.coeff(2).is_zero());
        assert_eq!(s.x.coeff(3), &a_pow(3, (-1, 6)));
        assert_eq!(s.x.coeff(4), &a_pow(4, (-1, 24)).try_mul(&ParamPoly::p()).unwrap());
        assert_eq!(s.x.coeff(5), &a_pow(5, (1, 120)).try_mul(&(&pp(1) - &ParamPoly::q())).unwrap());
        // y: a^2 eps^2/2 - a^4 eps^4/24 - a^5 eps^5 p/60
        assert_eq!(s.y.coeff(2), &a_pow(2, (1, 2)));
        assert!(s.y.coeff(3).is_zero());
        assert_eq!(s.y.coeff(4), &a_pow(4, (-1, 24)));
        assert_eq!(s.y.coeff(5), &a_pow(5, (-1, 60)).try_mul(&ParamPoly::p()).unwrap());
    }

    #[test]
    fn tangent_series_second_line() {
        let s = tangent_series(&gamma_jet(KSign::Plus), &a_eps(4)).unwrap();
        // x: 1 - a^2 eps^2/2 - a^3 eps^3 p/6 + a^4 eps^4 (1-q)/24
        assert_eq!(s.x.coeff(0), &pp(1));
        assert_eq!(s.x.coeff(2), &a_pow(2, (-1, 2)));
        assert_eq!(s.x.coeff(3), &a_pow(3, (-1, 6)).try_mul(&ParamPoly::p()).unwrap());
        assert_eq!(s.x.coeff(4), &a_pow(4, (1, 24)).try_mul(&(&pp(1) - &ParamPoly::q())).unwrap());
        // y: a eps - a^3 eps^3/6 - a^4 eps^4 p/12
        assert_eq!(s.y.coeff(1), &a_pow(1, (1, 1)));
        assert_eq!(s.y.coeff(3), &a_pow(3, (-1, 6)));
        assert_eq!(s.y.coeff(4), &a_pow(4, (-1, 12)).try_mul(&ParamPoly::p()).unwrap());
        assert!(s.z.is_zero());
    }

    #[test]
    fn zero_shift_is_base_point() {
        let s = curve_series(&gamma_jet(KSign::Plus), &EpsSeries::zero(3)).unwrap();
        assert!(s.x.is_zero() && s.y.is_zero());
        assert_eq!(s.z.coeff(0), &pp(1));
    }

    #[test]
    fn insufficient_jet_order() {
        let err = curve_series(&gamma_jet(KSign::Plus), &a_eps(6)).unwrap_err();
        assert_eq!(err, AlgebraError::InsufficientOrder { requested: 6, available: 5 });
        assert!(tangent_series(&gamma_jet(KSign::Plus), &a_eps(5)).is_err());
    }
}
