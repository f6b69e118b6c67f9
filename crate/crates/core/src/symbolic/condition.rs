//! The incidence condition for the four-point construction, as a series in
//! `eps`.
//!
//! Points `gamma(-eps)`, `gamma(a eps)`, `gamma(eps)` are fixed; the tangents
//! at `a eps` and `eps` meet at `P`, and the line through `P` and
//! `gamma(-eps)` cuts the curve again at the fourth point `gamma(-b eps)`.
//! Writing `G(x, y) = det[gamma(x eps), gamma'(x eps), gamma(y eps)]`, the
//! collinearity of `P`, `gamma(-eps)` and the fourth point reads
//!
//! ```text
//! G(a, -b) G(1, -1) - G(a, -1) G(1, -b) = 0.
//! ```

use crate::algebra::{series_det3, AlgebraError, EpsSeries, ParamPoly, RationalFunc};

use super::jet::{curve_series, tangent_series, JetData};

/// Parameter offset of a point, as a multiple of `eps`.
#[derive(Clone, Debug)]
pub(crate) enum Offset<'a> {
    Const(RationalFunc),
    Series(&'a EpsSeries),
}

impl Offset<'_> {
    /// `offset * eps`, known through `order`.
    fn shift(&self, order: usize) -> EpsSeries {
        match self {
            Offset::Const(c) => EpsSeries::monomial(order, 1, ParamPoly::constant(c.clone())),
            Offset::Series(s) => {
                // the candidate coefficients are exact; pad with zeros
                let padded = EpsSeries::from_coeffs(order - 1, s.coeffs().to_vec());
                padded.shift_up(1)
            }
        }
    }
}

/// `G(x, y) / eps^2`, known through `eps^(order - 4)` where `order` is the
/// order of the full condition. Both factors of `eps` are removed exactly:
/// the first because `gamma(y eps) - gamma(x eps)` has no constant term,
/// the second because that difference is tangent to leading order.
pub(crate) fn reduced_det(jet: &JetData, x: &Offset<'_>, y: &Offset<'_>, order: usize) -> Result<EpsSeries, AlgebraError> {
    let u = curve_series(jet, &x.shift(order - 2))?;
    let w = curve_series(jet, &y.shift(order - 2))?;
    let v = tangent_series(jet, &x.shift(order - 3))?;
    // det[u, v, w] = det[u, v, w - u]
    let chord = w.sub(&u).shift_down(1)?;
    let d = series_det3(&u.truncate(order - 3)?, &v, &chord)?;
    d.shift_down(1)
}

/// Left side minus right side of the incidence condition for the candidate
/// `b = b_0 + b_1 eps + ...` at chord parameter `a`. The result has order
/// `b.order() + 4`; its coefficients below `eps^4` vanish identically and
/// the rest are what a solution must annihilate. `b` is read as an exact
/// polynomial in `eps`.
pub fn condition_series(jet: &JetData, a: &RationalFunc, b: &EpsSeries) -> Result<EpsSeries, AlgebraError> {
    let order = b.order() + 4;
    let neg_b = -b;
    let a = Offset::Const(a.clone());
    let one = Offset::Const(RationalFunc::one());
    let minus_one = Offset::Const(RationalFunc::from_int(-1));
    let fourth = Offset::Series(&neg_b);
    let lhs = reduced_det(jet, &a, &fourth, order)?.try_mul(&reduced_det(jet, &one, &minus_one, order)?)?;
    let rhs = reduced_det(jet, &a, &minus_one, order)?.try_mul(&reduced_det(jet, &one, &fourth, order)?)?;
    Ok((&lhs - &rhs).shift_up(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        rat, EpsSeries, ParamPoly, Rational, RationalFunc, SeriesVec3, UniPoly,
    };
    use crate::symbolic::jet::{gamma_jet, KSign};

    fn b0() -> RationalFunc {
        RationalFunc::new(UniPoly::from_ints(&[-1, -3]), UniPoly::from_ints(&[3, 1])).unwrap()
    }

    /// Reference: the same determinant built directly from the lifted
    /// columns without removing any power of `eps`.
    fn brute_det(jet: &JetData, x: i64, y: i64, order: usize) -> EpsSeries {
        let s = |c: i64, o: usize| EpsSeries::monomial(o, 1, ParamPoly::from_int(c));
        let u = curve_series(jet, &s(x, order)).unwrap();
        let v = tangent_series(jet, &s(x, order)).unwrap();
        let w = curve_series(jet, &s(y, order)).unwrap();
        series_det3(&u, &v, &w).unwrap()
    }

    #[test]
    fn reduced_det_agrees_with_brute_force_where_both_are_known() {
        let jet = gamma_jet(KSign::Plus);
        // brute force at order 4 is trustworthy through eps^4
        let brute = brute_det(&jet, 1, -1, 4);
        let reduced = reduced_det(&jet, &Offset::Const(RationalFunc::one()), &Offset::Const(RationalFunc::from_int(-1)), 7).unwrap();
        assert!(brute.coeff(0).is_zero() && brute.coeff(1).is_zero());
        for k in 2..=4 {
            assert_eq!(brute.coeff(k), reduced.coeff(k - 2), "eps^{k}");
        }
        // leading term: (y - x)^2 / 2 = 2
        assert_eq!(reduced.coeff(0), &ParamPoly::from_int(2));
    }

    #[test]
    fn leading_degree_structure() {
        // each determinant starts at eps^2, so the product of two starts at eps^4
        let jet = gamma_jet(KSign::Plus);
        let cond = condition_series(&jet, &RationalFunc::var(), &EpsSeries::constant(3, ParamPoly::constant(b0()))).unwrap();
        assert_eq!(cond.order(), 7);
        for k in 0..4 {
            assert!(cond.coeff(k).is_zero());
        }
    }

    #[test]
    fn leading_order_vanishes_for_b0_only() {
        let jet = gamma_jet(KSign::Plus);
        let b = EpsSeries::constant(3, ParamPoly::constant(b0()));
        let cond = condition_series(&jet, &RationalFunc::var(), &b).unwrap();
        assert!(cond.coeff(4).is_zero());
        assert!(!cond.coeff(6).is_zero());
    }

    #[test]
    fn trivial_root_is_the_point_itself() {
        // b = 1 puts the fourth point on gamma(-eps)
        let jet = gamma_jet(KSign::Plus);
        let b = EpsSeries::constant(3, ParamPoly::from_int(1));
        assert!(condition_series(&jet, &RationalFunc::var(), &b).unwrap().is_zero());
    }

    #[test]
    fn det_is_alternating_and_multilinear() {
        let jet = gamma_jet(KSign::Plus);
        let s = |c: Rational| EpsSeries::monomial(3, 1, ParamPoly::from_rational(c));
        let u = curve_series(&jet, &s(rat(1, 3))).unwrap();
        let v = tangent_series(&jet.clone(), &EpsSeries::monomial(3, 1, ParamPoly::from_int(2))).unwrap();
        let w = curve_series(&jet, &s(rat(-1, 2))).unwrap();
        let d = series_det3(&u, &v, &w).unwrap();
        let swapped = series_det3(&w, &v, &u).unwrap();
        assert!((&d + &swapped).is_zero());
        let two = ParamPoly::from_int(2);
        let scaled = series_det3(&u, &v.scale(&two).unwrap(), &w).unwrap();
        assert!(scaled.compare(&d.scale(&two).unwrap()).unwrap());
        let sum = series_det3(&u, &v, &SeriesVec3::add(&w, &u)).unwrap();
        assert!(sum.compare(&d).unwrap());
    }
}
