//! Closed forms of the expansion for `k = +1`, built from their factored
//! shapes so they can be compared structurally with solver output.

use crate::algebra::{rat, ParamPoly, RationalFunc, UniPoly};

fn lin(c0: i64, c1: i64) -> UniPoly {
    UniPoly::from_ints(&[c0, c1])
}

/// `(a - 1)^2 (a + 1)^2`
fn endpoint_factor() -> UniPoly {
    &lin(-1, 1).pow(2) * &lin(1, 1).pow(2)
}

fn rf(num: UniPoly, den: UniPoly) -> RationalFunc {
    RationalFunc::new(num, den).expect("nonzero denominator")
}

/// `-(3a + 1) / (a + 3)`
pub fn b0() -> RationalFunc {
    rf(-lin(1, 3), lin(3, 1))
}

/// `2 (a-1)^2 (a+1)^2 / (3 (a+3)^3)`
pub fn b2() -> RationalFunc {
    rf(endpoint_factor().scale(&rat(2, 1)), lin(3, 1).pow(3).scale(&rat(3, 1)))
}

/// `2 (a-1)^2 (a+1)^2 (2a^2 + 9a + 5) p / (15 (a+3)^4)`
pub fn b3() -> ParamPoly {
    let num = &endpoint_factor() * &UniPoly::from_ints(&[5, 9, 2]);
    ParamPoly::p().scale(&rf(num.scale(&rat(2, 1)), lin(3, 1).pow(4).scale(&rat(15, 1))))
}

/// Coefficient of `eps^3` in `f(f(a)) - a`:
/// `-(a-1)^2 (a+1)^2 (a^2 + 6a + 1) p / (24 (a+3)^2)`
pub fn involution_defect() -> ParamPoly {
    let num = &endpoint_factor() * &UniPoly::from_ints(&[1, 6, 1]);
    ParamPoly::p().scale(&rf(-num, lin(3, 1).pow(2).scale(&rat(24, 1))))
}

/// `b_0 .. b_3` in order.
pub fn expansion() -> [ParamPoly; 4] {
    [ParamPoly::constant(b0()), ParamPoly::zero(), ParamPoly::constant(b2()), b3()]
}
