//! Exact arithmetic: rationals, polynomials and rational functions in the
//! chord variable `a`, jet-symbol polynomials over Q(a), and truncated
//! series in `eps`.
//!
//! Every value is immutable once built and every operation is a pure
//! function, so results can be shared freely across threads.

mod parampoly;
mod poly;
mod ratfunc;
mod series;

pub use parampoly::{symbol_name, Monomial, ParamPoly, DEFAULT_DEGREE_CAP};
pub use poly::{poly_gcd, UniPoly};
pub use ratfunc::{rf_arith, rf_derivative, ArithOp, RationalFunc};
pub use series::{
    param_compose_shift, rf_compose_shift, series_arith, series_det3, EpsSeries, SeriesOp, SeriesVec3,
};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("series orders differ ({0} vs {1})")]
    OrderMismatch(usize, usize),
    #[error("order {requested} requested but only {available} is known")]
    InsufficientOrder { requested: usize, available: usize },
    #[error("coefficient of eps^{0} is not zero")]
    NonzeroLowOrder(usize),
    #[error("jet-symbol degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Builds a rational from small integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Owned-operand forwarding for binary operators already implemented on
/// references.
macro_rules! forward_binops {
    ($t:ty; $($tr:ident $m:ident),*) => {$(
        impl std::ops::$tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                std::ops::$tr::$m(&self, &rhs)
            }
        }
        impl std::ops::$tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                std::ops::$tr::$m(&self, rhs)
            }
        }
    )*};
}
pub(crate) use forward_binops;
