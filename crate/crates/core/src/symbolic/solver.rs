//! Order-by-order solution of the incidence condition for `b(a, eps)` and the
//! composition `f(f(a))` of the resulting map `f: a -> b(a, eps)`.

use crate::algebra::{
    param_compose_shift, rat, AlgebraError, EpsSeries, ParamPoly, Rational, RationalFunc,
    DEFAULT_DEGREE_CAP,
};

use super::condition::condition_series;
use super::jet::{gamma_jet_to, JetData, KSign};

/// Order of the condition series used by default: terms of degree 4 to 7,
/// which determine `b_0 .. b_3`.
pub const DEFAULT_CONDITION_ORDER: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("condition order must be at least 4, got {0}")]
    OrderTooSmall(usize),
    #[error("leading-order condition is not a quadratic in b0 over Q(a)")]
    NotQuadratic,
    #[error("discriminant of the leading-order condition has no square root in Q(a)")]
    NoRationalRoot,
    #[error("expected exactly one admissible root for b0, found {0}")]
    RootSelection(usize),
    #[error("linear coefficient at eps^{order} is not invertible in Q(a)")]
    NonInvertible { order: usize },
    #[error("residual at eps^{0} does not vanish")]
    Residual(usize),
    #[error("f(f(a)) - a has a nonzero eps^{0} coefficient")]
    LowerOrderDefect(usize),
}

/// Solved coefficients of `b(a, eps) = b_0(a) + b_1(a) eps + ...`.
#[derive(Clone, Debug)]
pub struct DualityExpansion {
    pub k_sign: KSign,
    /// Order `N` of the condition series the coefficients were solved from.
    pub condition_order: usize,
    /// `b_0 .. b_(N-4)`.
    pub b: Vec<ParamPoly>,
    /// `(k, coefficient of eps^k is zero)` for `k = 4..=N` after
    /// re-substitution.
    pub residual_zero: Vec<(usize, bool)>,
    /// `d/db0` of the leading-order condition; the linear coefficient at
    /// every later order.
    pub linear_coefficient: RationalFunc,
    /// The leading-order condition as `c0 + c1 b0 + c2 b0^2`.
    pub quadratic: [RationalFunc; 3],
}

impl DualityExpansion {
    /// `b` as a series of order `N - 4`.
    pub fn series(&self) -> EpsSeries {
        EpsSeries::from_coeffs(self.b.len() - 1, self.b.clone())
    }

    pub fn b0(&self) -> RationalFunc {
        self.b[0].as_constant().expect("b0 lies in Q(a)")
    }

    pub fn certified(&self) -> bool {
        self.residual_zero.iter().all(|(_, z)| *z)
    }
}

/// Jet order and degree cap needed for a condition series of `order`.
pub fn jet_for_order(k_sign: KSign, order: usize) -> JetData {
    let cap = DEFAULT_DEGREE_CAP.max(order.saturating_sub(5) as u32);
    gamma_jet_to(k_sign, order.saturating_sub(2).max(2), cap)
}

pub fn solve_duality_expansion(k_sign: KSign) -> Result<DualityExpansion, SolveError> {
    solve_to_order(k_sign, DEFAULT_CONDITION_ORDER)
}

/// Solves the condition through `eps^order`, giving `b_0 .. b_(order-4)`.
pub fn solve_to_order(k_sign: KSign, order: usize) -> Result<DualityExpansion, SolveError> {
    if order < 4 {
        return Err(SolveError::OrderTooSmall(order));
    }
    let jet = jet_for_order(k_sign, order);
    solve_with_jet(&jet, order)
}

/// Same as [`solve_to_order`] for an arbitrary jet (e.g. a conic jet).
pub fn solve_with_jet(jet: &JetData, order: usize) -> Result<DualityExpansion, SolveError> {
    let a = RationalFunc::var();
    let quadratic = leading_quadratic(jet, &a)?;
    let b0 = select_b0(&quadratic)?;
    let [_, c1, c2] = &quadratic;
    let linear = &(&c2.scale(&rat(2, 1)) * &b0) + c1;
    if linear.is_zero() {
        return Err(SolveError::NonInvertible { order: 4 });
    }
    let inv_linear = linear.recip()?;

    let mut b = vec![ParamPoly::constant(b0)];
    for k in 1..=order - 4 {
        // candidate with b_k = 0; the residual at eps^(4+k) is then
        // r_k, and b_k enters linearly with coefficient `linear`
        let mut trial = b.clone();
        trial.push(ParamPoly::zero());
        let cond = condition_series(jet, &a, &EpsSeries::from_coeffs(k, trial))?;
        let residual = cond.coeff(4 + k);
        b.push(residual.scale(&(-&inv_linear)));
    }

    let full = EpsSeries::from_coeffs(order - 4, b.clone());
    let cond = condition_series(jet, &a, &full)?;
    let residual_zero = (4..=order).map(|k| (k, cond.coeff(k).is_zero())).collect();
    Ok(DualityExpansion {
        k_sign: jet.k_sign,
        condition_order: order,
        b,
        residual_zero,
        linear_coefficient: linear,
        quadratic,
    })
}

/// Leading coefficient of the condition for a constant candidate `b = beta`.
fn leading_at(jet: &JetData, a: &RationalFunc, beta: i64) -> Result<RationalFunc, SolveError> {
    let b = EpsSeries::constant(0, ParamPoly::from_int(beta));
    let cond = condition_series(jet, a, &b)?;
    cond.coeff(4).as_constant().ok_or(SolveError::NotQuadratic)
}

/// Interpolates the `eps^4` coefficient as a quadratic in `b0` from its
/// values at `b0 = 0, 1, -1`, and checks it at `b0 = 2`.
fn leading_quadratic(jet: &JetData, a: &RationalFunc) -> Result<[RationalFunc; 3], SolveError> {
    let r0 = leading_at(jet, a, 0)?;
    let r1 = leading_at(jet, a, 1)?;
    let rm1 = leading_at(jet, a, -1)?;
    let half = rat(1, 2);
    let c0 = r0;
    let c1 = (&r1 - &rm1).scale(&half);
    let c2 = &(&r1 + &rm1).scale(&half) - &c0;
    let r2 = leading_at(jet, a, 2)?;
    let predicted = &(&c2.scale(&rat(4, 1)) + &c1.scale(&rat(2, 1))) + &c0;
    if predicted != r2 || c2.is_zero() {
        return Err(SolveError::NotQuadratic);
    }
    Ok([c0, c1, c2])
}

/// Roots of `c2 b^2 + c1 b + c0` in Q(a), filtered to the geometric branch:
/// `b0(0) = -1/3` and `b0(b0(a)) = a`.
fn select_b0(q: &[RationalFunc; 3]) -> Result<RationalFunc, SolveError> {
    let [c0, c1, c2] = q;
    let disc = &(c1 * c1) - &(c0 * c2).scale(&rat(4, 1));
    let root = disc.sqrt().ok_or(SolveError::NoRationalRoot)?;
    let two_c2 = c2.scale(&rat(2, 1));
    let mut candidates = Vec::new();
    for s in [&root, &(-&root)] {
        candidates.push((&(-c1) + s).checked_div(&two_c2)?);
    }
    let target = rat(-1, 3);
    let admissible: Vec<_> = candidates
        .into_iter()
        .filter(|r| r.eval(&Rational::from_integer(0.into())).ok() == Some(target.clone()))
        .filter(|r| r.compose(r).ok() == Some(RationalFunc::var()))
        .collect();
    match admissible.as_slice() {
        [one] => Ok(one.clone()),
        other => Err(SolveError::RootSelection(other.len())),
    }
}

/// Leading coefficient of `f(f(a)) - a`, at `eps^3`; the coefficients of
/// `eps^0 .. eps^2` vanish identically.
#[derive(Clone, Debug)]
pub struct InvolutionDefect {
    pub order: usize,
    pub coefficient: ParamPoly,
    /// Coefficients of `eps^3 .. eps^n` when `b` is known beyond `eps^3`.
    pub terms: Vec<ParamPoly>,
}

const DEFECT_ORDER: usize = 3;

pub fn involution_defect(exp: &DualityExpansion) -> Result<InvolutionDefect, SolveError> {
    let n = exp.b.len() - 1;
    if n < DEFECT_ORDER {
        return Err(SolveError::OrderTooSmall(exp.condition_order));
    }
    let b0 = exp.b0();
    let b = exp.series();
    let increment = &b - &EpsSeries::constant(n, exp.b[0].clone());
    let mut ffa = EpsSeries::zero(n);
    for (k, bk) in exp.b.iter().enumerate() {
        if bk.is_zero() {
            continue;
        }
        let outer = param_compose_shift(bk, &b0, &increment)?;
        ffa = &ffa + &outer.shift_up(k).truncate(n)?;
    }
    let defect = &ffa - &EpsSeries::constant(n, ParamPoly::constant(RationalFunc::var()));
    if let Some(k) = (0..DEFECT_ORDER).find(|&k| !defect.coeff(k).is_zero()) {
        return Err(SolveError::LowerOrderDefect(k));
    }
    let terms: Vec<ParamPoly> = (DEFECT_ORDER..=n).map(|k| defect.coeff(k).clone()).collect();
    Ok(InvolutionDefect { order: DEFECT_ORDER, coefficient: terms[0].clone(), terms })
}
