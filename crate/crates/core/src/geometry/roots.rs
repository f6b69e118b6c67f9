//! Bracketing root finders on one real variable.

/// Bisection to `width`, followed by one Newton polish when a derivative
/// is supplied and the step stays inside the final bracket.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, width: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Safeguarded Newton on a sign-change bracket `[lo, hi]`. `fdf` returns
/// the value and derivative; `x0` is the starting guess (clamped into the
/// bracket).
pub fn newton_bracketed<F>(fdf: F, lo: f64, hi: f64, x0: f64, tol: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let (fa, _) = fdf(a);
    if fa == 0.0 {
        return a;
    }
    let mut sign_a = fa > 0.0;
    let mut x = x0.clamp(a, b);
    let mut last_step = b - a;
    for _ in 0..100 {
        let (fx, dfx) = fdf(x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == sign_a {
            a = x;
            sign_a = fx > 0.0;
        } else {
            b = x;
        }
        let newton = x - fx / dfx;
        if dfx != 0.0 && (newton - x).abs() <= tol * (1.0 + x.abs()) {
            return newton.clamp(a, b);
        }
        let step_ok = dfx != 0.0 && newton > a && newton < b && (newton - x).abs() < 0.5 * last_step.abs() + tol;
        let next = if step_ok { newton } else { 0.5 * (a + b) };
        last_step = next - x;
        x = next;
        if last_step.abs() <= tol * (1.0 + x.abs()) || b - a <= tol * (1.0 + x.abs()) {
            return x;
        }
    }
    x
}

/// Brackets of sign changes of `f` over the samples `ts` (with values
/// `vals`), including the wrap-around pair when `periodic`.
pub fn sign_change_brackets(ts: &[f64], vals: &[f64], periodic: bool, period: f64) -> Vec<(f64, f64)> {
    let n = ts.len();
    let mut out = Vec::new();
    let pairs = if periodic { n } else { n.saturating_sub(1) };
    for i in 0..pairs {
        let j = (i + 1) % n;
        let (t0, mut t1) = (ts[i], ts[j]);
        if j == 0 {
            t1 += period;
        }
        let (v0, v1) = (vals[i], vals[j]);
        if v0 == 0.0 {
            out.push((t0, t0));
        } else if (v0 < 0.0) != (v1 < 0.0) && v1 != 0.0 {
            out.push((t0, t1));
        }
    }
    out
}
