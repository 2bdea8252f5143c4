//! Scalar root bracketing: bisection followed by a short Newton polish.

/// Bisect `f` on `[lo, hi]` (opposite signs at the ends) until the bracket is
/// narrower than `1e-14` relative to `hi`, then take up to three Newton steps
/// that are only accepted while they stay inside the final bracket.
pub fn bisect_newton<F, D>(f: F, df: D, mut lo: f64, mut hi: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    debug_assert!(flo.signum() != fhi.signum(), "bracket without sign change");

    for _ in 0..2000 {
        if hi - lo <= 1e-14 * hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return mid;
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }

    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        x = next;
    }
    x
}

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + c.abs()) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_of_two() {
        let r = bisect_newton(|x| x * x * x - 2.0, |x| 3.0 * x * x, 0.0, 2.0);
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn tiny_root_is_resolved_relatively() {
        let r = bisect_newton(|x| x - 1e-12, |_| 1.0, 0.0, 1.0);
        assert!((r - 1e-12).abs() < 1e-26);
    }

    #[test]
    fn golden_parabola() {
        let (x, fx) = golden_max(|t| -(t - 0.3) * (t - 0.3) + 2.0, 0.0, 1.0, 1e-10);
        // flat maximum: f resolves x only to ~sqrt(machine eps)
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-15);
    }
}
