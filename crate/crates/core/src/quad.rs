//! Quadrature kernels: fixed-order Gauss-Legendre on a segment and
//! adaptive Simpson with interval halving.

/// 3-point Gauss-Legendre on `[a, b]`. Exact for polynomials up to degree 5,
/// which makes it exact on the linear segments of piecewise-linear survival
/// tables as long as `[a, b]` does not straddle a knot.
pub fn gauss3<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    const X: f64 = 0.7745966692414834; // sqrt(3/5)
    const W0: f64 = 0.8888888888888888; // 8/9
    const W1: f64 = 0.5555555555555556; // 5/9
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * (W0 * f(c) + W1 * (f(c - h * X) + f(c + h * X)))
}

/// 7-point Gauss-Legendre on `[a, b]` (degree 13).
pub fn gauss7<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    const XS: [f64; 3] = [0.4058451513773972, 0.7415311855993945, 0.9491079123427585];
    const WS: [f64; 3] = [0.3818300505051189, 0.2797053914892766, 0.1294849661688697];
    const W0: f64 = 0.4179591836734694;
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = W0 * f(c);
    for i in 0..3 {
        acc += WS[i] * (f(c - h * XS[i]) + f(c + h * XS[i]));
    }
    h * acc
}

/// Adaptive Simpson quadrature on `[a, b]` with interval halving.
///
/// The error estimate is the usual Richardson comparison of one Simpson
/// panel against its two halves; recursion stops when the estimate is below
/// the locally apportioned tolerance or the depth cap is reached.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let c = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fc = f(c);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol.max(1e-300), 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let fd = f(d);
    let fe = f(e);
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    // relative floor keeps huge integrands from recursing unboundedly when
    // the absolute tolerance is unreachable
    let tol_eff = tol.max(1e-14 * (left.abs() + right.abs()));
    if depth == 0 || delta.abs() <= 15.0 * tol_eff || !delta.is_finite() {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}

/// Adaptive quadrature over `[a, b]` split at the given interior breakpoints,
/// so integrands with kinks (piecewise densities, clipped supports) are
/// integrated piece by piece on smooth segments.
pub fn adaptive_split<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cuts: &[f64], tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut pts: Vec<f64> = cuts.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.push(a);
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    let per = tol / pts.len().max(1) as f64;
    pts.windows(2).map(|w| adaptive(f, w[0], w[1], per)).sum()
}

/// Finds a truncation point `t >= start` such that `decay(t) < cutoff`,
/// by doubling. Returns an error description if the cap is exceeded.
pub fn doubling_truncation<F: Fn(f64) -> f64>(
    decay: &F,
    start: f64,
    cutoff: f64,
) -> Result<f64, String> {
    let mut t = start.max(1e-12);
    for _ in 0..200 {
        if decay(t) < cutoff {
            return Ok(t);
        }
        t *= 2.0;
    }
    Err(format!(
        "doubling search did not reach decay < {cutoff:e} (last t = {t:e})"
    ))
}
