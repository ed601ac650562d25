//! Quadrature on finite intervals.

/// Composite trapezoid rule with `intervals` equal panels on `[a, b]`.
pub fn trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, intervals: usize) -> f64 {
    assert!(intervals > 0, "trapezoid needs at least one panel");
    let h = (b - a) / intervals as f64;
    let inner: f64 = (1..intervals).map(|i| f(a + h * i as f64)).sum();
    h * (0.5 * (f(a) + f(b)) + inner)
}

/// Trapezoid rule applied separately on each `[breaks[i], breaks[i+1]]`.
///
/// Use this when `f` jumps at known points; each segment gets
/// `intervals` panels, and `f` is evaluated at segment ends from the
/// inside so a jump never lands inside a panel.
pub fn trapezoid_piecewise<F: Fn(f64) -> f64>(f: F, breaks: &[f64], intervals: usize) -> f64 {
    breaks
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                return 0.0;
            }
            let h = (b - a) / intervals as f64;
            // Nudge the end evaluations inward by a sliver of a panel.
            let eps = h * 1e-9;
            let inner: f64 = (1..intervals).map(|i| f(a + h * i as f64)).sum();
            h * (0.5 * (f(a + eps) + f(b - eps)) + inner)
        })
        .sum()
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }

    if a == b {
        return 0.0;
    }
    // Split up front so a narrow feature cannot hide between the first probes.
    const SEGMENTS: usize = 64;
    let h = (b - a) / SEGMENTS as f64;
    (0..SEGMENTS)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == SEGMENTS { b } else { lo + h };
            let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
            let whole = simpson(fa, fm, fb, lo, hi);
            recurse(&f, lo, hi, fa, fm, fb, whole, tol / SEGMENTS as f64, 48)
        })
        .sum()
}
