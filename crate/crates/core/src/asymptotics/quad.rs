//! Adaptive Simpson quadrature, used as an independent numerical oracle.

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
    // Below a few ulps of the local value further halving only chases rounding.
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integral of `f` over [a, b] to a tolerance relative to a coarse estimate
/// of the integral's magnitude.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Coarse magnitude from a 64-panel composite rule over |f|.
    let n = 64;
    let h = (b - a) / n as f64;
    let scale: f64 = (0..=n).map(|i| f(a + i as f64 * h).abs()).sum::<f64>() * h.abs();
    let tol = rel_tol * scale.max(f64::MIN_POSITIVE);
    // Start from 16 panels so narrow peaks are not missed.
    let panels = 16;
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * w, a + (i + 1) as f64 * w);
            let mid = 0.5 * (lo + hi);
            let (fa, fm, fb) = (f(lo), f(mid), f(hi));
            recurse(&f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / panels as f64, 40)
        })
        .sum()
}
