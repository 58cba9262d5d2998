//! Adaptive Simpson quadrature for the outage integral.

/// Integrate `f` over `[a, b]` with the given absolute tolerance.
///
/// Classic recursive adaptive Simpson with Richardson correction. The
/// integrands in this crate are smooth apart from a possible boundary
/// layer near 0, which callers handle by splitting at known knots.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step<F: Fn(f64) -> f64>(
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
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrate over consecutive panels split at the given knots.
///
/// Knots outside `[a, b]` are ignored; each panel gets `tol / panels`.
pub fn adaptive_simpson_split<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    knots: &[f64],
    tol: f64,
) -> f64 {
    let mut pts: Vec<f64> = vec![a, b];
    pts.extend(knots.iter().copied().filter(|&k| k > a && k < b));
    pts.sort_by(f64::total_cmp);
    let panels = (pts.len() - 1).max(1) as f64;
    pts.windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol / panels))
        .sum()
}
