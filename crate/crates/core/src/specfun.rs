//! Gamma-family special functions and the incomplete-gamma inequality
//! evaluators used by the outage bounds.
//!
//! The lower incomplete gamma function uses the standard kernel
//! γ(s,z) = ∫₀ᶻ τ^{s−1} e^{−τ} dτ, evaluated by series expansion for
//! z < s + 1 and by the continued fraction of the complement otherwise.

use crate::error::{Error, Result};

/// Arguments beyond this make e^{−z} underflow entirely; γ(s,z) is Γ(s)
/// to full double precision long before that.
pub const GAMMA_SATURATION_Z: f64 = 700.0;

const MAX_ITER: usize = 500;
const EPS: f64 = 1e-16;

/// A bracketing pair, `lower <= upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

/// Natural log of the Gamma function, Lanczos approximation (g = 7, 9 terms).
///
/// Relative accuracy is ~1e-14 over (0, 170].
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma_unchecked(1.0 - x);
    }
    let xg = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (xg + i as f64);
    }
    let t = xg + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (xg + 0.5) * t.ln() - t + acc.ln()
}

/// Γ(x) for x > 0. Overflows to +inf above x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma(x)?.exp())
}

/// Lower incomplete gamma function γ(s,z) = ∫₀ᶻ τ^{s−1} e^{−τ} dτ.
///
/// Saturates at Γ(s) once z exceeds [`GAMMA_SATURATION_Z`].
pub fn lower_incomplete_gamma(s: f64, z: f64) -> Result<f64> {
    Ok(ln_lower_incomplete_gamma(s, z)?.exp())
}

/// ln γ(s,z), for log-space evaluation of the outage bounds.
///
/// Returns −inf at z = 0.
pub fn ln_lower_incomplete_gamma(s: f64, z: f64) -> Result<f64> {
    check_incgamma_args(s, z)?;
    if z == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if z > GAMMA_SATURATION_Z {
        return ln_gamma(s);
    }
    let lg = ln_gamma_unchecked(s);
    if z < s + 1.0 {
        // γ(s,z) = z^s e^{−z} Σ_{k≥0} z^k / (s(s+1)…(s+k))
        Ok(s * z.ln() - z + ln_gamma_series_sum(s, z)?)
    } else {
        // continued fraction gives Q(s,z); γ = Γ(s)(1 − Q)
        let q = upper_regularized_cf(s, z)?;
        Ok(lg + (-q).ln_1p())
    }
}

fn check_incgamma_args(s: f64, z: f64) -> Result<()> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::domain(format!("incomplete gamma requires s > 0, got {s}")));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(Error::domain(format!("incomplete gamma requires z >= 0, got {z}")));
    }
    Ok(())
}

/// ln of Σ_{k≥0} z^k / (s(s+1)…(s+k)), the series factor of γ(s,z).
fn ln_gamma_series_sum(s: f64, z: f64) -> Result<f64> {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut comp = 0.0f64; // Kahan compensation
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= z / ap;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum.ln());
        }
    }
    Err(Error::numeric(format!(
        "incomplete gamma series failed to converge for s={s}, z={z}"
    )))
}

/// Regularized upper incomplete gamma Q(s,z) by Lentz's continued fraction.
/// Valid for z >= s + 1.
fn upper_regularized_cf(s: f64, z: f64) -> Result<f64> {
    let lg = ln_gamma_unchecked(s);
    let tiny = 1e-300;
    let mut b = z + 1.0 - s;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok((s * z.ln() - z - lg).exp() * h);
        }
    }
    Err(Error::numeric(format!(
        "incomplete gamma continued fraction failed to converge for s={s}, z={z}"
    )))
}

/// Regularized lower incomplete gamma P(s,z) = γ(s,z) / Γ(s).
pub fn regularized_gamma_p(s: f64, z: f64) -> Result<f64> {
    check_incgamma_args(s, z)?;
    if z == 0.0 {
        return Ok(0.0);
    }
    if z > GAMMA_SATURATION_Z {
        return Ok(1.0);
    }
    if z < s + 1.0 {
        Ok((s * z.ln() - z - ln_gamma_unchecked(s) + ln_gamma_series_sum(s, z)?).exp())
    } else {
        Ok(1.0 - upper_regularized_cf(s, z)?)
    }
}

/// Regularized upper incomplete gamma Q(s,z) = 1 − P(s,z).
pub fn regularized_gamma_q(s: f64, z: f64) -> Result<f64> {
    check_incgamma_args(s, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if z > GAMMA_SATURATION_Z {
        return Ok(0.0);
    }
    if z < s + 1.0 {
        Ok(1.0 - regularized_gamma_p(s, z)?)
    } else {
        upper_regularized_cf(s, z)
    }
}

/// Solve Q(s,z) = q for z, to absolute tolerance 1e-10 in Q.
///
/// Q is strictly decreasing in z, so plain bisection on an expanding
/// bracket is enough.
pub fn inverse_regularized_gamma_q(s: f64, q: f64) -> Result<f64> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::domain(format!("inverse gamma Q requires s > 0, got {s}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("inverse gamma Q requires q in (0,1), got {q}")));
    }
    let mut lo = 0.0f64;
    let mut hi = s.max(1.0);
    let mut expansions = 0;
    while regularized_gamma_q(s, hi)? > q {
        lo = hi;
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 {
            return Err(Error::numeric(format!(
                "inverse gamma Q bracket expansion failed for s={s}, q={q}"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if regularized_gamma_q(s, mid)? > q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let z = 0.5 * (lo + hi);
    let residual = (regularized_gamma_q(s, z)? - q).abs();
    if residual > 1e-10 {
        return Err(Error::numeric(format!(
            "inverse gamma Q did not reach tolerance for s={s}, q={q}: residual {residual:e}"
        )));
    }
    Ok(z)
}

/// The two closed-form brackets of γ(s,z):
/// Γ(s)(1 − e^{−z})^s and Γ(s)(1 − e^{−z Γ(1+s)^{−1/s}})^s,
/// ordered as (lower, upper). The roles of the two formulas swap between
/// the regimes 0 < s < 1 and s > 1.
pub fn claim1_bounds(s: f64, z: f64) -> Result<BoundPair> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::domain(format!("claim1_bounds requires s > 0, got {s}")));
    }
    if s == 1.0 {
        return Err(Error::domain(
            "claim1_bounds is degenerate at s = 1; use the closed form 1 - e^{-z}".to_string(),
        ));
    }
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::domain(format!("claim1_bounds requires z > 0, got {z}")));
    }
    let lg = ln_gamma_unchecked(s);
    // ln Γ(s) + s ln(1 − e^{−w}) for each bracket argument w
    let plain = (lg + s * (-(-z).exp()).ln_1p()).exp();
    let scale = (-ln_gamma_unchecked(1.0 + s) / s).exp();
    let scaled = (lg + s * (-(-z * scale).exp()).ln_1p()).exp();
    let (lower, upper) = if s < 1.0 { (plain, scaled) } else { (scaled, plain) };
    Ok(BoundPair { lower, upper })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(4.0).unwrap() - 6.0f64.ln()).abs() < 1e-13);
        assert!(ln_gamma(1.0).unwrap().abs() < 1e-14);
        assert!((ln_gamma(0.5).unwrap() - 0.5 * std::f64::consts::PI.ln()).abs() < 1e-13);
        assert!(ln_gamma(0.0).is_err());
        assert!(ln_gamma(-1.0).is_err());
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn gamma_recurrence() {
        // Γ(x+1) = x Γ(x), sampled over (0, 100]
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let x: f64 = rng.gen_range(1e-3..100.0);
            let lhs = ln_gamma(x + 1.0).unwrap();
            let rhs = x.ln() + ln_gamma(x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "x={x}");
        }
    }

    #[test]
    fn incgamma_closed_forms() {
        // γ(1,z) = 1 − e^{−z}
        let g = lower_incomplete_gamma(1.0, 2.0).unwrap();
        assert!(rel_err(g, 1.0 - (-2.0f64).exp()) < 1e-13);
        // γ(2,z) = 1 − (1+z) e^{−z}
        let g = lower_incomplete_gamma(2.0, 1.0).unwrap();
        assert!(rel_err(g, 1.0 - 2.0 * (-1.0f64).exp()) < 1e-13);
        // γ(1/2, 1) = √π erf(1)
        let g = lower_incomplete_gamma(0.5, 1.0).unwrap();
        assert!((g - 1.4936482656248540).abs() < 1e-12);
    }

    #[test]
    fn incgamma_domain_errors() {
        assert!(lower_incomplete_gamma(0.0, 1.0).is_err());
        assert!(lower_incomplete_gamma(-1.0, 1.0).is_err());
        assert!(lower_incomplete_gamma(1.0, -0.5).is_err());
    }

    #[test]
    fn incgamma_monotone_and_saturates() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let s: f64 = rng.gen_range(0.05..20.0);
            let z1: f64 = rng.gen_range(0.0..50.0);
            let z2: f64 = z1 + rng.gen_range(0.0..10.0);
            let g1 = lower_incomplete_gamma(s, z1).unwrap();
            let g2 = lower_incomplete_gamma(s, z2).unwrap();
            assert!(g2 >= g1 * (1.0 - 1e-14), "s={s} z1={z1} z2={z2}");
            // z = 700·max(1,s) is past the saturation cutoff
            let g_inf = lower_incomplete_gamma(s, 700.0 * s.max(1.0)).unwrap();
            assert!(rel_err(g_inf, gamma(s).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn inverse_q_known_and_round_trip() {
        // Q(1,z) = e^{−z}, so the threshold at q = 1/K is ln K
        for k in [2.0, 30.0, 1000.0] {
            let z = inverse_regularized_gamma_q(1.0, 1.0 / k).unwrap();
            assert!(rel_err(z, k.ln()) < 1e-9, "K={k}");
        }
        // Q(4,z) = e^{−z}(1 + z + z²/2 + z³/6) = 1e-3
        let z = inverse_regularized_gamma_q(4.0, 1e-3).unwrap();
        let q4 = |z: f64| (-z).exp() * (1.0 + z + z * z / 2.0 + z * z * z / 6.0);
        assert!((z - 13.06).abs() < 0.01);
        assert!((q4(z) - 1e-3).abs() < 1e-10);

        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let s: f64 = rng.gen_range(0.1..20.0);
            let q: f64 = rng.gen_range(1e-6..1.0 - 1e-6);
            let z = inverse_regularized_gamma_q(s, q).unwrap();
            assert!((regularized_gamma_q(s, z).unwrap() - q).abs() <= 1e-10, "s={s} q={q}");
        }
        assert!(inverse_regularized_gamma_q(1.0, 0.0).is_err());
        assert!(inverse_regularized_gamma_q(1.0, 1.0).is_err());
    }

    #[test]
    fn claim1_known_values() {
        let b = claim1_bounds(0.5, 1.0).unwrap();
        assert!((b.lower - 1.40922).abs() < 1e-4);
        assert!((b.upper - 1.50404).abs() < 1e-4);
        let g = lower_incomplete_gamma(0.5, 1.0).unwrap();
        assert!(b.lower < g && g < b.upper);

        // s > 1 regime: the formulas swap but the pair stays ordered
        let b = claim1_bounds(2.0, 0.5).unwrap();
        let g = 1.0 - 1.5 * (-0.5f64).exp();
        assert!(b.lower < g && g < b.upper);

        // z → ∞: both sides approach Γ(s)
        let b = claim1_bounds(0.5, 500.0).unwrap();
        let g = gamma(0.5).unwrap();
        assert!(rel_err(b.lower, g) < 1e-12 && rel_err(b.upper, g) < 1e-12);

        assert!(claim1_bounds(1.0, 1.0).is_err());
        assert!(claim1_bounds(0.5, 0.0).is_err());
    }

    #[test]
    fn claim1_inequalities_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut n = 0;
        while n < 10_000 {
            let s: f64 = rng.gen_range(0.01..10.0);
            if (s - 1.0).abs() < 1e-3 {
                continue;
            }
            let z: f64 = rng.gen_range(1e-3..30.0);
            let b = claim1_bounds(s, z).unwrap();
            let g = lower_incomplete_gamma(s, z).unwrap();
            // non-strict: both brackets saturate to γ at double precision
            // for small s once z is moderately large
            assert!(b.lower <= g && g <= b.upper, "s={s} z={z} pair={b:?} g={g}");
            n += 1;
        }
        // Claim 1(ii): 2^{s−1} ≤ Γ(1+s) ≤ 1 on (0,1)
        for _ in 0..10_000 {
            let s: f64 = rng.gen_range(1e-6..1.0);
            let g1s = gamma(1.0 + s).unwrap();
            assert!(2.0f64.powf(s - 1.0) <= g1s + 1e-14 && g1s <= 1.0 + 1e-14, "s={s}");
        }
        // Claim 1(iii): Γ(s) Γ(1/s) ≥ 1
        for _ in 0..10_000 {
            let s: f64 = rng.gen_range(0.02..50.0);
            let lp = ln_gamma(s).unwrap() + ln_gamma(1.0 / s).unwrap();
            assert!(lp >= -1e-12, "s={s}");
        }
    }
}
