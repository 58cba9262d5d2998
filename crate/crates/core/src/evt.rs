//! Extreme-value machinery: the Gumbel limit of χ² maxima, its
//! normalizing constants, and the exceedance thresholds used by the
//! peaks-over-threshold bounds.
//!
//! All logarithms here are natural logs; rate quantities elsewhere in the
//! crate use log base 2.

use crate::error::{Error, Result};
use crate::specfun;

/// Normalizing constants making the maximum of `n` iid χ²(dof) draws
/// converge to a Gumbel law: scale a = 2 and
/// b = 2(ln n + (v/2 − 1) ln ln n − ln Γ(v/2)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizingConstants {
    /// Gumbel scale, exactly 2 for χ² parents.
    pub a: f64,
    /// Gumbel location.
    pub b: f64,
    /// Number of draws in the maximum.
    pub n: u64,
    /// Degrees of freedom of the χ² parent (even).
    pub dof: u32,
}

/// Location/scale of a Gumbel distribution, CDF exp{−e^{−(x−location)/scale}}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GumbelParams {
    pub location: f64,
    pub scale: f64,
}

impl NormalizingConstants {
    /// The Gumbel limit law G(a, b) with the constants scaled by a power
    /// budget: the maximum of P·χ² draws follows G(P·a, P·b).
    pub fn gumbel_params(&self, power: f64) -> Result<GumbelParams> {
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::domain(format!("power must be positive, got {power}")));
        }
        Ok(GumbelParams {
            location: power * self.b,
            scale: power * self.a,
        })
    }
}

/// Evaluate the normalizing constants for the maximum of `n` χ²(dof) draws.
pub fn normalizing_constants(n: u64, dof: u32) -> Result<NormalizingConstants> {
    if dof < 2 || dof % 2 != 0 {
        return Err(Error::domain(format!(
            "degrees of freedom must be even and >= 2, got {dof}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2 draws, got {n}")));
    }
    if dof > 2 && n < 3 {
        // ln ln n must be defined and positive
        return Err(Error::domain(format!(
            "n = {n} is too small for the ln ln n term with dof = {dof}"
        )));
    }
    let v_half = f64::from(dof) / 2.0;
    let ln_n = (n as f64).ln();
    let b = if dof == 2 {
        2.0 * ln_n
    } else {
        2.0 * (ln_n + (v_half - 1.0) * ln_n.ln() - specfun::ln_gamma(v_half)?)
    };
    Ok(NormalizingConstants { a: 2.0, b, n, dof })
}

/// Gumbel CDF exp{−e^{−(x − location)/scale}}.
pub fn gumbel_cdf(x: f64, p: &GumbelParams) -> f64 {
    (-(-(x - p.location) / p.scale).exp()).exp()
}

/// Gumbel density.
pub fn gumbel_pdf(x: f64, p: &GumbelParams) -> f64 {
    let z = (x - p.location) / p.scale;
    ((-z - (-z).exp()).exp()) / p.scale
}

/// Inverse of [`gumbel_cdf`].
pub fn gumbel_quantile(q: f64, p: &GumbelParams) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("quantile requires q in (0,1), got {q}")));
    }
    Ok(p.location - p.scale * (-q.ln()).ln())
}

/// Threshold on an eavesdropper's χ²(2) channel projection such that one
/// of M eavesdroppers exceeds it on average: u_m = 2 ln M.
pub fn threshold_eve(m: u64) -> Result<f64> {
    if m < 2 {
        return Err(Error::domain(format!("need M >= 2 eavesdroppers, got {m}")));
    }
    Ok(2.0 * (m as f64).ln())
}

/// Threshold on a user's χ²(2t) channel gain such that one of K users
/// exceeds it on average: the root of K · Pr(χ²(2t) > u) = 1, computed
/// from the inverse regularized gamma function.
pub fn threshold_user(k: u64, t: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("need K >= 2 users, got {k}")));
    }
    if t < 1 {
        return Err(Error::domain("need t >= 1 antennas".to_string()));
    }
    // Pr(χ²(2t) > u) = Q(t, u/2)
    let z = specfun::inverse_regularized_gamma_q(f64::from(t), 1.0 / k as f64)?;
    Ok(2.0 * z)
}

/// The closed-form asymptote for the user threshold, for cross-checking
/// [`threshold_user`] at large K.
pub fn threshold_user_asymptotic(k: u64, t: u32) -> Result<f64> {
    Ok(normalizing_constants(k, 2 * t)?.b)
}
