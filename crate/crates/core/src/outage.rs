//! Analytical secrecy-outage formulas: the exact series/integral CDF of
//! the ratio of Gumbel maxima, the peaks-over-threshold upper and lower
//! bounds, the closed-form corollary bounds driven by Λ(α), and the
//! scaling-law solvers.

use crate::error::{Error, Result};
use crate::evt::{self, NormalizingConstants};
use crate::quad;
use crate::specfun;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The scenario: K legitimate users, M eavesdroppers, t transmit
/// antennas and a power budget P.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemShape {
    pub users: u64,
    pub eves: u64,
    pub antennas: u32,
    pub power: f64,
}

impl SystemShape {
    pub fn new(users: u64, eves: u64, antennas: u32, power: f64) -> Result<Self> {
        if users < 1 || eves < 1 {
            return Err(Error::domain(format!(
                "need at least 1 user and 1 eavesdropper, got K={users}, M={eves}"
            )));
        }
        if antennas < 1 {
            return Err(Error::domain("need at least one transmit antenna".to_string()));
        }
        if !(power > 0.0) || !power.is_finite() {
            return Err(Error::domain(format!("power must be positive, got {power}")));
        }
        Ok(SystemShape { users, eves, antennas, power })
    }

    /// Gumbel constants for the best-user gain and the strongest
    /// eavesdropper projection, power-scaled. Returns (a_K, b_K, a_M, b_M).
    pub fn gumbel_constants(&self, mode: ConstantsMode) -> Result<(f64, f64, f64, f64)> {
        let user = match mode {
            ConstantsMode::Asymptotic => evt::normalizing_constants(self.users, 2 * self.antennas)?,
            ConstantsMode::ExactTail => exact_normalizing_constants(self.users, 2 * self.antennas)?,
        };
        // for a chi-squared(2) parent the exact tail constants coincide
        // with the asymptotic ones, so the eavesdropper side needs no mode
        let eve = evt::normalizing_constants(self.eves, 2)?;
        let p = self.power;
        Ok((p * user.a, p * user.b, p * eve.a, p * eve.b))
    }
}

/// Which normalizing constants to plug into the ratio-distribution
/// formulas.
///
/// `Asymptotic` is the printed closed form b = 2(ln n + (v/2−1) ln ln n −
/// ln Γ(v/2)) with a = 2; it is what every bound and corollary in this
/// module is stated in terms of. `ExactTail` computes the location as the
/// exact 1−1/n quantile of the χ² parent and the scale from its hazard
/// rate at that point; the ln ln n asymptote converges very slowly in n,
/// and finite-n comparisons against simulation need the exact variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantsMode {
    Asymptotic,
    ExactTail,
}

/// Finite-n normalizing constants from the exact χ²(dof) tail:
/// b solves Pr(χ² > b) = 1/n and a is the reciprocal hazard rate at b.
pub fn exact_normalizing_constants(n: u64, dof: u32) -> Result<NormalizingConstants> {
    if dof < 2 || dof % 2 != 0 {
        return Err(Error::domain(format!(
            "degrees of freedom must be even and >= 2, got {dof}"
        )));
    }
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2 draws, got {n}")));
    }
    let shape = f64::from(dof) / 2.0;
    let ln_n = (n as f64).ln();
    if dof == 2 {
        return Ok(NormalizingConstants { a: 2.0, b: 2.0 * ln_n, n, dof });
    }
    let z = specfun::inverse_regularized_gamma_q(shape, 1.0 / n as f64)?;
    // density of chi2(dof) at b = 2z, in logs
    let ln_pdf = (shape - 1.0) * z.ln() - z - 2.0f64.ln() - specfun::ln_gamma(shape)?;
    let a = (-ln_n - ln_pdf).exp();
    Ok(NormalizingConstants { a, b: 2.0 * z, n, dof })
}

/// An outage query: the threshold α = 2^{R_s} on the SNR ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageQuery {
    pub alpha: f64,
    pub rate_bits: f64,
}

impl OutageQuery {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
        }
        Ok(OutageQuery { alpha, rate_bits: alpha.log2() })
    }

    pub fn from_rate_bits(rate_bits: f64) -> Result<Self> {
        if !(rate_bits >= 0.0) || !rate_bits.is_finite() {
            return Err(Error::domain(format!("secrecy rate must be >= 0, got {rate_bits}")));
        }
        Ok(OutageQuery { alpha: rate_bits.exp2(), rate_bits })
    }
}

/// A probability with its pre-clamp value retained; the corollary
/// formulas legitimately leave [0,1] in their loose regimes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbBound {
    pub value: f64,
    pub raw: f64,
}

impl ProbBound {
    fn clamped(raw: f64) -> Self {
        ProbBound { value: raw.clamp(0.0, 1.0), raw }
    }
}

/// Evaluation strategies for the ratio-distribution CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Theorem1Strategy {
    /// Truncated alternating series of Gamma terms.
    Series { n_terms: usize },
    /// Adaptive quadrature of the integral the series was expanded from.
    Quadrature,
}

/// Which threshold to use for the user-side (lower) bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UserThreshold {
    /// Exact root of K · Pr(χ²(2t) > u) = 1 via the inverse regularized
    /// gamma function.
    Exact,
    /// The closed-form location constant b_K; this is the form the
    /// closed-form corollary is derived from.
    Asymptotic,
}

const SERIES_STOP: f64 = 1e-12;
/// Series terms above e^33 ≈ 2e14 leave fewer than three significant
/// digits after cancellation.
const SERIES_LN_TERM_LIMIT: f64 = 33.0;

/// CDF of the secrecy SNR ratio at threshold `alpha`, i.e. the secrecy
/// outage probability at rate log₂ α.
///
/// Returns the (clamped) probability and a convergence flag; the flag is
/// always true for the quadrature strategy.
pub fn theorem1_cdf(
    shape: &SystemShape,
    alpha: f64,
    strategy: Theorem1Strategy,
    mode: ConstantsMode,
) -> Result<(f64, bool)> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let (a_k, b_k, a_m, b_m) = shape.gumbel_constants(mode)?;
    match strategy {
        Theorem1Strategy::Series { n_terms } => theorem1_series(a_k, b_k, a_m, b_m, alpha, n_terms),
        Theorem1Strategy::Quadrature => Ok((theorem1_quadrature(a_k, b_k, a_m, b_m, alpha), true)),
    }
}

fn theorem1_series(
    a_k: f64,
    b_k: f64,
    a_m: f64,
    b_m: f64,
    alpha: f64,
    n_terms: usize,
) -> Result<(f64, bool)> {
    let ratio = a_k / (alpha * a_m);
    let x = (1.0 + b_k - alpha * (1.0 + b_m)) / (alpha * a_m);
    // at ratio >= 1 the tail behaves like a geometric series in e^{-x}
    let geometric_ok = ratio < 1.0 || x > 0.0;

    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut stopped = false;
    for k in 0..n_terms {
        let kp1 = (k + 1) as f64;
        let ln_t = -kp1 * x + specfun::ln_gamma(1.0 + kp1 * ratio)? - specfun::ln_gamma(kp1 + 1.0)?;
        if ln_t > SERIES_LN_TERM_LIMIT {
            return Err(Error::numeric(format!(
                "series term magnitude e^{ln_t:.1} exceeds cancellation capacity at \
                 alpha={alpha}; use the quadrature strategy"
            )));
        }
        let magnitude = ln_t.exp();
        let term = if k % 2 == 0 { magnitude } else { -magnitude };
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if magnitude < SERIES_STOP {
            stopped = true;
            break;
        }
    }
    Ok((sum.clamp(0.0, 1.0), stopped && geometric_ok))
}

/// Integration cutoff: the integrand is dominated by e^{−ζ}.
const QUAD_UPPER: f64 = 45.0;
const QUAD_TOL: f64 = 1e-11;

fn theorem1_quadrature(a_k: f64, b_k: f64, a_m: f64, b_m: f64, alpha: f64) -> f64 {
    let c = (1.0 + b_k - alpha * (1.0 + b_m)) / a_k;
    let p = alpha * a_m / a_k;
    let integrand = move |z: f64| -> f64 {
        if z <= 0.0 {
            return 1.0;
        }
        let inner = c + p * z.ln();
        if inner > 700.0 {
            return 0.0;
        }
        (-z - inner.exp()).exp()
    };
    // knots where e^c ζ^p reaches 1 and ~e^3.7, bracketing the possible
    // boundary layer near zero when c is large
    let knots = [(-c / p).exp(), ((3.7 - c) / p).exp()];
    let cdf = quad::adaptive_simpson_split(&integrand, 0.0, QUAD_UPPER, &knots, QUAD_TOL);
    cdf.clamp(0.0, 1.0)
}

/// Λ(α) = (√e M)^α Γ(t) / (√e K (ln K)^{t−1}), evaluated in log space.
pub fn lambda_factor(shape: &SystemShape, alpha: f64) -> Result<f64> {
    check_lambda_args(shape.users as f64, shape.antennas, alpha)?;
    Ok(ln_lambda(shape.users as f64, shape.eves as f64, shape.antennas, alpha)?.exp())
}

fn check_lambda_args(k: f64, t: u32, alpha: f64) -> Result<()> {
    if t > 1 && k < 3.0 {
        return Err(Error::domain(format!(
            "lambda requires K >= 3 when t > 1 so that ln K > 1, got K={k}"
        )));
    }
    if k < 2.0 {
        return Err(Error::domain(format!("lambda requires K >= 2, got K={k}")));
    }
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    Ok(())
}

fn ln_lambda(k: f64, m: f64, t: u32, alpha: f64) -> Result<f64> {
    let ln_k = k.ln();
    Ok(alpha * (0.5 + m.ln()) + specfun::ln_gamma(f64::from(t))?
        - 0.5
        - ln_k
        - (f64::from(t) - 1.0) * ln_k.ln())
}

/// Upper bound on the outage CDF from the eavesdropper-side
/// peaks-over-threshold model with u_m = 2 ln M:
/// (a_K/(α a_M)) e^{−s·w} γ(s, e^w), s = a_K/(α a_M),
/// w = (1 + b_K − α(1 + u_m))/a_K.
pub fn lemma1_upper_cdf(shape: &SystemShape, alpha: f64) -> Result<ProbBound> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let (a_k, b_k, a_m, _) = shape.gumbel_constants(ConstantsMode::Asymptotic)?;
    let u_m = shape.power * evt::threshold_eve(shape.eves)?;
    let s = a_k / (alpha * a_m);
    let w = (1.0 + b_k - alpha * (1.0 + u_m)) / a_k;
    let ln_raw = s.ln() - s * w + ln_gamma_at_exp(s, w)?;
    Ok(ProbBound::clamped(ln_raw.exp()))
}

/// Lower bound on the outage CDF from the user-side peaks-over-threshold
/// model: 1 − (α a_M/a_K) e^{s·v} γ(s, e^{−v}), s = α a_M/a_K,
/// v = (1 + u_k − α(1 + b_M))/(α a_M).
pub fn lemma2_lower_cdf(shape: &SystemShape, alpha: f64) -> Result<ProbBound> {
    lemma2_lower_cdf_with(shape, alpha, UserThreshold::Exact)
}

/// [`lemma2_lower_cdf`] with an explicit choice of user threshold. The
/// `Asymptotic` variant uses u_k = b_K, which is the expression the
/// closed-form corollary is derived from and is exactly looser than it.
pub fn lemma2_lower_cdf_with(
    shape: &SystemShape,
    alpha: f64,
    threshold: UserThreshold,
) -> Result<ProbBound> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    let (a_k, b_k, a_m, b_m) = shape.gumbel_constants(ConstantsMode::Asymptotic)?;
    let u_k = match threshold {
        UserThreshold::Exact => shape.power * evt::threshold_user(shape.users, shape.antennas)?,
        UserThreshold::Asymptotic => b_k,
    };
    let s = alpha * a_m / a_k;
    let v = (1.0 + u_k - alpha * (1.0 + b_m)) / (alpha * a_m);
    let ln_sub = s.ln() + s * v + ln_gamma_at_exp(s, -v)?;
    Ok(ProbBound::clamped(1.0 - ln_sub.exp()))
}

/// ln γ(s, e^w) with overflow-safe saturation: once e^w passes the
/// specfun saturation point, γ has reached Γ(s).
fn ln_gamma_at_exp(s: f64, w: f64) -> Result<f64> {
    if w > specfun::GAMMA_SATURATION_Z.ln() {
        specfun::ln_gamma(s)
    } else {
        specfun::ln_lower_incomplete_gamma(s, w.exp())
    }
}

/// The closed-form corollary bounds at threshold α, together with Λ(α).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorollaryBounds {
    pub upper: ProbBound,
    pub lower: ProbBound,
    pub lambda: f64,
}

/// Corollary bounds: upper = [Λ(1 − e^{−Λ^{−1} 2^{α−1}})]^{1/α} and
/// lower = 1 − Γ(1+α) Λ^{−1} (1 − e^{−Λ^{1/α}})^α, both clamped.
pub fn corollary_bounds(shape: &SystemShape, alpha: f64) -> Result<CorollaryBounds> {
    check_lambda_args(shape.users as f64, shape.antennas, alpha)?;
    let ln_l = ln_lambda(shape.users as f64, shape.eves as f64, shape.antennas, alpha)?;
    Ok(corollary_bounds_from_ln_lambda(ln_l, alpha)?)
}

fn corollary_bounds_from_ln_lambda(ln_l: f64, alpha: f64) -> Result<CorollaryBounds> {
    // upper: exponent of the inner decay is 2^{α−1}/Λ
    let ln_y = (alpha - 1.0) * std::f64::consts::LN_2 - ln_l;
    let ln_one_minus = ln_one_minus_exp_neg(ln_y);
    let upper_raw = ((ln_l + ln_one_minus) / alpha).exp();

    // lower: subtracted term Γ(1+α) Λ^{−1} (1 − e^{−Λ^{1/α}})^α
    let ln_z = ln_l / alpha;
    let ln_sub = specfun::ln_gamma(1.0 + alpha)? - ln_l + alpha * ln_one_minus_exp_neg(ln_z);
    let lower_raw = 1.0 - ln_sub.exp();

    Ok(CorollaryBounds {
        upper: ProbBound::clamped(upper_raw),
        lower: ProbBound::clamped(lower_raw),
        lambda: ln_l.exp(),
    })
}

/// ln(1 − e^{−y}) given ln y, stable for both extremes of y.
fn ln_one_minus_exp_neg(ln_y: f64) -> f64 {
    if ln_y > 6.6 {
        // y > ~700: e^{−y} underflows entirely
        0.0
    } else {
        (-(-ln_y.exp()).exp_m1()).ln()
    }
}

/// The real eavesdropper count where Λ(α) = 1:
/// M = e^{−1/2} (√e K (ln K)^{t−1} / Γ(t))^{1/α}.
pub fn critical_m(k: f64, t: u32, alpha: f64) -> Result<f64> {
    check_lambda_args(k, t, alpha)?;
    let ln_k = k.ln();
    let ln_inner = 0.5 + ln_k + (f64::from(t) - 1.0) * ln_k.ln() - specfun::ln_gamma(f64::from(t))?;
    Ok((-0.5 + ln_inner / alpha).exp())
}

const REQUIRED_K_MAX: f64 = 1e12;

/// Smallest real K >= 3 with Λ(α) <= target, by bisection on ln K.
pub fn required_k(m: u64, t: u32, alpha: f64, target_lambda: f64) -> Result<f64> {
    if !(target_lambda > 0.0) || !target_lambda.is_finite() {
        return Err(Error::domain(format!(
            "target lambda must be positive, got {target_lambda}"
        )));
    }
    if m < 2 {
        return Err(Error::domain(format!("need M >= 2 eavesdroppers, got {m}")));
    }
    let ln_target = target_lambda.ln();
    let mf = m as f64;
    let at = |ln_k: f64| ln_lambda(ln_k.exp(), mf, t, alpha);
    let mut lo = 3.0f64.ln();
    let mut hi = REQUIRED_K_MAX.ln();
    if at(lo)? <= ln_target {
        return Ok(3.0);
    }
    if at(hi)? > ln_target {
        return Err(Error::range(format!(
            "no K <= 1e12 brings lambda below {target_lambda} for M={m}, t={t}, alpha={alpha}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if at(mid)? > ln_target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Scaling-law summary around a required-K solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingResult {
    pub eves: u64,
    pub antennas: u32,
    pub alpha: f64,
    pub target_lambda: f64,
    pub required_k: f64,
    /// Λ evaluated at the solution K.
    pub lambda: f64,
    /// Critical M where Λ = 1 at the solution K; round-trips with
    /// `required_k` when the target is 1.
    pub critical_m: f64,
    pub cor1_upper: ProbBound,
    pub cor2_lower: ProbBound,
}

pub fn scaling_result(m: u64, t: u32, alpha: f64, target_lambda: f64) -> Result<ScalingResult> {
    let k = required_k(m, t, alpha, target_lambda)?;
    let ln_l = ln_lambda(k, m as f64, t, alpha)?;
    let bounds = corollary_bounds_from_ln_lambda(ln_l, alpha)?;
    Ok(ScalingResult {
        eves: m,
        antennas: t,
        alpha,
        target_lambda,
        required_k: k,
        lambda: ln_l.exp(),
        critical_m: critical_m(k, t, alpha)?,
        cor1_upper: bounds.upper,
        cor2_lower: bounds.lower,
    })
}

/// Provenance of a CDF curve over an α grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Theorem1Series,
    Theorem1Quadrature,
    Lemma1Upper,
    Lemma2Lower,
    Cor1Upper,
    Cor2Lower,
    Empirical,
}

impl CurveKind {
    pub fn label(&self) -> &'static str {
        match self {
            CurveKind::Theorem1Series => "theorem1_series",
            CurveKind::Theorem1Quadrature => "theorem1_quadrature",
            CurveKind::Lemma1Upper => "lemma1_upper",
            CurveKind::Lemma2Lower => "lemma2_lower",
            CurveKind::Cor1Upper => "cor1_upper",
            CurveKind::Cor2Lower => "cor2_lower",
            CurveKind::Empirical => "empirical",
        }
    }
}

/// An outage-CDF curve over an α grid with clamped values, pre-clamp
/// values and per-point convergence flags.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub kind: CurveKind,
    pub alphas: Vec<f64>,
    pub values: Vec<f64>,
    pub raw_values: Vec<f64>,
    pub converged: Vec<bool>,
}

/// Evaluate one analytical curve kind over a grid. Grid points are
/// independent; evaluation is data-parallel under the `parallel` feature.
///
/// A series point that overflows falls back to the quadrature value with
/// its convergence flag cleared.
pub fn evaluate_curve(
    shape: &SystemShape,
    kind: CurveKind,
    alphas: &[f64],
    series_terms: usize,
    mode: ConstantsMode,
) -> Result<BoundCurve> {
    if kind == CurveKind::Empirical {
        return Err(Error::domain(
            "empirical curves come from the Monte Carlo simulator, not the analytical module"
                .to_string(),
        ));
    }
    let eval_one = |&alpha: &f64| -> Result<(f64, f64, bool)> {
        match kind {
            CurveKind::Theorem1Series => {
                match theorem1_cdf(shape, alpha, Theorem1Strategy::Series { n_terms: series_terms }, mode) {
                    Ok((v, conv)) => Ok((v, v, conv)),
                    Err(Error::Numeric(_)) => {
                        let (v, _) = theorem1_cdf(shape, alpha, Theorem1Strategy::Quadrature, mode)?;
                        Ok((v, v, false))
                    }
                    Err(e) => Err(e),
                }
            }
            CurveKind::Theorem1Quadrature => {
                let (v, conv) = theorem1_cdf(shape, alpha, Theorem1Strategy::Quadrature, mode)?;
                Ok((v, v, conv))
            }
            CurveKind::Lemma1Upper => {
                let b = lemma1_upper_cdf(shape, alpha)?;
                Ok((b.value, b.raw, true))
            }
            CurveKind::Lemma2Lower => {
                let b = lemma2_lower_cdf(shape, alpha)?;
                Ok((b.value, b.raw, true))
            }
            CurveKind::Cor1Upper => {
                let b = corollary_bounds(shape, alpha)?;
                Ok((b.upper.value, b.upper.raw, true))
            }
            CurveKind::Cor2Lower => {
                let b = corollary_bounds(shape, alpha)?;
                Ok((b.lower.value, b.lower.raw, true))
            }
            CurveKind::Empirical => unreachable!(),
        }
    };

    #[cfg(feature = "parallel")]
    let points: Result<Vec<_>> = alphas.par_iter().map(eval_one).collect();
    #[cfg(not(feature = "parallel"))]
    let points: Result<Vec<_>> = alphas.iter().map(eval_one).collect();
    let points = points?;

    Ok(BoundCurve {
        kind,
        alphas: alphas.to_vec(),
        values: points.iter().map(|p| p.0).collect(),
        raw_values: points.iter().map(|p| p.1).collect(),
        converged: points.iter().map(|p| p.2).collect(),
    })
}

/// An evenly spaced α grid.
pub fn alpha_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min >= 1.0) || !(max > min) || steps < 2 {
        return Err(Error::domain(format!(
            "alpha grid requires 1 <= min < max and steps >= 2, got [{min}, {max}] x {steps}"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps).map(|i| min + h * i as f64).collect())
}
