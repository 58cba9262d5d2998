//! Seeded Monte Carlo simulation of the wiretap system: channel draws,
//! strongest-user selection, strongest-eavesdropper projection and the
//! resulting secrecy-SNR ratio, plus the above-threshold conditional
//! variants and the exceedance statistics of the POT model.
//!
//! Every trial derives its own counter-based RNG stream from
//! (master_seed, trial_index), so results are bit-identical regardless of
//! thread count or scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::evt::{self, GumbelParams};
use crate::outage::{BoundCurve, ConstantsMode, CurveKind, SystemShape};
use crate::specfun;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// A complex Gaussian channel vector; each entry has unit variance in
/// the real and imaginary parts, so its squared norm is χ²(2t).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub entries: Vec<Complex64>,
}

impl ChannelVector {
    fn draw(rng: &mut ChaCha8Rng, t: u32) -> Self {
        let entries = (0..t)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        ChannelVector { entries }
    }

    pub fn squared_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    fn normalized(&self) -> ChannelVector {
        let n = self.squared_norm().sqrt();
        ChannelVector { entries: self.entries.iter().map(|e| e / n).collect() }
    }

    /// |⟨self, other⟩|² with the conjugate on `self`.
    pub fn squared_projection(&self, other: &ChannelVector) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// One Monte Carlo draw of the full system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    /// Index i* of the user with the largest channel gain.
    pub best_user_index: usize,
    /// ‖h_{i*}‖², the largest of the K gains.
    pub max_gain: f64,
    /// |⟨ĥ_{i*}, g_{j*}⟩|², the largest of the M projections.
    pub max_projection: f64,
    /// (1 + P·max_gain) / (1 + P·max_projection).
    pub ratio: f64,
    /// log₂ of the ratio.
    pub rate_bits: f64,
}

/// Conditioning applied to a trial, with the threshold it conditions on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Conditioning {
    None,
    /// Strongest eavesdropper projection exceeds the threshold.
    EveAbove(f64),
    /// Strongest user gain exceeds the threshold.
    UserAbove(f64),
}

impl Conditioning {
    /// Eavesdropper conditioning at the default threshold u_m = 2 ln M.
    pub fn eve_above_default(shape: &SystemShape) -> Result<Self> {
        Ok(Conditioning::EveAbove(evt::threshold_eve(shape.eves)?))
    }

    /// User conditioning at the default threshold from the inverse
    /// regularized gamma function.
    pub fn user_above_default(shape: &SystemShape) -> Result<Self> {
        Ok(Conditioning::UserAbove(evt::threshold_user(shape.users, shape.antennas)?))
    }
}

/// How the conditional distribution is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditioningImpl {
    /// Redraw the conditioned block until the threshold is exceeded;
    /// simulates the system exactly.
    Rejection,
    /// Replace the conditioned maximum by threshold + Exp(mean 2), the
    /// peaks-over-threshold surrogate the analytical bounds are built on.
    PotModel,
}

/// Simulation configuration. The simulator accepts K = 1 or M = 1
/// (degenerate but well-defined); the analytical formulas do not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub shape: SystemShape,
    pub trials: u64,
    pub master_seed: u64,
    pub conditioning: Conditioning,
    pub conditioning_impl: ConditioningImpl,
}

impl SimConfig {
    pub fn unconditional(shape: SystemShape, trials: u64, master_seed: u64) -> Self {
        SimConfig {
            shape,
            trials,
            master_seed,
            conditioning: Conditioning::None,
            conditioning_impl: ConditioningImpl::Rejection,
        }
    }
}

/// Sorted ratio samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted_samples: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::domain("empirical CDF needs at least one sample".to_string()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted_samples: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted_samples
    }

    /// Fraction of samples <= x.
    pub fn value_at(&self, x: f64) -> f64 {
        let rank = self.sorted_samples.partition_point(|&s| s <= x);
        rank as f64 / self.sorted_samples.len() as f64
    }

    /// Half-width of the two-sided DKW band at confidence 1 − delta:
    /// sqrt(ln(2/δ) / (2n)).
    pub fn dkw_epsilon(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::domain(format!("delta must be in (0,1), got {delta}")));
        }
        Ok(((2.0 / delta).ln() / (2.0 * self.sorted_samples.len() as f64)).sqrt())
    }

    /// Write one sample per line as decimal text.
    pub fn write_samples<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        for s in &self.sorted_samples {
            writeln!(w, "{s}")?;
        }
        Ok(())
    }
}

fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// χ²(2) draw, i.e. Exp(mean 2).
fn chi2_2(rng: &mut ChaCha8Rng) -> f64 {
    -2.0 * (1.0 - rng.gen::<f64>()).ln()
}

fn draw_user_block(rng: &mut ChaCha8Rng, k: u64, t: u32) -> (usize, f64, ChannelVector) {
    let mut best_index = 0usize;
    let mut best_gain = f64::NEG_INFINITY;
    let mut best = None;
    for i in 0..k {
        let h = ChannelVector::draw(rng, t);
        let gain = h.squared_norm();
        if gain > best_gain {
            best_gain = gain;
            best_index = i as usize;
            best = Some(h);
        }
    }
    (best_index, best_gain, best.expect("at least one user"))
}

fn draw_eve_projections(rng: &mut ChaCha8Rng, beam: &ChannelVector, m: u64, t: u32) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for _ in 0..m {
        let g = ChannelVector::draw(rng, t);
        let p = beam.squared_projection(&g);
        if p > best {
            best = p;
        }
    }
    best
}

const REJECTION_MIN_ACCEPTANCE: f64 = 1e-6;

fn rejection_acceptance_estimate(cfg: &SimConfig) -> Result<f64> {
    match cfg.conditioning {
        Conditioning::None => Ok(1.0),
        Conditioning::EveAbove(u) => {
            // each projection is chi2(2): Pr(> u) = e^{-u/2}
            let p_single = (-u / 2.0).exp();
            Ok(1.0 - (1.0 - p_single).powi(cfg.shape.eves as i32))
        }
        Conditioning::UserAbove(u) => {
            let q = specfun::regularized_gamma_q(f64::from(cfg.shape.antennas), u / 2.0)?;
            Ok(1.0 - (1.0 - q).powi(cfg.shape.users as i32))
        }
    }
}

/// One trial: draw K user vectors, select i* by gain, beamform along
/// ĥ_{i*}, draw M eavesdropper vectors and take the largest squared
/// projection. Deterministic given (master_seed, trial_index).
pub fn sample_trial(cfg: &SimConfig, trial_index: u64) -> Result<TrialRecord> {
    if trial_index >= cfg.trials {
        return Err(Error::domain(format!(
            "trial index {trial_index} out of range for {} trials",
            cfg.trials
        )));
    }
    let mut rng = trial_rng(cfg.master_seed, trial_index);
    sample_trial_inner(cfg, &mut rng)
}

fn sample_trial_inner(cfg: &SimConfig, rng: &mut ChaCha8Rng) -> Result<TrialRecord> {
    let shape = &cfg.shape;
    let (k, m, t, p) = (shape.users, shape.eves, shape.antennas, shape.power);

    let (mut best_index, mut max_gain, mut best_vec) = draw_user_block(rng, k, t);
    if let (Conditioning::UserAbove(u), ConditioningImpl::Rejection) =
        (cfg.conditioning, cfg.conditioning_impl)
    {
        while max_gain <= u {
            let redraw = draw_user_block(rng, k, t);
            best_index = redraw.0;
            max_gain = redraw.1;
            best_vec = redraw.2;
        }
    }
    let beam = best_vec.normalized();

    let mut max_projection = draw_eve_projections(rng, &beam, m, t);
    if let (Conditioning::EveAbove(u), ConditioningImpl::Rejection) =
        (cfg.conditioning, cfg.conditioning_impl)
    {
        while max_projection <= u {
            max_projection = draw_eve_projections(rng, &beam, m, t);
        }
    }

    // POT surrogate: the maximum is the threshold plus an Exponential
    // excess with mean 2 (exact for the chi2(2) projections, asymptotic
    // for the chi2(2t) gains)
    if cfg.conditioning_impl == ConditioningImpl::PotModel {
        match cfg.conditioning {
            Conditioning::None => {}
            Conditioning::EveAbove(u) => max_projection = u + chi2_2(rng),
            Conditioning::UserAbove(u) => max_gain = u + chi2_2(rng),
        }
    }

    let ratio = (1.0 + p * max_gain) / (1.0 + p * max_projection);
    Ok(TrialRecord {
        best_user_index: best_index,
        max_gain,
        max_projection,
        ratio,
        rate_bits: ratio.log2(),
    })
}

fn collect_ratios(cfg: &SimConfig) -> Result<Vec<f64>> {
    if cfg.trials == 0 {
        return Err(Error::domain("need at least one trial".to_string()));
    }
    let run_one = |i: u64| -> Result<f64> {
        let mut rng = trial_rng(cfg.master_seed, i);
        Ok(sample_trial_inner(cfg, &mut rng)?.ratio)
    };
    #[cfg(feature = "parallel")]
    return (0..cfg.trials).into_par_iter().map(run_one).collect();
    #[cfg(not(feature = "parallel"))]
    (0..cfg.trials).map(run_one).collect()
}

/// Sequential twin of [`simulate_cdf`], kept public so the benchmark
/// suite can compare the two code paths; outputs are identical.
pub fn simulate_cdf_sequential(cfg: &SimConfig) -> Result<EmpiricalCdf> {
    if cfg.trials == 0 {
        return Err(Error::domain("need at least one trial".to_string()));
    }
    let ratios = (0..cfg.trials)
        .map(|i| {
            let mut rng = trial_rng(cfg.master_seed, i);
            Ok(sample_trial_inner(cfg, &mut rng)?.ratio)
        })
        .collect::<Result<Vec<f64>>>()?;
    EmpiricalCdf::from_samples(ratios)
}

/// Empirical CDF of the ratio statistic over independent trials.
pub fn simulate_cdf(cfg: &SimConfig) -> Result<EmpiricalCdf> {
    if cfg.conditioning != Conditioning::None {
        return simulate_conditional_cdf(cfg);
    }
    EmpiricalCdf::from_samples(collect_ratios(cfg)?)
}

/// Conditional (above-threshold) empirical CDF; see [`Conditioning`] and
/// [`ConditioningImpl`] for the two constructions.
pub fn simulate_conditional_cdf(cfg: &SimConfig) -> Result<EmpiricalCdf> {
    if cfg.conditioning == Conditioning::None {
        return Err(Error::domain(
            "conditional simulation needs an eve_above or user_above conditioning".to_string(),
        ));
    }
    if cfg.conditioning_impl == ConditioningImpl::Rejection {
        let acc = rejection_acceptance_estimate(cfg)?;
        if acc < REJECTION_MIN_ACCEPTANCE {
            return Err(Error::numeric(format!(
                "rejection acceptance probability ~{acc:.2e} is impractically small; \
                 use the pot_model conditioning implementation"
            )));
        }
    }
    EmpiricalCdf::from_samples(collect_ratios(cfg)?)
}

/// Evaluate an empirical CDF on an α grid with a two-sided DKW band.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalBand {
    pub curve: BoundCurve,
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub epsilon: f64,
}

pub fn empirical_cdf_at(cdf: &EmpiricalCdf, alpha_grid: &[f64], delta: f64) -> Result<EmpiricalBand> {
    let epsilon = cdf.dkw_epsilon(delta)?;
    let values: Vec<f64> = alpha_grid.iter().map(|&a| cdf.value_at(a)).collect();
    Ok(EmpiricalBand {
        lo: values.iter().map(|v| (v - epsilon).max(0.0)).collect(),
        hi: values.iter().map(|v| (v + epsilon).min(1.0)).collect(),
        curve: BoundCurve {
            kind: CurveKind::Empirical,
            alphas: alpha_grid.to_vec(),
            raw_values: values.clone(),
            converged: vec![true; values.len()],
            values,
        },
        epsilon,
    })
}

/// Empirical exceedance-count statistics of the threshold u_m = 2 ln M
/// among M χ²(2) projections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExceedanceStats {
    pub p_exactly_one: f64,
    pub p_more_than_one: f64,
    pub mean_count: f64,
    pub threshold: f64,
}

pub fn exceedance_check(m: u64, trials: u64, seed: u64) -> Result<ExceedanceStats> {
    let u = evt::threshold_eve(m)?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial".to_string()));
    }
    let count_one_rep = |i: u64| -> (u64, u64, u64) {
        let mut rng = trial_rng(seed, i);
        let count = (0..m).filter(|_| chi2_2(&mut rng) > u).count() as u64;
        (u64::from(count == 1), u64::from(count > 1), count)
    };
    #[cfg(feature = "parallel")]
    let (ones, more, total) = (0..trials)
        .into_par_iter()
        .map(count_one_rep)
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    #[cfg(not(feature = "parallel"))]
    let (ones, more, total) = (0..trials)
        .map(count_one_rep)
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    let n = trials as f64;
    Ok(ExceedanceStats {
        p_exactly_one: ones as f64 / n,
        p_more_than_one: more as f64 / n,
        mean_count: total as f64 / n,
        threshold: u,
    })
}

/// KS distance between simulated maxima of n χ²(dof) draws and the
/// Gumbel law with the chosen normalizing constants.
///
/// The closed-form constants converge extremely slowly for dof > 2, so
/// quantitative convergence checks should use [`ConstantsMode::ExactTail`].
pub fn gumbel_convergence_ks(
    n: u64,
    dof: u32,
    n_maxima: u64,
    seed: u64,
    mode: ConstantsMode,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("need n >= 2 draws per maximum, got {n}")));
    }
    if n_maxima < 1000 {
        return Err(Error::domain(format!("need at least 1000 maxima, got {n_maxima}")));
    }
    let constants = match mode {
        ConstantsMode::Asymptotic => evt::normalizing_constants(n, dof)?,
        ConstantsMode::ExactTail => crate::outage::exact_normalizing_constants(n, dof)?,
    };
    let params = constants.gumbel_params(1.0)?;
    let half_dof = dof / 2;
    let draw_max = |i: u64| -> f64 {
        let mut rng = trial_rng(seed, i);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..n {
            let mut x = 0.0;
            for _ in 0..half_dof {
                x += chi2_2(&mut rng);
            }
            if x > best {
                best = x;
            }
        }
        best
    };
    #[cfg(feature = "parallel")]
    let mut maxima: Vec<f64> = (0..n_maxima).into_par_iter().map(draw_max).collect();
    #[cfg(not(feature = "parallel"))]
    let mut maxima: Vec<f64> = (0..n_maxima).map(draw_max).collect();
    maxima.sort_by(f64::total_cmp);
    Ok(ks_distance_sorted(&maxima, |x| evt::gumbel_cdf(x, &params)))
}

/// Two-sided KS distance between sorted samples and a reference CDF.
pub fn ks_distance_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((i as f64 / n - f).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// The Gumbel limit law of the best-user gain, for external comparisons.
pub fn best_user_gumbel(shape: &SystemShape, mode: ConstantsMode) -> Result<GumbelParams> {
    let constants = match mode {
        ConstantsMode::Asymptotic => evt::normalizing_constants(shape.users, 2 * shape.antennas)?,
        ConstantsMode::ExactTail => {
            crate::outage::exact_normalizing_constants(shape.users, 2 * shape.antennas)?
        }
    };
    constants.gumbel_params(shape.power)
}
