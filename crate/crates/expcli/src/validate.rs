//! Property validation suites runnable from the CLI: each check reports
//! its measured value and threshold, and the run fails if any check does.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wiretap_evt::mc::{
    exceedance_check, gumbel_convergence_ks, simulate_cdf, SimConfig,
};
use wiretap_evt::outage::{
    alpha_grid, corollary_bounds, critical_m, lemma1_upper_cdf, lemma2_lower_cdf_with,
    required_k, theorem1_cdf, ConstantsMode, SystemShape, Theorem1Strategy, UserThreshold,
};
use wiretap_evt::{evt, specfun, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Specfun,
    Evt,
    Outage,
    Montecarlo,
    All,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: String,
    pub pass: bool,
}

fn at_most(name: &str, value: f64, limit: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
        threshold: format!("<= {limit}"),
        pass: value <= limit,
    }
}

fn within(name: &str, value: f64, lo: f64, hi: f64) -> Check {
    Check {
        name: name.to_string(),
        value,
        threshold: format!("in [{lo}, {hi}]"),
        pass: (lo..=hi).contains(&value),
    }
}

pub fn run_suite(suite: Suite, seed: u64, trials: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    match suite {
        Suite::Specfun => checks.extend(specfun_suite(seed)?),
        Suite::Evt => checks.extend(evt_suite(seed)?),
        Suite::Outage => checks.extend(outage_suite()?),
        Suite::Montecarlo => checks.extend(montecarlo_suite(seed, trials)?),
        Suite::All => {
            checks.extend(specfun_suite(seed)?);
            checks.extend(evt_suite(seed)?);
            checks.extend(outage_suite()?);
            checks.extend(montecarlo_suite(seed, trials)?);
        }
    }
    Ok(checks)
}

fn specfun_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = [0u64; 3];
    // (i) sandwich of γ(s,z); equality is admitted because for small s
    // with moderately large z both brackets saturate to γ at double
    // precision
    for _ in 0..10_000 {
        let s: f64 = if rng.gen::<bool>() {
            rng.gen_range(0.01..0.99)
        } else {
            rng.gen_range(1.01..10.0)
        };
        let z: f64 = rng.gen_range(1e-3..30.0);
        let bounds = specfun::claim1_bounds(s, z)?;
        let exact = specfun::lower_incomplete_gamma(s, z)?;
        if !(bounds.lower <= exact && exact <= bounds.upper) {
            violations[0] += 1;
        }
    }
    // (ii) 2^{s−1} <= Γ(1+s) <= 1 on (0,1)
    for _ in 0..10_000 {
        let s: f64 = rng.gen_range(1e-6..1.0);
        let g = specfun::gamma(1.0 + s)?;
        if !(2.0f64.powf(s - 1.0) <= g + 1e-14 && g <= 1.0 + 1e-14) {
            violations[1] += 1;
        }
    }
    // (iii) Γ(s) Γ(1/s) >= 1
    for _ in 0..10_000 {
        let s: f64 = rng.gen_range(0.02..50.0);
        if specfun::ln_gamma(s)? + specfun::ln_gamma(1.0 / s)? < -1e-12 {
            violations[2] += 1;
        }
    }
    let mut checks = vec![
        at_most("claim1_i_sandwich_violations_10k", violations[0] as f64, 0.0),
        at_most("claim1_ii_gamma1ps_violations_10k", violations[1] as f64, 0.0),
        at_most("claim1_iii_product_violations_10k", violations[2] as f64, 0.0),
    ];

    let mut max_rel = 0.0f64;
    for _ in 0..2000 {
        let s: f64 = rng.gen_range(1e-2..50.0);
        let z: f64 = rng.gen_range(1e-2..60.0);
        // recurrence γ(s+1,z) = s γ(s,z) − z^s e^{−z}
        let lhs = specfun::lower_incomplete_gamma(s + 1.0, z)?;
        let rhs = s * specfun::lower_incomplete_gamma(s, z)? - (s * z.ln() - z).exp();
        let scale = lhs.abs().max(rhs.abs()).max(1e-300);
        max_rel = max_rel.max((lhs - rhs).abs() / scale);
    }
    checks.push(at_most("incgamma_recurrence_max_rel_err", max_rel, 1e-10));

    let mut max_res = 0.0f64;
    for _ in 0..500 {
        let s: f64 = rng.gen_range(0.5..20.0);
        let q: f64 = rng.gen_range(1e-8..0.9);
        let z = specfun::inverse_regularized_gamma_q(s, q)?;
        max_res = max_res.max((specfun::regularized_gamma_q(s, z)? - q).abs() / q);
    }
    checks.push(at_most("inverse_gamma_q_max_rel_residual", max_res, 1e-8));
    Ok(checks)
}

fn evt_suite(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut max_dev = 0.0f64;
    for n in [2u64, 10, 30, 1000, 1_000_000] {
        let c = evt::normalizing_constants(n, 2)?;
        max_dev = max_dev.max((c.b - 2.0 * (n as f64).ln()).abs());
    }
    checks.push(at_most("dof2_location_identity_max_dev", max_dev, 1e-12));

    let mut max_cal = 0.0f64;
    for (k, t) in [(30u64, 2u32), (1000, 4), (100, 8)] {
        let u = evt::threshold_user(k, t)?;
        let q = specfun::regularized_gamma_q(f64::from(t), u / 2.0)?;
        max_cal = max_cal.max((k as f64 * q - 1.0).abs());
    }
    checks.push(at_most("user_threshold_calibration_max_dev", max_cal, 1e-7));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = evt::GumbelParams { location: 2.5, scale: 1.3 };
    let mut max_rt = 0.0f64;
    for _ in 0..1000 {
        let q: f64 = rng.gen_range(1e-9..1.0 - 1e-9);
        let x = evt::gumbel_quantile(q, &p)?;
        max_rt = max_rt.max((evt::gumbel_cdf(x, &p) - q).abs());
    }
    checks.push(at_most("gumbel_quantile_round_trip_max_err", max_rt, 1e-10));

    let u = evt::threshold_eve(1000)?;
    checks.push(at_most(
        "eve_threshold_mean_exceedance_dev",
        (1000.0 * (-u / 2.0).exp() - 1.0).abs(),
        1e-12,
    ));
    Ok(checks)
}

fn outage_suite() -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut max_diff = 0.0f64;
    let grid = alpha_grid(1.0, 1.4, 21)?;
    for km in [30u64, 100] {
        for t in [2u32, 4, 8] {
            let shape = SystemShape::new(km, km, t, 1.0)?;
            for &alpha in &grid {
                let (s, conv) = theorem1_cdf(
                    &shape,
                    alpha,
                    Theorem1Strategy::Series { n_terms: 100 },
                    ConstantsMode::Asymptotic,
                )?;
                let (q, _) =
                    theorem1_cdf(&shape, alpha, Theorem1Strategy::Quadrature, ConstantsMode::Asymptotic)?;
                if conv {
                    max_diff = max_diff.max((s - q).abs());
                }
            }
        }
    }
    checks.push(at_most("series_vs_quadrature_max_abs_diff", max_diff, 1e-6));

    let sym = SystemShape::new(30, 30, 1, 1.0)?;
    let (v, _) = theorem1_cdf(&sym, 1.0, Theorem1Strategy::Quadrature, ConstantsMode::Asymptotic)?;
    checks.push(at_most("symmetry_point_abs_err", (v - 0.5).abs(), 1e-9));

    // bound sandwich at K = M = 1000, t = 4
    let shape = SystemShape::new(1000, 1000, 4, 1.0)?;
    let (_, b_k, _, b_m) = shape.gumbel_constants(ConstantsMode::Asymptotic)?;
    let a_max = 0.95 * (1.0 + b_k) / (1.0 + b_m);
    let mut violations = 0u64;
    for &alpha in &alpha_grid(1.0, a_max, 60)? {
        let cor = corollary_bounds(&shape, alpha)?;
        let l1 = lemma1_upper_cdf(&shape, alpha)?;
        let l2 = lemma2_lower_cdf_with(&shape, alpha, UserThreshold::Asymptotic)?;
        let (q, _) = theorem1_cdf(&shape, alpha, Theorem1Strategy::Quadrature, ConstantsMode::Asymptotic)?;
        let ordered = cor.lower.value <= l2.value
            && l2.value <= q + 0.02
            && q <= l1.value + 0.02
            && l1.raw <= cor.upper.raw;
        if !ordered {
            violations += 1;
        }
    }
    checks.push(at_most("bound_sandwich_violations", violations as f64, 0.0));

    checks.push(at_most(
        "critical_m_abs_err",
        (critical_m(1000.0, 4, 2.0)? - 182.5392111847403).abs(),
        1e-6,
    ));
    checks.push(at_most(
        "required_k_round_trip_abs_err",
        (required_k(182, 4, 2.0, 1.0)? - 995.8837477731883).abs(),
        1e-3,
    ));
    Ok(checks)
}

fn montecarlo_suite(seed: u64, trials: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let stats = exceedance_check(1000, trials, seed)?;
    // limits e^{-1} and 1 - 2e^{-1}; half-width is 3 binomial sigmas,
    // floored at 0.005 so the band matches the published one at 10^5 trials
    let band = |p: f64| {
        let hw = (3.0 * (p * (1.0 - p) / trials as f64).sqrt()).max(0.005);
        (p - hw, p + hw)
    };
    let (lo1, hi1) = band((-1.0f64).exp());
    let (lo2, hi2) = band(1.0 - 2.0 * (-1.0f64).exp());
    checks.push(within("exceedance_p_exactly_one", stats.p_exactly_one, lo1, hi1));
    checks.push(within("exceedance_p_more_than_one", stats.p_more_than_one, lo2, hi2));
    let mean_hw = (3.0 / (trials as f64).sqrt()).max(0.01);
    checks.push(within("exceedance_mean_count", stats.mean_count, 1.0 - mean_hw, 1.0 + mean_hw));

    let n_maxima = trials.clamp(1000, 100_000);
    let ks2_big = gumbel_convergence_ks(1000, 2, n_maxima, seed, ConstantsMode::ExactTail)?;
    let ks2_small = gumbel_convergence_ks(10, 2, n_maxima, seed, ConstantsMode::ExactTail)?;
    let ks8_big = gumbel_convergence_ks(1000, 8, n_maxima, seed, ConstantsMode::ExactTail)?;
    let ks8_small = gumbel_convergence_ks(10, 8, n_maxima, seed, ConstantsMode::ExactTail)?;
    checks.push(at_most("gumbel_ks_n1000_dof2", ks2_big, 0.02));
    checks.push(at_most("gumbel_ks_n1000_dof8", ks8_big, 0.06));
    checks.push(at_most("gumbel_ks_dof2_n1000_minus_n10", ks2_big - ks2_small, 0.0));
    checks.push(at_most("gumbel_ks_dof8_n1000_minus_n10", ks8_big - ks8_small, 0.0));

    // empirical CDF vs the analytic CDF with finite-n tail constants
    let shape = SystemShape::new(30, 30, 4, 1.0)?;
    let cdf = simulate_cdf(&SimConfig::unconditional(shape, trials, seed))?;
    let mut sup = 0.0f64;
    for &alpha in &alpha_grid(1.0, 4.0, 100)? {
        let (q, _) = theorem1_cdf(&shape, alpha, Theorem1Strategy::Quadrature, ConstantsMode::ExactTail)?;
        sup = sup.max((cdf.value_at(alpha) - q).abs());
    }
    checks.push(at_most("mc_vs_theorem1_sup_dist_k30", sup, 0.05));

    // large system: empirical CDF within its DKW band of the analytic
    // CDF plus 0.02 asymptotic-approximation slack
    let big = SystemShape::new(1000, 1000, 4, 1.0)?;
    let big_trials = (trials / 10).max(500);
    let cdf = simulate_cdf(&SimConfig::unconditional(big, big_trials, seed.wrapping_add(1)))?;
    let eps = cdf.dkw_epsilon(0.01)?;
    let mut sup = 0.0f64;
    for &alpha in &alpha_grid(1.0, 4.0, 100)? {
        let (q, _) = theorem1_cdf(&big, alpha, Theorem1Strategy::Quadrature, ConstantsMode::ExactTail)?;
        sup = sup.max((cdf.value_at(alpha) - q).abs());
    }
    checks.push(at_most("mc_vs_theorem1_sup_dist_k1000", sup, eps + 0.02));
    Ok(checks)
}

pub fn report_json(suite: &str, seed: u64, trials: u64, checks: &[Check]) -> serde_json::Value {
    let pass = checks.iter().all(|c| c.pass);
    serde_json::json!({
        "suite": suite,
        "seed": seed,
        "trials": trials,
        "pass": pass,
        "checks": checks.iter().map(|c| serde_json::json!({
            "check": c.name,
            "value": c.value,
            "threshold": c.threshold,
            "pass": c.pass,
        })).collect::<Vec<_>>(),
    })
}
