//! Builders for the figure tables, the point outage query, and the
//! scaling-law report.

use wiretap_evt::mc::{
    empirical_cdf_at, simulate_cdf, Conditioning, ConditioningImpl, SimConfig,
};
use wiretap_evt::outage::{
    alpha_grid, corollary_bounds, critical_m, evaluate_curve, lambda_factor, lemma1_upper_cdf,
    lemma2_lower_cdf_with, scaling_result, ConstantsMode, CurveKind, SystemShape, UserThreshold,
};
use wiretap_evt::Result;

use crate::table::{Cell, CurveTable};

#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridSpec {
    pub fn build(&self) -> Result<Vec<f64>> {
        alpha_grid(self.min, self.max, self.steps)
    }
}

/// Empirical CDFs (unconditional plus both above-threshold variants)
/// against the analytical curves, one block of rows per antenna count.
#[allow(clippy::too_many_arguments)]
pub fn fig1_table(
    users: u64,
    eves: u64,
    ts: &[u32],
    power: f64,
    grid: GridSpec,
    trials: u64,
    seed: u64,
    terms: usize,
    cond_impl: ConditioningImpl,
    mode: ConstantsMode,
    delta: f64,
) -> Result<CurveTable> {
    let alphas = grid.build()?;
    let mut table = CurveTable::new(&[
        "t",
        "alpha",
        "empirical",
        "dkw_lo",
        "dkw_hi",
        "empirical_eve_above",
        "empirical_user_above",
        "theorem1_series",
        "theorem1_quadrature",
        "lemma1_upper",
        "lemma2_lower",
        "converged",
    ]);
    for (ti, &t) in ts.iter().enumerate() {
        let shape = SystemShape::new(users, eves, t, power)?;
        // distinct, deterministic master seeds per (t, conditioning)
        let base_seed = seed.wrapping_add(3 * ti as u64);
        let uncond = simulate_cdf(&SimConfig::unconditional(shape, trials, base_seed))?;
        let band = empirical_cdf_at(&uncond, &alphas, delta)?;
        let eve = simulate_cdf(&SimConfig {
            conditioning: Conditioning::eve_above_default(&shape)?,
            conditioning_impl: cond_impl,
            ..SimConfig::unconditional(shape, trials, base_seed.wrapping_add(1))
        })?;
        let user = simulate_cdf(&SimConfig {
            conditioning: Conditioning::user_above_default(&shape)?,
            conditioning_impl: cond_impl,
            ..SimConfig::unconditional(shape, trials, base_seed.wrapping_add(2))
        })?;

        let series = evaluate_curve(&shape, CurveKind::Theorem1Series, &alphas, terms, mode)?;
        let quad = evaluate_curve(&shape, CurveKind::Theorem1Quadrature, &alphas, terms, mode)?;
        let lem1 = evaluate_curve(&shape, CurveKind::Lemma1Upper, &alphas, terms, mode)?;
        let lem2 = evaluate_curve(&shape, CurveKind::Lemma2Lower, &alphas, terms, mode)?;

        for (i, &alpha) in alphas.iter().enumerate() {
            table.push(vec![
                Cell::Int(u64::from(t)),
                Cell::Float(alpha),
                Cell::Float(band.curve.values[i]),
                Cell::Float(band.lo[i]),
                Cell::Float(band.hi[i]),
                Cell::Float(eve.value_at(alpha)),
                Cell::Float(user.value_at(alpha)),
                Cell::Float(series.values[i]),
                Cell::Float(quad.values[i]),
                Cell::Float(lem1.values[i]),
                Cell::Float(lem2.values[i]),
                Cell::Bool(series.converged[i]),
            ]);
        }
    }
    Ok(table)
}

/// Closed-form corollary bounds against the lemma bounds; the lemma lower
/// bound uses the asymptotic user threshold the corollary is derived
/// from, so every row is ordered cor2 <= lemma2 <= lemma1 <= cor1.
pub fn fig2_table(users: u64, eves: u64, t: u32, power: f64, grid: GridSpec) -> Result<CurveTable> {
    let alphas = grid.build()?;
    let shape = SystemShape::new(users, eves, t, power)?;
    let mut table =
        CurveTable::new(&["alpha", "cor1_upper", "lemma1_upper", "lemma2_lower", "cor2_lower"]);
    for &alpha in &alphas {
        let cor = corollary_bounds(&shape, alpha)?;
        let lem1 = lemma1_upper_cdf(&shape, alpha)?;
        let lem2 = lemma2_lower_cdf_with(&shape, alpha, UserThreshold::Asymptotic)?;
        table.push(vec![
            Cell::Float(alpha),
            Cell::Float(cor.upper.value),
            Cell::Float(lem1.value),
            Cell::Float(lem2.value),
            Cell::Float(cor.lower.value),
        ]);
    }
    Ok(table)
}

/// Bounds as a function of the eavesdropper count at fixed α, with the
/// row nearest the critical count Λ(α)=1 flagged.
pub fn fig3_table(
    users: u64,
    t: u32,
    power: f64,
    alpha: f64,
    m_range: (u64, u64, u64),
) -> Result<CurveTable> {
    let (lo, hi, step) = m_range;
    if lo < 2 || hi < lo || step == 0 {
        return Err(wiretap_evt::Error::domain(format!(
            "eavesdropper range needs 2 <= lo <= hi and step >= 1, got {lo}:{hi}:{step}"
        )));
    }
    let ms: Vec<u64> = (lo..=hi).step_by(step as usize).collect();
    let m_star = critical_m(users as f64, t, alpha)?;
    let nearest = ms
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (**a as f64 - m_star).abs().total_cmp(&(**b as f64 - m_star).abs())
        })
        .map(|(i, _)| i)
        .expect("non-empty M range");

    let mut table = CurveTable::new(&[
        "M",
        "lambda",
        "cor1_upper",
        "cor2_lower",
        "lemma1_upper",
        "lemma2_lower",
        "critical_flag",
    ]);
    for (i, &m) in ms.iter().enumerate() {
        let shape = SystemShape::new(users, m, t, power)?;
        let cor = corollary_bounds(&shape, alpha)?;
        let lem1 = lemma1_upper_cdf(&shape, alpha)?;
        let lem2 = lemma2_lower_cdf_with(&shape, alpha, UserThreshold::Asymptotic)?;
        table.push(vec![
            Cell::Int(m),
            Cell::Float(lambda_factor(&shape, alpha)?),
            Cell::Float(cor.upper.value),
            Cell::Float(cor.lower.value),
            Cell::Float(lem1.value),
            Cell::Float(lem2.value),
            Cell::Bool(i == nearest),
        ]);
    }
    Ok(table)
}

/// Point evaluation of the outage probability and every bound at one α,
/// optionally with a seeded empirical estimate alongside.
#[allow(clippy::too_many_arguments)]
pub fn outage_table(
    shape: SystemShape,
    alpha: f64,
    terms: usize,
    mode: ConstantsMode,
    trials: u64,
    seed: u64,
    conditioning: Conditioning,
    cond_impl: ConditioningImpl,
    delta: f64,
) -> Result<CurveTable> {
    let grid = [alpha];
    let series = evaluate_curve(&shape, CurveKind::Theorem1Series, &grid, terms, mode)?;
    let quad = evaluate_curve(&shape, CurveKind::Theorem1Quadrature, &grid, terms, mode)?;
    let lem1 = lemma1_upper_cdf(&shape, alpha)?;
    let lem2 = lemma2_lower_cdf_with(&shape, alpha, UserThreshold::Exact)?;
    let cor = corollary_bounds(&shape, alpha)?;

    let mut header = vec![
        "alpha",
        "rate_bits",
        "theorem1_series",
        "series_converged",
        "theorem1_quadrature",
        "lemma1_upper",
        "lemma2_lower",
        "cor1_upper",
        "cor2_lower",
        "lambda",
    ];
    let mut row = vec![
        Cell::Float(alpha),
        Cell::Float(alpha.log2()),
        Cell::Float(series.values[0]),
        Cell::Bool(series.converged[0]),
        Cell::Float(quad.values[0]),
        Cell::Float(lem1.value),
        Cell::Float(lem2.value),
        Cell::Float(cor.upper.value),
        Cell::Float(cor.lower.value),
        Cell::Float(cor.lambda),
    ];
    if trials > 0 {
        let cfg = SimConfig {
            shape,
            trials,
            master_seed: seed,
            conditioning,
            conditioning_impl: cond_impl,
        };
        let cdf = simulate_cdf(&cfg)?;
        let eps = cdf.dkw_epsilon(delta)?;
        let v = cdf.value_at(alpha);
        header.extend(["empirical", "dkw_lo", "dkw_hi"]);
        row.extend([
            Cell::Float(v),
            Cell::Float((v - eps).max(0.0)),
            Cell::Float((v + eps).min(1.0)),
        ]);
    }
    let mut table = CurveTable::new(&header);
    table.push(row);
    Ok(table)
}

pub struct ScalingReport {
    pub table: CurveTable,
    pub json: serde_json::Value,
}

/// Required user count for a target Λ, with the corollary bounds at the
/// solution and the critical-M round-trip.
pub fn scaling_report(m: u64, t: u32, alpha: f64, target_lambda: f64) -> Result<ScalingReport> {
    let r = scaling_result(m, t, alpha, target_lambda)?;
    let mut table = CurveTable::new(&[
        "eves",
        "t",
        "alpha",
        "target_lambda",
        "required_K",
        "lambda",
        "critical_M",
        "cor1_upper",
        "cor2_lower",
    ]);
    table.push(vec![
        Cell::Int(r.eves),
        Cell::Int(u64::from(r.antennas)),
        Cell::Float(r.alpha),
        Cell::Float(r.target_lambda),
        Cell::Float(r.required_k),
        Cell::Float(r.lambda),
        Cell::Float(r.critical_m),
        Cell::Float(r.cor1_upper.value),
        Cell::Float(r.cor2_lower.value),
    ]);
    let json = serde_json::json!({
        "eves": r.eves,
        "t": r.antennas,
        "alpha": r.alpha,
        "target_lambda": r.target_lambda,
        "required_K": r.required_k,
        "lambda": r.lambda,
        "critical_M": r.critical_m,
        "cor1_upper": r.cor1_upper.value,
        "cor2_lower": r.cor2_lower.value,
    });
    Ok(ScalingReport { table, json })
}

/// Parse an eavesdropper count or `lo:hi[:step]` range.
pub fn parse_m_range(text: &str) -> std::result::Result<(u64, u64, u64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    let parse = |s: &str| {
        s.parse::<u64>()
            .map_err(|e| format!("invalid eavesdropper count {s:?}: {e}"))
    };
    match parts.as_slice() {
        [one] => {
            let m = parse(one)?;
            Ok((m, m, 1))
        }
        [lo, hi] => Ok((parse(lo)?, parse(hi)?, 1)),
        [lo, hi, step] => Ok((parse(lo)?, parse(hi)?, parse(step)?)),
        _ => Err(format!("expected M or lo:hi[:step], got {text:?}")),
    }
}
