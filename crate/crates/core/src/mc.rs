//! Monte Carlo price estimation with parity-based payoffs, robust intervals
//! for heavy-tailed models, and rate fitting on maturity grids.
//!
//! Determinism contract: every path i draws from the substream keyed by
//! (seed, stream_id, i), accumulation happens in fixed-size units combined in
//! unit order, and the [`Parallelism`] hook only decides which worker
//! computes which unit. Results are therefore bit-identical for any worker
//! count.

use crate::asymptotics::AsymptoticsError;
use crate::math;
use crate::model::{JumpSpec, ModelSpec, StrikeRule};
use crate::rng::RngStream;
use crate::sampler::{PathConfig, PathSampler, SamplerError, TerminalSampler};
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// Paths per accumulation unit for the plain-mean estimator.
const MEAN_UNIT: u64 = 16_384;

/// Monte Carlo errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McError {
    /// The plain mean is invalid for stable-jump models (infinite payoff
    /// variance); use the median-of-means estimator.
    HeavyTailNeedsRobust,
    /// Fewer than 10³ paths requested.
    TooFewPaths,
    /// Median-of-means needs at least 8 blocks (and at most one per path).
    TooFewBlocks,
    /// The maturity grid must be strictly decreasing, geometric, with ≥ 5
    /// points.
    BadGrid,
    /// Rate fitting needs ≥ 4 strictly positive values (with maturities
    /// below 1/e for the log-corrected form).
    DegenerateFit,
    /// Coupled-gap curves need an SDE model (Heston or Lévy-driven).
    RequiresSdeModel,
    /// Underlying sampler failure.
    Sampler(SamplerError),
    /// Classification failure when an asymptote was required.
    Asymptotics(AsymptoticsError),
}

impl fmt::Display for McError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            McError::HeavyTailNeedsRobust => {
                write!(f, "stable-jump payoffs have infinite variance; use median-of-means")
            }
            McError::TooFewPaths => write!(f, "need at least 1000 paths"),
            McError::TooFewBlocks => write!(f, "median-of-means needs 8..=n_paths blocks"),
            McError::BadGrid => {
                write!(f, "maturity grid must be strictly decreasing, geometric, >= 5 points")
            }
            McError::DegenerateFit => write!(f, "rate fit needs >= 4 positive values"),
            McError::RequiresSdeModel => write!(f, "coupled gaps need an SDE model"),
            McError::Sampler(e) => write!(f, "{e}"),
            McError::Asymptotics(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for McError {}

impl From<SamplerError> for McError {
    fn from(e: SamplerError) -> Self {
        McError::Sampler(e)
    }
}

impl From<AsymptoticsError> for McError {
    fn from(e: AsymptoticsError) -> Self {
        McError::Asymptotics(e)
    }
}

/// Point-estimator choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Estimator {
    /// Sample mean with a CLT half-width; requires finite payoff variance.
    Mean,
    /// Median of block means with a distribution-free order-statistic
    /// half-width; valid under a finite first moment only.
    MedianOfMeans {
        /// Number of blocks, ≥ 8.
        blocks: u32,
    },
}

impl Estimator {
    /// Default robust estimator: ⌈2·ln(1/δ)⌉ blocks at δ = 0.025.
    pub fn median_of_means_default() -> Self {
        Estimator::MedianOfMeans { blocks: 8 }
    }

    /// Mean for light-tailed models, median-of-means for stable jumps.
    pub fn default_for(model: &ModelSpec) -> Self {
        if has_untruncated_stable_jumps(model) {
            Estimator::median_of_means_default()
        } else {
            Estimator::Mean
        }
    }
}

/// A Monte Carlo point estimate with a 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct McEstimate {
    /// The point estimate.
    pub value: f64,
    /// 95% half-width (CLT or order-statistic, depending on the estimator).
    pub half_width: f64,
    /// Number of simulated paths.
    pub n_paths: u64,
    /// Estimator used.
    pub estimator: Estimator,
    /// Seed the estimate was produced under.
    pub seed: u64,
}

/// Simulation knobs that are not part of the model itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McParams {
    /// Euler steps for SDE paths.
    pub n_steps: u32,
    /// Small-jump cutoff for truncation-scheme sampling.
    pub truncation_eps: f64,
}

impl Default for McParams {
    fn default() -> Self {
        McParams {
            n_steps: crate::sampler::DEFAULT_N_STEPS,
            truncation_eps: crate::sampler::DEFAULT_TRUNCATION_EPS,
        }
    }
}

/// Per-unit accumulator: sums are combined in unit order, so grouping (not
/// scheduling) determines the floating-point result.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitStats {
    /// Σ payoff.
    pub sum: f64,
    /// Σ payoff².
    pub sumsq: f64,
    /// Paths in the unit.
    pub count: u64,
}

/// Execution hook: computes `job(u)` for u in 0..n_units and returns the
/// results in unit order. Implementations may compute units on any worker in
/// any order as long as the returned vector is indexed by unit.
pub trait Parallelism: Sync {
    /// Runs the unit jobs and collects results in unit order.
    fn run(&self, n_units: u64, job: &(dyn Fn(u64) -> UnitStats + Sync)) -> Vec<UnitStats>;
}

/// Single-threaded execution.
pub struct Serial;

impl Parallelism for Serial {
    fn run(&self, n_units: u64, job: &(dyn Fn(u64) -> UnitStats + Sync)) -> Vec<UnitStats> {
        (0..n_units).map(job).collect()
    }
}

fn has_untruncated_stable_jumps(model: &ModelSpec) -> bool {
    let jumps = match model {
        ModelSpec::FrozenLevy { jumps, .. } => jumps.as_ref(),
        ModelSpec::LevySde { driver_jumps, .. } => driver_jumps.as_ref(),
        ModelSpec::Heston { .. } => None,
    };
    matches!(
        jumps,
        Some(JumpSpec::Stable { truncate_at: None, f_plus, f_minus, .. })
            if f_plus + f_minus > 0.0
    )
}

enum PriceSampler {
    Terminal(TerminalSampler),
    Path(PathSampler),
}

impl PriceSampler {
    fn new(model: &ModelSpec, horizon: f64, params: &McParams) -> Result<Self, McError> {
        Ok(match model {
            ModelSpec::FrozenLevy { .. } => PriceSampler::Terminal(
                TerminalSampler::with_truncation(model, horizon, params.truncation_eps)?,
            ),
            _ => PriceSampler::Path(PathSampler::new(
                model,
                &PathConfig::new(horizon, params.n_steps, params.truncation_eps)
                    .map_err(McError::Sampler)?,
            )?),
        })
    }

    fn terminal(&self, rng: &mut RngStream) -> f64 {
        match self {
            PriceSampler::Terminal(t) => t.sample(rng),
            PriceSampler::Path(p) => p.sample(rng).0,
        }
    }
}

/// Payoff estimator form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffForm {
    /// (|S_T − K| + S₀ − K)/2: the put–call-parity form of the call price,
    /// valid for martingales and lower-variance near the money.
    Parity,
    /// (S_T − K)⁺ directly; retained for cross-checks.
    Direct,
}

/// Monte Carlo driver: simulation knobs plus an execution hook.
pub struct McDriver<'a> {
    /// Simulation parameters.
    pub params: McParams,
    /// Unit executor.
    pub parallelism: &'a dyn Parallelism,
}

impl McDriver<'static> {
    /// Serial driver with default parameters.
    pub fn serial() -> Self {
        McDriver { params: McParams::default(), parallelism: &Serial }
    }
}

impl<'a> McDriver<'a> {
    fn collect(
        &self,
        base: &RngStream,
        units: &[(u64, u64)],
        sample_payoff: &(dyn Fn(&mut RngStream) -> f64 + Sync),
    ) -> Vec<UnitStats> {
        let job = |u: u64| {
            let (start, len) = units[u as usize];
            let mut stats = UnitStats::default();
            for i in 0..len {
                let mut rng = base.substream(start + i);
                let v = sample_payoff(&mut rng);
                stats.sum += v;
                stats.sumsq += v * v;
                stats.count += 1;
            }
            stats
        };
        self.parallelism.run(units.len() as u64, &job)
    }

    /// Estimates the call price E[(S_T − K_T)⁺].
    ///
    /// The default payoff is the parity form; the estimator must be
    /// median-of-means for models with untruncated stable jumps. Each grid of
    /// work is keyed by (seed, stream_id), so repeated calls are bit-exact.
    #[allow(clippy::too_many_arguments)]
    pub fn estimate_call(
        &self,
        model: &ModelSpec,
        strike: &StrikeRule,
        horizon: f64,
        n_paths: u64,
        estimator: Estimator,
        seed: u64,
        stream_id: u64,
    ) -> Result<McEstimate, McError> {
        self.estimate_call_form(
            model,
            strike,
            horizon,
            n_paths,
            estimator,
            seed,
            stream_id,
            PayoffForm::Parity,
        )
    }

    /// As [`Self::estimate_call`] with an explicit payoff form.
    #[allow(clippy::too_many_arguments)]
    pub fn estimate_call_form(
        &self,
        model: &ModelSpec,
        strike: &StrikeRule,
        horizon: f64,
        n_paths: u64,
        estimator: Estimator,
        seed: u64,
        stream_id: u64,
        form: PayoffForm,
    ) -> Result<McEstimate, McError> {
        if n_paths < 1000 {
            return Err(McError::TooFewPaths);
        }
        if matches!(estimator, Estimator::Mean) && has_untruncated_stable_jumps(model) {
            return Err(McError::HeavyTailNeedsRobust);
        }
        let sampler = PriceSampler::new(model, horizon, &self.params)?;
        let s0 = model.s0();
        let k = strike.strike_at(s0, horizon);
        let payoff = move |rng: &mut RngStream| -> f64 {
            let st = sampler.terminal(rng);
            match form {
                PayoffForm::Parity => 0.5 * (math::abs(st - k) + s0 - k),
                PayoffForm::Direct => (st - k).max(0.0),
            }
        };
        let base = RngStream::new(seed, stream_id);
        self.reduce(estimator, n_paths, seed, &base, &payoff)
    }

    fn reduce(
        &self,
        estimator: Estimator,
        n_paths: u64,
        seed: u64,
        base: &RngStream,
        payoff: &(dyn Fn(&mut RngStream) -> f64 + Sync),
    ) -> Result<McEstimate, McError> {
        match estimator {
            Estimator::Mean => {
                let units = plan_units(n_paths, MEAN_UNIT);
                let stats = self.collect(base, &units, payoff);
                let (mut sum, mut sumsq) = (0.0, 0.0);
                for s in &stats {
                    sum += s.sum;
                    sumsq += s.sumsq;
                }
                let n = n_paths as f64;
                let mean = sum / n;
                let var = (sumsq / n - mean * mean).max(0.0);
                Ok(McEstimate {
                    value: mean,
                    half_width: 1.96 * math::sqrt(var / n),
                    n_paths,
                    estimator,
                    seed,
                })
            }
            Estimator::MedianOfMeans { blocks } => {
                if blocks < 8 || blocks as u64 > n_paths {
                    return Err(McError::TooFewBlocks);
                }
                let units = plan_blocks(n_paths, blocks as u64);
                let stats = self.collect(base, &units, payoff);
                let mut means: Vec<f64> =
                    stats.iter().map(|s| s.sum / s.count as f64).collect();
                means.sort_by(|a, b| a.partial_cmp(b).expect("block means are finite"));
                let b = means.len();
                let value = if b % 2 == 0 {
                    0.5 * (means[b / 2 - 1] + means[b / 2])
                } else {
                    means[b / 2]
                };
                let k = median_ci_order(b);
                let half_width = 0.5 * (means[b - k] - means[k - 1]);
                Ok(McEstimate { value, half_width, n_paths, estimator, seed })
            }
        }
    }

    /// Call-price estimates along a strictly decreasing geometric grid, one
    /// independent stream per grid point.
    pub fn price_curve(
        &self,
        model: &ModelSpec,
        strike: &StrikeRule,
        grid: &[f64],
        n_paths: u64,
        estimator: Estimator,
        seed: u64,
    ) -> Result<Vec<(f64, McEstimate)>, McError> {
        validate_grid(grid)?;
        grid.iter()
            .enumerate()
            .map(|(i, &t)| {
                self.estimate_call(model, strike, t, n_paths, estimator, seed, i as u64)
                    .map(|e| (t, e))
            })
            .collect()
    }

    /// E[S_T⁺] estimates of the power-law Gaussian martingale along a grid;
    /// the exact curve is T^{1/2+ε}/√(2π).
    pub fn power_model_curve(
        &self,
        eps_exponent: f64,
        grid: &[f64],
        n_paths: u64,
        seed: u64,
    ) -> Result<Vec<(f64, McEstimate)>, McError> {
        validate_grid(grid)?;
        if n_paths < 1000 {
            return Err(McError::TooFewPaths);
        }
        grid.iter()
            .enumerate()
            .map(|(i, &t)| {
                let payoff = move |rng: &mut RngStream| -> f64 {
                    // Parity at S₀ = K = 0: E[S⁺] = E|S|/2.
                    0.5 * math::abs(crate::sampler::gaussian_exact_power_model(
                        eps_exponent,
                        t,
                        rng,
                    ))
                };
                let base = RngStream::new(seed, i as u64);
                self.reduce(Estimator::Mean, n_paths, seed, &base, &payoff)
                    .map(|e| (t, e))
            })
            .collect()
    }

    /// Coupled-gap curve: estimates E|S_T − Z_T| on the grid from shared-
    /// noise pairs and fits a pure power law.
    pub fn approx_error_curve(
        &self,
        model: &ModelSpec,
        check: &ApproxCheckSpec,
        grid: &[f64],
        n_pairs: u64,
        seed: u64,
    ) -> Result<ApproxErrorReport, McError> {
        if matches!(model, ModelSpec::FrozenLevy { .. }) {
            return Err(McError::RequiresSdeModel);
        }
        validate_grid(grid)?;
        if n_pairs < 1000 {
            return Err(McError::TooFewPaths);
        }
        let mut points = Vec::with_capacity(grid.len());
        for (i, &t) in grid.iter().enumerate() {
            let sampler = PathSampler::new(
                model,
                &PathConfig::new(t, self.params.n_steps, self.params.truncation_eps)
                    .map_err(McError::Sampler)?,
            )?;
            let payoff = move |rng: &mut RngStream| -> f64 {
                let (s, z) = sampler.sample(rng);
                math::abs(s - z)
            };
            let base = RngStream::new(seed, i as u64);
            let est = self.reduce(Estimator::Mean, n_pairs, seed, &base, &payoff)?;
            points.push(CurvePoint { t, value: est.value, half_width: Some(est.half_width) });
        }
        let fit = fit_rate(&points, FitModel::PurePower)?;
        let passed = fit.exponent_hat >= check.predicted_exponent - 0.1;
        Ok(ApproxErrorReport { points, fit, passed })
    }
}

fn plan_units(n_paths: u64, unit: u64) -> Vec<(u64, u64)> {
    let mut units = Vec::new();
    let mut start = 0;
    while start < n_paths {
        let len = unit.min(n_paths - start);
        units.push((start, len));
        start += len;
    }
    units
}

fn plan_blocks(n_paths: u64, blocks: u64) -> Vec<(u64, u64)> {
    // Contiguous blocks of size m or m+1 covering all paths.
    let m = n_paths / blocks;
    let extra = n_paths % blocks;
    let mut units = Vec::with_capacity(blocks as usize);
    let mut start = 0;
    for b in 0..blocks {
        let len = m + u64::from(b < extra);
        units.push((start, len));
        start += len;
    }
    units
}

/// 1-indexed order k of the 95% interval [x_(k), x_(B+1−k)] over B block
/// means, with the Hoeffding indices k = ⌈B/2 − √(B·ln(2/δ)/2)⌉ at δ = 0.05
/// — the order-statistic construction underlying the median-of-means
/// concentration guarantee. Wider than the exact binomial quantile, which
/// keeps heavy-tail block-mean skew inside the band.
fn median_ci_order(b: usize) -> usize {
    let spread = math::sqrt(b as f64 * math::ln(2.0 / 0.05) / 2.0);
    let k = -math::floor(-(b as f64 / 2.0 - spread)); // ceil
    (k.max(1.0) as usize).min(b / 2)
}

fn validate_grid(grid: &[f64]) -> Result<(), McError> {
    if grid.len() < 5 {
        return Err(McError::BadGrid);
    }
    if !grid.iter().all(|&t| t.is_finite() && t > 0.0) {
        return Err(McError::BadGrid);
    }
    let ratio = grid[1] / grid[0];
    if !(ratio < 1.0) {
        return Err(McError::BadGrid);
    }
    for w in grid.windows(2) {
        let r = w[1] / w[0];
        if !(r < 1.0) || math::abs(r - ratio) > 1e-9 * ratio {
            return Err(McError::BadGrid);
        }
    }
    Ok(())
}

/// One rate-curve point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    /// Maturity.
    pub t: f64,
    /// Curve value at t (must be > 0 to be fittable).
    pub value: f64,
    /// Optional 95% half-width used for inverse-squared relative weighting.
    pub half_width: Option<f64>,
}

/// Functional form fitted by [`fit_rate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FitModel {
    /// value = coefficient · T^{exponent}: least squares of log value on
    /// log T.
    PurePower,
    /// value = coefficient · T·|log T| with the exponent pinned to 1.
    PowerWithLog,
}

/// Fitted rate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RateFit {
    /// Which functional form was fitted.
    pub model_class: FitModel,
    /// Multiplicative coefficient (> 0 on success).
    pub coefficient_hat: f64,
    /// Fitted exponent (exactly 1 for the log-corrected form).
    pub exponent_hat: f64,
    /// Weighted coefficient of determination, clamped to [0, 1].
    pub r_squared: f64,
}

/// Coupled-gap curve result.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxErrorReport {
    /// Estimated E|S_T − Z_T| per maturity.
    pub points: Vec<CurvePoint>,
    /// Pure-power fit of the gap curve.
    pub fit: RateFit,
    /// One-sided check: fitted exponent ≥ predicted − 0.1.
    pub passed: bool,
}

/// Coefficient-approximation check data: the decay exponent predicted for
/// E|S_T − Z_T| from Hölder-type coefficient regularity (β, γ).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ApproxCheckSpec {
    /// Moment index β ∈ [1, 2].
    pub beta: f64,
    /// Regularity exponent γ ≥ 0.
    pub gamma: f64,
    /// Predicted gap-decay exponent: (1+γ)/2 with a diffusive part, (1+γ)/β
    /// pure-jump.
    pub predicted_exponent: f64,
}

impl ApproxCheckSpec {
    /// Check for models with a Brownian part (β = 2 route): exponent
    /// (1+γ)/2.
    pub fn diffusive(gamma: f64) -> Result<Self, McError> {
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(McError::DegenerateFit);
        }
        Ok(ApproxCheckSpec { beta: 2.0, gamma, predicted_exponent: (1.0 + gamma) / 2.0 })
    }

    /// Pure-jump check: exponent (1+γ)/β.
    pub fn pure_jump(beta: f64, gamma: f64) -> Result<Self, McError> {
        if !(1.0..=2.0).contains(&beta) || !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(McError::DegenerateFit);
        }
        Ok(ApproxCheckSpec { beta, gamma, predicted_exponent: (1.0 + gamma) / beta })
    }
}

/// Fits a rate curve.
///
/// `PurePower` regresses log value on log T (weighted by inverse squared
/// relative half-widths when all points carry one); `PowerWithLog` holds the
/// exponent at 1 and estimates the coefficient as the weighted mean of
/// value/(T·|log T|), because a free log factor is not identifiable from a
/// handful of dyadic points.
pub fn fit_rate(points: &[CurvePoint], model_class: FitModel) -> Result<RateFit, McError> {
    if points.len() < 4 {
        return Err(McError::DegenerateFit);
    }
    if points.iter().any(|p| !(p.value > 0.0) || !(p.t > 0.0)) {
        return Err(McError::DegenerateFit);
    }
    let weights: Vec<f64> = if points
        .iter()
        .all(|p| matches!(p.half_width, Some(h) if h > 0.0))
    {
        points
            .iter()
            .map(|p| {
                let rel = p.half_width.unwrap() / p.value;
                1.0 / (rel * rel)
            })
            .collect()
    } else {
        points.iter().map(|_| 1.0).collect()
    };

    match model_class {
        FitModel::PurePower => {
            let xs: Vec<f64> = points.iter().map(|p| math::ln(p.t)).collect();
            let ys: Vec<f64> = points.iter().map(|p| math::ln(p.value)).collect();
            let wsum: f64 = weights.iter().sum();
            let xbar = xs.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>() / wsum;
            let ybar = ys.iter().zip(&weights).map(|(y, w)| y * w).sum::<f64>() / wsum;
            let mut sxx = 0.0;
            let mut sxy = 0.0;
            for i in 0..xs.len() {
                sxx += weights[i] * (xs[i] - xbar) * (xs[i] - xbar);
                sxy += weights[i] * (xs[i] - xbar) * (ys[i] - ybar);
            }
            if sxx == 0.0 {
                return Err(McError::DegenerateFit);
            }
            let slope = sxy / sxx;
            let intercept = ybar - slope * xbar;
            let mut ss_res = 0.0;
            let mut ss_tot = 0.0;
            for i in 0..xs.len() {
                let fit = intercept + slope * xs[i];
                ss_res += weights[i] * (ys[i] - fit) * (ys[i] - fit);
                ss_tot += weights[i] * (ys[i] - ybar) * (ys[i] - ybar);
            }
            let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
            Ok(RateFit {
                model_class,
                coefficient_hat: math::exp(intercept),
                exponent_hat: slope,
                r_squared: r2,
            })
        }
        FitModel::PowerWithLog => {
            if points.iter().any(|p| p.t >= 1.0 / core::f64::consts::E) {
                return Err(McError::DegenerateFit);
            }
            let wsum: f64 = weights.iter().sum();
            let coeff = points
                .iter()
                .zip(&weights)
                .map(|(p, w)| w * p.value / (p.t * math::abs(math::ln(p.t))))
                .sum::<f64>()
                / wsum;
            let vbar = points.iter().zip(&weights).map(|(p, w)| w * p.value).sum::<f64>() / wsum;
            let mut ss_res = 0.0;
            let mut ss_tot = 0.0;
            for (p, w) in points.iter().zip(&weights) {
                let fit = coeff * p.t * math::abs(math::ln(p.t));
                ss_res += w * (p.value - fit) * (p.value - fit);
                ss_tot += w * (p.value - vbar) * (p.value - vbar);
            }
            let r2 = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
            Ok(RateFit {
                model_class,
                coefficient_hat: coeff,
                exponent_hat: 1.0,
                r_squared: r2,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Atom;
    use alloc::vec;

    fn two_atom_model() -> ModelSpec {
        ModelSpec::frozen_levy(
            1.0,
            0.0,
            Some(
                JumpSpec::compound_poisson(vec![
                    Atom { size: 0.5, intensity: 1.0 },
                    Atom { size: -0.5, intensity: 1.0 },
                ])
                .unwrap(),
            ),
        )
        .unwrap()
    }

    /// Runs units in reverse order on a single thread; must produce the
    /// identical result to `Serial` since reduction is order-fixed.
    struct Reversed;
    impl Parallelism for Reversed {
        fn run(&self, n_units: u64, job: &(dyn Fn(u64) -> UnitStats + Sync)) -> Vec<UnitStats> {
            let mut out = vec![UnitStats::default(); n_units as usize];
            for u in (0..n_units).rev() {
                out[u as usize] = job(u);
            }
            out
        }
    }

    #[test]
    fn fit_exact_power_law() {
        let points: Vec<CurvePoint> = [0.5, 0.25, 0.125, 0.0625, 0.03125]
            .iter()
            .map(|&t: &f64| CurvePoint { t, value: 3.0 * t.powf(0.7), half_width: None })
            .collect();
        let fit = fit_rate(&points, FitModel::PurePower).unwrap();
        assert!((fit.coefficient_hat - 3.0).abs() < 1e-10);
        assert!((fit.exponent_hat - 0.7).abs() < 1e-10);
        assert!(fit.r_squared > 1.0 - 1e-12);
    }

    #[test]
    fn fit_exact_t_log_t() {
        let points: Vec<CurvePoint> = (6..=12)
            .map(|k| {
                let t = 2.0f64.powi(-k);
                CurvePoint { t, value: t * t.ln().abs(), half_width: None }
            })
            .collect();
        let fit = fit_rate(&points, FitModel::PowerWithLog).unwrap();
        assert!((fit.coefficient_hat - 1.0).abs() < 1e-10);
        assert_eq!(fit.exponent_hat, 1.0);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let bad = [CurvePoint { t: 0.1, value: -1.0, half_width: None }; 5];
        assert_eq!(fit_rate(&bad, FitModel::PurePower), Err(McError::DegenerateFit));
        let short = [CurvePoint { t: 0.1, value: 1.0, half_width: None }; 3];
        assert_eq!(fit_rate(&short, FitModel::PurePower), Err(McError::DegenerateFit));
        // T ≥ 1/e rejected for the log form.
        let wide: Vec<CurvePoint> = [0.8, 0.4, 0.2, 0.1, 0.05]
            .iter()
            .map(|&t: &f64| CurvePoint { t, value: t, half_width: None })
            .collect();
        assert_eq!(fit_rate(&wide, FitModel::PowerWithLog), Err(McError::DegenerateFit));
    }

    #[test]
    fn grid_validation() {
        let ok: Vec<f64> = (4..=8).map(|k| 2.0f64.powi(-k)).collect();
        assert!(validate_grid(&ok).is_ok());
        assert_eq!(validate_grid(&ok[..4]), Err(McError::BadGrid));
        let increasing: Vec<f64> = ok.iter().rev().copied().collect();
        assert_eq!(validate_grid(&increasing), Err(McError::BadGrid));
        let nongeometric = [0.5, 0.25, 0.1, 0.05, 0.025];
        assert_eq!(validate_grid(&nongeometric), Err(McError::BadGrid));
    }

    #[test]
    fn median_ci_order_values() {
        // 64 blocks: k = ⌈32 − √(64·ln 40/2)⌉ = ⌈21.14⌉ = 22.
        assert_eq!(median_ci_order(64), 22);
        // 8 blocks: the full range.
        assert_eq!(median_ci_order(8), 1);
        // The interval indices stay inside the sample.
        for b in 8..200 {
            let k = median_ci_order(b);
            assert!(k >= 1 && b + 1 - k > b / 2, "b={b} k={k}");
        }
    }

    #[test]
    fn deterministic_across_partitioning() {
        let model = two_atom_model();
        let strike = StrikeRule::atm();
        let serial = McDriver::serial();
        let rev = McDriver { params: McParams::default(), parallelism: &Reversed };
        let a = serial
            .estimate_call(&model, &strike, 0.02, 50_000, Estimator::Mean, 9, 0)
            .unwrap();
        let b = rev
            .estimate_call(&model, &strike, 0.02, 50_000, Estimator::Mean, 9, 0)
            .unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.half_width.to_bits(), b.half_width.to_bits());
        // And a different seed changes the value.
        let c = serial
            .estimate_call(&model, &strike, 0.02, 50_000, Estimator::Mean, 10, 0)
            .unwrap();
        assert_ne!(a.value.to_bits(), c.value.to_bits());
    }

    #[test]
    fn trivial_model_estimates_exactly_zero() {
        let model = ModelSpec::brownian(1.0, 0.0).unwrap();
        let est = McDriver::serial()
            .estimate_call(&model, &StrikeRule::atm(), 0.01, 2000, Estimator::Mean, 1, 0)
            .unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.half_width, 0.0);
        let est = McDriver::serial()
            .estimate_call(
                &model,
                &StrikeRule::atm(),
                0.01,
                2000,
                Estimator::MedianOfMeans { blocks: 8 },
                1,
                0,
            )
            .unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.half_width, 0.0);
    }

    #[test]
    fn brownian_estimate_matches_exact_coefficient() {
        // Pure Brownian: E[(S_T − S₀)⁺] = σ√(T/2π) exactly, so the estimate
        // must sit within 3 half-widths with no asymptotic bias at all.
        let model = ModelSpec::brownian(1.0, 0.2).unwrap();
        let est = McDriver::serial()
            .estimate_call(&model, &StrikeRule::atm(), 0.01, 200_000, Estimator::Mean, 42, 0)
            .unwrap();
        let exact = 0.2 * (0.01f64).sqrt() / (2.0 * core::f64::consts::PI).sqrt();
        assert!(
            (est.value - exact).abs() < 3.0 * est.half_width,
            "{} vs {exact} ± {}",
            est.value,
            est.half_width
        );
    }

    #[test]
    fn parity_and_direct_agree() {
        let models = [
            ModelSpec::brownian(1.0, 0.3).unwrap(),
            two_atom_model(),
            ModelSpec::frozen_levy(1.0, 0.1, Some(JumpSpec::nig(1.0).unwrap())).unwrap(),
        ];
        let d = McDriver::serial();
        for (i, model) in models.iter().enumerate() {
            let a = d
                .estimate_call_form(
                    model,
                    &StrikeRule::atm(),
                    0.05,
                    100_000,
                    Estimator::Mean,
                    31,
                    i as u64,
                    PayoffForm::Parity,
                )
                .unwrap();
            let b = d
                .estimate_call_form(
                    model,
                    &StrikeRule::atm(),
                    0.05,
                    100_000,
                    Estimator::Mean,
                    77,
                    i as u64,
                    PayoffForm::Direct,
                )
                .unwrap();
            let combined = (a.half_width.powi(2) + b.half_width.powi(2)).sqrt();
            assert!(
                (a.value - b.value).abs() < 3.0 * combined,
                "model {i}: parity {} vs direct {}",
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn heavy_tail_guard() {
        let model = ModelSpec::frozen_levy(
            1.0,
            0.0,
            Some(JumpSpec::stable(1.5, 1.0, 1.0).unwrap()),
        )
        .unwrap();
        let d = McDriver::serial();
        assert_eq!(
            d.estimate_call(&model, &StrikeRule::atm(), 0.01, 2000, Estimator::Mean, 1, 0),
            Err(McError::HeavyTailNeedsRobust)
        );
        assert!(d
            .estimate_call(
                &model,
                &StrikeRule::atm(),
                0.01,
                2000,
                Estimator::median_of_means_default(),
                1,
                0
            )
            .is_ok());
        assert_eq!(Estimator::default_for(&model), Estimator::MedianOfMeans { blocks: 8 });
    }

    #[test]
    fn price_curve_reproducible() {
        let model = two_atom_model();
        let grid: Vec<f64> = (4..=8).map(|k| 2.0f64.powi(-k)).collect();
        let d = McDriver::serial();
        let a = d
            .price_curve(&model, &StrikeRule::atm(), &grid, 5000, Estimator::Mean, 3)
            .unwrap();
        let b = d
            .price_curve(&model, &StrikeRule::atm(), &grid, 5000, Estimator::Mean, 3)
            .unwrap();
        assert_eq!(a.len(), 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.1.value.to_bits(), y.1.value.to_bits());
        }
    }

    #[test]
    fn power_model_curve_fits_three_quarters() {
        let grid: Vec<f64> = (4..=10).map(|k| 2.0f64.powi(-k)).collect();
        let d = McDriver::serial();
        let curve = d.power_model_curve(0.25, &grid, 100_000, 5).unwrap();
        let points: Vec<CurvePoint> = curve
            .iter()
            .map(|(t, e)| CurvePoint { t: *t, value: e.value, half_width: Some(e.half_width) })
            .collect();
        let fit = fit_rate(&points, FitModel::PurePower).unwrap();
        assert!((fit.exponent_hat - 0.75).abs() < 0.02, "exponent {}", fit.exponent_hat);
        let expect = 1.0 / (2.0 * core::f64::consts::PI).sqrt();
        assert!(
            (fit.coefficient_hat - expect).abs() < 0.05 * expect,
            "coefficient {}",
            fit.coefficient_hat
        );
    }

    #[test]
    fn coverage_sanity_gaussian() {
        // Nominal 95% intervals cover the exact Brownian price in at least
        // 90 of 100 repetitions.
        let model = ModelSpec::brownian(1.0, 0.2).unwrap();
        let exact = 0.2 * (0.01f64).sqrt() / (2.0 * core::f64::consts::PI).sqrt();
        let d = McDriver::serial();
        let mut covered = 0;
        for rep in 0..100 {
            let est = d
                .estimate_call(&model, &StrikeRule::atm(), 0.01, 20_000, Estimator::Mean, 1234, rep)
                .unwrap();
            if (est.value - exact).abs() <= est.half_width {
                covered += 1;
            }
        }
        assert!(covered >= 90, "covered {covered}/100");
    }

    #[test]
    fn approx_error_requires_sde() {
        let model = two_atom_model();
        let grid: Vec<f64> = (4..=8).map(|k| 2.0f64.powi(-k)).collect();
        let check = ApproxCheckSpec::diffusive(1.0).unwrap();
        assert_eq!(
            McDriver::serial()
                .approx_error_curve(&model, &check, &grid, 2000, 1)
                .err(),
            Some(McError::RequiresSdeModel)
        );
    }

    #[test]
    fn approx_error_gbm_linear_rate() {
        // Geometric Brownian motion vs its frozen Gaussian: gap decays like
        // T (predicted exponent 1 from the square-integrable route).
        let model = ModelSpec::levy_sde(
            1.0,
            crate::model::CoefficientFn::Linear { a: 1.0 },
            0.3,
            None,
        )
        .unwrap();
        let grid: Vec<f64> = (4..=10).map(|k| 2.0f64.powi(-k)).collect();
        let check = ApproxCheckSpec::diffusive(1.0).unwrap();
        let report = McDriver::serial()
            .approx_error_curve(&model, &check, &grid, 20_000, 7)
            .unwrap();
        assert!(
            report.fit.exponent_hat >= 0.9,
            "fitted exponent {}",
            report.fit.exponent_hat
        );
        assert!(report.passed);
    }
}
