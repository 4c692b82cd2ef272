//! Command orchestration shared by the binary and the test suites.

use crate::config::ConfigError;
use crate::report::{
    ClassificationBlock, ImpliedVolBlock, MaturityRow, RunReport, SettingsBlock, Verdict,
};
use smalltime_core::asymptotics::{classify, implied_vol_asymptote, leading_price};
use smalltime_core::impliedvol::atm_implied_vol;
use smalltime_core::mc::{
    fit_rate, CurvePoint, Estimator, FitModel, McDriver, McError, McParams, Parallelism,
};
use smalltime_core::model::{ModelSpec, OrderClass, StrikeRule};

/// Errors of a command run, partitioned by exit code.
#[derive(Debug)]
pub enum RunError {
    /// Exit code 1: unusable input.
    Config(ConfigError),
    /// Exit code 2: a numeric/model operation failed.
    Numeric(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numeric(m) => write!(f, "numeric error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

fn numeric(e: impl std::fmt::Display) -> RunError {
    RunError::Numeric(e.to_string())
}

/// The default verification grid: dyadic maturities 2⁻⁴..2⁻⁸.
pub fn default_grid() -> Vec<f64> {
    (4..=8).map(|k| 2.0f64.powi(-k)).collect()
}

fn classification_block(
    model: &ModelSpec,
    strike: &StrikeRule,
) -> Result<ClassificationBlock, RunError> {
    let result = classify(model, strike).map_err(numeric)?;
    Ok(ClassificationBlock {
        order: result.order,
        coefficient: result.coefficient,
        moneyness_theta: result.moneyness_theta,
        implied_vol_asymptote: implied_vol_asymptote(model).ok(),
    })
}

/// `analyze`: classification only, no simulation.
pub fn analyze(model: &ModelSpec, theta: f64) -> Result<RunReport, RunError> {
    let strike = StrikeRule::new(theta).map_err(numeric)?;
    let mut report = RunReport::new("analyze");
    report.classification = Some(classification_block(model, &strike)?);
    report.model = Some(model.clone());
    Ok(report)
}

/// Settings of a verification run.
#[derive(Debug, Clone)]
pub struct VerifySettings {
    /// Degree of moneyness.
    pub theta: f64,
    /// Strictly decreasing geometric maturity grid.
    pub grid: Vec<f64>,
    /// Paths per maturity.
    pub n_paths: u64,
    /// Master seed.
    pub seed: u64,
    /// Ratio tolerance at the two smallest maturities.
    pub tol: f64,
    /// Allowed |exponent_hat − expected|.
    pub exp_margin: f64,
    /// Override of the leading coefficient (negative-control hook).
    pub expect_coeff: Option<f64>,
    /// Simulation knobs.
    pub params: McParams,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            theta: 0.0,
            grid: default_grid(),
            n_paths: 100_000,
            seed: 0,
            tol: 0.1,
            exp_margin: 0.1,
            expect_coeff: None,
            params: McParams::default(),
        }
    }
}

/// `verify`: price curve + rate fit + asymptote comparison with a verdict.
pub fn verify(
    model: &ModelSpec,
    settings: &VerifySettings,
    parallelism: &dyn Parallelism,
) -> Result<RunReport, RunError> {
    let strike = StrikeRule::new(settings.theta).map_err(numeric)?;
    let classification = classification_block(model, &strike)?;
    let coefficient = settings.expect_coeff.unwrap_or(classification.coefficient);
    let order = classification.order;

    let driver = McDriver { params: settings.params, parallelism };
    let estimator = Estimator::default_for(model);
    let curve = driver
        .price_curve(model, &strike, &settings.grid, settings.n_paths, estimator, settings.seed)
        .map_err(numeric)?;

    let mut rows = Vec::with_capacity(curve.len());
    for (t, est) in &curve {
        let asym = leading_price(
            &smalltime_core::model::AsymptoticResult {
                order,
                coefficient,
                moneyness_theta: settings.theta,
            },
            *t,
        )
        .map_err(numeric)?;
        rows.push(MaturityRow {
            t: *t,
            mc_value: est.value,
            half_width: est.half_width,
            asymptote_value: Some(asym),
            ratio: if asym != 0.0 { Some(est.value / asym) } else { None },
        });
    }

    // Trivial models verify by the price being exactly zero.
    let verdict = if order == OrderClass::Trivial {
        if rows.iter().all(|r| r.mc_value == 0.0) {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    } else {
        let (fit_model, expected_exponent) = match order {
            OrderClass::SqrtT => (FitModel::PurePower, 0.5),
            OrderClass::LinearT => (FitModel::PurePower, 1.0),
            OrderClass::PowerT { exponent } => (FitModel::PurePower, exponent),
            OrderClass::TLogT => (FitModel::PowerWithLog, 1.0),
            OrderClass::Trivial => unreachable!(),
        };
        let points: Vec<CurvePoint> = rows
            .iter()
            .map(|r| CurvePoint {
                t: r.t,
                value: r.mc_value,
                half_width: Some(r.half_width),
            })
            .collect();
        match fit_rate(&points, fit_model) {
            Err(McError::DegenerateFit) => Verdict::Inconclusive,
            Err(e) => return Err(numeric(e)),
            Ok(fit) => {
                // The two smallest maturities sit at the end of the
                // (decreasing) grid.
                let smallest = &rows[rows.len() - 2..];
                let underpowered = smallest.iter().any(|r| match r.asymptote_value {
                    Some(a) if a > 0.0 => r.half_width / a > settings.tol,
                    _ => true,
                });
                let verdict = if underpowered {
                    Verdict::Inconclusive
                } else {
                    let exponent_ok =
                        (fit.exponent_hat - expected_exponent).abs() <= settings.exp_margin;
                    let ratios_ok = smallest.iter().all(|r| {
                        r.ratio
                            .map(|q| (q - 1.0).abs() <= settings.tol)
                            .unwrap_or(false)
                    });
                    if exponent_ok && ratios_ok {
                        Verdict::Consistent
                    } else {
                        Verdict::Inconsistent
                    }
                };
                let mut report = RunReport::new("verify");
                report.model = Some(model.clone());
                report.seed = Some(settings.seed);
                report.settings = Some(settings_block(settings));
                report.classification = Some(classification);
                report.rows = rows;
                report.fit = Some(fit);
                report.verdict = Some(verdict);
                return Ok(report);
            }
        }
    };

    let mut report = RunReport::new("verify");
    report.model = Some(model.clone());
    report.seed = Some(settings.seed);
    report.settings = Some(settings_block(settings));
    report.classification = Some(classification);
    report.rows = rows;
    report.verdict = Some(verdict);
    Ok(report)
}

fn settings_block(s: &VerifySettings) -> SettingsBlock {
    SettingsBlock {
        n_paths: Some(s.n_paths),
        grid: Some(s.grid.clone()),
        tol: Some(s.tol),
        exp_margin: Some(s.exp_margin),
        n_steps: Some(s.params.n_steps),
        truncation_eps: Some(s.params.truncation_eps),
    }
}

/// `mc-price`: one Monte Carlo price at a single maturity.
#[allow(clippy::too_many_arguments)]
pub fn mc_price(
    model: &ModelSpec,
    theta: f64,
    maturity: f64,
    n_paths: u64,
    estimator: Estimator,
    seed: u64,
    params: McParams,
    parallelism: &dyn Parallelism,
) -> Result<RunReport, RunError> {
    let strike = StrikeRule::new(theta).map_err(numeric)?;
    let driver = McDriver { params, parallelism };
    let est = driver
        .estimate_call(model, &strike, maturity, n_paths, estimator, seed, 0)
        .map_err(numeric)?;
    let classification = classification_block(model, &strike).ok();
    let asym = classification.as_ref().map(|c| {
        c.order.rate(maturity) * c.coefficient
    });
    let mut report = RunReport::new("mc-price");
    report.model = Some(model.clone());
    report.seed = Some(seed);
    report.settings = Some(SettingsBlock {
        n_paths: Some(n_paths),
        grid: Some(vec![maturity]),
        tol: None,
        exp_margin: None,
        n_steps: Some(params.n_steps),
        truncation_eps: Some(params.truncation_eps),
    });
    report.rows.push(MaturityRow {
        t: maturity,
        mc_value: est.value,
        half_width: est.half_width,
        asymptote_value: asym,
        ratio: match asym {
            Some(a) if a != 0.0 => Some(est.value / a),
            _ => None,
        },
    });
    report.classification = classification;
    Ok(report)
}

/// `implied-vol`: exact ATM Black–Scholes inversion.
pub fn implied_vol_report(price: f64, s0: f64, maturity: f64) -> Result<RunReport, RunError> {
    let result = atm_implied_vol(price, s0, maturity).map_err(numeric)?;
    let mut report = RunReport::new("implied-vol");
    report.implied_vol = Some(ImpliedVolBlock {
        sigma_impl: if result.is_unbounded() { None } else { Some(result.sigma_impl) },
        unbounded: result.is_unbounded(),
        residual: result.residual,
        iterations: result.iterations,
    });
    Ok(report)
}

/// `fit-rate`: fit a rate curve from CSV text with rows `T,value` or
/// `T,value,half_width`.
pub fn fit_rate_report(csv: &str, model_class: FitModel) -> Result<RunReport, RunError> {
    let mut points = Vec::new();
    for (lineno, line) in csv.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 2 && cols.len() != 3 {
            return Err(RunError::Config(ConfigError::Io(format!(
                "line {}: expected `T,value[,half_width]`",
                lineno + 1
            ))));
        }
        let parse = |s: &str| -> Result<f64, RunError> {
            s.parse::<f64>().map_err(|_| {
                RunError::Config(ConfigError::Io(format!(
                    "line {}: `{s}` is not a number",
                    lineno + 1
                )))
            })
        };
        points.push(CurvePoint {
            t: parse(cols[0])?,
            value: parse(cols[1])?,
            half_width: if cols.len() == 3 { Some(parse(cols[2])?) } else { None },
        });
    }
    let fit = fit_rate(&points, model_class).map_err(numeric)?;
    let mut report = RunReport::new("fit-rate");
    report.fit = Some(fit);
    Ok(report)
}
