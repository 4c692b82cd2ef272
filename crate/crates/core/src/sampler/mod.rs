//! Exact-law and path-discretized random generation for the supported
//! models, including coupled (shared-noise) pairs of the model and its
//! frozen-coefficient approximation.
//!
//! Terminal laws are exact for Brownian, compound Poisson, stable, NIG and
//! variance-gamma components. Tempered-stable (and truncated) measures are
//! simulated by the truncation scheme: jumps above `truncation_eps` arrive
//! as a compound Poisson process sampled from the exact tail density, jumps
//! below are replaced by a centred Gaussian with the matched variance
//! ∫_{|x|<ε} x² ν(dx), and the compensator drift is applied exactly.
//!
//! Stable scale convention: a `Stable { alpha, f_plus, f_minus }` measure is
//! sampled so that the law of the compensated jump part at time t is
//! S_α(((f₊+f₋)t)^{1/α}, (f₊−f₋)/(f₊+f₋), 0) in the 1-parametrization. The
//! stable-like small-jump part of tempered-stable measures follows the same
//! convention: for a side with α > 1 the sampled density carries the factor
//! n_α = 2·Γ(1+α)·sin(πα/2)/π relative to the raw c·e^{−decay·x}/x^{1+α}
//! form, which is exactly the normalization under which the closed-form
//! leading constants of [`crate::asymptotics`] describe the sampled process.
//! Sides with α ≤ 1 and all other families are sampled from their literal
//! densities.

pub(crate) mod dists;

use crate::math;
use crate::model::{Atom, JumpSpec, ModelSpec};
use crate::quad;
use crate::rng::RngStream;
use crate::specialfn::gamma_pos;
use alloc::vec::Vec;
use core::fmt;

/// Default small-jump cutoff for truncation-scheme sampling.
pub const DEFAULT_TRUNCATION_EPS: f64 = 1e-3;
/// Default number of Euler steps for SDE paths.
pub const DEFAULT_N_STEPS: u32 = 64;

/// Sampler construction/usage errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerError {
    /// The requested variant has no exact terminal sampler; use the path
    /// sampler (truncation scheme) instead.
    UnsupportedExact,
    /// SDE path simulation needs at least 16 steps.
    StepCountTooSmall,
    /// Invalid path configuration (nonpositive horizon or cutoff).
    BadConfig,
}

impl fmt::Display for SamplerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplerError::UnsupportedExact => {
                write!(f, "variant requires path discretization; no exact terminal law")
            }
            SamplerError::StepCountTooSmall => write!(f, "SDE simulation needs n_steps >= 16"),
            SamplerError::BadConfig => write!(f, "invalid path configuration"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SamplerError {}

/// Path simulation configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathConfig {
    /// Maturity T > 0.
    pub horizon: f64,
    /// Number of Euler steps (≥ 1; ≥ 16 for SDE models).
    pub n_steps: u32,
    /// Small-jump cutoff ε > 0 for truncation-scheme jump sampling.
    pub truncation_eps: f64,
}

impl PathConfig {
    /// Validated construction.
    pub fn new(horizon: f64, n_steps: u32, truncation_eps: f64) -> Result<Self, SamplerError> {
        if !(horizon > 0.0) || n_steps < 1 || !(truncation_eps > 0.0) {
            return Err(SamplerError::BadConfig);
        }
        Ok(PathConfig { horizon, n_steps, truncation_eps })
    }

    /// Defaults for a given horizon.
    pub fn default_for(horizon: f64) -> Result<Self, SamplerError> {
        Self::new(horizon, DEFAULT_N_STEPS, DEFAULT_TRUNCATION_EPS)
    }
}

/// Normalization factor of the sampled stable-like density for a side with
/// index α: n_α = 2Γ(1+α)sin(πα/2)/π above 1, literal (1) at or below 1.
pub(crate) fn stable_side_norm(alpha: f64) -> f64 {
    if alpha > 1.0 {
        2.0 * gamma_pos(1.0 + alpha) * math::sin(core::f64::consts::FRAC_PI_2 * alpha)
            / core::f64::consts::PI
    } else {
        1.0
    }
}

/// ∫_a^b x^p dx, handling the logarithmic case.
fn power_integral(p: f64, a: f64, b: f64) -> f64 {
    if math::abs(p + 1.0) < 1e-12 {
        math::ln(b / a)
    } else {
        (math::powf(b, p + 1.0) - math::powf(a, p + 1.0)) / (p + 1.0)
    }
}

/// One side of a truncation-scheme tail: density level·x^{−1−α}·e^{−decay·x}
/// on [lo, hi], with `level` already carrying the stable normalization.
#[derive(Debug, Clone, Copy)]
struct TailSide {
    level: f64,
    alpha: f64,
    decay: f64,
    lo: f64,
    hi: f64,
    intensity: f64,
}

impl TailSide {
    fn new(level: f64, alpha: f64, decay: f64, lo: f64, hi: f64) -> Self {
        let intensity = if level == 0.0 {
            0.0
        } else if decay == 0.0 {
            level * power_integral(-1.0 - alpha, lo, hi)
        } else {
            level * tempered_integral(-1.0 - alpha, decay, lo, hi)
        };
        TailSide { level, alpha, decay, lo, hi, intensity }
    }

    /// ∫ x · density dx over the tail.
    fn mean(&self) -> f64 {
        if self.level == 0.0 {
            0.0
        } else if self.decay == 0.0 {
            self.level * power_integral(-self.alpha, self.lo, self.hi)
        } else {
            self.level * tempered_integral(-self.alpha, self.decay, self.lo, self.hi)
        }
    }

    /// One jump size from the normalized tail density.
    fn sample(&self, rng: &mut RngStream) -> f64 {
        loop {
            // Inverse CDF of the pure-power tail on [lo, hi].
            let u = rng.uniform();
            let x = if self.hi.is_finite() {
                let la = math::powf(self.lo, -self.alpha);
                let ha = math::powf(self.hi, -self.alpha);
                math::powf(la - u * (la - ha), -1.0 / self.alpha)
            } else {
                self.lo * math::powf(u, -1.0 / self.alpha)
            };
            if self.decay == 0.0 {
                return x;
            }
            // Tempering by rejection; acceptance is e^{−decay(x−lo)} ≤ 1.
            if rng.uniform() <= math::exp(-self.decay * (x - self.lo)) {
                return x;
            }
        }
    }
}

/// ∫_a^b x^p e^{−λx} dx, delegating to the singularity-aware quadrature.
fn tempered_integral(p: f64, lambda: f64, a: f64, b: f64) -> f64 {
    quad::power_exp_integral(p, lambda, a, b)
}

/// Truncation-scheme sampler for tempered-stable and truncated measures.
#[derive(Debug, Clone)]
pub(crate) struct TruncatedJumps {
    pos: TailSide,
    neg: TailSide,
    /// √(∫_{|x|<ε} x² ν(dx)) per unit time.
    small_sd: f64,
    /// ∫_{|x|>ε} x ν(dx) per unit time (compensator of the tail part).
    tail_mean: f64,
}

impl TruncatedJumps {
    fn new(
        eps: f64,
        cap: f64,
        alpha_plus: f64,
        alpha_minus: f64,
        level_plus: f64,
        level_minus: f64,
        decay_plus: f64,
        decay_minus: f64,
    ) -> Self {
        let np = stable_side_norm(alpha_plus) * level_plus;
        let nm = stable_side_norm(alpha_minus) * level_minus;
        let pos = TailSide::new(np, alpha_plus, decay_plus, eps, cap);
        let neg = TailSide::new(nm, alpha_minus, decay_minus, eps, cap);
        let small_var = |level: f64, alpha: f64, decay: f64| -> f64 {
            if level == 0.0 {
                0.0
            } else if decay == 0.0 {
                level * power_integral(1.0 - alpha, 0.0, eps)
            } else {
                level * quad::power_exp_integral(1.0 - alpha, decay, 0.0, eps)
            }
        };
        let sv = small_var(np, alpha_plus, decay_plus) + small_var(nm, alpha_minus, decay_minus);
        let tail_mean = pos.mean() - neg.mean();
        TruncatedJumps { pos, neg, small_sd: math::sqrt(sv), tail_mean }
    }

    /// Compensated jump increment over a window of length `dt`.
    fn sample(&self, dt: f64, rng: &mut RngStream) -> f64 {
        let mut x = math::sqrt(dt) * self.small_sd * rng.normal() - dt * self.tail_mean;
        let np = dists::poisson(rng, self.pos.intensity * dt);
        for _ in 0..np {
            x += self.pos.sample(rng);
        }
        let nn = dists::poisson(rng, self.neg.intensity * dt);
        for _ in 0..nn {
            x -= self.neg.sample(rng);
        }
        x
    }
}

/// Prepared sampler for the compensated jump part of a frozen Lévy model.
#[derive(Debug, Clone)]
pub(crate) enum JumpIncrement {
    None,
    Atoms {
        total: f64,
        /// (cumulative intensity, size) for inversion sampling.
        cum: Vec<(f64, f64)>,
        mean: f64,
    },
    Stable {
        alpha: f64,
        beta: f64,
        mass: f64,
    },
    Nig {
        rho: f64,
    },
    VarGamma {
        c_plus: f64,
        c_minus: f64,
        decay_plus: f64,
        decay_minus: f64,
        mean: f64,
    },
    Truncated(TruncatedJumps),
}

impl JumpIncrement {
    pub(crate) fn prepare(spec: &JumpSpec, truncation_eps: f64) -> Self {
        match spec {
            JumpSpec::CompoundPoisson { atoms } => {
                if atoms.is_empty() {
                    return JumpIncrement::None;
                }
                let mut cum = Vec::with_capacity(atoms.len());
                let mut total = 0.0;
                let mut mean = 0.0;
                for Atom { size, intensity } in atoms {
                    total += intensity;
                    mean += size * intensity;
                    cum.push((total, *size));
                }
                JumpIncrement::Atoms { total, cum, mean }
            }
            JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at } => {
                let mass = f_plus + f_minus;
                if mass == 0.0 {
                    JumpIncrement::None
                } else if let Some(cap) = truncate_at {
                    JumpIncrement::Truncated(TruncatedJumps::new(
                        truncation_eps.min(0.5 * cap),
                        *cap,
                        *alpha,
                        *alpha,
                        *f_plus,
                        *f_minus,
                        0.0,
                        0.0,
                    ))
                } else {
                    JumpIncrement::Stable {
                        alpha: *alpha,
                        beta: (f_plus - f_minus) / mass,
                        mass,
                    }
                }
            }
            JumpSpec::TemperedStable {
                alpha_plus,
                alpha_minus,
                c_plus,
                c_minus,
                decay_plus,
                decay_minus,
                truncate_at,
            } => {
                if c_plus + c_minus == 0.0 {
                    return JumpIncrement::None;
                }
                let cap = truncate_at.unwrap_or(f64::INFINITY);
                JumpIncrement::Truncated(TruncatedJumps::new(
                    truncation_eps.min(0.5 * cap),
                    cap,
                    *alpha_plus,
                    *alpha_minus,
                    *c_plus,
                    *c_minus,
                    *decay_plus,
                    *decay_minus,
                ))
            }
            JumpSpec::Nig { rho } => JumpIncrement::Nig { rho: *rho },
            JumpSpec::VarianceGamma { c_plus, c_minus, decay_plus, decay_minus } => {
                if c_plus + c_minus == 0.0 {
                    return JumpIncrement::None;
                }
                JumpIncrement::VarGamma {
                    c_plus: *c_plus,
                    c_minus: *c_minus,
                    decay_plus: *decay_plus,
                    decay_minus: *decay_minus,
                    mean: c_plus / decay_plus - c_minus / decay_minus,
                }
            }
        }
    }

    /// Whether the increment is drawn from the exact law (rather than the
    /// truncation scheme).
    pub(crate) fn is_exact_law(&self) -> bool {
        !matches!(self, JumpIncrement::Truncated(_))
    }

    /// One compensated increment over a window of length `dt`.
    pub(crate) fn sample(&self, dt: f64, rng: &mut RngStream) -> f64 {
        match self {
            JumpIncrement::None => 0.0,
            JumpIncrement::Atoms { total, cum, mean } => {
                let n = dists::poisson(rng, total * dt);
                let mut x = -dt * mean;
                for _ in 0..n {
                    let u = rng.uniform() * total;
                    let idx = cum.partition_point(|&(c, _)| c < u);
                    x += cum[idx.min(cum.len() - 1)].1;
                }
                x
            }
            JumpIncrement::Stable { alpha, beta, mass } => {
                let sigma = math::powf(mass * dt, 1.0 / alpha);
                sigma * dists::standard_stable(rng, *alpha, *beta)
            }
            JumpIncrement::Nig { rho } => {
                let delta = rho * dt;
                let subord = dists::inverse_gaussian(rng, delta, delta * delta);
                math::sqrt(subord) * rng.normal()
            }
            JumpIncrement::VarGamma { c_plus, c_minus, decay_plus, decay_minus, mean } => {
                let up = if *c_plus > 0.0 {
                    dists::gamma(rng, c_plus * dt) / decay_plus
                } else {
                    0.0
                };
                let down = if *c_minus > 0.0 {
                    dists::gamma(rng, c_minus * dt) / decay_minus
                } else {
                    0.0
                };
                up - down - dt * mean
            }
            JumpIncrement::Truncated(t) => t.sample(dt, rng),
        }
    }
}

/// Prepared terminal-law sampler for a frozen Lévy model at a fixed horizon.
#[derive(Debug, Clone)]
pub struct TerminalSampler {
    s0: f64,
    gauss_sd: f64,
    jumps: JumpIncrement,
    horizon: f64,
}

impl TerminalSampler {
    /// Exact-law sampler; errors with [`SamplerError::UnsupportedExact`] for
    /// variants that need the truncation scheme (tempered stable, truncated
    /// measures) and for SDE models.
    pub fn exact(model: &ModelSpec, horizon: f64) -> Result<Self, SamplerError> {
        let s = Self::with_truncation(model, horizon, DEFAULT_TRUNCATION_EPS)?;
        if s.jumps.is_exact_law() {
            Ok(s)
        } else {
            Err(SamplerError::UnsupportedExact)
        }
    }

    /// Terminal sampler allowing the truncation scheme with cutoff ε.
    pub fn with_truncation(
        model: &ModelSpec,
        horizon: f64,
        truncation_eps: f64,
    ) -> Result<Self, SamplerError> {
        if !(horizon > 0.0) || !(truncation_eps > 0.0) {
            return Err(SamplerError::BadConfig);
        }
        match model {
            ModelSpec::FrozenLevy { s0, sigma0, jumps } => Ok(TerminalSampler {
                s0: *s0,
                gauss_sd: sigma0 * math::sqrt(horizon),
                jumps: jumps
                    .as_ref()
                    .map(|j| JumpIncrement::prepare(j, truncation_eps))
                    .unwrap_or(JumpIncrement::None),
                horizon,
            }),
            _ => Err(SamplerError::UnsupportedExact),
        }
    }

    /// One draw of the terminal value.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let mut z = self.s0;
        if self.gauss_sd > 0.0 {
            z += self.gauss_sd * rng.normal();
        }
        z + self.jumps.sample(self.horizon, rng)
    }

    /// The horizon the sampler was prepared for.
    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

/// One draw of Z_T for a frozen Lévy model with an exact terminal law.
pub fn sample_terminal(
    model: &ModelSpec,
    horizon: f64,
    rng: &mut RngStream,
) -> Result<f64, SamplerError> {
    TerminalSampler::exact(model, horizon).map(|s| s.sample(rng))
}

/// Prepared coupled-path sampler producing (S_T, Z_T) pairs driven by shared
/// noise.
#[derive(Debug, Clone)]
pub struct PathSampler {
    inner: PathInner,
}

#[derive(Debug, Clone)]
enum PathInner {
    Frozen(TerminalSampler),
    Heston {
        s0: f64,
        v0: f64,
        kappa: f64,
        theta: f64,
        xi: f64,
        rho: f64,
        dt: f64,
        n_steps: u32,
    },
    LevySde {
        s0: f64,
        coeff: crate::model::CoefficientFn,
        scale0: f64,
        sigma_d: f64,
        jumps: JumpIncrement,
        dt: f64,
        n_steps: u32,
    },
}

impl PathSampler {
    /// Validated construction; SDE models require `n_steps` ≥ 16.
    pub fn new(model: &ModelSpec, cfg: &PathConfig) -> Result<Self, SamplerError> {
        match model {
            ModelSpec::FrozenLevy { .. } => Ok(PathSampler {
                // Coefficients are already frozen: S and Z coincide in law and
                // pathwise, and the terminal law needs no time stepping.
                inner: PathInner::Frozen(TerminalSampler::with_truncation(
                    model,
                    cfg.horizon,
                    cfg.truncation_eps,
                )?),
            }),
            ModelSpec::Heston { s0, v0, mean_reversion, long_run_var, vol_of_vol, correlation } => {
                if cfg.n_steps < 16 {
                    return Err(SamplerError::StepCountTooSmall);
                }
                Ok(PathSampler {
                    inner: PathInner::Heston {
                        s0: *s0,
                        v0: *v0,
                        kappa: *mean_reversion,
                        theta: *long_run_var,
                        xi: *vol_of_vol,
                        rho: *correlation,
                        dt: cfg.horizon / cfg.n_steps as f64,
                        n_steps: cfg.n_steps,
                    },
                })
            }
            ModelSpec::LevySde { s0, coefficient, driver_sigma, driver_jumps } => {
                if cfg.n_steps < 16 {
                    return Err(SamplerError::StepCountTooSmall);
                }
                Ok(PathSampler {
                    inner: PathInner::LevySde {
                        s0: *s0,
                        coeff: *coefficient,
                        scale0: coefficient.eval(*s0),
                        sigma_d: *driver_sigma,
                        jumps: driver_jumps
                            .as_ref()
                            .map(|j| JumpIncrement::prepare(j, cfg.truncation_eps))
                            .unwrap_or(JumpIncrement::None),
                        dt: cfg.horizon / cfg.n_steps as f64,
                        n_steps: cfg.n_steps,
                    },
                })
            }
        }
    }

    /// One coupled draw (S_T, Z_T).
    pub fn sample(&self, rng: &mut RngStream) -> (f64, f64) {
        match &self.inner {
            PathInner::Frozen(t) => {
                let z = t.sample(rng);
                (z, z)
            }
            PathInner::Heston { s0, v0, kappa, theta, xi, rho, dt, n_steps } => {
                // Full-truncation Euler for v; exact conditional log-normal
                // step for S given the v path; Z shares the price Brownian.
                let sqrt_dt = math::sqrt(*dt);
                let rho_perp = math::sqrt(1.0 - rho * rho);
                let mut v = *v0;
                let mut log_s = 0.0;
                let mut w_total = 0.0;
                for _ in 0..*n_steps {
                    let z1 = rng.normal();
                    let z2 = rng.normal();
                    let dws = sqrt_dt * z1;
                    let dwv = sqrt_dt * (rho * z1 + rho_perp * z2);
                    let vp = v.max(0.0);
                    let sqrt_vp = math::sqrt(vp);
                    log_s += sqrt_vp * dws - 0.5 * vp * dt;
                    v += kappa * (theta - vp) * dt + xi * sqrt_vp * dwv;
                    w_total += dws;
                }
                let s_t = s0 * math::exp(log_s);
                let z_t = s0 + s0 * math::sqrt(*v0) * w_total;
                (s_t, z_t)
            }
            PathInner::LevySde { s0, coeff, scale0, sigma_d, jumps, dt, n_steps } => {
                let sqrt_dt = math::sqrt(*dt);
                let mut s = *s0;
                let mut z = *s0;
                for _ in 0..*n_steps {
                    let mut dl = 0.0;
                    if *sigma_d > 0.0 {
                        dl += sigma_d * sqrt_dt * rng.normal();
                    }
                    dl += jumps.sample(*dt, rng);
                    s += coeff.eval(s) * dl;
                    z += scale0 * dl;
                }
                (s, z)
            }
        }
    }
}

/// One coupled draw of (S_T, Z_T).
pub fn sample_path(
    model: &ModelSpec,
    cfg: &PathConfig,
    rng: &mut RngStream,
) -> Result<(f64, f64), SamplerError> {
    PathSampler::new(model, cfg).map(|p| p.sample(rng))
}

/// Draw from the Gaussian martingale marginal N(0, T^{1+2ε}), the model with
/// time-varying volatility σ_t = √((1+2ε)t^{2ε}) whose positive part has the
/// exact expectation T^{1/2+ε}/√(2π).
pub fn gaussian_exact_power_model(eps_exponent: f64, horizon: f64, rng: &mut RngStream) -> f64 {
    let sd = math::powf(horizon, 0.5 + eps_exponent);
    sd * rng.normal()
}
