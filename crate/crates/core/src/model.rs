//! Model, jump-measure and strike domain types.
//!
//! Jump measures are specified directly as the Lévy measure ν of the frozen
//! process (the pushforward of the compensator under the time-zero jump
//! coefficient), so all leading-order constants are functions of the data
//! stored here. Every type validates its parameter ranges at construction;
//! the operations in this crate assume validated inputs.

use crate::math;
use crate::quad;
use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

/// A violated construction invariant or measure-level error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelError {
    /// A parameter is outside its admissible range; names the field and the
    /// range that was violated.
    OutOfRange {
        /// Field that failed validation.
        field: &'static str,
        /// The admissible range, human readable.
        constraint: &'static str,
    },
    /// ∫|x| ν(dx) = ∞, so the first absolute moment of the measure does not
    /// exist (stable-like mass with α ≥ 1 at the origin).
    NonIntegrable,
    /// A finite-variation constant was requested for a measure of infinite
    /// variation.
    NotFiniteVariation,
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::OutOfRange { field, constraint } => {
                write!(f, "parameter `{field}` violates {constraint}")
            }
            ModelError::NonIntegrable => write!(f, "jump measure has no first absolute moment"),
            ModelError::NotFiniteVariation => {
                write!(f, "jump measure is not of finite variation")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

fn check(ok: bool, field: &'static str, constraint: &'static str) -> Result<(), ModelError> {
    if ok {
        Ok(())
    } else {
        Err(ModelError::OutOfRange { field, constraint })
    }
}

fn finite(x: f64, field: &'static str) -> Result<(), ModelError> {
    check(x.is_finite(), field, "finite real")
}

/// One jump atom of a compound Poisson measure.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Atom {
    /// Jump size, nonzero.
    pub size: f64,
    /// Arrival intensity per unit time, positive.
    pub intensity: f64,
}

/// A Lévy jump measure in one of the supported parametric families.
///
/// Densities are with respect to Lebesgue measure on ℝ \ {0}:
///
/// * `CompoundPoisson` — finitely many atoms (size, intensity);
/// * `Stable` — g(x)/|x|^{1+α} with g = f₋ on x < 0 and f₊ on x > 0, in the
///   scale convention where the law of the compensated process at time t is
///   the stable law S_α(((f₊+f₋)t)^{1/α}, (f₊−f₋)/(f₊+f₋), 0) of the
///   1-parametrization (see [`crate::sampler`] for the sampled form);
/// * `TemperedStable` — c± e^{−decay±·|x|}/|x|^{1+α±}, same scale convention
///   for the stable-like small-jump part;
/// * `Nig` — (ρ/π|x|)·K₁(|x|), the symmetric normal inverse Gaussian;
/// * `VarianceGamma` — c± e^{−decay±·|x|}/|x|.
///
/// Stable and tempered-stable measures accept an optional truncation radius
/// `truncate_at`; the measure is then restricted to |x| ≤ radius, which makes
/// any parameter choice integrable (samplers compensate the drift).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum JumpSpec {
    /// Finitely many jump atoms.
    CompoundPoisson {
        /// The atoms; an empty list is the zero measure.
        atoms: Vec<Atom>,
    },
    /// α-stable measure.
    Stable {
        /// Stability index, in (0, 2).
        alpha: f64,
        /// Density level on x > 0, ≥ 0.
        f_plus: f64,
        /// Density level on x < 0, ≥ 0.
        f_minus: f64,
        /// Optional truncation radius, > 0.
        #[cfg_attr(feature = "serde", serde(default))]
        truncate_at: Option<f64>,
    },
    /// Tempered-stable (CGMY-style) measure.
    TemperedStable {
        /// Small-jump index on x > 0, in (0, 2).
        alpha_plus: f64,
        /// Small-jump index on x < 0, in (0, 2).
        alpha_minus: f64,
        /// Level on x > 0, ≥ 0.
        c_plus: f64,
        /// Level on x < 0, ≥ 0.
        c_minus: f64,
        /// Exponential tempering rate on x > 0, > 0.
        decay_plus: f64,
        /// Exponential tempering rate on x < 0, > 0.
        decay_minus: f64,
        /// Optional truncation radius, > 0.
        #[cfg_attr(feature = "serde", serde(default))]
        truncate_at: Option<f64>,
    },
    /// Symmetric normal inverse Gaussian measure.
    Nig {
        /// Scale parameter ρ > 0; the density is (ρ/π|x|)·K₁(|x|).
        rho: f64,
    },
    /// Variance gamma measure.
    VarianceGamma {
        /// Level on x > 0, ≥ 0.
        c_plus: f64,
        /// Level on x < 0, ≥ 0.
        c_minus: f64,
        /// Exponential decay on x > 0, > 0.
        decay_plus: f64,
        /// Exponential decay on x < 0, > 0.
        decay_minus: f64,
    },
}

impl JumpSpec {
    /// Compound Poisson measure from jump atoms.
    pub fn compound_poisson(atoms: Vec<Atom>) -> Result<Self, ModelError> {
        let spec = JumpSpec::CompoundPoisson { atoms };
        spec.validate()?;
        Ok(spec)
    }

    /// Untruncated stable measure; requires α ∈ (1, 2) when mass is present.
    pub fn stable(alpha: f64, f_plus: f64, f_minus: f64) -> Result<Self, ModelError> {
        let spec = JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at: None };
        spec.validate()?;
        Ok(spec)
    }

    /// Stable measure truncated at |x| ≤ `radius`; any α ∈ (0, 2) is allowed.
    pub fn stable_truncated(
        alpha: f64,
        f_plus: f64,
        f_minus: f64,
        radius: f64,
    ) -> Result<Self, ModelError> {
        let spec = JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at: Some(radius) };
        spec.validate()?;
        Ok(spec)
    }

    /// Symmetric tempered-stable measure (both sides share α, c, decay).
    pub fn tempered_stable_symmetric(alpha: f64, c: f64, decay: f64) -> Result<Self, ModelError> {
        let spec = JumpSpec::TemperedStable {
            alpha_plus: alpha,
            alpha_minus: alpha,
            c_plus: c,
            c_minus: c,
            decay_plus: decay,
            decay_minus: decay,
            truncate_at: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// General tempered-stable measure.
    #[allow(clippy::too_many_arguments)]
    pub fn tempered_stable(
        alpha_plus: f64,
        alpha_minus: f64,
        c_plus: f64,
        c_minus: f64,
        decay_plus: f64,
        decay_minus: f64,
        truncate_at: Option<f64>,
    ) -> Result<Self, ModelError> {
        let spec = JumpSpec::TemperedStable {
            alpha_plus,
            alpha_minus,
            c_plus,
            c_minus,
            decay_plus,
            decay_minus,
            truncate_at,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Symmetric NIG measure with scale ρ > 0.
    pub fn nig(rho: f64) -> Result<Self, ModelError> {
        let spec = JumpSpec::Nig { rho };
        spec.validate()?;
        Ok(spec)
    }

    /// Variance gamma measure.
    pub fn variance_gamma(
        c_plus: f64,
        c_minus: f64,
        decay_plus: f64,
        decay_minus: f64,
    ) -> Result<Self, ModelError> {
        let spec = JumpSpec::VarianceGamma { c_plus, c_minus, decay_plus, decay_minus };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every construction invariant, naming the violated range.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            JumpSpec::CompoundPoisson { atoms } => {
                for a in atoms {
                    finite(a.size, "size")?;
                    check(a.size != 0.0, "size", "nonzero real")?;
                    finite(a.intensity, "intensity")?;
                    check(a.intensity > 0.0, "intensity", "positive real")?;
                }
                Ok(())
            }
            JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at } => {
                finite(*alpha, "alpha")?;
                check(*alpha > 0.0 && *alpha < 2.0, "alpha", "(0, 2)")?;
                check(f_plus.is_finite() && *f_plus >= 0.0, "f_plus", ">= 0")?;
                check(f_minus.is_finite() && *f_minus >= 0.0, "f_minus", ">= 0")?;
                if let Some(r) = truncate_at {
                    check(r.is_finite() && *r > 0.0, "truncate_at", "positive real")?;
                } else {
                    // The untruncated measure must satisfy ∫_{|x|>1} |x| ν(dx) < ∞,
                    // otherwise the compensated process is not a martingale.
                    check(
                        *alpha > 1.0 || f_plus + f_minus == 0.0,
                        "alpha",
                        "(1, 2) unless truncated or massless",
                    )?;
                }
                Ok(())
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
                check(
                    alpha_plus.is_finite() && *alpha_plus > 0.0 && *alpha_plus < 2.0,
                    "alpha_plus",
                    "(0, 2)",
                )?;
                check(
                    alpha_minus.is_finite() && *alpha_minus > 0.0 && *alpha_minus < 2.0,
                    "alpha_minus",
                    "(0, 2)",
                )?;
                check(c_plus.is_finite() && *c_plus >= 0.0, "c_plus", ">= 0")?;
                check(c_minus.is_finite() && *c_minus >= 0.0, "c_minus", ">= 0")?;
                check(
                    decay_plus.is_finite() && *decay_plus > 0.0,
                    "decay_plus",
                    "positive real",
                )?;
                check(
                    decay_minus.is_finite() && *decay_minus > 0.0,
                    "decay_minus",
                    "positive real",
                )?;
                if let Some(r) = truncate_at {
                    check(r.is_finite() && *r > 0.0, "truncate_at", "positive real")?;
                }
                Ok(())
            }
            JumpSpec::Nig { rho } => check(rho.is_finite() && *rho > 0.0, "rho", "positive real"),
            JumpSpec::VarianceGamma { c_plus, c_minus, decay_plus, decay_minus } => {
                check(c_plus.is_finite() && *c_plus >= 0.0, "c_plus", ">= 0")?;
                check(c_minus.is_finite() && *c_minus >= 0.0, "c_minus", ">= 0")?;
                check(
                    decay_plus.is_finite() && *decay_plus > 0.0,
                    "decay_plus",
                    "positive real",
                )?;
                check(
                    decay_minus.is_finite() && *decay_minus > 0.0,
                    "decay_minus",
                    "positive real",
                )?;
                Ok(())
            }
        }
    }

    /// True when the measure carries no mass at all.
    pub fn is_zero_measure(&self) -> bool {
        match self {
            JumpSpec::CompoundPoisson { atoms } => atoms.is_empty(),
            JumpSpec::Stable { f_plus, f_minus, .. } => f_plus + f_minus == 0.0,
            JumpSpec::TemperedStable { c_plus, c_minus, .. } => c_plus + c_minus == 0.0,
            JumpSpec::Nig { .. } => false,
            JumpSpec::VarianceGamma { c_plus, c_minus, .. } => c_plus + c_minus == 0.0,
        }
    }
}

/// Small-jump boundary data of a jump measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StableLikeData {
    /// The measure is of finite variation with no stable-like scaling at 0.
    FiniteVariation,
    /// Stable-like small jumps with one-sided indices and density limits.
    StableLike {
        /// Index on x > 0.
        alpha_plus: f64,
        /// Index on x < 0.
        alpha_minus: f64,
        /// Density limit f(0+).
        f_plus: f64,
        /// Density limit f(0−).
        f_minus: f64,
    },
}

/// Extracts the small-jump boundary data (α₊, α₋, f₊, f₋) of a measure.
///
/// Total function: compound Poisson and variance gamma report the
/// finite-variation flag; tempered-stable keeps its raw (α±, c±) since the
/// tempering factor tends to 1 at the origin; NIG is (1, 1, ρ/π, ρ/π) from
/// x·K₁(x) → 1. Truncation does not change boundary data.
pub fn stable_like_data(jumps: &JumpSpec) -> StableLikeData {
    match jumps {
        JumpSpec::CompoundPoisson { .. } | JumpSpec::VarianceGamma { .. } => {
            StableLikeData::FiniteVariation
        }
        JumpSpec::Stable { alpha, f_plus, f_minus, .. } => StableLikeData::StableLike {
            alpha_plus: *alpha,
            alpha_minus: *alpha,
            f_plus: *f_plus,
            f_minus: *f_minus,
        },
        JumpSpec::TemperedStable {
            alpha_plus, alpha_minus, c_plus, c_minus, ..
        } => StableLikeData::StableLike {
            alpha_plus: *alpha_plus,
            alpha_minus: *alpha_minus,
            f_plus: *c_plus,
            f_minus: *c_minus,
        },
        JumpSpec::Nig { rho } => {
            let f = rho / core::f64::consts::PI;
            StableLikeData::StableLike { alpha_plus: 1.0, alpha_minus: 1.0, f_plus: f, f_minus: f }
        }
    }
}

/// First absolute moment and mean of a jump measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbsMoment {
    /// μ = ∫ |x| ν(dx).
    pub mu: f64,
    /// ∫ x ν(dx).
    pub mean: f64,
}

/// μ = ∫|x|ν(dx) and ∫x ν(dx), by closed form where available, otherwise by
/// adaptive quadrature (truncated variants).
///
/// Errors with [`ModelError::NonIntegrable`] when ∫|x|ν(dx) = ∞, i.e. for
/// stable-like mass with α ≥ 1 at the origin (whether truncated or not) —
/// this includes every valid untruncated `Stable` and the NIG measure.
pub fn first_abs_moment(jumps: &JumpSpec) -> Result<AbsMoment, ModelError> {
    match jumps {
        JumpSpec::CompoundPoisson { atoms } => {
            let mu = atoms.iter().map(|a| math::abs(a.size) * a.intensity).sum();
            let mean = atoms.iter().map(|a| a.size * a.intensity).sum();
            Ok(AbsMoment { mu, mean })
        }
        JumpSpec::VarianceGamma { c_plus, c_minus, decay_plus, decay_minus } => {
            // ∫₀^∞ x · c e^{−λx}/x dx = c/λ per side.
            let up = c_plus / decay_plus;
            let down = c_minus / decay_minus;
            Ok(AbsMoment { mu: up + down, mean: up - down })
        }
        JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at } => {
            if f_plus + f_minus == 0.0 {
                return Ok(AbsMoment { mu: 0.0, mean: 0.0 });
            }
            let r = truncate_at.ok_or(ModelError::NonIntegrable)?;
            if *alpha >= 1.0 {
                return Err(ModelError::NonIntegrable);
            }
            // ∫₀^R x^{-α} dx = R^{1-α}/(1-α) per unit density level.
            let base = math::powf(r, 1.0 - alpha) / (1.0 - alpha);
            Ok(AbsMoment {
                mu: (f_plus + f_minus) * base,
                mean: (f_plus - f_minus) * base,
            })
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
            if (*alpha_plus >= 1.0 && *c_plus > 0.0) || (*alpha_minus >= 1.0 && *c_minus > 0.0) {
                return Err(ModelError::NonIntegrable);
            }
            let side = |c: f64, alpha: f64, decay: f64| -> f64 {
                if c == 0.0 {
                    0.0
                } else {
                    match truncate_at {
                        // ∫₀^∞ x^{-α} e^{-λx} dx = Γ(1-α) λ^{α-1}
                        None => {
                            c * crate::specialfn::gamma_pos(1.0 - alpha)
                                * math::powf(decay, alpha - 1.0)
                        }
                        Some(r) => c * quad::power_exp_integral(-alpha, decay, 0.0, *r),
                    }
                }
            };
            let up = side(*c_plus, *alpha_plus, *decay_plus);
            let down = side(*c_minus, *alpha_minus, *decay_minus);
            Ok(AbsMoment { mu: up + down, mean: up - down })
        }
        JumpSpec::Nig { .. } => Err(ModelError::NonIntegrable),
    }
}

/// ∫ x² ν(dx); finite for every supported measure.
pub fn second_moment(jumps: &JumpSpec) -> f64 {
    match jumps {
        JumpSpec::CompoundPoisson { atoms } => {
            atoms.iter().map(|a| a.size * a.size * a.intensity).sum()
        }
        JumpSpec::VarianceGamma { c_plus, c_minus, decay_plus, decay_minus } => {
            // ∫₀^∞ x² e^{-λx}/x dx = 1/λ² per unit level.
            c_plus / (decay_plus * decay_plus) + c_minus / (decay_minus * decay_minus)
        }
        // ∫ x² (ρ/π|x|) K₁(|x|) dx = (2ρ/π) ∫₀^∞ x K₁(x) dx = ρ.
        JumpSpec::Nig { rho } => *rho,
        JumpSpec::Stable { alpha, f_plus, f_minus, truncate_at } => {
            let r = truncate_at.unwrap_or(f64::INFINITY);
            if r.is_finite() {
                // ∫₀^R x^{1-α} dx = R^{2-α}/(2-α)
                (f_plus + f_minus) * math::powf(r, 2.0 - alpha) / (2.0 - alpha)
            } else {
                f64::INFINITY
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
            let side = |c: f64, alpha: f64, decay: f64| -> f64 {
                if c == 0.0 {
                    return 0.0;
                }
                match truncate_at {
                    // ∫₀^∞ x^{1-α} e^{-λx} dx = Γ(2-α) λ^{α-2}
                    None => {
                        c * crate::specialfn::gamma_pos(2.0 - alpha)
                            * math::powf(decay, alpha - 2.0)
                    }
                    Some(r) => c * quad::power_exp_integral(1.0 - alpha, decay, 0.0, *r),
                }
            };
            side(*c_plus, *alpha_plus, *decay_plus) + side(*c_minus, *alpha_minus, *decay_minus)
        }
    }
}

/// Named SDE coefficient functions, kept as data so configs stay serializable.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "id", rename_all = "snake_case"))]
pub enum CoefficientFn {
    /// f(s) = a·s.
    Linear {
        /// Slope.
        a: f64,
    },
    /// f(s) = a·s + b.
    Affine {
        /// Slope.
        a: f64,
        /// Intercept.
        b: f64,
    },
}

impl CoefficientFn {
    /// Evaluates f(s).
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            CoefficientFn::Linear { a } => a * s,
            CoefficientFn::Affine { a, b } => a * s + b,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        match self {
            CoefficientFn::Linear { a } => finite(*a, "a"),
            CoefficientFn::Affine { a, b } => {
                finite(*a, "a")?;
                finite(*b, "b")
            }
        }
    }
}

/// A martingale model for the price process.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "snake_case"))]
pub enum ModelSpec {
    /// S = S₀ + σ₀·W + compensated jumps: a Lévy martingale with constant
    /// coefficients. `s0` may be any finite real (arithmetic convention).
    FrozenLevy {
        /// Initial value.
        s0: f64,
        /// Diffusion coefficient, ≥ 0.
        sigma0: f64,
        /// Optional jump measure.
        #[cfg_attr(feature = "serde", serde(default))]
        jumps: Option<JumpSpec>,
    },
    /// dS = S·√v dW with a square-root variance process
    /// dv = κᵥ(θᵥ − v)dt + ξ√v dB, corr(W, B) = ρ.
    Heston {
        /// Initial price, > 0.
        s0: f64,
        /// Initial variance, ≥ 0.
        v0: f64,
        /// Mean-reversion speed κᵥ ≥ 0.
        mean_reversion: f64,
        /// Long-run variance θᵥ ≥ 0.
        long_run_var: f64,
        /// Volatility of volatility ξ ≥ 0.
        vol_of_vol: f64,
        /// Brownian correlation in [−1, 1].
        correlation: f64,
    },
    /// dS = f(S₋) dL for a named coefficient f and a Lévy martingale driver
    /// L = driver_sigma·W + compensated jumps.
    LevySde {
        /// Initial value.
        s0: f64,
        /// The coefficient function.
        coefficient: CoefficientFn,
        /// Brownian coefficient of the driver, ≥ 0.
        driver_sigma: f64,
        /// Optional jump part of the driver.
        #[cfg_attr(feature = "serde", serde(default))]
        driver_jumps: Option<JumpSpec>,
    },
}

impl ModelSpec {
    /// Pure-diffusion frozen model.
    pub fn brownian(s0: f64, sigma0: f64) -> Result<Self, ModelError> {
        Self::frozen_levy(s0, sigma0, None)
    }

    /// Frozen Lévy model with optional jumps.
    pub fn frozen_levy(s0: f64, sigma0: f64, jumps: Option<JumpSpec>) -> Result<Self, ModelError> {
        let m = ModelSpec::FrozenLevy { s0, sigma0, jumps };
        m.validate()?;
        Ok(m)
    }

    /// Heston model.
    pub fn heston(
        s0: f64,
        v0: f64,
        mean_reversion: f64,
        long_run_var: f64,
        vol_of_vol: f64,
        correlation: f64,
    ) -> Result<Self, ModelError> {
        let m = ModelSpec::Heston { s0, v0, mean_reversion, long_run_var, vol_of_vol, correlation };
        m.validate()?;
        Ok(m)
    }

    /// Lévy-driven SDE model.
    pub fn levy_sde(
        s0: f64,
        coefficient: CoefficientFn,
        driver_sigma: f64,
        driver_jumps: Option<JumpSpec>,
    ) -> Result<Self, ModelError> {
        let m = ModelSpec::LevySde { s0, coefficient, driver_sigma, driver_jumps };
        m.validate()?;
        Ok(m)
    }

    /// Checks every construction invariant.
    pub fn validate(&self) -> Result<(), ModelError> {
        match self {
            ModelSpec::FrozenLevy { s0, sigma0, jumps } => {
                finite(*s0, "s0")?;
                check(sigma0.is_finite() && *sigma0 >= 0.0, "sigma0", ">= 0")?;
                if let Some(j) = jumps {
                    j.validate()?;
                }
                Ok(())
            }
            ModelSpec::Heston {
                s0,
                v0,
                mean_reversion,
                long_run_var,
                vol_of_vol,
                correlation,
            } => {
                check(s0.is_finite() && *s0 > 0.0, "s0", "positive real")?;
                check(v0.is_finite() && *v0 >= 0.0, "v0", ">= 0")?;
                check(
                    mean_reversion.is_finite() && *mean_reversion >= 0.0,
                    "mean_reversion",
                    ">= 0",
                )?;
                check(
                    long_run_var.is_finite() && *long_run_var >= 0.0,
                    "long_run_var",
                    ">= 0",
                )?;
                check(vol_of_vol.is_finite() && *vol_of_vol >= 0.0, "vol_of_vol", ">= 0")?;
                check(
                    correlation.is_finite() && math::abs(*correlation) <= 1.0,
                    "correlation",
                    "[-1, 1]",
                )?;
                Ok(())
            }
            ModelSpec::LevySde { s0, coefficient, driver_sigma, driver_jumps } => {
                finite(*s0, "s0")?;
                coefficient.validate()?;
                check(
                    driver_sigma.is_finite() && *driver_sigma >= 0.0,
                    "driver_sigma",
                    ">= 0",
                )?;
                if let Some(j) = driver_jumps {
                    j.validate()?;
                }
                Ok(())
            }
        }
    }

    /// Initial value S₀.
    pub fn s0(&self) -> f64 {
        match self {
            ModelSpec::FrozenLevy { s0, .. }
            | ModelSpec::Heston { s0, .. }
            | ModelSpec::LevySde { s0, .. } => *s0,
        }
    }

    /// |σ₀| of the frozen approximation: the diffusion coefficient at t = 0.
    ///
    /// Heston freezes to S₀√v₀, the Lévy SDE to |f(S₀)|·driver_sigma.
    pub fn frozen_sigma0(&self) -> f64 {
        match self {
            ModelSpec::FrozenLevy { sigma0, .. } => *sigma0,
            ModelSpec::Heston { s0, v0, .. } => s0 * math::sqrt(*v0),
            ModelSpec::LevySde { s0, coefficient, driver_sigma, .. } => {
                math::abs(coefficient.eval(*s0)) * driver_sigma
            }
        }
    }

    /// Jump measure of the frozen approximation together with the linear
    /// scale applied to the driver's jumps (1 except for the Lévy SDE, where
    /// the frozen jump coefficient is f(S₀)·x).
    pub fn frozen_jumps(&self) -> Option<(&JumpSpec, f64)> {
        match self {
            ModelSpec::FrozenLevy { jumps, .. } => jumps.as_ref().map(|j| (j, 1.0)),
            ModelSpec::Heston { .. } => None,
            ModelSpec::LevySde { s0, coefficient, driver_jumps, .. } => {
                driver_jumps.as_ref().map(|j| (j, coefficient.eval(*s0)))
            }
        }
    }
}

/// Strike rule K_T = S₀ + θ·√T; θ = 0 is at the money.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct StrikeRule {
    /// Degree of moneyness θ.
    pub theta: f64,
}

impl StrikeRule {
    /// At-the-money rule (θ = 0).
    pub fn atm() -> Self {
        StrikeRule { theta: 0.0 }
    }

    /// Validated construction.
    pub fn new(theta: f64) -> Result<Self, ModelError> {
        finite(theta, "theta")?;
        Ok(StrikeRule { theta })
    }

    /// The strike at maturity T.
    pub fn strike_at(&self, s0: f64, t: f64) -> f64 {
        s0 + self.theta * math::sqrt(t)
    }
}

/// Leading-order regime tag with its rate function.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "tag", rename_all = "snake_case"))]
pub enum OrderClass {
    /// No leading term: the price is identically 0 at leading order.
    Trivial,
    /// Rate √T (diffusive component present).
    SqrtT,
    /// Rate T^{exponent} with exponent = 1/α ∈ (1/2, 1).
    PowerT {
        /// The exponent 1/α.
        exponent: f64,
    },
    /// Rate T|log T| (symmetric 1-stable-like jumps).
    TLogT,
    /// Rate T (finite variation).
    LinearT,
}

impl OrderClass {
    /// Evaluates the rate function at maturity T > 0.
    pub fn rate(&self, t: f64) -> f64 {
        match self {
            OrderClass::Trivial => 0.0,
            OrderClass::SqrtT => math::sqrt(t),
            OrderClass::PowerT { exponent } => math::powf(t, *exponent),
            OrderClass::TLogT => t * math::abs(math::ln(t)),
            OrderClass::LinearT => t,
        }
    }
}

/// Leading-order asymptotics of the call price: E[(S_T − K_T)⁺] =
/// coefficient·rate(T) + o(rate(T)).
///
/// The coefficient is always the CALL-price coefficient: constants stated for
/// the absolute moment E|S_T − S₀| are halved here.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct AsymptoticResult {
    /// The regime.
    pub order: OrderClass,
    /// Call-price coefficient, ≥ 0.
    pub coefficient: f64,
    /// The θ the classification was made for.
    pub moneyness_theta: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two_atom() -> JumpSpec {
        JumpSpec::compound_poisson(vec![
            Atom { size: 0.5, intensity: 1.0 },
            Atom { size: -0.5, intensity: 1.0 },
        ])
        .unwrap()
    }

    #[test]
    fn constructors_reject_bad_ranges() {
        assert!(matches!(
            JumpSpec::stable(2.0, 1.0, 1.0),
            Err(ModelError::OutOfRange { field: "alpha", .. })
        ));
        assert!(matches!(
            JumpSpec::stable(0.9, 1.0, 1.0),
            Err(ModelError::OutOfRange { field: "alpha", .. })
        ));
        // α ≤ 1 is fine when truncated or massless.
        assert!(JumpSpec::stable_truncated(0.9, 1.0, 1.0, 2.0).is_ok());
        assert!(JumpSpec::stable(0.9, 0.0, 0.0).is_ok());

        assert!(matches!(
            JumpSpec::nig(0.0),
            Err(ModelError::OutOfRange { field: "rho", .. })
        ));
        assert!(JumpSpec::variance_gamma(1.0, 1.0, 0.0, 2.0).is_err());
        assert!(JumpSpec::compound_poisson(vec![Atom { size: 0.0, intensity: 1.0 }]).is_err());
        assert!(JumpSpec::compound_poisson(vec![Atom { size: 0.1, intensity: 0.0 }]).is_err());

        assert!(ModelSpec::heston(100.0, 0.04, 1.0, 0.04, 0.5, -1.5).is_err());
        assert!(ModelSpec::heston(0.0, 0.04, 1.0, 0.04, 0.5, -0.7).is_err());
        assert!(ModelSpec::brownian(1.0, -0.1).is_err());
        // Arithmetic convention: frozen-Lévy s0 may be any real.
        assert!(ModelSpec::brownian(-3.0, 0.2).is_ok());
        assert!(StrikeRule::new(f64::INFINITY).is_err());
    }

    #[test]
    fn stable_like_data_examples() {
        // NIG(ρ = π) has boundary data (1, 1, 1, 1).
        let d = stable_like_data(&JumpSpec::nig(core::f64::consts::PI).unwrap());
        match d {
            StableLikeData::StableLike { alpha_plus, alpha_minus, f_plus, f_minus } => {
                assert_eq!(alpha_plus, 1.0);
                assert_eq!(alpha_minus, 1.0);
                assert!((f_plus - 1.0).abs() < 1e-15);
                assert!((f_minus - 1.0).abs() < 1e-15);
            }
            _ => panic!("NIG must be stable-like"),
        }

        let d = stable_like_data(&JumpSpec::tempered_stable_symmetric(1.5, 1.0, 5.0).unwrap());
        assert_eq!(
            d,
            StableLikeData::StableLike {
                alpha_plus: 1.5,
                alpha_minus: 1.5,
                f_plus: 1.0,
                f_minus: 1.0
            }
        );

        assert_eq!(stable_like_data(&two_atom()), StableLikeData::FiniteVariation);
        assert_eq!(
            stable_like_data(&JumpSpec::variance_gamma(1.0, 1.0, 2.0, 2.0).unwrap()),
            StableLikeData::FiniteVariation
        );
    }

    #[test]
    fn tempered_stable_decay_limit_matches_stable() {
        // Boundary data of a tempered-stable with decay → 0⁺ agrees with the
        // stable's own data.
        let ts = JumpSpec::tempered_stable(1.5, 1.5, 1.0, 2.0, 1e-6, 1e-6, None).unwrap();
        let st = JumpSpec::stable(1.5, 1.0, 2.0).unwrap();
        let (a, b) = (stable_like_data(&ts), stable_like_data(&st));
        match (a, b) {
            (
                StableLikeData::StableLike {
                    alpha_plus: a1,
                    alpha_minus: a2,
                    f_plus: f1,
                    f_minus: f2,
                },
                StableLikeData::StableLike {
                    alpha_plus: b1,
                    alpha_minus: b2,
                    f_plus: g1,
                    f_minus: g2,
                },
            ) => {
                assert!((a1 - b1).abs() < 1e-6 * b1.abs());
                assert!((a2 - b2).abs() < 1e-6 * b2.abs());
                assert!((f1 - g1).abs() < 1e-6 * g1.abs());
                assert!((f2 - g2).abs() < 1e-6 * g2.abs());
            }
            _ => panic!("both must be stable-like"),
        }
    }

    #[test]
    fn first_abs_moment_examples() {
        let m = first_abs_moment(&two_atom()).unwrap();
        assert!((m.mu - 1.0).abs() < 1e-15);
        assert!(m.mean.abs() < 1e-15);

        let one = JumpSpec::compound_poisson(vec![Atom { size: 0.5, intensity: 1.0 }]).unwrap();
        let m = first_abs_moment(&one).unwrap();
        assert!((m.mu - 0.5).abs() < 1e-15);
        assert!((m.mean - 0.5).abs() < 1e-15);

        // VG(c = 1, decay = 2): ∫₀^∞ e^{-2x} dx = 1/2 per side.
        let vg = JumpSpec::variance_gamma(1.0, 1.0, 2.0, 2.0).unwrap();
        let m = first_abs_moment(&vg).unwrap();
        assert!((m.mu - 1.0).abs() < 1e-14);
        assert!(m.mean.abs() < 1e-14);
        // Quadrature cross-check of the closed form.
        let by_quad =
            2.0 * quad::integrate_to_inf(|x| (-2.0 * x).exp(), 0.0, 1e-12);
        assert!((m.mu - by_quad).abs() < 1e-9);

        assert_eq!(
            first_abs_moment(&JumpSpec::nig(1.0).unwrap()),
            Err(ModelError::NonIntegrable)
        );
        assert_eq!(
            first_abs_moment(&JumpSpec::stable(1.5, 1.0, 1.0).unwrap()),
            Err(ModelError::NonIntegrable)
        );
        // Truncation does not repair α ≥ 1 small jumps.
        assert_eq!(
            first_abs_moment(&JumpSpec::stable_truncated(1.0, 1.0, 1.0, 1.0).unwrap()),
            Err(ModelError::NonIntegrable)
        );
    }

    #[test]
    fn tempered_stable_moment_closed_form_vs_quadrature() {
        let ts = JumpSpec::tempered_stable(0.5, 0.7, 1.0, 2.0, 3.0, 5.0, None).unwrap();
        let m = first_abs_moment(&ts).unwrap();
        let up = quad::power_exp_integral(-0.5, 3.0, 0.0, f64::INFINITY);
        let down = 2.0 * quad::power_exp_integral(-0.7, 5.0, 0.0, f64::INFINITY);
        assert!(((m.mu - (up + down)) / m.mu).abs() < 1e-8, "mu {} vs {}", m.mu, up + down);
        assert!(((m.mean - (up - down)) / m.mu).abs() < 1e-8);
    }

    #[test]
    fn triangle_inequality_property() {
        // |mean| <= mu for every integrable spec.
        let mut state = 42u64;
        let mut rand = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let atoms: Vec<Atom> = (0..1 + (rand() * 5.0) as usize)
                .map(|_| Atom {
                    size: (rand() - 0.5) * 4.0 + 0.01,
                    intensity: rand() * 3.0 + 0.01,
                })
                .collect();
            let spec = JumpSpec::compound_poisson(atoms).unwrap();
            let m = first_abs_moment(&spec).unwrap();
            assert!(m.mean.abs() <= m.mu + 1e-12);

            let vg =
                JumpSpec::variance_gamma(rand(), rand(), rand() + 0.1, rand() + 0.1).unwrap();
            let m = first_abs_moment(&vg).unwrap();
            assert!(m.mean.abs() <= m.mu + 1e-12);
        }
    }

    #[test]
    fn second_moment_values() {
        assert!((second_moment(&two_atom()) - 0.5).abs() < 1e-15);
        // NIG: ∫x²ν = ρ.
        assert!((second_moment(&JumpSpec::nig(3.0).unwrap()) - 3.0).abs() < 1e-15);
        // VG: c/λ² per side.
        let vg = JumpSpec::variance_gamma(1.0, 1.0, 2.0, 2.0).unwrap();
        assert!((second_moment(&vg) - 0.5).abs() < 1e-15);
        // Tempered stable: Γ(2-α)λ^{α-2} per side, cross-checked by quadrature.
        let ts = JumpSpec::tempered_stable_symmetric(1.4, 1.0, 5.0).unwrap();
        let quad_val = 2.0 * quad::power_exp_integral(-0.4, 5.0, 0.0, f64::INFINITY);
        assert!(((second_moment(&ts) - quad_val) / quad_val).abs() < 1e-8);
    }

    #[test]
    fn frozen_coefficients() {
        let h = ModelSpec::heston(100.0, 0.04, 1.0, 0.04, 0.5, -0.7).unwrap();
        assert!((h.frozen_sigma0() - 20.0).abs() < 1e-12);

        let sde = ModelSpec::levy_sde(
            2.0,
            CoefficientFn::Affine { a: 1.0, b: 3.0 },
            0.4,
            None,
        )
        .unwrap();
        assert!((sde.frozen_sigma0() - 2.0).abs() < 1e-12);

        let strike = StrikeRule::new(0.5).unwrap();
        assert!((strike.strike_at(10.0, 0.04) - 10.1).abs() < 1e-12);
    }

    #[test]
    fn order_class_rates() {
        assert_eq!(OrderClass::Trivial.rate(0.3), 0.0);
        assert!((OrderClass::SqrtT.rate(0.04) - 0.2).abs() < 1e-15);
        assert!((OrderClass::LinearT.rate(0.02) - 0.02).abs() < 1e-15);
        let p = OrderClass::PowerT { exponent: 2.0 / 3.0 };
        assert!((p.rate(8.0f64.powi(-3)) - 1.0 / 64.0).abs() < 1e-15);
        // T|log T| is increasing on (0, 1/e).
        let tl = OrderClass::TLogT;
        let mut prev = 0.0;
        let mut t = 1e-6;
        while t < 0.36 {
            let r = tl.rate(t);
            assert!(r > prev);
            prev = r;
            t *= 1.5;
        }
    }
}
