//! Leading-order small-maturity asymptotics as executable formulas.
//!
//! The ATM call price of a martingale model behaves like
//! coefficient · rate(T) as T ↓ 0, with four nontrivial regimes:
//!
//! * diffusive part present: rate √T, coefficient E[N(−θ, σ₀²)⁺] built from
//!   the frozen volatility σ₀ and the degree of moneyness θ;
//! * finite-variation pure jumps: rate T, coefficient C/2 with
//!   C = ∫|x|ν(dx) + |∫x ν(dx)|;
//! * stable-like pure jumps with α = α₊∨α₋ ∈ (1, 2): rate T^{1/α},
//!   coefficient C(α₊, α₋, f₊, f₋)/2 with an explicit Γ/tan closed form;
//! * symmetric 1-stable-like jumps: rate T·|log T|, coefficient (f₊+f₋)/2.
//!
//! All functions return the CALL-price coefficient; constants stated for the
//! first absolute moment E|S_T − S₀| are exactly twice these.

use crate::math;
use crate::model::{
    first_abs_moment, stable_like_data, AsymptoticResult, JumpSpec, ModelError, ModelSpec,
    OrderClass, StableLikeData, StrikeRule,
};
use crate::specialfn::{bessel_k0, gamma_pos, std_normal_cdf, std_normal_pdf};
use core::fmt;

/// Errors from classification and closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticsError {
    /// An argument is outside the stated domain.
    Domain {
        /// What was violated.
        what: &'static str,
    },
    /// 1-stable-like jumps with asymmetric boundary data: only the rate is
    /// known in that case, not the leading constant, so no result is
    /// fabricated.
    AsymmetricOneStable,
    /// Nonzero moneyness θ with a pure-jump model: the θ-dependent leading
    /// term is only available in the diffusive regime.
    UnsupportedStrike,
    /// The measure is not of finite variation where a finite-variation
    /// constant was required.
    NotFiniteVariation,
    /// An invalid model slipped through.
    Model(ModelError),
}

impl fmt::Display for AsymptoticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AsymptoticsError::Domain { what } => write!(f, "domain error: {what}"),
            AsymptoticsError::AsymmetricOneStable => {
                write!(f, "1-stable-like jumps must be symmetric (f+ = f-) for a leading constant")
            }
            AsymptoticsError::UnsupportedStrike => {
                write!(f, "nonzero moneyness is only supported with a diffusive component")
            }
            AsymptoticsError::NotFiniteVariation => {
                write!(f, "jump measure is not of finite variation")
            }
            AsymptoticsError::Model(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AsymptoticsError {}

impl From<ModelError> for AsymptoticsError {
    fn from(e: ModelError) -> Self {
        AsymptoticsError::Model(e)
    }
}

/// E[N(−θ, σ₀²)⁺]: the √T-term coefficient for frozen volatility σ₀ ≥ 0 and
/// degree of moneyness θ.
///
/// For σ₀ > 0 this is σ₀·φ(θ/σ₀) − θ·Φ(−θ/σ₀); the degenerate σ₀ = 0 case
/// is max(−θ, 0).
pub fn diffusive_coefficient(sigma0: f64, theta: f64) -> f64 {
    if sigma0 == 0.0 {
        return (-theta).max(0.0);
    }
    let z = theta / sigma0;
    sigma0 * std_normal_pdf(z) - theta * std_normal_cdf(-z)
}

/// The finite-variation constant C = ∫|x|ν(dx) + |∫x ν(dx)| of a jump
/// measure; the ATM call coefficient on rate T is C/2.
pub fn fv_constant(jumps: &JumpSpec) -> Result<f64, AsymptoticsError> {
    match effective_regime(&stable_like_data(jumps), jumps.is_zero_measure())? {
        JumpRegime::FiniteVariation => {
            let m = first_abs_moment(jumps).map_err(|_| AsymptoticsError::NotFiniteVariation)?;
            Ok(m.mu + math::abs(m.mean))
        }
        JumpRegime::NoMass => Ok(0.0),
        _ => Err(AsymptoticsError::NotFiniteVariation),
    }
}

/// The stable first-absolute-moment constant C(α, f₊, f₋) for α ∈ (1, 2):
///
/// C = (2/π)(f₊+f₋)^{1/α} Γ(1−1/α) [1 + β²tan²(απ/2)]^{1/(2α)}
///     · cos(arctan(β·tan(απ/2))/α),   β = (f₊−f₋)/(f₊+f₋),
///
/// with C(α, 0, 0) = 0. For the measure in this crate's scale convention,
/// E|Z_T| = C·T^{1/α} exactly at every T.
pub fn stable_constant(alpha: f64, f_plus: f64, f_minus: f64) -> Result<f64, AsymptoticsError> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(AsymptoticsError::Domain { what: "alpha must lie in (1, 2)" });
    }
    if !(f_plus >= 0.0 && f_minus >= 0.0) || !f_plus.is_finite() || !f_minus.is_finite() {
        return Err(AsymptoticsError::Domain { what: "f_plus, f_minus must be >= 0" });
    }
    let mass = f_plus + f_minus;
    if mass == 0.0 {
        return Ok(0.0);
    }
    let beta = (f_plus - f_minus) / mass;
    let bt = beta * math::tan(core::f64::consts::FRAC_PI_2 * alpha);
    let c = 2.0 / core::f64::consts::PI
        * math::powf(mass, 1.0 / alpha)
        * gamma_pos(1.0 - 1.0 / alpha)
        * math::powf(1.0 + bt * bt, 0.5 / alpha)
        * math::cos(math::atan(bt) / alpha);
    Ok(c)
}

/// Dispatch of C over one-sided indices: the larger index wins and only its
/// side's mass contributes when the indices differ. Returns (α₊∨α₋, C).
pub fn stable_like_constant(
    alpha_plus: f64,
    alpha_minus: f64,
    f_plus: f64,
    f_minus: f64,
) -> Result<(f64, f64), AsymptoticsError> {
    let alpha = alpha_plus.max(alpha_minus);
    let c = if alpha_plus == alpha_minus {
        stable_constant(alpha_plus, f_plus, f_minus)?
    } else if alpha_plus > alpha_minus {
        stable_constant(alpha_plus, f_plus, 0.0)?
    } else {
        stable_constant(alpha_minus, 0.0, f_minus)?
    };
    Ok((alpha, c))
}

/// The symmetric 1-stable-like constant: E|Z_T| ~ (f₊+f₋)·T|log T| requires
/// f₊ = f₋; the call coefficient is half the returned value.
pub fn one_log_constant(f_plus: f64, f_minus: f64) -> Result<f64, AsymptoticsError> {
    if !(f_plus >= 0.0 && f_minus >= 0.0) || !f_plus.is_finite() || !f_minus.is_finite() {
        return Err(AsymptoticsError::Domain { what: "f_plus, f_minus must be >= 0" });
    }
    if f_plus != f_minus {
        return Err(AsymptoticsError::AsymmetricOneStable);
    }
    Ok(f_plus + f_minus)
}

/// E|Z_T| = C(α, f₊, f₋)·T^{1/α} for the stable measure.
pub fn stable_abs_moment(
    alpha: f64,
    f_plus: f64,
    f_minus: f64,
    horizon: f64,
) -> Result<f64, AsymptoticsError> {
    if !(horizon > 0.0) {
        return Err(AsymptoticsError::Domain { what: "horizon must be positive" });
    }
    Ok(stable_constant(alpha, f_plus, f_minus)? * math::powf(horizon, 1.0 / alpha))
}

/// E|Z_T| = (2ρ/π)·e^{ρT}·T·K₀(ρT) for the symmetric NIG measure; exact at
/// every T, and ~ (2ρ/π)·T|log T| as T ↓ 0.
pub fn nig_abs_moment(rho: f64, horizon: f64) -> Result<f64, AsymptoticsError> {
    if !(rho > 0.0) {
        return Err(AsymptoticsError::Domain { what: "rho must be positive" });
    }
    if !(horizon > 0.0) {
        return Err(AsymptoticsError::Domain { what: "horizon must be positive" });
    }
    let z = rho * horizon;
    Ok(2.0 * rho / core::f64::consts::PI * math::exp(z) * horizon * bessel_k0(z))
}

enum JumpRegime {
    NoMass,
    FiniteVariation,
    OneStableSymmetric { f_sum: f64 },
    Stable { alpha: f64, coefficient: f64 },
}

/// Resolves the regime from boundary data. Sides with zero mass carry no
/// information (their index is not identifiable from the measure), so they
/// are dropped before the α₊ vs α₋ dispatch.
fn effective_regime(
    data: &StableLikeData,
    zero_measure: bool,
) -> Result<JumpRegime, AsymptoticsError> {
    if zero_measure {
        return Ok(JumpRegime::NoMass);
    }
    match *data {
        StableLikeData::FiniteVariation => Ok(JumpRegime::FiniteVariation),
        StableLikeData::StableLike { alpha_plus, alpha_minus, f_plus, f_minus } => {
            let ap = if f_plus > 0.0 { Some(alpha_plus) } else { None };
            let am = if f_minus > 0.0 { Some(alpha_minus) } else { None };
            let alpha = match (ap, am) {
                (None, None) => return Ok(JumpRegime::NoMass),
                (Some(a), None) | (None, Some(a)) => a,
                (Some(a), Some(b)) => a.max(b),
            };
            if alpha < 1.0 {
                Ok(JumpRegime::FiniteVariation)
            } else if alpha == 1.0 {
                // Exactly 1-stable-like: the constant is only available in
                // the symmetric same-index case.
                if ap == Some(1.0) && am == Some(1.0) && f_plus == f_minus {
                    Ok(JumpRegime::OneStableSymmetric { f_sum: f_plus + f_minus })
                } else {
                    Err(AsymptoticsError::AsymmetricOneStable)
                }
            } else {
                // Normalize zero-mass sides to the active index so the
                // closed-form dispatch sees only real data.
                let a_plus = ap.unwrap_or(alpha);
                let a_minus = am.unwrap_or(alpha);
                let (a, c) = stable_like_constant(a_plus, a_minus, f_plus, f_minus)?;
                Ok(JumpRegime::Stable { alpha: a, coefficient: c })
            }
        }
    }
}

/// Scales stable-like boundary data under x ↦ m·x (frozen SDE jumps): each
/// side's level picks up |m|^{α} and the sides swap when m < 0.
fn scale_boundary_data(data: StableLikeData, m: f64) -> StableLikeData {
    match data {
        StableLikeData::FiniteVariation => StableLikeData::FiniteVariation,
        StableLikeData::StableLike { alpha_plus, alpha_minus, f_plus, f_minus } => {
            let s = math::abs(m);
            let gp = f_plus * math::powf(s, alpha_plus);
            let gm = f_minus * math::powf(s, alpha_minus);
            if m >= 0.0 {
                StableLikeData::StableLike { alpha_plus, alpha_minus, f_plus: gp, f_minus: gm }
            } else {
                StableLikeData::StableLike {
                    alpha_plus: alpha_minus,
                    alpha_minus: alpha_plus,
                    f_plus: gm,
                    f_minus: gp,
                }
            }
        }
    }
}

/// Classifies a model into its leading-order regime and call coefficient.
///
/// A nonzero frozen diffusion coefficient always yields the √T regime with
/// coefficient E[N(−θ, σ₀²)⁺], independent of any jumps. Pure-jump models
/// are dispatched on the boundary data of the frozen jump measure and accept
/// only θ = 0. A model whose frozen approximation is constant classifies as
/// `Trivial` when the intrinsic part vanishes, and as the exact intrinsic
/// √T term max(−θ, 0) otherwise.
pub fn classify(
    model: &ModelSpec,
    strike: &StrikeRule,
) -> Result<AsymptoticResult, AsymptoticsError> {
    model.validate()?;
    let theta = strike.theta;
    if !theta.is_finite() {
        return Err(AsymptoticsError::Domain { what: "theta must be finite" });
    }
    let sigma0 = model.frozen_sigma0();
    if sigma0 > 0.0 {
        return Ok(AsymptoticResult {
            order: OrderClass::SqrtT,
            coefficient: diffusive_coefficient(sigma0, theta),
            moneyness_theta: theta,
        });
    }

    let frozen = model.frozen_jumps();
    let deterministic = match &frozen {
        None => true,
        Some((jumps, scale)) => *scale == 0.0 || jumps.is_zero_measure(),
    };
    if deterministic {
        // Z ≡ S₀: the price is exactly (−θ√T)⁺.
        return Ok(if theta < 0.0 {
            AsymptoticResult {
                order: OrderClass::SqrtT,
                coefficient: -theta,
                moneyness_theta: theta,
            }
        } else {
            AsymptoticResult { order: OrderClass::Trivial, coefficient: 0.0, moneyness_theta: theta }
        });
    }
    if theta != 0.0 {
        return Err(AsymptoticsError::UnsupportedStrike);
    }

    let (jumps, scale) = frozen.expect("nondeterministic pure-jump model has frozen jumps");
    let data = scale_boundary_data(stable_like_data(jumps), scale);
    match effective_regime(&data, false)? {
        JumpRegime::NoMass => Ok(AsymptoticResult {
            order: OrderClass::Trivial,
            coefficient: 0.0,
            moneyness_theta: theta,
        }),
        JumpRegime::FiniteVariation => {
            let m = first_abs_moment(jumps).map_err(|_| AsymptoticsError::NotFiniteVariation)?;
            let c = math::abs(scale) * (m.mu + math::abs(m.mean));
            Ok(AsymptoticResult {
                order: OrderClass::LinearT,
                coefficient: 0.5 * c,
                moneyness_theta: theta,
            })
        }
        JumpRegime::OneStableSymmetric { f_sum } => Ok(AsymptoticResult {
            order: OrderClass::TLogT,
            coefficient: 0.5 * f_sum,
            moneyness_theta: theta,
        }),
        JumpRegime::Stable { alpha, coefficient } => Ok(AsymptoticResult {
            order: OrderClass::PowerT { exponent: 1.0 / alpha },
            coefficient: 0.5 * coefficient,
            moneyness_theta: theta,
        }),
    }
}

/// Evaluates the leading term coefficient·rate(T) at maturity T > 0.
pub fn leading_price(result: &AsymptoticResult, horizon: f64) -> Result<f64, AsymptoticsError> {
    if !(horizon > 0.0) {
        return Err(AsymptoticsError::Domain { what: "horizon must be positive" });
    }
    Ok(result.coefficient * result.order.rate(horizon))
}

/// Functional form of an implied-volatility asymptote.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "form", rename_all = "snake_case"))]
pub enum AsymptoteForm {
    /// σ_impl(T) → coefficient.
    Constant,
    /// σ_impl(T) ≈ coefficient·√T.
    SqrtT,
    /// σ_impl(T) ≈ coefficient·T^{exponent}.
    PowerT {
        /// The exponent 1/α − 1/2.
        exponent: f64,
    },
    /// σ_impl(T) ≈ coefficient·√T·|log T|.
    SqrtTLogT,
}

/// Small-maturity implied-volatility asymptote σ_impl(T) ≈ coefficient·form(T).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImpliedVolAsymptote {
    /// The asymptotic shape.
    pub form: AsymptoteForm,
    /// Nonnegative coefficient.
    pub coefficient: f64,
}

impl ImpliedVolAsymptote {
    /// Evaluates the asymptote at maturity T > 0.
    pub fn eval(&self, horizon: f64) -> f64 {
        let factor = match self.form {
            AsymptoteForm::Constant => 1.0,
            AsymptoteForm::SqrtT => math::sqrt(horizon),
            AsymptoteForm::PowerT { exponent } => math::powf(horizon, exponent),
            AsymptoteForm::SqrtTLogT => math::sqrt(horizon) * math::abs(math::ln(horizon)),
        };
        self.coefficient * factor
    }
}

/// Implied-volatility asymptote of an ATM call under the given model.
///
/// Diffusive models converge to the spot volatility |σ₀|/S₀; pure-jump
/// regimes vanish like √(π/2)·C/S₀ times √T, T^{1/α−1/2} or √T|log T|.
pub fn implied_vol_asymptote(model: &ModelSpec) -> Result<ImpliedVolAsymptote, AsymptoticsError> {
    let s0 = model.s0();
    if !(s0 > 0.0) {
        return Err(AsymptoticsError::Domain { what: "s0 must be positive for implied vol" });
    }
    let result = classify(model, &StrikeRule::atm())?;
    let sqrt_half_pi = math::sqrt(core::f64::consts::FRAC_PI_2);
    Ok(match result.order {
        OrderClass::SqrtT => ImpliedVolAsymptote {
            form: AsymptoteForm::Constant,
            coefficient: model.frozen_sigma0() / s0,
        },
        OrderClass::Trivial => {
            ImpliedVolAsymptote { form: AsymptoteForm::Constant, coefficient: 0.0 }
        }
        OrderClass::LinearT => ImpliedVolAsymptote {
            form: AsymptoteForm::SqrtT,
            coefficient: sqrt_half_pi * 2.0 * result.coefficient / s0,
        },
        OrderClass::PowerT { exponent } => ImpliedVolAsymptote {
            form: AsymptoteForm::PowerT { exponent: exponent - 0.5 },
            coefficient: sqrt_half_pi * 2.0 * result.coefficient / s0,
        },
        OrderClass::TLogT => ImpliedVolAsymptote {
            form: AsymptoteForm::SqrtTLogT,
            coefficient: sqrt_half_pi * 2.0 * result.coefficient / s0,
        },
    })
}
