//! Exact at-the-money Black–Scholes implied volatility.
//!
//! The ATM call price under Black–Scholes with zero rates is
//! S₀[Φ(½σ√T) − Φ(−½σ√T)] = S₀·erf(σ√T/(2√2)), strictly increasing from 0
//! to S₀ as σ runs over [0, ∞]. Inversion is bracketing bisection on σ√T
//! followed by one Newton polish; bisection is unconditionally convergent
//! even where Φ differences underflow in the tiny-σ√T regime this crate
//! lives in.

use crate::math;
use crate::specialfn::{erf, std_normal_pdf};
use core::fmt;

/// Implied-vol errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImpliedVolError {
    /// Price not in [0, S₀].
    PriceOutOfRange,
    /// Nonpositive spot or maturity, or nonfinite inputs.
    Domain,
}

impl fmt::Display for ImpliedVolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImpliedVolError::PriceOutOfRange => write!(f, "price must lie in [0, s0]"),
            ImpliedVolError::Domain => write!(f, "s0 and maturity must be positive and finite"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ImpliedVolError {}

/// Result of an implied-vol inversion.
///
/// `sigma_impl` is finite except at the upper boundary price = S₀, where the
/// sentinel `f64::INFINITY` is returned (it is produced directly, never
/// computed with).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImpliedVolResult {
    /// The implied volatility.
    pub sigma_impl: f64,
    /// Reprice error atm_price_bs(s0, σ, T) − price (0 at the boundaries).
    pub residual: f64,
    /// Bisection + polish iterations used.
    pub iterations: u32,
}

impl ImpliedVolResult {
    /// True when the price sat at the upper boundary S₀.
    pub fn is_unbounded(&self) -> bool {
        self.sigma_impl.is_infinite()
    }
}

/// ATM Black–Scholes call price S₀[Φ(½σ√T) − Φ(−½σ√T)].
pub fn atm_price_bs(s0: f64, sigma: f64, horizon: f64) -> Result<f64, ImpliedVolError> {
    if !(s0 > 0.0) || !(horizon > 0.0) || !(sigma >= 0.0) || !s0.is_finite() || !horizon.is_finite()
    {
        return Err(ImpliedVolError::Domain);
    }
    if sigma.is_infinite() {
        return Ok(s0);
    }
    Ok(s0 * erf(0.5 * sigma * math::sqrt(horizon) * core::f64::consts::FRAC_1_SQRT_2))
}

/// The unique σ with atm_price_bs(s0, σ, T) = price.
///
/// Boundary prices map to σ = 0 and the ∞ sentinel. Interior prices are
/// solved to a bracket width of 1e-14 in ½σ√T, then polished with one Newton
/// step.
pub fn atm_implied_vol(price: f64, s0: f64, horizon: f64) -> Result<ImpliedVolResult, ImpliedVolError> {
    if !(s0 > 0.0) || !(horizon > 0.0) || !s0.is_finite() || !horizon.is_finite() {
        return Err(ImpliedVolError::Domain);
    }
    if !price.is_finite() || price < 0.0 || price > s0 {
        return Err(ImpliedVolError::PriceOutOfRange);
    }
    if price == 0.0 {
        return Ok(ImpliedVolResult { sigma_impl: 0.0, residual: 0.0, iterations: 0 });
    }
    if price == s0 {
        return Ok(ImpliedVolResult { sigma_impl: f64::INFINITY, residual: 0.0, iterations: 0 });
    }

    // Solve erf(y/√2) = p for y = ½σ√T on [0, 20]; erf(20/√2) is 1 to
    // machine precision, so the bracket always straddles.
    let p = price / s0;
    let target = |y: f64| erf(y * core::f64::consts::FRAC_1_SQRT_2) - p;
    let mut lo = 0.0f64;
    let mut hi = 20.0f64;
    let mut iterations = 0u32;
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if target(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        if iterations > 200 {
            break;
        }
    }
    let mut y = 0.5 * (lo + hi);
    // One Newton polish: d/dy erf(y/√2) = 2φ(y).
    let deriv = 2.0 * std_normal_pdf(y);
    if deriv > 0.0 {
        y -= target(y) / deriv;
        y = y.max(0.0);
        iterations += 1;
    }
    let sigma = 2.0 * y / math::sqrt(horizon);
    let residual = atm_price_bs(s0, sigma, horizon)? - price;
    Ok(ImpliedVolResult { sigma_impl: sigma, residual, iterations })
}
