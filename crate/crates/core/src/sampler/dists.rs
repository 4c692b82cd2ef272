//! Distribution samplers on top of [`RngStream`].

use crate::math;
use crate::rng::RngStream;
use crate::specialfn::ln_gamma;

/// Gamma(shape, rate = 1) variate, Marsaglia–Tsang with the small-shape boost.
pub fn gamma(rng: &mut RngStream, shape: f64) -> f64 {
    if shape < 1.0 {
        // Γ(a) = Γ(a+1) · U^{1/a}; the power may underflow for tiny shapes,
        // which only discards mass below the subnormal range.
        let u = rng.uniform();
        return gamma(rng, shape + 1.0) * math::exp(math::ln(u) / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / math::sqrt(9.0 * d);
    loop {
        let x = rng.normal();
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u = rng.uniform();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 {
            return d * v;
        }
        if math::ln(u) < 0.5 * x2 + d * (1.0 - v + math::ln(v)) {
            return d * v;
        }
    }
}

/// Poisson(λ) count: Knuth multiplication below λ = 30, Hörmann's PTRS
/// transformed rejection above.
pub fn poisson(rng: &mut RngStream, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    if lambda < 30.0 {
        let l = math::exp(-lambda);
        let mut k = 0u64;
        let mut p = 1.0;
        loop {
            p *= rng.uniform();
            if p <= l {
                return k;
            }
            k += 1;
        }
    }
    let b = 0.931 + 2.53 * math::sqrt(lambda);
    let a = -0.059 + 0.02483 * b;
    let inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    let v_r = 0.9277 - 3.6224 / (b - 2.0);
    let ln_lambda = math::ln(lambda);
    loop {
        let u = rng.uniform() - 0.5;
        let v = rng.uniform();
        let us = 0.5 - math::abs(u);
        let k = math::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if us >= 0.07 && v <= v_r {
            return k as u64;
        }
        if k < 0.0 || (us < 0.013 && v > us) {
            continue;
        }
        if math::ln(v * inv_alpha / (a / (us * us) + b))
            <= k * ln_lambda - lambda - ln_gamma(k + 1.0)
        {
            return k as u64;
        }
    }
}

/// Inverse Gaussian(mean μ, shape λ) variate (Michael–Schucany–Haas).
///
/// The small root is computed in the cancellation-free form
/// μ·(√(1+c) − 1)/(√(1+c) + 1) with c = 4λ/(μ·y), which stays accurate for
/// the tiny-shape draws used by short-maturity subordinators.
pub fn inverse_gaussian(rng: &mut RngStream, mean: f64, shape: f64) -> f64 {
    let nu = rng.normal();
    let y = nu * nu;
    let x = if y < 1e-290 {
        mean
    } else {
        let c = 4.0 * shape / (mean * y);
        let s = math::sqrt(1.0 + c);
        mean * (s - 1.0) / (s + 1.0)
    };
    let u = rng.uniform();
    if u <= mean / (mean + x) {
        x
    } else {
        mean * mean / x
    }
}

/// Standard stable variate S_α(1, β, 0) in the 1-parametrization,
/// Chambers–Mallows–Stuck form, for α ∈ (0, 2), α ≠ 1.
///
/// For α > 1 the law has mean zero, so σ·X is already a martingale
/// increment.
pub fn standard_stable(rng: &mut RngStream, alpha: f64, beta: f64) -> f64 {
    let half_pi_alpha = core::f64::consts::FRAC_PI_2 * alpha;
    let t = beta * math::tan(half_pi_alpha);
    let b = math::atan(t) / alpha;
    let s = math::powf(1.0 + t * t, 0.5 / alpha);
    let v = core::f64::consts::PI * (rng.uniform() - 0.5);
    let w = rng.exponential();
    let av_b = alpha * (v + b);
    s * math::sin(av_b) / math::powf(math::cos(v), 1.0 / alpha)
        * math::powf(math::cos(v - av_b) / w, (1.0 - alpha) / alpha)
}
