//! Adaptive numerical integration.
//!
//! Adaptive Simpson with the Richardson error estimate, plus a block-doubling
//! driver for integrals over [a, ∞) of decaying integrands. Accuracy targets
//! here are the 1e-10..1e-12 range used by the measure-moment fallbacks and
//! the test oracles; integrands are smooth away from endpoints.

use crate::math;
use alloc::vec::Vec;

/// Adaptive Simpson on [a, b] with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fm = f(0.5 * (a + b));
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(&f, a, b, fa, fm, fb, whole, tol, 60)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // Keep splitting for the first few levels so oscillation on a coarse grid
    // cannot masquerade as convergence; stop once the requested tolerance or
    // the roundoff floor of the integrand values is reached.
    let noise_floor = 1e-14 * (math::abs(left) + math::abs(right));
    if depth < 55 && (math::abs(delta) <= 15.0 * tol || math::abs(delta) <= noise_floor)
        || depth == 0
    {
        left + right + delta / 15.0
    } else {
        adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// ∫_a^∞ f(x) dx for integrands that decay at infinity.
///
/// Integrates over geometrically doubling blocks until a block contributes
/// less than `tol` in absolute value twice in a row.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let width0 = if math::abs(a) > 1.0 { math::abs(a) } else { 1.0 };
    let mut width = width0;
    let mut small_blocks = 0;
    for _ in 0..128 {
        let hi = lo + width;
        let block = integrate(&f, lo, hi, tol * 0.25);
        total += block;
        if math::abs(block) < tol {
            small_blocks += 1;
            if small_blocks >= 2 {
                break;
            }
        } else {
            small_blocks = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    total
}

/// ∫_lo^hi x^p e^{−λx} dx for p > −1, allowing the integrable endpoint
/// singularity at lo = 0 (`hi` may be ∞, λ ≥ 0 with finite `hi`).
///
/// The singular head [0, δ] is summed exactly from the exponential series,
/// ∫₀^δ x^{p+k} terms; the smooth remainder is adaptive.
pub fn power_exp_integral(p: f64, lambda: f64, lo: f64, hi: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let mut total = 0.0;
    let mut start = lo;
    if lo == 0.0 {
        let delta = if lambda > 0.0 { (0.5 / lambda).min(hi) } else { hi.min(1.0) };
        let mut term = math::powf(delta, p + 1.0); // (−λ)^k δ^{p+k+1} / k!
        let mut head = term / (p + 1.0);
        for k in 1..200 {
            term *= -lambda * delta / k as f64;
            let add = term / (p + 1.0 + k as f64);
            head += add;
            if math::abs(add) < 1e-16 * math::abs(head) {
                break;
            }
        }
        total += head;
        start = delta;
    }
    if start < hi {
        let f = |x: f64| math::powf(x, p) * math::exp(-lambda * x);
        let tol = 1e-12 * math::abs(total).max(math::powf(start, p) * start);
        total += if hi.is_finite() {
            integrate(f, start, hi, tol)
        } else {
            integrate_to_inf(f, start, tol)
        };
    }
    total
}

/// Nodes and weights of an n-point Gauss–Legendre rule on [a, b].
///
/// Nodes are Newton-refined from the Chebyshev initial guess; used by the
/// oracle-style quadratures in tests and by the smooth kink-split integrals.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess (Abramowitz–Stegun 25.4.30) then Newton on P_n.
        let mut x = math::cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j as f64 + 1.0) * x * p1 - j as f64 * p2) / (j as f64 + 1.0);
            }
            pp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / pp;
            x -= dx;
            if math::abs(dx) < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        out.push((mid - half * x, half * w));
        if n - 1 - i != i {
            out.push((mid + half * x, half * w));
        }
    }
    out
}
