//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test --test acceptance -- --nocapture` to see the lines).
//!
//! Monte Carlo path counts are sized per clause so that the declared
//! statistical band (3 half-widths) dominates the known second-order terms
//! of the compared asymptote while keeping detection power for constant-size
//! errors; the sizing arguments live next to each check.
//!
//! Three clauses are implemented exactly as stated although the underlying
//! quantity provably cannot meet them at the stated maturities — the
//! diffusive law with NIG(ρ=π) jumps at T = 1e-3 (criterion 3), the
//! tempered-stable exponent/coefficient fit on 2⁻⁷..2⁻¹¹ (criterion 6), and
//! the T|log T| ratio at 2⁻²⁰ (criterion 7, second clause). Each has a
//! companion demonstration that the asymptotic statement itself holds deeper
//! into the small-maturity regime.

use smalltime_cli::parallel::Threads;
use smalltime_core::asymptotics::{
    classify, diffusive_coefficient, fv_constant, implied_vol_asymptote, nig_abs_moment,
    stable_constant,
};
use smalltime_core::impliedvol::{atm_implied_vol, atm_price_bs};
use smalltime_core::mc::{
    fit_rate, ApproxCheckSpec, CurvePoint, Estimator, FitModel, McDriver, McParams, Parallelism,
    Serial,
};
use smalltime_core::model::{first_abs_moment, Atom, JumpSpec, ModelSpec, StrikeRule};
use smalltime_core::quad;
use smalltime_core::rng::RngStream;
use smalltime_core::specialfn::{bessel_k, gamma_fn, std_normal_cdf, std_normal_pdf};

const PI: f64 = std::f64::consts::PI;

fn driver_params() -> McParams {
    McParams::default()
}

fn estimate(
    model: &ModelSpec,
    strike: &StrikeRule,
    t: f64,
    n_paths: u64,
    estimator: Estimator,
    seed: u64,
    stream: u64,
) -> smalltime_core::mc::McEstimate {
    let threads = Threads::auto();
    let driver = McDriver { params: driver_params(), parallelism: &threads };
    driver
        .estimate_call(model, strike, t, n_paths, estimator, seed, stream)
        .expect("estimation succeeds")
}

fn brownian(sigma0: f64) -> ModelSpec {
    ModelSpec::brownian(1.0, sigma0).unwrap()
}

fn two_atom() -> JumpSpec {
    JumpSpec::compound_poisson(vec![
        Atom { size: 0.5, intensity: 1.0 },
        Atom { size: -0.5, intensity: 1.0 },
    ])
    .unwrap()
}

/// Criterion 1: diffusive √T law. σ₀ = 0.2, θ = 0, 4·10⁶ exact terminal
/// draws at T ∈ {1e-2, 1e-3}: estimates within 3 half-widths of
/// (σ₀/√2π)·√T, and the price ratio within 2% of √0.1. The Brownian price
/// equals the asymptote exactly, so the band is pure Monte Carlo noise.
#[test]
fn criterion_01_diffusive_sqrt_t_law() {
    let model = brownian(0.2);
    let strike = StrikeRule::atm();
    let coeff = diffusive_coefficient(0.2, 0.0);
    let mut prices = Vec::new();
    for (i, &t) in [1e-2f64, 1e-3].iter().enumerate() {
        let est = estimate(&model, &strike, t, 4_000_000, Estimator::Mean, 101, i as u64);
        let target = coeff * t.sqrt();
        assert!(
            (est.value - target).abs() <= 3.0 * est.half_width,
            "criterion 1: FAIL — T={t}: {} vs {target} ± {}",
            est.value,
            3.0 * est.half_width
        );
        prices.push(est.value);
    }
    let ratio = prices[1] / prices[0];
    let expect = 0.1f64.sqrt();
    assert!(
        (ratio / expect - 1.0).abs() <= 0.02,
        "criterion 1: FAIL — price ratio {ratio} vs {expect}"
    );
    println!("criterion 1: PASS — √T law at T=1e-2, 1e-3 (ratio {ratio:.6} vs {expect:.6})");
}

/// Kink-split quadrature oracle for E[N(−θ, σ²)⁺].
fn theta_coefficient_oracle(sigma: f64, theta: f64) -> f64 {
    let lo = theta / sigma;
    quad::integrate_to_inf(|u| sigma * u * std_normal_pdf(lo + u), 0.0, 1e-14)
}

/// Criterion 2: θ-moneyness coefficient. σ₀ = 0.3, θ ∈ {−0.2, 0.1} at
/// T = 1e-3: MC within 3 half-widths of E[N(−θ,σ₀²)⁺]·√T, and the closed
/// form matches the quadrature oracle to 1e-10.
#[test]
fn criterion_02_theta_moneyness_coefficient() {
    let model = brownian(0.3);
    let t = 1e-3;
    for (i, &theta) in [-0.2f64, 0.1].iter().enumerate() {
        let coeff = diffusive_coefficient(0.3, theta);
        let oracle = theta_coefficient_oracle(0.3, theta);
        assert!(
            (coeff - oracle).abs() <= 1e-10,
            "criterion 2: FAIL — coefficient {coeff} vs oracle {oracle} at θ={theta}"
        );
        let strike = StrikeRule::new(theta).unwrap();
        let est = estimate(&model, &strike, t, 4_000_000, Estimator::Mean, 202, i as u64);
        let target = coeff * t.sqrt();
        assert!(
            (est.value - target).abs() <= 3.0 * est.half_width,
            "criterion 2: FAIL — θ={theta}: {} vs {target} ± {}",
            est.value,
            3.0 * est.half_width
        );
    }
    println!("criterion 2: PASS — θ-coefficients match the oracle and the MC band");
}

/// Criterion 3, as stated: σ₀ = 0.2 plus NIG(ρ=π) jumps must reproduce the
/// jump-free √T estimate within 3 half-widths at T = 1e-3.
///
/// This cannot hold: the jump part alone contributes at least
/// (ρ/π)·e^{ρT}·T·K₀(ρT) ≈ 5.9e-3 to the price at T = 1e-3, more than twice
/// the entire √T term (2.52e-3), while 3 half-widths at 4·10⁶ paths are
/// ≈ 8e-5. The T|log T| correction is o(√T) only asymptotically; see the
/// companion test at T = 1e-10 where the ordering has kicked in.
#[test]
fn criterion_03_jump_invariance_as_stated() {
    let model =
        ModelSpec::frozen_levy(1.0, 0.2, Some(JumpSpec::nig(PI).unwrap())).unwrap();
    let strike = StrikeRule::atm();
    let coeff = diffusive_coefficient(0.2, 0.0);
    let t = 1e-3;
    let est = estimate(&model, &strike, t, 4_000_000, Estimator::Mean, 303, 0);
    let target = coeff * t.sqrt();
    let band = 3.0 * est.half_width;
    let ok = (est.value - target).abs() <= band;
    println!(
        "criterion 3: {} — T=1e-3 estimate {:.6e} vs √T term {:.6e} ± {:.2e} \
         (jump contribution ≥ {:.2e} dominates at this maturity)",
        if ok { "PASS" } else { "FAIL" },
        est.value,
        target,
        band,
        0.5 * nig_abs_moment(PI, t).unwrap(),
    );
    assert!(
        ok,
        "criterion 3: FAIL — estimate {:.6e} vs √T term {:.6e} ± {:.2e}: the NIG term \
         (≥ {:.2e}) exceeds the band at T=1e-3; the √T regime is not reached yet",
        est.value,
        target,
        band,
        0.5 * nig_abs_moment(PI, t).unwrap(),
    );
}

/// Companion to criterion 3: at T = 1e-10 the T|log T| jump term has dropped
/// far below the √T term and the stated check passes with the identical
/// coefficient.
#[test]
fn criterion_03_companion_jump_invariance_deep_regime() {
    let jumpy = ModelSpec::frozen_levy(1.0, 0.2, Some(JumpSpec::nig(PI).unwrap())).unwrap();
    let strike = StrikeRule::atm();
    let coeff = diffusive_coefficient(0.2, 0.0);
    let t = 1e-10;
    let est = estimate(&jumpy, &strike, t, 4_000_000, Estimator::Mean, 304, 0);
    let target = coeff * t.sqrt();
    assert!(
        (est.value - target).abs() <= 3.0 * est.half_width,
        "criterion 3 companion: FAIL — {} vs {target} ± {}",
        est.value,
        3.0 * est.half_width
    );
    // The classification coefficient is bit-identical with and without jumps.
    let plain = classify(&brownian(0.2), &strike).unwrap().coefficient;
    let with_jumps = classify(&jumpy, &strike).unwrap().coefficient;
    assert_eq!(plain.to_bits(), with_jumps.to_bits());
    println!(
        "criterion 3 companion: PASS — jump invariance holds at T=1e-10 \
         ({:.3e} vs {:.3e} ± {:.1e})",
        est.value,
        target,
        3.0 * est.half_width
    );
}

/// Criterion 4: finite-variation linear law. Symmetric ±0.5 atoms at
/// T ∈ {0.04, 0.02, 0.01} within 3 half-widths of 0.5·T; the one-sided atom
/// model gives the same constant; fitted exponent ∈ 1 ± 0.05.
///
/// Value checks run at N = 10⁴: the exact price is 0.5T(1−T+O(T²)), so the
/// 3-half-width band must stay above the 0.5T² term (8e-4 at T = 0.04 vs a
/// 4e-3 band at N = 10⁴, while a μ-vs-2μ constant error is 5× the band).
/// The exponent fit runs at N = 4·10⁶ on a 5-point dyadic extension where
/// the drift of the local slope, 1 − T/(1−T), stays inside the margin.
#[test]
fn criterion_04_finite_variation_linear_law() {
    let symmetric = ModelSpec::frozen_levy(1.0, 0.0, Some(two_atom())).unwrap();
    let one_sided = ModelSpec::frozen_levy(
        1.0,
        0.0,
        Some(JumpSpec::compound_poisson(vec![Atom { size: 0.5, intensity: 1.0 }]).unwrap()),
    )
    .unwrap();
    let strike = StrikeRule::atm();
    for (m, model) in [&symmetric, &one_sided].into_iter().enumerate() {
        let c = 2.0 * classify(model, &strike).unwrap().coefficient;
        assert!((c - 1.0).abs() < 1e-14, "criterion 4: constant must be 1, got {c}");
        for (i, &t) in [0.04f64, 0.02, 0.01].iter().enumerate() {
            let est = estimate(
                model,
                &strike,
                t,
                10_000,
                Estimator::Mean,
                404 + m as u64,
                i as u64,
            );
            let target = 0.5 * t;
            assert!(
                (est.value - target).abs() <= 3.0 * est.half_width,
                "criterion 4: FAIL — model {m}, T={t}: {} vs {target} ± {}",
                est.value,
                3.0 * est.half_width
            );
        }
    }
    // Exponent fit on {0.04, …, 0.0025}.
    let grid: Vec<f64> = (0..5).map(|k| 0.04 / 2.0f64.powi(k)).collect();
    let threads = Threads::auto();
    let driver = McDriver { params: driver_params(), parallelism: &threads };
    let curve = driver
        .price_curve(&symmetric, &strike, &grid, 4_000_000, Estimator::Mean, 405)
        .unwrap();
    let points: Vec<CurvePoint> = curve
        .iter()
        .map(|(t, e)| CurvePoint { t: *t, value: e.value, half_width: Some(e.half_width) })
        .collect();
    let fit = fit_rate(&points, FitModel::PurePower).unwrap();
    assert!(
        (fit.exponent_hat - 1.0).abs() <= 0.05,
        "criterion 4: FAIL — fitted exponent {}",
        fit.exponent_hat
    );
    println!(
        "criterion 4: PASS — linear law, one-sided constant matches, exponent {:.4}",
        fit.exponent_hat
    );
}

/// Criterion 5: stable-like power law. Stable(1.5, f₊, f₋): median-of-means
/// (N = 10⁶, 64 blocks) of the call price at T ∈ {2⁻⁶..2⁻¹⁰} within 3
/// robust half-widths of C(1.5,f₊,f₋)·T^{2/3}/2 — exact at every T in this
/// sampler convention, so the band is noise plus median-of-means skew — and
/// fitted exponent ∈ 2/3 ± 0.05. Both the symmetric (1,1) and asymmetric
/// (2, 0.5) cases.
#[test]
fn criterion_05_stable_power_law() {
    let strike = StrikeRule::atm();
    for (m, (fp, fm)) in [(1.0f64, 1.0f64), (2.0, 0.5)].into_iter().enumerate() {
        let model = ModelSpec::frozen_levy(
            1.0,
            0.0,
            Some(JumpSpec::stable(1.5, fp, fm).unwrap()),
        )
        .unwrap();
        let constant = stable_constant(1.5, fp, fm).unwrap();
        let mut points = Vec::new();
        for (i, k) in (6..=10).enumerate() {
            let t = 2.0f64.powi(-k);
            let est = estimate(
                &model,
                &strike,
                t,
                1_000_000,
                Estimator::MedianOfMeans { blocks: 64 },
                505 + m as u64,
                i as u64,
            );
            let target = 0.5 * constant * t.powf(2.0 / 3.0);
            assert!(
                (est.value - target).abs() <= 3.0 * est.half_width,
                "criterion 5: FAIL — f=({fp},{fm}), T=2^-{k}: {} vs {target} ± {}",
                est.value,
                3.0 * est.half_width
            );
            points.push(CurvePoint { t, value: est.value, half_width: Some(est.half_width) });
        }
        let fit = fit_rate(&points, FitModel::PurePower).unwrap();
        assert!(
            (fit.exponent_hat - 2.0 / 3.0).abs() <= 0.05,
            "criterion 5: FAIL — f=({fp},{fm}) fitted exponent {}",
            fit.exponent_hat
        );
    }
    println!("criterion 5: PASS — stable T^(2/3) law, symmetric and asymmetric constants");
}

/// E|Z_T| of the tempered-stable model (α = 1.4, c = 1, decay = 5), frozen
/// from the characteristic-function quadrature oracle
/// (crates/core/tests/oracles.rs::tempered_stable_fit_prediction).
const TEMPERED_ABS_MOMENT_2POW7_TO_11: [f64; 5] =
    [5.39504163e-2, 3.63423654e-2, 2.41889954e-2, 1.59106827e-2, 1.03496189e-2];

/// Criterion 6, as stated: tempered-stable fit on T ∈ {2⁻⁷..2⁻¹¹} must give
/// exponent 1/1.4 ± 0.07 and coefficient within 10% of C(1.4,1,1)/2, and
/// halving the truncation cutoff must move the estimates by less than one
/// half-width.
///
/// The exponent/coefficient clauses cannot hold at these maturities: the
/// exact curve (cf-quadrature, zero noise) gives exponent 0.5956 and
/// coefficient ratio 0.2985 because the tempering correction decays only
/// like T^{1−1/α} = T^{0.286}; 10% agreement is first reached near T = 2⁻¹⁷.
/// The cutoff-halving clause and the sampler-vs-oracle agreement hold and
/// are asserted first.
#[test]
fn criterion_06_cgmy_regime_as_stated() {
    let model = ModelSpec::frozen_levy(
        1.0,
        0.0,
        Some(JumpSpec::tempered_stable_symmetric(1.4, 1.0, 5.0).unwrap()),
    )
    .unwrap();
    let strike = StrikeRule::atm();
    let threads = Threads::auto();
    // ε = 5e-4: the Gaussian-substitution bias of the scheme decays like
    // ε^{3−α} and is ≈ 1e-5 here, far inside a half-width at N = 2.5e5, so
    // the ε-halving comparison measures the scheme and not the cutoff.
    let run = |eps: f64, seed: u64| {
        let driver = McDriver {
            params: McParams { n_steps: 64, truncation_eps: eps },
            parallelism: &threads,
        };
        let grid: Vec<f64> = (7..=11).map(|k| 2.0f64.powi(-k)).collect();
        driver
            .price_curve(&model, &strike, &grid, 250_000, Estimator::Mean, seed)
            .unwrap()
    };
    let base = run(5e-4, 606);
    let halved = run(2.5e-4, 607);

    // Truncation consistency: halving ε moves each estimate by less than the
    // half-widths of the two independent runs combined (the small jumps are
    // moment-matched, not dropped).
    for ((t, a), (_, b)) in base.iter().zip(&halved) {
        assert!(
            (a.value - b.value).abs() <= a.half_width + b.half_width,
            "criterion 6: FAIL — ε-halving moved T={t} estimate from {} to {} (hw {} + {})",
            a.value,
            b.value,
            a.half_width,
            b.half_width
        );
    }

    // Sampler agrees with the exact curve from the cf oracle.
    for ((t, est), oracle_abs) in base.iter().zip(TEMPERED_ABS_MOMENT_2POW7_TO_11) {
        let target = 0.5 * oracle_abs;
        assert!(
            (est.value - target).abs() <= 3.0 * est.half_width + 0.005 * target,
            "criterion 6: sampler drifted from the exact curve at T={t}: {} vs {target}",
            est.value
        );
    }

    let points: Vec<CurvePoint> = base
        .iter()
        .map(|(t, e)| CurvePoint { t: *t, value: e.value, half_width: Some(e.half_width) })
        .collect();
    let fit = fit_rate(&points, FitModel::PurePower).unwrap();
    let constant = stable_constant(1.4, 1.0, 1.0).unwrap();
    let exponent_ok = (fit.exponent_hat - 1.0 / 1.4).abs() <= 0.07;
    let coeff_ok = (fit.coefficient_hat / (0.5 * constant) - 1.0).abs() <= 0.10;
    println!(
        "criterion 6: {} — ε-halving PASS, sampler-vs-oracle PASS; exponent {:.4} \
         (target {:.4} ± 0.07) {}, coefficient ratio {:.4} (target 1 ± 0.10) {}",
        if exponent_ok && coeff_ok { "PASS" } else { "FAIL" },
        fit.exponent_hat,
        1.0 / 1.4,
        if exponent_ok { "PASS" } else { "FAIL" },
        fit.coefficient_hat / (0.5 * constant),
        if coeff_ok { "PASS" } else { "FAIL" },
    );
    assert!(
        exponent_ok && coeff_ok,
        "criterion 6: FAIL — fitted exponent {:.4} (need {:.4}±0.07), coefficient ratio \
         {:.4} (need 1±0.10): the tempering correction is still ~50% of the leading term \
         on this grid (zero-noise fit gives 0.5956 / 0.2985); the asymptote is only \
         reached near T = 2^-17",
        fit.exponent_hat,
        1.0 / 1.4,
        fit.coefficient_hat / (0.5 * constant),
    );
}

/// Criterion 7: T·|log T| law for NIG(ρ=π). Monte Carlo against the exact
/// absolute-moment formula at T ∈ {2⁻⁸, 2⁻¹⁰} within 3 robust half-widths
/// (this part is exact-vs-exact and passes); then, as stated, the ratio
/// nig_abs_moment(π,T)/(2·T|log T|) must be within 5% of 1 at T = 2⁻²⁰.
///
/// The ratio equals 1 − 1.0288/|ln T| + O(T): at 2⁻²⁰ it is 0.9258 — 7.4%
/// below 1 — and first enters the 5% band near T = 2⁻³⁰. The convergence
/// itself is demonstrated by the companion test.
#[test]
fn criterion_07_t_log_t_law_as_stated() {
    let model = ModelSpec::frozen_levy(1.0, 0.0, Some(JumpSpec::nig(PI).unwrap())).unwrap();
    let strike = StrikeRule::atm();
    for (i, k) in [8, 10].into_iter().enumerate() {
        let t = 2.0f64.powi(-k);
        let est = estimate(
            &model,
            &strike,
            t,
            1_000_000,
            Estimator::MedianOfMeans { blocks: 64 },
            707,
            i as u64,
        );
        let target = 0.5 * nig_abs_moment(PI, t).unwrap();
        assert!(
            (est.value - target).abs() <= 3.0 * est.half_width,
            "criterion 7: FAIL — T=2^-{k}: {} vs exact {target} ± {}",
            est.value,
            3.0 * est.half_width
        );
    }
    let t = 2.0f64.powi(-20);
    let ratio = nig_abs_moment(PI, t).unwrap() / (2.0 * t * t.ln().abs());
    let ok = (ratio - 1.0).abs() <= 0.05;
    println!(
        "criterion 7: {} — MC vs exact formula PASS at 2^-8, 2^-10; ratio to 2T|log T| \
         at 2^-20 is {ratio:.4} (need 1 ± 0.05) {}",
        if ok { "PASS" } else { "FAIL" },
        if ok { "PASS" } else { "FAIL" },
    );
    assert!(
        ok,
        "criterion 7: FAIL — nig_abs_moment(π,2^-20)/(2·T|log T|) = {ratio:.4}, off by \
         1.0288/|ln T| = {:.4}; the log-rate convergence first reaches 5% near T = 2^-30",
        1.0288 / t.ln().abs()
    );
}

/// Companion to criterion 7: the ratio converges to 1 at the logarithmic
/// rate — its deficit halves from 2⁻²⁰ to 2⁻⁴⁰ and is within 5% by 2⁻³⁰.
#[test]
fn criterion_07_companion_log_rate_convergence() {
    let deficit = |k: i32| {
        let t = 2.0f64.powi(-k);
        1.0 - nig_abs_moment(PI, t).unwrap() / (2.0 * t * t.ln().abs())
    };
    let d20 = deficit(20);
    let d40 = deficit(40);
    assert!(d20 > 0.0 && d40 > 0.0 && d40 < 0.55 * d20, "deficits {d20} {d40}");
    assert!(deficit(30).abs() < 0.05, "deficit at 2^-30: {}", deficit(30));
    println!(
        "criterion 7 companion: PASS — ratio deficit {:.4} (2^-20) → {:.4} (2^-40), \
         inside 5% from 2^-30",
        d20, d40
    );
}

/// Criterion 8: implied-vol corollaries. (a) Heston(S₀=100, v₀=0.04, κ=1,
/// θᵥ=0.04, ξ=0.5, ρ=−0.7): implied vol of the MC price at T = 2⁻¹⁰ within
/// 0.2 ± 0.01. (b) Finite-variation model: σ_impl/√T within 5% of
/// √(π/2)·C/S₀ at T = 2⁻¹² (N = 6.4·10⁷ keeps the relative noise ≈ 0.6%,
/// an 8σ margin inside the 5% band).
#[test]
fn criterion_08_implied_vol_corollaries() {
    let heston = ModelSpec::heston(100.0, 0.04, 1.0, 0.04, 0.5, -0.7).unwrap();
    let strike = StrikeRule::atm();
    let t = 2.0f64.powi(-10);
    let est = estimate(&heston, &strike, t, 200_000, Estimator::Mean, 808, 0);
    let heston_implied = atm_implied_vol(est.value, 100.0, t).unwrap().sigma_impl;
    assert!(
        (heston_implied - 0.2).abs() <= 0.01,
        "criterion 8: FAIL — Heston implied vol {heston_implied} vs 0.2 ± 0.01"
    );
    let asym = implied_vol_asymptote(&heston).unwrap();
    assert!((asym.coefficient - 0.2).abs() < 1e-12);

    let fv = ModelSpec::frozen_levy(1.0, 0.0, Some(two_atom())).unwrap();
    let t = 2.0f64.powi(-12);
    let est = estimate(&fv, &strike, t, 64_000_000, Estimator::Mean, 809, 0);
    let implied = atm_implied_vol(est.value, 1.0, t).unwrap();
    let c = fv_constant(&two_atom()).unwrap();
    let target = (PI / 2.0).sqrt() * c / 1.0;
    let got = implied.sigma_impl / t.sqrt();
    assert!(
        (got / target - 1.0).abs() <= 0.05,
        "criterion 8: FAIL — FV implied vol slope {got} vs {target}"
    );
    println!(
        "criterion 8: PASS — Heston implied {heston_implied:.4} ∈ 0.2 ± 0.01; \
         FV slope ratio {:.4}",
        got / target
    );
}

/// Criterion 9: coupled approximation rates. The Lévy-driven SDE with a
/// Brownian driver (geometric Brownian motion) must fit a coupled-gap
/// exponent ≥ 0.9 (predicted 1); Heston ≥ 0.55 (predicted > 0.5). Dyadic
/// grids k = 4..10, 10⁵ pairs per point.
#[test]
fn criterion_09_approximation_rates() {
    let threads = Threads::auto();
    let driver = McDriver { params: driver_params(), parallelism: &threads };
    let grid: Vec<f64> = (4..=10).map(|k| 2.0f64.powi(-k)).collect();

    let gbm = ModelSpec::levy_sde(
        1.0,
        smalltime_core::model::CoefficientFn::Linear { a: 1.0 },
        0.3,
        None,
    )
    .unwrap();
    let check = ApproxCheckSpec::diffusive(1.0).unwrap();
    let report = driver.approx_error_curve(&gbm, &check, &grid, 100_000, 909).unwrap();
    assert!(
        report.fit.exponent_hat >= 0.9,
        "criterion 9: FAIL — GBM gap exponent {}",
        report.fit.exponent_hat
    );
    let gbm_exp = report.fit.exponent_hat;

    let heston = ModelSpec::heston(1.0, 0.04, 1.0, 0.04, 0.5, -0.7).unwrap();
    let check = ApproxCheckSpec::diffusive(0.0).unwrap();
    let report = driver.approx_error_curve(&heston, &check, &grid, 100_000, 910).unwrap();
    assert!(
        report.fit.exponent_hat >= 0.55,
        "criterion 9: FAIL — Heston gap exponent {}",
        report.fit.exponent_hat
    );
    println!(
        "criterion 9: PASS — coupled-gap exponents: GBM {gbm_exp:.3} (≥ 0.9), Heston {:.3} (≥ 0.55)",
        report.fit.exponent_hat
    );
}

/// Criterion 10: the power-law Gaussian martingale (ε = 0.25) fits exponent
/// 0.75 ± 0.02 and coefficient 1/√(2π) ± 3% — the curve is exact at every
/// maturity, so this is pure fit noise.
#[test]
fn criterion_10_power_counterexample_martingale() {
    let threads = Threads::auto();
    let driver = McDriver { params: driver_params(), parallelism: &threads };
    let grid: Vec<f64> = (4..=10).map(|k| 2.0f64.powi(-k)).collect();
    let curve = driver.power_model_curve(0.25, &grid, 1_000_000, 1010).unwrap();
    let points: Vec<CurvePoint> = curve
        .iter()
        .map(|(t, e)| CurvePoint { t: *t, value: e.value, half_width: Some(e.half_width) })
        .collect();
    let fit = fit_rate(&points, FitModel::PurePower).unwrap();
    let expect = 1.0 / (2.0 * PI).sqrt();
    assert!(
        (fit.exponent_hat - 0.75).abs() <= 0.02,
        "criterion 10: FAIL — exponent {}",
        fit.exponent_hat
    );
    assert!(
        (fit.coefficient_hat / expect - 1.0).abs() <= 0.03,
        "criterion 10: FAIL — coefficient {} vs {expect}",
        fit.coefficient_hat
    );
    println!(
        "criterion 10: PASS — exponent {:.4}, coefficient {:.5} vs {expect:.5}",
        fit.exponent_hat, fit.coefficient_hat
    );
}

/// Criterion 11: the deterministic formula/unit suite.
#[test]
fn criterion_11_formula_suite() {
    // Special-function anchors at the stated tolerances.
    assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-12);
    assert!(((gamma_fn(0.5).unwrap() - PI.sqrt()) / PI.sqrt()).abs() < 1e-12);
    assert!(((gamma_fn(1.0 / 3.0).unwrap() - 2.678_938_534_707_747_6) / 2.678).abs() < 1e-12);
    assert!(((bessel_k(0, 1.0).unwrap() - 0.421_024_438_240_708_3) / 0.42).abs() < 1e-9);
    assert!(((bessel_k(1, 1.0).unwrap() - 0.601_907_230_197_234_6) / 0.60).abs() < 1e-9);
    assert!((std_normal_cdf(0.0) - 0.5).abs() < 1e-14);
    assert!((std_normal_cdf(0.1) - 0.539_827_837_277_029).abs() < 1e-14);

    // Symmetric-collapse identity to 1e-12 and f₊ ↔ f₋ symmetry.
    let mut alpha = 1.05;
    while alpha < 1.95 {
        let c = stable_constant(alpha, 0.7, 0.7).unwrap();
        let collapse = 2.0 / PI * (1.4f64).powf(1.0 / alpha) * gamma_fn(1.0 - 1.0 / alpha).unwrap();
        assert!(((c - collapse) / collapse).abs() < 1e-12, "collapse at α={alpha}");
        let a = stable_constant(alpha, 2.0, 0.5).unwrap();
        let b = stable_constant(alpha, 0.5, 2.0).unwrap();
        assert!((a - b).abs() <= 1e-14 * a, "swap symmetry at α={alpha}");
        alpha += 0.1;
    }

    // μ ≤ C ≤ 2μ on 1000 random atom sets.
    let mut rng = RngStream::new(1111, 0);
    for _ in 0..1000 {
        let n = 1 + (rng.uniform() * 5.0) as usize;
        let atoms: Vec<Atom> = (0..n)
            .map(|_| Atom {
                size: (rng.uniform() - 0.5) * 4.0 + 0.01,
                intensity: rng.uniform() * 2.0 + 0.01,
            })
            .collect();
        let spec = JumpSpec::compound_poisson(atoms).unwrap();
        let mu = first_abs_moment(&spec).unwrap().mu;
        let c = fv_constant(&spec).unwrap();
        assert!(c >= mu - 1e-12 && c <= 2.0 * mu + 1e-12, "μ={mu} C={c}");
    }

    // Implied-vol roundtrip to 1e-9 relative on 1000 cases.
    let mut rng = RngStream::new(1112, 0);
    for _ in 0..1000 {
        let s0 = 1.0 + 199.0 * rng.uniform();
        let sigma = 0.01 + 2.99 * rng.uniform();
        let t = 1e-4 + 5.0 * rng.uniform();
        let price = atm_price_bs(s0, sigma, t).unwrap();
        let back = atm_implied_vol(price, s0, t).unwrap().sigma_impl;
        assert!(((back - sigma) / sigma).abs() <= 1e-9, "roundtrip {sigma} → {back}");
    }

    // Seed determinism: same seed bit-identical, serial = threaded.
    let model = ModelSpec::frozen_levy(1.0, 0.1, Some(two_atom())).unwrap();
    let strike = StrikeRule::atm();
    let serial = McDriver::serial();
    let a = serial
        .estimate_call(&model, &strike, 0.01, 50_000, Estimator::Mean, 42, 0)
        .unwrap();
    let b = serial
        .estimate_call(&model, &strike, 0.01, 50_000, Estimator::Mean, 42, 0)
        .unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let threads = Threads::new(2);
    let driver = McDriver { params: McParams::default(), parallelism: &threads };
    let c = driver
        .estimate_call(&model, &strike, 0.01, 50_000, Estimator::Mean, 42, 0)
        .unwrap();
    assert_eq!(a.value.to_bits(), c.value.to_bits());
    let _ = &Serial as &dyn Parallelism;

    println!("criterion 11: PASS — formula, identity, roundtrip and determinism suite");
}
