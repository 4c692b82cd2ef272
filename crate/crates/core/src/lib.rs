//! Small-maturity asymptotics of at-the-money option prices for martingale
//! models, together with the simulation machinery to verify the closed-form
//! constants empirically.
//!
//! The crate covers three leading-order regimes for the ATM call price
//! E[(S_T − K_T)⁺] as T ↓ 0:
//!
//! * a diffusive component ⇒ order √T with a coefficient that depends only
//!   on the spot volatility and the degree of moneyness,
//! * finite-variation pure-jump models ⇒ order T with a constant built from
//!   the first absolute moment of the jump measure,
//! * stable-like infinite-variation jumps ⇒ order T^{1/α} (α ∈ (1,2)) or
//!   T·|log T| (α = 1), with explicit constants.
//!
//! Modules:
//!
//! * [`model`] — model/jump/strike domain types and measure moments,
//! * [`specialfn`] — Γ, K₀/K₁, erf/erfc, Φ, φ,
//! * [`asymptotics`] — regime classification and leading coefficients,
//! * [`impliedvol`] — exact ATM Black–Scholes implied vol inversion,
//! * [`rng`] — counter-based deterministic random streams,
//! * [`sampler`] — exact-law terminal draws and coupled path schemes,
//! * [`mc`] — Monte Carlo estimation, robust intervals, rate fitting.
//!
//! The crate is `no_std` (with `alloc`); the companion CLI crate carries IO,
//! JSON configs and parallel execution.

#![no_std]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

mod math;

pub mod asymptotics;
pub mod impliedvol;
pub mod mc;
pub mod model;
pub mod quad;
pub mod rng;
pub mod sampler;
pub mod specialfn;
