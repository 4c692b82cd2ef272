//! Float math shim.
//!
//! The crate is `no_std`; transcendental functions come from `libm` unless the
//! `std` feature is enabled, in which case the (faster) intrinsics are used.
//! Everything downstream goes through these wrappers so the two builds agree
//! to within the usual <= 1 ulp libm/intrinsic differences.

#![allow(dead_code)]

macro_rules! shim {
    ($name:ident, $libm:ident) => {
        #[inline(always)]
        pub fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$name()
            }
            #[cfg(not(feature = "std"))]
            {
                libm::$libm(x)
            }
        }
    };
}

shim!(exp, exp);
shim!(ln, log);
shim!(sqrt, sqrt);
shim!(sin, sin);
shim!(cos, cos);
shim!(tan, tan);
shim!(atan, atan);
shim!(cosh, cosh);
shim!(sinh, sinh);
shim!(ln_1p, log1p);
shim!(exp_m1, expm1);
shim!(cbrt, cbrt);
shim!(floor, floor);

#[inline(always)]
pub fn powf(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powf(y)
    }
    #[cfg(not(feature = "std"))]
    {
        libm::pow(x, y)
    }
}

#[inline(always)]
pub fn abs(x: f64) -> f64 {
    f64::abs(x)
}
