//! Thin layer over `libm` so the numerical code reads like ordinary formulas.

pub(crate) use libm::{atan, cos, exp, log as ln, sin, sinh, sqrt, tan};

use num_complex::Complex64;

pub(crate) const PI: f64 = core::f64::consts::PI;
pub(crate) const TAU: f64 = core::f64::consts::TAU;

/// `e^{i theta}`
#[inline]
pub(crate) fn cis(theta: f64) -> Complex64 {
    Complex64::new(cos(theta), sin(theta))
}

/// `e^{re + i im}` without forming an intermediate complex exponential.
#[inline]
pub(crate) fn cexp(re: f64, im: f64) -> Complex64 {
    cis(im) * exp(re)
}

#[inline]
pub(crate) fn sec(x: f64) -> f64 {
    1.0 / cos(x)
}
