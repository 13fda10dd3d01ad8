//! Gaussian switching functions, their proper-time Fourier transforms, and the
//! conversion of a detector's parameters to global coordinate time.

use num_complex::Complex64;

use crate::adsmodes::{check_rho, AdsGeometry, Motion};
use crate::math::{cexp, exp};
use crate::{Error, Result};

/// One pointlike detector with Gaussian switching
/// `chi(tau) = exp(-(tau - center)^2 / (2 width^2))`.
///
/// `gap`, `width` and `center` are proper quantities of the detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorConfig {
    pub gap: f64,
    pub width: f64,
    pub center: f64,
    pub coupling: f64,
    pub rho: f64,
    pub motion: Motion,
}

impl DetectorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::Domain {
                what: "switching width",
                value: self.width,
            });
        }
        for (what, v) in [
            ("detector gap", self.gap),
            ("switching center", self.center),
            ("coupling", self.coupling),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        check_rho(self.rho)
    }

    pub fn chi(&self, tau: f64) -> f64 {
        let z = (tau - self.center) / self.width;
        exp(-0.5 * z * z)
    }

    /// `chi_hat(k) = (2 pi)^{-1/2} integral chi(tau) e^{i k tau} dtau
    ///             = width exp(-k^2 width^2 / 2 + i k center)`.
    pub fn chi_hat(&self, k: f64) -> Complex64 {
        let s = self.width;
        cexp(-0.5 * k * k * s * s, k * self.center) * s
    }

    pub fn to_tilde(&self, geom: &AdsGeometry) -> TildeFrame {
        let a = geom.redshift_dtau_dt(self.motion, self.rho);
        TildeFrame {
            dtau_dt: a,
            gap: self.gap * a,
            width: self.width / a,
            center: self.center / a,
        }
    }

    pub fn with_gap(&self, gap: f64) -> Self {
        Self { gap, ..*self }
    }
}

/// A detector's switching expressed in coordinate time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TildeFrame {
    pub dtau_dt: f64,
    /// Coordinate frequency, `gap * dtau_dt`.
    pub gap: f64,
    /// Coordinate width, `width / dtau_dt`.
    pub width: f64,
    /// Coordinate switching center.
    pub center: f64,
}

impl TildeFrame {
    /// Coordinate switching function `chi(tau(t)) dtau/dt`.
    pub fn chi(&self, t: f64) -> f64 {
        let z = (t - self.center) / self.width;
        self.dtau_dt * exp(-0.5 * z * z)
    }
}
