//! Shared truncation machinery for the mode sums and the image sums.

use num_complex::Complex64;

use super::{Detector, Scenario, Truncation};
use crate::adsmodes::RadialModes;
use crate::math::{exp, PI};
use crate::{Error, Result};

/// How a series was cut.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SeriesReport {
    /// Terms summed (modes, or images for a light-cone sum).
    pub terms: usize,
    /// Magnitude of the last term added.
    pub last_term: f64,
}

/// Running sum that stops after `consecutive_below` successive terms each
/// below `tol |sum|`. Stopping is disabled until the caller says the terms
/// have passed the peak of their envelope.
pub(crate) struct Accumulator {
    sum: Complex64,
    below: usize,
    report: SeriesReport,
    tol: f64,
    need: usize,
}

impl Accumulator {
    pub(crate) fn new(trunc: &Truncation) -> Self {
        Self {
            sum: Complex64::new(0.0, 0.0),
            below: 0,
            report: SeriesReport::default(),
            tol: trunc.tol,
            need: trunc.consecutive_below,
        }
    }

    /// Adds a term and returns `true` once the series has converged.
    pub(crate) fn push(&mut self, term: Complex64, past_peak: bool) -> bool {
        self.sum += term;
        self.report.terms += 1;
        self.report.last_term = term.norm();
        if past_peak && self.report.last_term <= self.tol * self.sum.norm() {
            self.below += 1;
        } else {
            self.below = 0;
        }
        self.below >= self.need
    }

    pub(crate) fn finish(self) -> (Complex64, SeriesReport) {
        (self.sum, self.report)
    }

    pub(crate) fn not_converged(&self, series: &'static str) -> Error {
        Error::TruncationNotConverged {
            series,
            terms: self.report.terms,
            last_term: self.report.last_term,
        }
    }
}

/// `sum_n term(omega_n, phi_n(0), phi_n(rho_B))` over the l = 0 modes.
/// `peak` is the frequency at which the term envelope is largest.
pub(crate) fn l0_series<F>(
    scen: &Scenario,
    trunc: &Truncation,
    series: &'static str,
    peak: f64,
    mut term: F,
) -> Result<(Complex64, SeriesReport)>
where
    F: FnMut(f64, f64, f64) -> Complex64,
{
    let geom = scen.geom();
    let centre = RadialModes::new(geom, scen.bc(), 0, 0.0, 1.0)?;
    let point = RadialModes::new(geom, scen.bc(), 0, scen.rho_b(), 1.0)?;
    let mut acc = Accumulator::new(trunc);
    for (a, b) in centre.zip(point).take(trunc.n_max) {
        let w = a.omega as f64;
        if acc.push(term(w, a.value, b.value), w >= peak) {
            return Ok(acc.finish());
        }
    }
    Err(acc.not_converged(series))
}

/// Local term of one detector as a double sum over `l` and `n` of
/// `(pi/omega) phi_{nl0}^2 |chi_hat(omega/a + gap)|^2`, evaluated on the
/// polar axis. Each `l` block is a truncated sum; the block sum stops under
/// the same rule.
pub(crate) fn local_double_series(
    scen: &Scenario,
    trunc: &Truncation,
    which: Detector,
) -> Result<(f64, SeriesReport)> {
    let det = scen.detector(which);
    let a = scen.frame(which).dtau_dt;
    let s = det.width;
    let (gap, rho) = (det.gap, det.rho);
    let peak = -gap * a;
    let envelope = |w: f64| {
        let k = w / a + gap;
        s * s * exp(-k * k * s * s)
    };
    if rho == 0.0 {
        // Only l = 0 survives at the centre.
        let modes = RadialModes::new(scen.geom(), scen.bc(), 0, 0.0, 1.0)?;
        let mut acc = Accumulator::new(trunc);
        for m in modes.take(trunc.n_max) {
            let w = m.omega as f64;
            let t = PI / w * m.value * m.value * envelope(w);
            if acc.push(Complex64::new(t, 0.0), w >= peak) {
                let (v, r) = acc.finish();
                return Ok((v.re, r));
            }
        }
        return Err(acc.not_converged("local term"));
    }
    let mut outer = Accumulator::new(trunc);
    let mut total_terms = 0;
    for l in 0..=trunc.l_max {
        let modes = RadialModes::new(scen.geom(), scen.bc(), l, rho, 1.0)?;
        let mut inner = Accumulator::new(trunc);
        let mut converged = false;
        for m in modes.take(trunc.n_max) {
            let w = m.omega as f64;
            let t = PI / w * m.value * m.value * envelope(w);
            if inner.push(Complex64::new(t, 0.0), w >= peak) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(inner.not_converged("local term l block"));
        }
        let (block, r) = inner.finish();
        total_terms += r.terms;
        // The l block starts at omega = l + 1; it is past the peak once that is.
        if outer.push(block, (l + 1) as f64 >= peak) {
            let (v, mut r) = outer.finish();
            r.terms = total_terms;
            return Ok((v.re, r));
        }
    }
    Err(outer.not_converged("local term l blocks"))
}

/// Smallest image count `K` such that every image `|N| > K` is negligible:
/// the light-cone distance `(K pi - rho) - |delay|` is positive and
/// `exp(-gap^2 / spread)` is below `tol`. All quantities in coordinate time.
pub(crate) fn image_window(
    rho: f64,
    delay: f64,
    spread: f64,
    trunc: &Truncation,
) -> Result<usize> {
    let mut last = 1.0;
    for k in 1..=trunc.image_n_max {
        let gap = (k as f64 * PI - rho) - delay.abs();
        if gap > 0.0 {
            last = exp(-gap * gap / spread);
            if last < trunc.tol {
                return Ok(k);
            }
        }
    }
    Err(Error::TruncationNotConverged {
        series: "light-cone images",
        terms: 2 * trunc.image_n_max + 1,
        last_term: last,
    })
}

/// Sign attached to image `N`, `(-eps)^p(N) sign(N + 1/2)`.
pub(crate) fn image_sign(scen: &Scenario, n: i64) -> f64 {
    let s = if n >= 0 { 1.0 } else { -1.0 };
    s * scen.bc().reflection_sign(n)
}
