//! Two static detectors: A at the centre with `d tau/dt = L`, B at `rho_B`
//! with `d tau/dt = L sec(rho_B)`.

use num_complex::Complex64;

use super::series::{image_sign, image_window, l0_series, local_double_series, SeriesReport};
use super::{l_pair_report, lightcone, CausalPair, Detector, Scenario, ScenarioKind, Truncation};
use crate::math::{cexp, cos, sec, sin, sqrt, PI};
use crate::Result;

pub(crate) fn l_local(
    scen: &Scenario,
    trunc: &Truncation,
    which: Detector,
) -> Result<(f64, SeriesReport)> {
    scen.require_kind(ScenarioKind::Static)?;
    local_double_series(scen, trunc, which)
}

pub(crate) fn l_ab(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    scen.require_kind(ScenarioKind::Static)?;
    let g = scen.gap();
    l_pair_report(scen, trunc, Detector::A, Detector::B, g, g)
}

pub(crate) fn m_plus(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    scen.require_kind(ScenarioKind::Static)?;
    let da = *scen.detector(Detector::A);
    let db = *scen.detector(Detector::B);
    let a_a = scen.frame(Detector::A).dtau_dt;
    let a_b = scen.frame(Detector::B).dtau_dt;
    let g = scen.gap();
    let c = cos(scen.rho_b());
    let peak = g.abs() * scen.geom().length() * (1.0 - c) / (1.0 + c * c);
    l0_series(scen, trunc, "M+", peak, |w, phi_a, phi_b| {
        let first = db.chi_hat(g - w / a_b) * da.chi_hat(g + w / a_a);
        let second = da.chi_hat(g - w / a_a) * db.chi_hat(g + w / a_b);
        (first + second) * (-0.5 * PI / w * phi_a * phi_b)
    })
}

/// Closed form of the static `M-`: the Gaussian integrals against each
/// commutator event are done analytically.
pub(crate) fn m_minus(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    scen.require_kind(ScenarioKind::Static)?;
    scen.require_separated("M- on a static pair")?;
    let rho = scen.rho_b();
    let l = scen.geom().length();
    let (s, g, tau0) = (scen.width(), scen.gap(), scen.delay());
    let (c, sc) = (cos(rho), sec(rho));
    let q = 1.0 + c * c;
    let spread = 2.0 * s * s * q;
    let k_max = image_window(rho, tau0 / l, spread / (l * l), trunc)? as i64;
    let twist = g * (1.0 - c) / q;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -k_max..=k_max {
        let d = (rho + n as f64 * PI) * l;
        let (lo, hi) = (d - tau0, d + tau0);
        sum += (cexp(-lo * lo / spread, -d * twist) + cexp(-hi * hi / spread, d * twist))
            * image_sign(scen, n);
    }
    let one_sec = 1.0 + sc;
    let q_sec = 1.0 + sc * sc;
    let global = cexp(
        -one_sec * one_sec * s * s * g * g / (2.0 * q_sec),
        tau0 * g * (1.0 - c * c) * one_sec / (2.0 * q),
    );
    let pref = Complex64::new(0.0, s / (8.0 * PI * l * sin(rho)) * sqrt(2.0 * PI / q_sec));
    let report = SeriesReport {
        terms: (2 * k_max + 1) as usize,
        last_term: 0.0,
    };
    Ok((pref * global * sum, report))
}

pub fn l_local_static(scen: &Scenario, trunc: &Truncation, which: Detector) -> Result<f64> {
    l_local(scen, trunc, which).map(|(v, _)| v)
}

pub fn l_ab_static(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    l_ab(scen, trunc).map(|(v, _)| v)
}

pub fn m_plus_static(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    m_plus(scen, trunc).map(|(v, _)| v)
}

pub fn m_minus_static(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    m_minus(scen, trunc).map(|(v, _)| v)
}

pub fn c_static(scen: &Scenario, trunc: &Truncation, pair: CausalPair) -> Result<Complex64> {
    scen.require_kind(ScenarioKind::Static)?;
    lightcone::c_events(scen, trunc, pair).map(|(v, _)| v)
}
