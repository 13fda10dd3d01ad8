//! Closed forms for two detectors on circular geodesics. Both share the proper
//! time `tau = L t`, so every switching is the same Gaussian in `t`.

use num_complex::Complex64;

use super::series::{image_sign, image_window, l0_series, SeriesReport};
use super::{CausalPair, Scenario, ScenarioKind, Truncation};
use crate::math::{cexp, cos, exp, sqrt, tan, PI};
use crate::Result;

struct Params {
    length: f64,
    gap: f64,
    width: f64,
    delay: f64,
}

fn params(scen: &Scenario) -> Result<Params> {
    scen.require_kind(ScenarioKind::Geodesic)?;
    Ok(Params {
        length: scen.geom().length(),
        gap: scen.gap(),
        width: scen.width(),
        delay: scen.delay(),
    })
}

pub(crate) fn l_local(scen: &Scenario, trunc: &Truncation) -> Result<(f64, SeriesReport)> {
    let p = params(scen)?;
    let s2 = p.width * p.width;
    let (v, r) = l0_series(scen, trunc, "L_AA", -p.gap * p.length, |w, a, _| {
        let k = w / p.length + p.gap;
        Complex64::new(PI / w * a * a * s2 * exp(-k * k * s2), 0.0)
    })?;
    Ok((v.re, r))
}

pub(crate) fn l_ab(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    let p = params(scen)?;
    let s2 = p.width * p.width;
    l0_series(scen, trunc, "L_AB", -p.gap * p.length, |w, a, b| {
        let k = w / p.length + p.gap;
        cexp(-k * k * s2, -k * p.delay) * (PI / w * a * b * s2)
    })
}

pub(crate) fn m_plus(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    let p = params(scen)?;
    let s2 = p.width * p.width;
    let base = exp(-p.gap * p.gap * s2);
    let (v, r) = l0_series(scen, trunc, "M+", 0.0, |w, a, b| {
        let k = w / p.length;
        Complex64::new(
            -PI / w * a * b * s2 * base * exp(-k * k * s2) * cos(k * p.delay),
            0.0,
        )
    })?;
    Ok((Complex64::new(v.re, 0.0), r))
}

pub(crate) fn m_minus(scen: &Scenario, trunc: &Truncation) -> Result<(Complex64, SeriesReport)> {
    let p = params(scen)?;
    scen.require_separated("M- on a geodesic pair")?;
    let rho = scen.rho_b();
    let (l, s) = (p.length, p.width);
    let k_max = image_window(rho, p.delay / l, 4.0 * s * s / (l * l), trunc)? as i64;
    let spread = 4.0 * s * s;
    let mut sum = 0.0;
    for n in -k_max..=k_max {
        let d = (rho + n as f64 * PI) * l;
        let minus = d - p.delay;
        let plus = d + p.delay;
        sum += image_sign(scen, n)
            * 0.5
            * (exp(-minus * minus / spread) + exp(-plus * plus / spread));
    }
    let pref = s * exp(-s * s * p.gap * p.gap) / (4.0 * sqrt(PI) * l * tan(rho));
    let report = SeriesReport {
        terms: (2 * k_max + 1) as usize,
        last_term: 0.0,
    };
    Ok((Complex64::new(0.0, pref * sum), report))
}

pub(crate) fn c(
    scen: &Scenario,
    trunc: &Truncation,
    pair: CausalPair,
) -> Result<(Complex64, SeriesReport)> {
    let p = params(scen)?;
    scen.require_separated("causality estimator on a geodesic pair")?;
    let rho = scen.rho_b();
    let (l, s) = (p.length, p.width);
    let delay = match pair {
        CausalPair::AB => p.delay,
        CausalPair::BA => -p.delay,
    };
    let k_max = image_window(rho, delay / l, 4.0 * s * s / (l * l), trunc)? as i64;
    let spread = 4.0 * s * s;
    let damp = exp(-s * s * p.gap * p.gap);
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -k_max..=k_max {
        let d = (rho + n as f64 * PI).abs() * l;
        let x = d + delay;
        let env = exp(-x * x / spread);
        sum += (Complex64::new(damp, 0.0) + cexp(0.0, p.gap * d)) * (image_sign(scen, n) * env);
    }
    let pref = Complex64::new(0.0, s / (8.0 * sqrt(PI) * l * tan(rho)));
    let report = SeriesReport {
        terms: (2 * k_max + 1) as usize,
        last_term: 0.0,
    };
    Ok((pref * sum, report))
}

/// Local term of either detector; both give the same value by symmetry.
pub fn l_local_geodesic(scen: &Scenario, trunc: &Truncation) -> Result<f64> {
    l_local(scen, trunc).map(|(v, _)| v)
}

pub fn l_ab_geodesic(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    l_ab(scen, trunc).map(|(v, _)| v)
}

pub fn m_plus_geodesic(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    m_plus(scen, trunc).map(|(v, _)| v)
}

pub fn m_minus_geodesic(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    m_minus(scen, trunc).map(|(v, _)| v)
}

pub fn c_geodesic(scen: &Scenario, trunc: &Truncation, pair: CausalPair) -> Result<Complex64> {
    c(scen, trunc, pair).map(|(v, _)| v)
}
