//! Light-cone terms from the commutator's delta train. Each event at time
//! separation `d > 0` contributes a Gaussian integral in coordinate time, so
//! these forms hold for any pair of redshift factors.

use num_complex::Complex64;

use super::series::{image_sign, image_window, SeriesReport};
use super::{CausalPair, Detector, Scenario, Truncation};
use crate::math::{cexp, sqrt, tan, PI};
use crate::Result;

/// `integral exp(-(t-mu1)^2/(2 s1^2) - (t-mu2)^2/(2 s2^2) + i kappa t) dt`.
pub fn gaussian_product(kappa: f64, mu1: f64, s1: f64, mu2: f64, s2: f64) -> Complex64 {
    let p = 1.0 / (s1 * s1) + 1.0 / (s2 * s2);
    let m = (mu1 / (s1 * s1) + mu2 / (s2 * s2)) / p;
    let dm = mu1 - mu2;
    let re = -dm * dm / (2.0 * (s1 * s1 + s2 * s2)) - kappa * kappa / (2.0 * p);
    cexp(re, kappa * m) * sqrt(2.0 * PI / p)
}

fn prefactor(scen: &Scenario) -> f64 {
    let l = scen.geom().length();
    let a_a = scen.frame(Detector::A).dtau_dt;
    let a_b = scen.frame(Detector::B).dtau_dt;
    a_a * a_b / (8.0 * PI * l * l * tan(scen.rho_b()))
}

fn window(scen: &Scenario, trunc: &Truncation) -> Result<i64> {
    let fa = scen.frame(Detector::A);
    let fb = scen.frame(Detector::B);
    let spread = 2.0 * (fa.width * fa.width + fb.width * fb.width);
    Ok(image_window(scen.rho_b(), scen.coord_delay(), spread, trunc)? as i64)
}

pub(crate) fn m_minus_events(
    scen: &Scenario,
    trunc: &Truncation,
) -> Result<(Complex64, SeriesReport)> {
    scen.require_separated("M- light-cone sum")?;
    let fa = *scen.frame(Detector::A);
    let fb = *scen.frame(Detector::B);
    let rho = scen.rho_b();
    let kappa = fa.gap + fb.gap;
    let k_max = window(scen, trunc)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -k_max..=k_max {
        let d = (rho + n as f64 * PI).abs();
        let first = cexp(0.0, -fa.gap * d)
            * gaussian_product(kappa, fb.center, fb.width, fa.center + d, fa.width);
        let second = cexp(0.0, -fb.gap * d)
            * gaussian_product(kappa, fa.center, fa.width, fb.center + d, fb.width);
        sum += (first + second) * image_sign(scen, n);
    }
    let report = SeriesReport {
        terms: (2 * k_max + 1) as usize,
        last_term: 0.0,
    };
    Ok((Complex64::new(0.0, prefactor(scen)) * sum, report))
}

pub(crate) fn c_events(
    scen: &Scenario,
    trunc: &Truncation,
    pair: CausalPair,
) -> Result<(Complex64, SeriesReport)> {
    scen.require_separated("causality estimator light-cone sum")?;
    let (fi, fj) = match pair {
        CausalPair::AB => (*scen.frame(Detector::A), *scen.frame(Detector::B)),
        CausalPair::BA => (*scen.frame(Detector::B), *scen.frame(Detector::A)),
    };
    let rho = scen.rho_b();
    let k_max = window(scen, trunc)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in -k_max..=k_max {
        let d = (rho + n as f64 * PI).abs();
        let plus = cexp(0.0, -fj.gap * d)
            * gaussian_product(fi.gap + fj.gap, fi.center, fi.width, fj.center + d, fj.width);
        let minus = cexp(0.0, fj.gap * d)
            * gaussian_product(fi.gap - fj.gap, fi.center, fi.width, fj.center + d, fj.width);
        sum += (plus + minus) * image_sign(scen, n);
    }
    let report = SeriesReport {
        terms: (2 * k_max + 1) as usize,
        last_term: 0.0,
    };
    Ok((Complex64::new(0.0, prefactor(scen)) * sum, report))
}

/// `M-` as a sum over commutator events, valid for either scenario kind.
pub fn m_minus_from_events(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    m_minus_events(scen, trunc).map(|(v, _)| v)
}

/// Causality estimator as a sum over commutator events, valid for either
/// scenario kind.
pub fn c_from_events(scen: &Scenario, trunc: &Truncation, pair: CausalPair) -> Result<Complex64> {
    c_events(scen, trunc, pair).map(|(v, _)| v)
}
