//! Brute-force reference values. Every switching function is transformed to
//! frequency space by trapezoidal quadrature in coordinate time and the mode
//! sums run to a fixed cut with no adaptive stop. The light-cone part of `M`
//! is integrated event by event from the commutator's delta train.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::adsmodes::{commutator_events, sigma0_center, wightman_analytic, RadialModes};
use crate::elements::{CausalPair, Detector, Scenario};
use crate::math::{cis, exp, ln, sqrt, PI};
use crate::specfun::log_factorial;
use crate::switching::TildeFrame;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Half-width of every time grid in units of the larger coordinate width.
    pub half_width: f64,
    /// Grid points per time axis (odd).
    pub points_per_axis: usize,
    /// Regulators for the analytic Wightman path, in units of the proper
    /// width, strictly decreasing.
    pub epsilon_reg: Vec<f64>,
    /// Fixed radial cut.
    pub n_max: usize,
    /// Fixed angular cut for off-centre local terms.
    pub l_max: usize,
    /// Largest relative change allowed between the grid and its half-density
    /// version, divided by ten.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width: 8.0,
            points_per_axis: 801,
            epsilon_reg: vec![1.0 / 50.0, 1.0 / 100.0, 1.0 / 200.0],
            n_max: 400,
            l_max: 200,
            tolerance: 1e-4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 5 || self.points_per_axis % 2 == 0 {
            return Err(Error::Domain {
                what: "points_per_axis must be odd and at least 5",
                value: self.points_per_axis as f64,
            });
        }
        if !(self.half_width > 0.0 && self.tolerance > 0.0) {
            return Err(Error::Domain {
                what: "quadrature half-width and tolerance",
                value: self.half_width.min(self.tolerance),
            });
        }
        if self.epsilon_reg.is_empty()
            || self.epsilon_reg.iter().any(|&e| !(e > 0.0))
            || self.epsilon_reg.windows(2).any(|w| w[1] >= w[0])
        {
            return Err(Error::Domain {
                what: "epsilon_reg must be positive and strictly decreasing",
                value: f64::NAN,
            });
        }
        if self.n_max == 0 {
            return Err(Error::Domain {
                what: "oracle n_max",
                value: 0.0,
            });
        }
        Ok(())
    }

    fn coarse(&self) -> Self {
        Self {
            points_per_axis: (self.points_per_axis - 1) / 2 + 1,
            ..self.clone()
        }
    }
}

/// Trapezoidal samples of `chi(tau(t)) dtau/dt` on a uniform grid.
struct Grid {
    times: Vec<f64>,
    weights: Vec<f64>,
    /// Largest `|k|` whose transform is free of aliasing: images of the
    /// Gaussian sit `2 pi / h` away and must be suppressed below `e^{-40}`.
    band: f64,
}

impl Grid {
    fn new(frame: &TildeFrame, centre: f64, half: f64, points: usize) -> Self {
        let h = 2.0 * half / (points - 1) as f64;
        let mut times = Vec::with_capacity(points);
        let mut weights = Vec::with_capacity(points);
        for i in 0..points {
            let t = centre - half + i as f64 * h;
            let end = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
            times.push(t);
            weights.push(end * h * frame.chi(t));
        }
        let band = 2.0 * PI / h - 9.0 / frame.width;
        Self {
            times,
            weights,
            band,
        }
    }

    /// `integral chi(tau(t)) dtau/dt e^{i k t} dt`.
    fn transform(&self, k: f64) -> Complex64 {
        self.times
            .iter()
            .zip(&self.weights)
            .fold(Complex64::new(0.0, 0.0), |acc, (&t, &w)| acc + cis(k * t) * w)
    }
}

fn max_width(scen: &Scenario) -> f64 {
    scen.frame(Detector::A)
        .width
        .max(scen.frame(Detector::B).width)
}

fn grid_for(scen: &Scenario, which: Detector, spec: &QuadratureSpec) -> Grid {
    let f = scen.frame(which);
    Grid::new(f, f.center, spec.half_width * max_width(scen), spec.points_per_axis)
}

/// Memoised transforms at `k = gap + shift` for integer shifts.
struct Transforms {
    grid: Grid,
    gap: f64,
    cache: Vec<Option<Complex64>>,
    offset: i64,
}

impl Transforms {
    fn new(scen: &Scenario, which: Detector, spec: &QuadratureSpec, lo: i64, hi: i64) -> Self {
        Self {
            grid: grid_for(scen, which, spec),
            gap: scen.frame(which).gap,
            cache: vec![None; (hi - lo + 1) as usize],
            offset: lo,
        }
    }

    /// Whether the grid resolves `k = gap + shift`. Mode sums stop at the
    /// first mode outside the band, which fixes the cut by the grid alone.
    fn resolves(&self, shift: i64) -> bool {
        (self.gap + shift as f64).abs() <= self.grid.band
    }

    fn at(&mut self, shift: i64) -> Complex64 {
        let idx = (shift - self.offset) as usize;
        if let Some(v) = self.cache[idx] {
            return v;
        }
        let v = self.grid.transform(self.gap + shift as f64);
        self.cache[idx] = Some(v);
        v
    }
}

fn check_resolution(fine: Complex64, coarse: Complex64, spec: &QuadratureSpec) -> Result<Complex64> {
    let change = (fine - coarse).norm() / fine.norm().max(f64::MIN_POSITIVE);
    if change > 10.0 * spec.tolerance {
        return Err(Error::NonConvergence {
            what: "oracle quadrature under grid refinement",
            change,
        });
    }
    Ok(fine)
}

/// `L_IJ` as `sum (1/2 omega) phi_I phi_J F_I(gap_I + omega) conj(F_J(gap_J + omega))`,
/// with `F` the quadrature transform of each coordinate switching function.
pub fn l_ij_quadrature(
    scen: &Scenario,
    spec: &QuadratureSpec,
    first: Detector,
    second: Detector,
) -> Result<Complex64> {
    spec.validate()?;
    let fine = l_ij_at(scen, spec, first, second)?;
    let coarse = l_ij_at(scen, &spec.coarse(), first, second)?;
    check_resolution(fine, coarse, spec)
}

fn l_ij_at(
    scen: &Scenario,
    spec: &QuadratureSpec,
    first: Detector,
    second: Detector,
) -> Result<Complex64> {
    let geom = scen.geom();
    let bc = scen.bc();
    let rho_of = |d: Detector| scen.detector(d).rho;
    let top = (2 * spec.n_max + 2 * spec.l_max + 4) as i64;
    if first == second && rho_of(first) > 0.0 {
        return match scen.kind() {
            crate::ScenarioKind::Static => l_local_offcentre_static(scen, spec, first),
            crate::ScenarioKind::Geodesic => l_local_orbiting(scen, spec, first),
        };
    }
    let mut fi = Transforms::new(scen, first, spec, 0, top);
    let mut fj = Transforms::new(scen, second, spec, 0, top);
    let mi = RadialModes::new(geom, bc, 0, rho_of(first), 1.0)?;
    let mj = RadialModes::new(geom, bc, 0, rho_of(second), 1.0)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, b) in mi.zip(mj).take(spec.n_max) {
        let w = a.omega as i64;
        if !(fi.resolves(w) && fj.resolves(w)) {
            break;
        }
        sum += fi.at(w) * fj.at(w).conj() * (a.value * b.value / (2.0 * a.omega as f64));
    }
    Ok(sum)
}

/// Static detector off the centre: the m = 0 modes on the polar axis with all
/// `l <= l_max`.
fn l_local_offcentre_static(scen: &Scenario, spec: &QuadratureSpec, which: Detector) -> Result<Complex64> {
    let rho = scen.detector(which).rho;
    let top = (2 * spec.n_max + spec.l_max + 4) as i64;
    let mut f = Transforms::new(scen, which, spec, 0, top);
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..=spec.l_max {
        let modes = RadialModes::new(scen.geom(), scen.bc(), l, rho, 1.0)?;
        for m in modes.take(spec.n_max) {
            let w = m.omega as i64;
            if !f.resolves(w) {
                break;
            }
            sum += Complex64::new(f.at(w).norm_sqr() * m.value * m.value / (2.0 * m.omega as f64), 0.0);
        }
    }
    Ok(sum)
}

/// `|Y_lm(pi/2, 0)|^2 / |Y_l0(0, 0)|^2 = C(2p, p) C(2q, q) / 4^l` with
/// `l + m = 2p`, `l - m = 2q`; zero when `l + m` is odd.
fn equatorial_weight(l: usize, m: i64) -> Result<f64> {
    let m_abs = m.unsigned_abs() as usize;
    if m_abs > l || (l + m_abs) % 2 == 1 {
        return Ok(0.0);
    }
    let (p, q) = ((l + m_abs) / 2, (l - m_abs) / 2);
    let log_binom = |k: usize| -> Result<f64> { Ok(log_factorial(2 * k)? - 2.0 * log_factorial(k)?) };
    Ok(exp(log_binom(p)? + log_binom(q)? - l as f64 * ln(4.0)))
}

/// Geodesic detector on a circular orbit at `rho`: it moves through the
/// equatorial plane with `d phi/dt = 1`, so mode `(n, l, m)` is seen at
/// frequency `omega - m`.
fn l_local_orbiting(scen: &Scenario, spec: &QuadratureSpec, which: Detector) -> Result<Complex64> {
    let rho = scen.detector(which).rho;
    let lo = -(spec.l_max as i64) - 1;
    let top = (2 * spec.n_max + 2 * spec.l_max + 4) as i64;
    let mut f = Transforms::new(scen, which, spec, lo, top);
    let mut sum = 0.0;
    for l in 0..=spec.l_max {
        // Radial values on the polar axis; the angular factor is swapped below.
        let modes: Vec<_> = RadialModes::new(scen.geom(), scen.bc(), l, rho, 1.0)?
            .take(spec.n_max)
            .collect();
        let li = l as i64;
        for m in -li..=li {
            let weight = equatorial_weight(l, m)?;
            if weight == 0.0 {
                continue;
            }
            for mode in &modes {
                let shift = mode.omega as i64 - m;
                if !f.resolves(shift) {
                    break;
                }
                sum += weight * mode.value * mode.value / (2.0 * mode.omega as f64)
                    * f.at(shift).norm_sqr();
            }
        }
    }
    Ok(Complex64::new(sum, 0.0))
}

/// `M` assembled from its anticommutator part (full-plane mode sum) and its
/// commutator part (one Gaussian-weighted time integral per light-cone event).
pub fn m_quadrature(scen: &Scenario, spec: &QuadratureSpec) -> Result<Complex64> {
    let (plus, minus) = m_quadrature_parts(scen, spec)?;
    Ok(plus + minus)
}

/// `(M+, M-)` from independent sub-paths.
pub fn m_quadrature_parts(scen: &Scenario, spec: &QuadratureSpec) -> Result<(Complex64, Complex64)> {
    spec.validate()?;
    let coarse = spec.coarse();
    let plus = check_resolution(m_plus_at(scen, spec)?, m_plus_at(scen, &coarse)?, spec)?;
    let minus = check_resolution(m_minus_at(scen, spec)?, m_minus_at(scen, &coarse)?, spec)?;
    Ok((plus, minus))
}

fn m_plus_at(scen: &Scenario, spec: &QuadratureSpec) -> Result<Complex64> {
    let top = (2 * spec.n_max + 4) as i64;
    let mut fa = Transforms::new(scen, Detector::A, spec, -top, top);
    let mut fb = Transforms::new(scen, Detector::B, spec, -top, top);
    let ma = RadialModes::new(scen.geom(), scen.bc(), 0, 0.0, 1.0)?;
    let mb = RadialModes::new(scen.geom(), scen.bc(), 0, scen.rho_b(), 1.0)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for (a, b) in ma.zip(mb).take(spec.n_max) {
        let w = a.omega as i64;
        if ![-w, w].iter().all(|&k| fa.resolves(k) && fb.resolves(k)) {
            break;
        }
        let pair = fa.at(-w) * fb.at(w) + fa.at(w) * fb.at(-w);
        sum -= pair * (a.value * b.value / (4.0 * a.omega as f64));
    }
    Ok(sum)
}

/// Integral over `t'` of `chi_I(t' + d) chi_J(t') e^{i k_I (t' + d) + i k_J t'}`
/// on a grid centred on the product's peak.
fn event_integral(
    fi: &TildeFrame,
    fj: &TildeFrame,
    d: f64,
    k_i: f64,
    k_j: f64,
    half: f64,
    points: usize,
) -> Complex64 {
    let (wi, wj) = (1.0 / (fi.width * fi.width), 1.0 / (fj.width * fj.width));
    let centre = ((fi.center - d) * wi + fj.center * wj) / (wi + wj);
    let h = 2.0 * half / (points - 1) as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..points {
        let t = centre - half + i as f64 * h;
        let end = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        let amp = fi.chi(t + d) * fj.chi(t);
        acc += cis(k_i * (t + d) + k_j * t) * (end * h * amp);
    }
    acc
}

fn m_minus_at(scen: &Scenario, spec: &QuadratureSpec) -> Result<Complex64> {
    let fa = scen.frame(Detector::A);
    let fb = scen.frame(Detector::B);
    let half = spec.half_width * max_width(scen);
    let target = fa.center - fb.center;
    let reach = half * core::f64::consts::SQRT_2;
    let events = commutator_events(scen.geom(), scen.bc(), scen.rho_b(), (target - reach, target + reach))?;
    let mut sum = Complex64::new(0.0, 0.0);
    for e in events {
        let sign = if e.location > 0.0 { 1.0 } else { -1.0 };
        let integral = event_integral(fa, fb, e.location, fa.gap, fb.gap, half, spec.points_per_axis);
        sum += integral * (sign * e.weight);
    }
    Ok(sum * Complex64::new(0.0, -0.5))
}

/// Causality estimator from the retarded events `d > 0`:
/// `C_IJ = -(i/2) sum w_d integral chi_I(t) chi_J(t - d) e^{i k_I t} 2 cos(k_J (t - d)) dt`.
pub fn c_quadrature(scen: &Scenario, spec: &QuadratureSpec, pair: CausalPair) -> Result<Complex64> {
    spec.validate()?;
    let (fi, fj) = match pair {
        CausalPair::AB => (scen.frame(Detector::A), scen.frame(Detector::B)),
        CausalPair::BA => (scen.frame(Detector::B), scen.frame(Detector::A)),
    };
    let half = spec.half_width * max_width(scen);
    let target = fi.center - fj.center;
    let reach = half * core::f64::consts::SQRT_2;
    let lo = (target - reach).max(0.0);
    let events = commutator_events(scen.geom(), scen.bc(), scen.rho_b(), (lo, target + reach))?;
    let mut sum = Complex64::new(0.0, 0.0);
    for e in events.into_iter().filter(|e| e.location > 0.0) {
        // t = t' + d with t' the argument of chi_J.
        let plus = event_integral(fi, fj, e.location, fi.gap, fj.gap, half, spec.points_per_axis);
        let minus = event_integral(fi, fj, e.location, fi.gap, -fj.gap, half, spec.points_per_axis);
        sum += (plus + minus) * e.weight;
    }
    Ok(sum * Complex64::new(0.0, -0.5))
}

/// `L_AA` for the centred detector from the closed-form Wightman function with
/// the regulator `t - t' - i eps`, extrapolated to `eps -> 0` by Richardson
/// steps over the ratio of successive regulators.
pub fn l_aa_analytic(scen: &Scenario, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let f = scen.frame(Detector::A);
    let values: Vec<(f64, f64)> = spec
        .epsilon_reg
        .iter()
        .map(|&e| {
            let eps = e * scen.width() / f.dtau_dt;
            l_aa_regulated(scen, f, eps).map(|v| (eps, v))
        })
        .collect::<Result<_>>()?;
    Ok(richardson(&values))
}

/// Neville-style extrapolation to `eps = 0` of a function smooth in `eps`.
fn richardson(values: &[(f64, f64)]) -> f64 {
    let mut table: Vec<f64> = values.iter().map(|v| v.1).collect();
    let n = table.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let (e_far, e_near) = (values[i - level].0, values[i].0);
            table[i] = (e_far * table[i] - e_near * table[i - 1]) / (e_far - e_near);
        }
    }
    table[n - 1]
}

/// `integral K(D) e^{-i gap D} W(D - i eps) dD` with
/// `K(D) = a^2 width sqrt(pi) e^{-D^2 / (4 width^2)}` the overlap of the two
/// coordinate switching functions at separation `D`.
fn l_aa_regulated(scen: &Scenario, f: &TildeFrame, eps: f64) -> Result<f64> {
    let s = f.width;
    let half = 2.0 * sqrt(2.0) * 8.0 * s;
    let h = eps / 40.0;
    let steps = ((2.0 * half / h) as usize / 2 + 1) * 2;
    let h = 2.0 * half / steps as f64;
    let amp = f.dtau_dt * f.dtau_dt * s * sqrt(PI);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=steps {
        let d = -half + i as f64 * h;
        let simpson = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let w = wightman_analytic(scen.geom(), scen.bc(), sigma0_center(0.0, Complex64::new(d, -eps)))?;
        let k = amp * exp(-d * d / (4.0 * s * s));
        acc += w * cis(-f.gap * d) * (simpson * k);
    }
    Ok((acc * (h / 3.0)).re)
}

/// Stable text key of a scenario, used to index pinned values.
pub fn fingerprint(scen: &Scenario) -> String {
    let dx = scen
        .geom()
        .coord_to_proper(scen.rho_b())
        .unwrap_or(f64::NAN);
    format!(
        "{}/{}/L={:.6}/gap={:.6}/width={:.6}/dx={:.6}/tau0={:.6}",
        scen.kind().name(),
        scen.bc().name(),
        scen.geom().length(),
        scen.gap(),
        scen.width(),
        dx,
        scen.delay(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adsmodes::{AdsGeometry, BoundaryCondition};
    use crate::elements::{PairParams, ScenarioKind};
    use approx::assert_relative_eq;

    fn scen(kind: ScenarioKind, bc: BoundaryCondition, l: f64, gap: f64, dx: f64, tau0: f64) -> Scenario {
        let p = PairParams {
            gap,
            width: 1.0,
            separation: dx,
            delay: tau0,
            coupling: 0.01,
        };
        Scenario::from_params(kind, AdsGeometry::new(l).unwrap(), bc, &p).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let even = QuadratureSpec {
            points_per_axis: 800,
            ..Default::default()
        };
        assert!(even.validate().is_err());
        let unsorted = QuadratureSpec {
            epsilon_reg: vec![0.01, 0.02],
            ..Default::default()
        };
        assert!(unsorted.validate().is_err());
    }

    #[test]
    fn equatorial_weights_sum_to_one() {
        // sum_m |Y_lm(pi/2)|^2 = (2l + 1) / 4 pi = |Y_l0(0)|^2.
        for l in 0..40usize {
            let total: f64 = (-(l as i64)..=l as i64)
                .map(|m| equatorial_weight(l, m).unwrap())
                .sum();
            assert_relative_eq!(total, 1.0, max_relative = 1e-12);
        }
        assert_relative_eq!(equatorial_weight(1, 1).unwrap(), 0.5, max_relative = 1e-15);
        assert_eq!(equatorial_weight(1, 0).unwrap(), 0.0);
    }

    #[test]
    fn richardson_removes_polynomial_error() {
        let f = |e: f64| 2.0 + 3.0 * e - 5.0 * e * e;
        let pts: Vec<(f64, f64)> = [0.02, 0.01, 0.005].iter().map(|&e| (e, f(e))).collect();
        assert_relative_eq!(richardson(&pts), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn quadrature_is_bilinear_free_and_modulus_stable_in_delay() {
        let bc = BoundaryCondition::Dirichlet;
        let spec = QuadratureSpec::default();
        // One mode dominates at L = width and a large gap, so only a phase moves.
        let a = l_ij_quadrature(&scen(ScenarioKind::Geodesic, bc, 1.0, 5.0, 0.5, 0.0), &spec, Detector::A, Detector::B).unwrap();
        let b = l_ij_quadrature(&scen(ScenarioKind::Geodesic, bc, 1.0, 5.0, 0.5, 1.7), &spec, Detector::A, Detector::B).unwrap();
        assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-4);
        let weak = PairParams {
            gap: 5.0,
            width: 1.0,
            separation: 0.5,
            delay: 0.0,
            coupling: 1e-5,
        };
        let s = Scenario::from_params(ScenarioKind::Geodesic, AdsGeometry::new(1.0).unwrap(), bc, &weak).unwrap();
        assert_eq!(l_ij_quadrature(&s, &spec, Detector::A, Detector::B).unwrap(), a);
    }

    #[test]
    fn orbiting_detector_sees_the_central_rate() {
        // AdS isometries map a circular geodesic onto the central one.
        let spec = QuadratureSpec {
            l_max: 60,
            n_max: 120,
            ..Default::default()
        };
        for bc in BoundaryCondition::ALL {
            let s = scen(ScenarioKind::Geodesic, bc, 5.0, 0.5, 2.0, 0.0);
            let centre = l_ij_quadrature(&s, &spec, Detector::A, Detector::A).unwrap();
            let orbit = l_ij_quadrature(&s, &spec, Detector::B, Detector::B).unwrap();
            assert_relative_eq!(centre.re, orbit.re, max_relative = 1e-8);
        }
    }

    #[test]
    fn analytic_wightman_path_matches_mode_path() {
        let spec = QuadratureSpec::default();
        for bc in BoundaryCondition::ALL {
            let s = scen(ScenarioKind::Geodesic, bc, 1.0, 2.0, 0.0, 0.0);
            let modes = l_ij_quadrature(&s, &spec, Detector::A, Detector::A).unwrap().re;
            let analytic = l_aa_analytic(&s, &spec).unwrap();
            assert_relative_eq!(modes, analytic, max_relative = 1e-2);
        }
    }

    #[test]
    fn resolution_doubling_is_stable() {
        let spec = QuadratureSpec::default();
        let finer = QuadratureSpec {
            points_per_axis: 2 * spec.points_per_axis - 1,
            ..spec.clone()
        };
        let s = scen(ScenarioKind::Static, BoundaryCondition::Dirichlet, 1.0, 2.0, 2.0, 2.0);
        let a = m_quadrature(&s, &spec).unwrap();
        let b = m_quadrature(&s, &finer).unwrap();
        assert!((a - b).norm() <= 1e-4 * b.norm());
    }

    #[test]
    fn fingerprint_is_stable() {
        let s = scen(ScenarioKind::Static, BoundaryCondition::Neumann, 1.0, 2.0, 2.0, 0.5);
        assert_eq!(
            fingerprint(&s),
            "static/neumann/L=1.000000/gap=2.000000/width=1.000000/dx=2.000000/tau0=0.500000"
        );
    }
}
