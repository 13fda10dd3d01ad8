//! Second-order matrix elements of the two-detector state: local terms
//! `L_AA`, `L_BB`, the cross term `L_AB`, the entangling term `M = M+ + M-`,
//! and the causality estimators `C_AB`, `C_BA`.
//!
//! Every element is returned with the couplings factored out (units of
//! `lambda_A lambda_B`). Detector A sits at the centre; detector B sits on the
//! polar axis at `rho_B`. Coordinate switching centres are placed
//! symmetrically, `t_A = -t0/2` and `t_B = +t0/2` with `t0 = tau0 / L`.

mod geodesic;
pub mod lightcone;
mod series;
mod static_pair;

use num_complex::Complex64;

use crate::adsmodes::{AdsGeometry, BoundaryCondition, Motion};
use crate::math::PI;
use crate::switching::{DetectorConfig, TildeFrame};
use crate::{Error, Result};

pub use geodesic::{
    c_geodesic, l_ab_geodesic, l_local_geodesic, m_minus_geodesic, m_plus_geodesic,
};
pub use series::SeriesReport;
pub use static_pair::{
    c_static, l_ab_static, l_local_static, m_minus_static, m_plus_static,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    /// Both detectors on circular geodesics (common proper time `L t`).
    Geodesic,
    /// Both detectors held static; B is redshifted relative to A.
    Static,
}

impl ScenarioKind {
    pub fn motion(self) -> Motion {
        match self {
            Self::Geodesic => Motion::Geodesic,
            Self::Static => Motion::Static,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Geodesic => "geodesic",
            Self::Static => "static",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detector {
    A,
    B,
}

/// Which causality estimator: `C_AB` bounds the influence of B on A.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CausalPair {
    AB,
    BA,
}

/// Physical parameters shared by both detectors of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams {
    /// Proper gap of each detector.
    pub gap: f64,
    /// Proper switching width of each detector.
    pub width: f64,
    /// Proper distance of B from the centre.
    pub separation: f64,
    /// Delay `tau0 = L t0` between the switchings, measured as at the centre.
    pub delay: f64,
    pub coupling: f64,
}

impl Default for PairParams {
    fn default() -> Self {
        Self {
            gap: 1.0,
            width: 1.0,
            separation: 0.0,
            delay: 0.0,
            coupling: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    geom: AdsGeometry,
    bc: BoundaryCondition,
    det_a: DetectorConfig,
    det_b: DetectorConfig,
    kind: ScenarioKind,
    frame_a: TildeFrame,
    frame_b: TildeFrame,
}

fn nearly_equal(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

impl Scenario {
    pub fn new(
        geom: AdsGeometry,
        bc: BoundaryCondition,
        det_a: DetectorConfig,
        det_b: DetectorConfig,
        kind: ScenarioKind,
    ) -> Result<Self> {
        det_a.validate()?;
        det_b.validate()?;
        if det_a.rho != 0.0 {
            return Err(Error::InvalidScenario("detector A must sit at rho = 0"));
        }
        if det_b.motion != kind.motion() {
            return Err(Error::InvalidScenario(
                "detector B's motion does not match the scenario kind",
            ));
        }
        if !nearly_equal(det_a.gap, det_b.gap) || !nearly_equal(det_a.width, det_b.width) {
            return Err(Error::InvalidScenario(
                "detectors must share the proper gap and the proper width",
            ));
        }
        let frame_a = det_a.to_tilde(&geom);
        let frame_b = det_b.to_tilde(&geom);
        if !nearly_equal(frame_a.center, -frame_b.center) {
            return Err(Error::InvalidScenario(
                "coordinate switching centres must be symmetric about t = 0",
            ));
        }
        Ok(Self {
            geom,
            bc,
            det_a,
            det_b,
            kind,
            frame_a,
            frame_b,
        })
    }

    pub fn from_params(
        kind: ScenarioKind,
        geom: AdsGeometry,
        bc: BoundaryCondition,
        p: &PairParams,
    ) -> Result<Self> {
        if !(p.separation >= 0.0) {
            return Err(Error::Domain {
                what: "proper separation",
                value: p.separation,
            });
        }
        let rho_b = geom.proper_to_coord(p.separation);
        let t0 = p.delay / geom.length();
        let a_b = geom.redshift_dtau_dt(kind.motion(), rho_b);
        let det_a = DetectorConfig {
            gap: p.gap,
            width: p.width,
            center: -0.5 * p.delay,
            coupling: p.coupling,
            rho: 0.0,
            motion: kind.motion(),
        };
        let det_b = DetectorConfig {
            center: 0.5 * t0 * a_b,
            rho: rho_b,
            ..det_a
        };
        Self::new(geom, bc, det_a, det_b, kind)
    }

    pub fn geom(&self) -> &AdsGeometry {
        &self.geom
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn kind(&self) -> ScenarioKind {
        self.kind
    }

    pub fn detector(&self, which: Detector) -> &DetectorConfig {
        match which {
            Detector::A => &self.det_a,
            Detector::B => &self.det_b,
        }
    }

    pub fn frame(&self, which: Detector) -> &TildeFrame {
        match which {
            Detector::A => &self.frame_a,
            Detector::B => &self.frame_b,
        }
    }

    pub fn rho_b(&self) -> f64 {
        self.det_b.rho
    }

    pub fn gap(&self) -> f64 {
        self.det_a.gap
    }

    pub fn width(&self) -> f64 {
        self.det_a.width
    }

    /// Coordinate delay `t0 = t_B - t_A`.
    pub fn coord_delay(&self) -> f64 {
        self.frame_b.center - self.frame_a.center
    }

    /// Proper delay as measured at the centre, `tau0 = L t0`.
    pub fn delay(&self) -> f64 {
        self.geom.length() * self.coord_delay()
    }

    pub(crate) fn require_kind(&self, kind: ScenarioKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::InvalidScenario(match kind {
                ScenarioKind::Geodesic => "operation needs a geodesic scenario",
                ScenarioKind::Static => "operation needs a static scenario",
            }))
        }
    }

    pub(crate) fn require_separated(&self, what: &'static str) -> Result<()> {
        if self.rho_b() > 0.0 {
            Ok(())
        } else {
            Err(Error::Coincident { what })
        }
    }
}

/// Series truncation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Relative size below which a term counts as negligible.
    pub tol: f64,
    /// Maximum number of radial modes per series.
    pub n_max: usize,
    /// Maximum angular momentum in the static `L_BB` double sum.
    pub l_max: usize,
    /// Maximum image index `|N|` in the light-cone sums.
    pub image_n_max: usize,
    /// Number of successive negligible terms that ends a mode sum.
    pub consecutive_below: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            n_max: 512,
            l_max: 256,
            image_n_max: 64,
            consecutive_below: 3,
        }
    }
}

impl Truncation {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Domain {
                what: "truncation tolerance",
                value: self.tol,
            });
        }
        for (what, v) in [
            ("n_max", self.n_max),
            ("l_max", self.l_max),
            ("image_n_max", self.image_n_max),
            ("consecutive_below", self.consecutive_below),
        ] {
            if v == 0 {
                return Err(Error::Domain { what, value: 0.0 });
            }
        }
        Ok(())
    }

    /// Every cap doubled, tolerance unchanged.
    pub fn doubled(&self) -> Self {
        Self {
            n_max: 2 * self.n_max,
            l_max: 2 * self.l_max,
            image_n_max: 2 * self.image_n_max,
            ..*self
        }
    }
}

/// Terms used by each series behind an [`ElementSet`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TruncationReport {
    pub l_aa: SeriesReport,
    pub l_bb: SeriesReport,
    pub l_ab: SeriesReport,
    pub m_plus: SeriesReport,
    pub m_minus: SeriesReport,
    pub c_ab: SeriesReport,
    pub c_ba: SeriesReport,
    /// Detector B sits at the centre; the light-cone terms diverge there and
    /// are reported as NaN.
    pub coincident: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementSet {
    pub l_aa: f64,
    pub l_bb: f64,
    pub l_ab: Complex64,
    pub m: Complex64,
    pub m_plus: Complex64,
    pub m_minus: Complex64,
    pub c_ab: Complex64,
    pub c_ba: Complex64,
    pub report: TruncationReport,
}

impl ElementSet {
    pub fn is_finite(&self) -> bool {
        self.l_aa.is_finite()
            && self.l_bb.is_finite()
            && self.l_ab.is_finite()
            && self.m.is_finite()
            && self.c_ab.is_finite()
            && self.c_ba.is_finite()
    }
}

/// Generic cross term `L_IJ` for detectors `first = I`, `second = J` with the
/// proper gaps overridden:
/// `sum_n (pi/omega) phi_I phi_J chi_hat_I(omega/a_I + gap_I) conj(chi_hat_J(omega/a_J + gap_J))`.
pub fn l_pair(
    scen: &Scenario,
    trunc: &Truncation,
    first: Detector,
    second: Detector,
    gap_first: f64,
    gap_second: f64,
) -> Result<Complex64> {
    l_pair_report(scen, trunc, first, second, gap_first, gap_second).map(|(v, _)| v)
}

pub(crate) fn l_pair_report(
    scen: &Scenario,
    trunc: &Truncation,
    first: Detector,
    second: Detector,
    gap_first: f64,
    gap_second: f64,
) -> Result<(Complex64, SeriesReport)> {
    if first == second {
        return Err(Error::InvalidScenario("l_pair needs two distinct detectors"));
    }
    let di = scen.detector(first).with_gap(gap_first);
    let dj = scen.detector(second).with_gap(gap_second);
    let ai = scen.frame(first).dtau_dt;
    let aj = scen.frame(second).dtau_dt;
    let peak = -(gap_first / ai + gap_second / aj) / (1.0 / (ai * ai) + 1.0 / (aj * aj));
    series::l0_series(scen, trunc, "L_IJ", peak, |w, phi_a, phi_b| {
        di.chi_hat(w / ai + gap_first) * dj.chi_hat(w / aj + gap_second).conj()
            * (PI / w * phi_a * phi_b)
    })
}

/// `M+` from the cross terms at flipped gaps,
/// `M+ = -(L_AB(gap, -gap) + L_BA(gap, -gap)) / 2`.
pub fn m_plus_via_cross_terms(scen: &Scenario, trunc: &Truncation) -> Result<Complex64> {
    let g = scen.gap();
    let ab = l_pair(scen, trunc, Detector::A, Detector::B, g, -g)?;
    let ba = l_pair(scen, trunc, Detector::B, Detector::A, g, -g)?;
    Ok(-(ab + ba) * 0.5)
}

/// All elements for one scenario.
pub fn element_set(scen: &Scenario, trunc: &Truncation) -> Result<ElementSet> {
    trunc.validate()?;
    let mut report = TruncationReport::default();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let coincident = scen.rho_b() == 0.0;
    report.coincident = coincident;

    let (l_aa, l_bb, l_ab, m_plus, lightcone) = match scen.kind() {
        ScenarioKind::Geodesic => {
            let (l_aa, r) = geodesic::l_local(scen, trunc)?;
            report.l_aa = r;
            report.l_bb = r;
            let (l_ab, r) = geodesic::l_ab(scen, trunc)?;
            report.l_ab = r;
            let (m_plus, r) = geodesic::m_plus(scen, trunc)?;
            report.m_plus = r;
            let lightcone = if coincident {
                None
            } else {
                Some((
                    geodesic::m_minus(scen, trunc)?,
                    geodesic::c(scen, trunc, CausalPair::AB)?,
                    geodesic::c(scen, trunc, CausalPair::BA)?,
                ))
            };
            (l_aa, l_aa, l_ab, m_plus, lightcone)
        }
        ScenarioKind::Static => {
            let (l_aa, r) = static_pair::l_local(scen, trunc, Detector::A)?;
            report.l_aa = r;
            let (l_bb, r) = static_pair::l_local(scen, trunc, Detector::B)?;
            report.l_bb = r;
            let (l_ab, r) = static_pair::l_ab(scen, trunc)?;
            report.l_ab = r;
            let (m_plus, r) = static_pair::m_plus(scen, trunc)?;
            report.m_plus = r;
            let lightcone = if coincident {
                None
            } else {
                Some((
                    static_pair::m_minus(scen, trunc)?,
                    lightcone::c_events(scen, trunc, CausalPair::AB)?,
                    lightcone::c_events(scen, trunc, CausalPair::BA)?,
                ))
            };
            (l_aa, l_bb, l_ab, m_plus, lightcone)
        }
    };

    let (m_minus, c_ab, c_ba) = match lightcone {
        Some(((mm, rm), (cab, rab), (cba, rba))) => {
            report.m_minus = rm;
            report.c_ab = rab;
            report.c_ba = rba;
            (mm, cab, cba)
        }
        None => (nan, nan, nan),
    };

    Ok(ElementSet {
        l_aa,
        l_bb,
        l_ab,
        m: m_plus + m_minus,
        m_plus,
        m_minus,
        c_ab,
        c_ba,
        report,
    })
}
