//! Release gates. Each gate returns pass or fail with a one-line detail.
//! The numerical kernels are injected so a tampered kernel can be shown to
//! trip its gate.

use std::path::PathBuf;
use std::time::Instant;

use adsharvest_core::elements::{
    c_geodesic, c_static, element_set, l_local_geodesic, l_pair, m_minus_geodesic,
    m_minus_static, m_plus_geodesic, m_plus_static, CausalPair, Detector, ElementSet,
};
use adsharvest_core::oracle::QuadratureSpec;
use adsharvest_core::quantify::{density_matrix, mutual_information_from_parts};
use adsharvest_core::{
    AdsGeometry, BoundaryCondition, Complex64, Scenario, ScenarioKind, Truncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Point;
use crate::error::Result;
use crate::pins::{pinned_scenarios, Element, PinSet};
use crate::sweep::scenario;

type CoreResult<T> = adsharvest_core::Result<T>;

/// The kernels the gates exercise.
#[derive(Clone, Copy)]
pub struct Kernels {
    pub element_set: fn(&Scenario, &Truncation) -> CoreResult<ElementSet>,
    /// `M+` from its closed form.
    pub m_plus: fn(&Scenario, &Truncation) -> CoreResult<Complex64>,
    pub l_pair: fn(&Scenario, &Truncation, Detector, Detector, f64, f64) -> CoreResult<Complex64>,
}

fn m_plus_closed_form(scen: &Scenario, trunc: &Truncation) -> CoreResult<Complex64> {
    match scen.kind() {
        ScenarioKind::Geodesic => m_plus_geodesic(scen, trunc),
        ScenarioKind::Static => m_plus_static(scen, trunc),
    }
}

impl Default for Kernels {
    fn default() -> Self {
        Self {
            element_set,
            m_plus: m_plus_closed_form,
            l_pair,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl GateResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    fn from(name: &'static str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self::new(name, passed, detail),
            Err(e) => Self::new(name, false, format!("error: {e}")),
        }
    }
}

impl std::fmt::Display for GateResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {}: {}", self.name, self.detail)
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

const BCS: [BoundaryCondition; 3] = BoundaryCondition::ALL;

/// `{omega(eps = 0)}` equals the disjoint union of `{omega(eps = +1)}` and
/// `{omega(eps = -1)}` as multisets, for `l <= 20`, `omega <= 100`.
pub fn spectrum_union() -> (bool, String) {
    let collect = |bc: BoundaryCondition, l: usize| -> Vec<usize> {
        (0..)
            .map(|n| bc.omega(n, l))
            .take_while(|&w| w <= 100)
            .collect()
    };
    let mut compared = 0;
    for l in 0..=20 {
        let mut whole = collect(BoundaryCondition::Transparent, l);
        let mut parts = collect(BoundaryCondition::Neumann, l);
        parts.extend(collect(BoundaryCondition::Dirichlet, l));
        whole.sort_unstable();
        parts.sort_unstable();
        if whole != parts {
            return (false, format!("spectra differ at l = {l}"));
        }
        compared += whole.len();
    }
    (true, format!("{compared} frequencies over l <= 20"))
}

fn random_point(rng: &mut ChaCha8Rng, kind: ScenarioKind) -> Point {
    Point {
        length: rng.gen_range(0.5..8.0),
        gap: rng.gen_range(-1.0..5.0),
        separation: rng.gen_range(0.1..4.0),
        delay: match kind {
            ScenarioKind::Geodesic => rng.gen_range(-4.0..4.0),
            ScenarioKind::Static => rng.gen_range(-2.0..2.0),
        },
    }
}

fn random_scenarios(seed: u64, kind: ScenarioKind, count: usize) -> Result<Vec<Scenario>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let p = random_point(&mut rng, kind);
            scenario(kind, BCS[i % 3], &p, 0.01)
        })
        .collect()
}

/// `M+` from its closed form equals `-(L_AB(gap, -gap) + L_BA(gap, -gap)) / 2`
/// to 1e-10 relative at 20 random points per kind.
pub fn lbaab_identity(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (seed, kind) in [(11, ScenarioKind::Geodesic), (12, ScenarioKind::Static)] {
        for s in random_scenarios(seed, kind, 20)? {
            let g = s.gap();
            let direct = (k.m_plus)(&s, trunc)?;
            let ab = (k.l_pair)(&s, trunc, Detector::A, Detector::B, g, -g)?;
            let ba = (k.l_pair)(&s, trunc, Detector::B, Detector::A, g, -g)?;
            worst = worst.max(rel(direct, -(ab + ba) * 0.5));
        }
    }
    Ok((worst <= 1e-10, format!("worst relative gap {worst:.2e} over 40 points")))
}

/// Geodesic `M+` is real and `M-` imaginary to 1e-12 at 10 random points.
pub fn phase_purity(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for s in random_scenarios(21, ScenarioKind::Geodesic, 10)? {
        let es = (k.element_set)(&s, trunc)?;
        worst = worst
            .max(es.m_plus.im.abs() / es.m_plus.norm())
            .max(es.m_minus.re.abs() / es.m_minus.norm());
    }
    Ok((worst <= 1e-12, format!("worst off-phase fraction {worst:.2e}")))
}

/// At `L = 10` widths, zero delay and `rho_B L` of 12 and 15 widths, `|M-|`
/// and `|C_AB|` are below 1e-12 of `|M+|`.
pub fn spacelike_vanishing(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let geom = AdsGeometry::new(10.0)?;
    let mut worst: f64 = 0.0;
    for kind in [ScenarioKind::Geodesic, ScenarioKind::Static] {
        for bc in BCS {
            for rho_l in [12.0, 15.0] {
                for gap in [0.0, 1.0] {
                    let p = Point {
                        length: 10.0,
                        gap,
                        separation: geom.coord_to_proper(rho_l / 10.0)?,
                        delay: 0.0,
                    };
                    // Only the terms compared are evaluated: the far static
                    // local term needs far more angular modes.
                    let s = scenario(kind, bc, &p, 0.01)?;
                    let (m_minus, c_ab) = match kind {
                        ScenarioKind::Geodesic => (
                            m_minus_geodesic(&s, trunc)?,
                            c_geodesic(&s, trunc, CausalPair::AB)?,
                        ),
                        ScenarioKind::Static => {
                            (m_minus_static(&s, trunc)?, c_static(&s, trunc, CausalPair::AB)?)
                        }
                    };
                    let m = (k.m_plus)(&s, trunc)?.norm();
                    worst = worst.max(m_minus.norm() / m).max(c_ab.norm() / m);
                }
            }
        }
    }
    Ok((worst < 1e-12, format!("largest light-cone fraction {worst:.2e}")))
}

/// Static elements at `rho_B = 1e-4` match the geodesic ones to 1e-5.
pub fn static_geodesic_continuity(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (length, gap, delay) in [(2.0, 1.0, 0.6), (1.0, 2.0, 0.0), (5.0, 3.0, 2.0)] {
        let dx = AdsGeometry::new(length)?.coord_to_proper(1e-4)?;
        for bc in BCS {
            let p = Point { length, gap, separation: dx, delay };
            let g = (k.element_set)(&scenario(ScenarioKind::Geodesic, bc, &p, 0.01)?, trunc)?;
            let s = (k.element_set)(&scenario(ScenarioKind::Static, bc, &p, 0.01)?, trunc)?;
            for e in Element::ALL {
                worst = worst.max(rel(e.of(&s), e.of(&g)));
            }
            worst = worst
                .max(rel(s.m_plus, g.m_plus))
                .max(rel(s.m_minus, g.m_minus));
        }
    }
    Ok((worst < 1e-5, format!("worst relative gap {worst:.2e}")))
}

/// Elements against pinned oracle values to 1e-3 relative.
pub fn pinned_agreement(
    k: &Kernels,
    trunc: &Truncation,
    pins: &PinSet,
    elements: &[Element],
) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    for s in pinned_scenarios() {
        let es = (k.element_set)(&s, trunc)?;
        for &e in elements {
            let pin = pins.get(&s, e).ok_or_else(|| crate::error::invalid("pins", format!(
                "missing {}",
                crate::pins::key(&s, e)
            )))?;
            worst = worst.max(rel(e.of(&es), pin));
            compared += 1;
        }
    }
    Ok((worst < 1e-3, format!("{compared} values, worst relative gap {worst:.2e}")))
}

/// Doubling every truncation cap moves every element by under 1e-8 relative
/// at the pinned points.
pub fn truncation_convergence(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for s in pinned_scenarios() {
        let a = (k.element_set)(&s, trunc)?;
        let b = (k.element_set)(&s, &trunc.doubled())?;
        for e in Element::ALL {
            worst = worst.max(rel(e.of(&a), e.of(&b)));
        }
        worst = worst.max(rel(a.m_plus, b.m_plus)).max(rel(a.m_minus, b.m_minus));
    }
    Ok((worst < 1e-8, format!("worst relative change {worst:.2e}")))
}

/// Unit trace, Hermiticity and positivity of the state at coupling 0.01 over
/// the pinned points.
pub fn density_health(k: &Kernels, trunc: &Truncation) -> Result<(bool, String)> {
    let (mut trace_ok, mut herm, mut min_eig): (bool, f64, f64) = (true, 0.0, f64::INFINITY);
    for s in pinned_scenarios() {
        let st = density_matrix(&(k.element_set)(&s, trunc)?, 0.01, 0.01)?;
        trace_ok &= st.trace() == 1.0;
        herm = herm.max(st.hermiticity_defect());
        min_eig = min_eig.min(st.min_eigenvalue());
    }
    Ok((
        trace_ok && herm <= 1e-14 && min_eig >= -1e-10,
        format!("trace exact: {trace_ok}, hermiticity defect {herm:.1e}, min eigenvalue {min_eig:.2e}"),
    ))
}

/// `L_AA` at gap 2 changes by under 1% between `L = 100` and `L = 200`, and
/// by more than 1% between `L = 5` and `L = 200`.
pub fn flat_limit(trunc: &Truncation) -> Result<(bool, String)> {
    let trunc = Truncation { n_max: trunc.n_max.max(8192), ..*trunc };
    let mut ok = true;
    let mut detail = String::new();
    for bc in BCS {
        let rate = |length: f64| -> Result<f64> {
            let p = Point { length, gap: 2.0, separation: 0.0, delay: 0.0 };
            Ok(l_local_geodesic(&scenario(ScenarioKind::Geodesic, bc, &p, 0.01)?, &trunc)?)
        };
        let far = rate(200.0)?;
        let near = ((rate(100.0)? - far) / far).abs();
        let curved = ((rate(5.0)? - far) / far).abs();
        ok &= near < 0.01 && curved > 0.01;
        detail += &format!("{}: {near:.1e} / {curved:.1e}; ", bc.name());
    }
    Ok((ok, detail.trim_end_matches("; ").to_string()))
}

/// Mutual information vanishes exactly when `L_AB = 0`.
pub fn mi_triviality() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0.0..1e-2), rng.gen_range(0.0..1e-2));
        if mutual_information_from_parts(a, b, 0.0)? != 0.0 {
            return Ok((false, format!("nonzero at L_AA = {a}, L_BB = {b}")));
        }
    }
    Ok((true, "exactly zero at 100 random local terms".to_string()))
}

pub struct CheckOptions {
    pub pins_path: PathBuf,
    pub regen_pins: bool,
    pub kernels: Kernels,
    pub truncation: Truncation,
    pub oracle: QuadratureSpec,
}

impl CheckOptions {
    pub fn new(pins_path: PathBuf) -> Self {
        Self {
            pins_path,
            regen_pins: false,
            kernels: Kernels::default(),
            truncation: Truncation::default(),
            oracle: QuadratureSpec::default(),
        }
    }
}

pub struct CheckReport {
    pub gates: Vec<GateResult>,
    pub pins_regenerated: bool,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.passed)
    }
}

/// Loads the pins, regenerating them with the oracle when asked or when the
/// file is absent.
pub fn load_or_regenerate(opts: &CheckOptions) -> Result<(PinSet, bool)> {
    if !opts.regen_pins && opts.pins_path.exists() {
        return Ok((PinSet::load(&opts.pins_path)?, false));
    }
    let pins = PinSet::generate(&opts.oracle)?;
    pins.save(&opts.pins_path)?;
    Ok((pins, true))
}

pub fn run_check(opts: &CheckOptions) -> Result<CheckReport> {
    let (pins, pins_regenerated) = load_or_regenerate(opts)?;
    let (k, t) = (&opts.kernels, &opts.truncation);
    let timed = |name, f: &dyn Fn() -> Result<(bool, String)>| {
        let start = Instant::now();
        let mut g = GateResult::from(name, f());
        g.detail += &format!(" ({:.3} s)", start.elapsed().as_secs_f64());
        g
    };
    let gates = vec![
        timed("oracle local terms", &|| {
            pinned_agreement(k, t, &pins, &[Element::LAA, Element::LBB])
        }),
        timed("oracle entangling term", &|| {
            pinned_agreement(k, t, &pins, &[Element::LAB, Element::M, Element::CAB, Element::CBA])
        }),
        timed("M+ cross-term identity", &|| lbaab_identity(k, t)),
        timed("geodesic phase purity", &|| phase_purity(k, t)),
        timed("spacelike vanishing", &|| spacelike_vanishing(k, t)),
        timed("static to geodesic continuity", &|| static_geodesic_continuity(k, t)),
        timed("spectrum union", &|| Ok(spectrum_union())),
        timed("truncation convergence", &|| truncation_convergence(k, t)),
        timed("density matrix health", &|| density_health(k, t)),
        timed("flat-space limit", &|| flat_limit(t)),
        timed("mutual information triviality", &mi_triviality),
    ];
    Ok(CheckReport {
        gates,
        pins_regenerated,
    })
}
