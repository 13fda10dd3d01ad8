//! Grid evaluation and CSV output.
//!
//! Columns after the axis values, all elements in units of `lambda^2`:
//!
//! | column | content |
//! |---|---|
//! | `L_AA`, `L_BB` | local terms |
//! | `Re_L_AB`, `Im_L_AB` | cross term |
//! | `Re_M_plus`, `Im_M_plus`, `Re_M_minus`, `Im_M_minus`, `Re_M`, `Im_M` | entangling term and its anticommutator and commutator parts |
//! | `N2` | leading-order negativity, not clamped |
//! | `negativity` | `max(N2, 0)` |
//! | `mutual_info` | leading-order mutual information |
//! | `abs_C_AB`, `abs_C_BA` | causality estimators |
//! | `N2_minus_Cab` | `N2 - abs_C_AB` |
//! | `flags` | `ok`, or `|`-joined: `coincident`, `nonperturbative`, `mi_undefined`, `error=<message>` |

use std::io::Write;

use adsharvest_core::elements::{element_set, ElementSet, PairParams};
use adsharvest_core::quantify::{clamp_negativity, density_matrix, mutual_information, negativity2};
use adsharvest_core::{
    AdsGeometry, BoundaryCondition, Complex64, Scenario, ScenarioKind, Truncation,
};
use rayon::prelude::*;

use crate::config::{Point, SweepSpec};
use crate::error::Result;

pub const VALUE_COLUMNS: [&str; 17] = [
    "L_AA",
    "L_BB",
    "Re_L_AB",
    "Im_L_AB",
    "Re_M_plus",
    "Im_M_plus",
    "Re_M_minus",
    "Im_M_minus",
    "Re_M",
    "Im_M",
    "N2",
    "negativity",
    "mutual_info",
    "abs_C_AB",
    "abs_C_BA",
    "N2_minus_Cab",
    "flags",
];

/// Header names for a spec: the axis names, then [`VALUE_COLUMNS`].
pub fn header(spec: &SweepSpec) -> Vec<&'static str> {
    spec.axes
        .iter()
        .map(|(a, _)| a.name())
        .chain(VALUE_COLUMNS)
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub point: Point,
    pub elements: Option<ElementSet>,
    pub n2: f64,
    pub mutual_info: f64,
    pub flags: Vec<String>,
}

impl Sample {
    pub fn flag_text(&self) -> String {
        if self.flags.is_empty() {
            "ok".to_string()
        } else {
            self.flags.join("|")
        }
    }
}

pub fn scenario(kind: ScenarioKind, bc: BoundaryCondition, p: &Point, coupling: f64) -> Result<Scenario> {
    let params = PairParams {
        gap: p.gap,
        width: 1.0,
        separation: p.separation,
        delay: p.delay,
        coupling,
    };
    Ok(Scenario::from_params(kind, AdsGeometry::new(p.length)?, bc, &params)?)
}

/// Evaluates one point. Failures become flags on a NaN sample.
pub fn evaluate(
    kind: ScenarioKind,
    bc: BoundaryCondition,
    point: Point,
    coupling: f64,
    trunc: &Truncation,
) -> Sample {
    let mut flags = Vec::new();
    let es = scenario(kind, bc, &point, coupling)
        .and_then(|s| Ok(element_set(&s, trunc)?));
    let es = match es {
        Ok(es) => es,
        Err(e) => {
            flags.push(format!("error={e}"));
            return Sample {
                point,
                elements: None,
                n2: f64::NAN,
                mutual_info: f64::NAN,
                flags,
            };
        }
    };
    if es.report.coincident {
        flags.push("coincident".to_string());
    }
    if let Ok(state) = density_matrix(&es, coupling, coupling) {
        if state.perturbativity_warning {
            flags.push("nonperturbative".to_string());
        }
    }
    let mutual_info = match mutual_information(&es) {
        Ok(i) => i,
        Err(_) => {
            flags.push("mi_undefined".to_string());
            f64::NAN
        }
    };
    Sample {
        point,
        elements: Some(es),
        n2: negativity2(&es),
        mutual_info,
        flags,
    }
}

/// Evaluates every grid point on `workers` threads. The result is in
/// row-major order and does not depend on `workers`.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<Sample>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build()?;
    Ok(pool.install(|| {
        (0..spec.points())
            .into_par_iter()
            .map(|i| evaluate(spec.kind, spec.bc, spec.point(i), spec.coupling, &spec.truncation))
            .collect()
    }))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn row(spec: &SweepSpec, s: &Sample) -> Vec<String> {
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let e = s.elements;
    let get = |f: fn(&ElementSet) -> Complex64| e.as_ref().map_or(nan, f);
    let l_aa = e.map_or(f64::NAN, |e| e.l_aa);
    let l_bb = e.map_or(f64::NAN, |e| e.l_bb);
    let (l_ab, mp, mm, m) = (get(|e| e.l_ab), get(|e| e.m_plus), get(|e| e.m_minus), get(|e| e.m));
    let (c_ab, c_ba) = (get(|e| e.c_ab).norm(), get(|e| e.c_ba).norm());
    let mut out: Vec<String> = spec.axes.iter().map(|(a, _)| num(s.point.get(*a))).collect();
    out.extend(
        [
            l_aa,
            l_bb,
            l_ab.re,
            l_ab.im,
            mp.re,
            mp.im,
            mm.re,
            mm.im,
            m.re,
            m.im,
            s.n2,
            clamp_negativity(s.n2),
            s.mutual_info,
            c_ab,
            c_ba,
            s.n2 - c_ab,
        ]
        .map(num),
    );
    out.push(s.flag_text());
    out
}

/// Writes `#` comment lines with the fingerprint and coupling, a header row,
/// then one row per sample.
pub fn write_csv<W: Write>(spec: &SweepSpec, samples: &[Sample], mut out: W) -> Result<()> {
    writeln!(out, "# adsharvest sweep")?;
    writeln!(out, "# config: {}", spec.fingerprint())?;
    writeln!(
        out,
        "# lambda_A = lambda_B = {}; element columns are in units of lambda^2",
        spec.coupling
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(spec))?;
    for s in samples {
        w.write_record(row(spec, s))?;
    }
    w.flush()?;
    Ok(())
}
