//! Sweep configuration: a TOML file with the sections `[scenario]`,
//! `[sweep]`, `[truncation]` and `[output]`. Lengths are in units of the
//! switching width, gaps in its inverse.
//!
//! ```toml
//! [scenario]
//! kind = "geodesic"    # or "static"
//! epsilon = -1         # -1 Dirichlet, 0 transparent, +1 Neumann
//! length = 5.0
//! gap = 3.0
//! separation = 0.0
//! delay = 0.0
//! coupling = 0.01
//!
//! [sweep]
//! axes = ["separation", "gap"]
//! separation = { min = 0.5, max = 6.0, count = 41 }
//! gap = { min = 0.0, max = 5.0, count = 41 }
//! workers = 4
//!
//! [truncation]         # every key optional
//! tol = 1e-10
//! n_max = 512
//! l_max = 256
//! image_n_max = 64
//! consecutive_below = 3
//!
//! [output]
//! path = "n2_rgap.csv"
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use adsharvest_core::{BoundaryCondition, ScenarioKind, Truncation};
use serde::Deserialize;

use crate::error::{invalid, Error, Result};

/// A swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Gap,
    Separation,
    Length,
    Delay,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Gap, Axis::Separation, Axis::Length, Axis::Delay];

    pub fn name(self) -> &'static str {
        match self {
            Axis::Gap => "gap",
            Axis::Separation => "separation",
            Axis::Length => "length",
            Axis::Delay => "delay",
        }
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| invalid("axes", format!("unknown axis `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.max;
        }
        self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
    }
}

/// One point of parameter space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub length: f64,
    pub gap: f64,
    pub separation: f64,
    pub delay: f64,
}

impl Point {
    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Gap => self.gap,
            Axis::Separation => self.separation,
            Axis::Length => self.length,
            Axis::Delay => self.delay,
        }
    }

    pub fn set(&mut self, axis: Axis, v: f64) {
        match axis {
            Axis::Gap => self.gap = v,
            Axis::Separation => self.separation = v,
            Axis::Length => self.length = v,
            Axis::Delay => self.delay = v,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub kind: ScenarioKind,
    pub bc: BoundaryCondition,
    /// Values of the parameters that are not swept.
    pub base: Point,
    pub coupling: f64,
    /// Outer axis first; rows are emitted row-major.
    pub axes: Vec<(Axis, AxisRange)>,
    pub truncation: Truncation,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl SweepSpec {
    pub fn points(&self) -> usize {
        self.axes.iter().map(|(_, r)| r.count).product()
    }

    /// Parameters of grid point `index` in row-major order.
    pub fn point(&self, index: usize) -> Point {
        let mut p = self.base;
        let mut rest = index;
        for (axis, range) in self.axes.iter().rev() {
            p.set(*axis, range.value(rest % range.count));
            rest /= range.count;
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(invalid(
                "sweep.axes",
                format!("need one or two axes, got {}", self.axes.len()),
            ));
        }
        if self.axes.len() == 2 && self.axes[0].0 == self.axes[1].0 {
            return Err(invalid("sweep.axes", "an axis is listed twice"));
        }
        for (axis, r) in &self.axes {
            let field = format!("sweep.{}", axis.name());
            if r.count < 2 {
                return Err(invalid(&field, "count must be at least 2"));
            }
            if !(r.min.is_finite() && r.max.is_finite() && r.min <= r.max) {
                return Err(invalid(&field, "need finite min <= max"));
            }
            check_value(*axis, r.min, &field)?;
        }
        for axis in Axis::ALL {
            check_value(axis, self.base.get(axis), &format!("scenario.{}", axis.name()))?;
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(invalid("scenario.coupling", "must be positive"));
        }
        if self.workers == Some(0) {
            return Err(invalid("sweep.workers", "must be at least 1"));
        }
        self.truncation
            .validate()
            .map_err(|e| invalid("truncation", e.to_string()))
    }

    /// One-line canonical description, written into CSV headers.
    pub fn fingerprint(&self) -> String {
        let t = &self.truncation;
        let mut s = format!(
            "kind={} epsilon={} length={} gap={} separation={} delay={} coupling={}",
            self.kind.name(),
            self.bc.epsilon(),
            self.base.length,
            self.base.gap,
            self.base.separation,
            self.base.delay,
            self.coupling,
        );
        for (axis, r) in &self.axes {
            s += &format!(" {}=[{},{},{}]", axis.name(), r.min, r.max, r.count);
        }
        s += &format!(
            " tol={} n_max={} l_max={} image_n_max={} consecutive_below={}",
            t.tol, t.n_max, t.l_max, t.image_n_max, t.consecutive_below
        );
        s
    }
}

fn check_value(axis: Axis, v: f64, field: &str) -> Result<()> {
    let ok = match axis {
        Axis::Length => v > 0.0,
        Axis::Separation => v >= 0.0,
        Axis::Gap | Axis::Delay => true,
    };
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("value {v} out of range")))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: RawScenario,
    sweep: RawSweep,
    #[serde(default)]
    truncation: RawTruncation,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    kind: String,
    epsilon: i32,
    length: Option<f64>,
    gap: Option<f64>,
    separation: Option<f64>,
    delay: Option<f64>,
    coupling: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axes: Vec<String>,
    gap: Option<AxisRange>,
    separation: Option<AxisRange>,
    length: Option<AxisRange>,
    delay: Option<AxisRange>,
    workers: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawTruncation {
    tol: Option<f64>,
    n_max: Option<usize>,
    l_max: Option<usize>,
    image_n_max: Option<usize>,
    consecutive_below: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
}

pub fn parse_kind(s: &str) -> Result<ScenarioKind> {
    match s {
        "geodesic" => Ok(ScenarioKind::Geodesic),
        "static" => Ok(ScenarioKind::Static),
        _ => Err(invalid("scenario.kind", format!("unknown kind `{s}`"))),
    }
}

pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse {
        line: e
            .span()
            .map_or(0, |s| text[..s.start].matches('\n').count() + 1),
        message: e.message().to_string(),
    })?;
    let sc = raw.scenario;
    let bc = BoundaryCondition::from_epsilon(sc.epsilon)
        .map_err(|_| invalid("scenario.epsilon", "must be -1, 0 or 1"))?;
    let mut ranges = [
        (Axis::Gap, raw.sweep.gap),
        (Axis::Separation, raw.sweep.separation),
        (Axis::Length, raw.sweep.length),
        (Axis::Delay, raw.sweep.delay),
    ];
    let mut axes = Vec::new();
    for name in &raw.sweep.axes {
        let axis: Axis = name.parse()?;
        let slot = ranges.iter_mut().find(|(a, _)| *a == axis).unwrap();
        let range = slot
            .1
            .take()
            .ok_or_else(|| invalid(&format!("sweep.{name}"), "axis listed without a range"))?;
        axes.push((axis, range));
    }
    if let Some((axis, _)) = ranges.iter().find(|(_, r)| r.is_some()) {
        return Err(invalid(
            &format!("sweep.{}", axis.name()),
            "range given for an axis that is not swept",
        ));
    }
    let d = Truncation::default();
    let t = raw.truncation;
    let spec = SweepSpec {
        kind: parse_kind(&sc.kind)?,
        bc,
        base: Point {
            length: sc.length.unwrap_or(1.0),
            gap: sc.gap.unwrap_or(1.0),
            separation: sc.separation.unwrap_or(0.0),
            delay: sc.delay.unwrap_or(0.0),
        },
        coupling: sc.coupling.unwrap_or(0.01),
        axes,
        truncation: Truncation {
            tol: t.tol.unwrap_or(d.tol),
            n_max: t.n_max.unwrap_or(d.n_max),
            l_max: t.l_max.unwrap_or(d.l_max),
            image_n_max: t.image_n_max.unwrap_or(d.image_n_max),
            consecutive_below: t.consecutive_below.unwrap_or(d.consecutive_below),
        },
        output: raw.output.path,
        workers: raw.sweep.workers,
    };
    spec.validate()?;
    Ok(spec)
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fingerprint())
    }
}
