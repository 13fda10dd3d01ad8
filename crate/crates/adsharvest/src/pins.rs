//! Pinned oracle values: a text file with one `key re im` line per element,
//! where the key is `<scenario fingerprint>#<element>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use adsharvest_core::elements::{CausalPair, Detector, ElementSet};
use adsharvest_core::oracle::{c_quadrature, fingerprint, l_ij_quadrature, m_quadrature, QuadratureSpec};
use adsharvest_core::{BoundaryCondition, Complex64, Scenario, ScenarioKind};

use crate::config::Point;
use crate::error::{Error, Result};
use crate::sweep::scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    LAA,
    LBB,
    LAB,
    M,
    CAB,
    CBA,
}

impl Element {
    pub const ALL: [Element; 6] = [
        Element::LAA,
        Element::LBB,
        Element::LAB,
        Element::M,
        Element::CAB,
        Element::CBA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Element::LAA => "L_AA",
            Element::LBB => "L_BB",
            Element::LAB => "L_AB",
            Element::M => "M",
            Element::CAB => "C_AB",
            Element::CBA => "C_BA",
        }
    }

    pub fn of(self, es: &ElementSet) -> Complex64 {
        match self {
            Element::LAA => Complex64::new(es.l_aa, 0.0),
            Element::LBB => Complex64::new(es.l_bb, 0.0),
            Element::LAB => es.l_ab,
            Element::M => es.m,
            Element::CAB => es.c_ab,
            Element::CBA => es.c_ba,
        }
    }

    pub fn oracle(self, scen: &Scenario, spec: &QuadratureSpec) -> Result<Complex64> {
        Ok(match self {
            Element::LAA => l_ij_quadrature(scen, spec, Detector::A, Detector::A)?,
            Element::LBB => l_ij_quadrature(scen, spec, Detector::B, Detector::B)?,
            Element::LAB => l_ij_quadrature(scen, spec, Detector::A, Detector::B)?,
            Element::M => m_quadrature(scen, spec)?,
            Element::CAB => c_quadrature(scen, spec, CausalPair::AB)?,
            Element::CBA => c_quadrature(scen, spec, CausalPair::BA)?,
        })
    }
}

const BCS: [BoundaryCondition; 3] = [
    BoundaryCondition::Dirichlet,
    BoundaryCondition::Transparent,
    BoundaryCondition::Neumann,
];

/// The pinned scenarios: local-term points at `L = 1, gap = 2`, and
/// entangling-term points at `L = 5, gap = 3` (geodesic) and `L = 1, gap = 2`
/// (static), at separation 2 and delays 0 and 2, for every boundary condition.
pub fn pinned_scenarios() -> Vec<Scenario> {
    let mut out = Vec::new();
    let at = |length, gap, delay| Point { length, gap, separation: 2.0, delay };
    for bc in BCS {
        let points = [
            (ScenarioKind::Geodesic, at(1.0, 2.0, 0.0)),
            (ScenarioKind::Geodesic, at(5.0, 3.0, 0.0)),
            (ScenarioKind::Geodesic, at(5.0, 3.0, 2.0)),
            (ScenarioKind::Static, at(1.0, 2.0, 0.0)),
            (ScenarioKind::Static, at(1.0, 2.0, 2.0)),
        ];
        for (kind, p) in points {
            out.push(scenario(kind, bc, &p, 0.01).expect("pinned scenario is valid"));
        }
    }
    out
}

pub fn key(scen: &Scenario, element: Element) -> String {
    format!("{}#{}", fingerprint(scen), element.name())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PinSet {
    pub values: BTreeMap<String, Complex64>,
}

impl PinSet {
    /// Runs the oracle at every pinned scenario.
    pub fn generate(spec: &QuadratureSpec) -> Result<Self> {
        let mut values = BTreeMap::new();
        for scen in pinned_scenarios() {
            for e in Element::ALL {
                values.insert(key(&scen, e), e.oracle(&scen, spec)?);
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, scen: &Scenario, element: Element) -> Option<Complex64> {
        self.values.get(&key(scen, element)).copied()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# adsharvest pinned oracle values: key re im\n");
        for (k, v) in &self.values {
            writeln!(s, "{k} {:e} {:e}", v.re, v.im).unwrap();
        }
        s
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, reason: &str| Error::Pins {
            path: path.to_path_buf(),
            line,
            reason: reason.to_string(),
        };
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<_> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(err(i + 1, "expected `key re im`"));
            }
            let re = f[1].parse().map_err(|_| err(i + 1, "bad real part"))?;
            let im = f[2].parse().map_err(|_| err(i + 1, "bad imaginary part"))?;
            values.insert(f[0].to_string(), Complex64::new(re, im));
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}
