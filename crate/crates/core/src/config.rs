//! Run configuration: chart/vacuum/constants presets, physics parameters,
//! field seeds and the suite selection. Serialized as JSON.

use serde::{Deserialize, Serialize};

use crate::bundles::c;
use crate::connections::Couplings;
use crate::error::{Error, Result};
use crate::matter::{CouplingMatrix, CouplingMode};

/// A complex number serialized as `[re, im]`.
pub type ComplexPair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ChartConfig {
    pub preset: String,
    pub extents: [usize; 4],
    pub spacing: [f64; 4],
    pub origin: [f64; 4],
}

impl Default for ChartConfig {
    fn default() -> Self {
        Self {
            preset: "minkowski-coordinate".into(),
            extents: [9, 9, 9, 9],
            spacing: [0.1; 4],
            origin: [0.0; 4],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingConfig {
    /// When absent, `g1` is solved from the charge-normalization constraint
    /// for the configured `g2`.
    pub g1: Option<f64>,
    pub g2: f64,
    pub g3: f64,
}

impl Default for CouplingConfig {
    fn default() -> Self {
        Self {
            g1: None,
            g2: 1.0,
            g3: 1.0,
        }
    }
}

impl CouplingConfig {
    /// Resolve into numeric couplings, solving the constraint when `g1` is
    /// absent: `g1 = g2 / sqrt(36 g2^2 - 9)` (requires `6 g2 > 1`... solved
    /// from `6 g1 g2 = sqrt(g2^2 + 9 g1^2)`).
    pub fn resolve(&self) -> Result<Couplings> {
        let g1 = match self.g1 {
            Some(v) => v,
            None => {
                let denom = 36.0 * self.g2 * self.g2 - 9.0;
                if denom <= 0.0 {
                    return Err(Error::BadCoupling(format!(
                        "no real g1 solves the charge constraint for g2 = {}",
                        self.g2
                    )));
                }
                self.g2 / denom.sqrt()
            }
        };
        Ok(Couplings {
            g1,
            g2: self.g2,
            g3: self.g3,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct HiggsConfig {
    pub mu: f64,
    pub v: f64,
    pub m_phi: f64,
}

impl Default for HiggsConfig {
    fn default() -> Self {
        Self {
            mu: 0.9,
            v: 1.0,
            m_phi: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSeedConfig {
    /// Named smooth generator; `trig-smooth` is the only built-in.
    pub generator: String,
    pub seed: u64,
    pub amplitude: f64,
}

impl Default for FieldSeedConfig {
    fn default() -> Self {
        Self {
            generator: "trig-smooth".into(),
            seed: 42,
            amplitude: 0.25,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub chart: ChartConfig,
    pub vacuum_preset: String,
    pub constants_preset: String,
    pub couplings: CouplingConfig,
    pub higgs: HiggsConfig,
    pub lepton_yukawa: [f64; 3],
    pub quark_h1: [[ComplexPair; 3]; 3],
    pub quark_h2: [[ComplexPair; 3]; 3],
    /// `diagonal-real`, `hermitian` or `general`.
    pub quark_mode: String,
    pub fields: FieldSeedConfig,
    /// Suites to run; empty means all.
    pub suites: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let diag = |d: [f64; 3]| -> [[ComplexPair; 3]; 3] {
            let mut m = [[[0.0, 0.0]; 3]; 3];
            for i in 0..3 {
                m[i][i] = [d[i], 0.0];
            }
            m
        };
        Self {
            chart: ChartConfig::default(),
            vacuum_preset: "trivial-flat".into(),
            constants_preset: "natural".into(),
            couplings: CouplingConfig::default(),
            higgs: HiggsConfig::default(),
            lepton_yukawa: [0.4, 0.7, 1.0],
            quark_h1: diag([0.5, 0.9, 1.3]),
            quark_h2: diag([0.3, 0.6, 1.1]),
            quark_mode: "diagonal-real".into(),
            fields: FieldSeedConfig::default(),
            suites: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn quark_mode(&self) -> Result<CouplingMode> {
        match self.quark_mode.as_str() {
            "diagonal-real" => Ok(CouplingMode::DiagonalReal),
            "hermitian" => Ok(CouplingMode::Hermitian),
            "general" => Ok(CouplingMode::General),
            other => Err(Error::Config(format!("unknown quark mode `{other}`"))),
        }
    }

    pub fn coupling_matrix(&self, which: &[[ComplexPair; 3]; 3]) -> CouplingMatrix {
        let mut m = CouplingMatrix::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = c(which[i][j][0], which[i][j][1]);
            }
        }
        m
    }
}
