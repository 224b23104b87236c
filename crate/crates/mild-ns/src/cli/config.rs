//! Run-config schema: JSON with strict validation (unknown keys rejected,
//! physical quantities positive). Exponent tokens accept numbers, "inf"
//! (essential supremum) and "infbar" (true supremum).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::initial::InitialData;
use crate::lorentz::{Exponent, LorentzIndex, NormKind};
use crate::solver::SolveConfig;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ExponentToken {
    Number(f64),
    Name(String),
}

impl ExponentToken {
    pub fn to_exponent(&self) -> Result<Exponent> {
        match self {
            ExponentToken::Number(v) => Ok(Exponent::Finite(*v)),
            ExponentToken::Name(s) => match s.as_str() {
                "inf" => Ok(Exponent::Infinity),
                "infbar" => Ok(Exponent::Supremum),
                other => Err(Error::Config(format!("unknown exponent token {other:?}"))),
            },
        }
    }

    /// Subcritical exponents: a number or "inf" (no sup variant).
    pub fn to_subcritical(&self) -> Result<f64> {
        match self {
            ExponentToken::Number(v) => Ok(*v),
            ExponentToken::Name(s) if s == "inf" => Ok(f64::INFINITY),
            ExponentToken::Name(s) => Err(Error::Config(format!(
                "subcritical exponent token {s:?} must be a number or \"inf\""
            ))),
        }
    }
}

fn default_lorentz_indices() -> Vec<(ExponentToken, ExponentToken)> {
    vec![
        (ExponentToken::Number(2.0), ExponentToken::Number(2.0)),
        (
            ExponentToken::Name("infbar".into()),
            ExponentToken::Name("inf".into()),
        ),
    ]
}

fn default_threshold_rs() -> Vec<ExponentToken> {
    vec![ExponentToken::Name("inf".into())]
}

fn default_picard_tolerance() -> f64 {
    1e-10
}

fn default_max_iterations() -> usize {
    64
}

fn default_output_dir() -> String {
    "out".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub times: Vec<f64>,
    pub ps: Vec<f64>,
}

impl Default for KernelSection {
    fn default() -> Self {
        KernelSection {
            times: vec![0.25, 1.0, 2.5],
            ps: vec![1.0, 1.5],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularitySection {
    pub alphas: Vec<f64>,
    /// Pair-distance cap for the Hoelder quotient; defaults to L/8.
    pub radius_cap: Option<f64>,
}

impl Default for RegularitySection {
    fn default() -> Self {
        RegularitySection {
            alphas: vec![0.25, 0.5, 0.75],
            radius_cap: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSection {
    pub trajectories: usize,
}

impl Default for EstimateSection {
    fn default() -> Self {
        EstimateSection { trajectories: 20 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dimension: usize,
    pub points_per_axis: usize,
    pub box_length: f64,
    pub initial_data: InitialData,
    pub horizon: f64,
    pub time_nodes: usize,
    #[serde(default = "default_lorentz_indices")]
    pub lorentz_indices: Vec<(ExponentToken, ExponentToken)>,
    #[serde(default = "default_threshold_rs")]
    pub threshold_rs: Vec<ExponentToken>,
    /// Exponent for the smallness criterion; defaults to "inf".
    #[serde(default)]
    pub subcritical_r: Option<ExponentToken>,
    #[serde(default = "default_picard_tolerance")]
    pub picard_tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub kernel: Option<KernelSection>,
    #[serde(default)]
    pub regularity: Option<RegularitySection>,
    #[serde(default)]
    pub estimates: Option<EstimateSection>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config(format!(
                "horizon {} must be positive",
                self.horizon
            )));
        }
        if self.time_nodes < 4 {
            return Err(Error::Config(format!(
                "time_nodes {} below 4",
                self.time_nodes
            )));
        }
        if !(self.picard_tolerance > 0.0) {
            return Err(Error::Config("picard_tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        self.indices()?;
        self.solve_config()?;
        if let Some(kernel) = &self.kernel {
            if kernel.times.iter().any(|&t| !(t > 0.0)) {
                return Err(Error::Config("kernel times must be positive".into()));
            }
            if kernel.ps.iter().any(|&p| !(p >= 1.0) || p.is_infinite()) {
                return Err(Error::Config("kernel ps must lie in [1, inf)".into()));
            }
        }
        if let Some(reg) = &self.regularity {
            if reg.alphas.iter().any(|&a| !(a > 0.0 && a < 1.0)) {
                return Err(Error::Config("regularity alphas must lie in (0, 1)".into()));
            }
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.dimension, self.points_per_axis, self.box_length)
    }

    /// Recorded Lorentz indices (quasinorm flavor).
    pub fn indices(&self) -> Result<Vec<LorentzIndex>> {
        self.lorentz_indices
            .iter()
            .map(|(p, q)| {
                LorentzIndex::new(p.to_exponent()?, q.to_exponent()?, NormKind::Quasinorm)
            })
            .collect()
    }

    pub fn solve_config(&self) -> Result<SolveConfig> {
        let threshold_rs = self
            .threshold_rs
            .iter()
            .map(|t| t.to_subcritical())
            .collect::<Result<Vec<_>>>()?;
        let subcritical_r = match &self.subcritical_r {
            Some(token) => token.to_subcritical()?,
            None => f64::INFINITY,
        };
        let cfg = SolveConfig {
            horizon: self.horizon,
            nodes: self.time_nodes,
            picard_tolerance: self.picard_tolerance,
            max_iterations: self.max_iterations,
            subcritical_r,
            record_indices: self.indices()?,
            threshold_rs,
        };
        cfg.validate(self.dimension)?;
        Ok(cfg)
    }

    /// All subcritical exponents the constants table must carry.
    pub fn table_rs(&self) -> Result<Vec<f64>> {
        let cfg = self.solve_config()?;
        let mut rs = vec![cfg.subcritical_r];
        for &r in &cfg.threshold_rs {
            if !rs
                .iter()
                .any(|&seen| (seen == r) || (seen.is_infinite() && r.is_infinite()))
            {
                rs.push(r);
            }
        }
        Ok(rs)
    }
}
