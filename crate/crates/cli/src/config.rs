//! Run configuration: a TOML file with one potential block plus optional
//! quantum, solver, units, output, wavefunction, sweep and verify sections.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twoterm::potential::{coulomb_limit_spec, hulthen_spec, manning_rosen_spec};
use twoterm::{Component, PotentialSpec, QuantumNumbers, SolverConfig, UnitSystem};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    #[default]
    Kg,
    Dirac,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentChoice {
    #[default]
    Upper,
    Lower,
}

impl From<ComponentChoice> for Component {
    fn from(c: ComponentChoice) -> Self {
        match c {
            ComponentChoice::Upper => Component::Upper,
            ComponentChoice::Lower => Component::Lower,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoTermBlock {
    #[serde(rename = "V0")]
    pub v0: f64,
    #[serde(rename = "V1", default)]
    pub v1: f64,
    pub beta: f64,
    #[serde(default = "one")]
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManningRosenBlock {
    #[serde(rename = "A")]
    pub a: f64,
    pub alpha: f64,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HulthenBlock {
    #[serde(rename = "V0")]
    pub v0: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoulombBlock {
    pub zeta: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantumBlock {
    #[serde(default = "default_n")]
    pub n: Vec<u32>,
    pub ell: Option<Vec<u32>>,
    pub kappa: Option<Vec<i32>>,
    #[serde(default)]
    pub component: ComponentChoice,
}

impl Default for QuantumBlock {
    fn default() -> Self {
        Self { n: default_n(), ell: None, kappa: None, component: ComponentChoice::Upper }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_margin")]
    pub margin: f64,
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self { grid: default_grid(), tol: default_tol(), margin: default_margin() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitsBlock {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub c: f64,
}

impl Default for UnitsBlock {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavefunctionBlock {
    #[serde(default)]
    pub n: u32,
    pub ell: Option<u32>,
    pub kappa: Option<i32>,
    #[serde(default = "default_r_min")]
    pub r_min: f64,
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    #[serde(default = "default_points")]
    pub points: usize,
    #[serde(default)]
    pub joint_norm: bool,
}

impl Default for WavefunctionBlock {
    fn default() -> Self {
        Self {
            n: 0,
            ell: None,
            kappa: None,
            r_min: default_r_min(),
            r_max: default_r_max(),
            points: default_points(),
            joint_norm: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default)]
    pub criteria: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub equation: Equation,
    #[serde(default = "one")]
    pub m0: f64,
    pub potential: Option<TwoTermBlock>,
    pub manning_rosen: Option<ManningRosenBlock>,
    pub hulthen: Option<HulthenBlock>,
    pub coulomb: Option<CoulombBlock>,
    #[serde(default)]
    pub quantum: QuantumBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub units: UnitsBlock,
    #[serde(default)]
    pub output: OutputBlock,
    pub wavefunction: Option<WavefunctionBlock>,
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub verify: VerifyBlock,
}

fn one() -> f64 {
    1.0
}
fn default_n() -> Vec<u32> {
    vec![0]
}
fn default_grid() -> usize {
    512
}
fn default_tol() -> f64 {
    1e-12
}
fn default_margin() -> f64 {
    1e-9
}
fn default_r_min() -> f64 {
    0.01
}
fn default_r_max() -> f64 {
    30.0
}
fn default_points() -> usize {
    301
}

impl Default for RunConfig {
    /// The configuration used when no file is given.
    fn default() -> Self {
        Self {
            equation: Equation::Kg,
            m0: 1.0,
            potential: Some(TwoTermBlock { v0: 1.0, v1: 0.5, beta: 0.2, q: 1.0 }),
            manning_rosen: None,
            hulthen: None,
            coulomb: None,
            quantum: QuantumBlock {
                n: vec![0, 1, 2],
                ell: Some(vec![0, 1]),
                kappa: None,
                component: ComponentChoice::Upper,
            },
            solver: SolverBlock::default(),
            units: UnitsBlock::default(),
            output: OutputBlock::default(),
            wavefunction: None,
            sweep: None,
            verify: VerifyBlock::default(),
        }
    }
}

fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| config_error(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => config_error(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let blocks =
            [self.potential.is_some(), self.manning_rosen.is_some(), self.hulthen.is_some(), self.coulomb.is_some()]
                .iter()
                .filter(|b| **b)
                .count();
        if blocks != 1 {
            return Err(config_error(format!(
                "exactly one of [potential], [manning_rosen], [hulthen], [coulomb] is required, found {blocks}"
            )));
        }
        if !(self.solver.tol.is_finite() && self.solver.tol > 0.0) {
            return Err(config_error(format!("solver.tol must be > 0, got {}", self.solver.tol)));
        }
        if self.quantum.n.is_empty() {
            return Err(config_error("quantum.n must not be empty"));
        }
        self.solver_config()?;
        self.units()?;
        self.potential_spec()?;
        self.levels()?;
        Ok(())
    }

    pub fn units(&self) -> Result<UnitSystem, CliError> {
        UnitSystem::new(self.units.hbar, self.units.c).map_err(|e| config_error(format!("[units]: {e}")))
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let config = SolverConfig {
            grid_points: self.solver.grid,
            tolerance: self.solver.tol,
            window_margin: self.solver.margin,
            ..SolverConfig::default()
        };
        config.validate().map_err(|e| config_error(format!("[solver]: {e}")))?;
        Ok(config)
    }

    pub fn potential_spec(&self) -> Result<PotentialSpec, CliError> {
        let units = self.units()?;
        let (section, spec) = if let Some(p) = &self.potential {
            ("potential", PotentialSpec::new(p.v0, p.v1, p.beta, p.q, self.m0))
        } else if let Some(p) = &self.manning_rosen {
            ("manning_rosen", manning_rosen_spec(p.a, p.alpha, p.b, self.m0))
        } else if let Some(p) = &self.hulthen {
            ("hulthen", hulthen_spec(p.v0, p.beta, self.m0))
        } else if let Some(p) = &self.coulomb {
            ("coulomb", coulomb_limit_spec(p.zeta, p.beta, self.m0, &units))
        } else {
            return Err(config_error("no potential block"));
        };
        spec.map_err(|e| config_error(format!("[{section}]: {e}")))
    }

    /// Angular labels for the configured equation.
    fn angulars(&self) -> Result<Vec<i64>, CliError> {
        let q = &self.quantum;
        match self.equation {
            Equation::Kg => match &q.ell {
                Some(list) if list.is_empty() => Err(config_error("quantum.ell must not be empty")),
                Some(list) => Ok(list.iter().map(|&l| i64::from(l)).collect()),
                None if q.kappa.is_some() => {
                    Err(config_error("quantum.ell is required for equation = \"kg\" (quantum.kappa given)"))
                }
                None => Ok(vec![0]),
            },
            Equation::Dirac => match &q.kappa {
                Some(list) if list.is_empty() => Err(config_error("quantum.kappa must not be empty")),
                Some(list) if list.contains(&0) => Err(config_error("quantum.kappa must not contain 0")),
                Some(list) => Ok(list.iter().map(|&k| i64::from(k)).collect()),
                None if q.ell.is_some() => {
                    Err(config_error("quantum.kappa is required for equation = \"dirac\" (quantum.ell given)"))
                }
                None => Ok(vec![-1]),
            },
        }
    }

    /// Requested levels, n-major and angular-minor.
    pub fn levels(&self) -> Result<Vec<QuantumNumbers>, CliError> {
        let angulars = self.angulars()?;
        let mut out = Vec::new();
        for &n in &self.quantum.n {
            for &a in &angulars {
                out.push(self.quantum_numbers(n, a)?);
            }
        }
        Ok(out)
    }

    pub fn quantum_numbers(&self, n: u32, angular: i64) -> Result<QuantumNumbers, CliError> {
        match self.equation {
            Equation::Kg => {
                let ell =
                    u32::try_from(angular).map_err(|_| config_error(format!("ell must be >= 0, got {angular}")))?;
                Ok(QuantumNumbers::kg(n, ell))
            }
            Equation::Dirac => {
                let kappa =
                    i32::try_from(angular).map_err(|_| config_error(format!("kappa {angular} out of range")))?;
                QuantumNumbers::dirac(n, kappa, self.quantum.component.into())
                    .map_err(|e| config_error(format!("quantum.kappa: {e}")))
            }
        }
    }

    /// Copy with one potential parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Result<Self, CliError> {
        let mut out = self.clone();
        let unknown =
            || config_error(format!("sweep.parameter \"{name}\" is not a parameter of the active potential block"));
        if name == "m0" {
            out.m0 = value;
            return Ok(out);
        }
        if let Some(p) = out.potential.as_mut() {
            match name {
                "V0" => p.v0 = value,
                "V1" => p.v1 = value,
                "beta" => p.beta = value,
                "q" => p.q = value,
                _ => return Err(unknown()),
            }
        } else if let Some(p) = out.manning_rosen.as_mut() {
            match name {
                "A" => p.a = value,
                "alpha" => p.alpha = value,
                "b" => p.b = value,
                _ => return Err(unknown()),
            }
        } else if let Some(p) = out.hulthen.as_mut() {
            match name {
                "V0" => p.v0 = value,
                "beta" => p.beta = value,
                _ => return Err(unknown()),
            }
        } else if let Some(p) = out.coulomb.as_mut() {
            match name {
                "zeta" => p.zeta = value,
                "beta" => p.beta = value,
                _ => return Err(unknown()),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let c = RunConfig::default();
        c.validate().unwrap();
        assert_eq!(c.levels().unwrap().len(), 6);
    }

    #[test]
    fn minimal_file() {
        let c = RunConfig::parse("[hulthen]\nV0 = 1.0\nbeta = 0.2\n").unwrap();
        c.validate().unwrap();
        let spec = c.potential_spec().unwrap();
        assert_eq!((spec.v0, spec.v1, spec.q), (1.0, 0.0, 1.0));
    }

    #[test]
    fn two_potential_blocks_rejected() {
        let c = RunConfig::parse("[hulthen]\nV0 = 1.0\nbeta = 0.2\n[coulomb]\nzeta = 0.1\nbeta = 0.01\n").unwrap();
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = RunConfig::parse("[potential]\nV0 = \n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = RunConfig::parse("[potential]\nV0 = 1.0\nbeta = 0.2\nbogus = 3\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }

    #[test]
    fn empty_ranges_rejected() {
        let text = "[potential]\nV0 = 1.0\nbeta = 0.2\n[quantum]\nn = []\n";
        assert!(RunConfig::parse(text).unwrap().validate().is_err());
        let text = "[potential]\nV0 = 1.0\nbeta = 0.2\n[quantum]\nell = []\n";
        assert!(RunConfig::parse(text).unwrap().validate().is_err());
    }

    #[test]
    fn dirac_needs_kappa() {
        let mut c = RunConfig { equation: Equation::Dirac, ..Default::default() };
        assert!(c.validate().is_err());
        c.quantum.ell = None;
        c.quantum.kappa = Some(vec![1, -1, 2]);
        c.validate().unwrap();
        c.quantum.kappa = Some(vec![0]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn sweep_parameter_names() {
        let c = RunConfig::default();
        assert_eq!(c.with_parameter("beta", 0.3).unwrap().potential.unwrap().beta, 0.3);
        assert!(c.with_parameter("zeta", 0.3).is_err());
    }
}
