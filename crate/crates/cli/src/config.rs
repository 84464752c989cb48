//! Run configuration (TOML). Unknown keys are rejected.

use std::path::{Path, PathBuf};

use gp_spectrum_core::{ExponentialSumKernel, KernelFamily};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kernel: KernelSpec,
    pub n_min: u32,
    pub n_max: u32,
    /// Number of real branches `j = 1..=J`.
    #[serde(rename = "J")]
    pub branches: usize,
    #[serde(default = "default_tol_root")]
    pub tol_root: f64,
    #[serde(default = "default_tol_integrator")]
    pub tol_integrator: f64,
    #[serde(default = "default_eps")]
    pub eps: f64,
    pub out_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub simulate: Option<SimulateSpec>,
    pub sweep: Option<SweepSpec>,
}

fn default_tol_root() -> f64 {
    gp_spectrum_core::realspec::DEFAULT_ROOT_TOLERANCE
}

fn default_tol_integrator() -> f64 {
    1e-9
}

fn default_eps() -> f64 {
    gp_spectrum_core::complexspec::DEFAULT_EPS
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub family: FamilyTag,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub a: Option<Vec<f64>>,
    pub b: Option<Vec<f64>>,
    pub params: Option<FamilyParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    FiniteList,
    PowerLaw,
    Logarithmic,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyParams {
    #[serde(rename = "A", default = "one")]
    pub amplitude: f64,
    pub gamma: f64,
    #[serde(default = "one")]
    pub c: f64,
    pub beta: Option<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSpec {
    /// Initial sine coefficients `ξ_1, ξ_2, …`.
    pub xi: Vec<f64>,
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub x_samples: Vec<f64>,
    /// `Σ ξ_n²` over the modes not listed in `xi`.
    #[serde(default)]
    pub tail_energy: f64,
}

fn default_samples() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub j: Option<usize>,
}

impl KernelSpec {
    pub fn family(&self) -> Result<KernelFamily, CliError> {
        match self.family {
            FamilyTag::FiniteList => {
                if self.params.is_some() {
                    return Err(CliError::Config("finite-list kernels take a and b, not params".into()));
                }
                match (&self.a, &self.b) {
                    (Some(a), Some(b)) => Ok(KernelFamily::FiniteList { a: a.clone(), b: b.clone() }),
                    _ => Err(CliError::Config("finite-list kernel needs both a and b".into())),
                }
            }
            FamilyTag::PowerLaw | FamilyTag::Logarithmic => {
                if self.a.is_some() || self.b.is_some() {
                    return Err(CliError::Config("parametric kernels take params, not a and b".into()));
                }
                let p = self
                    .params
                    .as_ref()
                    .ok_or_else(|| CliError::Config("parametric kernel needs params".into()))?;
                if self.family == FamilyTag::PowerLaw {
                    let beta = p
                        .beta
                        .ok_or_else(|| CliError::Config("power-law params need beta".into()))?;
                    Ok(KernelFamily::PowerLaw {
                        amplitude: p.amplitude,
                        gamma: p.gamma,
                        c: p.c,
                        beta,
                    })
                } else {
                    if p.beta.is_some() {
                        return Err(CliError::Config("logarithmic params take no beta".into()));
                    }
                    Ok(KernelFamily::Logarithmic {
                        amplitude: p.amplitude,
                        gamma: p.gamma,
                        c: p.c,
                    })
                }
            }
        }
    }

    pub fn instantiate(&self) -> Result<ExponentialSumKernel, CliError> {
        let family = self.family()?;
        let m = match (&family, self.m) {
            (_, Some(m)) => m,
            (KernelFamily::FiniteList { a, .. }, None) => a.len(),
            _ => return Err(CliError::Config("parametric kernel needs M".into())),
        };
        family.instantiate(m).map_err(|e| CliError::Config(e.to_string()))
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.n_min < 1 {
            return bad("n_min must be >= 1".into());
        }
        if self.n_max < self.n_min {
            return bad(format!("n_max = {} < n_min = {}", self.n_max, self.n_min));
        }
        if !(self.tol_root > 0.0) || !(self.tol_integrator > 0.0) {
            return bad("tolerances must be > 0".into());
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return bad(format!("eps = {} must lie in (0, 1)", self.eps));
        }
        if let Some(sim) = &self.simulate {
            if !(sim.t_end > 0.0) {
                return bad("simulate.t_end must be > 0".into());
            }
            if sim.xi.is_empty() || sim.samples == 0 {
                return bad("simulate needs xi and samples >= 1".into());
            }
        }
        Ok(())
    }
}
