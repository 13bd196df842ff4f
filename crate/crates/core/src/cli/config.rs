//! Flat TOML run configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{EvolutionConfig, GaussianProfile, InitialData, InnerBranch, ModelParams, Scheme};
use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::kernel::quadrature::QuadratureSpec;

/// Fewest grid nodes a run accepts.
pub const MIN_NODES: usize = 16;

/// Every key of a run configuration. Keys are flat and typed; unknown keys
/// are rejected so that typos cannot silently fall back to defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Grid nodes.
    pub n: usize,
    /// Outer radius.
    pub r_max: f64,
    pub n1: u32,
    pub g0_a: f64,
    pub g0_rc: f64,
    pub g0_sigma: f64,
    pub g1_a: f64,
    pub g1_rc: f64,
    pub g1_sigma: f64,
    pub scheme: Scheme,
    pub inner: InnerBranch,
    pub cfl: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub blowup_threshold: f64,
    pub step_tolerance: f64,
    pub boundary_tolerance: f64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    /// Radius below which the `G₁` margin is monitored.
    pub r0: f64,
    pub output_dir: PathBuf,
    pub seed: u64,
    /// Times at which full radial profiles are written.
    pub snapshot_times: Vec<f64>,
    pub svg: bool,
}

impl Default for RunConfig {
    /// The large-data acceptance run.
    fn default() -> Self {
        let evo = EvolutionConfig::default();
        let quad = QuadratureSpec::default();
        RunConfig {
            n: 4096,
            r_max: 64.0,
            n1: 0,
            g0_a: 5.0,
            g0_rc: 2.0,
            g0_sigma: 0.5,
            g1_a: 0.0,
            g1_rc: 2.0,
            g1_sigma: 0.5,
            scheme: Scheme::Conservative,
            inner: InnerBranch::Skyrme,
            cfl: evo.cfl,
            t_end: evo.t_end,
            record_every: evo.record_every,
            blowup_threshold: evo.blowup_threshold,
            step_tolerance: evo.step_tolerance,
            boundary_tolerance: evo.boundary_tolerance,
            quad_abs_tol: quad.abs_tol,
            quad_rel_tol: quad.rel_tol,
            r0: 0.5,
            output_dir: PathBuf::from("out"),
            seed: 0,
            snapshot_times: Vec::new(),
            svg: true,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serialises")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_NODES {
            return Err(Error::Config(format!("n = {} is below the floor of {MIN_NODES} nodes", self.n)));
        }
        positive("r_max", self.r_max)?;
        positive("r0", self.r0)?;
        positive("quad_abs_tol", self.quad_abs_tol)?;
        positive("quad_rel_tol", self.quad_rel_tol)?;
        for (name, p) in [("g0", self.g0()), ("g1", self.g1())] {
            if !p.a.is_finite() {
                return Err(Error::Config(format!("{name}_a must be finite")));
            }
            if p.a != 0.0 {
                positive(&format!("{name}_sigma"), p.sigma)?;
                if !(p.rc >= 0.0 && p.rc.is_finite()) {
                    return Err(Error::Config(format!("{name}_rc must be non-negative, got {}", p.rc)));
                }
                let reach = p.rc + self.t_end + 3.0 * p.sigma;
                if !(self.r_max > reach) {
                    return Err(Error::Config(format!(
                        "r_max = {} must exceed {name}_rc + t_end + 3 {name}_sigma = {reach} to keep the boundary clean",
                        self.r_max
                    )));
                }
            }
        }
        self.evolution().validate()?;
        if self.inner == InnerBranch::WaveMap && self.scheme != Scheme::Direct {
            return Err(Error::Config("inner = \"wave_map\" needs scheme = \"direct\"".into()));
        }
        if let Some(t) = self.snapshot_times.iter().find(|t| !(**t >= 0.0 && **t <= self.t_end)) {
            return Err(Error::Config(format!("snapshot time {t} lies outside [0, t_end]")));
        }
        if self.snapshot_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("snapshot_times must increase strictly".into()));
        }
        Ok(())
    }

    pub fn g0(&self) -> GaussianProfile {
        GaussianProfile::new(self.g0_a, self.g0_rc, self.g0_sigma)
    }

    pub fn g1(&self) -> GaussianProfile {
        GaussianProfile::new(self.g1_a, self.g1_rc, self.g1_sigma)
    }

    pub fn data(&self) -> InitialData {
        InitialData { g0: self.g0(), g1: self.g1() }
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::new(self.n, self.r_max, 5)
    }

    pub fn model(&self) -> ModelParams {
        ModelParams { n1: self.n1, scheme: self.scheme, inner: self.inner }
    }

    pub fn evolution(&self) -> EvolutionConfig {
        EvolutionConfig {
            cfl: self.cfl,
            t_end: self.t_end,
            blowup_threshold: self.blowup_threshold,
            record_every: self.record_every,
            boundary_tolerance: self.boundary_tolerance,
            step_tolerance: self.step_tolerance,
        }
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec::default().with_tolerances(self.quad_abs_tol, self.quad_rel_tol)
    }
}
