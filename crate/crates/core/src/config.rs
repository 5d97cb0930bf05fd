//! Keyed run configuration for the `maxwell-lab` binary.
//!
//! One file may hold a section per command; a missing section falls back to
//! the defaults below. Unknown keys anywhere are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{PeelingConfig, WindowPolicy};
use crate::evolution::EvolutionConfig;
use crate::tensorcalc::IdentitySuiteConfig;
use crate::zeroresolvent::FuzzConfig;
use crate::{Error, Result};

/// Environment variable naming the root under which per-command output
/// directories are created.
pub const OUTPUT_ROOT_VAR: &str = "MAXWELL_LAB_OUT";

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolutionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peel: Option<PeelConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitySuiteConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolvent: Option<FuzzConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportConfig>,
}

/// Tail fit of one recorded probe.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// Directory written by `evolve`; defaults to the `evolve` output directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<PathBuf>,
    /// Probe position `r*`; defaults to the first recorded probe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<f64>,
    /// `psi`, `F_uv`, `F_AB`, `F_uA` or `F_vA`.
    #[serde(default = "default_column")]
    pub column: String,
    #[serde(default)]
    pub policy: WindowPolicy,
    /// Expected decay exponent; without it no pass/fail is reported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_column() -> String {
    "psi".to_string()
}

fn default_tolerance() -> f64 {
    0.2
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            run: None,
            probe: None,
            column: default_column(),
            policy: WindowPolicy::default(),
            target: None,
            tolerance: default_tolerance(),
        }
    }
}

/// Peeling scan of a recorded run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeelConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<PathBuf>,
    #[serde(default)]
    pub scan: PeelingConfig,
    /// Accepted absolute deviation of each slope from its target.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl Default for PeelConfig {
    fn default() -> Self {
        Self { run: None, scan: PeelingConfig::default(), tolerance: default_tolerance() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    /// Output directories of earlier commands.
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
}

impl RunConfig {
    /// Parses TOML, or JSON when the file ends in `.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {x}")))
            }
        };
        if let Some(fit) = &self.fit {
            positive("fit.tolerance", fit.tolerance)?;
            positive("fit.policy.decades", fit.policy.decades)?;
            if crate::evolution::COMPONENT_COLUMNS.iter().chain(["psi"].iter()).all(|c| *c != fit.column) {
                return Err(Error::Config(format!("unknown fit column {:?}", fit.column)));
            }
        }
        if let Some(peel) = &self.peel {
            positive("peel.tolerance", peel.tolerance)?;
        }
        if let Some(ev) = &self.evolve {
            positive("evolve.grid.cfl", ev.grid.cfl)?;
            if ev.grid.n < 8 {
                return Err(Error::Config(format!("evolve.grid.n = {} is too small", ev.grid.n)));
            }
        }
        Ok(())
    }

    pub fn evolve_or_default(&self) -> EvolutionConfig {
        self.evolve.clone().unwrap_or_else(EvolutionConfig::schwarzschild_default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(RunConfig::from_toml("colour = 3\n"), Err(Error::Config(_))));
        let nested = "[evolve]\nt_final = 10\nbogus = 1\n[evolve.metric]\nfamily = \"minkowski\"\n";
        assert!(matches!(RunConfig::from_toml(nested), Err(Error::Config(_))));
        assert!(matches!(RunConfig::from_toml("[fit]\ncolumn = \"F_xx\"\n"), Err(Error::Config(_))));
    }

    #[test]
    fn toml_round_trip_keeps_sections() {
        let cfg = RunConfig {
            evolve: Some(EvolutionConfig::schwarzschild_default()),
            fit: Some(FitConfig::default()),
            peel: Some(PeelConfig::default()),
            resolvent: Some(FuzzConfig::default()),
            ..Default::default()
        };
        let text = cfg.to_toml().unwrap();
        let back = RunConfig::from_toml(&text).unwrap();
        assert_eq!(back.fit, cfg.fit);
        assert_eq!(back.peel, cfg.peel);
        assert_eq!(back.resolvent, cfg.resolvent);
        let ev = back.evolve.unwrap();
        assert_eq!(ev.grid, EvolutionConfig::schwarzschild_default().grid);
        assert_eq!(ev.probes, vec![20.0]);
    }

    #[test]
    fn json_is_accepted() {
        let cfg = RunConfig::from_json(r#"{"identities": {"seed": 3}}"#).unwrap();
        assert_eq!(cfg.identities.unwrap().seed, 3);
    }
}
