//! JSON run configuration. Every level rejects unknown keys.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::sweep::Scenario;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub oracle: Option<OracleSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub scenario: Option<Scenario>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub eta: Option<Vec<f64>>,
    pub gain_min: Option<f64>,
    pub gain_max: Option<f64>,
    pub gain_steps: Option<usize>,
    pub r_prime: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub alpha_steps: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionName {
    Symmetric,
    Asymmetric,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    pub r: Option<f64>,
    pub gains: Option<Vec<f64>>,
    pub etas: Option<Vec<f64>>,
    pub selections: Option<Vec<SelectionName>>,
    pub kappa: Option<f64>,
    /// Fixed truncation; when absent each grid point picks its own.
    pub dim_per_mode: Option<usize>,
    pub fock_dt: Option<f64>,
    pub ode_dt: Option<f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_document() {
        let cfg = RunConfig::parse(
            r#"{
                "sweep": {"scenario": "asymmetric", "r": 1.0, "eta": [0.0, 0.5],
                          "gain_min": 1.0, "gain_max": 3.0, "gain_steps": 11, "output": "out.csv"},
                "oracle": {"r": 0.3, "gains": [1.0, 1.3], "selections": ["symmetric"], "dim_per_mode": 20}
            }"#,
        )
        .unwrap();
        let sweep = cfg.sweep.unwrap();
        assert_eq!(sweep.scenario, Some(Scenario::Asymmetric));
        assert_eq!(sweep.eta, Some(vec![0.0, 0.5]));
        assert_eq!(
            cfg.oracle.unwrap().selections,
            Some(vec![SelectionName::Symmetric])
        );
    }

    #[test]
    fn rejects_unknown_keys_at_every_level() {
        assert!(RunConfig::parse(r#"{"sweeps": {}}"#).is_err());
        assert!(RunConfig::parse(r#"{"sweep": {"gain": 2.0}}"#).is_err());
        assert!(RunConfig::parse(r#"{"oracle": {"dim": 12}}"#).is_err());
        assert!(RunConfig::parse(r#"{"sweep": {"scenario": "lossy"}}"#).is_err());
    }

    #[test]
    fn empty_document_is_valid() {
        assert_eq!(RunConfig::parse("{}").unwrap(), RunConfig::default());
    }
}
