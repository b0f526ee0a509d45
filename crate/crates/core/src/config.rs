//! Declarative run configuration shared by the CLI subcommands.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernelquad::{Engine, QuadratureSpec};

/// Environment variable holding the default seed.
pub const SEED_ENV: &str = "THINFRAC_SEED";

/// Every field is optional; a command-line flag overrides the document value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "fn", skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_schedule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_from: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_to: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub panels: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_set: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_set: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plot: Option<PathBuf>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident; $($field:ident),*) => {
        $( if $src.$field.is_some() { $dst.$field = $src.$field; } )*
    };
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Fields set in `flags` replace those in `self`.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        overlay_fields!(self, flags;
            function, d, s, s_schedule, p, eps, eps_from, eps_to, tau, engine, samples, panels, seed,
            s_grid, d_set, p_set, suite, budget, out, csv, plot);
        self
    }

    /// Explicit seed, else `THINFRAC_SEED`, else 0.
    pub fn resolved_seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::usage(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
            Err(_) => Ok(0),
        }
    }

    pub fn quadrature_spec(&self) -> Result<QuadratureSpec> {
        let defaults = QuadratureSpec::default();
        let spec = QuadratureSpec {
            engine: self.engine.unwrap_or(defaults.engine),
            samples: self.samples.unwrap_or(defaults.samples),
            panels_per_axis: self.panels.unwrap_or(defaults.panels_per_axis),
            seed: self.resolved_seed()?,
            ..defaults
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn require<T: Clone>(value: &Option<T>, name: &str) -> Result<T> {
        value.clone().ok_or_else(|| Error::usage(format!("missing required setting --{name}")))
    }
}

/// Shortest round-trip text for a float, in exponent form outside `[1e-4, 1e16)`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for v in [0.0, 1.5, 2.7e-15, -3.25e-9, 1e20, 0.125] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(2.5e-15), "2.5e-15");
        assert_eq!(format_float(0.125), "0.125");
    }

    #[test]
    fn json_round_trip() {
        let c = RunConfig {
            function: Some("planar-sine:k=1".into()),
            d: Some(2),
            s: Some(0.75),
            engine: Some(Engine::MonteCarlo),
            s_grid: Some(vec![0.25, 0.5]),
            out: Some("-".into()),
            ..Default::default()
        };
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
        assert!(RunConfig::from_json("{\"unknown\": 1}").is_err());
    }

    #[test]
    fn flags_override_document() {
        let doc = RunConfig {
            s: Some(0.3),
            p: Some(2.0),
            ..Default::default()
        };
        let flags = RunConfig {
            s: Some(0.6),
            ..Default::default()
        };
        let merged = doc.overlay(flags);
        assert_eq!(merged.s, Some(0.6));
        assert_eq!(merged.p, Some(2.0));
    }

    #[test]
    fn spec_from_config() {
        let c = RunConfig {
            engine: Some(Engine::MonteCarlo),
            samples: Some(5000),
            seed: Some(9),
            ..Default::default()
        };
        let spec = c.quadrature_spec().unwrap();
        assert_eq!(spec.samples, 5000);
        assert_eq!(spec.seed, 9);
        let bad = RunConfig {
            panels: Some(2),
            ..Default::default()
        };
        assert!(bad.quadrature_spec().is_err());
    }
}
