use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub frame_tol: f64,
    pub causal_tol: f64,
    pub fit_tol: f64,
    pub sample_count: usize,
    pub quadrature_panels: usize,
    pub output_dir: PathBuf,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            frame_tol: 1e-7,
            causal_tol: 1e-9,
            fit_tol: 1e-6,
            sample_count: 200,
            quadrature_panels: 64,
            output_dir: PathBuf::from("."),
            format: Format::Csv,
        }
    }
}

/// Partial settings, as read from a config file or from flags.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub frame_tol: Option<f64>,
    pub causal_tol: Option<f64>,
    pub fit_tol: Option<f64>,
    pub samples: Option<usize>,
    pub panels: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::parse(path.display(), e))
    }
}

impl RunConfig {
    fn apply(mut self, o: Overrides) -> Self {
        self.frame_tol = o.frame_tol.unwrap_or(self.frame_tol);
        self.causal_tol = o.causal_tol.unwrap_or(self.causal_tol);
        self.fit_tol = o.fit_tol.unwrap_or(self.fit_tol);
        self.sample_count = o.samples.unwrap_or(self.sample_count);
        self.quadrature_panels = o.panels.unwrap_or(self.quadrature_panels);
        self.output_dir = o.out.unwrap_or(self.output_dir);
        self.format = o.format.unwrap_or(self.format);
        self
    }

    /// Flags win over the config file, which wins over the defaults.
    pub fn resolve(file: Option<Overrides>, flags: Overrides) -> Result<Self, CliError> {
        let cfg = RunConfig::default().apply(file.unwrap_or_default()).apply(flags);
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), CliError> {
        if self.sample_count < 16 {
            return Err(CliError::usage(format!("samples must be at least 16, got {}", self.sample_count)));
        }
        if self.quadrature_panels < 16 {
            return Err(CliError::usage(format!(
                "panels must be at least 16, got {}",
                self.quadrature_panels
            )));
        }
        for (name, v) in [("tol-frame", self.frame_tol), ("tol-causal", self.causal_tol), ("tol-fit", self.fit_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::usage(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn with_output_dir(&self, dir: PathBuf) -> Self {
        RunConfig {
            output_dir: dir,
            ..self.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = Overrides {
            samples: Some(50),
            fit_tol: Some(1e-4),
            ..Default::default()
        };
        let flags = Overrides {
            samples: Some(80),
            ..Default::default()
        };
        let cfg = RunConfig::resolve(Some(file), flags).unwrap();
        assert_eq!(cfg.sample_count, 80);
        assert_eq!(cfg.fit_tol, 1e-4);
        assert_eq!(cfg.frame_tol, 1e-7);
    }

    #[test]
    fn rejects_bad_values() {
        let flags = Overrides {
            samples: Some(4),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, flags).is_err());
        let flags = Overrides {
            fit_tol: Some(-1.0),
            ..Default::default()
        };
        assert!(RunConfig::resolve(None, flags).is_err());
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        assert!(serde_json::from_str::<Overrides>(r#"{"sample":3}"#).is_err());
        let o: Overrides = serde_json::from_str(r#"{"samples":30,"format":"json"}"#).unwrap();
        assert_eq!(o.format, Some(Format::Json));
    }
}
