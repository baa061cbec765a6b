//! Run configuration: a single self-describing key-value file providing
//! defaults that CLI flags override. Unknown keys are rejected, and every
//! numeric parameter is validated against its documented range.

use serde::Serialize;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {detail}")]
    BadValue { line: usize, key: String, detail: String },
    #[error("`{key}` = {value} outside documented range {range}")]
    OutOfRange { key: &'static str, value: String, range: &'static str },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Decimal digits for spectra and resonance values.
    pub precision: usize,
    pub j_max: usize,
    pub k_max: usize,
    pub z_max: i64,
    pub n_max: usize,
    /// Correlation series length.
    pub series_len: usize,
    pub quad_tol: f64,
    pub seed: u64,
    pub out_dir: Option<PathBuf>,
    pub emit_json: bool,
    pub emit_csv: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision: 50,
            j_max: 3,
            k_max: 3,
            z_max: 2,
            n_max: 3,
            series_len: 25,
            quad_tol: 1e-10,
            seed: 0,
            out_dir: None,
            emit_json: true,
            emit_csv: false,
        }
    }
}

impl RunConfig {
    /// Parse `key = value` lines; `#` starts a comment.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let stripped = raw.split('#').next().unwrap_or("").trim();
            if stripped.is_empty() {
                continue;
            }
            let Some((key, value)) = stripped.split_once('=') else {
                return Err(ConfigError::BadValue {
                    line,
                    key: stripped.to_string(),
                    detail: "expected `key = value`".into(),
                });
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |detail: String| ConfigError::BadValue { line, key: key.to_string(), detail };
            match key {
                "precision" => cfg.precision = value.parse().map_err(|e| bad(format!("{e}")))?,
                "j_max" => cfg.j_max = value.parse().map_err(|e| bad(format!("{e}")))?,
                "k_max" => cfg.k_max = value.parse().map_err(|e| bad(format!("{e}")))?,
                "z_max" => cfg.z_max = value.parse().map_err(|e| bad(format!("{e}")))?,
                "n_max" => cfg.n_max = value.parse().map_err(|e| bad(format!("{e}")))?,
                "series_len" => cfg.series_len = value.parse().map_err(|e| bad(format!("{e}")))?,
                "quad_tol" => cfg.quad_tol = value.parse().map_err(|e| bad(format!("{e}")))?,
                "seed" => cfg.seed = value.parse().map_err(|e| bad(format!("{e}")))?,
                "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
                "format" => {
                    cfg.emit_json = false;
                    cfg.emit_csv = false;
                    for f in value.split(',') {
                        match f.trim() {
                            "json" => cfg.emit_json = true,
                            "csv" => cfg.emit_csv = true,
                            other => return Err(bad(format!("unknown format `{other}`"))),
                        }
                    }
                }
                _ => return Err(ConfigError::UnknownKey { line, key: key.to_string() }),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(10..=200).contains(&self.precision) {
            return Err(ConfigError::OutOfRange {
                key: "precision",
                value: self.precision.to_string(),
                range: "10..=200 decimal digits",
            });
        }
        for (key, v, hi) in [
            ("j_max", self.j_max, 64usize),
            ("k_max", self.k_max, 64),
            ("n_max", self.n_max, 64),
            ("series_len", self.series_len, 200),
        ] {
            if v == 0 || v > hi {
                return Err(ConfigError::OutOfRange {
                    key: match key {
                        "j_max" => "j_max",
                        "k_max" => "k_max",
                        "n_max" => "n_max",
                        _ => "series_len",
                    },
                    value: v.to_string(),
                    range: "1..=64 (series_len 1..=200)",
                });
            }
        }
        if !(1..=64).contains(&self.z_max) {
            return Err(ConfigError::OutOfRange {
                key: "z_max",
                value: self.z_max.to_string(),
                range: "1..=64",
            });
        }
        if !(1e-14..=1e-4).contains(&self.quad_tol) {
            return Err(ConfigError::OutOfRange {
                key: "quad_tol",
                value: format!("{:e}", self.quad_tol),
                range: "1e-14..=1e-4",
            });
        }
        Ok(())
    }

    /// Echo of the effective configuration, embedded in manifests.
    pub fn echo(&self) -> Value {
        json!({
            "precision": self.precision,
            "j_max": self.j_max,
            "k_max": self.k_max,
            "z_max": self.z_max,
            "n_max": self.n_max,
            "series_len": self.series_len,
            "quad_tol": self.quad_tol,
            "seed": self.seed,
            "format": {
                "json": self.emit_json,
                "csv": self.emit_csv,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!(
            "ruelle-config-{}-{}.conf",
            std::process::id(),
            content.len()
        ));
        let mut f = fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn parses_and_overrides_defaults() {
        let path = write_temp("# comment\nprecision = 60\nj_max = 5\nformat = json,csv\n");
        let cfg = RunConfig::from_file(&path).unwrap();
        assert_eq!(cfg.precision, 60);
        assert_eq!(cfg.j_max, 5);
        assert!(cfg.emit_json && cfg.emit_csv);
        assert_eq!(cfg.k_max, 3); // untouched default
        fs::remove_file(path).ok();
    }

    #[test]
    fn unknown_keys_rejected() {
        let path = write_temp("presicion = 60\n");
        match RunConfig::from_file(&path) {
            Err(ConfigError::UnknownKey { key, .. }) => assert_eq!(key, "presicion"),
            other => panic!("expected UnknownKey, got {other:?}"),
        }
        fs::remove_file(path).ok();
    }

    #[test]
    fn out_of_range_rejected() {
        let path = write_temp("precision = 5\n");
        assert!(matches!(
            RunConfig::from_file(&path),
            Err(ConfigError::OutOfRange { key: "precision", .. })
        ));
        fs::remove_file(path).ok();
    }
}
