//! Deterministic report and artifact emission: versioned JSON schemas,
//! CSV export, and a checksum manifest per run.
//!
//! Extended-precision values are emitted as decimal strings, never binary
//! floats, so outputs round-trip exactly and identical configurations yield
//! byte-identical files.

use crate::fit::{FitReport, MatchReport};
use crate::resonance::{
    HeisenbergPhases, KzExponents, LaplaceSpectrum, Multiplicity, ResonanceSet, ValueKind,
};
use crate::spectral::{IntMatrix, SpectrumData};
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

pub const SCHEMA_MATRIX: &str = "ruelle/matrix/v1";
pub const SCHEMA_SPECTRUM: &str = "ruelle/spectrum/v1";
pub const SCHEMA_RESONANCES: &str = "ruelle/resonances/v1";
pub const SCHEMA_LAPLACE: &str = "ruelle/laplace/v1";
pub const SCHEMA_KZ: &str = "ruelle/kz/v1";
pub const SCHEMA_PHASES: &str = "ruelle/phases/v1";
pub const SCHEMA_FIT: &str = "ruelle/fit/v1";
pub const SCHEMA_VERIFY: &str = "ruelle/verify/v1";
pub const SCHEMA_MANIFEST: &str = "ruelle/manifest/v1";

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("io error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("malformed {what}: {detail}")]
    Malformed { what: &'static str, detail: String },
}

fn read_json(path: &Path, what: &'static str) -> Result<Value, ReportError> {
    let text = fs::read_to_string(path)
        .map_err(|source| ReportError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text)
        .map_err(|e| ReportError::Malformed { what, detail: e.to_string() })
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

/// Matrix input: {"dim": 2g, "entries": [[...], ...]}; the schema field is
/// optional on inputs.
pub fn matrix_from_json(text: &str) -> Result<IntMatrix, ReportError> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| ReportError::Malformed { what: "matrix", detail: e.to_string() })?;
    matrix_from_value(&v)
}

pub fn matrix_from_value(v: &Value) -> Result<IntMatrix, ReportError> {
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| ReportError::Malformed { what: "matrix", detail: "missing entries".into() })?;
    let rows: Result<Vec<Vec<i64>>, ReportError> = entries
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| ReportError::Malformed {
                    what: "matrix",
                    detail: "entries rows must be arrays".into(),
                })?
                .iter()
                .map(|x| {
                    x.as_i64().ok_or_else(|| ReportError::Malformed {
                        what: "matrix",
                        detail: format!("non-integer entry {x}"),
                    })
                })
                .collect()
        })
        .collect();
    let rows = rows?;
    if let Some(dim) = v.get("dim").and_then(|d| d.as_u64()) {
        if dim as usize != rows.len() {
            return Err(ReportError::Malformed {
                what: "matrix",
                detail: format!("dim {} does not match {} rows", dim, rows.len()),
            });
        }
    }
    IntMatrix::new(rows)
        .map_err(|e| ReportError::Malformed { what: "matrix", detail: e.to_string() })
}

pub fn matrix_file(path: &Path) -> Result<IntMatrix, ReportError> {
    matrix_from_value(&read_json(path, "matrix")?)
}

pub fn laplace_file(path: &Path) -> Result<LaplaceSpectrum, ReportError> {
    let v = read_json(path, "laplace spectrum")?;
    let entries = v
        .get("entries")
        .and_then(|e| e.as_array())
        .ok_or_else(|| ReportError::Malformed {
            what: "laplace spectrum",
            detail: "missing entries".into(),
        })?;
    let pairs: Result<Vec<(f64, usize)>, ReportError> = entries
        .iter()
        .map(|e| {
            let mu = e.get("mu").and_then(|x| x.as_f64()).ok_or_else(|| ReportError::Malformed {
                what: "laplace spectrum",
                detail: "entry missing mu".into(),
            })?;
            let mult = e.get("multiplicity").and_then(|x| x.as_u64()).unwrap_or(1) as usize;
            Ok((mu, mult))
        })
        .collect();
    LaplaceSpectrum::new(pairs?)
        .map_err(|e| ReportError::Malformed { what: "laplace spectrum", detail: e.to_string() })
}

pub fn kz_file(path: &Path) -> Result<KzExponents, ReportError> {
    let v = read_json(path, "kz exponents")?;
    let genus = v
        .get("genus")
        .and_then(|g| g.as_u64())
        .ok_or_else(|| ReportError::Malformed { what: "kz exponents", detail: "missing genus".into() })?
        as usize;
    let exponents: Vec<f64> = v
        .get("exponents")
        .and_then(|e| e.as_array())
        .map(|a| a.iter().filter_map(|x| x.as_f64()).collect())
        .unwrap_or_default();
    let hyperbolic = v.get("hyperbolic").and_then(|h| h.as_bool()).unwrap_or(true);
    KzExponents::new(genus, exponents, hyperbolic)
        .map_err(|e| ReportError::Malformed { what: "kz exponents", detail: e.to_string() })
}

pub fn phases_file(path: &Path) -> Result<HeisenbergPhases, ReportError> {
    let v = read_json(path, "heisenberg phases")?;
    let list = v
        .get("phases")
        .and_then(|p| p.as_array())
        .ok_or_else(|| ReportError::Malformed {
            what: "heisenberg phases",
            detail: "missing phases".into(),
        })?;
    let mut out = HeisenbergPhases::default();
    for item in list {
        let z = item.get("z").and_then(|z| z.as_i64()).ok_or_else(|| ReportError::Malformed {
            what: "heisenberg phases",
            detail: "entry missing z".into(),
        })?;
        let us = item
            .get("u")
            .and_then(|u| u.as_array())
            .ok_or_else(|| ReportError::Malformed {
                what: "heisenberg phases",
                detail: "entry missing u".into(),
            })?
            .iter()
            .map(|c| {
                Complex64::new(
                    c.get("re").and_then(|x| x.as_f64()).unwrap_or(0.0),
                    c.get("im").and_then(|x| x.as_f64()).unwrap_or(0.0),
                )
            })
            .collect();
        out.by_z.insert(z, us);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Outputs
// ---------------------------------------------------------------------------

pub fn spectrum_to_json(s: &SpectrumData) -> Value {
    json!({
        "schema": SCHEMA_SPECTRUM,
        "genus": s.genus,
        "precision": s.precision,
        "lambda": s.lambda.to_string(),
        "mu": s.mu.iter().map(|z| json!({
            "re": z.re.to_string(),
            "im": z.im.to_string(),
        })).collect::<Vec<_>>(),
        "pairing": s.pairing,
    })
}

pub fn resonance_set_to_json(set: &ResonanceSet) -> Value {
    let entries: Vec<Value> = set
        .entries
        .iter()
        .map(|e| {
            json!({
                "value_re": e.value.re.to_string(),
                "value_im": e.value.im.to_string(),
                "modulus": e.value.modulus().to_string(),
                "multiplicity": match &e.multiplicity {
                    Multiplicity::Finite(m) => json!(m),
                    Multiplicity::Infinite => json!("infinite"),
                },
                "jordan": e.jordan_blocks,
                "provenance": e.provenance.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "phase_unknown": e.phase_unknown,
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_RESONANCES,
        "system": set.system,
        "kind": match set.kind { ValueKind::MapEigenvalue => "map", ValueKind::FlowRate => "flow" },
        "truncation": serde_json::to_value(&set.truncation).unwrap_or(Value::Null),
        "precision": set.precision,
        "merged": set.merged,
        "entries": entries,
    })
}

/// One row per entry: value_re, value_im, modulus, multiplicity, jordan,
/// provenance, phase_unknown.
pub fn resonance_set_to_csv(set: &ResonanceSet) -> String {
    let mut out = String::from("value_re,value_im,modulus,multiplicity,jordan,provenance,phase_unknown\n");
    for e in &set.entries {
        let jordan = e
            .jordan_blocks
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join("|");
        let prov = e.provenance.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("|");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.value.re,
            e.value.im,
            e.value.modulus(),
            e.multiplicity,
            jordan,
            prov,
            e.phase_unknown
        ));
    }
    out
}

pub fn fit_to_json(fit: &FitReport, matching: Option<&MatchReport>) -> Value {
    let mut v = json!({
        "schema": SCHEMA_FIT,
        "window": { "lo": fit.window.0, "hi": fit.window.1 },
        "final_residual": fit.final_residual,
        "terms": serde_json::to_value(&fit.terms).unwrap_or(Value::Null),
    });
    if let Some(m) = matching {
        v.as_object_mut()
            .unwrap()
            .insert("matching".into(), serde_json::to_value(m).unwrap_or(Value::Null));
    }
    v
}

/// Render with sorted keys and a trailing newline; stable across runs.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialization");
    s.push('\n');
    s
}

pub fn sha256_hex(data: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(data);
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Write the named artifacts into `dir` and a manifest recording the
/// generating command, configuration echo, schema versions and per-file
/// checksums. Returns the manifest path.
pub fn emit_with_manifest(
    dir: &Path,
    command: &str,
    config_echo: Value,
    files: &[(String, String)],
) -> Result<PathBuf, ReportError> {
    fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_path_buf(), source })?;
    let mut outputs = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        fs::write(&path, content)
            .map_err(|source| ReportError::Io { path: path.clone(), source })?;
        outputs.push(json!({ "file": name, "sha256": sha256_hex(content.as_bytes()) }));
    }
    let manifest = json!({
        "schema": SCHEMA_MANIFEST,
        "command": command,
        "config": config_echo,
        "crate_version": env!("CARGO_PKG_VERSION"),
        "outputs": outputs,
    });
    let manifest_path = dir.join("manifest.json");
    fs::write(&manifest_path, to_canonical_string(&manifest))
        .map_err(|source| ReportError::Io { path: manifest_path.clone(), source })?;
    Ok(manifest_path)
}

/// Build a JSON object with alphabetically sorted keys (serde_json maps are
/// BTree-backed, so this is stable by construction).
pub fn sorted_object(pairs: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in pairs {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resonance::{pa_resonances, DistributionOrder};
    use crate::spectral::spectrum;

    #[test]
    fn matrix_roundtrip() {
        let text = r#"{"dim": 2, "entries": [[2, 1], [1, 1]]}"#;
        let m = matrix_from_json(text).unwrap();
        assert_eq!(m.dim, 2);
        assert_eq!(m.entries[0], vec![2, 1]);
        // schema field optional, dimension mismatch rejected
        assert!(matrix_from_json(r#"{"dim": 4, "entries": [[2, 1], [1, 1]]}"#).is_err());
    }

    #[test]
    fn spectrum_json_uses_decimal_strings() {
        let m = IntMatrix::new(vec![vec![2, 1], vec![1, 1]]).unwrap();
        let s = spectrum(&m, 50).unwrap();
        let v = spectrum_to_json(&s);
        let lambda = v["lambda"].as_str().unwrap();
        assert!(lambda.starts_with("2.6180339887498948482045868343656381177203"));
        // round-trip through the string stays exact
        let back = crate::precision::PrecFloat::parse(lambda, 50).unwrap();
        assert_eq!(back, s.lambda);
    }

    #[test]
    fn resonance_json_and_csv_are_deterministic() {
        let m = IntMatrix::new(vec![
            vec![3, 0, 2, 0],
            vec![0, 2, 0, 1],
            vec![1, 0, 1, 0],
            vec![0, 1, 0, 1],
        ])
        .unwrap();
        let s = spectrum(&m, 50).unwrap();
        let set = pa_resonances(&s, 3);
        let a = to_canonical_string(&resonance_set_to_json(&set));
        let b = to_canonical_string(&resonance_set_to_json(&pa_resonances(&s, 3)));
        assert_eq!(a, b);
        let csv = resonance_set_to_csv(&set);
        assert_eq!(csv.lines().count(), set.entries.len() + 1);
        let _ =
            crate::resonance::invariant_distribution_spectrum(&s, DistributionOrder::Finite(2));
    }

    #[test]
    fn manifest_checksums_match() {
        let dir = std::env::temp_dir().join(format!("ruelle-report-test-{}", std::process::id()));
        let files = vec![
            ("a.json".to_string(), "{\"x\": 1}\n".to_string()),
            ("b.csv".to_string(), "n,v\n0,1\n".to_string()),
        ];
        let path = emit_with_manifest(&dir, "test", json!({"seed": 0}), &files).unwrap();
        let manifest: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        for out in manifest["outputs"].as_array().unwrap() {
            let file = out["file"].as_str().unwrap();
            let content = fs::read(dir.join(file)).unwrap();
            assert_eq!(out["sha256"].as_str().unwrap(), sha256_hex(&content));
        }
        fs::remove_dir_all(&dir).ok();
    }
}
