//! Semiconductor sample files: JSON objects or `key = value` lines.

use crate::UsageError;
use nonasym::semiconductor::SemiconductorSample;
use serde_json::{Map, Value};
use std::path::Path;

const FLAG: &str = "--config";

/// Values used for any field a config or flag leaves unset.
pub fn default_sample() -> SemiconductorSample {
    SemiconductorSample { t: 78.0, n: 1e16, k: 0.15, eps: 10.0, m_eff_ratio: 0.2, z1: 1, z2: 1 }
}

pub const SAMPLE_KEYS: [&str; 7] = ["T", "n", "K", "eps", "m_eff_ratio", "Z1", "Z2"];

/// Sets one named field. `flag` is what diagnostics name.
pub fn set_field(s: &mut SemiconductorSample, key: &str, value: f64, flag: &str) -> Result<(), UsageError> {
    let charge = |v: f64| -> Result<u32, UsageError> {
        if v.fract() != 0.0 || !(1.0..=100.0).contains(&v) {
            return Err(UsageError::new(flag, format!("{key} must be a positive integer charge, got {v}")));
        }
        Ok(v as u32)
    };
    match key {
        "T" => s.t = value,
        "n" => s.n = value,
        "K" => s.k = value,
        "eps" => s.eps = value,
        "m_eff_ratio" => s.m_eff_ratio = value,
        "Z1" => s.z1 = charge(value)?,
        "Z2" => s.z2 = charge(value)?,
        _ => {
            return Err(UsageError::new(
                flag,
                format!("unknown sample key '{key}' (expected one of {})", SAMPLE_KEYS.join(", ")),
            ))
        }
    }
    Ok(())
}

fn parse_json(text: &str, base: &mut SemiconductorSample) -> Result<Vec<String>, UsageError> {
    let v: Value = serde_json::from_str(text).map_err(|e| UsageError::new(FLAG, format!("invalid JSON: {e}")))?;
    let obj: Map<String, Value> = match v {
        Value::Object(m) => m,
        _ => return Err(UsageError::new(FLAG, "expected a JSON object of sample fields")),
    };
    let mut keys = Vec::new();
    for (k, v) in obj {
        let x = v.as_f64().ok_or_else(|| UsageError::new(FLAG, format!("value of '{k}' must be a number")))?;
        set_field(base, &k, x, FLAG)?;
        keys.push(k);
    }
    Ok(keys)
}

fn parse_key_value(text: &str, base: &mut SemiconductorSample) -> Result<Vec<String>, UsageError> {
    let mut keys: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError::new(FLAG, format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if !SAMPLE_KEYS.contains(&k) {
            return Err(UsageError::new(
                FLAG,
                format!("line {}: unknown sample key '{k}' (expected one of {})", i + 1, SAMPLE_KEYS.join(", ")),
            ));
        }
        if keys.iter().any(|seen| seen == k) {
            return Err(UsageError::new(FLAG, format!("line {}: '{k}' given twice", i + 1)));
        }
        let x: f64 = v.parse().map_err(|_| UsageError::new(FLAG, format!("line {}: '{v}' is not a number", i + 1)))?;
        set_field(base, k, x, FLAG)?;
        keys.push(k.to_string());
    }
    Ok(keys)
}

/// Reads a sample over the defaults. Returns the sample and the keys the
/// file set.
pub fn load_sample(path: &Path) -> Result<(SemiconductorSample, Vec<String>), UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError::new(FLAG, format!("cannot read {}: {e}", path.display())))?;
    parse_sample(&text)
}

pub fn parse_sample(text: &str) -> Result<(SemiconductorSample, Vec<String>), UsageError> {
    let mut s = default_sample();
    let keys =
        if text.trim_start().starts_with('{') { parse_json(text, &mut s)? } else { parse_key_value(text, &mut s)? };
    Ok((s, keys))
}
