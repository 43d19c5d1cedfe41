//! Flag parsing and deterministic output helpers shared by the subcommands.

use bouquet_core::partitions::{Partition, Signature};
use bouquet_core::scalar::{format_rat, parse_gauss, parse_rat, GaussRat, Rat};
use bouquet_core::symfunc::ThomaConePoint;
use serde::Serialize;

/// Decimals are printed with 17 significant digits so reruns are
/// byte-identical and round-trip through f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON scalar: exact `p/q` when the computation was exact, decimal text
/// otherwise.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum NumOut {
    Exact(String),
    Real(String),
}

impl NumOut {
    pub fn exact(r: &Rat) -> Self {
        NumOut::Exact(format_rat(r))
    }

    pub fn real(x: f64) -> Self {
        NumOut::Real(fmt_f64(x))
    }
}

/// `2,1` -> diagram; empty string, `0` and `-` denote the empty diagram.
pub fn parse_partition(s: &str) -> Result<Partition, String> {
    let s = s.trim();
    if s.is_empty() || s == "0" || s == "-" {
        return Ok(Partition::empty());
    }
    let parts: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
    let parts = parts.map_err(|e| format!("bad partition {s:?}: {e}"))?;
    Partition::new(parts).map_err(|e| e.to_string())
}

/// `3,1,-2` -> signature (level = number of coordinates).
pub fn parse_signature(s: &str) -> Result<Signature, String> {
    let coords: Result<Vec<i64>, _> = s.split(',').map(|t| t.trim().parse::<i64>()).collect();
    let coords = coords.map_err(|e| format!("bad signature {s:?}: {e}"))?;
    Signature::new(coords).map_err(|e| e.to_string())
}

pub fn parse_rat_flag(s: &str) -> Result<Rat, String> {
    parse_rat(s)
}

pub fn parse_gauss_flag(s: &str) -> Result<GaussRat, String> {
    parse_gauss(s)
}

/// Comma-separated list of positive integers.
pub fn parse_grid(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|e| format!("bad grid entry: {e}")))
        .collect()
}

/// Comma-separated list of rationals (used for epsilon grids).
pub fn parse_rat_grid(s: &str) -> Result<Vec<Rat>, String> {
    s.split(',').map(|t| parse_rat(t.trim())).collect()
}

/// Thoma cone point from JSON
/// `{"alpha": [...], "beta": [...], "delta": ...}`; entries are `p/q`
/// strings or JSON numbers (numbers convert through their exact binary
/// value).
pub fn parse_point(s: &str) -> Result<ThomaConePoint<Rat>, String> {
    let v: serde_json::Value =
        serde_json::from_str(s).map_err(|e| format!("bad point JSON: {e}"))?;
    let obj = v.as_object().ok_or("point must be a JSON object")?;
    let seq = |key: &str| -> Result<Vec<Rat>, String> {
        match obj.get(key) {
            None => Ok(Vec::new()),
            Some(serde_json::Value::Array(items)) => {
                items.iter().map(json_scalar_to_rat).collect()
            }
            Some(_) => Err(format!("{key} must be an array")),
        }
    };
    let alpha = seq("alpha")?;
    let beta = seq("beta")?;
    let delta = obj
        .get("delta")
        .map(json_scalar_to_rat)
        .transpose()?
        .unwrap_or_else(|| Rat::from_integer(0.into()));
    ThomaConePoint::new(alpha, beta, delta).map_err(|e| e.to_string())
}

fn json_scalar_to_rat(v: &serde_json::Value) -> Result<Rat, String> {
    match v {
        serde_json::Value::String(s) => parse_rat(s),
        serde_json::Value::Number(n) => {
            let f = n.as_f64().ok_or("non-finite number")?;
            Rat::from_float(f).ok_or_else(|| format!("non-finite number {f}"))
        }
        _ => Err(format!("expected a scalar, got {v}")),
    }
}

/// FNV-1a over the canonical parameter string, for stable CSV file names.
pub fn params_hash(s: &str) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
