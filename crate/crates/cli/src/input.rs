//! Loading regions and point sets from presets or JSON files.

use std::path::Path;

use cvtq_core::dquant::{self, POINTS_FORMAT};
use cvtq_core::region::{self, REGION_FORMAT};
use cvtq_core::{DiscreteUniform, Point, Quantizer, Region};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub enum Input {
    Region(Region),
    Points(DiscreteUniform),
}

/// A loaded input plus the bytes that identify it for the report digest.
pub struct Loaded {
    pub input: Input,
    pub identity: Vec<u8>,
}

#[derive(Deserialize)]
struct Header {
    format: String,
}

/// Resolve `arg` as a preset name first, then as a file path.
pub fn load(arg: &str) -> Result<Loaded> {
    if let Some(r) = region::preset(arg) {
        return Ok(Loaded { input: Input::Region(r), identity: format!("preset:{arg}").into_bytes() });
    }
    if let Some(d) = dquant::preset(arg) {
        return Ok(Loaded { input: Input::Points(d), identity: format!("preset:{arg}").into_bytes() });
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let wrap = |source: cvtq_core::Error| CliError::Input { origin: arg.to_string(), source };
    let header: Header = serde_json::from_str(&text).map_err(|e| wrap(e.into()))?;
    let input = match header.format.as_str() {
        REGION_FORMAT => Input::Region(Region::from_json(&text).map_err(wrap)?),
        POINTS_FORMAT => Input::Points(DiscreteUniform::from_json(&text).map_err(wrap)?),
        other => {
            return Err(wrap(cvtq_core::Error::InvalidInput(format!(
                "unknown format {other:?}; expected {REGION_FORMAT:?} or {POINTS_FORMAT:?}"
            ))))
        }
    };
    Ok(Loaded { input, identity: text.into_bytes() })
}

/// Parse `"x,y;x,y;..."`.
pub fn parse_centers(text: &str) -> Result<Quantizer> {
    let mut pts = Vec::new();
    for (k, pair) in text.split(';').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let coords: Vec<&str> = pair.split(',').map(str::trim).collect();
        let [x, y] = coords[..] else {
            return Err(CliError::Centers(format!("center {} is {pair:?}, expected \"x,y\"", k + 1)));
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Centers(format!("{s:?} is not a finite decimal number")))
        };
        pts.push(Point::new(num(x)?, num(y)?));
    }
    if pts.is_empty() {
        return Err(CliError::Centers("no centers given".into()));
    }
    Quantizer::new(pts).map_err(|e| CliError::Centers(e.to_string()))
}

/// SHA-256 over length-prefixed parts, hex encoded.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
