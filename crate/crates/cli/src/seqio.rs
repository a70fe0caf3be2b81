//! Sequence I/O: CSV (`n,re,im`), the OSCS1 binary format (magic bytes then
//! little-endian f64 pairs), and generator-spec JSON.

use num_complex::Complex64;

use oscillab_core::sequences::{GeneratorSpec, WeightSequence};
use oscillab_core::{Error, Result};

const MAGIC: &[u8; 5] = b"OSCS1";

/// Resolves `--seq`: a `.json` generator spec (file or inline JSON object),
/// a `.csv` data file, or a `.bin` OSCS1 file.
pub fn load_sequence(source: &str) -> Result<WeightSequence> {
    let trimmed = source.trim_start();
    if trimmed.starts_with('{') {
        let spec: GeneratorSpec = serde_json::from_str(trimmed)
            .map_err(|e| Error::BadInput(format!("bad inline generator spec: {e}")))?;
        return spec.build();
    }
    if source.ends_with(".json") {
        let text = std::fs::read_to_string(source)
            .map_err(|e| Error::BadInput(format!("cannot read {source}: {e}")))?;
        let spec: GeneratorSpec = serde_json::from_str(&text)
            .map_err(|e| Error::BadInput(format!("bad generator spec in {source}: {e}")))?;
        return spec.build();
    }
    if source.ends_with(".bin") {
        return read_binary(source);
    }
    if source.ends_with(".csv") {
        return read_csv(source);
    }
    Err(Error::BadInput(format!(
        "sequence source {source:?} must be inline JSON or a .json/.csv/.bin file"
    )))
}

pub fn write_csv(seq: &WeightSequence, path: &str) -> Result<()> {
    let mut out = String::with_capacity(seq.len() * 24 + 16);
    out.push_str("n,re,im\n");
    for (n, v) in seq.values().iter().enumerate() {
        out.push_str(&format!("{n},{},{}\n", v.re, v.im));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_csv(path: &str) -> Result<WeightSequence> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))?;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if lineno == 0 && line.starts_with('n') {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split(',');
        let _n = parts.next();
        let re: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::BadInput(format!("{path}:{}: bad re field", lineno + 1)))?;
        let im: f64 = parts
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::BadInput(format!("{path}:{}: bad im field", lineno + 1)))?;
        values.push(Complex64::new(re, im));
    }
    if values.is_empty() {
        return Err(Error::BadInput(format!("{path} holds no samples")));
    }
    wrap_external(values, path)
}

pub fn write_binary(seq: &WeightSequence, path: &str) -> Result<()> {
    let mut bytes = Vec::with_capacity(5 + seq.len() * 16);
    bytes.extend_from_slice(MAGIC);
    for v in seq.values() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    Ok(())
}

pub fn read_binary(path: &str) -> Result<WeightSequence> {
    let bytes = std::fs::read(path).map_err(|e| Error::BadInput(format!("cannot read {path}: {e}")))?;
    if bytes.len() < 5 || &bytes[..5] != MAGIC {
        return Err(Error::BadInput(format!("{path} is not an OSCS1 file")));
    }
    let payload = &bytes[5..];
    if payload.len() % 16 != 0 {
        return Err(Error::BadInput(format!(
            "{path}: truncated OSCS1 payload ({} bytes)",
            payload.len()
        )));
    }
    let values: Vec<Complex64> = payload
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    if values.is_empty() {
        return Err(Error::BadInput(format!("{path} holds no samples")));
    }
    wrap_external(values, path)
}

fn wrap_external(values: Vec<Complex64>, path: &str) -> Result<WeightSequence> {
    let bound = values.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1.0);
    Ok(WeightSequence::from_values(
        values,
        GeneratorSpec::External {
            descriptor: path.to_string(),
        },
        bound,
    ))
}
