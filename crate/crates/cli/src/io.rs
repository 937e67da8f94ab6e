//! Value files: raw little-endian doubles, or text with one value per line.

use crate::error::CliError;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Bin,
    Text,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "bin" => Ok(Format::Bin),
            "text" => Ok(Format::Text),
            _ => Err(CliError::InvalidArgument(format!("unknown format {s:?}"))),
        }
    }
}

pub fn read_values(path: &Path, format: Format) -> Result<Vec<f64>, CliError> {
    match format {
        Format::Bin => {
            let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
            decode_bin(&bytes).ok_or(CliError::SizeMismatch {
                path: path.to_owned(),
                len: bytes.len(),
            })
        }
        Format::Text => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_text(&text).map_err(|(line, text)| CliError::Parse {
                path: path.to_owned(),
                line,
                text,
            })
        }
    }
}

pub fn decode_bin(bytes: &[u8]) -> Option<Vec<f64>> {
    if !bytes.len().is_multiple_of(8) {
        return None;
    }
    Some(
        bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect(),
    )
}

pub fn encode_bin(values: &[f64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Blank lines and `#` comments are skipped. On failure returns the 1-based
/// line number and the offending text.
pub fn parse_text(text: &str) -> Result<Vec<f64>, (usize, String)> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let item = line.split('#').next().unwrap_or("").trim();
        if item.is_empty() {
            continue;
        }
        values.push(parse_value(item).ok_or_else(|| (i + 1, item.to_owned()))?);
    }
    Ok(values)
}

/// A decimal literal, or `0x` followed by exactly 16 hex digits of bit pattern.
pub fn parse_value(s: &str) -> Option<f64> {
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        if hex.len() != 16 {
            return None;
        }
        return u64::from_str_radix(hex, 16).ok().map(f64::from_bits);
    }
    s.parse().ok()
}

/// Text output: shortest round-trip decimal for finite values, bit patterns
/// for the rest so NaN payloads survive.
pub fn encode_text(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 24);
    for v in values {
        if v.is_finite() {
            out.push_str(&format!("{v:?}\n"));
        } else {
            out.push_str(&format!("0x{:016X}\n", v.to_bits()));
        }
    }
    out
}

pub fn write_values(out: &mut dyn Write, values: &[f64], format: Format) -> std::io::Result<()> {
    match format {
        Format::Bin => out.write_all(&encode_bin(values)),
        Format::Text => out.write_all(encode_text(values).as_bytes()),
    }
}

/// `1.0 0x3FF0000000000000`; NaN shows its payload as `nan(0x…)`.
pub fn format_result(v: f64) -> String {
    let bits = v.to_bits();
    let shown = if v.is_nan() {
        let sign = if v.is_sign_negative() { "-" } else { "" };
        format!("{sign}nan(0x{:X})", bits & exactsum::fpbits::MANTISSA_MASK)
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{v:?}")
    };
    format!("{shown} 0x{bits:016X}")
}
