//! Two-column text tables (`index value`, `#` comments) and the fixed
//! 17-significant-digit number format used by every emitted file.

use std::path::Path;

use crate::error::{Error, Result};

/// Parse `index value` rows. Blank lines and anything after `#` are ignored.
/// Indices must be strictly increasing.
pub fn parse_two_column(text: &str) -> Result<Vec<(u64, f64)>> {
    let mut rows: Vec<(u64, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split_whitespace();
        let (Some(idx), Some(val), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected two columns, got {line:?}"),
            });
        };
        let idx: u64 = idx.parse().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("bad index {idx:?}: {e}"),
        })?;
        let val: f64 = val.parse().map_err(|e| Error::Parse {
            line: i + 1,
            message: format!("bad value {val:?}: {e}"),
        })?;
        if !val.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: "value is not finite".into(),
            });
        }
        if let Some(&(prev, _)) = rows.last() {
            if idx <= prev {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("index {idx} does not increase"),
                });
            }
        }
        rows.push((idx, val));
    }
    Ok(rows)
}

pub fn read_two_column(path: &Path) -> Result<Vec<(u64, f64)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_two_column(&text)
}

/// 17 significant digits in scientific notation; round-trips every `f64`.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
