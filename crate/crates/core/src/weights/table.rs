use std::path::Path;
use std::sync::Arc;

use super::family::Family;
use super::{WeightError, WeightSpec};

/// User-supplied `ln w(n)` for `n = 1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable {
    pub ln_values: Vec<f64>,
}

impl CustomTable {
    /// Past the last row the final value is held constant.
    pub fn ln_w(&self, n: u64) -> f64 {
        let i = (n.max(1) - 1) as usize;
        self.ln_values[i.min(self.ln_values.len() - 1)]
    }

    pub fn len(&self) -> usize {
        self.ln_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ln_values.is_empty()
    }
}

fn table_err(line: usize, message: impl Into<String>) -> WeightError {
    WeightError::Table {
        line,
        message: message.into(),
    }
}

/// Parse a two-column `n ln_w` table. Blank lines and `#` comments are skipped.
pub fn parse_custom_table(id: &str, text: &str) -> Result<WeightSpec, WeightError> {
    let mut ln_values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut cols = body.split_whitespace();
        let (Some(n), Some(v), None) = (cols.next(), cols.next(), cols.next()) else {
            return Err(table_err(line, "expected two columns `n ln_w`"));
        };
        let n: u64 = n
            .parse()
            .map_err(|_| table_err(line, format!("bad index `{n}`")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| table_err(line, format!("bad value `{v}`")))?;
        let expected = ln_values.len() as u64 + 1;
        if n != expected {
            return Err(table_err(
                line,
                format!("index {n} out of sequence, expected {expected}"),
            ));
        }
        if !v.is_finite() {
            return Err(table_err(line, "ln_w must be finite"));
        }
        ln_values.push(v);
    }
    if ln_values.is_empty() {
        return Err(table_err(0, "empty table"));
    }
    let len = ln_values.len() as u64;
    let mut spec = WeightSpec::bare(id, Family::Custom(Arc::new(CustomTable { ln_values })));
    spec.defined_up_to = Some(len);
    Ok(spec)
}

pub fn load_custom_table(path: &Path) -> Result<WeightSpec, WeightError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| table_err(0, format!("{}: {e}", path.display())))?;
    parse_custom_table(&format!("file:{}", path.display()), &text)
}
