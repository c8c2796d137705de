//! `key=value` budget overrides with per-command validation.

use std::collections::BTreeMap;

use anyhow::{bail, Result};

pub struct Budget {
    values: BTreeMap<String, f64>,
}

#[derive(Clone, Copy)]
pub enum Kind {
    Count,
    Positive,
}

impl Budget {
    /// Merges file-level entries with command-line `key=value` overrides.
    /// File keys outside `allowed` belong to other commands and are dropped;
    /// command-line keys outside `allowed` are errors.
    pub fn new(file: &BTreeMap<String, f64>, args: &[String], allowed: &[(&str, Kind)]) -> Result<Self> {
        let mut values: BTreeMap<String, f64> = file
            .iter()
            .filter(|(k, _)| allowed.iter().any(|(name, _)| name == k))
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        for a in args {
            for kv in a.split_whitespace() {
                let Some((k, v)) = kv.split_once('=') else {
                    bail!("budget entry '{kv}' is not key=value");
                };
                let v: f64 = v
                    .parse()
                    .map_err(|_| anyhow::anyhow!("budget value '{v}' for '{k}' is not a number"))?;
                values.insert(k.to_string(), v);
            }
        }
        for (k, v) in &values {
            let Some((_, kind)) = allowed.iter().find(|(name, _)| name == k) else {
                let names: Vec<&str> = allowed.iter().map(|(n, _)| *n).collect();
                if names.is_empty() {
                    bail!("this command takes no budget (got '{k}')");
                }
                bail!("unknown budget key '{k}' (accepted: {})", names.join(", "));
            };
            let ok = match kind {
                Kind::Count => *v >= 1.0 && v.fract() == 0.0 && *v <= u32::MAX as f64,
                Kind::Positive => v.is_finite() && *v > 0.0,
            };
            if !ok {
                bail!("budget '{k}' must be a positive {}", match kind {
                    Kind::Count => "integer",
                    Kind::Positive => "number",
                });
            }
        }
        Ok(Budget { values })
    }

    pub fn count(&self, key: &str, default: usize) -> usize {
        self.values.get(key).map_or(default, |v| *v as usize)
    }

    pub fn real(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    pub fn opt_real(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}
