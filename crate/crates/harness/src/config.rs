//! Flat `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Grids are comma-separated
//! lists or geometric ranges `a..bXr` (`64..1024x2` is 64, 128, …, 1024).
//! Gap lists accept a trailing `/n` to scale a value with the matrix order.

use crate::HarnessError;
use fht_core::symbol::literal::parse_real;
use std::collections::BTreeMap;

fn cfg_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

/// Keys accepted by every experiment.
pub const COMMON_KEYS: &[&str] = &["experiment", "seed", "out", "workers", "format"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| cfg_err(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(cfg_err(format!("bad key `{key}`")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies a `KEY=VALUE` override.
    pub fn apply_override(&mut self, kv: &str) -> Result<(), HarnessError> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| cfg_err(format!("override `{kv}` is not KEY=VALUE")))?;
        self.set(k.trim(), v.trim())
    }

    /// Rejects keys outside `COMMON_KEYS` and `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), HarnessError> {
        for k in self.values.keys() {
            if !COMMON_KEYS.contains(&k.as_str()) && !allowed.contains(&k.as_str()) {
                return Err(cfg_err(format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.get(key).unwrap_or(default)
    }

    pub fn real_or(&self, key: &str, default: f64) -> Result<f64, HarnessError> {
        match self.get(key) {
            Some(v) => parse_real(v).map_err(|e| cfg_err(format!("{key}: {e}"))),
            None => Ok(default),
        }
    }

    pub fn uint_or(&self, key: &str, default: u64) -> Result<u64, HarnessError> {
        match self.get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| cfg_err(format!("{key}: `{v}` is not a non-negative integer"))),
            None => Ok(default),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, HarnessError> {
        match self.get(key) {
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(cfg_err(format!("{key}: `{v}` is not a boolean"))),
            None => Ok(default),
        }
    }

    pub fn uint_grid_or(&self, key: &str, default: &str) -> Result<Vec<usize>, HarnessError> {
        let g = parse_grid(self.str_or(key, default)).map_err(|e| cfg_err(format!("{key}: {e}")))?;
        g.iter()
            .map(|&x| {
                if x >= 0.0 && x.fract() == 0.0 && x < 1e15 {
                    Ok(x as usize)
                } else {
                    Err(cfg_err(format!("{key}: {x} is not a non-negative integer")))
                }
            })
            .collect()
    }

    pub fn real_grid_or(&self, key: &str, default: &str) -> Result<Vec<f64>, HarnessError> {
        parse_grid(self.str_or(key, default)).map_err(|e| cfg_err(format!("{key}: {e}")))
    }

    pub fn gap_grid_or(&self, key: &str, default: &str) -> Result<Vec<Gap>, HarnessError> {
        self.str_or(key, default)
            .split(',')
            .map(|s| Gap::parse(s).map_err(|e| cfg_err(format!("{key}: {e}"))))
            .collect()
    }
}

/// Parses `a,b,c` or `a..bXr` (geometric, `r > 1`, inclusive of `b` when hit).
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some((a, rest)) = s.split_once("..") {
        let (b, r) = rest
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("range `{s}` needs a ratio, as in 64..1024x2"))?;
        let a = parse_real(a).map_err(|e| e.to_string())?;
        let b = parse_real(b).map_err(|e| e.to_string())?;
        let r = parse_real(r).map_err(|e| e.to_string())?;
        if !(a > 0.0 && b >= a && r > 1.0) {
            return Err(format!("range `{s}` needs 0 < a <= b and ratio > 1"));
        }
        let mut out = Vec::new();
        let mut x = a;
        while x <= b * (1.0 + 1e-12) {
            out.push(x);
            x *= r;
        }
        return Ok(out);
    }
    let out: Result<Vec<f64>, String> = s.split(',').map(|t| parse_real(t).map_err(|e| e.to_string())).collect();
    let out = out?;
    if out.is_empty() {
        return Err("empty grid".into());
    }
    Ok(out)
}

/// A gap between singularities, optionally in units of `1/n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub value: f64,
    pub per_n: bool,
}

impl Gap {
    pub fn parse(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let (body, per_n) = match s.strip_suffix("/n") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let value = parse_real(body).map_err(|e| e.to_string())?;
        if !(value >= 0.0) {
            return Err(format!("gap `{s}` must be non-negative"));
        }
        Ok(Gap { value, per_n })
    }

    pub fn at(&self, n: usize) -> f64 {
        if self.per_n {
            self.value / n as f64
        } else {
            self.value
        }
    }

    pub fn label(&self) -> String {
        if self.per_n {
            format!("{}/n", self.value)
        } else {
            format!("{}", self.value)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("64..1024x2").unwrap(),
            vec![64.0, 128.0, 256.0, 512.0, 1024.0]
        );
        assert_eq!(parse_grid("1, 2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert!(parse_grid("64..32x2").is_err());
        assert!(parse_grid("1..4").is_err());
        assert_eq!(Gap::parse("0.1/n").unwrap().at(10), 0.01);
        assert_eq!(Gap::parse("1.0").unwrap().at(10), 1.0);
    }

    #[test]
    fn parse_and_check() {
        let c = RunConfig::parse("# sweep\nexperiment = detn\nn = 8,16  # orders\n").unwrap();
        assert_eq!(c.get("experiment"), Some("detn"));
        assert_eq!(c.uint_grid_or("n", "1").unwrap(), vec![8, 16]);
        assert!(c.check_keys(&["n"]).is_ok());
        assert!(c.check_keys(&[]).is_err());
        assert!(RunConfig::parse("novalue").is_err());
    }
}
