//! Flat `key=value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Keys mirror the fields of
//! [`SolverConfig`] and the median parameters; an unknown key is an error so
//! typos do not silently fall back to defaults.

use std::collections::BTreeMap;
use std::path::Path;

use crate::lowerbound::median::CheckMode;
use crate::solvers::{RhoMode, SolverConfig};

use super::HarnessError;

const SOLVER_KEYS: &[&str] = &["alpha", "eps", "c_elt", "c_set", "rho", "feasibility_slack"];
const MEDIAN_KEYS: &[&str] = &["p0", "variant", "median_k", "median_alpha", "mode", "max_attempts", "c_weight"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvConfig {
    entries: BTreeMap<String, String>,
}

impl KvConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Usage(format!("config line {}: expected key=value", i + 1)))?;
            let key = k.trim();
            if !SOLVER_KEYS.contains(&key) && !MEDIAN_KEYS.contains(&key) {
                return Err(HarnessError::Usage(format!("config line {}: unknown key `{key}`", i + 1)));
            }
            if entries.insert(key.to_string(), v.trim().to_string()).is_some() {
                return Err(HarnessError::Usage(format!("config line {}: duplicate key `{key}`", i + 1)));
            }
        }
        Ok(KvConfig { entries })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError> {
        self.get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| HarnessError::Usage(format!("config `{key}`: cannot parse `{v}`")))
            })
            .transpose()
    }

    /// Defaults overridden by whatever solver keys are present.
    pub fn solver_config(&self) -> Result<SolverConfig, HarnessError> {
        let mut c = SolverConfig::default();
        if let Some(v) = self.parsed("alpha")? {
            c.alpha = v;
        }
        if let Some(v) = self.parsed("eps")? {
            c.eps = v;
        }
        if let Some(v) = self.parsed("c_elt")? {
            c.c_elt = v;
        }
        if let Some(v) = self.parsed("c_set")? {
            c.c_set = v;
        }
        if let Some(v) = self.parsed("feasibility_slack")? {
            c.feasibility_slack = v;
        }
        match self.get("rho") {
            None | Some("greedy") => {}
            Some(v) => {
                let r = v
                    .parse()
                    .map_err(|_| HarnessError::Usage(format!("config `rho`: expected `greedy` or a number, got `{v}`")))?;
                c.rho_mode = RhoMode::Custom(r);
            }
        }
        c.validate().map_err(|e| HarnessError::Usage(e.to_string()))?;
        Ok(c)
    }

    pub fn check_mode(&self) -> Result<CheckMode, HarnessError> {
        parse_check_mode(self.get("mode").unwrap_or("auto"))
    }
}

pub fn parse_check_mode(s: &str) -> Result<CheckMode, HarnessError> {
    match s {
        "exact" => Ok(CheckMode::Exact),
        "sampled" => Ok(CheckMode::Sampled),
        "auto" => Ok(CheckMode::Auto),
        other => Err(HarnessError::Usage(format!("unknown check mode `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let kv = KvConfig::parse("# solver\nalpha = 3\neps=0.25  # tighter\n\nrho=1.5\nmode=exact\n").unwrap();
        let c = kv.solver_config().unwrap();
        assert_eq!((c.alpha, c.eps, c.c_elt), (3.0, 0.25, 2.0));
        assert_eq!(c.rho_mode, RhoMode::Custom(1.5));
        assert_eq!(kv.check_mode().unwrap(), CheckMode::Exact);
    }

    #[test]
    fn rejects_unknown_duplicate_and_invalid() {
        assert!(KvConfig::parse("alhpa=2").is_err());
        assert!(KvConfig::parse("eps=1\neps=2").is_err());
        assert!(KvConfig::parse("eps").is_err());
        assert!(KvConfig::parse("eps=-1").unwrap().solver_config().is_err());
        assert!(KvConfig::parse("alpha=two").unwrap().solver_config().is_err());
    }
}
