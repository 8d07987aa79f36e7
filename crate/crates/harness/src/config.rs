//! Flat `key = value` scenario files.
//!
//! Units are fixed by the key suffix: meters (`_m`), watts (`_w`), dB, bits,
//! symbols, hertz and seconds. Everything after `#` on a line is ignored. The
//! blocklength budget is given either directly as `M_symbols` or as
//! `B_hz` together with `Tmax_s`; when both forms appear they must agree.

use std::collections::HashMap;
use std::path::Path;

use relayopt_core::{ScenarioParams, SolverConfig};

use crate::error::{ConfigError, HarnessError, Result};

/// The reference scenario shipped with the binary.
pub const REFERENCE_CFG: &str = include_str!("../configs/paper.cfg");

const KEYS: &[&str] = &[
    "D_m",
    "H_m",
    "d1_m",
    "d2_m",
    "L_bits",
    "M_symbols",
    "B_hz",
    "Tmax_s",
    "P1_w",
    "P2_w",
    "beta0_db",
    "noise",
    "delta",
    "zeta",
    "n_max",
    "t_max",
    "early_stop_tol",
];

/// A validated scenario plus solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub solver: SolverConfig,
}

impl Scenario {
    pub fn reference() -> Self {
        parse_scenario(REFERENCE_CFG).expect("bundled config is valid")
    }
}

/// Read and validate a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(parse_scenario(&text)?)
}

struct Entries(HashMap<&'static str, (usize, String)>);

impl Entries {
    fn raw(&self, key: &'static str) -> Option<&(usize, String)> {
        self.0.get(key)
    }

    fn parse<T: std::str::FromStr>(
        &self,
        key: &'static str,
    ) -> std::result::Result<Option<T>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some((line, value)) => value
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::InvalidValue {
                    line: *line,
                    key: key.to_string(),
                    value: value.clone(),
                }),
        }
    }

    fn required<T: std::str::FromStr>(
        &self,
        key: &'static str,
    ) -> std::result::Result<T, ConfigError> {
        self.parse(key)?.ok_or(ConfigError::Missing(key))
    }
}

pub fn parse_scenario(text: &str) -> std::result::Result<Scenario, ConfigError> {
    let mut entries = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        }
        let Some(known) = KEYS.iter().find(|k| **k == key) else {
            return Err(ConfigError::UnknownKey {
                line,
                key: key.to_string(),
            });
        };
        if entries.insert(*known, (line, value.to_string())).is_some() {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
    }
    let e = Entries(entries);

    let bandwidth_hz: Option<f64> = e.parse("B_hz")?;
    let latency_s: Option<f64> = e.parse("Tmax_s")?;
    let total_blocklength = match (e.parse::<u32>("M_symbols")?, bandwidth_hz, latency_s) {
        (Some(m), _, _) => m,
        (None, Some(b), Some(t)) => ScenarioParams::blocklength_from_budget(b, t),
        (None, Some(_), None) => return Err(ConfigError::Missing("Tmax_s")),
        (None, None, Some(_)) => return Err(ConfigError::Missing("B_hz")),
        (None, None, None) => return Err(ConfigError::Missing("M_symbols")),
    };
    if bandwidth_hz.is_some() != latency_s.is_some() {
        return Err(ConfigError::Missing(if bandwidth_hz.is_some() {
            "Tmax_s"
        } else {
            "B_hz"
        }));
    }

    let params = ScenarioParams {
        distance_m: e.required("D_m")?,
        altitude_m: e.required("H_m")?,
        x_min_m: e.required("d1_m")?,
        x_max_m: e.required("d2_m")?,
        packet_bits: e.required("L_bits")?,
        total_blocklength,
        bandwidth_hz,
        latency_s,
        p1_w: e.required("P1_w")?,
        p2_w: e.required("P2_w")?,
        beta0_db: e.required("beta0_db")?,
        noise_power: e.required("noise")?,
    };
    let defaults = SolverConfig::default();
    let solver = SolverConfig {
        delta: e.parse("delta")?.unwrap_or(defaults.delta),
        zeta: e.parse("zeta")?.unwrap_or(defaults.zeta),
        n_max: e.parse("n_max")?.unwrap_or(defaults.n_max),
        t_max: e.parse("t_max")?.unwrap_or(defaults.t_max),
        early_stop_tol: e
            .parse("early_stop_tol")?
            .unwrap_or(defaults.early_stop_tol),
        ..defaults
    };
    params
        .validate()
        .map_err(|err| ConfigError::Invariant(err.to_string()))?;
    solver
        .validate()
        .map_err(|err| ConfigError::Invariant(err.to_string()))?;
    Ok(Scenario { params, solver })
}
