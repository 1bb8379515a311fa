//! Run configuration: flat `key = value` files, JSON run manifests and
//! `--param` overrides, merged in that order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use delta_ineff::Coupling;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Shift,
    Sweep,
    Figure,
    Asymptotics,
    Pt,
    Regularized,
    Well,
    Variational,
    Nbody,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Shift => "shift",
            Command::Sweep => "sweep",
            Command::Figure => "figure",
            Command::Asymptotics => "asymptotics",
            Command::Pt => "pt",
            Command::Regularized => "regularized",
            Command::Well => "well",
            Command::Variational => "variational",
            Command::Nbody => "nbody",
        }
    }

    /// Accepted keys and their defaults (`None`: no default).
    pub fn keys(self) -> &'static [(&'static str, Option<&'static str>)] {
        match self {
            Command::Shift => &[("D", Some("3")), ("g", Some("1")), ("K", Some("1000")), ("n", Some("0"))],
            Command::Sweep => &[
                ("D", Some("3")),
                ("g", Some("hardcore")),
                ("K", Some("1000,10000,100000,1000000")),
                ("n", Some("0")),
            ],
            Command::Figure => &[("D", Some("3")), ("g", Some("1")), ("K", Some("1,5,20,100,400"))],
            Command::Asymptotics => &[
                ("D", Some("1,2,3,4")),
                ("k_lo", Some("1000")),
                ("k_hi", Some("1000000")),
                ("points", Some("16")),
                ("shift", Some("1")),
            ],
            Command::Pt => &[("D", Some("3")), ("g", Some("1")), ("n", Some("0")), ("K", Some("100,1000,10000,100000"))],
            Command::Regularized => &[
                ("D", Some("3")),
                ("g", Some("1")),
                ("epsilon", Some("0.5,0.2,0.1,0.05,0.02,0.01")),
                ("K", Some("20")),
            ],
            Command::Well => &[("R", Some("1")), ("g", Some("1")), ("epsilon", Some("0.1,0.01,0.001"))],
            Command::Variational => &[("D", Some("3")), ("b", None), ("alpha", None)],
            Command::Nbody => &[
                ("N", Some("3")),
                ("D", Some("3")),
                ("b", Some("0.05,0.1,0.2")),
                ("samples", Some("100000")),
                ("seed", Some("1")),
            ],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        <Command as ValueEnum>::from_str(s, false).map_err(|_| CliError::config(format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Keys every command accepts.
const COMMON_KEYS: &[(&str, Option<&str>)] = &[("threads", Some("1"))];

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_key_values(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`", number + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(CliError::config(format!("line {}: empty key", number + 1)));
        }
        if out.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key `{key}`", number + 1)));
        }
    }
    Ok(out)
}

/// Reads the `command` and `parameters` of a run manifest.
pub fn parse_manifest(text: &str) -> CliResult<(Option<Command>, BTreeMap<String, String>)> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::config(format!("manifest is not valid JSON: {e}")))?;
    let command = match value.get("command") {
        None => None,
        Some(serde_json::Value::String(s)) => Some(s.parse()?),
        Some(_) => return Err(CliError::config("manifest `command` must be a string")),
    };
    let mut params = BTreeMap::new();
    if let Some(map) = value.get("parameters") {
        let map = map.as_object().ok_or_else(|| CliError::config("manifest `parameters` must be an object"))?;
        for (k, v) in map {
            let v = v.as_str().ok_or_else(|| CliError::config(format!("manifest parameter `{k}` must be a string")))?;
            params.insert(k.clone(), v.to_string());
        }
    }
    Ok((command, params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threads {
    Count(usize),
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Effective parameters, defaults included.
    pub params: BTreeMap<String, String>,
}

impl RunConfig {
    /// Merges a config file (key-value text or JSON manifest) with
    /// `key=value` overrides, rejects unknown keys and fills defaults.
    pub fn build(command: Command, config_text: Option<&str>, overrides: &[String]) -> CliResult<Self> {
        let mut params = match config_text {
            None => BTreeMap::new(),
            Some(text) if text.trim_start().starts_with('{') => {
                let (from, params) = parse_manifest(text)?;
                if let Some(from) = from {
                    if from != command {
                        return Err(CliError::config(format!("manifest is for `{from}`, not `{command}`")));
                    }
                }
                params
            }
            Some(text) => parse_key_values(text)?,
        };
        for o in overrides {
            let (k, v) = o
                .split_once('=')
                .ok_or_else(|| CliError::config(format!("--param `{o}`: expected key=value")))?;
            params.insert(k.trim().to_string(), v.trim().to_string());
        }
        let allowed: Vec<&str> = command.keys().iter().chain(COMMON_KEYS).map(|(k, _)| *k).collect();
        if let Some(bad) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::config(format!(
                "unknown parameter `{bad}` for `{command}` (accepted: {})",
                allowed.join(", ")
            )));
        }
        for (k, default) in command.keys().iter().chain(COMMON_KEYS) {
            if let Some(d) = default {
                params.entry(k.to_string()).or_insert_with(|| d.to_string());
            }
        }
        let cfg = RunConfig { command, params };
        cfg.threads()?;
        Ok(cfg)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> CliResult<&str> {
        self.raw(key).ok_or_else(|| CliError::config(format!("missing parameter `{key}`")))
    }

    pub fn f64(&self, key: &str) -> CliResult<f64> {
        parse_number(key, self.required(key)?)
    }

    pub fn usize(&self, key: &str) -> CliResult<usize> {
        parse_integer(key, self.required(key)?)
    }

    pub fn u64(&self, key: &str) -> CliResult<u64> {
        let v = self.required(key)?;
        v.parse().map_err(|_| CliError::config(format!("`{key}`: `{v}` is not a non-negative integer")))
    }

    pub fn f64_list(&self, key: &str) -> CliResult<Vec<f64>> {
        split_list(self.required(key)?).map(|v| parse_number(key, v)).collect()
    }

    pub fn usize_list(&self, key: &str) -> CliResult<Vec<usize>> {
        split_list(self.required(key)?).map(|v| parse_integer(key, v)).collect()
    }

    pub fn coupling(&self, key: &str) -> CliResult<Coupling<f64>> {
        let v = self.required(key)?;
        if v.eq_ignore_ascii_case("hardcore") {
            return Ok(Coupling::HardCore);
        }
        Ok(Coupling::Finite(parse_number(key, v)?))
    }

    pub fn threads(&self) -> CliResult<Threads> {
        match self.raw("threads") {
            None => Ok(Threads::Count(1)),
            Some(v) if v.eq_ignore_ascii_case("auto") => Ok(Threads::Auto),
            Some(v) => match parse_integer("threads", v)? {
                0 => Err(CliError::config("`threads` must be at least 1 or `auto`")),
                n => Ok(Threads::Count(n)),
            },
        }
    }
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim)
}

fn parse_number(key: &str, v: &str) -> CliResult<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(CliError::config(format!("`{key}`: `{v}` is not a finite number"))),
    }
}

fn parse_integer(key: &str, v: &str) -> CliResult<usize> {
    // accept integral floats such as 1e6
    if let Ok(n) = v.parse::<usize>() {
        return Ok(n);
    }
    match v.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= usize::MAX as f64 => Ok(x as usize),
        _ => Err(CliError::config(format!("`{key}`: `{v}` is not a non-negative integer"))),
    }
}
