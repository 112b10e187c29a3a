//! Effective configuration: preset defaults, then a `key = value` file, then
//! flags, each layer overriding the previous one.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use anyhow::Result;

/// Error caused by the invocation rather than by the mathematics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

pub const KEYS: &[&str] = &[
    "graph",
    "geodesic",
    "m",
    "t",
    "word",
    "type",
    "pair",
    "ray1",
    "ray2",
    "center",
    "r",
    "r-min",
    "r-max",
    "window",
    "cap-radius",
    "cap-factor",
    "cap-nodes",
    "stab-delta",
    "region",
    "workers",
    "out",
    "emit-dot",
    "fit-range",
    "expected-exponent",
    "tol",
    "input",
];

#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn set(&mut self, key: &str, value: impl ToString) {
        debug_assert!(KEYS.contains(&key), "unregistered key {key}");
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn set_opt<T: fmt::Display>(&mut self, key: &str, value: &Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn has(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => match v.parse() {
                Ok(x) => Ok(Some(x)),
                Err(e) => usage(format!("invalid value {v:?} for {key}: {e}")),
            },
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: fmt::Display,
    {
        match self.get(key)? {
            Some(x) => Ok(x),
            None => usage(format!("missing --{key}")),
        }
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        Ok(self.get::<bool>(key)?.unwrap_or(false))
    }

    /// Lower layer under `self`: keys already present win.
    pub fn under(mut self, lower: &Settings) -> Settings {
        for (k, v) in &lower.values {
            self.values.entry(k.clone()).or_insert_with(|| v.clone());
        }
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Settings> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return usage(format!("config line {}: expected key = value", i + 1));
            };
            let key = k.trim().replace('_', "-");
            if !KEYS.contains(&key.as_str()) {
                return usage(format!("config line {}: unknown key {:?}", i + 1, k.trim()));
            }
            out.set(&key, v.trim());
        }
        Ok(out)
    }
}

/// Parses `a:b` into an inclusive range.
pub fn parse_span<T: FromStr>(key: &str, text: &str) -> Result<(T, T)> {
    let parsed = text
        .split_once(':')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    match parsed {
        Some(p) => Ok(p),
        None => usage(format!("invalid {key} {text:?}, expected lo:hi")),
    }
}
