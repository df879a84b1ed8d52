//! Flat `key = value` configuration files and their merge with flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use qgrowth::growth::QuadratureSpec;

/// Keys accepted in a configuration file.
pub const KEYS: &[&str] = &[
    "fn",
    "functional",
    "grid",
    "order",
    "tol",
    "strict",
    "out",
    "suite",
    "alpha_m",
    "circle_nodes",
    "max_circle_nodes",
    "sphere_order",
    "radial_depth",
    "graded_ratio",
    "abs_tol",
    "rel_tol",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub values: BTreeMap<String, String>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected `key = value`", n + 1);
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        }
    }

    /// Default quadrature with file overrides applied.
    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let mut q = QuadratureSpec::default();
        if let Some(v) = self.parsed("circle_nodes")? {
            q.circle_nodes = v;
        }
        if let Some(v) = self.parsed("max_circle_nodes")? {
            q.max_circle_nodes = v;
        }
        if let Some(v) = self.parsed("sphere_order")? {
            q.sphere_order = v;
        }
        if let Some(v) = self.parsed("radial_depth")? {
            q.radial_depth = v;
        }
        if let Some(v) = self.parsed("graded_ratio")? {
            q.graded_ratio = v;
        }
        if let Some(v) = self.parsed("abs_tol")? {
            q.abs_tol = v;
        }
        if let Some(v) = self.parsed("rel_tol")? {
            q.rel_tol = v;
        }
        q.validate()?;
        Ok(q)
    }
}

/// `min:max:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridArg {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl std::str::FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{s}` is not min:max:count"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number `{p}` in grid"));
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("bad count `{}` in grid", parts[2]))?;
        let g = GridArg {
            min: num(parts[0])?,
            max: num(parts[1])?,
            count,
        };
        if !(g.min < g.max) {
            return Err(format!("grid needs min < max, got {s}"));
        }
        if g.count < 8 {
            return Err(format!("grid needs at least 8 points, got {}", g.count));
        }
        Ok(g)
    }
}

/// First present value among a flag and a file entry.
pub fn pick<T: Clone + std::str::FromStr>(flag: &Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v.clone())),
        None => file.parsed(key),
    }
}
