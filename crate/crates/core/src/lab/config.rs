//! Experiment configuration files: sectioned `key = value` text.
//!
//! Every getter marks its key as consumed; [`Config::finish`] then rejects
//! whatever is left, so misspelled or misplaced keys fail loudly instead of
//! silently falling back to defaults.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use crate::coeffs::Weight;
use crate::error::{Error, Result};
use crate::grid::{build_mesh, BoundaryCondition, Geometry, Mesh};

#[derive(Debug)]
pub struct Config {
    entries: BTreeMap<(String, String), String>,
    consumed: RefCell<BTreeSet<(String, String)>>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| bad_line(lineno, "unterminated section header"))?
                    .trim();
                if name.is_empty() {
                    return Err(bad_line(lineno, "empty section name"));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad_line(lineno, "expected key = value"))?;
            let sec = section
                .clone()
                .ok_or_else(|| bad_line(lineno, "key before any [section]"))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(bad_line(lineno, "empty key"));
            }
            let old = entries.insert((sec.clone(), key.clone()), value.trim().to_string());
            if old.is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key {key:?} in section [{sec}]",
                    lineno + 1
                )));
            }
        }
        Ok(Config {
            entries,
            consumed: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)?;
        Config::parse(&text)
    }

    /// Raw lookup; marks the key consumed whether or not it is present.
    pub fn take(&self, section: &str, key: &str) -> Option<&str> {
        let id = (section.to_string(), key.to_string());
        self.consumed.borrow_mut().insert(id.clone());
        self.entries.get(&id).map(String::as_str)
    }

    pub fn str_or(&self, section: &str, key: &str, default: &str) -> String {
        self.take(section, key).unwrap_or(default).to_string()
    }

    pub fn f64_or(&self, section: &str, key: &str, default: f64) -> Result<f64> {
        match self.take(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| bad_value(section, key, v, "a number")),
        }
    }

    pub fn usize_or(&self, section: &str, key: &str, default: usize) -> Result<usize> {
        match self.take(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| bad_value(section, key, v, "a nonnegative integer")),
        }
    }

    pub fn u64_or(&self, section: &str, key: &str, default: u64) -> Result<u64> {
        match self.take(section, key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| bad_value(section, key, v, "an unsigned integer")),
        }
    }

    pub fn bool_or(&self, section: &str, key: &str, default: bool) -> Result<bool> {
        match self.take(section, key) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(v) => Err(bad_value(section, key, v, "true or false")),
        }
    }

    pub fn weight_or(&self, section: &str, key: &str, default: &str) -> Result<Weight> {
        let spec = self.str_or(section, key, default);
        Weight::parse(&spec)
    }

    /// Semicolon-separated list of weight specs.
    pub fn weights_or(&self, section: &str, key: &str, default: &str) -> Result<Vec<Weight>> {
        let spec = self.str_or(section, key, default);
        spec.split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Weight::parse)
            .collect()
    }

    /// Comma-separated float list.
    pub fn list_f64_or(&self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.take(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| bad_value(section, key, v, "comma-separated numbers"))
                })
                .collect(),
        }
    }

    pub fn list_usize_or(&self, section: &str, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        match self.take(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| bad_value(section, key, v, "comma-separated integers"))
                })
                .collect(),
        }
    }

    pub fn bc_or(&self, section: &str, key: &str, default: BoundaryCondition) -> Result<BoundaryCondition> {
        match self.take(section, key) {
            None => Ok(default),
            Some("dirichlet") => Ok(BoundaryCondition::Dirichlet),
            Some("neumann") => Ok(BoundaryCondition::Neumann),
            Some(v) => Err(bad_value(section, key, v, "dirichlet or neumann")),
        }
    }

    /// Geometry spec `interval(a,b)` or `radial(dim,R)`.
    pub fn geometry_or(&self, section: &str, key: &str, default: Geometry) -> Result<Geometry> {
        let spec = match self.take(section, key) {
            None => return Ok(default),
            Some(v) => v,
        };
        let err = || bad_value(section, key, spec, "interval(a,b) or radial(dim,R)");
        let (name, body) = spec
            .split_once('(')
            .and_then(|(n, rest)| rest.strip_suffix(')').map(|b| (n.trim(), b)))
            .ok_or_else(err)?;
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(err());
        }
        match name {
            "interval" => {
                let l: f64 = parts[0].parse().map_err(|_| err())?;
                let r: f64 = parts[1].parse().map_err(|_| err())?;
                Geometry::interval(l, r)
            }
            "radial" => {
                let d: u32 = parts[0].parse().map_err(|_| err())?;
                let radius: f64 = parts[1].parse().map_err(|_| err())?;
                Geometry::radial(d, radius)
            }
            _ => Err(err()),
        }
    }

    pub fn mesh_or(
        &self,
        default_geometry: Geometry,
        default_n: usize,
        n_override: Option<usize>,
    ) -> Result<Arc<Mesh>> {
        let geometry = self.geometry_or("problem", "geometry", default_geometry)?;
        let n = match n_override {
            Some(n) => {
                self.take("problem", "n");
                n
            }
            None => self.usize_or("problem", "n", default_n)?,
        };
        Ok(Arc::new(build_mesh(geometry, n)?))
    }

    /// Errors on any key that no getter asked about.
    pub fn finish(&self) -> Result<()> {
        let consumed = self.consumed.borrow();
        let stray: Vec<String> = self
            .entries
            .keys()
            .filter(|id| !consumed.contains(*id))
            .map(|(sec, key)| format!("[{sec}] {key}"))
            .collect();
        if stray.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "unknown key(s): {}",
                stray.join(", ")
            )))
        }
    }

    /// Section -> key -> value view for the manifest echo.
    pub fn echo(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let mut out: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for ((sec, key), value) in &self.entries {
            out.entry(sec.clone())
                .or_default()
                .insert(key.clone(), value.clone());
        }
        out
    }
}

fn bad_line(lineno: usize, what: &str) -> Error {
    Error::Config(format!("line {}: {what}", lineno + 1))
}

fn bad_value(section: &str, key: &str, value: &str, want: &str) -> Error {
    Error::Config(format!(
        "[{section}] {key} = {value:?}: expected {want}"
    ))
}
