// SPDX-License-Identifier: Apache-2.0

//! Scenario configuration: key-value files merged with command-line flags.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;

use super::CliError;
use crate::numerics::ode::{DEFAULT_STEPS, MIN_STEPS};
use crate::numerics::{Branch, CVec2};

/// Keys accepted in config files and as flags.
pub const KEYS: &[&str] = &[
    "model",
    "epsilon_re",
    "epsilon_im",
    "omega",
    "mu",
    "rho",
    "r",
    "period",
    "t_min",
    "t_max",
    "t_step",
    "steps",
    "initial",
    "out",
    "format",
    "jobs",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    H1,
    H2,
    Bu,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::H1 => "h1",
            ModelKind::H2 => "h2",
            ModelKind::Bu => "bu",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Which state is propagated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Cyclic(Branch),
    Eigen(Branch),
    /// `w+ F+ + w- F-`, built from the normalized cyclic orbits.
    Mix(f64, f64),
    Custom(CVec2),
}

impl InitialState {
    /// The eigenpath the state is expected to follow.
    pub fn own_branch(&self) -> Branch {
        match *self {
            InitialState::Cyclic(b) | InitialState::Eigen(b) => b,
            InitialState::Mix(wp, wm) if wm.abs() >= wp.abs() => Branch::Minus,
            InitialState::Mix(..) => Branch::Plus,
            InitialState::Custom(v) if v.b.norm() > v.a.norm() => Branch::Minus,
            InitialState::Custom(_) => Branch::Plus,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            InitialState::Cyclic(b) => format!("cyclic{b}"),
            InitialState::Eigen(b) => format!("eig{b}"),
            InitialState::Mix(p, m) => format!("mix({p},{m})"),
            InitialState::Custom(v) => {
                format!("custom({},{},{},{})", v.a.re, v.a.im, v.b.re, v.b.im)
            }
        }
    }
}

fn parse_list(s: &str, n: usize) -> Option<Vec<f64>> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse().ok())
        .collect::<Option<_>>()?;
    (v.len() == n).then_some(v)
}

impl std::str::FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("unknown initial state '{s}'");
        match s {
            "cyclic+" => return Ok(InitialState::Cyclic(Branch::Plus)),
            "cyclic-" => return Ok(InitialState::Cyclic(Branch::Minus)),
            "eig+" => return Ok(InitialState::Eigen(Branch::Plus)),
            "eig-" => return Ok(InitialState::Eigen(Branch::Minus)),
            _ => {}
        }
        let (head, args) = if let Some(rest) = s.strip_suffix(')') {
            rest.split_once('(').ok_or_else(bad)?
        } else {
            s.split_once(':').ok_or_else(bad)?
        };
        match head {
            "mix" => {
                let w = parse_list(args, 2)
                    .ok_or_else(|| format!("mix needs two weights, got '{args}'"))?;
                if w[0] == 0.0 && w[1] == 0.0 {
                    return Err("mix weights are both zero".into());
                }
                Ok(InitialState::Mix(w[0], w[1]))
            }
            "custom" => {
                let c = parse_list(args, 4)
                    .ok_or_else(|| format!("custom needs 'ar,ai,br,bi', got '{args}'"))?;
                let v = CVec2::new(C64::new(c[0], c[1]), C64::new(c[2], c[3]));
                if v.norm() == 0.0 {
                    return Err("custom state is zero".into());
                }
                Ok(InitialState::Custom(v))
            }
            _ => Err(bad()),
        }
    }
}

/// A period sweep `t_min, t_min + t_step, ..., t_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub t_min: f64,
    pub t_max: f64,
    pub t_step: f64,
}

impl Sweep {
    pub fn periods(&self) -> Vec<f64> {
        let n = ((self.t_max - self.t_min) / self.t_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|k| self.t_min + k as f64 * self.t_step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: Option<ModelKind>,
    pub epsilon: C64,
    pub omega: Option<f64>,
    pub mu: f64,
    pub rho: f64,
    pub r: f64,
    pub period: Option<f64>,
    pub sweep: Option<Sweep>,
    pub steps: usize,
    pub initial: InitialState,
    pub out: Option<PathBuf>,
    /// `None` picks the command's natural format.
    pub format: Option<Format>,
    pub jobs: usize,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            model: None,
            epsilon: C64::new(0.5, 0.0),
            omega: None,
            mu: 0.2,
            rho: 0.5,
            r: 1.0,
            period: None,
            sweep: None,
            steps: DEFAULT_STEPS,
            initial: InitialState::Cyclic(Branch::Minus),
            out: None,
            format: None,
            jobs: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        }
    }
}

fn normalize_key(k: &str) -> String {
    k.trim()
        .trim_start_matches("--")
        .to_ascii_lowercase()
        .replace('-', "_")
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected 'key = value'", n + 1)))?;
        let key = normalize_key(k);
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "line {}: unknown key '{}'",
                n + 1,
                k.trim()
            )));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

pub fn read_kv_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
    parse_kv(&text)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.parse()
        .map_err(|_| CliError::Config(format!("{key}: cannot parse '{v}'")))
}

impl ScenarioConfig {
    /// Builds a config from merged key-value pairs.
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (k, v) in map {
            match k.as_str() {
                "model" => {
                    c.model = Some(match v.to_ascii_lowercase().as_str() {
                        "h1" => ModelKind::H1,
                        "h2" => ModelKind::H2,
                        "bu" => ModelKind::Bu,
                        _ => {
                            return Err(CliError::Config(format!(
                                "unknown model '{v}' (h1, h2, bu)"
                            )))
                        }
                    })
                }
                "epsilon_re" => c.epsilon.re = num(k, v)?,
                "epsilon_im" => c.epsilon.im = num(k, v)?,
                "omega" => c.omega = Some(num(k, v)?),
                "mu" => c.mu = num(k, v)?,
                "rho" => c.rho = num(k, v)?,
                "r" => c.r = num(k, v)?,
                "period" => c.period = Some(num(k, v)?),
                "t_min" | "t_max" | "t_step" => {}
                "steps" => c.steps = num(k, v)?,
                "initial" => c.initial = v.parse().map_err(CliError::Config)?,
                "out" => c.out = Some(PathBuf::from(v)),
                "format" => {
                    c.format = Some(match v.to_ascii_lowercase().as_str() {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => {
                            return Err(CliError::Config(format!(
                                "unknown format '{v}' (csv, json)"
                            )))
                        }
                    })
                }
                "jobs" => c.jobs = num(k, v)?,
                _ => return Err(CliError::Config(format!("unknown key '{k}'"))),
            }
        }
        let sweep_keys = ["t_min", "t_max", "t_step"].map(|k| map.get(k));
        c.sweep = match sweep_keys {
            [None, None, None] => None,
            [Some(a), Some(b), Some(s)] => {
                let sw = Sweep {
                    t_min: num("t_min", a)?,
                    t_max: num("t_max", b)?,
                    t_step: num("t_step", s)?,
                };
                if !(sw.t_min > 0.0 && sw.t_max >= sw.t_min && sw.t_step > 0.0) {
                    return Err(CliError::Config(
                        "sweep needs 0 < t_min <= t_max and t_step > 0".into(),
                    ));
                }
                Some(sw)
            }
            _ => {
                return Err(CliError::Config(
                    "a sweep needs all of t_min, t_max, t_step".into(),
                ))
            }
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.steps < MIN_STEPS {
            return Err(CliError::Config(format!("steps must be >= {MIN_STEPS}")));
        }
        if self.jobs == 0 {
            return Err(CliError::Config("jobs must be >= 1".into()));
        }
        if let Some(t) = self.period {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Config(format!(
                    "period must be positive, got {t}"
                )));
            }
        }
        if let Some(w) = self.omega {
            if !(w > 0.0 && w.is_finite()) {
                return Err(CliError::Config(format!("omega must be positive, got {w}")));
            }
        }
        Ok(())
    }

    pub fn require_model(&self) -> Result<ModelKind, CliError> {
        self.model
            .ok_or_else(|| CliError::Config("--model is required (h1, h2, bu)".into()))
    }

    /// Periods to run: the sweep, the explicit period, or `2 pi / omega`.
    pub fn periods(&self) -> Result<Vec<f64>, CliError> {
        if let Some(s) = self.sweep {
            return Ok(s.periods());
        }
        if let Some(t) = self.period {
            return Ok(vec![t]);
        }
        match self.require_model()? {
            ModelKind::Bu => Err(CliError::Config(
                "model bu needs --period or a sweep".into(),
            )),
            _ => Ok(vec![TAU / self.omega.unwrap_or(1.0)]),
        }
    }

    /// The single period of a non-sweep command.
    pub fn single_period(&self) -> Result<f64, CliError> {
        let ts = self.periods()?;
        match ts.as_slice() {
            [t] => Ok(*t),
            _ => Err(CliError::Config(
                "this command takes a single period, not a sweep".into(),
            )),
        }
    }
}
