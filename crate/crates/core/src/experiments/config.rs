use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::coupler::{balanced_length, CouplerParams, SystemKind};
use crate::fock::{Normalization, SourceModel};
use crate::{Error, Result};

/// Default parameters of every sweep.
#[derive(Clone, Copy, Debug)]
pub struct Defaults {
    /// Coupling rate, 1/cm.
    pub kappa: f64,
    /// Coupling-section length, cm.
    pub length: f64,
    /// Upper end of the sample loss grid, 1/cm.
    pub gamma_max: f64,
    /// Number of fabricated samples (sine amplitudes 0..=3.5 µm in 0.5 µm steps).
    pub samples: usize,
    /// Upper end of the continuous loss grid, in units of kappa.
    pub dense_ratio_max: f64,
    pub dense_points: usize,
    /// Delay grid half-width, ps.
    pub delay_max: f64,
    pub delay_points: usize,
    /// Source coherence time, ps. Fitted by eye, not a measured value.
    pub tau_c: f64,
    /// Peak indistinguishability. Fitted by eye, not a measured value.
    pub v_max: f64,
}

pub const DEFAULTS: Defaults = Defaults {
    kappa: 0.26,
    length: 2.1,
    gamma_max: 0.63,
    samples: 8,
    dense_ratio_max: 2.4,
    dense_points: 201,
    delay_max: 0.8,
    delay_points: 161,
    tau_c: 0.15,
    v_max: 0.95,
};

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| {
                    let i = i as f64;
                    (start * (last - i) + stop * i) / last
                })
                .collect()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Eigenvalue spectrum against loss.
    Fig2b,
    /// Two-photon output probabilities of the bare coupler.
    Fig3bcd,
    /// HOM traces of the bare coupler.
    Fig3e,
    /// HOM traces of the sandwiched coupler.
    Fig4b,
    /// Visibilities of both systems against loss.
    Fig4c,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [
        FigureId::Fig2b,
        FigureId::Fig3bcd,
        FigureId::Fig3e,
        FigureId::Fig4b,
        FigureId::Fig4c,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2b => "fig2b",
            FigureId::Fig3bcd => "fig3bcd",
            FigureId::Fig3e => "fig3e",
            FigureId::Fig4b => "fig4b",
            FigureId::Fig4c => "fig4c",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown figure `{s}`")))
    }
}

/// How the coupler length is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Use the configured length as is.
    #[default]
    Paper,
    /// Override the length with `π/(4κ)` so the lossless coupler is an exact
    /// 50/50 splitter.
    Idealized,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Paper => "paper",
            Mode::Idealized => "idealized",
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(Mode::Paper),
            "idealized" | "idealised" => Ok(Mode::Idealized),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

/// Everything needed to reproduce one sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub figure: Option<FigureId>,
    pub kind: SystemKind,
    pub mode: Mode,
    /// 1/cm
    pub kappa: f64,
    /// cm; ignored in [`Mode::Idealized`].
    pub length: f64,
    /// 1/cm, ascending.
    pub gamma_grid: Vec<f64>,
    /// ps, ascending.
    pub delay_grid: Vec<f64>,
    pub source: SourceModel,
    pub normalization: Normalization,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            figure: None,
            kind: SystemKind::Bare,
            mode: Mode::Paper,
            kappa: DEFAULTS.kappa,
            length: DEFAULTS.length,
            gamma_grid: linspace(0.0, DEFAULTS.gamma_max, DEFAULTS.samples),
            delay_grid: linspace(
                -DEFAULTS.delay_max,
                DEFAULTS.delay_max,
                DEFAULTS.delay_points,
            ),
            source: SourceModel::new(DEFAULTS.tau_c, DEFAULTS.v_max).expect("default source"),
            normalization: Normalization::None,
        }
    }
}

impl SweepSpec {
    /// Defaults for one figure, with the configured length ([`Mode::Paper`]).
    pub fn for_figure(figure: FigureId) -> Self {
        let mut spec = SweepSpec {
            figure: Some(figure),
            ..SweepSpec::default()
        };
        match figure {
            FigureId::Fig2b | FigureId::Fig4c => {
                spec.gamma_grid = dense_gamma_grid(spec.kappa);
            }
            FigureId::Fig3e => spec.normalization = Normalization::DistRate,
            FigureId::Fig4b => {
                spec.kind = SystemKind::Sandwiched;
                spec.normalization = Normalization::DistRate;
            }
            FigureId::Fig3bcd => {}
        }
        spec
    }

    pub fn effective_length(&self) -> f64 {
        match self.mode {
            Mode::Paper => self.length,
            Mode::Idealized => balanced_length(self.kappa),
        }
    }

    pub fn params(&self, gamma: f64) -> Result<CouplerParams> {
        CouplerParams::new(self.kappa, gamma, self.effective_length())
    }

    pub fn validate(&self) -> Result<()> {
        CouplerParams::new(self.kappa, 0.0, self.effective_length())?;
        check_grid("gamma_grid", &self.gamma_grid)?;
        check_grid("delay_grid", &self.delay_grid)?;
        if let Some(&g) = self.gamma_grid.iter().find(|g| **g < 0.0) {
            return Err(Error::Config(format!(
                "gamma_grid contains negative loss {g}"
            )));
        }
        Ok(())
    }

    /// Applies `key = value` settings in order. Later settings win.
    pub fn apply_config(&mut self, cfg: &ConfigFile) -> Result<()> {
        let mut gamma_max = None;
        let mut points = None;
        let mut explicit_grid = false;
        let mut tau_c = self.source.tau_c();
        let mut v_max = self.source.v_max();
        for (key, value) in cfg.entries() {
            let value = value.as_str();
            match key.as_str() {
                "figure" => self.figure = Some(value.parse()?),
                "kind" => self.kind = value.parse()?,
                "mode" => self.mode = value.parse()?,
                "kappa" => self.kappa = parse_real(key, value)?,
                "length" => self.length = parse_real(key, value)?,
                "gamma_grid" => {
                    self.gamma_grid = parse_list(key, value)?;
                    explicit_grid = true;
                }
                "gamma_max" => gamma_max = Some(parse_real(key, value)?),
                "points" => {
                    points = Some(value.trim().parse::<usize>().map_err(|_| {
                        Error::Config(format!("`points` expects a count, got `{value}`"))
                    })?)
                }
                "delay_grid" => self.delay_grid = parse_list(key, value)?,
                "tau_c" => tau_c = parse_real(key, value)?,
                "v_max" => v_max = parse_real(key, value)?,
                "normalization" => self.normalization = value.parse()?,
                k if INFORMATIONAL_KEYS.contains(&k) => {}
                other => return Err(Error::Config(format!("unknown key `{other}`"))),
            }
        }
        let dense = matches!(self.figure, Some(FigureId::Fig2b | FigureId::Fig4c));
        if !explicit_grid && gamma_max.is_none() && points.is_none() && dense {
            self.gamma_grid = dense_gamma_grid(self.kappa);
        }
        if !explicit_grid && (gamma_max.is_some() || points.is_some()) {
            let current_max = self
                .gamma_grid
                .last()
                .copied()
                .unwrap_or(DEFAULTS.gamma_max);
            let hi = gamma_max.unwrap_or(current_max);
            let n = points.unwrap_or(self.gamma_grid.len().max(2));
            self.gamma_grid = linspace(0.0, hi, n);
        }
        self.source = SourceModel::new(tau_c, v_max)?;
        Ok(())
    }

    /// Echo of the spec, in the same `key = value` vocabulary the config
    /// reader accepts, plus the conventions applied.
    pub fn metadata(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("tool".into(), json!("ptcoupler"));
        m.insert("version".into(), json!(crate::VERSION));
        if let Some(f) = self.figure {
            m.insert("figure".into(), json!(f.as_str()));
        }
        m.insert("kind".into(), json!(self.kind.as_str()));
        m.insert("mode".into(), json!(self.mode.as_str()));
        m.insert("kappa".into(), json!(self.kappa));
        m.insert("length".into(), json!(self.effective_length()));
        m.insert("gamma_grid".into(), json!(self.gamma_grid));
        m.insert("delay_grid".into(), json!(self.delay_grid));
        m.insert("tau_c".into(), json!(self.source.tau_c()));
        m.insert("v_max".into(), json!(self.source.v_max()));
        m.insert("normalization".into(), json!(self.normalization.as_str()));
        m.insert("sign_convention".into(), json!("U(z) = exp(-iHz)"));
        m.insert(
            "mode_convention".into(),
            json!("mode 1 = lossless waveguide, mode 2 = lossy waveguide"),
        );
        m.insert(
            "units".into(),
            json!("kappa, gamma: 1/cm; length: cm; delay, tau_c: ps"),
        );
        m
    }
}

/// Metadata keys that carry no settings and are skipped on input.
const INFORMATIONAL_KEYS: &[&str] = &[
    "tool",
    "version",
    "sign_convention",
    "mode_convention",
    "units",
    "visibilities",
];

fn dense_gamma_grid(kappa: f64) -> Vec<f64> {
    linspace(0.0, DEFAULTS.dense_ratio_max, DEFAULTS.dense_points)
        .into_iter()
        .map(|r| r * kappa)
        .collect()
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config(format!("{name} is empty")));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config(format!("{name} contains non-finite values")));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config(format!("{name} is not sorted ascending")));
    }
    Ok(())
}

fn parse_real(key: &str, value: &str) -> Result<f64> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Config(format!("`{key}` expects a real number, got `{value}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>> {
    let body = value.trim().trim_start_matches('[').trim_end_matches(']');
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(|v| parse_real(key, v)).collect()
}

/// Flat `key = value` settings, one per line, `#` starting a comment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    entries: Vec<(String, String)>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!(
                    "line {}: expected `key = value`, got `{line}`",
                    lineno + 1
                ))
            })?;
            entries.push((key.trim().to_string(), value.trim().to_string()));
        }
        Ok(ConfigFile { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        ConfigFile::parse(&text)
    }

    /// Settings recorded in a table's metadata.
    pub fn from_metadata(metadata: &Map<String, Value>) -> Self {
        let entries = metadata
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    Value::String(s) => s.clone(),
                    Value::Array(items) => items
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                (k.clone(), v)
            })
            .collect();
        ConfigFile { entries }
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn extend(&mut self, other: &ConfigFile) {
        self.entries.extend(other.entries.iter().cloned());
    }
}
