//! Flat JSON experiment configuration, presets and command-line overrides.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use h2p_core::model::{Boundary, GaussianPacket, HubbardParams, LatticeSpec, Statistics};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A quasi-momentum in radians per site. In JSON it is a number or one of the
/// tokens `"pi"` / `"-pi"`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Momentum(pub f64);

impl Momentum {
    pub fn parse(text: &str) -> Result<Self, String> {
        match text.trim() {
            "pi" => Ok(Self(PI)),
            "-pi" => Ok(Self(-PI)),
            t => t
                .parse::<f64>()
                .map(Self)
                .map_err(|_| format!("`{text}` is neither a number nor \"pi\"")),
        }
    }
}

impl Serialize for Momentum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == PI {
            s.serialize_str("pi")
        } else if self.0 == -PI {
            s.serialize_str("-pi")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Momentum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Momentum;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"pi\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Momentum, E> {
                Ok(Momentum(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Momentum, E> {
                Ok(Momentum(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Momentum, E> {
                Ok(Momentum(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Momentum, E> {
                Momentum::parse(v).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryName {
    Open,
    Periodic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapeName {
    Exponential,
    Onsite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsName {
    Distinguishable,
    Bosonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Artifact {
    Series,
    Semiclassical,
    Snapshots,
    Summary,
}

pub const ALL_ARTIFACTS: [Artifact; 4] = [
    Artifact::Series,
    Artifact::Semiclassical,
    Artifact::Snapshots,
    Artifact::Summary,
];

/// Every field is optional in the file; missing ones take the defaults of
/// [`ExperimentConfig::default`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub n_sites: usize,
    pub boundary: BoundaryName,
    #[serde(rename = "J")]
    pub hopping: f64,
    #[serde(rename = "U")]
    pub onsite: f64,
    pub gamma: f64,
    pub shape: ShapeName,
    pub statistics: StatisticsName,
    /// Left packet centre; defaults to `floor((n_sites - d)/2)`.
    pub x0: Option<f64>,
    /// Right packet centre; defaults to `x0 + d`.
    pub y0: Option<f64>,
    pub d: Option<f64>,
    pub w: f64,
    pub px: Momentum,
    pub py: Momentum,
    pub t_final: f64,
    pub dt_out: f64,
    pub accuracy: f64,
    /// Defaults to the members of [`DEFAULT_SNAPSHOTS`] not beyond `t_final`.
    pub snapshot_times: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub formats: Vec<Artifact>,
}

pub const DEFAULT_SEPARATION: f64 = 10.0;
pub const DEFAULT_SNAPSHOTS: [f64; 3] = [0.0, 10.0, 20.0];

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_sites: 80,
            boundary: BoundaryName::Open,
            hopping: 1.0,
            onsite: -6.0,
            gamma: 1.0 / 12.0,
            shape: ShapeName::Exponential,
            statistics: StatisticsName::Distinguishable,
            x0: None,
            y0: None,
            d: None,
            w: 6.0,
            px: Momentum(0.0),
            py: Momentum(0.0),
            t_final: 50.0,
            dt_out: 0.1,
            accuracy: 1e-10,
            snapshot_times: None,
            out: None,
            formats: ALL_ARTIFACTS.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// Pair at rest, attracting: the Newtonian case.
    Fig2,
    /// Same pair with the right particle at the band top: self-propulsion.
    Fig3,
}

impl Preset {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "fig2" => Some(Self::Fig2),
            "fig3" => Some(Self::Fig3),
            _ => None,
        }
    }

    pub fn config(self) -> ExperimentConfig {
        match self {
            Self::Fig2 => ExperimentConfig {
                t_final: 20.0,
                ..Default::default()
            },
            Self::Fig3 => ExperimentConfig {
                py: Momentum(PI),
                t_final: 50.0,
                ..Default::default()
            },
        }
    }
}

/// A configuration problem, located by field and, for files, by line.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn field(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: Some(field.to_string()),
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

fn line_of_key(source: &str, key: &str) -> Option<usize> {
    let quoted = format!("\"{key}\"");
    source
        .lines()
        .position(|l| l.contains(&quoted))
        .map(|i| i + 1)
}

/// Resolved packet geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Centers {
    pub x0: f64,
    pub y0: f64,
}

impl Centers {
    pub fn separation(&self) -> f64 {
        self.y0 - self.x0
    }
}

impl ExperimentConfig {
    /// Parse and validate a JSON document. Errors carry the line of the
    /// offending key when it can be found.
    pub fn from_json(source: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(source).map_err(|e| ConfigError {
            field: None,
            line: Some(e.line()),
            message: e.to_string(),
        })?;
        config.validate().map_err(|mut e| {
            if let Some(f) = &e.field {
                e.line = line_of_key(source, f);
            }
            e
        })?;
        Ok(config)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let source = std::fs::read_to_string(path).map_err(|e| ConfigError {
            field: None,
            line: None,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::from_json(&source)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn centers(&self) -> Centers {
        match (self.x0, self.y0, self.d) {
            (Some(x0), Some(y0), _) => Centers { x0, y0 },
            (Some(x0), None, d) => Centers {
                x0,
                y0: x0 + d.unwrap_or(DEFAULT_SEPARATION),
            },
            (None, Some(y0), d) => Centers {
                x0: y0 - d.unwrap_or(DEFAULT_SEPARATION),
                y0,
            },
            (None, None, d) => {
                let d = d.unwrap_or(DEFAULT_SEPARATION);
                let x0 = ((self.n_sites as f64 - d) / 2.0).floor();
                Centers { x0, y0: x0 + d }
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::field(name, "must be finite"))
            }
        };
        for (name, v) in [
            ("J", self.hopping),
            ("U", self.onsite),
            ("gamma", self.gamma),
            ("w", self.w),
            ("px", self.px.0),
            ("py", self.py.0),
            ("t_final", self.t_final),
            ("dt_out", self.dt_out),
            ("accuracy", self.accuracy),
        ] {
            finite(name, v)?;
        }
        for (name, v) in [("x0", self.x0), ("y0", self.y0), ("d", self.d)] {
            if let Some(v) = v {
                finite(name, v)?;
            }
        }
        if self.n_sites < LatticeSpec::MIN_SITES {
            return Err(ConfigError::field(
                "n_sites",
                format!("need at least {} sites", LatticeSpec::MIN_SITES),
            ));
        }
        if self.hopping < 0.0 {
            return Err(ConfigError::field("J", "must be non-negative"));
        }
        if self.shape == ShapeName::Exponential && self.gamma <= 0.0 {
            return Err(ConfigError::field(
                "gamma",
                "must be positive for the exponential shape",
            ));
        }
        if self.w <= 0.0 {
            return Err(ConfigError::field("w", "must be positive"));
        }
        if self.t_final <= 0.0 {
            return Err(ConfigError::field("t_final", "must be positive"));
        }
        if self.dt_out <= 0.0 || self.dt_out > self.t_final {
            return Err(ConfigError::field("dt_out", "must lie in (0, t_final]"));
        }
        if !(self.accuracy > 0.0 && self.accuracy < 1.0) {
            return Err(ConfigError::field("accuracy", "must lie in (0, 1)"));
        }
        if let Some(t) = self
            .snapshot_times
            .iter()
            .flatten()
            .find(|t| !(t.is_finite() && **t >= 0.0 && **t <= self.t_final))
        {
            return Err(ConfigError::field(
                "snapshot_times",
                format!("{t} outside [0, t_final]"),
            ));
        }
        if let (Some(x0), Some(y0), Some(d)) = (self.x0, self.y0, self.d) {
            if ((y0 - x0) - d).abs() > 1e-12 {
                return Err(ConfigError::field(
                    "d",
                    format!("d = {d} but y0 - x0 = {}", y0 - x0),
                ));
            }
        }
        let c = self.centers();
        let n = self.n_sites as f64;
        for (name, v) in [("x0", c.x0), ("y0", c.y0)] {
            if !(0.0..n).contains(&v) {
                return Err(ConfigError::field(
                    name,
                    format!("centre {v} outside the lattice 0..{n}"),
                ));
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> LatticeSpec {
        let boundary = match self.boundary {
            BoundaryName::Open => Boundary::Open,
            BoundaryName::Periodic => Boundary::Periodic,
        };
        LatticeSpec::new(self.n_sites, boundary).expect("validated size")
    }

    pub fn params(&self) -> HubbardParams {
        let base = match self.shape {
            ShapeName::Exponential => {
                HubbardParams::exponential(self.hopping, self.onsite, self.gamma)
            }
            ShapeName::Onsite => HubbardParams::onsite_only(self.hopping, self.onsite),
        };
        base.with_statistics(self.statistics())
    }

    pub fn statistics(&self) -> Statistics {
        match self.statistics {
            StatisticsName::Distinguishable => Statistics::Distinguishable,
            StatisticsName::Bosonic => Statistics::Bosonic,
        }
    }

    pub fn packet(&self) -> GaussianPacket {
        let c = self.centers();
        GaussianPacket {
            center: (c.x0, c.y0),
            width: self.w,
            momenta: (self.px.0, self.py.0),
        }
    }

    pub fn snapshots(&self) -> Vec<f64> {
        match &self.snapshot_times {
            Some(t) => t.clone(),
            None => DEFAULT_SNAPSHOTS
                .iter()
                .copied()
                .filter(|&t| t <= self.t_final)
                .collect(),
        }
    }

    pub fn wants(&self, artifact: Artifact) -> bool {
        self.formats.contains(&artifact)
    }
}

/// Command-line overrides applied on top of a preset or file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n_sites: Option<usize>,
    pub t_final: Option<f64>,
    pub onsite: Option<f64>,
    pub gamma: Option<f64>,
    pub w: Option<f64>,
    pub d: Option<f64>,
    pub px: Option<Momentum>,
    pub py: Option<Momentum>,
    pub out: Option<PathBuf>,
}

impl Overrides {
    /// Apply and re-validate. A new size or separation recentres the packet
    /// unless the centres were given explicitly.
    pub fn apply(&self, mut config: ExperimentConfig) -> Result<ExperimentConfig, ConfigError> {
        if let Some(n) = self.n_sites {
            config.n_sites = n;
        }
        if let Some(t) = self.t_final {
            config.t_final = t;
        }
        if let Some(u) = self.onsite {
            config.onsite = u;
        }
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if let Some(w) = self.w {
            config.w = w;
        }
        if let Some(d) = self.d {
            config.d = Some(d);
            if config.x0.is_some() && config.y0.is_some() {
                config.y0 = None;
            }
        }
        if let Some(p) = self.px {
            config.px = p;
        }
        if let Some(p) = self.py {
            config.py = p;
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        config.validate()?;
        Ok(config)
    }
}
