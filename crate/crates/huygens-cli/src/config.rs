//! Run configuration: flat key-value text with dotted sections.
//!
//! ```text
//! cosmology = lambda
//! alice.omega = 10
//! separation.mode = comoving
//! separation.value = 0.5
//! ```
//!
//! Keys are fixed, values are plain numbers or identifiers, `#` starts a
//! comment. Parsing and canonical serialization round-trip exactly.

use huygens_core::{
    CausalityError, CommPair, CosmologyModel, DetectorConfig, Separation, REFERENCE_ANCHOR,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self { line: Some(line), message: message.into() }
    }

    pub fn global(message: impl Into<String>) -> Self {
        Self { line: None, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CosmologyKind {
    Matter,
    Lambda,
}

impl CosmologyKind {
    fn as_str(self) -> &'static str {
        match self {
            CosmologyKind::Matter => "matter",
            CosmologyKind::Lambda => "lambda",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationMode {
    Comoving,
    Proper,
}

impl SeparationMode {
    fn as_str(self) -> &'static str {
        match self {
            SeparationMode::Comoving => "comoving",
            SeparationMode::Proper => "proper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    BobSwitchOn,
    Omega,
    Delta,
    SqrtLambda,
    ComovingR,
    ProperP,
}

impl SweepVariable {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepVariable::BobSwitchOn => "T_iB",
            SweepVariable::Omega => "Omega",
            SweepVariable::Delta => "Delta",
            SweepVariable::SqrtLambda => "sqrt_lambda",
            SweepVariable::ComovingR => "R",
            SweepVariable::ProperP => "P",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "T_iB" => SweepVariable::BobSwitchOn,
            "Omega" => SweepVariable::Omega,
            "Delta" => SweepVariable::Delta,
            "sqrt_lambda" => SweepVariable::SqrtLambda,
            "R" => SweepVariable::ComovingR,
            "P" => SweepVariable::ProperP,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorBlock {
    pub omega: f64,
    pub coupling: f64,
    pub switch_on: f64,
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: SweepScale,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub cosmology: CosmologyKind,
    pub anchor: f64,
    /// Expansion rate of the Lambda model; defaults to the normalized
    /// value 2/(3·anchor) when absent.
    pub sqrt_lambda: Option<f64>,
    pub alice: DetectorBlock,
    pub bob: DetectorBlock,
    pub separation_mode: SeparationMode,
    pub separation_value: f64,
    pub sweep: SweepSpec,
    pub output_path: Option<String>,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    /// Reference-figure defaults: normalized models anchored at t = 2/3,
    /// gap 10 detectors switched on for Δ = 1/100, receiver at t = 2,
    /// comoving separation 1/2.
    fn default() -> Self {
        Self {
            cosmology: CosmologyKind::Matter,
            anchor: REFERENCE_ANCHOR,
            sqrt_lambda: None,
            alice: DetectorBlock { omega: 10.0, coupling: 1.0, switch_on: REFERENCE_ANCHOR, duration: 0.01 },
            bob: DetectorBlock { omega: 10.0, coupling: 1.0, switch_on: 2.0, duration: 0.01 },
            separation_mode: SeparationMode::Comoving,
            separation_value: 0.5,
            sweep: SweepSpec {
                variable: SweepVariable::BobSwitchOn,
                min: 1.4,
                max: 10.0,
                points: 200,
                scale: SweepScale::Linear,
            },
            output_path: None,
            output_format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = RunConfig::default();
        let mut saw_sqrt_lambda = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line_no, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(ConfigError::at(line_no, format!("empty value for `{key}`")));
            }

            let num = || -> Result<f64, ConfigError> {
                value
                    .parse::<f64>()
                    .map_err(|_| ConfigError::at(line_no, format!("`{key}` expects a number, got `{value}`")))
            };

            match key {
                "cosmology" => {
                    config.cosmology = match value {
                        "matter" => CosmologyKind::Matter,
                        "lambda" => CosmologyKind::Lambda,
                        _ => return Err(ConfigError::at(line_no, format!("unknown cosmology `{value}`"))),
                    }
                }
                "anchor" => config.anchor = num()?,
                "sqrt_lambda" => {
                    config.sqrt_lambda = Some(num()?);
                    saw_sqrt_lambda = true;
                }
                "alice.omega" => config.alice.omega = num()?,
                "alice.coupling" => config.alice.coupling = num()?,
                "alice.switch_on" => config.alice.switch_on = num()?,
                "alice.duration" => config.alice.duration = num()?,
                "bob.omega" => config.bob.omega = num()?,
                "bob.coupling" => config.bob.coupling = num()?,
                "bob.switch_on" => config.bob.switch_on = num()?,
                "bob.duration" => config.bob.duration = num()?,
                "separation.mode" => {
                    config.separation_mode = match value {
                        "comoving" => SeparationMode::Comoving,
                        "proper" => SeparationMode::Proper,
                        _ => return Err(ConfigError::at(line_no, format!("unknown separation mode `{value}`"))),
                    }
                }
                "separation.value" => config.separation_value = num()?,
                "sweep.variable" => {
                    config.sweep.variable = SweepVariable::parse(value).ok_or_else(|| {
                        ConfigError::at(
                            line_no,
                            format!("unknown sweep variable `{value}` (one of T_iB, Omega, Delta, sqrt_lambda, R, P)"),
                        )
                    })?
                }
                "sweep.min" => config.sweep.min = num()?,
                "sweep.max" => config.sweep.max = num()?,
                "sweep.points" => {
                    config.sweep.points = value.parse::<usize>().map_err(|_| {
                        ConfigError::at(line_no, format!("`sweep.points` expects a positive integer, got `{value}`"))
                    })?
                }
                "sweep.scale" => {
                    config.sweep.scale = match value {
                        "lin" => SweepScale::Linear,
                        "log" => SweepScale::Log,
                        _ => return Err(ConfigError::at(line_no, format!("unknown sweep scale `{value}`"))),
                    }
                }
                "output.path" => config.output_path = Some(value.to_string()),
                "output.format" => {
                    config.output_format = match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        _ => return Err(ConfigError::at(line_no, format!("unknown output format `{value}`"))),
                    }
                }
                _ => return Err(ConfigError::at(line_no, format!("unknown key `{key}`"))),
            }
        }
        if !saw_sqrt_lambda {
            config.sqrt_lambda = None;
        }
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if !(self.anchor > 0.0) {
            return Err(ConfigError::global(format!("anchor must be positive, got {}", self.anchor)));
        }
        if let Some(sl) = self.sqrt_lambda {
            if !(sl > 0.0) {
                return Err(ConfigError::global(format!("sqrt_lambda must be positive, got {sl}")));
            }
        }
        for (name, det) in [("alice", &self.alice), ("bob", &self.bob)] {
            if !(det.duration > 0.0) {
                return Err(ConfigError::global(format!("{name}.duration must be positive")));
            }
            if !(det.omega >= 0.0) {
                return Err(ConfigError::global(format!("{name}.omega must be nonnegative")));
            }
        }
        if !(self.separation_value >= 0.0) {
            return Err(ConfigError::global("separation.value must be nonnegative".to_string()));
        }
        if self.sweep.points == 0 {
            return Err(ConfigError::global("sweep.points must be at least 1".to_string()));
        }
        if self.sweep.scale == SweepScale::Log && !(self.sweep.min > 0.0) {
            return Err(ConfigError::global("log sweeps need sweep.min > 0".to_string()));
        }
        if self.sweep.variable == SweepVariable::SqrtLambda && self.cosmology == CosmologyKind::Matter {
            return Err(ConfigError::global(
                "sweeping sqrt_lambda requires cosmology = lambda".to_string(),
            ));
        }
        Ok(())
    }

    /// Canonical text form: every key, fixed order, shortest round-trip
    /// float formatting. parse(canonical(c)) == c.
    pub fn to_canonical_string(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("cosmology = {}\n", self.cosmology.as_str()));
        s.push_str(&format!("anchor = {}\n", self.anchor));
        if let Some(sl) = self.sqrt_lambda {
            s.push_str(&format!("sqrt_lambda = {sl}\n"));
        }
        for (name, det) in [("alice", &self.alice), ("bob", &self.bob)] {
            s.push_str(&format!("{name}.omega = {}\n", det.omega));
            s.push_str(&format!("{name}.coupling = {}\n", det.coupling));
            s.push_str(&format!("{name}.switch_on = {}\n", det.switch_on));
            s.push_str(&format!("{name}.duration = {}\n", det.duration));
        }
        s.push_str(&format!("separation.mode = {}\n", self.separation_mode.as_str()));
        s.push_str(&format!("separation.value = {}\n", self.separation_value));
        s.push_str(&format!("sweep.variable = {}\n", self.sweep.variable.as_str()));
        s.push_str(&format!("sweep.min = {}\n", self.sweep.min));
        s.push_str(&format!("sweep.max = {}\n", self.sweep.max));
        s.push_str(&format!("sweep.points = {}\n", self.sweep.points));
        s.push_str(&format!(
            "sweep.scale = {}\n",
            match self.sweep.scale {
                SweepScale::Linear => "lin",
                SweepScale::Log => "log",
            }
        ));
        if let Some(path) = &self.output_path {
            s.push_str(&format!("output.path = {path}\n"));
        }
        s.push_str(&format!(
            "output.format = {}\n",
            match self.output_format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
        ));
        s
    }

    /// The configured cosmology, built from the anchor normalization
    /// (with the optional sqrt_lambda override for the Lambda model).
    pub fn model(&self) -> Result<CosmologyModel, ConfigError> {
        let to_cfg = |e: huygens_core::CosmologyError| ConfigError::global(e.to_string());
        match self.cosmology {
            CosmologyKind::Matter => {
                CosmologyModel::matter(1.0 / (9.0 * self.anchor * self.anchor)).map_err(to_cfg)
            }
            CosmologyKind::Lambda => {
                let sl = self.sqrt_lambda.unwrap_or(2.0 / (3.0 * self.anchor));
                CosmologyModel::lambda((-sl * self.anchor).exp(), sl).map_err(to_cfg)
            }
        }
    }

    pub fn pair(&self) -> Result<CommPair, CausalityError> {
        let alice = DetectorConfig::new(
            self.alice.omega,
            self.alice.coupling,
            self.alice.switch_on,
            self.alice.duration,
        )?;
        let bob = DetectorConfig::new(self.bob.omega, self.bob.coupling, self.bob.switch_on, self.bob.duration)?;
        let separation = match self.separation_mode {
            SeparationMode::Comoving => Separation::Comoving { r: self.separation_value },
            SeparationMode::Proper => Separation::Proper { p: self.separation_value },
        };
        CommPair::new(alice, bob, separation)
    }

    /// Sweep grid values, linearly or logarithmically spaced.
    pub fn sweep_values(&self) -> Vec<f64> {
        let n = self.sweep.points;
        if n == 1 {
            return vec![self.sweep.min];
        }
        (0..n)
            .map(|i| {
                let f = (i as f64) / ((n - 1) as f64);
                match self.sweep.scale {
                    SweepScale::Linear => self.sweep.min + (self.sweep.max - self.sweep.min) * f,
                    SweepScale::Log => {
                        (self.sweep.min.ln() + (self.sweep.max.ln() - self.sweep.min.ln()) * f).exp()
                    }
                }
            })
            .collect()
    }

    /// A copy of this configuration with the sweep variable set to `value`.
    pub fn with_sweep_value(&self, value: f64) -> RunConfig {
        let mut c = self.clone();
        match self.sweep.variable {
            SweepVariable::BobSwitchOn => c.bob.switch_on = value,
            SweepVariable::Omega => {
                c.alice.omega = value;
                c.bob.omega = value;
            }
            SweepVariable::Delta => {
                c.alice.duration = value;
                c.bob.duration = value;
            }
            SweepVariable::SqrtLambda => c.sqrt_lambda = Some(value),
            SweepVariable::ComovingR => {
                c.separation_mode = SeparationMode::Comoving;
                c.separation_value = value;
            }
            SweepVariable::ProperP => {
                c.separation_mode = SeparationMode::Proper;
                c.separation_value = value;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        let text = c.to_canonical_string();
        let reparsed = RunConfig::parse(&text).unwrap();
        assert_eq!(c, reparsed);
        assert_eq!(text, reparsed.to_canonical_string());
    }

    #[test]
    fn parses_overrides_and_comments() {
        let text = "\
# reference lambda run
cosmology = lambda
sqrt_lambda = 2.0
bob.switch_on = 3.5   # later receiver
separation.mode = proper
separation.value = 0.25
sweep.variable = Omega
sweep.scale = log
sweep.min = 0.1
";
        let c = RunConfig::parse(text).unwrap();
        assert_eq!(c.cosmology, CosmologyKind::Lambda);
        assert_eq!(c.sqrt_lambda, Some(2.0));
        assert_eq!(c.bob.switch_on, 3.5);
        assert_eq!(c.separation_mode, SeparationMode::Proper);
        assert_eq!(c.sweep.variable, SweepVariable::Omega);
        assert_eq!(c.sweep.scale, SweepScale::Log);
        // round trip preserves everything
        let reparsed = RunConfig::parse(&c.to_canonical_string()).unwrap();
        assert_eq!(c, reparsed);
    }

    #[test]
    fn reports_line_numbers() {
        let err = RunConfig::parse("cosmology = matter\nalice.omegaa = 3\n").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("alice.omegaa"));
        let err = RunConfig::parse("bob.omega = fast\n").unwrap_err();
        assert_eq!(err.line, Some(1));
    }

    #[test]
    fn validation_failures() {
        assert!(RunConfig::parse("anchor = -1\n").is_err());
        assert!(RunConfig::parse("sweep.points = 0\n").is_err());
        assert!(RunConfig::parse("sweep.scale = log\nsweep.min = -2\n").is_err());
        assert!(RunConfig::parse("sweep.variable = sqrt_lambda\n").is_err());
        assert!(RunConfig::parse("cosmology = lambda\nsweep.variable = sqrt_lambda\n").is_ok());
    }

    #[test]
    fn sweep_grids() {
        let mut c = RunConfig::default();
        c.sweep.min = 1.0;
        c.sweep.max = 4.0;
        c.sweep.points = 4;
        assert_eq!(c.sweep_values(), vec![1.0, 2.0, 3.0, 4.0]);
        c.sweep.scale = SweepScale::Log;
        c.sweep.max = 100.0;
        c.sweep.points = 3;
        let vals = c.sweep_values();
        assert!((vals[1] - 10.0).abs() < 1e-12);
        c.sweep.points = 1;
        assert_eq!(c.sweep_values(), vec![1.0]);
    }

    #[test]
    fn lambda_model_uses_override() {
        let mut c = RunConfig::default();
        c.cosmology = CosmologyKind::Lambda;
        c.sqrt_lambda = Some(2.0);
        match c.model().unwrap() {
            CosmologyModel::Lambda { sqrt_lambda, kappa2 } => {
                assert_eq!(sqrt_lambda, 2.0);
                assert!((kappa2 - (-2.0 * REFERENCE_ANCHOR).exp()).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
    }
}
