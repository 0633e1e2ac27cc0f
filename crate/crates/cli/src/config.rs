//! Flat `key = value` run configuration.
//!
//! ```text
//! # Fig. 1 style run
//! scenario = bare
//! gamma0_over_lambda = 20
//! theta = 1.5707963267948966
//! ```
//!
//! Command-line flags are folded in as one more layer that overrides the file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use nmteleport_core::channels::{BathParams, MeasurementStrengths};
use nmteleport_core::scenarios::{ProtocolParams, Scenario, SweepAxis, DEFAULT_DT, DEFAULT_T_MAX};
use nmteleport_core::teleport::InputState;
use thiserror::Error;

pub const KEYS: [&str; 14] = [
    "scenario",
    "gamma0_over_lambda",
    "lambda",
    "theta",
    "phi",
    "p",
    "q",
    "q_prime",
    "t_max",
    "dt",
    "sweep_axis",
    "sweep_values",
    "output_path",
    "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

impl Format {
    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::JsonLines => "jsonl",
        }
    }
}

/// Where a value came from, for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag(name) => write!(f, "flag --{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: Origin, key: String },
    #[error("{origin}: key `{key}` given twice")]
    Duplicate { origin: Origin, key: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("{origin}: `{key}`: cannot parse `{value}` as a number")]
    Malformed {
        origin: Origin,
        key: &'static str,
        value: String,
    },
    #[error("{origin}: `{key}`: {message}")]
    Invalid {
        origin: Origin,
        key: &'static str,
        message: String,
    },
    #[error("sweep_axis and sweep_values must be given together")]
    SweepPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub gamma0_over_lambda: f64,
    pub lambda: f64,
    pub theta: f64,
    pub phi: f64,
    pub p: f64,
    pub q: f64,
    pub q_prime: f64,
    pub t_max: f64,
    pub dt: f64,
    pub sweep_axis: Option<SweepAxis>,
    pub sweep_values: Option<Vec<f64>>,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// Unvalidated key/value pairs with their origins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<&'static str, (String, Origin)>,
}

fn canonical_key(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|k| *k == key)
}

impl RawConfig {
    pub fn parse(source: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::default();
        for (idx, line) in source.lines().enumerate() {
            let origin = Origin::Line(idx + 1);
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(ConfigError::Syntax {
                    origin,
                    text: body.into(),
                });
            };
            let key = key.trim();
            let canon = canonical_key(key).ok_or_else(|| ConfigError::UnknownKey {
                origin: origin.clone(),
                key: key.into(),
            })?;
            if raw.entries.contains_key(canon) {
                return Err(ConfigError::Duplicate {
                    origin,
                    key: key.into(),
                });
            }
            raw.entries
                .insert(canon, (value.trim().to_string(), origin));
        }
        Ok(raw)
    }

    /// Sets `key` from a command-line flag, replacing any file value.
    pub fn set_flag(&mut self, key: &str, value: impl Into<String>) -> Result<(), ConfigError> {
        let flag = key.replace('_', "-");
        let canon = canonical_key(key).ok_or_else(|| ConfigError::UnknownKey {
            origin: Origin::Flag(flag.clone()),
            key: key.into(),
        })?;
        self.entries
            .insert(canon, (value.into(), Origin::Flag(flag)));
        Ok(())
    }

    fn get(&self, key: &'static str) -> Option<&(String, Origin)> {
        self.entries.get(key)
    }

    fn number(&self, key: &'static str, default: Option<f64>) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => default.ok_or(ConfigError::Missing(key)),
            Some((value, origin)) => parse_number(key, value, origin),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, ConfigError> {
        let scenario = match self.get("scenario") {
            None => return Err(ConfigError::Missing("scenario")),
            Some((v, origin)) => v.parse::<Scenario>().map_err(|e| ConfigError::Invalid {
                origin: origin.clone(),
                key: "scenario",
                message: format!("{e}; expected bare, wm_qmr or eam_qmr"),
            })?,
        };
        let sweep_axis = match self.get("sweep_axis") {
            None => None,
            Some((v, origin)) => {
                Some(v.parse::<SweepAxis>().map_err(|e| ConfigError::Invalid {
                    origin: origin.clone(),
                    key: "sweep_axis",
                    message: e.to_string(),
                })?)
            }
        };
        let sweep_values = match self.get("sweep_values") {
            None => None,
            Some((v, origin)) => Some(
                v.split(',')
                    .map(|item| parse_number("sweep_values", item.trim(), origin))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        if sweep_axis.is_some() != sweep_values.is_some() {
            return Err(ConfigError::SweepPair);
        }
        let format = match self.get("format") {
            None => Format::Csv,
            Some((v, origin)) => match v.as_str() {
                "csv" => Format::Csv,
                "jsonl" | "json-lines" => Format::JsonLines,
                _ => {
                    return Err(ConfigError::Invalid {
                        origin: origin.clone(),
                        key: "format",
                        message: format!("`{v}` is not csv or jsonl"),
                    })
                }
            },
        };
        let output_path = self
            .get("output_path")
            .map(|(v, _)| v.as_str())
            .filter(|v| *v != "-")
            .map(PathBuf::from);

        let cfg = RunConfig {
            scenario,
            gamma0_over_lambda: self.number("gamma0_over_lambda", None)?,
            lambda: self.number("lambda", Some(1.0))?,
            theta: self.number("theta", Some(std::f64::consts::FRAC_PI_2))?,
            phi: self.number("phi", Some(std::f64::consts::FRAC_PI_4))?,
            p: self.number("p", Some(0.0))?,
            q: self.number("q", Some(0.0))?,
            q_prime: self.number("q_prime", Some(0.0))?,
            t_max: self.number("t_max", Some(DEFAULT_T_MAX))?,
            dt: self.number("dt", Some(DEFAULT_DT))?,
            sweep_axis,
            sweep_values,
            output_path,
            format,
        };
        self.validate(&cfg)?;
        Ok(cfg)
    }

    /// Runs every value through the core constructors so range errors point
    /// at the offending key.
    fn validate(&self, cfg: &RunConfig) -> Result<(), ConfigError> {
        let invalid = |key: &'static str, e: nmteleport_core::Error| ConfigError::Invalid {
            origin: self
                .get(key)
                .map(|(_, o)| o.clone())
                .unwrap_or(Origin::Flag(key.replace('_', "-"))),
            key,
            message: e.to_string(),
        };
        BathParams::new(cfg.gamma0_over_lambda, 1.0)
            .map_err(|e| invalid("gamma0_over_lambda", e))?;
        BathParams::new(1.0, cfg.lambda).map_err(|e| invalid("lambda", e))?;
        InputState::new(cfg.theta, std::f64::consts::PI).map_err(|e| invalid("theta", e))?;
        InputState::new(0.0, cfg.phi).map_err(|e| invalid("phi", e))?;
        for (key, v) in [("p", cfg.p), ("q", cfg.q), ("q_prime", cfg.q_prime)] {
            MeasurementStrengths::new(v, 0.0, 0.0).map_err(|e| invalid(key, e))?;
        }
        let params = cfg.protocol_params().map_err(|e| invalid("dt", e))?;
        if let (Some(axis), Some(values)) = (cfg.sweep_axis, &cfg.sweep_values) {
            nmteleport_core::scenarios::sweep_points(&params, axis, values)
                .map_err(|e| invalid("sweep_values", e))?;
        }
        Ok(())
    }
}

fn parse_number(key: &'static str, value: &str, origin: &Origin) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ConfigError::Malformed {
            origin: origin.clone(),
            key,
            value: value.into(),
        }),
    }
}

/// Parses a configuration document.
pub fn parse_config(source: &str) -> Result<RunConfig, ConfigError> {
    RawConfig::parse(source)?.resolve()
}

impl RunConfig {
    pub fn protocol_params(&self) -> Result<ProtocolParams, nmteleport_core::Error> {
        ProtocolParams::new(
            self.scenario,
            BathParams::new(self.gamma0_over_lambda, self.lambda)?,
            InputState::new(self.theta, self.phi)?,
            MeasurementStrengths::new(self.p, self.q, self.q_prime)?,
            self.t_max,
            self.dt,
        )
    }

    /// Serializes back to the `key = value` form; floats use the shortest
    /// representation that parses back to the same value.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("scenario", self.scenario.to_string());
        line("gamma0_over_lambda", self.gamma0_over_lambda.to_string());
        line("lambda", self.lambda.to_string());
        line("theta", self.theta.to_string());
        line("phi", self.phi.to_string());
        line("p", self.p.to_string());
        line("q", self.q.to_string());
        line("q_prime", self.q_prime.to_string());
        line("t_max", self.t_max.to_string());
        line("dt", self.dt.to_string());
        if let Some(axis) = self.sweep_axis {
            line("sweep_axis", axis.to_string());
        }
        if let Some(values) = &self.sweep_values {
            let joined: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            line("sweep_values", joined.join(","));
        }
        if let Some(path) = &self.output_path {
            line("output_path", path.display().to_string());
        }
        line("format", self.format.as_str().to_string());
        out
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;

    #[test]
    fn minimal_bare_config() {
        let cfg = parse_config(
            "scenario = bare\ngamma0_over_lambda = 20\ntheta = 1.5707963\nphi = 0.7853981",
        )
        .unwrap();
        assert_eq!(cfg.scenario, Scenario::Bare);
        assert_eq!(cfg.gamma0_over_lambda, 20.0);
        assert_eq!(cfg.theta, 1.5707963);
        assert_eq!(cfg.phi, 0.7853981);
        assert_eq!(cfg.t_max, 3.0);
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.format, Format::Csv);
        assert!(cfg.output_path.is_none());
    }

    #[test]
    fn comments_and_blank_lines() {
        let cfg =
            parse_config("# header\n\nscenario = eam_qmr # trailing\n  gamma0_over_lambda=5\n")
                .unwrap();
        assert_eq!(cfg.scenario, Scenario::EamQmr);
        assert_eq!(cfg.gamma0_over_lambda, 5.0);
    }

    #[test]
    fn missing_scenario_names_the_key() {
        let err = parse_config("gamma0_over_lambda = 20").unwrap_err();
        assert_eq!(err, ConfigError::Missing("scenario"));
        assert!(err.to_string().contains("scenario"));
    }

    #[test]
    fn range_error_cites_interval() {
        let err = parse_config("scenario = wm_qmr\ngamma0_over_lambda = 20\np = 1.5").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3") && msg.contains("[0, 1]"), "{msg}");
    }

    #[test]
    fn rejects_unknown_malformed_and_duplicates() {
        let err = parse_config("scenario = bare\ngamma = 2").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::UnknownKey {
                origin: Origin::Line(2),
                ..
            }
        ));
        let err = parse_config("scenario = bare\ngamma0_over_lambda = 2x").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Malformed {
                key: "gamma0_over_lambda",
                ..
            }
        ));
        let err = parse_config("scenario = bare\nscenario = bare").unwrap_err();
        assert!(matches!(err, ConfigError::Duplicate { .. }));
        let err = parse_config("scenario bare").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { .. }));
        let err =
            parse_config("scenario = bare\ngamma0_over_lambda = 20\nsweep_axis = p").unwrap_err();
        assert_eq!(err, ConfigError::SweepPair);
        let err = parse_config("scenario = teleport\ngamma0_over_lambda = 20").unwrap_err();
        assert!(matches!(
            err,
            ConfigError::Invalid {
                key: "scenario",
                ..
            }
        ));
        let err = parse_config("scenario = bare\ngamma0_over_lambda = 20\ndt = 0").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid { key: "dt", .. }));
        let err = parse_config(
            "scenario = bare\ngamma0_over_lambda = 20\nsweep_axis = p\nsweep_values = 0.1,7",
        )
        .unwrap_err();
        assert!(err.to_string().contains("sweep_values"), "{err}");
    }

    #[test]
    fn flags_override_file() {
        let mut raw = RawConfig::parse("scenario = bare\ngamma0_over_lambda = 20").unwrap();
        raw.set_flag("gamma0_over_lambda", "50").unwrap();
        raw.set_flag("p", "2").unwrap();
        let err = raw.resolve().unwrap_err();
        assert!(err.to_string().contains("flag --p"), "{err}");
        raw.set_flag("p", "0.2").unwrap();
        let cfg = raw.resolve().unwrap();
        assert_eq!(cfg.gamma0_over_lambda, 50.0);
        assert_eq!(cfg.p, 0.2);
    }

    use proptest::prelude::*;

    fn arb_config() -> impl Strategy<Value = RunConfig> {
        (
            prop::sample::select(Scenario::ALL.to_vec()),
            0.01f64..500.0,
            0.0f64..=std::f64::consts::PI,
            0.0f64..6.28,
            (0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..=1.0),
            (1e-4f64..0.1, 1.0f64..20.0),
            proptest::option::of((
                prop::sample::select(vec![SweepAxis::P, SweepAxis::Q, SweepAxis::QPrime]),
                prop::collection::vec(0.0f64..=1.0, 1..5),
            )),
            proptest::option::of("[a-z]{1,8}\\.csv"),
            any::<bool>(),
        )
            .prop_map(
                |(scenario, g, theta, phi, (p, q, qp), (dt, steps), sweep, out, jsonl)| RunConfig {
                    scenario,
                    gamma0_over_lambda: g,
                    lambda: 1.0,
                    theta,
                    phi,
                    p,
                    q,
                    q_prime: qp,
                    t_max: dt * steps,
                    dt,
                    sweep_axis: sweep.as_ref().map(|s| s.0),
                    sweep_values: sweep.map(|s| s.1),
                    output_path: out.map(PathBuf::from),
                    format: if jsonl {
                        Format::JsonLines
                    } else {
                        Format::Csv
                    },
                },
            )
    }

    proptest! {
        #[test]
        fn render_round_trips(cfg in arb_config()) {
            prop_assert_eq!(parse_config(&cfg.render()).unwrap(), cfg);
        }
    }
}
