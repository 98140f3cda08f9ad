//! Flat key-value scenario configuration.
//!
//! Grammar: one `key = value` pair per line; `#` starts a comment; blank
//! lines are ignored. Every key has a default, so an empty file is a valid
//! configuration. Recognized keys:
//!
//! | key                 | value                                   | default |
//! |---------------------|-----------------------------------------|---------|
//! | `regime`            | `uncorrelated` \| `partially-correlated` \| `fully-correlated` | `partially-correlated` |
//! | `alpha`             | coupling > 0                            | fine-structure constant |
//! | `omega_uv`          | UV cutoff Ω > 0                         | `1.0`   |
//! | `omega_ir`          | IR cutoff ϖ ∈ (0, Ω]                    | `0.01`  |
//! | `chi`               | kinetic scale χ = m₀c²/(ħϖ) ≥ 0         | `0.0`   |
//! | `mass_ratio`        | m/m₀ > 0                                | `1.0`   |
//! | `mass_cutoff`       | `exponential` \| `step`                 | `exponential` |
//! | `dressing.mode`     | `series` \| `log-approx`                | `series` |
//! | `packet.center`     | Gaussian center                         | `0.05`  |
//! | `packet.width`      | Gaussian width > 0                      | `0.025` |
//! | `packet.n`          | grid points ≥ 2                         | `2`     |
//! | `packet.span`       | half-width in widths > 0                | `1.0`   |
//! | `packet.momenta`    | comma list, explicit grid               | unset   |
//! | `packet.amplitudes` | comma list `a` or `a+bi`/`a-bi`         | unset   |
//! | `tau.min`           | first dimensionless time ≥ 0            | `0.01`  |
//! | `tau.max`           | last time ≥ tau.min                     | `100.0` |
//! | `tau.points`        | grid size ≥ 1                           | `25`    |
//! | `tau.scale`         | `log` \| `linear`                       | `log`   |
//! | `figure1.q`         | comma list of Q values                  | `0.1,0.5,1,5` |
//! | `sweep.q`           | comma list of Q values                  | `0.1,0.5,1,5` |
//! | `r0`                | wave-packet position (accepted, unused) | `0.0`   |
//!
//! `r0` exists because the mode phases `e^{±ik·r₀}` of the dressed state
//! cancel identically in every overlap the crate computes; the key is
//! accepted for completeness and has no effect.
//!
//! `packet.momenta`/`packet.amplitudes` select an explicit packet and
//! conflict with the Gaussian `packet.*` keys.

use crate::decoherence::{DressingMode, Regime};
use crate::density::WavePacket;
use crate::model::{MassCutoff, PhysicalParams, FINE_STRUCTURE_ALPHA};
use num_complex::Complex64;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected 'key = value', got '{text}'")]
    Syntax { line: usize, text: String },
    #[error("line {line}: duplicate key '{key}'")]
    Duplicate { line: usize, key: String },
    #[error("{key}: unknown key")]
    UnknownKey { key: String },
    #[error("{key}: {message}")]
    Value { key: String, message: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauScale {
    Log,
    Linear,
}

/// Packet description before construction.
#[derive(Debug, Clone, PartialEq)]
pub enum PacketSpec {
    Gaussian {
        center: f64,
        width: f64,
        n: usize,
        span: f64,
    },
    Explicit {
        momenta: Vec<f64>,
        amplitudes: Vec<Complex64>,
    },
}

/// Fully validated scenario description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub regime: Regime,
    pub params: PhysicalParams,
    pub dressing: DressingMode,
    pub packet: PacketSpec,
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    pub tau_scale: TauScale,
    pub figure1_q: Vec<f64>,
    pub sweep_q: Vec<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            regime: Regime::PartiallyCorrelated,
            params: PhysicalParams::new(FINE_STRUCTURE_ALPHA, 1.0, 0.01, 1.0, 0.0)
                .expect("default parameters are valid"),
            dressing: DressingMode::Series,
            packet: PacketSpec::Gaussian {
                center: 0.05,
                width: 0.025,
                n: 2,
                span: 1.0,
            },
            tau_min: 0.01,
            tau_max: 100.0,
            tau_points: 25,
            tau_scale: TauScale::Log,
            figure1_q: vec![0.1, 0.5, 1.0, 5.0],
            sweep_q: vec![0.1, 0.5, 1.0, 5.0],
        }
    }
}

impl ScenarioConfig {
    /// Parses configuration text plus `key=value` overrides (applied in
    /// order after the file) into a validated scenario.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self> {
        let mut raw = parse_raw(text)?;
        for item in overrides {
            let (key, value) = item.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: 0,
                text: item.clone(),
            })?;
            raw.insert(key.trim().to_string(), value.trim().to_string());
        }
        build(&raw)
    }

    /// The dimensionless time grid described by the `tau.*` keys.
    pub fn tau_grid(&self) -> Vec<f64> {
        if self.tau_points == 1 {
            return vec![self.tau_min];
        }
        let n = self.tau_points;
        (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                match self.tau_scale {
                    TauScale::Log => self.tau_min * (self.tau_max / self.tau_min).powf(s),
                    TauScale::Linear => self.tau_min + (self.tau_max - self.tau_min) * s,
                }
            })
            .collect()
    }

    /// Builds the configured wave packet.
    pub fn build_packet(&self) -> Result<WavePacket> {
        match &self.packet {
            PacketSpec::Gaussian {
                center,
                width,
                n,
                span,
            } => WavePacket::gaussian(*center, *width, *n, *span)
                .map_err(|e| ConfigError::Invalid(format!("packet: {e}"))),
            PacketSpec::Explicit {
                momenta,
                amplitudes,
            } => WavePacket::new(momenta.clone(), amplitudes.clone())
                .map_err(|e| ConfigError::Invalid(format!("packet: {e}"))),
        }
    }
}

/// Lexes the flat file into a key → value map, rejecting syntax errors and
/// duplicate keys. BTreeMap keeps all downstream iteration deterministic.
fn parse_raw(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw_line.split_once('#') {
            Some((before, _comment)) => before,
            None => raw_line,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            text: content.to_string(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                text: content.to_string(),
            });
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(ConfigError::Duplicate { line, key });
        }
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "regime",
    "alpha",
    "omega_uv",
    "omega_ir",
    "chi",
    "mass_ratio",
    "mass_cutoff",
    "dressing.mode",
    "packet.center",
    "packet.width",
    "packet.n",
    "packet.span",
    "packet.momenta",
    "packet.amplitudes",
    "tau.min",
    "tau.max",
    "tau.points",
    "tau.scale",
    "figure1.q",
    "sweep.q",
    "r0",
];

fn build(raw: &BTreeMap<String, String>) -> Result<ScenarioConfig> {
    for key in raw.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key: key.clone() });
        }
    }

    let defaults = ScenarioConfig::default();

    let regime = match raw.get("regime") {
        Some(v) => v.parse::<Regime>().map_err(|message| ConfigError::Value {
            key: "regime".into(),
            message,
        })?,
        None => defaults.regime,
    };

    let alpha = get_f64(raw, "alpha", FINE_STRUCTURE_ALPHA)?;
    let omega_uv = get_f64(raw, "omega_uv", 1.0)?;
    let omega_ir = get_f64(raw, "omega_ir", 0.01)?;
    let chi = get_f64(raw, "chi", 0.0)?;
    let mass_ratio = get_f64(raw, "mass_ratio", 1.0)?;
    let mass_cutoff = match raw.get("mass_cutoff").map(String::as_str) {
        None | Some("exponential") => MassCutoff::Exponential,
        Some("step") => MassCutoff::Step,
        Some(other) => {
            return Err(ConfigError::Value {
                key: "mass_cutoff".into(),
                message: format!("expected 'exponential' or 'step', got '{other}'"),
            })
        }
    };
    let params = PhysicalParams::new(alpha, omega_uv, omega_ir, mass_ratio, chi)
        .map_err(|e| ConfigError::Invalid(format!("params: {e}")))?
        .with_mass_cutoff(mass_cutoff);
    if regime == Regime::PartiallyCorrelated && !(omega_ir < omega_uv) {
        return Err(ConfigError::Invalid(format!(
            "omega_ir: partially correlated regime needs omega_ir < omega_uv, got {omega_ir} >= {omega_uv}"
        )));
    }

    let dressing = match raw.get("dressing.mode").map(String::as_str) {
        None | Some("series") => DressingMode::Series,
        Some("log-approx") => DressingMode::LogApprox,
        Some(other) => {
            return Err(ConfigError::Value {
                key: "dressing.mode".into(),
                message: format!("expected 'series' or 'log-approx', got '{other}'"),
            })
        }
    };

    let explicit_given = raw.contains_key("packet.momenta") || raw.contains_key("packet.amplitudes");
    let gaussian_given = ["packet.center", "packet.width", "packet.n", "packet.span"]
        .iter()
        .any(|k| raw.contains_key(*k));
    let packet = if explicit_given {
        if gaussian_given {
            return Err(ConfigError::Invalid(
                "packet.momenta: explicit packet conflicts with gaussian packet.* keys".into(),
            ));
        }
        let momenta = get_f64_list(raw, "packet.momenta")?.ok_or_else(|| ConfigError::Value {
            key: "packet.momenta".into(),
            message: "required together with packet.amplitudes".into(),
        })?;
        let amplitudes = match raw.get("packet.amplitudes") {
            Some(text) => parse_complex_list("packet.amplitudes", text)?,
            None => {
                return Err(ConfigError::Value {
                    key: "packet.amplitudes".into(),
                    message: "required together with packet.momenta".into(),
                })
            }
        };
        PacketSpec::Explicit {
            momenta,
            amplitudes,
        }
    } else {
        PacketSpec::Gaussian {
            center: get_f64(raw, "packet.center", 0.05)?,
            width: get_f64(raw, "packet.width", 0.025)?,
            n: get_usize(raw, "packet.n", 2)?,
            span: get_f64(raw, "packet.span", 1.0)?,
        }
    };

    let tau_min = get_f64(raw, "tau.min", defaults.tau_min)?;
    let tau_max = get_f64(raw, "tau.max", defaults.tau_max)?;
    let tau_points = get_usize(raw, "tau.points", defaults.tau_points)?;
    let tau_scale = match raw.get("tau.scale").map(String::as_str) {
        None | Some("log") => TauScale::Log,
        Some("linear") => TauScale::Linear,
        Some(other) => {
            return Err(ConfigError::Value {
                key: "tau.scale".into(),
                message: format!("expected 'log' or 'linear', got '{other}'"),
            })
        }
    };
    if !(tau_min >= 0.0) {
        return Err(ConfigError::Value {
            key: "tau.min".into(),
            message: format!("must be >= 0, got {tau_min}"),
        });
    }
    if !(tau_max >= tau_min) {
        return Err(ConfigError::Value {
            key: "tau.max".into(),
            message: format!("must be >= tau.min, got {tau_max} < {tau_min}"),
        });
    }
    if tau_points < 1 {
        return Err(ConfigError::Value {
            key: "tau.points".into(),
            message: "must be >= 1".into(),
        });
    }
    if tau_scale == TauScale::Log && tau_points > 1 && !(tau_min > 0.0) {
        return Err(ConfigError::Value {
            key: "tau.scale".into(),
            message: "log scale needs tau.min > 0".into(),
        });
    }

    let figure1_q = get_f64_list(raw, "figure1.q")?.unwrap_or(defaults.figure1_q);
    let sweep_q = get_f64_list(raw, "sweep.q")?.unwrap_or(defaults.sweep_q);
    for (key, list) in [("figure1.q", &figure1_q), ("sweep.q", &sweep_q)] {
        if list.is_empty() {
            return Err(ConfigError::Value {
                key: key.into(),
                message: "needs at least one value".into(),
            });
        }
        if list.iter().any(|q| !(q.is_finite() && *q >= 0.0)) {
            return Err(ConfigError::Value {
                key: key.into(),
                message: "Q values must be finite and >= 0".into(),
            });
        }
    }

    // Accepted and intentionally unused; see the module docs.
    let _r0 = get_f64(raw, "r0", 0.0)?;

    Ok(ScenarioConfig {
        regime,
        params,
        dressing,
        packet,
        tau_min,
        tau_max,
        tau_points,
        tau_scale,
        figure1_q,
        sweep_q,
    })
}

fn get_f64(raw: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match raw.get(key) {
        None => Ok(default),
        Some(text) => text.parse::<f64>().map_err(|_| ConfigError::Value {
            key: key.into(),
            message: format!("expected a number, got '{text}'"),
        }),
    }
}

fn get_usize(raw: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match raw.get(key) {
        None => Ok(default),
        Some(text) => text.parse::<usize>().map_err(|_| ConfigError::Value {
            key: key.into(),
            message: format!("expected a non-negative integer, got '{text}'"),
        }),
    }
}

fn get_f64_list(raw: &BTreeMap<String, String>, key: &str) -> Result<Option<Vec<f64>>> {
    match raw.get(key) {
        None => Ok(None),
        Some(text) => {
            let mut out = Vec::new();
            for piece in text.split(',') {
                let piece = piece.trim();
                out.push(piece.parse::<f64>().map_err(|_| ConfigError::Value {
                    key: key.into(),
                    message: format!("expected a number, got '{piece}'"),
                })?);
            }
            Ok(Some(out))
        }
    }
}

fn parse_complex_list(key: &str, text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|piece| parse_complex(piece.trim()).ok_or_else(|| ConfigError::Value {
            key: key.into(),
            message: format!("expected 'a', 'a+bi' or 'a-bi', got '{piece}'"),
        }))
        .collect()
}

/// Parses `a`, `a+bi` or `a-bi` (for example `0.5`, `1e-2-3.5i`).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some(stripped) = text.strip_suffix('i') {
        // Split at the sign that separates real and imaginary parts; skip
        // position 0 and signs that belong to an exponent.
        let bytes = stripped.as_bytes();
        for pos in (1..bytes.len()).rev() {
            let c = bytes[pos] as char;
            if (c == '+' || c == '-') && !matches!(bytes[pos - 1] as char, 'e' | 'E') {
                let re: f64 = stripped[..pos].parse().ok()?;
                let im_text = &stripped[pos..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().ok()?
                };
                return Some(Complex64::new(re, im));
            }
        }
        // Pure imaginary: `bi` or just `i`.
        let im: f64 = if stripped.is_empty() {
            1.0
        } else {
            stripped.parse().ok()?
        };
        return Some(Complex64::new(0.0, im));
    }
    text.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}
