//! Scenario files, named presets, evaluation reports, sweeps and the
//! Table-3 style summary.
//!
//! A scenario is a TOML document with a strict schema (unknown keys are
//! rejected). See `scenarios/` in the repository for annotated
//! samples; [`presets`] lists the built-in names accepted wherever a path is.

mod output;
pub mod presets;
mod report;
mod sweep;
mod table3;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::amp_chain::{AmpStage, ChainConfig, IdlerNoiseForm};
use crate::physics::{db_to_linear, thermal_occupancy, Atmosphere, RadarLink};
use crate::qtms::{EntangledSource, NoiseFrequency};

pub use output::{format_number, precision, report_to_json, table_to_csv, table_to_json, PRECISION_ENV};
pub use report::{evaluate, Derived, ScenarioReport};
pub use sweep::{run_sweep, with_parameters, Grid, SweepAxis, SweepSpec, Table};
pub use table3::{table3_report, Table3Row, TABLE3_PUBLISHED};

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    Io { path: String, message: String },
    Parse { message: String, line: usize, column: usize },
    Validation { field: String, message: String },
    Config(String),
    Model(crate::Error),
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Io { path, message } => write!(f, "cannot read {path}: {message}"),
            ScenarioError::Parse { message, line, column } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            ScenarioError::Validation { field, message } => write!(f, "invalid `{field}`: {message}"),
            ScenarioError::Config(m) => write!(f, "configuration error: {m}"),
            ScenarioError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

impl From<crate::Error> for ScenarioError {
    fn from(e: crate::Error) -> Self {
        ScenarioError::Model(e)
    }
}

pub type ScenarioResult<T> = std::result::Result<T, ScenarioError>;

fn invalid(field: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Direct,
    SinglePhoton,
    ClassicalNoise,
    Qtms,
    Ci,
}

impl ModelKind {
    pub fn is_direct(self) -> bool {
        matches!(self, ModelKind::Direct | ModelKind::SinglePhoton)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub link: LinkConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transmitter: Option<TransmitterConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceConfig>,
    pub detection: DetectionConfig,
    pub environment: EnvironmentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    /// Radar cross-section (m²).
    pub rcs: f64,
    pub antenna_gain_db: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_aperture: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical_aperture: Option<f64>,
    /// Circular aperture radius; `A = π r²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aperture_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aperture_efficiency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_db_per_km: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_db_per_m: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransmitterConfig {
    /// Transmitted power (W).
    pub power: f64,
    /// Carrier frequency (Hz).
    pub frequency: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub signal_freq: f64,
    pub idler_freq: f64,
    pub bandwidth: f64,
    pub photons_per_mode: f64,
    pub transmit_gain_db: f64,
    /// Source correlation, `classical-noise` model only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionConfig {
    pub integration_time: f64,
    pub detection_bandwidth: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_fa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_th_db: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    /// Background photons per mode, used verbatim instead of `temperature`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_photons: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_frequency: Option<NoiseFrequency>,
}

/// Amplifier chain around the source. The transmitter stage gain on both
/// arms is `source.transmit_gain_db`; the channel's environmental photons
/// are the scenario's background occupation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainSpec {
    pub tx_noise_photons: f64,
    pub rx_gain_db: f64,
    pub rx_noise_photons: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idler_noise_form: Option<IdlerNoiseForm>,
}

/// Range at which range-dependent quantities are reported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub range: f64,
}

fn positive(field: &str, v: f64) -> ScenarioResult<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and > 0 (got {v})")))
    }
}

fn non_negative(field: &str, v: f64) -> ScenarioResult<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and >= 0 (got {v})")))
    }
}

fn finite(field: &str, v: f64) -> ScenarioResult<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

impl LinkConfig {
    pub fn validate(&self) -> ScenarioResult<()> {
        positive("link.rcs", self.rcs)?;
        finite("link.antenna_gain_db", self.antenna_gain_db)?;
        match (self.effective_aperture, self.physical_aperture, self.aperture_radius, self.aperture_efficiency) {
            (Some(a), None, None, None) => positive("link.effective_aperture", a)?,
            (None, Some(a), None, Some(e)) => {
                positive("link.physical_aperture", a)?;
                positive("link.aperture_efficiency", e)?;
            }
            (None, None, Some(r), Some(e)) => {
                positive("link.aperture_radius", r)?;
                positive("link.aperture_efficiency", e)?;
            }
            _ => {
                return Err(invalid(
                    "link.effective_aperture",
                    "give exactly one of effective_aperture, physical_aperture + aperture_efficiency, \
                     or aperture_radius + aperture_efficiency",
                ))
            }
        }
        match (self.gamma_db_per_km, self.gamma_db_per_m) {
            (Some(_), Some(_)) => Err(invalid("link.gamma_db_per_km", "gamma_db_per_km and gamma_db_per_m are mutually exclusive")),
            (Some(g), None) => non_negative("link.gamma_db_per_km", g),
            (None, Some(g)) => non_negative("link.gamma_db_per_m", g),
            (None, None) => Ok(()),
        }
    }

    pub fn effective_aperture(&self) -> f64 {
        match (self.effective_aperture, self.physical_aperture, self.aperture_radius, self.aperture_efficiency) {
            (Some(a), ..) => a,
            (None, Some(a), _, Some(e)) => a * e,
            (None, None, Some(r), Some(e)) => std::f64::consts::PI * r * r * e,
            _ => f64::NAN,
        }
    }

    pub fn atmosphere(&self) -> crate::Result<Atmosphere> {
        match (self.gamma_db_per_km, self.gamma_db_per_m) {
            (Some(g), _) => Atmosphere::from_db_per_km(g),
            (None, Some(g)) => Atmosphere::from_db_per_m(g),
            (None, None) => Ok(Atmosphere::VACUUM),
        }
    }

    pub fn build(&self) -> crate::Result<RadarLink> {
        RadarLink::new(self.rcs, db_to_linear(self.antenna_gain_db), self.effective_aperture(), self.atmosphere()?)
    }
}

impl Scenario {
    /// Checks every schema rule, naming the offending field.
    pub fn validate(&self) -> ScenarioResult<()> {
        self.link.validate()?;
        let d = &self.detection;
        positive("detection.integration_time", d.integration_time)?;
        positive("detection.detection_bandwidth", d.detection_bandwidth)?;
        if d.integration_time * d.detection_bandwidth < 1.0 {
            return Err(invalid(
                "detection.integration_time",
                "integration_time * detection_bandwidth must be >= 1",
            ));
        }
        match (d.p_fa, d.snr_th_db) {
            (Some(_), Some(_)) => {
                return Err(invalid("detection.p_fa", "p_fa and snr_th_db are mutually exclusive"));
            }
            (Some(p), None) => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(invalid("detection.p_fa", format!("must lie in (0, 1) (got {p})")));
                }
                if self.model.is_direct() {
                    return Err(invalid("detection.p_fa", "direct-detection models take snr_th_db"));
                }
            }
            (None, Some(s)) => {
                finite("detection.snr_th_db", s)?;
                if !self.model.is_direct() {
                    return Err(invalid("detection.snr_th_db", "correlation models take p_fa"));
                }
            }
            (None, None) => {
                if self.model != ModelKind::SinglePhoton {
                    let field = if self.model.is_direct() { "detection.snr_th_db" } else { "detection.p_fa" };
                    return Err(invalid(field, "missing detection threshold"));
                }
            }
        }

        let e = &self.environment;
        match (e.temperature, e.noise_photons) {
            (Some(t), None) => positive("environment.temperature", t)?,
            (None, Some(n)) => non_negative("environment.noise_photons", n)?,
            (Some(_), Some(_)) => {
                return Err(invalid("environment.temperature", "temperature and noise_photons are mutually exclusive"))
            }
            (None, None) => return Err(invalid("environment.temperature", "give temperature or noise_photons")),
        }

        if self.model.is_direct() {
            let t = self
                .transmitter
                .as_ref()
                .ok_or_else(|| invalid("transmitter", "required by direct-detection models"))?;
            positive("transmitter.power", t.power)?;
            positive("transmitter.frequency", t.frequency)?;
            if self.source.is_some() {
                return Err(invalid("source", "not used by direct-detection models"));
            }
            if self.chain.is_some() {
                return Err(invalid("chain", "not used by direct-detection models"));
            }
            if e.noise_frequency.is_some() {
                return Err(invalid("environment.noise_frequency", "not used by direct-detection models"));
            }
            if self.environment.noise_photons == Some(0.0) {
                return Err(invalid("environment.noise_photons", "must be > 0 for direct detection"));
            }
        } else {
            if self.transmitter.is_some() {
                return Err(invalid("transmitter", "correlation models take a [source] section"));
            }
            let s = self
                .source
                .as_ref()
                .ok_or_else(|| invalid("source", "required by correlation models"))?;
            positive("source.signal_freq", s.signal_freq)?;
            positive("source.idler_freq", s.idler_freq)?;
            positive("source.bandwidth", s.bandwidth)?;
            non_negative("source.photons_per_mode", s.photons_per_mode)?;
            non_negative("source.transmit_gain_db", s.transmit_gain_db)?;
            match (self.model, s.rho0) {
                (ModelKind::ClassicalNoise, Some(r)) => {
                    if !(r > 0.0 && r <= 1.0) {
                        return Err(invalid("source.rho0", format!("must lie in (0, 1] (got {r})")));
                    }
                    if !(s.photons_per_mode > 0.0) {
                        return Err(invalid("source.photons_per_mode", "must be > 0 for a classical noise radar"));
                    }
                }
                (ModelKind::ClassicalNoise, None) => return Err(invalid("source.rho0", "required by classical-noise")),
                (_, Some(_)) => return Err(invalid("source.rho0", "only used by classical-noise")),
                (_, None) => {}
            }
            if let Some(c) = &self.chain {
                non_negative("chain.tx_noise_photons", c.tx_noise_photons)?;
                non_negative("chain.rx_gain_db", c.rx_gain_db)?;
                non_negative("chain.rx_noise_photons", c.rx_noise_photons)?;
            }
            if e.noise_photons == Some(0.0) {
                return Err(invalid("environment.noise_photons", "must be > 0"));
            }
        }
        if let Some(p) = &self.probe {
            positive("probe.range", p.range)?;
        }
        Ok(())
    }

    /// Background photons per mode at `freq` (temperature or override).
    pub fn noise_photons_at(&self, freq: f64) -> crate::Result<f64> {
        match (self.environment.noise_photons, self.environment.temperature) {
            (Some(n), _) => Ok(n),
            (None, Some(t)) => thermal_occupancy(freq, t),
            (None, None) => Err(crate::error::domain("noise_photons", f64::NAN, "unset")),
        }
    }

    pub fn noise_frequency(&self) -> NoiseFrequency {
        self.environment.noise_frequency.unwrap_or_default()
    }

    pub fn entangled_source(&self) -> crate::Result<Option<EntangledSource>> {
        self.source
            .as_ref()
            .map(|s| EntangledSource::with_gain_db(s.signal_freq, s.idler_freq, s.bandwidth, s.photons_per_mode, s.transmit_gain_db))
            .transpose()
    }

    /// Amplifier chain built from `[chain]` and the source, if both exist.
    pub fn chain_config(&self) -> crate::Result<Option<ChainConfig>> {
        let (Some(c), Some(s)) = (&self.chain, &self.source) else {
            return Ok(None);
        };
        let freq = match self.noise_frequency() {
            NoiseFrequency::Idler => s.idler_freq,
            NoiseFrequency::Signal => s.signal_freq,
        };
        let tx = AmpStage::from_db(s.transmit_gain_db, c.tx_noise_photons)?;
        let rx = AmpStage::from_db(c.rx_gain_db, c.rx_noise_photons)?;
        Ok(Some(ChainConfig {
            source_photons: s.photons_per_mode,
            tx_signal: tx,
            tx_idler: tx,
            rx_signal: rx,
            rx_idler: rx,
            env_noise_photons: self.noise_photons_at(freq)?,
            idler_noise_form: c.idler_noise_form.unwrap_or_default(),
        }))
    }

    pub fn to_toml(&self) -> ScenarioResult<String> {
        toml::to_string(self).map_err(|e| ScenarioError::Config(e.to_string()))
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> ScenarioResult<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ScenarioError::Parse {
            message: e.message().to_string(),
            line,
            column,
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Loads a scenario from a file path or a preset name (see [`presets::names`]).
pub fn load_scenario(path_or_preset: &str) -> ScenarioResult<Scenario> {
    if let Some(s) = presets::preset(path_or_preset) {
        s.validate()?;
        return Ok(s);
    }
    let path = Path::new(path_or_preset);
    let text = std::fs::read_to_string(path).map_err(|e| {
        if !path.exists() && !path_or_preset.contains(['/', '.']) {
            ScenarioError::Config(format!(
                "unknown preset `{path_or_preset}` (known: {})",
                presets::names().join(", ")
            ))
        } else {
            ScenarioError::Io {
                path: path_or_preset.to_string(),
                message: e.to_string(),
            }
        }
    })?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates_and_round_trips() {
        for name in presets::names() {
            let s = load_scenario(name).unwrap();
            let text = s.to_toml().unwrap();
            assert_eq!(parse_scenario(&text).unwrap(), s, "{name}\n{text}");
        }
    }

    #[test]
    fn negative_bandwidth_names_field() {
        let mut s = presets::preset("table3:proposed").unwrap();
        s.source.as_mut().unwrap().bandwidth = -1.0;
        let text = s.to_toml().unwrap();
        match parse_scenario(&text) {
            Err(ScenarioError::Validation { field, .. }) => assert_eq!(field, "source.bandwidth"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exclusive_thresholds() {
        let mut s = presets::preset("table3:proposed").unwrap();
        s.detection.snr_th_db = Some(10.0);
        match s.validate() {
            Err(ScenarioError::Validation { field, message }) => {
                assert_eq!(field, "detection.p_fa");
                assert!(message.contains("mutually exclusive"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_has_position() {
        let text = presets::preset("table1").unwrap().to_toml().unwrap();
        let text = text.replace("[link]\n", "[link]\nwibble = 3\n");
        match parse_scenario(&text) {
            Err(ScenarioError::Parse { message, line, column }) => {
                assert!(message.contains("wibble"), "{message}");
                assert!(line > 1);
                assert_eq!(column, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn aperture_conventions() {
        let mut l = presets::preset("table1").unwrap().link;
        assert!((l.effective_aperture() - 0.5 * 0.01 * std::f64::consts::PI).abs() < 1e-15);
        l.effective_aperture = Some(1e-3);
        assert!(l.validate().is_err());
    }

    #[test]
    fn unknown_preset_is_config_error() {
        assert!(matches!(load_scenario("table9"), Err(ScenarioError::Config(_))));
        assert!(matches!(load_scenario("/nonexistent/x.toml"), Err(ScenarioError::Io { .. })));
    }
}
