//! Two-mode-squeezed-vacuum illumination against its classical counterpart
//! (two identical coherent states): source correlations, quantum advantage,
//! and the range advantage that follows from plugging each correlation into
//! the noise-radar range equation.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::noise::{max_range_nr, FalseAlarmSpec, NoiseRadarSystem};
use crate::physics::{db_to_linear, thermal_noise_power, RadarLink, PLANCK_H};

/// Photon-pair source feeding a noise radar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntangledSource {
    pub signal_freq: f64,
    pub idler_freq: f64,
    /// Source bandwidth B (Hz).
    pub bandwidth: f64,
    /// Mean photons per mode N_s.
    pub photons_per_mode: f64,
    /// Total transmitter-side amplification G_amp (linear).
    pub transmit_gain: f64,
}

impl EntangledSource {
    pub fn new(signal_freq: f64, idler_freq: f64, bandwidth: f64, photons_per_mode: f64, transmit_gain: f64) -> Result<Self> {
        require_positive("signal_freq", signal_freq)?;
        require_positive("idler_freq", idler_freq)?;
        require_positive("bandwidth", bandwidth)?;
        require_non_negative("photons_per_mode", photons_per_mode)?;
        require_positive("transmit_gain", transmit_gain)?;
        if transmit_gain < 1.0 {
            return Err(crate::error::domain("transmit_gain", transmit_gain, "must be >= 1 (0 dB)"));
        }
        Ok(Self {
            signal_freq,
            idler_freq,
            bandwidth,
            photons_per_mode,
            transmit_gain,
        })
    }

    pub fn with_gain_db(signal_freq: f64, idler_freq: f64, bandwidth: f64, photons_per_mode: f64, gain_db: f64) -> Result<Self> {
        Self::new(signal_freq, idler_freq, bandwidth, photons_per_mode, db_to_linear(gain_db))
    }

    /// `P_i = G_amp N_s h f_i B`.
    pub fn idler_power(&self) -> f64 {
        self.transmit_gain * self.photons_per_mode * PLANCK_H * self.idler_freq * self.bandwidth
    }

    /// Transmitted signal photon rate `N_s B` before amplification.
    pub fn photon_rate(&self) -> f64 {
        self.photons_per_mode * self.bandwidth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IlluminationKind {
    /// Two-mode squeezed vacuum.
    Tmsv,
    /// Two identical coherent states (classical benchmark).
    CoherentIdentical,
}

impl IlluminationKind {
    pub fn source_correlation(self, photons_per_mode: f64) -> Result<f64> {
        match self {
            IlluminationKind::Tmsv => rho_tmsv(photons_per_mode),
            IlluminationKind::CoherentIdentical => rho_ci(photons_per_mode),
        }
    }
}

/// Which carrier frequency converts the background occupation into noise
/// power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseFrequency {
    #[default]
    Idler,
    Signal,
}

/// Receiver environment: background occupation and integration settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Background thermal photons per mode N_b.
    pub noise_photons: f64,
    pub detection_bandwidth: f64,
    pub integration_time: f64,
    #[serde(default)]
    pub noise_frequency: NoiseFrequency,
}

impl Environment {
    pub fn noise_power(&self, source: &EntangledSource) -> Result<f64> {
        let f = match self.noise_frequency {
            NoiseFrequency::Idler => source.idler_freq,
            NoiseFrequency::Signal => source.signal_freq,
        };
        thermal_noise_power(self.noise_photons, f, self.detection_bandwidth)
    }
}

/// `N_s = P / (h f B)`.
pub fn photons_per_mode(power: f64, freq: f64, bandwidth: f64) -> Result<f64> {
    require_positive("power", power)?;
    require_positive("frequency", freq)?;
    require_positive("bandwidth", bandwidth)?;
    Ok(power / (PLANCK_H * freq * bandwidth))
}

/// `P = N_s h f B`, inverse of [`photons_per_mode`].
pub fn power_from_photons(photons: f64, freq: f64, bandwidth: f64) -> Result<f64> {
    require_non_negative("photons_per_mode", photons)?;
    require_positive("frequency", freq)?;
    require_positive("bandwidth", bandwidth)?;
    Ok(photons * PLANCK_H * freq * bandwidth)
}

/// `ρ_TMSV = 2√(N_s(N_s+1)) / (2N_s+1)`.
pub fn rho_tmsv(photons: f64) -> Result<f64> {
    require_non_negative("photons_per_mode", photons)?;
    Ok(2.0 * (photons * (photons + 1.0)).sqrt() / (2.0 * photons + 1.0))
}

/// `ρ_CI = 2N_s / (2N_s+1)`.
pub fn rho_ci(photons: f64) -> Result<f64> {
    require_non_negative("photons_per_mode", photons)?;
    Ok(2.0 * photons / (2.0 * photons + 1.0))
}

/// `Q_adv = ρ_TMSV / ρ_CI = √(1 + 1/N_s)`.
pub fn quantum_advantage(photons: f64) -> Result<f64> {
    require_positive("photons_per_mode", photons)?;
    Ok((1.0 + 1.0 / photons).sqrt())
}

/// Noise-radar system whose idler and correlation come from `source`.
///
/// ρ0 is the ideal source correlation of `kind`; amplifier noise is not
/// folded in (see [`crate::amp_chain`] for that).
pub fn qtms_noise_system(
    source: &EntangledSource,
    link: &RadarLink,
    env: &Environment,
    kind: IlluminationKind,
) -> Result<NoiseRadarSystem> {
    let rho0 = kind.source_correlation(source.photons_per_mode)?;
    if rho0 == 0.0 {
        // Vacuum source: nothing correlated to detect at any threshold.
        return Err(Error::Undetectable { rho0, rho_th: 0.0 });
    }
    let noise_power = env.noise_power(source)?;
    NoiseRadarSystem::new(
        *link,
        source.idler_power(),
        noise_power,
        rho0,
        env.integration_time,
        env.detection_bandwidth,
    )
}

/// Maximum ranges of the quantum and classical variants and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeAdvantage {
    pub quantum_range: f64,
    pub classical_range: f64,
    pub advantage: f64,
}

/// `R_adv = R_max^TMSV / R_max^CI`, both from independent range solves.
pub fn range_advantage(
    source: &EntangledSource,
    link: &RadarLink,
    env: &Environment,
    fa: &FalseAlarmSpec,
) -> Result<RangeAdvantage> {
    let quantum = qtms_noise_system(source, link, env, IlluminationKind::Tmsv)?;
    let classical = qtms_noise_system(source, link, env, IlluminationKind::CoherentIdentical)?;
    let quantum_range = max_range_nr(&quantum, fa)?;
    let classical_range = max_range_nr(&classical, fa)?;
    if !(classical_range > 0.0) {
        return Err(Error::Solver("classical range collapsed to zero".into()));
    }
    Ok(RangeAdvantage {
        quantum_range,
        classical_range,
        advantage: quantum_range / classical_range,
    })
}
