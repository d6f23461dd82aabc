//! Photon budget of the two amplification stages (transmitter and detector)
//! on each arm, plus the free-space channel on the signal arm.
//!
//! Each stage is a phase-insensitive amplifier `a → √G a + √(G−1) b†` whose
//! noise mode `b` carries `added_noise_photons` thermal photons. Channel loss
//! mixes the returned signal with an environmental mode, `√η a + √(1−η) e`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_non_negative, Result};
use crate::physics::{channel_transfer, RadarLink, PLANCK_H};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmpStage {
    /// Power gain (linear, ≥ 1).
    pub gain: f64,
    /// Mean photons in the amplifier's noise input.
    pub added_noise_photons: f64,
}

impl AmpStage {
    pub const IDENTITY: AmpStage = AmpStage {
        gain: 1.0,
        added_noise_photons: 0.0,
    };

    pub fn new(gain: f64, added_noise_photons: f64) -> Result<Self> {
        if !(gain.is_finite() && gain >= 1.0) {
            return Err(domain("gain", gain, "must be finite and >= 1"));
        }
        require_non_negative("added_noise_photons", added_noise_photons)?;
        Ok(Self {
            gain,
            added_noise_photons,
        })
    }

    pub fn from_db(gain_db: f64, added_noise_photons: f64) -> Result<Self> {
        Self::new(crate::physics::db_to_linear(gain_db), added_noise_photons)
    }
}

/// Which reading of the idler added-noise expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdlerNoiseForm {
    /// Transmitter noise weighted by `G_det (G_tr − 1)`, as the stage
    /// operators dictate.
    #[default]
    Consistent,
    /// Transmitter noise weighted by `G_det (G_amp − 1)`, an alternative
    /// variant; kept only for comparison.
    TotalGain,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    /// Photons per mode N_0 produced by the source on each arm.
    pub source_photons: f64,
    pub tx_signal: AmpStage,
    pub tx_idler: AmpStage,
    pub rx_signal: AmpStage,
    pub rx_idler: AmpStage,
    /// Environmental photons N_n^env mixed in by the channel loss.
    pub env_noise_photons: f64,
    #[serde(default)]
    pub idler_noise_form: IdlerNoiseForm,
}

impl ChainConfig {
    /// Lossless, noiseless chain around a bare source.
    pub fn bare(source_photons: f64) -> Self {
        Self {
            source_photons,
            tx_signal: AmpStage::IDENTITY,
            tx_idler: AmpStage::IDENTITY,
            rx_signal: AmpStage::IDENTITY,
            rx_idler: AmpStage::IDENTITY,
            env_noise_photons: 0.0,
            idler_noise_form: IdlerNoiseForm::Consistent,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("source_photons", self.source_photons)?;
        require_non_negative("env_noise_photons", self.env_noise_photons)?;
        for stage in [self.tx_signal, self.tx_idler, self.rx_signal, self.rx_idler] {
            AmpStage::new(stage.gain, stage.added_noise_photons)?;
        }
        Ok(())
    }

    /// `G_s^amp = G_s^det G_s^tr`.
    pub fn signal_total_gain(&self) -> f64 {
        self.rx_signal.gain * self.tx_signal.gain
    }

    /// `G_i^amp = G_i^det G_i^tr`.
    pub fn idler_total_gain(&self) -> f64 {
        self.rx_idler.gain * self.tx_idler.gain
    }
}

/// Detected photon number split into the correlated part and added noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectedPhotons {
    pub total: f64,
    pub added: f64,
}

/// Idler photons at the detector, `G_i^amp N_0 + N_n,i^add`.
pub fn idler_detected_photons(cfg: &ChainConfig) -> Result<DetectedPhotons> {
    cfg.validate()?;
    let g_tr = cfg.tx_idler.gain;
    let g_det = cfg.rx_idler.gain;
    let g_amp = cfg.idler_total_gain();
    let tx_weight = match cfg.idler_noise_form {
        IdlerNoiseForm::Consistent => g_det * (g_tr - 1.0),
        IdlerNoiseForm::TotalGain => g_det * (g_amp - 1.0),
    };
    let added = tx_weight * cfg.tx_idler.added_noise_photons
        + (g_det - 1.0) * cfg.rx_idler.added_noise_photons
        + (g_amp - 1.0);
    Ok(DetectedPhotons {
        total: g_amp * cfg.source_photons + added,
        added,
    })
}

/// Signal photons at the detector after a channel of transmission `eta`,
/// `η G_s^amp N_0 + N_n,s^add`.
pub fn signal_detected_photons(cfg: &ChainConfig, eta: f64) -> Result<DetectedPhotons> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain("eta", eta, "must lie in [0, 1]"));
    }
    let g_tr = cfg.tx_signal.gain;
    let g_det = cfg.rx_signal.gain;
    let g_amp = cfg.signal_total_gain();
    let added = eta * g_det * (g_tr - 1.0) * cfg.tx_signal.added_noise_photons
        + (g_det - 1.0) * cfg.rx_signal.added_noise_photons
        + (1.0 - eta) * g_det * (cfg.env_noise_photons + 1.0)
        + (eta * g_amp - 1.0);
    Ok(DetectedPhotons {
        total: eta * g_amp * cfg.source_photons + added,
        added,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainPowers {
    /// Correlated idler power `G_i^amp N_0 h f_i B`.
    pub idler_correlated: f64,
    /// Idler added-noise power `N_n,i^add h f_i B`.
    pub idler_noise: f64,
    /// Correlated signal power before the channel, `G_s^amp N_0 h f_s B`.
    pub signal_correlated: f64,
    /// Signal added-noise power `N_n,s^add h f_s B`.
    pub signal_noise: f64,
}

impl ChainPowers {
    /// Total idler power `P_i = P_i^corr + P_n,i`.
    pub fn idler_power(&self) -> f64 {
        self.idler_correlated + self.idler_noise
    }

    /// Detected signal power `η P_s^corr + P_n,s`.
    pub fn signal_power(&self, eta: f64) -> f64 {
        eta * self.signal_correlated + self.signal_noise
    }
}

pub fn chain_powers(cfg: &ChainConfig, eta: f64, signal_freq: f64, idler_freq: f64, bandwidth: f64) -> Result<ChainPowers> {
    crate::error::require_positive("signal_freq", signal_freq)?;
    crate::error::require_positive("idler_freq", idler_freq)?;
    crate::error::require_positive("bandwidth", bandwidth)?;
    let idler = idler_detected_photons(cfg)?;
    let signal = signal_detected_photons(cfg, eta)?;
    let e_i = PLANCK_H * idler_freq * bandwidth;
    let e_s = PLANCK_H * signal_freq * bandwidth;
    Ok(ChainPowers {
        idler_correlated: cfg.idler_total_gain() * cfg.source_photons * e_i,
        idler_noise: idler.added * e_i,
        signal_correlated: cfg.signal_total_gain() * cfg.source_photons * e_s,
        signal_noise: signal.added * e_s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetState {
    Present,
    Absent,
}

/// Received signal photon rates (photons/s over the source bandwidth).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonRates {
    pub range: f64,
    /// Correlated (target-returned) rate `η G_s^amp N_0 B`.
    pub rate_corr: f64,
    /// Added-noise rate `N_n,s^add B`.
    pub rate_added: f64,
    pub target_present: bool,
}

pub fn received_photon_rates(
    cfg: &ChainConfig,
    link: &RadarLink,
    range: f64,
    bandwidth: f64,
    target: TargetState,
) -> Result<PhotonRates> {
    crate::error::require_positive("bandwidth", bandwidth)?;
    let eta = match target {
        TargetState::Present => channel_transfer(link, range)?,
        TargetState::Absent => {
            crate::error::require_positive("range", range)?;
            0.0
        }
    };
    let signal = signal_detected_photons(cfg, eta)?;
    Ok(PhotonRates {
        range,
        rate_corr: eta * cfg.signal_total_gain() * cfg.source_photons * bandwidth,
        rate_added: signal.added * bandwidth,
        target_present: matches!(target, TargetState::Present),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::rho0_from_idler_noise;
    use approx::assert_relative_eq;

    fn fig10_chain() -> ChainConfig {
        ChainConfig {
            source_photons: 0.05,
            tx_signal: AmpStage::from_db(77.0, 9.97).unwrap(),
            tx_idler: AmpStage::from_db(77.0, 9.97).unwrap(),
            rx_signal: AmpStage::from_db(17.0, 3e5).unwrap(),
            rx_idler: AmpStage::from_db(17.0, 3e5).unwrap(),
            env_noise_photons: 693.0,
            idler_noise_form: IdlerNoiseForm::Consistent,
        }
    }

    #[test]
    fn identity_chain_returns_source() {
        let cfg = ChainConfig::bare(0.37);
        let i = idler_detected_photons(&cfg).unwrap();
        assert_eq!(i.total, 0.37);
        assert_eq!(i.added, 0.0);
        let s = signal_detected_photons(&cfg, 1.0).unwrap();
        assert_eq!(s.total, 0.37);
    }

    #[test]
    fn pure_noise_without_source() {
        let cfg = ChainConfig { source_photons: 0.0, ..fig10_chain() };
        let i = idler_detected_photons(&cfg).unwrap();
        assert_eq!(i.total, i.added);
    }

    #[test]
    fn target_absent_noise() {
        let cfg = fig10_chain();
        let s = signal_detected_photons(&cfg, 0.0).unwrap();
        let g = cfg.rx_signal.gain;
        let expect = (g - 1.0) * cfg.rx_signal.added_noise_photons + g * (cfg.env_noise_photons + 1.0) - 1.0;
        assert_relative_eq!(s.added, expect, max_relative = 1e-15);
        assert!(signal_detected_photons(&cfg, 1.5).is_err());
        assert!(signal_detected_photons(&cfg, -0.1).is_err());
    }

    #[test]
    fn total_gain_variant_adds_more_noise() {
        let cfg = fig10_chain();
        let alt = ChainConfig { idler_noise_form: IdlerNoiseForm::TotalGain, ..cfg };
        let a = idler_detected_photons(&cfg).unwrap().added;
        let b = idler_detected_photons(&alt).unwrap().added;
        assert!(b > a);
    }

    #[test]
    fn zero_noise_chain_gives_unit_rho0() {
        let cfg = ChainConfig::bare(0.5);
        let p = chain_powers(&cfg, 1e-10, 9e9, 9e9, 1e6).unwrap();
        assert_eq!(p.idler_noise, 0.0);
        assert_eq!(rho0_from_idler_noise(p.idler_noise, p.idler_power()).unwrap(), 1.0);
    }

    #[test]
    fn barzanjeh_correlated_idler_power() {
        let cfg = ChainConfig {
            tx_idler: AmpStage::from_db(77.16, 0.0).unwrap(),
            ..ChainConfig::bare(0.5)
        };
        let p = chain_powers(&cfg, 0.0, 10.09e9, 6.8e9, 20e6).unwrap();
        assert_relative_eq!(p.idler_correlated, 2.3430e-9, max_relative = 1e-4);
    }

    #[test]
    fn absent_target_matches_eta_zero() {
        let cfg = fig10_chain();
        let link = RadarLink::new(0.1, 31.6, 1e-3, crate::physics::Atmosphere::VACUUM).unwrap();
        let absent = received_photon_rates(&cfg, &link, 100.0, 9e9, TargetState::Absent).unwrap();
        assert_eq!(absent.rate_corr, 0.0);
        assert_eq!(absent.rate_added, signal_detected_photons(&cfg, 0.0).unwrap().added * 9e9);
        assert!(!absent.target_present);
        let present = received_photon_rates(&cfg, &link, 100.0, 9e9, TargetState::Present).unwrap();
        assert!(present.target_present && present.rate_corr > 0.0);
    }
}
