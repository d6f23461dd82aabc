//! Correlation (noise) radar: signal–idler correlation versus range, its
//! integrated counterpart, the false-alarm threshold and the maximum range.
//!
//! The detection condition `ρ_eff(R) ≥ ρ_th` has exactly the shape of the
//! direct-detection condition once `SNR_th` is replaced by
//! `[(ρ0/ρ_th)² − 1]⁻¹` and `P_t` by the idler power, so the range solve is
//! shared with [`crate::direct`].

use serde::{Deserialize, Serialize};

use crate::direct::{range_equation_closed_form, range_equation_target, solve_range_equation};
use crate::error::{domain, require_non_negative, require_positive, Error, Result};
use crate::physics::{form_factor, RadarLink};

/// False-alarm probabilities at or above this are treated as early-alarm
/// (search) operation.
pub const EARLY_ALARM_MIN_P_FA: f64 = 0.5 - 1e-9;
/// False-alarm probabilities at or below this are treated as track operation.
pub const TRACK_MAX_P_FA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRadarSystem {
    pub link: RadarLink,
    /// Idler power P_i (W).
    pub idler_power: f64,
    /// Environmental noise power P_n (W).
    pub noise_power: f64,
    /// Source correlation coefficient ρ0.
    pub rho0: f64,
    pub integration_time: f64,
    pub detection_bandwidth: f64,
}

impl NoiseRadarSystem {
    pub fn new(
        link: RadarLink,
        idler_power: f64,
        noise_power: f64,
        rho0: f64,
        integration_time: f64,
        detection_bandwidth: f64,
    ) -> Result<Self> {
        require_positive("idler_power", idler_power)?;
        require_positive("noise_power", noise_power)?;
        require_non_negative("rho0", rho0)?;
        if rho0 > 1.0 {
            return Err(domain("rho0", rho0, "must be <= 1"));
        }
        require_positive("integration_time", integration_time)?;
        require_positive("detection_bandwidth", detection_bandwidth)?;
        let sys = Self {
            link,
            idler_power,
            noise_power,
            rho0,
            integration_time,
            detection_bandwidth,
        };
        if sys.samples() < 1.0 {
            return Err(domain(
                "samples",
                sys.samples(),
                "integration_time * detection_bandwidth must be >= 1",
            ));
        }
        Ok(sys)
    }

    pub fn samples(&self) -> f64 {
        self.integration_time * self.detection_bandwidth
    }

    /// Retained-idler SNR `P_i / P_n`.
    pub fn idler_snr(&self) -> f64 {
        self.idler_power / self.noise_power
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FalseAlarmSpec {
    p_fa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatingClass {
    EarlyAlarm,
    Track,
    Intermediate,
}

impl FalseAlarmSpec {
    pub fn new(p_fa: f64) -> Result<Self> {
        if p_fa.is_finite() && p_fa > 0.0 && p_fa < 1.0 {
            Ok(Self { p_fa })
        } else {
            Err(domain("p_fa", p_fa, "must lie strictly between 0 and 1"))
        }
    }

    pub fn probability(&self) -> f64 {
        self.p_fa
    }

    pub fn class(&self) -> OperatingClass {
        if self.p_fa >= EARLY_ALARM_MIN_P_FA {
            OperatingClass::EarlyAlarm
        } else if self.p_fa <= TRACK_MAX_P_FA {
            OperatingClass::Track
        } else {
            OperatingClass::Intermediate
        }
    }
}

/// `ρ0 = 1 − P_n,i / P_i`.
pub fn rho0_from_idler_noise(idler_noise_power: f64, idler_power: f64) -> Result<f64> {
    require_positive("idler_power", idler_power)?;
    require_non_negative("idler_noise_power", idler_noise_power)?;
    if idler_noise_power > idler_power {
        return Err(domain("idler_noise_power", idler_noise_power, "must not exceed the idler power"));
    }
    Ok(1.0 - idler_noise_power / idler_power)
}

/// Characteristic range `(σ G A_e P_i / (16π² P_n))^(1/4)`.
pub fn characteristic_range_nr(sys: &NoiseRadarSystem) -> f64 {
    (sys.link.geometric_factor() * sys.idler_power / sys.noise_power).powf(0.25)
}

fn correlation_with_samples(sys: &NoiseRadarSystem, range: f64, samples: f64) -> Result<f64> {
    require_positive("range", range)?;
    let f = form_factor(&sys.link.atmosphere, range)?;
    let x = range / characteristic_range_nr(sys);
    let x4 = x * x * x * x;
    Ok(sys.rho0 / (1.0 + x4 / (samples * f * f)).sqrt())
}

/// Single-sample correlation `ρ(R) = ρ0 / √(1 + (R/R_c)⁴ / F(R)²)`.
pub fn correlation_vs_range(sys: &NoiseRadarSystem, range: f64) -> Result<f64> {
    correlation_with_samples(sys, range, 1.0)
}

/// Correlation after integrating `M` samples.
pub fn effective_correlation(sys: &NoiseRadarSystem, range: f64) -> Result<f64> {
    correlation_with_samples(sys, range, sys.samples())
}

/// `ρ_th = √(−ln P_fa / M)`.
pub fn rho_threshold(fa: &FalseAlarmSpec, samples: f64) -> Result<f64> {
    if !(samples >= 1.0) {
        return Err(domain("samples", samples, "must be >= 1"));
    }
    Ok((-fa.probability().ln() / samples).sqrt())
}

/// Noise-radar threshold SNR `[(ρ0/ρ_th)² − 1]⁻¹`.
pub fn snr_threshold_nr(rho0: f64, rho_th: f64) -> Result<f64> {
    require_positive("rho_th", rho_th)?;
    if !(rho0 > rho_th) {
        return Err(Error::Undetectable { rho0, rho_th });
    }
    let q = rho0 / rho_th;
    Ok(1.0 / (q * q - 1.0))
}

/// Everything needed to place the range-equation root for a noise radar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseRangeBudget {
    pub rho_th: f64,
    pub snr_threshold: f64,
    pub characteristic_range: f64,
    /// `K = (M / SNR_th)^(1/4) R_c`.
    pub target: f64,
    /// `a = γ ln(10) / 20`.
    pub rate: f64,
}

pub fn range_budget_nr(sys: &NoiseRadarSystem, fa: &FalseAlarmSpec) -> Result<NoiseRangeBudget> {
    let m = sys.samples();
    let rho_th = rho_threshold(fa, m)?;
    let snr_threshold = snr_threshold_nr(sys.rho0, rho_th)?;
    let characteristic_range = characteristic_range_nr(sys);
    Ok(NoiseRangeBudget {
        rho_th,
        snr_threshold,
        characteristic_range,
        target: range_equation_target(m, snr_threshold, characteristic_range),
        rate: sys.link.atmosphere.range_equation_rate(),
    })
}

/// Maximum detection range, exact root of the range equation.
pub fn max_range_nr(sys: &NoiseRadarSystem, fa: &FalseAlarmSpec) -> Result<f64> {
    let b = range_budget_nr(sys, fa)?;
    solve_range_equation(b.rate, b.target)
}

/// Maximum detection range from the logarithmic closed form (approximate).
pub fn max_range_nr_closed_form(sys: &NoiseRadarSystem, fa: &FalseAlarmSpec) -> Result<f64> {
    let b = range_budget_nr(sys, fa)?;
    Ok(range_equation_closed_form(b.rate, b.target))
}
