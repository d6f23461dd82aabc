//! Physical constants, decibel bookkeeping, thermal background, atmospheric
//! attenuation and the monostatic channel transfer function.
//!
//! Every other model in the crate is built from these pieces. Powers are in
//! watts, ranges in meters, frequencies in hertz; decibels only appear at the
//! edges (constructors and I/O).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, require_non_negative, require_positive, Result};

/// Planck constant (J·s), exact SI value.
pub const PLANCK_H: f64 = 6.626_070_15e-34;
/// Boltzmann constant (J/K), exact SI value.
pub const BOLTZMANN_KB: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// The pair of constants every photon-number conversion needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub planck_h: f64,
    pub boltzmann_kb: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        planck_h: PLANCK_H,
        boltzmann_kb: BOLTZMANN_KB,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> Result<f64> {
    require_positive("ratio", ratio)?;
    Ok(10.0 * ratio.log10())
}

/// Converts watts to dBm.
pub fn watts_to_dbm(power: f64) -> Result<f64> {
    Ok(linear_to_db(require_positive("power", power)?)? + 30.0)
}

pub fn dbm_to_watts(power_dbm: f64) -> f64 {
    db_to_linear(power_dbm - 30.0)
}

/// Bose–Einstein mean occupation of a thermal mode at frequency `freq` and
/// temperature `temperature`.
pub fn thermal_occupancy(freq: f64, temperature: f64) -> Result<f64> {
    require_positive("frequency", freq)?;
    require_positive("temperature", temperature)?;
    let x = PLANCK_H * freq / (BOLTZMANN_KB * temperature);
    // exp_m1 keeps full precision in the Rayleigh-Jeans limit x << 1.
    Ok(1.0 / x.exp_m1())
}

/// Thermal noise power `N_b h f B_det` collected in a detection bandwidth.
pub fn thermal_noise_power(noise_photons: f64, freq: f64, detection_bandwidth: f64) -> Result<f64> {
    require_positive("noise_photons", noise_photons)?;
    require_positive("frequency", freq)?;
    require_positive("detection_bandwidth", detection_bandwidth)?;
    Ok(noise_photons * PLANCK_H * freq * detection_bandwidth)
}

/// One-way atmospheric attenuation coefficient.
///
/// Stored in dB/m; build it with [`Atmosphere::from_db_per_km`] when working
/// from tabulated values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atmosphere {
    gamma_db_per_m: f64,
}

impl Atmosphere {
    pub const VACUUM: Atmosphere = Atmosphere { gamma_db_per_m: 0.0 };

    pub fn from_db_per_m(gamma: f64) -> Result<Self> {
        require_non_negative("gamma_db_per_m", gamma)?;
        Ok(Self {
            gamma_db_per_m: gamma,
        })
    }

    pub fn from_db_per_km(gamma: f64) -> Result<Self> {
        require_non_negative("gamma_db_per_km", gamma)?;
        Ok(Self {
            gamma_db_per_m: gamma * 1e-3,
        })
    }

    pub fn gamma_db_per_m(&self) -> f64 {
        self.gamma_db_per_m
    }

    /// Natural-log rate `a` such that `1/F(R)^(1/2) = exp(a R)`, i.e.
    /// `a = γ ln(10) / 20`. This is the coefficient of the two-way range
    /// equation once the fourth root has been taken.
    pub fn range_equation_rate(&self) -> f64 {
        self.gamma_db_per_m * std::f64::consts::LN_10 / 20.0
    }
}

impl Default for Atmosphere {
    fn default() -> Self {
        Self::VACUUM
    }
}

/// `F(R) = 10^(-γR/10)`.
pub fn form_factor(atmosphere: &Atmosphere, range: f64) -> Result<f64> {
    require_non_negative("range", range)?;
    if atmosphere.gamma_db_per_m == 0.0 {
        return Ok(1.0);
    }
    Ok(10f64.powf(-atmosphere.gamma_db_per_m * range / 10.0))
}

/// Transmitter–target–receiver geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarLink {
    /// Radar cross-section σ (m²).
    pub rcs: f64,
    /// Antenna gain G (linear).
    pub antenna_gain: f64,
    /// Effective receive aperture A_e (m²).
    pub effective_aperture: f64,
    pub atmosphere: Atmosphere,
}

impl RadarLink {
    pub fn new(rcs: f64, antenna_gain: f64, effective_aperture: f64, atmosphere: Atmosphere) -> Result<Self> {
        require_positive("rcs", rcs)?;
        require_positive("antenna_gain", antenna_gain)?;
        require_positive("effective_aperture", effective_aperture)?;
        Ok(Self {
            rcs,
            antenna_gain,
            effective_aperture,
            atmosphere,
        })
    }

    /// Builds the link from an aperture efficiency ε_a and physical aperture
    /// A, with `A_e = ε_a A`.
    pub fn with_aperture(
        rcs: f64,
        antenna_gain: f64,
        aperture_efficiency: f64,
        physical_aperture: f64,
        atmosphere: Atmosphere,
    ) -> Result<Self> {
        require_positive("aperture_efficiency", aperture_efficiency)?;
        require_positive("physical_aperture", physical_aperture)?;
        Self::new(rcs, antenna_gain, aperture_efficiency * physical_aperture, atmosphere)
    }

    /// `σ G A_e / (4π)²`, the range-independent part of the transfer function.
    pub fn geometric_factor(&self) -> f64 {
        self.rcs * self.antenna_gain * self.effective_aperture / (16.0 * PI * PI)
    }

    /// Fourth root of `geometric_factor · power / noise_power`: the range at
    /// which the single-sample in-vacuo return equals the noise.
    pub fn characteristic_range(&self, power: f64, noise_power: f64) -> Result<f64> {
        require_positive("power", power)?;
        require_positive("noise_power", noise_power)?;
        Ok((self.geometric_factor() * power / noise_power).powf(0.25))
    }
}

/// `η(R) = σ G A_e F(R)² / ((4π)² R⁴)`.
pub fn channel_transfer(link: &RadarLink, range: f64) -> Result<f64> {
    require_positive("range", range)?;
    let f = form_factor(&link.atmosphere, range)?;
    Ok(link.geometric_factor() * f * f / range.powi(4))
}

/// Number of spatial modes in a free-space volume of coherence length, from
/// `π √M = f / B`.
pub fn spatial_mode_count(freq: f64, bandwidth: f64) -> Result<f64> {
    require_positive("frequency", freq)?;
    require_positive("bandwidth", bandwidth)?;
    if bandwidth > freq {
        return Err(domain("bandwidth", bandwidth, "must not exceed the carrier frequency"));
    }
    let ratio = freq / bandwidth;
    Ok((ratio / PI).powi(2))
}

/// Optical form of [`spatial_mode_count`], using `λ / Δλ` in place of `f / B`.
pub fn spatial_mode_count_wavelength(wavelength: f64, linewidth: f64) -> Result<f64> {
    require_positive("wavelength", wavelength)?;
    require_positive("linewidth", linewidth)?;
    if linewidth > wavelength {
        return Err(domain("linewidth", linewidth, "must not exceed the wavelength"));
    }
    Ok((wavelength / linewidth / PI).powi(2))
}
