//! Conventional (power-detecting) radar: effective SNR, characteristic range
//! and the maximum range at which the SNR still clears a threshold.
//!
//! The detection condition reduces to the transcendental equation
//! `R exp(a R) = K` with `a = γ ln(10)/20` and `K = (M/SNR_th)^(1/4) R_c`.
//! [`solve_range_equation`] finds its root exactly; the logarithmic
//! [`range_equation_closed_form`] is the usual approximation and overshoots
//! the root once `a K` is no longer small.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::physics::{channel_transfer, db_to_linear, RadarLink};

/// Threshold of the single-photon receiver preset, in dB.
pub const SINGLE_PHOTON_SNR_TH_DB: f64 = -54.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectRadarSystem {
    pub link: RadarLink,
    /// Transmitted power P_t (W).
    pub transmit_power: f64,
    /// Receiver noise power P_n (W).
    pub noise_power: f64,
    /// Integration time τ_int (s).
    pub integration_time: f64,
    /// Detection bandwidth B_det (Hz).
    pub detection_bandwidth: f64,
}

impl DirectRadarSystem {
    pub fn new(
        link: RadarLink,
        transmit_power: f64,
        noise_power: f64,
        integration_time: f64,
        detection_bandwidth: f64,
    ) -> Result<Self> {
        require_positive("transmit_power", transmit_power)?;
        require_positive("noise_power", noise_power)?;
        require_positive("integration_time", integration_time)?;
        require_positive("detection_bandwidth", detection_bandwidth)?;
        let sys = Self {
            link,
            transmit_power,
            noise_power,
            integration_time,
            detection_bandwidth,
        };
        if sys.samples() < 1.0 {
            return Err(crate::error::domain(
                "samples",
                sys.samples(),
                "integration_time * detection_bandwidth must be >= 1",
            ));
        }
        Ok(sys)
    }

    /// Number of integrated samples `M = τ_int B_det`.
    pub fn samples(&self) -> f64 {
        self.integration_time * self.detection_bandwidth
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionThreshold {
    snr_threshold: f64,
}

impl DetectionThreshold {
    pub fn from_linear(snr: f64) -> Result<Self> {
        require_positive("snr_threshold", snr)?;
        Ok(Self { snr_threshold: snr })
    }

    pub fn from_db(snr_db: f64) -> Result<Self> {
        Self::from_linear(db_to_linear(snr_db))
    }

    pub fn linear(&self) -> f64 {
        self.snr_threshold
    }
}

/// Threshold of a receiver built around a single-microwave-photon detector.
pub fn single_photon_radar_preset() -> DetectionThreshold {
    DetectionThreshold {
        snr_threshold: db_to_linear(SINGLE_PHOTON_SNR_TH_DB),
    }
}

/// `SNR_eff = M η(R) P_t / P_n`.
pub fn effective_snr_direct(sys: &DirectRadarSystem, range: f64) -> Result<f64> {
    let eta = channel_transfer(&sys.link, range)?;
    Ok(sys.samples() * eta * sys.transmit_power / sys.noise_power)
}

/// `R_c = (σ G A_e P_t / ((4π)² P_n))^(1/4)`.
pub fn characteristic_range_direct(sys: &DirectRadarSystem) -> f64 {
    (sys.link.geometric_factor() * sys.transmit_power / sys.noise_power).powf(0.25)
}

/// Right-hand side `K = (M/SNR_th)^(1/4) R_c` of the range equation.
pub fn range_equation_target(samples: f64, snr_threshold: f64, characteristic_range: f64) -> f64 {
    (samples / snr_threshold).powf(0.25) * characteristic_range
}

/// Logarithmic approximation `ln(1 + a K) / a` to the root of `R e^(aR) = K`.
/// At `a = 0` returns `K` exactly.
pub fn range_equation_closed_form(rate: f64, target: f64) -> f64 {
    if rate == 0.0 {
        target
    } else {
        (rate * target).ln_1p() / rate
    }
}

const SOLVER_MAX_ITER: usize = 200;
const SOLVER_REL_TOL: f64 = 1e-15;

/// Unique positive root of `R exp(rate R) = target` for `rate ≥ 0`,
/// `target > 0`.
///
/// Newton iteration in `ln R` is safeguarded by a bisection bracket, started
/// from the closed form (which never undershoots the root).
pub fn solve_range_equation(rate: f64, target: f64) -> Result<f64> {
    require_non_negative("rate", rate)?;
    require_positive("target", target)?;
    if rate == 0.0 {
        return Ok(target);
    }
    let g = |r: f64| r.ln() + rate * r - target.ln();

    // g(target) = rate·target > 0; walk lo down until g(lo) <= 0.
    let mut hi = target;
    let guess = range_equation_closed_form(rate, target).min(target);
    let mut lo = guess;
    let mut steps = 0;
    while g(lo) > 0.0 {
        lo *= 0.5;
        steps += 1;
        if steps > 2000 || lo == 0.0 {
            return Err(Error::Solver(format!(
                "could not bracket root of R exp({rate} R) = {target}"
            )));
        }
    }

    let mut r = guess;
    for _ in 0..SOLVER_MAX_ITER {
        let val = g(r);
        if val == 0.0 {
            return Ok(r);
        }
        if val > 0.0 {
            hi = r;
        } else {
            lo = r;
        }
        // d/dR [ln R + aR] = 1/R + a
        let mut next = r - val / (1.0 / r + rate);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - r).abs() <= SOLVER_REL_TOL * r || hi - lo <= SOLVER_REL_TOL * hi {
            return Ok(next);
        }
        r = next;
    }
    Err(Error::Solver(format!(
        "no convergence for R exp({rate} R) = {target} after {SOLVER_MAX_ITER} iterations"
    )))
}

/// Maximum range from the logarithmic closed form. Approximate: it is an
/// upper bound on the exact root, tight only while `a K ≪ 1`.
pub fn max_range_direct_closed_form(sys: &DirectRadarSystem, th: &DetectionThreshold) -> f64 {
    let k = range_equation_target(sys.samples(), th.linear(), characteristic_range_direct(sys));
    range_equation_closed_form(sys.link.atmosphere.range_equation_rate(), k)
}

/// Maximum range as the exact root of the range equation.
pub fn max_range_direct_exact(sys: &DirectRadarSystem, th: &DetectionThreshold) -> Result<f64> {
    let k = range_equation_target(sys.samples(), th.linear(), characteristic_range_direct(sys));
    solve_range_equation(sys.link.atmosphere.range_equation_rate(), k)
}
