//! Squeezing relations of a parametric source and the two-mode covariance
//! matrices used to test signal–idler entanglement.
//!
//! [`Covariance4`] stores the three distinct entries `(S1, S2, C_q)` of the
//! block pattern
//!
//! ```text
//!         | S1   0    Cq   0  |
//!   1/4 · | 0    S1   0   -Cq |
//!         | Cq   0    S2   0  |
//!         | 0   -Cq   0    S2 |
//! ```
//!
//! in quadrature order `(I_s, Q_s, I_i, Q_i)`. With `S = 2N_s + 1` the
//! cross term of a two-mode squeezed vacuum is `C_q = 2√(N_s(N_s+1))`, which
//! is the value that makes both the source Simon parameter
//! `−16 N_s(N_s+1)` and the in-phase Pearson coefficient `ρ_TMSV` come out.

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::amp_chain::ChainConfig;
use crate::error::{domain, require_non_negative, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    r: f64,
}

impl SqueezeParams {
    pub fn new(r: f64) -> Result<Self> {
        require_non_negative("squeezing", r)?;
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Parametric power gain `G_JPA = cosh² r`.
    pub fn jpa_gain(&self) -> f64 {
        self.r.cosh().powi(2)
    }

    /// Squeezing parameter reaching `level_db` (negative) below vacuum in
    /// the squeezed quadrature, from `e^(−2r) = 10^(level_db/10)`.
    pub fn from_squeezing_db(level_db: f64) -> Result<Self> {
        if !(level_db <= 0.0) {
            return Err(domain("squeezing_db", level_db, "must be <= 0 dB"));
        }
        Self::new(-level_db * std::f64::consts::LN_10 / 20.0)
    }
}

/// Squeezing parameter producing `N_s` photons per mode, `r = asinh(√N_s)`.
pub fn squeeze_from_photons(photons: f64) -> Result<SqueezeParams> {
    require_non_negative("photons_per_mode", photons)?;
    SqueezeParams::new(photons.sqrt().asinh())
}

/// `N_s = (cosh 2r − 1)/2 = sinh² r`.
pub fn photons_from_squeeze(sq: &SqueezeParams) -> f64 {
    sq.r.sinh().powi(2)
}

/// Variance of `(I_s − I_i)/√2`, `e^(−2r)/2`.
pub fn squeezed_quadrature_variance(sq: &SqueezeParams) -> f64 {
    (-2.0 * sq.r).exp() / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covariance4 {
    pub s1: f64,
    pub s2: f64,
    pub cq: f64,
}

impl Covariance4 {
    pub fn new(s1: f64, s2: f64, cq: f64) -> Result<Self> {
        if !(s1.is_finite() && s1 >= 1.0) {
            return Err(domain("s1", s1, "must be >= 1"));
        }
        if !(s2.is_finite() && s2 >= 1.0) {
            return Err(domain("s2", s2, "must be >= 1"));
        }
        if !cq.is_finite() {
            return Err(domain("cq", cq, "must be finite"));
        }
        Ok(Self { s1, s2, cq })
    }

    /// Full matrix including the 1/4 prefactor.
    pub fn matrix(&self) -> Matrix4<f64> {
        let (s1, s2, c) = (self.s1, self.s2, self.cq);
        #[rustfmt::skip]
        let m = Matrix4::new(
            s1,  0.0, c,   0.0,
            0.0, s1,  0.0, -c,
            c,   0.0, s2,  0.0,
            0.0, -c,  0.0, s2,
        );
        m * 0.25
    }

    /// In-phase Pearson coefficient `C_q / √(S1 S2)`.
    pub fn pearson(&self) -> f64 {
        self.cq / (self.s1 * self.s2).sqrt()
    }
}

/// Source covariance of a two-mode squeezed vacuum with `N_s` photons per
/// mode.
pub fn covariance_source(photons: f64) -> Result<Covariance4> {
    require_non_negative("photons_per_mode", photons)?;
    Ok(Covariance4 {
        s1: 2.0 * photons + 1.0,
        s2: 2.0 * photons + 1.0,
        cq: 2.0 * (photons * (photons + 1.0)).sqrt(),
    })
}

/// Covariance of the detected signal and retained idler after both
/// amplification stages and a channel of transmission `eta`. The source
/// photon number is `cfg.source_photons`.
pub fn covariance_detected(cfg: &ChainConfig, eta: f64) -> Result<Covariance4> {
    cfg.validate()?;
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain("eta", eta, "must lie in [0, 1]"));
    }
    let n = cfg.source_photons;
    let source = covariance_source(n)?;

    let (gs_tr, gs_det) = (cfg.tx_signal.gain, cfg.rx_signal.gain);
    let (gi_tr, gi_det) = (cfg.tx_idler.gain, cfg.rx_idler.gain);
    let gs_amp = cfg.signal_total_gain();
    let gi_amp = cfg.idler_total_gain();

    let s1 = 2.0
        * (eta * gs_amp * n
            + gs_det * cfg.env_noise_photons
            + gs_det * (gs_tr - 1.0) * (cfg.tx_signal.added_noise_photons + 1.0)
            + (gs_det - 1.0) * (cfg.rx_signal.added_noise_photons + 1.0))
        + 1.0;
    let s2 = 2.0
        * (gi_amp * n
            + gi_det * (gi_tr - 1.0) * (cfg.tx_idler.added_noise_photons + 1.0)
            + (gi_det - 1.0) * (cfg.rx_idler.added_noise_photons + 1.0))
        + 1.0;
    let cq = (eta * gs_amp * gi_amp).sqrt() * source.cq;
    Covariance4::new(s1, s2, cq)
}

/// `f = (S1 S2 − C_q²)² − (S1² + S2² + 2 C_q²) + 1`.
pub fn simon_parameter(cov: &Covariance4) -> f64 {
    let (s1, s2, c) = (cov.s1, cov.s2, cov.cq);
    let c2 = c * c;
    let det = s1 * s2 - c2;
    det * det - (s1 * s1 + s2 * s2 + 2.0 * c2) + 1.0
}

/// Entangled iff the Simon parameter is strictly negative.
pub fn is_entangled(cov: &Covariance4) -> bool {
    simon_parameter(cov) < 0.0
}
