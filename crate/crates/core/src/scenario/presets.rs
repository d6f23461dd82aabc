//! Built-in scenarios.
//!
//! | name | system |
//! |------|--------|
//! | `table1` | conventional direct-detection radar, 1 µW, 10 dB threshold |
//! | `table1:single-photon` | same link with a −54 dB single-photon detector, 1 pW |
//! | `table3:barzanjeh`, `table3:luong`, `table3:livreri`, `table3:proposed` | published QTMS systems and the proposed design |
//! | `fig4` | QTMS on the `table1` link, B = 10 GHz, N_s = 1, 80 dB gain, probed at 1 km |
//! | `fig7` | QTMS on the `table1` link, B = 10 GHz, N_s = 0.1, 40 dB gain |
//! | `fig10` | `table3:proposed` probed at 1 km |
//!
//! Table-3 presets use `A_e = 1e−3 m²` (0.01 m² at 10 % efficiency) and
//! the tabulated background occupation `N_b` at the idler frequency.

use crate::amp_chain::IdlerNoiseForm;
use crate::direct::SINGLE_PHOTON_SNR_TH_DB;
use crate::qtms::NoiseFrequency;

use super::{
    ChainSpec, DetectionConfig, EnvironmentConfig, LinkConfig, ModelKind, ProbeConfig, Scenario, SourceConfig,
    TransmitterConfig,
};

const NAMES: &[&str] = &[
    "table1",
    "table1:single-photon",
    "table3:barzanjeh",
    "table3:luong",
    "table3:livreri",
    "table3:proposed",
    "fig4",
    "fig7",
    "fig10",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn table1_link() -> LinkConfig {
    LinkConfig {
        rcs: 0.5,
        antenna_gain_db: 15.0,
        aperture_radius: Some(0.1),
        aperture_efficiency: Some(0.5),
        gamma_db_per_km: Some(0.007),
        ..LinkConfig::default()
    }
}

fn table3_link() -> LinkConfig {
    LinkConfig {
        rcs: 0.1,
        antenna_gain_db: 15.0,
        physical_aperture: Some(0.01),
        aperture_efficiency: Some(0.1),
        gamma_db_per_km: Some(0.007),
        ..LinkConfig::default()
    }
}

fn table1_direct(name: &str, model: ModelKind, power: f64, snr_th_db: f64) -> Scenario {
    Scenario {
        model,
        name: Some(name.into()),
        link: table1_link(),
        transmitter: Some(TransmitterConfig { power, frequency: 10e9 }),
        source: None,
        detection: DetectionConfig {
            integration_time: 0.1,
            detection_bandwidth: 200e3,
            p_fa: None,
            snr_th_db: Some(snr_th_db),
        },
        environment: EnvironmentConfig {
            temperature: Some(300.0),
            noise_photons: None,
            noise_frequency: None,
        },
        chain: None,
        probe: None,
    }
}

#[allow(clippy::too_many_arguments)]
fn table3_row(
    name: &str,
    fs_ghz: f64,
    fi_ghz: f64,
    b_mhz: f64,
    gain_db: f64,
    nb: f64,
    tau: f64,
    bdet: f64,
    ns: f64,
) -> Scenario {
    Scenario {
        model: ModelKind::Qtms,
        name: Some(name.into()),
        link: table3_link(),
        transmitter: None,
        source: Some(SourceConfig {
            signal_freq: fs_ghz * 1e9,
            idler_freq: fi_ghz * 1e9,
            bandwidth: b_mhz * 1e6,
            photons_per_mode: ns,
            transmit_gain_db: gain_db,
            rho0: None,
        }),
        detection: DetectionConfig {
            integration_time: tau,
            detection_bandwidth: bdet,
            p_fa: Some(1e-3),
            snr_th_db: None,
        },
        environment: EnvironmentConfig {
            temperature: None,
            noise_photons: Some(nb),
            noise_frequency: Some(NoiseFrequency::Idler),
        },
        chain: None,
        probe: None,
    }
}

fn table1_qtms(name: &str, ns: f64, gain_db: f64, tau: f64) -> Scenario {
    Scenario {
        model: ModelKind::Qtms,
        name: Some(name.into()),
        link: table1_link(),
        transmitter: None,
        source: Some(SourceConfig {
            signal_freq: 10e9,
            idler_freq: 10e9,
            bandwidth: 10e9,
            photons_per_mode: ns,
            transmit_gain_db: gain_db,
            rho0: None,
        }),
        detection: DetectionConfig {
            integration_time: tau,
            detection_bandwidth: 200e3,
            p_fa: Some(1e-3),
            snr_th_db: None,
        },
        environment: EnvironmentConfig {
            temperature: Some(300.0),
            noise_photons: None,
            noise_frequency: Some(NoiseFrequency::Idler),
        },
        chain: None,
        probe: None,
    }
}

fn proposed() -> Scenario {
    let mut s = table3_row("table3:proposed", 9.0, 9.0, 9000.0, 77.0, 693.0, 0.5, 1e6, 0.05);
    s.chain = Some(ChainSpec {
        tx_noise_photons: 9.97,
        rx_gain_db: 17.0,
        rx_noise_photons: 3e5,
        idler_noise_form: Some(IdlerNoiseForm::Consistent),
    });
    s
}

pub fn preset(name: &str) -> Option<Scenario> {
    let s = match name {
        "table1" => table1_direct(name, ModelKind::Direct, 1e-6, 10.0),
        "table1:single-photon" => table1_direct(name, ModelKind::SinglePhoton, 1e-12, SINGLE_PHOTON_SNR_TH_DB),
        "table3:barzanjeh" => table3_row(name, 10.09, 6.8, 20.0, 77.16, 672.0, 1.9, 200e3, 0.5),
        "table3:luong" => table3_row(name, 7.5376, 6.1445, 1.0, 63.0, 1015.0, 0.05, 1e6, 0.57),
        // B_det is not given for this system; 1 MHz with M = 1.5e7 gives τ = 15 s.
        "table3:livreri" => table3_row(name, 3.3, 3.45, 3000.0, 30.0, 100.0, 15.0, 1e6, 0.05),
        "table3:proposed" => proposed(),
        "fig4" => {
            let mut s = table1_qtms(name, 1.0, 80.0, 0.5);
            s.probe = Some(ProbeConfig { range: 1000.0 });
            s
        }
        "fig7" => table1_qtms(name, 0.1, 40.0, 0.1),
        "fig10" => {
            let mut s = proposed();
            s.name = Some(name.into());
            s.probe = Some(ProbeConfig { range: 1000.0 });
            s
        }
        _ => return None,
    };
    Some(s)
}
