//! Received photon rates for the `fig10` preset chain, checked against a
//! stage-by-stage propagation of mean photon numbers and a committed golden
//! file. Regenerate the file with `QTMS_UPDATE_GOLDEN=1`.

use std::path::PathBuf;

use qtms_core::amp_chain::{idler_detected_photons, received_photon_rates, TargetState};
use qtms_core::physics::channel_transfer;
use qtms_core::scenario::{format_number, presets::preset};

// Phase-insensitive amplifier acting on a mean photon number.
fn amplify(n: f64, gain: f64, noise: f64) -> f64 {
    gain * n + (gain - 1.0) * (noise + 1.0)
}

// Beam splitter of transmission eta against a thermal mode.
fn attenuate(n: f64, eta: f64, env: f64) -> f64 {
    eta * n + (1.0 - eta) * env
}

fn ranges() -> Vec<f64> {
    (0..=20).map(|k| 10f64.powf(2.0 + 2.0 * k as f64 / 20.0)).collect()
}

#[test]
fn rates_match_stage_propagation() {
    let s = preset("fig10").unwrap();
    let cfg = s.chain_config().unwrap().unwrap();
    let link = s.link.build().unwrap();
    let b = s.source.unwrap().bandwidth;
    let n0 = cfg.source_photons;
    for r in ranges() {
        let eta = channel_transfer(&link, r).unwrap();
        let rates = received_photon_rates(&cfg, &link, r, b, TargetState::Present).unwrap();

        let tx = amplify(n0, cfg.tx_signal.gain, cfg.tx_signal.added_noise_photons);
        let back = attenuate(tx, eta, cfg.env_noise_photons);
        let total = amplify(back, cfg.rx_signal.gain, cfg.rx_signal.added_noise_photons);
        let corr = eta * cfg.rx_signal.gain * cfg.tx_signal.gain * n0;

        assert!((rates.rate_corr / (corr * b) - 1.0).abs() < 1e-12, "R = {r}");
        assert!(((rates.rate_corr + rates.rate_added) / (total * b) - 1.0).abs() < 1e-12, "R = {r}");
        assert!(rates.rate_corr < 1e-3 * rates.rate_added, "correlated rate should be buried at R = {r}");
    }
}

#[test]
fn idler_matches_stage_propagation() {
    let cfg = preset("fig10").unwrap().chain_config().unwrap().unwrap();
    let tx = amplify(cfg.source_photons, cfg.tx_idler.gain, cfg.tx_idler.added_noise_photons);
    let total = amplify(tx, cfg.rx_idler.gain, cfg.rx_idler.added_noise_photons);
    let lib = idler_detected_photons(&cfg).unwrap();
    assert!((lib.total / total - 1.0).abs() < 1e-12);
}

#[test]
fn golden_rates() {
    let s = preset("fig10").unwrap();
    let cfg = s.chain_config().unwrap().unwrap();
    let link = s.link.build().unwrap();
    let b = s.source.unwrap().bandwidth;
    let mut text = String::from("range_m,rate_corr,rate_added\n");
    for r in ranges() {
        let p = received_photon_rates(&cfg, &link, r, b, TargetState::Present).unwrap();
        text += &format!("{},{},{}\n", format_number(r, 9), format_number(p.rate_corr, 9), format_number(p.rate_added, 9));
    }
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/fig10_rates.csv");
    if std::env::var_os("QTMS_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let golden = std::fs::read_to_string(&path).expect("golden file; run with QTMS_UPDATE_GOLDEN=1 to create");
    assert_eq!(text, golden);
}
