use nalgebra::Cholesky;
use proptest::prelude::*;

use qtms_core::amp_chain::{chain_powers, idler_detected_photons, signal_detected_photons, AmpStage, ChainConfig, IdlerNoiseForm};
use qtms_core::direct::{
    max_range_direct_exact, range_equation_closed_form, solve_range_equation, DetectionThreshold, DirectRadarSystem,
};
use qtms_core::gaussian::{covariance_detected, covariance_source, simon_parameter};
use qtms_core::noise::rho0_from_idler_noise;
use qtms_core::physics::{channel_transfer, db_to_linear, form_factor, linear_to_db, Atmosphere, RadarLink};
use qtms_core::qtms::{quantum_advantage, rho_ci, rho_tmsv};
use qtms_core::scenario::{parse_scenario, presets::preset};

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn link() -> impl Strategy<Value = RadarLink> {
    (log_uniform(1e-2, 10.0), 0.0..40.0f64, log_uniform(1e-4, 1.0), 0.0..1.0f64).prop_map(|(s, g, a, gamma)| {
        RadarLink::new(s, db_to_linear(g), a, Atmosphere::from_db_per_km(gamma).unwrap()).unwrap()
    })
}

fn direct_system() -> impl Strategy<Value = DirectRadarSystem> {
    (link(), log_uniform(1e-12, 1.0), log_uniform(1e-17, 1e-13), log_uniform(1e-3, 10.0), log_uniform(1e4, 1e7))
        .prop_map(|(l, p, n, t, b)| DirectRadarSystem::new(l, p, n, t, b).unwrap())
}

fn stage() -> impl Strategy<Value = AmpStage> {
    (0.0..80.0f64, log_uniform(1e-3, 1e6)).prop_map(|(g, n)| AmpStage::from_db(g, n).unwrap())
}

fn chain() -> impl Strategy<Value = ChainConfig> {
    (log_uniform(1e-4, 10.0), stage(), stage(), stage(), stage(), log_uniform(1e-2, 1e4), any::<bool>()).prop_map(
        |(n, ts, ti, rs, ri, env, alt)| ChainConfig {
            source_photons: n,
            tx_signal: ts,
            tx_idler: ti,
            rx_signal: rs,
            rx_idler: ri,
            env_noise_photons: env,
            idler_noise_form: if alt { IdlerNoiseForm::TotalGain } else { IdlerNoiseForm::Consistent },
        },
    )
}

proptest! {
    #[test]
    fn db_round_trip(x in -200.0..200.0f64) {
        let back = linear_to_db(db_to_linear(x)).unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs().max(1.0));
    }

    #[test]
    fn vacuum_transfer_scales_as_inverse_fourth_power(l in link(), r in log_uniform(1.0, 1e5)) {
        let vac = RadarLink { atmosphere: Atmosphere::VACUUM, ..l };
        let ratio = channel_transfer(&vac, r).unwrap() / channel_transfer(&vac, 2.0 * r).unwrap();
        prop_assert!((ratio / 16.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn form_factor_composes(g in 0.0..10.0f64, r1 in 0.0..1e4f64, r2 in 0.0..1e4f64) {
        let atm = Atmosphere::from_db_per_km(g).unwrap();
        let lhs = form_factor(&atm, r1 + r2).unwrap();
        let rhs = form_factor(&atm, r1).unwrap() * form_factor(&atm, r2).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solver_root_is_bracketed(a in log_uniform(1e-9, 10.0), k in log_uniform(1e-3, 1e6)) {
        let r = solve_range_equation(a, k).unwrap();
        prop_assert!(r > 0.0 && r <= k);
        prop_assert!(((r * (a * r).exp()) / k - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_never_undershoots(ak in log_uniform(1e-6, 10.0), a in log_uniform(1e-6, 1.0)) {
        let exact = solve_range_equation(a, ak / a).unwrap();
        let closed = range_equation_closed_form(a, ak / a);
        prop_assert!(closed >= exact * (1.0 - 1e-14));
    }

    #[test]
    fn power_noise_scale_invariance(sys in direct_system(), scale in log_uniform(1e-3, 1e3), snr in -60.0..30.0f64) {
        let th = DetectionThreshold::from_db(snr).unwrap();
        let scaled = DirectRadarSystem { transmit_power: sys.transmit_power * scale, noise_power: sys.noise_power * scale, ..sys };
        let a = max_range_direct_exact(&sys, &th).unwrap();
        let b = max_range_direct_exact(&scaled, &th).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn range_monotone_in_power_and_threshold(sys in direct_system(), snr in -60.0..30.0f64) {
        let th = DetectionThreshold::from_db(snr).unwrap();
        let harder = DetectionThreshold::from_db(snr + 1.0).unwrap();
        let louder = DirectRadarSystem { transmit_power: sys.transmit_power * 2.0, ..sys };
        let base = max_range_direct_exact(&sys, &th).unwrap();
        prop_assert!(max_range_direct_exact(&louder, &th).unwrap() > base);
        prop_assert!(max_range_direct_exact(&sys, &harder).unwrap() < base);
    }

    #[test]
    fn quantum_advantage_identity(n in log_uniform(1e-6, 1e4)) {
        let q = rho_tmsv(n).unwrap() / rho_ci(n).unwrap();
        prop_assert!((q / quantum_advantage(n).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(rho_tmsv(n).unwrap() >= rho_ci(n).unwrap());
    }

    #[test]
    fn added_noise_grows_with_stage_noise(cfg in chain(), extra in log_uniform(1e-3, 1e3), eta in 0.0..1.0f64) {
        let noisier = ChainConfig {
            tx_idler: AmpStage { added_noise_photons: cfg.tx_idler.added_noise_photons + extra, ..cfg.tx_idler },
            rx_idler: AmpStage { added_noise_photons: cfg.rx_idler.added_noise_photons + extra, ..cfg.rx_idler },
            rx_signal: AmpStage { added_noise_photons: cfg.rx_signal.added_noise_photons + extra, ..cfg.rx_signal },
            env_noise_photons: cfg.env_noise_photons + extra,
            ..cfg
        };
        prop_assert!(idler_detected_photons(&noisier).unwrap().added >= idler_detected_photons(&cfg).unwrap().added);
        prop_assert!(signal_detected_photons(&noisier, eta).unwrap().added >= signal_detected_photons(&cfg, eta).unwrap().added);
    }

    #[test]
    fn added_noise_grows_with_gain(cfg in chain(), extra_db in 0.1..20.0f64) {
        let g = db_to_linear(extra_db);
        let louder = ChainConfig { rx_idler: AmpStage { gain: cfg.rx_idler.gain * g, ..cfg.rx_idler }, ..cfg };
        prop_assert!(idler_detected_photons(&louder).unwrap().added >= idler_detected_photons(&cfg).unwrap().added);
    }

    #[test]
    fn chain_rho0_in_unit_interval(cfg in chain()) {
        let p = chain_powers(&cfg, 0.0, 9e9, 9e9, 1e9).unwrap();
        let rho0 = rho0_from_idler_noise(p.idler_noise, p.idler_power()).unwrap();
        prop_assert!((0.0..=1.0).contains(&rho0));
    }

    #[test]
    fn simon_identity(n in log_uniform(1e-6, 1e3)) {
        let f = simon_parameter(&covariance_source(n).unwrap());
        let expect = -16.0 * n * (n + 1.0);
        prop_assert!((f / expect - 1.0).abs() < 1e-10);
    }

    #[test]
    fn covariances_factor(cfg in chain(), eta in 0.0..1.0f64) {
        let src = covariance_source(cfg.source_photons).unwrap();
        prop_assert!(Cholesky::new(src.matrix()).is_some() || cfg.source_photons == 0.0);
        let det = covariance_detected(&cfg, eta).unwrap();
        prop_assert!(Cholesky::new(det.matrix()).is_some());
    }

    #[test]
    fn scenario_round_trip(rcs in log_uniform(1e-3, 10.0), ns in log_uniform(1e-3, 10.0), tau in log_uniform(1e-3, 10.0), p_fa in log_uniform(1e-9, 0.9)) {
        let mut s = preset("table3:proposed").unwrap();
        s.link.rcs = rcs;
        s.source.as_mut().unwrap().photons_per_mode = ns;
        s.detection.integration_time = tau;
        s.detection.p_fa = Some(p_fa);
        let text = s.to_toml().unwrap();
        prop_assert_eq!(parse_scenario(&text).unwrap(), s);
    }
}
