use std::collections::BTreeMap;

use serde::Serialize;

use crate::amp_chain::{chain_powers, received_photon_rates, TargetState};
use crate::direct::{
    characteristic_range_direct, effective_snr_direct, max_range_direct_closed_form, max_range_direct_exact,
    single_photon_radar_preset, DetectionThreshold, DirectRadarSystem,
};
use crate::error::Error;
use crate::gaussian::{covariance_detected, covariance_source, simon_parameter};
use crate::noise::{
    characteristic_range_nr, correlation_vs_range, effective_correlation, max_range_nr, max_range_nr_closed_form,
    rho0_from_idler_noise, rho_threshold, snr_threshold_nr, FalseAlarmSpec, NoiseRadarSystem,
};
use crate::physics::{channel_transfer, form_factor, linear_to_db, spatial_mode_count, thermal_noise_power};
use crate::qtms::{quantum_advantage, range_advantage, rho_ci, rho_tmsv, Environment, NoiseFrequency};

use super::{ModelKind, Scenario, ScenarioResult};

/// A derived quantity and the operation that produced it. `value` is
/// `None` when the quantity does not exist (e.g. the maximum range of an
/// undetectable system).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Derived {
    pub value: Option<f64>,
    pub op: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub inputs: Scenario,
    pub derived: BTreeMap<&'static str, Derived>,
    pub warnings: Vec<String>,
}

impl ScenarioReport {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.derived.get(key).and_then(|d| d.value)
    }
}

struct Builder {
    derived: BTreeMap<&'static str, Derived>,
    warnings: Vec<String>,
}

impl Builder {
    fn set(&mut self, key: &'static str, value: f64, op: &'static str) {
        self.derived.insert(key, Derived { value: Some(value), op });
    }

    fn absent(&mut self, key: &'static str, op: &'static str) {
        self.derived.insert(key, Derived { value: None, op });
    }

    /// Records `r` under `key`, or marks it absent with a warning when the
    /// system is undetectable. Other errors propagate.
    fn set_or_undetectable(&mut self, key: &'static str, r: crate::Result<f64>, op: &'static str) -> crate::Result<Option<f64>> {
        match r {
            Ok(v) => {
                self.set(key, v, op);
                Ok(Some(v))
            }
            Err(Error::Undetectable { rho0, rho_th }) => {
                self.absent(key, op);
                let w = format!("undetectable: rho0 = {rho0} does not exceed rho_th = {rho_th}; {key} absent");
                if !self.warnings.contains(&w) {
                    self.warnings.push(w);
                }
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Computes every derived quantity applicable to the scenario's model.
pub fn evaluate(scenario: &Scenario) -> ScenarioResult<ScenarioReport> {
    scenario.validate()?;
    let mut b = Builder {
        derived: BTreeMap::new(),
        warnings: Vec::new(),
    };
    if scenario.model.is_direct() {
        evaluate_direct(scenario, &mut b)?;
    } else {
        evaluate_noise(scenario, &mut b)?;
    }
    Ok(ScenarioReport {
        inputs: scenario.clone(),
        derived: b.derived,
        warnings: b.warnings,
    })
}

fn occupancy_op(s: &Scenario) -> &'static str {
    if s.environment.noise_photons.is_some() {
        "input"
    } else {
        "thermal_occupancy"
    }
}

fn evaluate_direct(s: &Scenario, b: &mut Builder) -> ScenarioResult<()> {
    let link = s.link.build()?;
    let tx = s.transmitter.as_ref().expect("validated");
    let nb = s.noise_photons_at(tx.frequency)?;
    b.set("noise_photons", nb, occupancy_op(s));
    let pn = thermal_noise_power(nb, tx.frequency, s.detection.detection_bandwidth)?;
    b.set("noise_power", pn, "thermal_noise_power");
    let sys = DirectRadarSystem::new(
        link,
        tx.power,
        pn,
        s.detection.integration_time,
        s.detection.detection_bandwidth,
    )?;
    b.set("samples", sys.samples(), "samples");
    b.set("transmit_power", tx.power, "input");
    let th = match s.detection.snr_th_db {
        Some(db) => DetectionThreshold::from_db(db)?,
        None => single_photon_radar_preset(),
    };
    b.set("snr_threshold", th.linear(), "detection_threshold");
    b.set("snr_threshold_db", linear_to_db(th.linear())?, "detection_threshold");
    b.set("characteristic_range", characteristic_range_direct(&sys), "characteristic_range_direct");
    b.set("r_max_closed", max_range_direct_closed_form(&sys, &th), "max_range_direct_closed_form");
    b.set("r_max_exact", max_range_direct_exact(&sys, &th)?, "max_range_direct_exact");
    if let Some(p) = &s.probe {
        b.set("probe_range", p.range, "input");
        b.set("form_factor", form_factor(&link.atmosphere, p.range)?, "form_factor");
        b.set("eta", channel_transfer(&link, p.range)?, "channel_transfer");
        b.set("effective_snr", effective_snr_direct(&sys, p.range)?, "effective_snr_direct");
    }
    Ok(())
}

fn evaluate_noise(s: &Scenario, b: &mut Builder) -> ScenarioResult<()> {
    let link = s.link.build()?;
    let src_cfg = s.source.as_ref().expect("validated");
    let source = s.entangled_source()?.expect("validated");
    let noise_freq = match s.noise_frequency() {
        NoiseFrequency::Idler => source.idler_freq,
        NoiseFrequency::Signal => source.signal_freq,
    };
    let env = Environment {
        noise_photons: s.noise_photons_at(noise_freq)?,
        detection_bandwidth: s.detection.detection_bandwidth,
        integration_time: s.detection.integration_time,
        noise_frequency: s.noise_frequency(),
    };
    b.set("noise_photons", env.noise_photons, occupancy_op(s));
    let pn = env.noise_power(&source)?;
    b.set("noise_power", pn, "thermal_noise_power");
    let pi = source.idler_power();
    b.set("idler_power", pi, "idler_power");
    b.set("samples", env.integration_time * env.detection_bandwidth, "samples");
    if source.bandwidth <= source.signal_freq {
        b.set("spatial_modes", spatial_mode_count(source.signal_freq, source.bandwidth)?, "spatial_mode_count");
    }

    let ns = src_cfg.photons_per_mode;
    let rho0 = match s.model {
        ModelKind::ClassicalNoise => {
            b.set("rho0", src_cfg.rho0.expect("validated"), "input");
            src_cfg.rho0.expect("validated")
        }
        _ => {
            let tmsv = rho_tmsv(ns)?;
            let ci = rho_ci(ns)?;
            b.set("rho_tmsv", tmsv, "rho_tmsv");
            b.set("rho_ci", ci, "rho_ci");
            if ns > 0.0 {
                b.set("q_adv", quantum_advantage(ns)?, "quantum_advantage");
            } else {
                b.absent("q_adv", "quantum_advantage");
                b.warnings.push("quantum advantage undefined at N_s = 0".into());
            }
            let rho0 = if s.model == ModelKind::Qtms { tmsv } else { ci };
            b.set("rho0", rho0, if s.model == ModelKind::Qtms { "rho_tmsv" } else { "rho_ci" });
            rho0
        }
    };

    let fa = FalseAlarmSpec::new(s.detection.p_fa.expect("validated"))?;
    let m = env.integration_time * env.detection_bandwidth;
    let rho_th = rho_threshold(&fa, m)?;
    b.set("rho_th", rho_th, "rho_threshold");

    // A vacuum source cannot be fed to the range model: treat as undetectable.
    let sys = if pi > 0.0 {
        Some(NoiseRadarSystem::new(link, pi, pn, rho0, env.integration_time, env.detection_bandwidth)?)
    } else {
        None
    };
    let undetectable = Err(Error::Undetectable { rho0, rho_th });
    let snr = b.set_or_undetectable("snr_threshold", snr_threshold_nr(rho0, rho_th), "snr_threshold_nr")?;
    match snr {
        Some(v) => b.set("snr_threshold_db", linear_to_db(v)?, "snr_threshold_nr"),
        None => b.absent("snr_threshold_db", "snr_threshold_nr"),
    }
    if let Some(sys) = &sys {
        b.set("characteristic_range", characteristic_range_nr(sys), "characteristic_range_nr");
    }
    let closed = sys.as_ref().map_or(undetectable.clone(), |sys| max_range_nr_closed_form(sys, &fa));
    b.set_or_undetectable("r_max_closed", closed, "max_range_nr_closed_form")?;
    let exact = sys.as_ref().map_or(undetectable.clone(), |sys| max_range_nr(sys, &fa));
    let r_max = b.set_or_undetectable("r_max_exact", exact, "max_range_nr")?;

    if matches!(s.model, ModelKind::Qtms | ModelKind::Ci) {
        match range_advantage(&source, &link, &env, &fa) {
            Ok(adv) => {
                b.set("r_max_tmsv", adv.quantum_range, "range_advantage");
                b.set("r_max_ci", adv.classical_range, "range_advantage");
                b.set("r_adv", adv.advantage, "range_advantage");
            }
            Err(Error::Undetectable { .. }) => {
                b.absent("r_adv", "range_advantage");
                b.warnings.push("range advantage undefined: one of the two systems is undetectable".into());
            }
            Err(e) => return Err(e.into()),
        }
    }
    if s.model == ModelKind::Qtms {
        b.set("simon_f_source", simon_parameter(&covariance_source(ns)?), "simon_parameter");
    }

    let chain = s.chain_config()?;
    if let Some(cfg) = &chain {
        let p = chain_powers(cfg, 0.0, source.signal_freq, source.idler_freq, source.bandwidth)?;
        b.set("idler_added_power", p.idler_noise, "chain_powers");
        let rho0 = rho0_from_idler_noise(p.idler_noise, p.idler_power())?;
        b.set("rho0_chain", rho0, "rho0_from_idler_noise");
        let at = s.probe.map(|p| p.range).or(r_max);
        if let Some(range) = at {
            let eta = channel_transfer(&link, range)?.min(1.0);
            b.set("simon_range", range, if s.probe.is_some() { "input" } else { "max_range_nr" });
            b.set("simon_f_detected", simon_parameter(&covariance_detected(cfg, eta)?), "simon_parameter");
        }
    }

    if let (Some(p), Some(sys)) = (&s.probe, &sys) {
        b.set("probe_range", p.range, "input");
        b.set("form_factor", form_factor(&link.atmosphere, p.range)?, "form_factor");
        b.set("eta", channel_transfer(&link, p.range)?, "channel_transfer");
        b.set("rho_single", correlation_vs_range(sys, p.range)?, "correlation_vs_range");
        b.set("rho_eff", effective_correlation(sys, p.range)?, "effective_correlation");
        if let Some(cfg) = &chain {
            let rates = received_photon_rates(cfg, &link, p.range, source.bandwidth, TargetState::Present)?;
            b.set("rate_corr", rates.rate_corr, "received_photon_rates");
            b.set("rate_added", rates.rate_added, "received_photon_rates");
        }
    }
    Ok(())
}
