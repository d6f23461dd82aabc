use rayon::prelude::*;
use serde::Serialize;

use super::presets::preset;
use super::{evaluate, ScenarioError, ScenarioResult, Table};

/// Published values: preset, label, Q_adv, R_adv, R_max (m).
pub const TABLE3_PUBLISHED: [(&str, &str, f64, f64, f64); 4] = [
    ("table3:barzanjeh", "Barzanjeh", 1.73, 1.32, 1039.7),
    ("table3:luong", "Luong", 1.65, 1.29, 50.2),
    ("table3:livreri", "Livreri", 4.58, 2.14, 641.8),
    ("table3:proposed", "Proposed", 4.58, 2.14, 1421.4),
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table3Row {
    pub system: String,
    pub q_adv: f64,
    pub r_adv: f64,
    pub r_max_closed: f64,
    pub r_max_exact: f64,
    pub characteristic_range: f64,
    pub published_q_adv: f64,
    pub published_r_adv: f64,
    pub published_r_max: f64,
    /// `(r_max_closed − published_r_max) / published_r_max`.
    pub r_max_deviation: f64,
}

fn required(report: &super::ScenarioReport, key: &str, system: &str) -> ScenarioResult<f64> {
    report
        .get(key)
        .ok_or_else(|| ScenarioError::Config(format!("{system}: `{key}` unavailable")))
}

/// Evaluates the four Table-3 presets.
pub fn table3_report() -> ScenarioResult<Vec<Table3Row>> {
    TABLE3_PUBLISHED
        .par_iter()
        .map(|&(name, label, q, r_adv, r_max)| {
            let s = preset(name).expect("built-in preset");
            let rep = evaluate(&s)?;
            let closed = required(&rep, "r_max_closed", label)?;
            Ok(Table3Row {
                system: label.to_string(),
                q_adv: required(&rep, "q_adv", label)?,
                r_adv: required(&rep, "r_adv", label)?,
                r_max_closed: closed,
                r_max_exact: required(&rep, "r_max_exact", label)?,
                characteristic_range: required(&rep, "characteristic_range", label)?,
                published_q_adv: q,
                published_r_adv: r_adv,
                published_r_max: r_max,
                r_max_deviation: (closed - r_max) / r_max,
            })
        })
        .collect()
}

impl Table3Row {
    pub fn to_table(rows: &[Table3Row]) -> Table {
        let columns = [
            "q_adv",
            "published_q_adv",
            "r_adv",
            "published_r_adv",
            "r_max_closed",
            "r_max_exact",
            "published_r_max",
            "r_max_deviation",
            "characteristic_range",
        ];
        Table {
            labels: Some(("system".into(), rows.iter().map(|r| r.system.clone()).collect())),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: rows
                .iter()
                .map(|r| {
                    [
                        r.q_adv,
                        r.published_q_adv,
                        r.r_adv,
                        r.published_r_adv,
                        r.r_max_closed,
                        r.r_max_exact,
                        r.published_r_max,
                        r.r_max_deviation,
                        r.characteristic_range,
                    ]
                    .into_iter()
                    .map(Some)
                    .collect()
                })
                .collect(),
        }
    }
}
