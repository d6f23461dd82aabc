//! CSV and JSON rendering. Numbers are rounded to a fixed number of
//! significant digits (9 unless `QTMS_PRECISION` says otherwise); absent
//! values are empty CSV cells and JSON `null`.

use serde_json::{Map, Value};

use super::{ScenarioError, ScenarioReport, ScenarioResult, Table};

pub const PRECISION_ENV: &str = "QTMS_PRECISION";
const DEFAULT_PRECISION: usize = 9;

/// Significant digits for printed numbers, from `QTMS_PRECISION` (1..=17).
pub fn precision() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|p| (1..=17).contains(p))
        .unwrap_or(DEFAULT_PRECISION)
}

fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// Shortest decimal text of `x` rounded to `digits` significant digits.
pub fn format_number(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        // Scientific notation with trailing zeros trimmed.
        let s = format!("{:.*e}", digits - 1, r);
        let (m, e) = s.split_once('e').expect("exponent");
        let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
        format!("{m}e{e}")
    } else {
        format!("{r}")
    }
}

fn number(x: f64, digits: usize) -> Value {
    serde_json::Number::from_f64(round_sig(x, digits)).map_or(Value::Null, Value::Number)
}

fn round_value(v: Value, digits: usize) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => number(x, digits),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(|x| round_value(x, digits)).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, x)| (k, round_value(x, digits))).collect()),
        other => other,
    }
}

fn to_json_string(v: &Value) -> ScenarioResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| ScenarioError::Config(e.to_string()))
}

/// Deterministic JSON for a report (keys sorted, no timestamps).
pub fn report_to_json(report: &ScenarioReport) -> ScenarioResult<String> {
    let v = serde_json::to_value(report).map_err(|e| ScenarioError::Config(e.to_string()))?;
    to_json_string(&round_value(v, precision()))
}

/// JSON array of row objects keyed by column name.
pub fn table_to_json(table: &Table) -> ScenarioResult<String> {
    let digits = precision();
    let rows: Vec<Value> = table
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut obj = Map::new();
            if let Some((name, labels)) = &table.labels {
                obj.insert(name.clone(), Value::String(labels[i].clone()));
            }
            for (c, x) in table.columns.iter().zip(row) {
                obj.insert(c.clone(), x.map_or(Value::Null, |x| number(x, digits)));
            }
            Value::Object(obj)
        })
        .collect();
    to_json_string(&Value::Array(rows))
}

pub fn table_to_csv(table: &Table) -> ScenarioResult<String> {
    let digits = precision();
    let err = |e: csv::Error| ScenarioError::Config(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = Vec::new();
    if let Some((name, _)) = &table.labels {
        header.push(name.clone());
    }
    header.extend(table.columns.iter().cloned());
    w.write_record(&header).map_err(err)?;
    for (i, row) in table.rows.iter().enumerate() {
        let mut rec: Vec<String> = Vec::new();
        if let Some((_, labels)) = &table.labels {
            rec.push(labels[i].clone());
        }
        rec.extend(row.iter().map(|x| x.map_or(String::new(), |x| format_number(x, digits))));
        w.write_record(&rec).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| ScenarioError::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| ScenarioError::Config(e.to_string()))
}
