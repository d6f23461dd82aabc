use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{evaluate, Scenario, ScenarioError, ScenarioResult};

/// Grid of values for one sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grid {
    List(Vec<f64>),
    Linear { start: f64, stop: f64, count: usize },
    Log { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> ScenarioResult<Vec<f64>> {
        let bad = |m: &str| Err(ScenarioError::Config(m.to_string()));
        match *self {
            Grid::List(ref v) => {
                if v.is_empty() {
                    return bad("sweep grid has no values");
                }
                Ok(v.clone())
            }
            Grid::Linear { start, stop, count } => {
                if count == 0 {
                    return bad("sweep grid has no values");
                }
                if count == 1 {
                    return Ok(vec![start]);
                }
                let step = (stop - start) / (count - 1) as f64;
                Ok((0..count).map(|k| if k + 1 == count { stop } else { start + step * k as f64 }).collect())
            }
            Grid::Log { start, stop, count } => {
                if count == 0 {
                    return bad("sweep grid has no values");
                }
                if !(start > 0.0 && stop > 0.0) {
                    return bad("log grid bounds must be > 0");
                }
                if count == 1 {
                    return Ok(vec![start]);
                }
                let (a, z) = (start.log10(), stop.log10());
                let step = (z - a) / (count - 1) as f64;
                Ok((0..count)
                    .map(|k| match k {
                        0 => start,
                        _ if k + 1 == count => stop,
                        _ => 10f64.powf(a + step * k as f64),
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    /// Dotted path of a numeric scenario field, e.g. `source.photons_per_mode`.
    pub path: String,
    pub grid: Grid,
}

impl FromStr for SweepAxis {
    type Err = ScenarioError;

    /// `path=v1,v2,...`, `path=lin:start:stop:count` or `path=log:start:stop:count`.
    fn from_str(s: &str) -> ScenarioResult<Self> {
        let err = |m: String| ScenarioError::Config(m);
        let (path, spec) = s
            .split_once('=')
            .ok_or_else(|| err(format!("sweep axis `{s}` must look like path=values")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| err(format!("bad number `{t}` in sweep axis `{s}`")))
        };
        let parts: Vec<&str> = spec.split(':').collect();
        let grid = match parts.as_slice() {
            [kind @ ("lin" | "log"), a, b, n] => {
                let count = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| err(format!("bad count `{n}` in sweep axis `{s}`")))?;
                let (start, stop) = (num(a)?, num(b)?);
                if *kind == "lin" {
                    Grid::Linear { start, stop, count }
                } else {
                    Grid::Log { start, stop, count }
                }
            }
            [list] => Grid::List(list.split(',').filter(|t| !t.trim().is_empty()).map(num).collect::<ScenarioResult<_>>()?),
            _ => return Err(err(format!("cannot parse sweep axis `{s}`"))),
        };
        Ok(SweepAxis {
            path: path.trim().to_string(),
            grid,
        })
    }
}

/// Cartesian product of `axes` (first axis varies slowest), reporting
/// `outputs` (keys of [`super::ScenarioReport::derived`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    /// Optional leading text column: its header and one entry per row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<(String, Vec<String>)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

fn set_path(root: &mut Value, path: &str, value: f64) -> ScenarioResult<()> {
    let unresolved = || ScenarioError::Config(format!("sweep path `{path}` does not name a numeric scenario field"));
    let segments: Vec<&str> = path.split('.').collect();
    if segments.iter().any(|s| s.is_empty()) {
        return Err(unresolved());
    }
    let mut node = root;
    for seg in &segments[..segments.len() - 1] {
        let obj = node.as_object_mut().ok_or_else(unresolved)?;
        node = obj.entry(seg.to_string()).or_insert_with(|| Value::Object(Default::default()));
    }
    let obj = node.as_object_mut().ok_or_else(unresolved)?;
    let leaf = segments[segments.len() - 1];
    if let Some(existing) = obj.get(leaf) {
        if !existing.is_number() {
            return Err(unresolved());
        }
    }
    let num = serde_json::Number::from_f64(value).ok_or_else(|| ScenarioError::Config(format!("non-finite sweep value for `{path}`")))?;
    obj.insert(leaf.to_string(), Value::Number(num));
    Ok(())
}

/// Returns `base` with each `(path, value)` numeric field replaced, then
/// validated.
pub fn with_parameters(base: &Scenario, params: &[(&str, f64)]) -> ScenarioResult<Scenario> {
    let mut v = serde_json::to_value(base).map_err(|e| ScenarioError::Config(e.to_string()))?;
    for &(path, value) in params {
        set_path(&mut v, path, value)?;
    }
    let s: Scenario = serde_json::from_value(v).map_err(|e| {
        let paths: Vec<&str> = params.iter().map(|p| p.0).collect();
        ScenarioError::Config(format!("sweep path `{}` does not resolve: {e}", paths.join("`, `")))
    })?;
    s.validate()?;
    Ok(s)
}

pub fn run_sweep(base: &Scenario, spec: &SweepSpec) -> ScenarioResult<Table> {
    if spec.outputs.is_empty() {
        return Err(ScenarioError::Config("sweep requests no outputs".into()));
    }
    if spec.axes.is_empty() {
        return Err(ScenarioError::Config("sweep has no axes".into()));
    }
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(|a| a.grid.values()).collect::<ScenarioResult<_>>()?;
    // Resolve the paths once up front so a bad path fails before any work.
    let first: Vec<(&str, f64)> = spec.axes.iter().zip(&grids).map(|(a, g)| (a.path.as_str(), g[0])).collect();
    with_parameters(base, &first)?;

    let total: usize = grids.iter().map(Vec::len).product();
    let points: Vec<Vec<f64>> = (0..total)
        .map(|mut k| {
            let mut p = vec![0.0; grids.len()];
            for (i, g) in grids.iter().enumerate().rev() {
                p[i] = g[k % g.len()];
                k /= g.len();
            }
            p
        })
        .collect();

    let reports = points
        .par_iter()
        .map(|p| {
            let params: Vec<(&str, f64)> = spec.axes.iter().zip(p).map(|(a, &v)| (a.path.as_str(), v)).collect();
            evaluate(&with_parameters(base, &params)?)
        })
        .collect::<ScenarioResult<Vec<_>>>()?;

    for out in &spec.outputs {
        if !reports.iter().any(|r| r.derived.contains_key(out.as_str())) {
            return Err(ScenarioError::Config(format!("unknown output `{out}` for this scenario")));
        }
    }

    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.path.clone()).collect();
    columns.extend(spec.outputs.iter().cloned());
    let rows = points
        .into_iter()
        .zip(&reports)
        .map(|(p, r)| {
            let mut row: Vec<Option<f64>> = p.into_iter().map(Some).collect();
            row.extend(spec.outputs.iter().map(|o| r.get(o)));
            row
        })
        .collect();
    Ok(Table { labels: None, columns, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::presets::preset;

    #[test]
    fn grids() {
        assert_eq!(Grid::Linear { start: 0.0, stop: 1.0, count: 3 }.values().unwrap(), vec![0.0, 0.5, 1.0]);
        let g = Grid::Log { start: 1e-2, stop: 1e2, count: 5 }.values().unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[2] - 1.0).abs() < 1e-12);
        assert_eq!(g[4], 1e2);
        assert!(Grid::List(vec![]).values().is_err());
    }

    #[test]
    fn axis_parsing() {
        let a: SweepAxis = "detection.p_fa=1e-5,0.5".parse().unwrap();
        assert_eq!(a.grid, Grid::List(vec![1e-5, 0.5]));
        let a: SweepAxis = "source.photons_per_mode=log:0.01:100:9".parse().unwrap();
        assert_eq!(a.grid, Grid::Log { start: 0.01, stop: 100.0, count: 9 });
        assert!("nope".parse::<SweepAxis>().is_err());
        assert!("x=lin:1:2".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn empty_outputs_rejected() {
        let spec = SweepSpec {
            axes: vec!["detection.p_fa=0.5".parse().unwrap()],
            outputs: vec![],
        };
        assert!(matches!(run_sweep(&preset("table3:proposed").unwrap(), &spec), Err(ScenarioError::Config(_))));
    }

    #[test]
    fn unresolvable_path() {
        let base = preset("table3:proposed").unwrap();
        for path in ["source.nonsense", "model", "detection..p_fa", "link.rcs.x"] {
            let spec = SweepSpec {
                axes: vec![SweepAxis { path: path.into(), grid: Grid::List(vec![1.0]) }],
                outputs: vec!["r_max_exact".into()],
            };
            assert!(run_sweep(&base, &spec).is_err(), "{path}");
        }
    }

    #[test]
    fn singleton_matches_evaluate() {
        let base = preset("table3:proposed").unwrap();
        let spec = SweepSpec {
            axes: vec!["detection.integration_time=0.5".parse().unwrap()],
            outputs: vec!["r_max_exact".into(), "r_adv".into(), "q_adv".into()],
        };
        let t = run_sweep(&base, &spec).unwrap();
        let r = evaluate(&base).unwrap();
        assert_eq!(t.rows[0][1], r.get("r_max_exact"));
        assert_eq!(t.rows[0][2], r.get("r_adv"));
        assert_eq!(t.rows[0][3], r.get("q_adv"));
    }

    #[test]
    fn cartesian_order() {
        let base = preset("table3:proposed").unwrap();
        let spec = SweepSpec {
            axes: vec![
                "detection.integration_time=0.001,0.5".parse().unwrap(),
                "detection.p_fa=1e-5,0.5".parse().unwrap(),
            ],
            outputs: vec!["r_max_exact".into()],
        };
        let t = run_sweep(&base, &spec).unwrap();
        let keys: Vec<(f64, f64)> = t.rows.iter().map(|r| (r[0].unwrap(), r[1].unwrap())).collect();
        assert_eq!(keys, vec![(0.001, 1e-5), (0.001, 0.5), (0.5, 1e-5), (0.5, 0.5)]);
    }

    #[test]
    fn probe_range_can_be_added() {
        let base = preset("table3:proposed").unwrap();
        let spec = SweepSpec {
            axes: vec!["probe.range=100,1000".parse().unwrap()],
            outputs: vec!["rho_eff".into()],
        };
        let t = run_sweep(&base, &spec).unwrap();
        assert!(t.rows[0][1].unwrap() > t.rows[1][1].unwrap());
    }
}
