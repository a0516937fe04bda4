//! Scenario files, trajectory logs, reports and plots.

mod svg;
mod trajectory;

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::planner::PlannerKind;
use crate::sim::{builtin_scenario, BatchSummary, RunReport, ScenarioConfig};

pub use svg::{render_svg, svg_document, PX_PER_METER};
pub use trajectory::{read_trajectory, trajectory_csv, write_trajectory, TrajectoryRecord};

pub const SCHEMA_VERSION: u32 = 1;

/// Reads a scenario file.
///
/// The file is a JSON object. When its `scenario` key names a builtin, the
/// builtin is the base and the file's keys override it (objects merge key by
/// key, everything else replaces). Otherwise the file must be complete.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<ScenarioConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_scenario_str(&text, &path.display().to_string())
}

/// [`parse_scenario`] on in-memory text; `origin` is used in error messages.
pub fn parse_scenario_str(text: &str, origin: &str) -> Result<ScenarioConfig> {
    let parse_err = |message: String| Error::Parse {
        path: origin.to_string(),
        message,
    };
    let overrides: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    let Value::Object(map) = &overrides else {
        return Err(parse_err("top level must be a JSON object".into()));
    };
    let name = match map.get("scenario") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(parse_err("`scenario`: expected a string".into())),
        None => return Err(parse_err("missing key `scenario`".into())),
    };
    let merged = match builtin_scenario(&name) {
        Ok(base) => {
            let mut base = serde_json::to_value(base).expect("scenario configs serialize");
            merge(&mut base, overrides);
            base
        }
        Err(_) => overrides,
    };
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(merged).map_err(|e| {
        let at = e.path().to_string();
        parse_err(format!("at `{at}`: {}", e.inner()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Resolves a `--scenario` argument: an existing file path, else a builtin name.
pub fn resolve_scenario(arg: &str) -> Result<ScenarioConfig> {
    let path = Path::new(arg);
    if path.is_file() {
        parse_scenario(path)
    } else if arg.ends_with(".json") {
        Err(Error::io(
            path,
            std::io::Error::from(std::io::ErrorKind::NotFound),
        ))
    } else {
        builtin_scenario(arg)
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

pub fn scenario_json(cfg: &ScenarioConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("scenario configs serialize")
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument<'a> {
    pub schema_version: u32,
    pub scenario: &'a str,
    pub planner: PlannerKind,
    pub seeds: Vec<u64>,
    pub runs: &'a [RunReport],
    pub success_rate: f64,
    pub collision_rate: f64,
    pub freezing_rate: f64,
    pub timeout_rate: f64,
    pub mean_time: Option<f64>,
    pub avg_velocity: Option<f64>,
    pub mean_pf: f64,
    pub config: &'a ScenarioConfig,
}

impl<'a> ReportDocument<'a> {
    pub fn new(cfg: &'a ScenarioConfig, runs: &'a [RunReport]) -> Self {
        let s = BatchSummary::from_runs(runs);
        Self {
            schema_version: SCHEMA_VERSION,
            scenario: &cfg.name,
            planner: cfg.planner.kind,
            seeds: s.seeds,
            runs,
            success_rate: s.success_rate,
            collision_rate: s.collision_rate,
            freezing_rate: s.freezing_rate,
            timeout_rate: s.timeout_rate,
            mean_time: s.mean_time,
            avg_velocity: s.avg_velocity,
            mean_pf: s.mean_pf,
            config: cfg,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

pub fn write_report(
    cfg: &ScenarioConfig,
    runs: &[RunReport],
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, ReportDocument::new(cfg, runs).to_json()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_base_with_override() {
        let cfg =
            parse_scenario_str(r#"{"scenario": "1ped-3m", "frozone": {"eta": 2.0}}"#, "t").unwrap();
        assert_eq!(cfg.frozone.eta, 2.0);
        assert_eq!(cfg.pedestrians.len(), 1);
        assert_eq!(
            cfg.frozone.pred_dt,
            crate::freezing::FrozoneConfig::default().pred_dt
        );
    }

    #[test]
    fn negative_eta_is_rejected() {
        let err = parse_scenario_str(r#"{"scenario": "1ped-3m", "frozone": {"eta": -1}}"#, "t")
            .unwrap_err();
        assert!(err.to_string().contains("eta must be > f"), "{err}");
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_scenario_str(r#"{"scenario": "1ped-3m", "frozone": {"etaa": 1.5}}"#, "t")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("etaa") && msg.contains("frozone"), "{msg}");
    }

    #[test]
    fn type_mismatch_is_located() {
        let err =
            parse_scenario_str(r#"{"scenario": "1ped-3m", "runs": "many"}"#, "t").unwrap_err();
        assert!(err.to_string().contains("runs"), "{err}");
    }

    #[test]
    fn custom_scenario_must_be_complete() {
        let err = parse_scenario_str(r#"{"scenario": "mine", "seed": 1}"#, "t").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }

    #[test]
    fn serialized_config_parses_back() {
        let mut cfg = builtin_scenario("crossing").unwrap();
        cfg.name = "custom-crossing".into();
        let again = parse_scenario_str(&scenario_json(&cfg), "t").unwrap();
        assert_eq!(again, cfg);
    }
}
