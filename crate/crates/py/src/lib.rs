//! Python bindings for the crowd-navigation library.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use crowdnav::freezing::Branch as DeviationBranch;
use crowdnav::io::{parse_scenario_str, resolve_scenario, scenario_json, trajectory_csv};
use crowdnav::sim::{self, BUILTIN_NAMES};
use crowdnav::{Error, Hull, Observation, PlannerKind, Pose2, SensorFrame, Vec2};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn v(p: (f64, f64)) -> Vec2 {
    Vec2::new(p.0, p.1)
}

fn t(p: Vec2) -> (f64, f64) {
    (p.x, p.y)
}

fn planner_kind(name: &str) -> PyResult<PlannerKind> {
    name.parse().map_err(|e: Error| py_err(e))
}

/// A scenario configuration.
#[pyclass(name = "Scenario", module = "crowdnav_py", from_py_object)]
#[derive(Clone)]
struct PyScenario {
    inner: crowdnav::ScenarioConfig,
}

#[pymethods]
impl PyScenario {
    /// Builtin name or path to a JSON scenario file.
    #[new]
    fn new(scenario: &str) -> PyResult<Self> {
        Ok(Self {
            inner: resolve_scenario(scenario).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: parse_scenario_str(text, "<string>").map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        scenario_json(&self.inner)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn planner(&self) -> String {
        self.inner.planner.kind.to_string()
    }

    #[setter]
    fn set_planner(&mut self, kind: &str) -> PyResult<()> {
        self.inner.planner.kind = planner_kind(kind)?;
        Ok(())
    }

    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.seed = seed;
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name={:?}, planner={}, seed={})",
            self.inner.name, self.inner.planner.kind, self.inner.seed
        )
    }
}

/// Outcome and metrics of one run.
#[pyclass(name = "RunReport", module = "crowdnav_py", frozen)]
struct PyRunReport {
    inner: sim::RunReport,
}

#[pymethods]
impl PyRunReport {
    #[getter]
    fn scenario(&self) -> &str {
        &self.inner.scenario
    }
    #[getter]
    fn planner(&self) -> String {
        self.inner.planner.to_string()
    }
    #[getter]
    fn seed(&self) -> u64 {
        self.inner.seed
    }
    /// One of "Success", "Collision", "Frozen", "Timeout".
    #[getter]
    fn outcome(&self) -> String {
        format!("{:?}", self.inner.outcome)
    }
    #[getter]
    fn time_to_goal(&self) -> Option<f64> {
        self.inner.time_to_goal
    }
    #[getter]
    fn elapsed(&self) -> f64 {
        self.inner.elapsed
    }
    #[getter]
    fn avg_speed(&self) -> f64 {
        self.inner.avg_speed
    }
    #[getter]
    fn pf(&self) -> f64 {
        self.inner.pf
    }
    #[getter]
    fn min_ped_dist(&self) -> f64 {
        self.inner.min_ped_dist
    }
    #[getter]
    fn trigger_count(&self) -> usize {
        self.inner.trigger_count
    }

    /// Robot positions, one per planning tick.
    fn robot_path(&self) -> Vec<(f64, f64)> {
        self.inner
            .trajectory
            .iter()
            .map(|s| t(s.robot.position))
            .collect()
    }

    /// The trajectory log as CSV text.
    fn trajectory_csv(&self) -> String {
        trajectory_csv(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "RunReport(scenario={:?}, planner={}, seed={}, outcome={:?}, pf={})",
            self.inner.scenario,
            self.inner.planner,
            self.inner.seed,
            self.inner.outcome,
            self.inner.pf
        )
    }
}

/// Aggregate rates over a batch of seeds.
#[pyclass(name = "BatchSummary", module = "crowdnav_py", frozen, get_all)]
struct PyBatchSummary {
    scenario: String,
    planner: String,
    seeds: Vec<u64>,
    success_rate: f64,
    collision_rate: f64,
    freezing_rate: f64,
    timeout_rate: f64,
    mean_time: Option<f64>,
    avg_velocity: Option<f64>,
    mean_pf: f64,
}

impl From<sim::BatchSummary> for PyBatchSummary {
    fn from(s: sim::BatchSummary) -> Self {
        Self {
            scenario: s.scenario,
            planner: s.planner.to_string(),
            seeds: s.seeds,
            success_rate: s.success_rate,
            collision_rate: s.collision_rate,
            freezing_rate: s.freezing_rate,
            timeout_rate: s.timeout_rate,
            mean_time: s.mean_time,
            avg_velocity: s.avg_velocity,
            mean_pf: s.mean_pf,
        }
    }
}

#[pymethods]
impl PyBatchSummary {
    fn __repr__(&self) -> String {
        format!(
            "BatchSummary(scenario={:?}, planner={}, runs={}, success={:.2}, freezing={:.2}, collision={:.2})",
            self.scenario,
            self.planner,
            self.seeds.len(),
            self.success_rate,
            self.freezing_rate,
            self.collision_rate
        )
    }
}

/// A potential freezing zone in the robot frame.
#[pyclass(name = "Pfz", module = "crowdnav_py", frozen)]
struct PyPfz {
    inner: crowdnav::Pfz,
}

#[pymethods]
impl PyPfz {
    #[staticmethod]
    fn circle(center: (f64, f64), radius: f64) -> Self {
        Self {
            inner: crowdnav::Pfz::Circle {
                center: v(center),
                radius,
            },
        }
    }

    #[staticmethod]
    fn segment(a: (f64, f64), b: (f64, f64), inflation: f64) -> Self {
        Self {
            inner: crowdnav::Pfz::Segment {
                a: v(a),
                b: v(b),
                inflation,
            },
        }
    }

    /// Zone built from predicted pedestrian positions with the default
    /// configuration; `None` for an empty list.
    #[staticmethod]
    fn from_points(points: Vec<(f64, f64)>) -> Option<Self> {
        let pts: Vec<Vec2> = points.into_iter().map(v).collect();
        crowdnav::freezing::build_pfz(&pts, &crowdnav::FrozoneConfig::default())
            .map(|inner| Self { inner })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner {
            crowdnav::Pfz::Circle { .. } => "circle",
            crowdnav::Pfz::Segment { .. } => "segment",
            crowdnav::Pfz::Polygon(_) => "polygon",
        }
    }

    fn contains(&self, p: (f64, f64)) -> bool {
        crowdnav::contains(&self.inner, v(p))
    }

    fn distance(&self, p: (f64, f64)) -> f64 {
        crowdnav::dist_to_zone(&self.inner, v(p))
    }

    fn __repr__(&self) -> String {
        format!("Pfz({:?})", self.inner)
    }
}

/// Natural walking speed for the free space ahead, default model.
#[pyfunction]
#[pyo3(signature = (front_space, pref_speed = 1.3))]
fn walking_speed(front_space: f64, pref_speed: f64) -> PyResult<f64> {
    crowdnav::walking_speed(front_space, &crowdnav::FdParams::default(), pref_speed).map_err(py_err)
}

/// Hull vertices: one point, the two ends of a collinear set, or a
/// counter-clockwise polygon.
#[pyfunction]
fn convex_hull(points: Vec<(f64, f64)>) -> PyResult<Vec<(f64, f64)>> {
    let pts: Vec<Vec2> = points.into_iter().map(v).collect();
    let hull: Hull = crowdnav::convex_hull(&pts).map_err(py_err)?;
    Ok(hull.vertices().into_iter().map(t).collect())
}

/// Largest rotation the deviation can apply, rad.
#[pyfunction]
#[pyo3(signature = (eta = 1.4, offset = 0.5))]
fn max_deviation(eta: f64, offset: f64) -> f64 {
    crowdnav::FrozoneConfig {
        eta,
        ..Default::default()
    }
    .max_deviation(offset)
}

/// Runs the freezing-zone layer on one robot-frame snapshot.
///
/// `pedestrians` holds `(x, y, vx, vy)` tuples. Returns a dict with
/// `triggered`, `phi`, `branch`, `velocity` and `zone` (a `Pfz` or None).
#[pyfunction]
#[pyo3(signature = (pedestrians, goal, velocity, eta = 1.4))]
fn frozone_step<'py>(
    py: Python<'py>,
    pedestrians: Vec<(f64, f64, f64, f64)>,
    goal: (f64, f64),
    velocity: (f64, f64),
    eta: f64,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let cfg = crowdnav::FrozoneConfig {
        eta,
        ..Default::default()
    };
    let offset = crowdnav::SensorConfig::default().offset;
    cfg.validate(offset).map_err(py_err)?;
    let observations = pedestrians
        .into_iter()
        .enumerate()
        .map(|(i, (x, y, vx, vy))| {
            let vel = Vec2::new(vx, vy);
            Observation {
                id: i as u32,
                position: Vec2::new(x, y),
                forward: vel.normalized(),
                speed: Some(vel.norm()),
            }
        })
        .collect();
    let frame = SensorFrame {
        timestamp: 0.0,
        robot_pose: Pose2::default(),
        observations,
    };
    let out = crowdnav::frozone_step(&frame, v(goal), v(velocity), &cfg, offset);
    let d = pyo3::types::PyDict::new(py);
    d.set_item("triggered", out.deviation.triggered)?;
    d.set_item("phi", out.deviation.phi)?;
    let branch = match out.deviation.chosen_branch {
        DeviationBranch::Phi1 => Some("phi1"),
        DeviationBranch::Phi2 => Some("phi2"),
        DeviationBranch::None => None,
    };
    d.set_item("branch", branch)?;
    d.set_item("velocity", t(out.velocity()))?;
    let zone = out.pfz.map(|inner| PyPfz { inner });
    d.set_item("zone", zone)?;
    Ok(d)
}

#[pyfunction]
fn list_scenarios() -> Vec<&'static str> {
    BUILTIN_NAMES.to_vec()
}

fn scenario_arg(
    scenario: &Bound<'_, PyAny>,
    planner: Option<&str>,
) -> PyResult<crowdnav::ScenarioConfig> {
    let mut cfg = if let Ok(s) = scenario.extract::<PyScenario>() {
        s.inner
    } else {
        let name: String = scenario.extract()?;
        resolve_scenario(&name).map_err(py_err)?
    };
    if let Some(kind) = planner {
        cfg.planner.kind = planner_kind(kind)?;
    }
    Ok(cfg)
}

/// Runs one seed of a scenario (a `Scenario`, builtin name or file path).
#[pyfunction]
#[pyo3(signature = (scenario, planner = None, seed = None))]
fn run_scenario(
    py: Python<'_>,
    scenario: &Bound<'_, PyAny>,
    planner: Option<&str>,
    seed: Option<u64>,
) -> PyResult<PyRunReport> {
    let cfg = scenario_arg(scenario, planner)?;
    let seed = seed.unwrap_or(cfg.seed);
    let report = py.detach(|| sim::run_seed(&cfg, seed)).map_err(py_err)?;
    Ok(PyRunReport { inner: report })
}

/// Runs `seeds` consecutive seeds and returns `(reports, summary)`.
#[pyfunction]
#[pyo3(signature = (scenario, seeds, planner = None))]
fn run_batch(
    py: Python<'_>,
    scenario: &Bound<'_, PyAny>,
    seeds: usize,
    planner: Option<&str>,
) -> PyResult<(Vec<PyRunReport>, PyBatchSummary)> {
    let cfg = scenario_arg(scenario, planner)?;
    let (runs, summary) = py.detach(|| sim::run_batch(&cfg, seeds)).map_err(py_err)?;
    Ok((
        runs.into_iter()
            .map(|inner| PyRunReport { inner })
            .collect(),
        summary.into(),
    ))
}

#[pymodule]
pub fn crowdnav_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_class::<PyRunReport>()?;
    m.add_class::<PyBatchSummary>()?;
    m.add_class::<PyPfz>()?;
    m.add_function(wrap_pyfunction!(walking_speed, m)?)?;
    m.add_function(wrap_pyfunction!(convex_hull, m)?)?;
    m.add_function(wrap_pyfunction!(max_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(frozone_step, m)?)?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(run_batch, m)?)?;
    Ok(())
}
