//! Deterministic world stepping, scenario execution and batch metrics.
//!
//! A run owns its world, its sensor-noise rng and its trajectory log. The
//! robot re-plans every sensor frame; pedestrians and the drive are
//! integrated every `sim_dt`.

pub mod metrics;
pub mod scenarios;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freezing::FrozoneConfig;
use crate::geometry::{dist, rotate, Pfz, Vec2};
use crate::pedestrian::{
    front_space, step_pedestrian, walking_speed, FdParams, PedestrianState,
    DEFAULT_FRONT_SPACE_CAP, DEFAULT_PREF_SPEED,
};
use crate::planner::{
    baseline_velocity, track_velocity, Branch, HybridController, PlannerConfig, PlannerKind,
    RobotState,
};
use crate::sensing::{sense, sense_range, MotionTracker, Pose2, RangeSensorConfig, SensorConfig};

pub use metrics::{freeze_detector, frp_predicate, FriendlinessTracker, PF_INFINITY};
pub use scenarios::{builtin_scenario, builtin_scenarios, BUILTIN_NAMES};

/// Distance to the goal that counts as arrival, m.
pub const GOAL_TOLERANCE: f64 = 0.3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RobotSpec {
    pub start: Vec2,
    #[serde(default)]
    pub heading: f64,
    pub goal: Vec2,
}

fn default_pref_speed() -> f64 {
    DEFAULT_PREF_SPEED
}

fn default_ped_radius() -> f64 {
    0.25
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Script of one pedestrian (or, with `fixed`, one wall disc).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PedestrianSpec {
    pub start: Vec2,
    #[serde(default)]
    pub waypoints: Vec<Vec2>,
    #[serde(default = "default_pref_speed")]
    pub pref_speed: f64,
    #[serde(default = "default_ped_radius")]
    pub radius: f64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub fixed: bool,
}

impl PedestrianSpec {
    pub fn walker(start: Vec2, waypoints: Vec<Vec2>, pref_speed: f64) -> Self {
        Self {
            start,
            waypoints,
            pref_speed,
            radius: default_ped_radius(),
            fixed: false,
        }
    }

    pub fn wall(at: Vec2) -> Self {
        Self {
            start: at,
            waypoints: Vec::new(),
            pref_speed: DEFAULT_PREF_SPEED,
            radius: default_ped_radius(),
            fixed: true,
        }
    }
}

/// Pedestrians drawn per seed: each starts uniformly inside the box and walks
/// through `legs` uniformly drawn waypoints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomCrowd {
    pub count: usize,
    pub center: Vec2,
    pub half_extent: Vec2,
    pub legs: usize,
    pub min_speed: f64,
    pub max_speed: f64,
    /// Minimum start distance from the robot's start, m.
    pub keep_clear: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(rename = "scenario")]
    pub name: String,
    pub seed: u64,
    pub runs: usize,
    pub duration_limit: f64,
    pub sim_dt: f64,
    pub robot: RobotSpec,
    pub pedestrians: Vec<PedestrianSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_crowd: Option<RandomCrowd>,
    pub sensing: SensorConfig,
    /// Obstacle sensor of the guiding planner.
    #[serde(default)]
    pub range_sensor: RangeSensorConfig,
    pub frozone: FrozoneConfig,
    pub planner: PlannerConfig,
    pub pedestrian_model: FdParams,
    /// Exponential smoothing of tracked pedestrian velocities, in `[0, 1)`.
    pub velocity_smoothing: f64,
}

impl ScenarioConfig {
    pub fn new(
        name: impl Into<String>,
        robot: RobotSpec,
        pedestrians: Vec<PedestrianSpec>,
    ) -> Self {
        Self {
            name: name.into(),
            seed: 0,
            runs: 20,
            duration_limit: 120.0,
            sim_dt: 0.05,
            robot,
            pedestrians,
            random_crowd: None,
            sensing: SensorConfig::default(),
            range_sensor: RangeSensorConfig::default(),
            frozone: FrozoneConfig::default(),
            planner: PlannerConfig::default(),
            pedestrian_model: FdParams::default(),
            velocity_smoothing: DEFAULT_VELOCITY_SMOOTHING,
        }
    }

    pub fn with_planner(mut self, kind: PlannerKind) -> Self {
        self.planner.kind = kind;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::config("scenario", "name must not be empty"));
        }
        if !(self.duration_limit > 0.0) {
            return Err(Error::config("duration_limit", "must be > 0"));
        }
        if !(self.sim_dt > 0.0 && self.sim_dt <= self.sensing.frame_dt) {
            return Err(Error::config("sim_dt", "must lie in (0, sensing.frame_dt]"));
        }
        if self.runs == 0 {
            return Err(Error::config("runs", "must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.velocity_smoothing) {
            return Err(Error::config("velocity_smoothing", "must lie in [0, 1)"));
        }
        if !self.robot.start.is_finite() || !self.robot.goal.is_finite() {
            return Err(Error::config("robot", "start and goal must be finite"));
        }
        self.sensing.validate()?;
        self.range_sensor.validate()?;
        self.frozone.validate(self.sensing.offset)?;
        self.planner.validate()?;
        self.pedestrian_model.validate()?;
        for (i, p) in self.pedestrians.iter().enumerate() {
            if !(p.pref_speed > 0.0 && p.pref_speed <= 3.0) {
                return Err(Error::config(
                    format!("pedestrians[{i}].pref_speed"),
                    "must lie in (0, 3]",
                ));
            }
            if !(p.radius > 0.0 && p.radius <= 0.5) {
                return Err(Error::config(
                    format!("pedestrians[{i}].radius"),
                    "must lie in (0, 0.5]",
                ));
            }
        }
        if let Some(crowd) = &self.random_crowd {
            if !(crowd.min_speed > 0.0
                && crowd.min_speed <= crowd.max_speed
                && crowd.max_speed <= 3.0)
            {
                return Err(Error::config(
                    "random_crowd.min_speed",
                    "need 0 < min_speed <= max_speed <= 3",
                ));
            }
            if crowd.half_extent.x <= 0.0 || crowd.half_extent.y <= 0.0 {
                return Err(Error::config(
                    "random_crowd.half_extent",
                    "must be positive",
                ));
            }
        }
        Ok(())
    }

    /// Pedestrians for one run: the scripted ones followed by the seeded crowd.
    pub fn spawn_pedestrians(&self, seed: u64) -> Vec<PedestrianState> {
        let mut peds: Vec<PedestrianState> = self
            .pedestrians
            .iter()
            .enumerate()
            .map(|(i, spec)| {
                let id = i as u32;
                if spec.fixed {
                    PedestrianState::fixed(id, spec.start, spec.radius)
                } else {
                    let mut p = PedestrianState::new(
                        id,
                        spec.start,
                        spec.waypoints.clone(),
                        spec.pref_speed,
                    );
                    p.radius = spec.radius;
                    p
                }
            })
            .collect();
        if let Some(crowd) = &self.random_crowd {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ CROWD_STREAM);
            let draw = |rng: &mut ChaCha8Rng| {
                Vec2::new(
                    crowd.center.x + rng.random_range(-1.0..=1.0) * crowd.half_extent.x,
                    crowd.center.y + rng.random_range(-1.0..=1.0) * crowd.half_extent.y,
                )
            };
            let base = peds.len() as u32;
            for k in 0..crowd.count {
                let start = loop {
                    let p = draw(&mut rng);
                    let clear_of_robot = dist(p, self.robot.start) >= crowd.keep_clear;
                    let clear_of_others = peds
                        .iter()
                        .all(|o| dist(o.position, p) >= 2.0 * o.radius + 0.1);
                    if clear_of_robot && clear_of_others {
                        break p;
                    }
                };
                let waypoints = (0..crowd.legs).map(|_| draw(&mut rng)).collect();
                let speed = rng.random_range(crowd.min_speed..=crowd.max_speed);
                peds.push(PedestrianState::new(
                    base + k as u32,
                    start,
                    waypoints,
                    speed,
                ));
            }
        }
        peds
    }
}

const CROWD_STREAM: u64 = 0x9e37_79b9_7f4a_7c15;

/// Default exponential smoothing of tracked pedestrian velocities.
pub const DEFAULT_VELOCITY_SMOOTHING: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub min: Vec2,
    pub max: Vec2,
}

impl Bounds {
    pub fn around(points: impl IntoIterator<Item = Vec2>, margin: f64) -> Self {
        let mut min = Vec2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
            max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
        }
        Self {
            min: min - Vec2::new(margin, margin),
            max: max + Vec2::new(margin, margin),
        }
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub time: f64,
    pub robot: RobotState,
    pub pedestrians: Vec<PedestrianState>,
    pub bounds: Bounds,
}

impl WorldState {
    pub fn new(cfg: &ScenarioConfig, seed: u64) -> Self {
        let pedestrians = cfg.spawn_pedestrians(seed);
        let robot = RobotState {
            position: cfg.robot.start,
            heading: cfg.robot.heading,
            lin_vel: 0.0,
            ang_vel: 0.0,
            goal: cfg.robot.goal,
            radius: cfg.planner.robot_radius,
            v_max: cfg.planner.v_max,
            w_max: cfg.planner.w_max,
        };
        let bounds = Bounds::around(
            pedestrians
                .iter()
                .flat_map(|p| std::iter::once(p.position).chain(p.waypoints.iter().copied()))
                .chain([cfg.robot.start, cfg.robot.goal]),
            10.0,
        );
        Self {
            time: 0.0,
            robot,
            pedestrians,
            bounds,
        }
    }

    pub fn moving_pedestrians(&self) -> impl Iterator<Item = &PedestrianState> {
        self.pedestrians.iter().filter(|p| !p.fixed)
    }
}

/// Advances pedestrians and the robot by `dt` under the unicycle command
/// `(v_cmd, w_cmd)`. Pedestrian speeds come from the fundamental diagram,
/// evaluated on the pre-step state for everyone.
pub fn advance_world(
    world: &WorldState,
    v_cmd: f64,
    w_cmd: f64,
    dt: f64,
    planner: &PlannerConfig,
    fd: &FdParams,
) -> WorldState {
    let robot_disc = crate::pedestrian::Disc {
        center: world.robot.position,
        radius: world.robot.radius,
    };
    let pedestrians = world
        .pedestrians
        .iter()
        .map(|ped| {
            if ped.halted() {
                return ped.clone();
            }
            let space = front_space(ped, &world.pedestrians, robot_disc, DEFAULT_FRONT_SPACE_CAP);
            let speed = walking_speed(space, fd, ped.pref_speed).unwrap_or(0.0);
            step_pedestrian(ped, speed, dt)
        })
        .collect();

    let mut robot = world.robot;
    let dv = (v_cmd - robot.lin_vel).clamp(-planner.lin_accel * dt, planner.lin_accel * dt);
    let dw = (w_cmd - robot.ang_vel).clamp(-planner.ang_accel * dt, planner.ang_accel * dt);
    robot.lin_vel = (robot.lin_vel + dv).clamp(0.0, robot.v_max);
    robot.ang_vel = (robot.ang_vel + dw).clamp(-robot.w_max, robot.w_max);
    let arc = crate::planner::unicycle_pose(robot.lin_vel, robot.ang_vel, dt);
    robot.position = robot.pose().to_world(arc.position);
    robot.heading = crate::geometry::wrap_angle(robot.heading + arc.heading);

    WorldState {
        time: world.time + dt,
        robot,
        pedestrians,
        bounds: world.bounds,
    }
}

/// What the freezing-zone layer did on a triggered tick, in the robot frame
/// of that tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriggerRecord {
    pub pfz: Pfz,
    /// Lookahead point after the deviation was applied.
    pub lookahead: Vec2,
    pub sweep_feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub robot: Pose2,
    pub cmd_v: f64,
    pub cmd_w: f64,
    pub branch: Branch,
    pub triggered: bool,
    pub phi: f64,
    /// Number of pedestrians in the sensor frame.
    pub sensed: usize,
    /// World positions of the moving pedestrians, in id order.
    pub pedestrians: Vec<Vec2>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trigger: Option<TriggerRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Success,
    Collision,
    Frozen,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub planner: PlannerKind,
    pub seed: u64,
    pub outcome: Outcome,
    pub time_to_goal: Option<f64>,
    pub elapsed: f64,
    pub avg_speed: f64,
    pub pf: f64,
    pub min_ped_dist: f64,
    pub froze: bool,
    /// True if the freezing-problem predicate held on any planning tick.
    pub frp_observed: bool,
    pub trigger_count: usize,
    #[serde(skip)]
    pub trajectory: Vec<TrajectorySample>,
    /// Ids of the moving pedestrians, matching `TrajectorySample::pedestrians`.
    #[serde(skip)]
    pub pedestrian_ids: Vec<u32>,
    /// Wall discs, for plotting.
    #[serde(skip)]
    pub walls: Vec<Vec2>,
    #[serde(skip)]
    pub goal: Vec2,
}

/// One run in progress.
pub struct Simulation {
    cfg: ScenarioConfig,
    seed: u64,
    world: WorldState,
    rng: ChaCha8Rng,
    tracker: MotionTracker,
    range_tracker: MotionTracker,
    controller: HybridController,
    command: (f64, f64),
    next_plan: f64,
    trajectory: Vec<TrajectorySample>,
    friendliness: FriendlinessTracker,
    path_length: f64,
    frp_observed: bool,
    outcome: Option<Outcome>,
}

impl Simulation {
    pub fn new(cfg: &ScenarioConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let world = WorldState::new(cfg, seed);
        let moving = world.moving_pedestrians().count();
        Ok(Self {
            cfg: cfg.clone(),
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            tracker: MotionTracker::new(cfg.velocity_smoothing),
            range_tracker: MotionTracker::new(cfg.velocity_smoothing),
            controller: HybridController::new(),
            command: (0.0, 0.0),
            next_plan: 0.0,
            trajectory: Vec::new(),
            friendliness: FriendlinessTracker::new(cfg.frozone.eta, moving),
            path_length: 0.0,
            frp_observed: false,
            outcome: None,
            world,
        })
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn trajectory(&self) -> &[TrajectorySample] {
        &self.trajectory
    }

    fn plan(&mut self) -> Result<()> {
        let robot = self.world.robot;
        let walkers: Vec<PedestrianState> = self.world.moving_pedestrians().cloned().collect();
        let raw = sense(
            &walkers,
            robot.pose(),
            self.world.time,
            &self.cfg.sensing,
            &mut self.rng,
        );
        let frame = self.tracker.update(raw)?;
        let raw = sense_range(
            &self.world.pedestrians,
            robot.pose(),
            self.world.time,
            &self.cfg.range_sensor,
            &mut self.rng,
        );
        let obstacles = self.range_tracker.update(raw)?;
        let omega = self.cfg.frozone.min_dist_threshold;

        let (velocity, branch, deviation, trigger) = match self.cfg.planner.kind {
            PlannerKind::Baseline => {
                let cmd = baseline_velocity(&robot, &obstacles, &self.cfg.planner, omega);
                (cmd.velocity, Branch::Baseline, None, None)
            }
            PlannerKind::Hybrid => {
                let out = self.controller.step(
                    &robot,
                    &frame,
                    &obstacles,
                    &self.cfg.planner,
                    &self.cfg.frozone,
                    &self.cfg.sensing,
                );
                let deviation = out
                    .frozone
                    .as_ref()
                    .map(|f| f.deviation)
                    .filter(|d| d.triggered);
                let trigger = out.frozone.as_ref().and_then(|f| {
                    let d = deviation?;
                    Some(TriggerRecord {
                        pfz: f.pfz.clone()?,
                        lookahead: rotate(out.baseline.velocity * self.cfg.frozone.pred_dt, d.phi),
                        sweep_feasible: d.sweep_feasible,
                    })
                });
                (out.velocity, out.choice.branch, deviation, trigger)
            }
        };
        self.command = track_velocity(velocity, &self.cfg.planner);

        let local: Vec<Vec2> = self
            .world
            .pedestrians
            .iter()
            .map(|p| robot.pose().to_local(p.position))
            .collect();
        self.frp_observed |= frp_predicate(&local, omega, &self.cfg.sensing);

        self.trajectory.push(TrajectorySample {
            t: self.world.time,
            robot: robot.pose(),
            cmd_v: self.command.0,
            cmd_w: self.command.1,
            branch,
            triggered: deviation.is_some(),
            phi: deviation.map_or(0.0, |d| d.phi),
            sensed: frame.len(),
            pedestrians: self
                .world
                .moving_pedestrians()
                .map(|p| p.position)
                .collect(),
            trigger,
        });
        Ok(())
    }

    /// One `sim_dt` step. Returns the outcome once the run has ended.
    pub fn step(&mut self) -> Result<Option<Outcome>> {
        if self.outcome.is_some() {
            return Ok(self.outcome);
        }
        let dt = self.cfg.sim_dt;
        if self.world.time >= self.next_plan - 1e-9 {
            self.plan()?;
            self.next_plan += self.cfg.sensing.frame_dt;
            if self.frozen() {
                self.outcome = Some(Outcome::Frozen);
                return Ok(self.outcome);
            }
        }

        let before = self.world.robot.position;
        self.world = advance_world(
            &self.world,
            self.command.0,
            self.command.1,
            dt,
            &self.cfg.planner,
            &self.cfg.pedestrian_model,
        );
        self.path_length += dist(before, self.world.robot.position);
        let moving: Vec<PedestrianState> = self.world.moving_pedestrians().cloned().collect();
        self.friendliness
            .observe(self.world.robot.position, &moving);

        let robot = self.world.robot;
        let collided = self
            .world
            .pedestrians
            .iter()
            .any(|p| dist(p.position, robot.position) < p.radius + robot.radius);
        self.outcome = if collided {
            Some(Outcome::Collision)
        } else if dist(robot.position, robot.goal) <= GOAL_TOLERANCE {
            Some(Outcome::Success)
        } else if self.world.time >= self.cfg.duration_limit - 1e-9 {
            Some(Outcome::Timeout)
        } else {
            None
        };
        Ok(self.outcome)
    }

    fn frozen(&self) -> bool {
        let now = self.world.time;
        let start = self
            .trajectory
            .iter()
            .rposition(|s| s.t <= now - metrics::FREEZE_WINDOW + 1e-9);
        let Some(start) = start else {
            return false;
        };
        let window: Vec<(f64, Vec2)> = self.trajectory[start..]
            .iter()
            .map(|s| (s.t, s.robot.position))
            .collect();
        freeze_detector(&window, self.world.robot.goal)
    }

    pub fn run(mut self) -> Result<RunReport> {
        let outcome = loop {
            if let Some(o) = self.step()? {
                break o;
            }
        };
        Ok(self.finish(outcome))
    }

    fn finish(self, outcome: Outcome) -> RunReport {
        let elapsed = self.world.time;
        RunReport {
            scenario: self.cfg.name.clone(),
            planner: self.cfg.planner.kind,
            seed: self.seed,
            outcome,
            time_to_goal: (outcome == Outcome::Success).then_some(elapsed),
            elapsed,
            avg_speed: if elapsed > 0.0 {
                self.path_length / elapsed
            } else {
                0.0
            },
            pf: self.friendliness.score(),
            min_ped_dist: self.friendliness.min_distance(),
            froze: outcome == Outcome::Frozen,
            frp_observed: self.frp_observed,
            trigger_count: self.trajectory.iter().filter(|s| s.triggered).count(),
            pedestrian_ids: self.world.moving_pedestrians().map(|p| p.id).collect(),
            walls: self
                .world
                .pedestrians
                .iter()
                .filter(|p| p.fixed)
                .map(|p| p.position)
                .collect(),
            goal: self.world.robot.goal,
            trajectory: self.trajectory,
        }
    }
}

/// Runs one scenario with `cfg.seed`.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RunReport> {
    run_seed(cfg, cfg.seed)
}

pub fn run_seed(cfg: &ScenarioConfig, seed: u64) -> Result<RunReport> {
    Simulation::new(cfg, seed)?.run()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub scenario: String,
    pub planner: PlannerKind,
    pub seeds: Vec<u64>,
    pub success_rate: f64,
    pub collision_rate: f64,
    pub freezing_rate: f64,
    pub timeout_rate: f64,
    /// Mean time to goal over successful runs.
    pub mean_time: Option<f64>,
    /// Mean average speed over successful runs.
    pub avg_velocity: Option<f64>,
    pub mean_pf: f64,
}

impl BatchSummary {
    pub fn from_runs(runs: &[RunReport]) -> Self {
        let n = runs.len().max(1) as f64;
        let rate = |o: Outcome| runs.iter().filter(|r| r.outcome == o).count() as f64 / n;
        let successes: Vec<&RunReport> = runs
            .iter()
            .filter(|r| r.outcome == Outcome::Success)
            .collect();
        let mean =
            |xs: Vec<f64>| (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64);
        Self {
            scenario: runs.first().map(|r| r.scenario.clone()).unwrap_or_default(),
            planner: runs.first().map_or(PlannerKind::Hybrid, |r| r.planner),
            seeds: runs.iter().map(|r| r.seed).collect(),
            success_rate: rate(Outcome::Success),
            collision_rate: rate(Outcome::Collision),
            freezing_rate: rate(Outcome::Frozen),
            timeout_rate: rate(Outcome::Timeout),
            mean_time: mean(successes.iter().filter_map(|r| r.time_to_goal).collect()),
            avg_velocity: mean(successes.iter().map(|r| r.avg_speed).collect()),
            mean_pf: runs.iter().map(|r| r.pf).sum::<f64>() / n,
        }
    }
}

/// Runs seeds `cfg.seed .. cfg.seed + n_seeds` in parallel. Reports come back
/// sorted by seed.
pub fn run_batch(cfg: &ScenarioConfig, n_seeds: usize) -> Result<(Vec<RunReport>, BatchSummary)> {
    if n_seeds == 0 {
        return Err(Error::config("runs", "need at least one seed"));
    }
    cfg.validate()?;
    let mut runs = (0..n_seeds as u64)
        .into_par_iter()
        .map(|k| run_seed(cfg, cfg.seed + k))
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by_key(|r| r.seed);
    let summary = BatchSummary::from_runs(&runs);
    Ok((runs, summary))
}
