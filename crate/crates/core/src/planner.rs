//! Guiding-velocity source and the density switch.
//!
//! The baseline is a dynamic-window style sampler: it scores constant
//! `(v, w)` commands by forward-simulating them against the observed
//! pedestrians. The hybrid planner feeds that velocity through the freezing
//! zone pipeline whenever the sensed crowd is sparse enough.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freezing::{
    closest, deviation_angle_on_side, frozone_step, should_deviate, FrozoneConfig, FrozoneOutcome,
};
use crate::geometry::{rotate, wrap_angle, Pfz, Vec2};
use crate::sensing::{Pose2, SensorConfig, SensorFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotState {
    pub position: Vec2,
    pub heading: f64,
    pub lin_vel: f64,
    pub ang_vel: f64,
    pub goal: Vec2,
    pub radius: f64,
    pub v_max: f64,
    pub w_max: f64,
}

impl RobotState {
    pub fn pose(&self) -> Pose2 {
        Pose2::new(self.position, self.heading)
    }

    pub fn local_goal(&self) -> Vec2 {
        self.pose().to_local(self.goal)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlannerConfig {
    pub kind: PlannerKind,
    pub v_max: f64,
    pub w_max: f64,
    pub robot_radius: f64,
    /// Linear acceleration limit of the drive, m/s^2.
    pub lin_accel: f64,
    /// Angular acceleration limit of the drive, rad/s^2.
    pub ang_accel: f64,
    pub v_samples: usize,
    pub w_samples: usize,
    pub rollout_time: f64,
    pub rollout_dt: f64,
    pub w_goal: f64,
    pub w_clear: f64,
    pub w_vel: f64,
    /// Clearance above which the clearance score saturates, m.
    pub clearance_cap: f64,
    /// Radius assumed for every observed pedestrian, m.
    pub obstacle_radius: f64,
    /// Proportional gain turning a velocity vector into a yaw rate, 1/s.
    pub heading_gain: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            kind: PlannerKind::Hybrid,
            v_max: 0.6,
            w_max: 1.5,
            robot_radius: 0.3,
            lin_accel: 0.5,
            ang_accel: 3.0,
            v_samples: 11,
            w_samples: 21,
            rollout_time: 1.0,
            rollout_dt: 0.1,
            w_goal: 2.0,
            w_clear: 1.0,
            w_vel: 0.5,
            clearance_cap: 2.0,
            obstacle_radius: 0.25,
            heading_gain: 2.0,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("v_max", self.v_max),
            ("w_max", self.w_max),
            ("robot_radius", self.robot_radius),
            ("lin_accel", self.lin_accel),
            ("ang_accel", self.ang_accel),
            ("rollout_time", self.rollout_time),
            ("rollout_dt", self.rollout_dt),
            ("clearance_cap", self.clearance_cap),
            ("obstacle_radius", self.obstacle_radius),
            ("heading_gain", self.heading_gain),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("planner.{name}"), "must be > 0"));
            }
        }
        for (name, v) in [
            ("w_goal", self.w_goal),
            ("w_clear", self.w_clear),
            ("w_vel", self.w_vel),
        ] {
            if !(v >= 0.0) {
                return Err(Error::config(format!("planner.{name}"), "must be >= 0"));
            }
        }
        if self.v_samples < 2 || self.w_samples < 2 {
            return Err(Error::config(
                "planner.v_samples",
                "need at least 2 samples per axis",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlannerKind {
    Baseline,
    Hybrid,
}

impl fmt::Display for PlannerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlannerKind::Baseline => "baseline",
            PlannerKind::Hybrid => "hybrid",
        })
    }
}

impl FromStr for PlannerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "baseline" => Ok(PlannerKind::Baseline),
            "hybrid" => Ok(PlannerKind::Hybrid),
            other => Err(Error::config(
                "planner",
                format!("unknown planner `{other}`"),
            )),
        }
    }
}

/// Unicycle pose after driving `(v, w)` for `t` seconds from the origin.
pub fn unicycle_pose(v: f64, w: f64, t: f64) -> Pose2 {
    if w.abs() < 1e-9 {
        return Pose2::new(Vec2::new(v * t, 0.0), 0.0);
    }
    let th = w * t;
    Pose2::new(Vec2::new(v / w * th.sin(), v / w * (1.0 - th.cos())), th)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineCommand {
    /// Robot-frame velocity vector: speed `v`, pointing along the rollout's
    /// mid-horizon heading.
    pub velocity: Vec2,
    pub v: f64,
    pub w: f64,
    /// False when every sample violated the clearance threshold.
    pub feasible: bool,
    pub score: f64,
}

impl BaselineCommand {
    pub fn stop() -> Self {
        Self {
            velocity: Vec2::ZERO,
            v: 0.0,
            w: 0.0,
            feasible: false,
            score: f64::NEG_INFINITY,
        }
    }
}

/// Smallest clearance between the rollout of `(v, w)` (start pose included)
/// and the observed pedestrian discs grown by the robot radius.
pub fn rollout_clearance(v: f64, w: f64, frame: &SensorFrame, cfg: &PlannerConfig) -> f64 {
    let steps = (cfg.rollout_time / cfg.rollout_dt).round() as usize;
    let grown = cfg.obstacle_radius + cfg.robot_radius;
    (0..=steps)
        .map(|k| unicycle_pose(v, w, k as f64 * cfg.rollout_dt).position)
        .flat_map(|p| {
            frame
                .observations
                .iter()
                .map(move |o| (p - o.position).norm() - grown)
        })
        .fold(f64::INFINITY, f64::min)
}

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// Scores one `(v, w)` sample; `None` when it comes within `omega` of a
/// pedestrian.
pub fn score_sample(
    v: f64,
    w: f64,
    local_goal: Vec2,
    frame: &SensorFrame,
    cfg: &PlannerConfig,
    omega: f64,
) -> Option<f64> {
    let clearance = rollout_clearance(v, w, frame, cfg);
    if clearance < omega {
        return None;
    }
    let end = unicycle_pose(v, w, cfg.rollout_time);
    let bearing = (local_goal - end.position).angle();
    let alignment = 1.0 - wrap_angle(bearing - end.heading).abs() / std::f64::consts::PI;
    let clear = clearance.min(cfg.clearance_cap) / cfg.clearance_cap;
    Some(cfg.w_goal * alignment + cfg.w_clear * clear + cfg.w_vel * v / cfg.v_max)
}

/// Dynamic-window style guiding velocity.
///
/// Samples `v_samples x w_samples` commands over `[0, v_max] x [-w_max, w_max]`
/// and returns the best survivor as a robot-frame vector. When every sample
/// collides the robot is told to stop.
pub fn baseline_velocity(
    robot: &RobotState,
    frame: &SensorFrame,
    cfg: &PlannerConfig,
    omega: f64,
) -> BaselineCommand {
    baseline_velocity_on_side(robot, frame, cfg, omega, None)
}

/// [`baseline_velocity`] over the yaw rates with `w * side >= 0` only.
pub fn baseline_velocity_on_side(
    robot: &RobotState,
    frame: &SensorFrame,
    cfg: &PlannerConfig,
    omega: f64,
    side: Option<f64>,
) -> BaselineCommand {
    let local_goal = robot.local_goal();
    let mut best = BaselineCommand::stop();
    for v in grid(0.0, robot.v_max, cfg.v_samples) {
        for w in grid(-robot.w_max, robot.w_max, cfg.w_samples) {
            if side.is_some_and(|s| w * s < 0.0) {
                continue;
            }
            let Some(score) = score_sample(v, w, local_goal, frame, cfg, omega) else {
                continue;
            };
            if score > best.score {
                best = BaselineCommand {
                    velocity: Vec2::from_angle(0.5 * w * cfg.rollout_time) * v,
                    v,
                    w,
                    feasible: true,
                    score,
                };
            }
        }
    }
    best
}

/// The admissible sample (same grid and clearance rule as
/// [`baseline_velocity`]) whose velocity vector is closest to `desired`.
/// Stops when no sample is admissible.
pub fn admissible_velocity(
    robot: &RobotState,
    frame: &SensorFrame,
    desired: Vec2,
    cfg: &PlannerConfig,
    omega: f64,
) -> BaselineCommand {
    let mut best = BaselineCommand::stop();
    let mut best_err = f64::INFINITY;
    for v in grid(0.0, robot.v_max, cfg.v_samples) {
        for w in grid(-robot.w_max, robot.w_max, cfg.w_samples) {
            if rollout_clearance(v, w, frame, cfg) < omega {
                continue;
            }
            let velocity = Vec2::from_angle(0.5 * w * cfg.rollout_time) * v;
            let err = (velocity - desired).norm();
            if err < best_err {
                best_err = err;
                best = BaselineCommand {
                    velocity,
                    v,
                    w,
                    feasible: true,
                    score: -err,
                };
            }
        }
    }
    best
}

/// Converts a robot-frame velocity vector into a unicycle `(v, w)` command:
/// yaw rate proportional to the vector's bearing, speed equal to its length
/// (zero when it points backwards).
pub fn track_velocity(cmd: Vec2, cfg: &PlannerConfig) -> (f64, f64) {
    if cmd.norm() < 1e-12 {
        return (0.0, 0.0);
    }
    let bearing = cmd.angle();
    let w = (cfg.heading_gain * bearing).clamp(-cfg.w_max, cfg.w_max);
    let v = if bearing.abs() > std::f64::consts::FRAC_PI_2 {
        0.0
    } else {
        cmd.norm().min(cfg.v_max)
    };
    (v, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Frozone,
    Baseline,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Frozone => "Frozone",
            Branch::Baseline => "Baseline",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PlannerChoice {
    pub branch: Branch,
    pub ped_count: usize,
    pub threshold: usize,
}

/// Density switch: the freezing-zone layer is active while the number of
/// sensed pedestrians is at most `floor(side^2)`.
pub fn hybrid_select(frame: &SensorFrame, sensing: &SensorConfig) -> PlannerChoice {
    let ped_count = frame.len();
    let threshold = sensing.density_threshold();
    PlannerChoice {
        branch: if ped_count <= threshold {
            Branch::Frozone
        } else {
            Branch::Baseline
        },
        ped_count,
        threshold,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridOutput {
    pub choice: PlannerChoice,
    pub baseline: BaselineCommand,
    pub frozone: Option<FrozoneOutcome>,
    pub velocity: Vec2,
}

/// Baseline velocity, rotated by the freezing-zone layer when the density
/// switch selects it.
///
/// `obstacles` is what the baseline avoids; `frame` is the camera frame used
/// by the density switch and the freezing-zone layer. They may be the same.
pub fn hybrid_step(
    robot: &RobotState,
    frame: &SensorFrame,
    obstacles: &SensorFrame,
    planner: &PlannerConfig,
    frozone: &FrozoneConfig,
    sensing: &SensorConfig,
) -> HybridOutput {
    let baseline = baseline_velocity(robot, obstacles, planner, frozone.min_dist_threshold);
    let choice = hybrid_select(frame, sensing);
    match choice.branch {
        Branch::Baseline => HybridOutput {
            choice,
            baseline,
            frozone: None,
            velocity: baseline.velocity,
        },
        Branch::Frozone => {
            let outcome = frozone_step(
                frame,
                robot.local_goal(),
                baseline.velocity,
                frozone,
                sensing.offset,
            );
            HybridOutput {
                choice,
                baseline,
                velocity: outcome.velocity(),
                frozone: Some(outcome),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ZoneMemory {
    /// World frame.
    zone: Pfz,
    closest_current: Vec2,
    closest_pred: Vec2,
    expires: f64,
}

fn zone_to_local(zone: &Pfz, pose: Pose2) -> Pfz {
    zone.transformed(-pose.heading, rotate(-pose.position, -pose.heading))
}

/// [`hybrid_step`] with memory across ticks.
///
/// Once the robot has turned to one side, both the guiding planner and the
/// deviation keep to that side while it still has a safe or zone-clearing
/// option. A zone stays active in world
/// coordinates for `zone_memory` seconds after its last sighting, so a
/// pedestrian that drops out of the camera's view keeps being avoided.
#[derive(Debug, Clone, Default)]
pub struct HybridController {
    memory: Option<ZoneMemory>,
    side: Option<f64>,
}

impl HybridController {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    /// `camera.timestamp` is taken as the current time.
    pub fn step(
        &mut self,
        robot: &RobotState,
        camera: &SensorFrame,
        obstacles: &SensorFrame,
        planner: &PlannerConfig,
        frozone: &FrozoneConfig,
        sensing: &SensorConfig,
    ) -> HybridOutput {
        let now = camera.timestamp;
        if self.memory.as_ref().is_some_and(|m| now > m.expires) {
            self.reset();
        }
        let mut out = hybrid_step(robot, camera, obstacles, planner, frozone, sensing);
        if out.frozone.is_none() {
            self.reset();
            return out;
        }
        if self.side.is_some() {
            let kept = baseline_velocity_on_side(
                robot,
                obstacles,
                planner,
                frozone.min_dist_threshold,
                self.side,
            );
            if kept.feasible {
                let f = frozone_step(
                    camera,
                    robot.local_goal(),
                    kept.velocity,
                    frozone,
                    sensing.offset,
                );
                out.baseline = kept;
                out.frozone = Some(f);
            }
        }
        let f = out.frozone.as_mut().expect("frozone branch");
        let pose = robot.pose();
        let guiding = out.baseline.velocity;
        let goal = robot.local_goal();
        let deviate = |zone: &Pfz, current: Vec2, side: Option<f64>| {
            deviation_angle_on_side(guiding, goal, zone, current, frozone, sensing.offset, side)
        };

        if f.deviation.triggered {
            let zone = f.pfz.clone().expect("a trigger implies a zone");
            let near = *closest(&f.predictions).expect("a trigger implies a prediction");
            if let Some(side) = self.side.filter(|s| f.deviation.phi * s < 0.0) {
                let kept = deviate(&zone, near.current, Some(side));
                if kept.sweep_feasible || !f.deviation.sweep_feasible {
                    f.deviation = kept;
                }
            }
            self.memory = Some(ZoneMemory {
                zone: zone.transformed(pose.heading, pose.position),
                closest_current: pose.to_world(near.current),
                closest_pred: pose.to_world(near.predicted),
                expires: now + frozone.zone_memory,
            });
        } else if let Some(m) = &self.memory {
            let zone = zone_to_local(&m.zone, pose);
            if should_deviate(guiding, &zone, pose.to_local(m.closest_pred), frozone) {
                let current = pose.to_local(m.closest_current);
                let mut d = deviate(&zone, current, self.side);
                if !d.sweep_feasible && self.side.is_some() {
                    let free = deviate(&zone, current, None);
                    if free.sweep_feasible {
                        d = free;
                    }
                }
                f.deviation = d;
                f.pfz = Some(zone);
            }
        }
        if f.deviation.triggered && f.deviation.phi != 0.0 {
            self.side = Some(f.deviation.phi.signum());
        }
        out.velocity = if f.deviation.triggered {
            admissible_velocity(
                robot,
                obstacles,
                f.velocity(),
                planner,
                frozone.min_dist_threshold,
            )
            .velocity
        } else {
            f.velocity()
        };
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::Observation;
    use approx::assert_abs_diff_eq;

    fn robot(goal: Vec2) -> RobotState {
        RobotState {
            position: Vec2::ZERO,
            heading: 0.0,
            lin_vel: 0.0,
            ang_vel: 0.0,
            goal,
            radius: 0.3,
            v_max: 0.6,
            w_max: 1.5,
        }
    }

    fn still(id: u32, p: Vec2) -> Observation {
        Observation {
            id,
            position: p,
            forward: None,
            speed: None,
        }
    }

    fn frame(obs: Vec<Observation>) -> SensorFrame {
        SensorFrame {
            timestamp: 0.0,
            robot_pose: Pose2::default(),
            observations: obs,
        }
    }

    #[test]
    fn open_space_goes_full_speed_at_goal() {
        let cmd = baseline_velocity(
            &robot(Vec2::new(10.0, 0.0)),
            &frame(vec![]),
            &PlannerConfig::default(),
            0.5,
        );
        assert!(cmd.feasible);
        assert_abs_diff_eq!(cmd.velocity.x, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(cmd.velocity.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn arc_of_close_pedestrians_freezes_the_baseline() {
        let arc: Vec<_> = (0..5)
            .map(|i| {
                let a = -0.6 + 0.3 * i as f64;
                still(i, Vec2::from_angle(a) * 0.95)
            })
            .collect();
        let cmd = baseline_velocity(
            &robot(Vec2::new(10.0, 0.0)),
            &frame(arc),
            &PlannerConfig::default(),
            0.5,
        );
        assert!(!cmd.feasible);
        assert_eq!(cmd.velocity, Vec2::ZERO);
    }

    #[test]
    fn unicycle_arc_matches_integration() {
        let (v, w, t) = (0.5, 0.8, 1.0);
        let n = 100_000;
        let (mut x, mut y, mut th) = (0.0, 0.0, 0.0);
        let dt = t / n as f64;
        for _ in 0..n {
            x += v * (th + 0.5 * w * dt).cos() * dt;
            y += v * (th + 0.5 * w * dt).sin() * dt;
            th += w * dt;
        }
        let pose = unicycle_pose(v, w, t);
        assert_abs_diff_eq!(pose.position.x, x, epsilon = 1e-8);
        assert_abs_diff_eq!(pose.position.y, y, epsilon = 1e-8);
        assert_abs_diff_eq!(pose.heading, th, epsilon = 1e-12);
    }

    #[test]
    fn heading_controller_recovers_sampled_turn_rate() {
        let cfg = PlannerConfig::default();
        let cmd = Vec2::from_angle(0.5 * 0.9 * cfg.rollout_time) * 0.4;
        let (v, w) = track_velocity(cmd, &cfg);
        assert_abs_diff_eq!(v, 0.4, epsilon = 1e-12);
        assert_abs_diff_eq!(w, 0.9, epsilon = 1e-12);
        let (v, w) = track_velocity(Vec2::new(-1.0, 0.1), &cfg);
        assert_eq!(v, 0.0);
        assert_eq!(w, cfg.w_max);
    }

    #[test]
    fn density_switch_boundary() {
        let sensing = SensorConfig::default();
        let crowd = |n: u32| frame((0..n).map(|i| still(i, Vec2::new(2.0, 0.0))).collect());
        assert_eq!(hybrid_select(&crowd(9), &sensing).branch, Branch::Frozone);
        assert_eq!(hybrid_select(&crowd(10), &sensing).branch, Branch::Baseline);
        assert_eq!(hybrid_select(&crowd(0), &sensing).branch, Branch::Frozone);
    }

    #[test]
    fn hybrid_with_empty_frame_is_baseline() {
        let r = robot(Vec2::new(10.0, 0.0));
        let f = frame(vec![]);
        let cfg = PlannerConfig::default();
        let out = hybrid_step(
            &r,
            &f,
            &f,
            &cfg,
            &FrozoneConfig::default(),
            &SensorConfig::default(),
        );
        assert_eq!(out.velocity, baseline_velocity(&r, &f, &cfg, 0.5).velocity);
    }

    #[test]
    fn dense_frame_bypasses_frozone() {
        let r = robot(Vec2::new(10.0, 0.0));
        let obs: Vec<_> = (0..10)
            .map(|i| still(i, Vec2::new(3.0, -1.4 + 0.3 * i as f64)))
            .collect();
        let f = frame(obs);
        let cfg = PlannerConfig::default();
        let out = hybrid_step(
            &r,
            &f,
            &f,
            &cfg,
            &FrozoneConfig::default(),
            &SensorConfig::default(),
        );
        assert_eq!(out.choice.branch, Branch::Baseline);
        assert!(out.frozone.is_none());
        assert_eq!(out.velocity, out.baseline.velocity);
    }

    #[test]
    fn admissible_velocity_avoids_blocked_directions() {
        let mut r = robot(Vec2::new(10.0, 0.0));
        r.lin_vel = 0.6;
        let cfg = PlannerConfig::default();
        let f = frame(vec![still(0, Vec2::new(1.2, 0.0))]);
        let cmd = admissible_velocity(&r, &f, Vec2::new(0.6, 0.0), &cfg, 0.5);
        assert!(cmd.feasible);
        assert!(rollout_clearance(cmd.v, cmd.w, &f, &cfg) >= 0.5);
        let free = admissible_velocity(&r, &frame(vec![]), Vec2::new(0.3, 0.1), &cfg, 0.5);
        assert!((free.velocity - Vec2::new(0.3, 0.1)).norm() < 0.1);
        let boxed = admissible_velocity(
            &r,
            &frame(vec![still(0, Vec2::new(0.5, 0.0))]),
            Vec2::new(0.6, 0.0),
            &cfg,
            0.5,
        );
        assert!(!boxed.feasible);
        assert_eq!(boxed.velocity, Vec2::ZERO);
    }

    #[test]
    fn side_restriction_limits_turn_direction() {
        let r = robot(Vec2::new(10.0, 0.0));
        let cfg = PlannerConfig::default();
        let f = frame(vec![still(0, Vec2::new(1.6, 0.0))]);
        for side in [1.0, -1.0] {
            let cmd = baseline_velocity_on_side(&r, &f, &cfg, 0.5, Some(side));
            assert!(cmd.w * side >= 0.0);
        }
    }

    fn head_on(t: f64, obs: Vec<Observation>) -> SensorFrame {
        SensorFrame {
            timestamp: t,
            robot_pose: Pose2::default(),
            observations: obs,
        }
    }

    #[test]
    fn controller_remembers_zone_then_forgets() {
        let mut r = robot(Vec2::new(8.0, 0.0));
        r.lin_vel = 0.6;
        let (planner, fz, sensing) = (
            PlannerConfig::default(),
            FrozoneConfig::default(),
            SensorConfig::default(),
        );
        let walker = Observation {
            id: 1,
            position: Vec2::new(2.0, 0.05),
            forward: Some(Vec2::new(-1.0, 0.0)),
            speed: Some(1.0),
        };
        let mut ctl = HybridController::new();

        let seen = head_on(0.0, vec![walker]);
        let out = ctl.step(&r, &seen, &seen, &planner, &fz, &sensing);
        let first = out.frozone.unwrap().deviation;
        assert!(first.triggered);
        assert_ne!(first.phi, 0.0);

        let blind = head_on(0.5, vec![]);
        let out = ctl.step(&r, &blind, &blind, &planner, &fz, &sensing);
        let kept = out.frozone.unwrap();
        assert!(kept.deviation.triggered);
        assert!(kept.pfz.is_some());
        assert!(kept.deviation.phi * first.phi > 0.0);

        let later = head_on(0.5 + fz.zone_memory + 0.1, vec![]);
        let out = ctl.step(&r, &later, &later, &planner, &fz, &sensing);
        assert!(!out.frozone.unwrap().deviation.triggered);
    }

    #[test]
    fn planner_kind_parses() {
        assert_eq!(
            "Hybrid".parse::<PlannerKind>().unwrap(),
            PlannerKind::Hybrid
        );
        assert!("drl".parse::<PlannerKind>().is_err());
    }
}
