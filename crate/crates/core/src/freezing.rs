//! Freezing-zone avoidance.
//!
//! Each control tick runs the same pipeline over the robot-frame sensor
//! frame:
//!
//! 1. [`classify`] labels every observed pedestrian as potentially freezing
//!    (closing in on the robot) or not.
//! 2. [`predict`] extrapolates the potentially-freezing pedestrians by
//!    `pred_dt` at constant velocity.
//! 3. [`build_pfz`] wraps the predictions in a potential freezing zone.
//! 4. [`should_deviate`] fires when the robot's lookahead point
//!    `velocity * pred_dt` is both inside the zone and within the comfort
//!    distance of the nearest pedestrian's prediction.
//! 5. [`deviation_angle`] picks the rotation applied to the guiding
//!    velocity. It is bounded by `atan(sqrt(eta^2 - f^2) / f)`, where `f` is
//!    the sensing offset.
//!
//! [`frozone_step`] chains the five stages.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, dist, rotate, Hull, Pfz, Vec2, EPS};
use crate::sensing::{Observation, SensorFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrozoneConfig {
    /// Pedestrian comfort distance, m.
    pub eta: f64,
    /// Prediction horizon, s.
    pub pred_dt: f64,
    /// Zone radius around a single potentially-freezing pedestrian, m.
    pub single_ped_radius: f64,
    /// Zone half-width around a two-pedestrian (or collinear) zone, m.
    pub segment_inflation: f64,
    /// Resolution of the deviation sweep, rad.
    pub sweep_step: f64,
    /// Minimum clearance the collision avoider keeps (the freezing-problem
    /// threshold), m.
    pub min_dist_threshold: f64,
    /// Half-width of the band around the robot's x-axis where pedestrians
    /// moving along the axis count as potentially freezing, m.
    pub head_on_band: f64,
    /// How long a zone is remembered after its pedestrians leave view, s.
    pub zone_memory: f64,
}

impl Default for FrozoneConfig {
    fn default() -> Self {
        Self {
            eta: 1.4,
            pred_dt: 1.0,
            single_ped_radius: 1.2,
            segment_inflation: 0.4,
            sweep_step: 1f64.to_radians(),
            min_dist_threshold: 0.5,
            head_on_band: 1.5,
            zone_memory: 1.5,
        }
    }
}

impl FrozoneConfig {
    /// Checks the invariants; `offset` is the sensing region's blind distance.
    pub fn validate(&self, offset: f64) -> Result<()> {
        if !(self.eta > offset) {
            return Err(Error::config(
                "frozone.eta",
                format!("eta must be > f ({offset})"),
            ));
        }
        if !(self.pred_dt > 0.0) {
            return Err(Error::config("frozone.pred_dt", "must be > 0"));
        }
        if !(self.single_ped_radius > 0.0) {
            return Err(Error::config("frozone.single_ped_radius", "must be > 0"));
        }
        if !(self.segment_inflation > 0.0) {
            return Err(Error::config("frozone.segment_inflation", "must be > 0"));
        }
        if !(self.sweep_step > 0.0 && self.sweep_step <= 0.1) {
            return Err(Error::config("frozone.sweep_step", "must lie in (0, 0.1]"));
        }
        if !(self.min_dist_threshold > 0.0) {
            return Err(Error::config("frozone.min_dist_threshold", "must be > 0"));
        }
        if !(self.head_on_band >= 0.0) {
            return Err(Error::config("frozone.head_on_band", "must be >= 0"));
        }
        if !(self.zone_memory >= 0.0) {
            return Err(Error::config("frozone.zone_memory", "must be >= 0"));
        }
        Ok(())
    }

    /// Largest deviation the algorithm may command, `atan(sqrt(eta^2 - f^2) / f)`.
    pub fn max_deviation(&self, offset: f64) -> f64 {
        ((self.eta * self.eta - offset * offset).max(0.0).sqrt() / offset).atan()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Label {
    PotentiallyFreezing,
    NonFreezing,
}

/// One label per observed pedestrian, in frame order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Classification {
    pub labels: Vec<(u32, Label)>,
}

impl Classification {
    pub fn get(&self, id: u32) -> Option<Label> {
        self.labels.iter().find(|(i, _)| *i == id).map(|(_, l)| *l)
    }

    pub fn is_freezing(&self, id: u32) -> bool {
        self.get(id) == Some(Label::PotentiallyFreezing)
    }

    pub fn freezing_count(&self) -> usize {
        self.labels
            .iter()
            .filter(|(_, l)| *l == Label::PotentiallyFreezing)
            .count()
    }
}

/// Velocity inside the right-half cone: sideways toward the robot's path
/// from the right.
pub fn in_right_cone(v: Vec2) -> bool {
    let s = v.norm();
    let lim = s * FRAC_1_SQRT_2;
    v.x.abs() <= lim + EPS && v.y >= lim - EPS && v.y <= s + EPS
}

/// Mirror of [`in_right_cone`] for the left half.
pub fn in_left_cone(v: Vec2) -> bool {
    in_right_cone(Vec2::new(v.x, -v.y))
}

/// Velocity closer to the robot's x-axis than to its y-axis.
pub fn is_axis_aligned(v: Vec2) -> bool {
    v.x.abs() >= v.norm() * FRAC_1_SQRT_2 - EPS
}

/// Labels a single observation. See [`classify`].
pub fn classify_one(obs: &Observation, robot_speed: f64, head_on_band: f64) -> Label {
    let v = obs.velocity();
    let speed = v.norm();
    let p = obs.position;
    let closing_from_right = p.y < 0.0 && in_right_cone(v);
    let closing_from_left = p.y > 0.0 && in_left_cone(v);
    let slower_than_robot = speed < robot_speed;
    let on_axis = p.y.abs() <= head_on_band && is_axis_aligned(v);
    if closing_from_right || closing_from_left || slower_than_robot || on_axis {
        Label::PotentiallyFreezing
    } else {
        Label::NonFreezing
    }
}

/// A pedestrian is potentially freezing when any of these hold:
/// it is right of the robot and heading left into the robot's path
/// (within 45 degrees of +y), or the mirror case on the left;
/// it is slower than the robot, whatever its heading;
/// or it is in the head-on band and moving along the x-axis.
pub fn classify(frame: &SensorFrame, robot_speed: f64, cfg: &FrozoneConfig) -> Classification {
    Classification {
        labels: frame
            .observations
            .iter()
            .map(|o| (o.id, classify_one(o, robot_speed, cfg.head_on_band)))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub id: u32,
    pub current: Vec2,
    pub predicted: Vec2,
}

/// Constant-velocity prediction `p + v * pred_dt` for the potentially-freezing
/// pedestrians only.
pub fn predict(
    frame: &SensorFrame,
    classification: &Classification,
    pred_dt: f64,
) -> Vec<Prediction> {
    frame
        .observations
        .iter()
        .filter(|o| classification.is_freezing(o.id))
        .map(|o| Prediction {
            id: o.id,
            current: o.position,
            predicted: o.position + o.velocity() * pred_dt,
        })
        .collect()
}

pub fn build_pfz(predicted: &[Vec2], cfg: &FrozoneConfig) -> Option<Pfz> {
    let circle = |center| Pfz::Circle {
        center,
        radius: cfg.single_ped_radius,
    };
    match predicted {
        [] => None,
        [p] => Some(circle(*p)),
        _ => Some(match convex_hull(predicted).ok()? {
            Hull::Point(p) => circle(p),
            Hull::Segment(a, b) => Pfz::Segment {
                a,
                b,
                inflation: cfg.segment_inflation,
            },
            Hull::Polygon(poly) => Pfz::Polygon(poly),
        }),
    }
}

/// Prediction of the pedestrian whose current position is nearest the robot.
pub fn closest(predictions: &[Prediction]) -> Option<&Prediction> {
    predictions
        .iter()
        .min_by(|a, b| a.current.norm().total_cmp(&b.current.norm()))
}

/// The deviation trigger: the lookahead point `robot_vel * pred_dt` lies in
/// the zone and within `eta` of the closest pedestrian's prediction.
pub fn should_deviate(robot_vel: Vec2, pfz: &Pfz, closest_pred: Vec2, cfg: &FrozoneConfig) -> bool {
    let lookahead = robot_vel * cfg.pred_dt;
    dist(lookahead, closest_pred) <= cfg.eta && pfz.contains(lookahead)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Phi1,
    Phi2,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationResult {
    pub triggered: bool,
    pub phi: f64,
    pub chosen_branch: Branch,
    pub new_velocity: Vec2,
    /// Goal-seeking candidate from the sweep.
    pub phi1: f64,
    /// Angle to the closest pedestrian's current position, when defined.
    pub phi2: Option<f64>,
    /// Whether any sweep angle moved the lookahead out of the zone.
    pub sweep_feasible: bool,
}

impl DeviationResult {
    pub fn untouched(velocity: Vec2) -> Self {
        Self {
            triggered: false,
            phi: 0.0,
            chosen_branch: Branch::None,
            new_velocity: velocity,
            phi1: 0.0,
            phi2: None,
            sweep_feasible: true,
        }
    }
}

/// Sweep grid over `[-max, max]`: multiples of `step` plus both endpoints,
/// ordered by magnitude (positive first on ties).
pub fn sweep_angles(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step + EPS).floor() as i64;
    let mut angles = Vec::with_capacity(2 * n as usize + 3);
    angles.push(0.0);
    for k in 1..=n {
        let a = k as f64 * step;
        angles.push(a);
        angles.push(-a);
    }
    if max - n as f64 * step > EPS {
        angles.push(max);
        angles.push(-max);
    }
    angles
}

/// Computes the deviation for a triggered tick.
///
/// The goal-seeking candidate `phi1` is the sweep angle whose rotated
/// lookahead leaves the zone and lands closest to `goal`. The social
/// candidate `phi2` aims at the closest pedestrian's current position, so the
/// robot ends up passing behind it. The smaller-magnitude candidate wins;
/// `phi2` is only eligible when non-zero, within the bound and itself clear
/// of the zone. Should no sweep angle clear the zone, the angle with the
/// largest clearance is used.
pub fn deviation_angle(
    robot_vel: Vec2,
    goal: Vec2,
    pfz: &Pfz,
    closest_ped_current: Vec2,
    cfg: &FrozoneConfig,
    offset: f64,
) -> DeviationResult {
    deviation_angle_on_side(robot_vel, goal, pfz, closest_ped_current, cfg, offset, None)
}

/// [`deviation_angle`] restricted to one turning direction: with
/// `side = Some(s)` only angles with `phi * s >= 0` are considered.
pub fn deviation_angle_on_side(
    robot_vel: Vec2,
    goal: Vec2,
    pfz: &Pfz,
    closest_ped_current: Vec2,
    cfg: &FrozoneConfig,
    offset: f64,
    side: Option<f64>,
) -> DeviationResult {
    let max = cfg.max_deviation(offset);
    let lookahead = robot_vel * cfg.pred_dt;
    let on_side = |phi: f64| side.is_none_or(|s| phi * s >= 0.0);

    let mut best_goal: Option<(f64, f64)> = None;
    let mut best_clear: Option<(f64, f64)> = None;
    for phi in sweep_angles(max, cfg.sweep_step)
        .into_iter()
        .filter(|a| on_side(*a))
    {
        let rotated = rotate(lookahead, phi);
        let clearance = pfz.signed_distance(rotated);
        if !pfz.contains(rotated) {
            let d = dist(rotated, goal);
            if best_goal.is_none_or(|(_, bd)| d < bd) {
                best_goal = Some((phi, d));
            }
        }
        if best_clear.is_none_or(|(_, bc)| clearance > bc) {
            best_clear = Some((phi, clearance));
        }
    }
    let sweep_feasible = best_goal.is_some();
    let phi1 = best_goal.or(best_clear).map_or(0.0, |(phi, _)| phi);

    let phi2 = (closest_ped_current.x.abs() > EPS || closest_ped_current.y.abs() > EPS)
        .then(|| closest_ped_current.y.atan2(closest_ped_current.x))
        .filter(|a| *a != 0.0);
    let phi2_eligible = phi2
        .filter(|a| on_side(*a) && a.abs() <= max + EPS && !pfz.contains(rotate(lookahead, *a)));

    let (phi, branch) = match phi2_eligible {
        Some(a) if !sweep_feasible || a.abs() <= phi1.abs() => (a, Branch::Phi2),
        _ => (phi1, Branch::Phi1),
    };
    DeviationResult {
        triggered: true,
        phi,
        chosen_branch: branch,
        new_velocity: rotate(robot_vel, phi),
        phi1,
        phi2,
        sweep_feasible: sweep_feasible || branch == Branch::Phi2,
    }
}

/// Everything one pipeline pass produced, for logging and plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozoneOutcome {
    pub classification: Classification,
    pub predictions: Vec<Prediction>,
    pub pfz: Option<Pfz>,
    pub deviation: DeviationResult,
}

impl FrozoneOutcome {
    pub fn velocity(&self) -> Vec2 {
        self.deviation.new_velocity
    }
}

/// Runs classify, predict, build_pfz and the trigger on a robot-frame
/// `frame`, rotating `guiding_vel` when the trigger fires. `goal` is in the
/// robot frame. The robot speed used for classification is the magnitude of
/// the guiding velocity.
pub fn frozone_step(
    frame: &SensorFrame,
    goal: Vec2,
    guiding_vel: Vec2,
    cfg: &FrozoneConfig,
    offset: f64,
) -> FrozoneOutcome {
    let classification = classify(frame, guiding_vel.norm(), cfg);
    let predictions = predict(frame, &classification, cfg.pred_dt);
    let points: Vec<Vec2> = predictions.iter().map(|p| p.predicted).collect();
    let pfz = build_pfz(&points, cfg);

    let deviation = match (&pfz, closest(&predictions)) {
        (Some(zone), Some(near)) if should_deviate(guiding_vel, zone, near.predicted, cfg) => {
            deviation_angle(guiding_vel, goal, zone, near.current, cfg, offset)
        }
        _ => DeviationResult::untouched(guiding_vel),
    };
    FrozoneOutcome {
        classification,
        predictions,
        pfz,
        deviation,
    }
}

/// Robot-relative position of a pedestrian after both agents move for `dt`:
/// the robot drives straight at `robot_speed` along its own +x.
pub fn relative_after(ped_pos: Vec2, ped_vel: Vec2, robot_speed: f64, dt: f64) -> Vec2 {
    ped_pos + (ped_vel - Vec2::new(robot_speed, 0.0)) * dt
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensing::Pose2;
    use approx::assert_abs_diff_eq;

    fn moving(id: u32, p: Vec2, v: Vec2) -> Observation {
        Observation {
            id,
            position: p,
            forward: v.normalized(),
            speed: Some(v.norm()),
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
    fn classify_examples() {
        let cfg = FrozoneConfig::default();
        let one = |o: Observation, v: f64| classify(&frame(vec![o]), v, &cfg).labels[0].1;
        use Label::*;
        assert_eq!(
            one(moving(0, Vec2::new(2.0, -1.0), Vec2::new(0.0, 1.0)), 1.0),
            PotentiallyFreezing
        );
        assert_eq!(
            one(moving(0, Vec2::new(2.0, -1.0), Vec2::new(0.0, -1.0)), 1.0),
            NonFreezing
        );
        assert_eq!(
            one(moving(0, Vec2::new(2.0, 0.05), Vec2::new(-1.3, 0.0)), 1.0),
            PotentiallyFreezing
        );
        assert_eq!(
            one(
                moving(0, Vec2::new(3.0, 1.0), Vec2::from_angle(2.0) * 0.2),
                0.5
            ),
            PotentiallyFreezing
        );
    }

    #[test]
    fn left_cone_mirrors_right() {
        let cfg = FrozoneConfig::default();
        let f = frame(vec![
            moving(1, Vec2::new(2.0, 1.0), Vec2::new(0.3, -1.0)),
            moving(2, Vec2::new(2.0, 1.0), Vec2::new(0.3, 1.0)),
        ]);
        let c = classify(&f, 0.5, &cfg);
        assert_eq!(c.get(1), Some(Label::PotentiallyFreezing));
        assert_eq!(c.get(2), Some(Label::NonFreezing));
    }

    #[test]
    fn unknown_motion_counts_as_standing() {
        let cfg = FrozoneConfig::default();
        let o = Observation {
            id: 3,
            position: Vec2::new(2.0, 1.0),
            forward: None,
            speed: None,
        };
        assert_eq!(
            classify(&frame(vec![o]), 0.5, &cfg).get(3),
            Some(Label::PotentiallyFreezing)
        );
    }

    #[test]
    fn predict_examples() {
        let f = frame(vec![
            moving(1, Vec2::new(2.0, 0.0), Vec2::new(-1.0, 0.0)),
            moving(2, Vec2::new(2.0, 1.0), Vec2::ZERO),
            moving(3, Vec2::new(2.0, 1.0), Vec2::new(0.0, 1.3)),
        ]);
        let c = classify(&f, 0.5, &FrozoneConfig::default());
        let p = predict(&f, &c, 0.5);
        assert_eq!(p.len(), 2);
        assert_eq!(p[0].predicted, Vec2::new(1.5, 0.0));
        assert_eq!(p[1].predicted, Vec2::new(2.0, 1.0));
    }

    #[test]
    fn pfz_variants() {
        let cfg = FrozoneConfig {
            single_ped_radius: 0.4,
            ..FrozoneConfig::default()
        };
        assert_eq!(build_pfz(&[], &cfg), None);
        assert_eq!(
            build_pfz(&[Vec2::new(2.0, 0.0)], &cfg),
            Some(Pfz::Circle {
                center: Vec2::new(2.0, 0.0),
                radius: 0.4
            })
        );
        let two = build_pfz(&[Vec2::new(2.0, 1.0), Vec2::new(2.0, -1.0)], &cfg).unwrap();
        assert!(matches!(two, Pfz::Segment { inflation, .. } if inflation == 0.4));
        let collinear = build_pfz(
            &[
                Vec2::new(1.0, 0.0),
                Vec2::new(2.0, 0.0),
                Vec2::new(3.0, 0.0),
            ],
            &cfg,
        );
        assert!(matches!(collinear, Some(Pfz::Segment { .. })));
        let tri = build_pfz(
            &[
                Vec2::new(1.0, 0.0),
                Vec2::new(2.0, 1.0),
                Vec2::new(2.0, -1.0),
                Vec2::new(1.5, 0.0),
            ],
            &cfg,
        )
        .unwrap();
        let Pfz::Polygon(poly) = tri else { panic!() };
        assert_eq!(poly.vertices().len(), 3);
    }

    #[test]
    fn trigger_examples() {
        let cfg = FrozoneConfig {
            pred_dt: 0.5,
            ..FrozoneConfig::default()
        };
        let circle = Pfz::Circle {
            center: Vec2::new(0.5, 0.0),
            radius: 0.4,
        };
        assert!(should_deviate(
            Vec2::new(0.5, 0.0),
            &circle,
            Vec2::new(0.5, 0.0),
            &cfg
        ));
        assert!(!should_deviate(
            Vec2::new(0.5, 0.0),
            &circle,
            Vec2::new(5.0, 5.0),
            &cfg
        ));
        // close enough to the pedestrian but the lookahead is outside the zone
        let off = Pfz::Circle {
            center: Vec2::new(1.0, 0.5),
            radius: 0.3,
        };
        assert!(!should_deviate(
            Vec2::new(0.5, 0.0),
            &off,
            Vec2::new(1.0, 0.5),
            &cfg
        ));
    }

    #[test]
    fn maximum_deviation_closed_form() {
        let cfg = FrozoneConfig::default();
        let max = cfg.max_deviation(0.5);
        assert_abs_diff_eq!(max, (1.96f64 - 0.25).sqrt().atan2(0.5), epsilon = 1e-12);
        assert_abs_diff_eq!(max, 1.205589, epsilon = 1e-6);
    }

    #[test]
    fn phi2_at_the_corner_hits_the_bound() {
        let cfg = FrozoneConfig {
            pred_dt: 1.0,
            ..FrozoneConfig::default()
        };
        let max = cfg.max_deviation(0.5);
        let corner = Vec2::new(0.5, (1.4f64 * 1.4 - 0.25).sqrt());
        let zone = Pfz::Circle {
            center: Vec2::new(0.5, 0.0),
            radius: 0.4,
        };
        let r = deviation_angle(
            Vec2::new(0.5, 0.0),
            Vec2::new(5.0, 0.0),
            &zone,
            corner,
            &cfg,
            0.5,
        );
        assert_abs_diff_eq!(r.phi2.unwrap(), max, epsilon = 1e-12);
        assert!(r.phi.abs() <= max + cfg.sweep_step);
    }

    #[test]
    fn sweep_grid_covers_both_endpoints() {
        let a = sweep_angles(0.35, 0.1);
        assert_eq!(a.len(), 9);
        assert_eq!(a[0], 0.0);
        assert!(a.contains(&0.35) && a.contains(&-0.35));
    }

    #[test]
    fn empty_frame_passes_velocity_through() {
        let v = Vec2::new(0.6, 0.0);
        let out = frozone_step(
            &frame(vec![]),
            Vec2::new(5.0, 0.0),
            v,
            &FrozoneConfig::default(),
            0.5,
        );
        assert_eq!(out.velocity(), v);
        assert!(!out.deviation.triggered);
        assert!(out.pfz.is_none());
    }

    #[test]
    fn non_freezing_pedestrians_leave_velocity_alone() {
        let v = Vec2::new(0.6, 0.0);
        let f = frame(vec![moving(1, Vec2::new(1.5, -0.5), Vec2::new(0.2, -1.2))]);
        let out = frozone_step(&f, Vec2::new(5.0, 0.0), v, &FrozoneConfig::default(), 0.5);
        assert_eq!(out.classification.freezing_count(), 0);
        assert_eq!(out.velocity(), v);
    }
}
