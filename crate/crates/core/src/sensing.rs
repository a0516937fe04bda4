//! Limited-range pedestrian sensing.
//!
//! The robot sees a square patch of side `side` that starts `offset` meters in
//! front of it, further restricted to the camera's horizontal field of view.
//! Positions are reported in the robot frame (+x forward, +y left) with
//! additive Gaussian noise. Pedestrian ids are ground truth.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{rotate, Vec2, EPS};
use crate::pedestrian::PedestrianState;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose2 {
    pub position: Vec2,
    pub heading: f64,
}

impl Pose2 {
    pub fn new(position: Vec2, heading: f64) -> Self {
        Self { position, heading }
    }

    /// World point to this pose's local frame.
    pub fn to_local(&self, p: Vec2) -> Vec2 {
        rotate(p - self.position, -self.heading)
    }

    /// Local point to world frame.
    pub fn to_world(&self, p: Vec2) -> Vec2 {
        rotate(p, self.heading) + self.position
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensorConfig {
    /// Side length of the square sensing region, m.
    pub side: f64,
    /// Blind distance in front of the robot before the region starts, m.
    pub offset: f64,
    /// Horizontal camera field of view, rad.
    pub fov: f64,
    pub image_w: u32,
    pub image_h: u32,
    /// Standard deviation of the position noise, m.
    pub pos_noise_sigma: f64,
    /// Time between two sensor frames, s.
    pub frame_dt: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        Self {
            side: 3.0,
            offset: 0.5,
            fov: 60f64.to_radians(),
            image_w: 150,
            image_h: 120,
            pos_noise_sigma: 0.05,
            frame_dt: 0.1,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.side > 0.0) {
            return Err(Error::config("sensing.side", "must be > 0"));
        }
        if !(self.offset > 0.0 && self.offset < self.side) {
            return Err(Error::config("sensing.offset", "must lie in (0, side)"));
        }
        if !(self.fov > 0.0 && self.fov < std::f64::consts::PI) {
            return Err(Error::config("sensing.fov", "must lie in (0, pi)"));
        }
        if self.image_w == 0 || self.image_h == 0 {
            return Err(Error::config(
                "sensing.image_w",
                "image size must be non-zero",
            ));
        }
        if !(self.pos_noise_sigma >= 0.0) {
            return Err(Error::config("sensing.pos_noise_sigma", "must be >= 0"));
        }
        if !(self.frame_dt > 0.0) {
            return Err(Error::config("sensing.frame_dt", "must be > 0"));
        }
        Ok(())
    }

    /// Inside the square region (boundary included).
    pub fn in_square(&self, p: Vec2) -> bool {
        p.x >= self.offset - EPS
            && p.x <= self.offset + self.side + EPS
            && p.y.abs() <= self.side / 2.0 + EPS
    }

    /// Inside the square and the camera's field of view.
    pub fn in_region(&self, p: Vec2) -> bool {
        self.in_square(p) && p.y.atan2(p.x).abs() <= self.fov / 2.0 + EPS
    }

    pub fn clip_to_square(&self, p: Vec2) -> Vec2 {
        let half = self.side / 2.0;
        Vec2::new(
            p.x.clamp(self.offset, self.offset + self.side),
            p.y.clamp(-half, half),
        )
    }

    /// Pedestrian-count threshold of the density switch, `floor(side^2)`.
    pub fn density_threshold(&self) -> usize {
        (self.side * self.side + EPS).floor() as usize
    }
}

/// Planar range sensor used by the guiding planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RangeSensorConfig {
    /// Maximum detection range, m.
    pub range: f64,
    /// Angular field of view, rad.
    pub fov: f64,
    pub pos_noise_sigma: f64,
}

impl Default for RangeSensorConfig {
    fn default() -> Self {
        Self {
            range: 4.0,
            fov: 240f64.to_radians(),
            pos_noise_sigma: 0.05,
        }
    }
}

impl RangeSensorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.range > 0.0) {
            return Err(Error::config("range_sensor.range", "must be > 0"));
        }
        if !(self.fov > 0.0 && self.fov <= 2.0 * std::f64::consts::PI) {
            return Err(Error::config("range_sensor.fov", "must lie in (0, 2pi]"));
        }
        if !(self.pos_noise_sigma >= 0.0) {
            return Err(Error::config(
                "range_sensor.pos_noise_sigma",
                "must be >= 0",
            ));
        }
        Ok(())
    }

    pub fn in_region(&self, p: Vec2) -> bool {
        p.norm() <= self.range + EPS && p.y.atan2(p.x).abs() <= self.fov / 2.0 + EPS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub id: u32,
    /// Robot frame.
    pub position: Vec2,
    /// Unit heading in the robot frame; `None` until motion is estimated.
    pub forward: Option<Vec2>,
    pub speed: Option<f64>,
}

impl Observation {
    /// Velocity in the robot frame; unknown motion counts as standing still.
    pub fn velocity(&self) -> Vec2 {
        match (self.forward, self.speed) {
            (Some(u), Some(s)) => u * s,
            _ => Vec2::ZERO,
        }
    }

    pub fn speed_or_zero(&self) -> f64 {
        self.speed.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SensorFrame {
    pub timestamp: f64,
    /// Robot pose (odometry) at capture time, used for ego-motion compensation.
    pub robot_pose: Pose2,
    pub observations: Vec<Observation>,
}

impl SensorFrame {
    pub fn empty(timestamp: f64, robot_pose: Pose2) -> Self {
        Self {
            timestamp,
            robot_pose,
            observations: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&Observation> {
        self.observations.iter().find(|o| o.id == id)
    }
}

/// Observes every pedestrian inside the sensing region.
///
/// Noise is drawn for each observed pedestrian in input order, so the
/// result is a pure function of the inputs and the rng state.
pub fn sense<R: Rng + ?Sized>(
    pedestrians: &[PedestrianState],
    robot_pose: Pose2,
    timestamp: f64,
    cfg: &SensorConfig,
    rng: &mut R,
) -> SensorFrame {
    let noise = (cfg.pos_noise_sigma > 0.0)
        .then(|| Normal::new(0.0, cfg.pos_noise_sigma).expect("sigma checked"));
    let observations = pedestrians
        .iter()
        .filter_map(|ped| {
            let local = robot_pose.to_local(ped.position);
            if !cfg.in_region(local) {
                return None;
            }
            let measured = match &noise {
                Some(n) => cfg.clip_to_square(local + Vec2::new(n.sample(rng), n.sample(rng))),
                None => local,
            };
            Some(Observation {
                id: ped.id,
                position: measured,
                forward: None,
                speed: None,
            })
        })
        .collect();
    SensorFrame {
        timestamp,
        robot_pose,
        observations,
    }
}

/// Observes every disc (pedestrians and walls) within range of the planar
/// range sensor. Positions are not clipped.
pub fn sense_range<R: Rng + ?Sized>(
    pedestrians: &[PedestrianState],
    robot_pose: Pose2,
    timestamp: f64,
    cfg: &RangeSensorConfig,
    rng: &mut R,
) -> SensorFrame {
    let noise = (cfg.pos_noise_sigma > 0.0)
        .then(|| Normal::new(0.0, cfg.pos_noise_sigma).expect("sigma checked"));
    let observations = pedestrians
        .iter()
        .filter_map(|ped| {
            let local = robot_pose.to_local(ped.position);
            if !cfg.in_region(local) {
                return None;
            }
            let position = match &noise {
                Some(n) => local + Vec2::new(n.sample(rng), n.sample(rng)),
                None => local,
            };
            Some(Observation {
                id: ped.id,
                position,
                forward: None,
                speed: None,
            })
        })
        .collect();
    SensorFrame {
        timestamp,
        robot_pose,
        observations,
    }
}

/// Fills heading and speed of `curr`'s observations by differencing against
/// `prev`. The robot's own displacement between the frames is removed, and
/// the resulting world velocity is expressed in `curr`'s robot frame.
pub fn estimate_motion(prev: &SensorFrame, curr: &SensorFrame) -> Result<SensorFrame> {
    let dt = curr.timestamp - prev.timestamp;
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "frame interval must be positive, got {dt}"
        )));
    }
    let mut out = curr.clone();
    for obs in &mut out.observations {
        let Some(before) = prev.get(obs.id) else {
            continue;
        };
        let world_now = curr.robot_pose.to_world(obs.position);
        let world_then = prev.robot_pose.to_world(before.position);
        let velocity = rotate(
            (world_now - world_then) * (1.0 / dt),
            -curr.robot_pose.heading,
        );
        obs.speed = Some(velocity.norm());
        obs.forward = velocity.normalized();
    }
    Ok(out)
}

/// Keeps a smoothed world-frame velocity per pedestrian id across frames.
///
/// With `smoothing = 0` the output equals [`estimate_motion`] on consecutive
/// frames. Larger values blend in the previous estimate to suppress the
/// noise amplified by differencing.
#[derive(Debug, Clone, Default)]
pub struct MotionTracker {
    smoothing: f64,
    prev: Option<SensorFrame>,
    velocities: Vec<(u32, Vec2)>,
}

impl MotionTracker {
    pub fn new(smoothing: f64) -> Self {
        Self {
            smoothing: smoothing.clamp(0.0, 0.99),
            prev: None,
            velocities: Vec::new(),
        }
    }

    pub fn update(&mut self, frame: SensorFrame) -> Result<SensorFrame> {
        let raw = match &self.prev {
            Some(prev) => estimate_motion(prev, &frame)?,
            None => frame.clone(),
        };
        let heading = frame.robot_pose.heading;
        let mut velocities = Vec::with_capacity(raw.observations.len());
        let mut out = raw;
        for obs in &mut out.observations {
            if obs.speed.is_none() {
                continue;
            }
            let measured_world = rotate(obs.velocity(), heading);
            let world = match self.velocities.iter().find(|(id, _)| *id == obs.id) {
                Some((_, old)) => *old * self.smoothing + measured_world * (1.0 - self.smoothing),
                None => measured_world,
            };
            velocities.push((obs.id, world));
            let local = rotate(world, -heading);
            obs.speed = Some(local.norm());
            obs.forward = local.normalized();
        }
        self.velocities = velocities;
        self.prev = Some(frame);
        Ok(out)
    }
}

/// Detection box reduced to what pose recovery needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticBBox {
    pub id: u32,
    /// Horizontal centroid, pixels from the image's left edge.
    pub centroid_x: f64,
    /// Mean depth inside the box, m.
    pub mean_depth: f64,
}

/// Recovers a robot-frame position from a box. The image centre maps to
/// straight ahead and the left edge to `+fov/2` (the robot's left).
pub fn bbox_to_position(bbox: &SyntheticBBox, cfg: &SensorConfig) -> Vec2 {
    let psi = (0.5 - bbox.centroid_x / f64::from(cfg.image_w)) * cfg.fov;
    Vec2::from_angle(psi) * bbox.mean_depth
}

/// Box a camera would report for a pedestrian at robot-frame `position`.
pub fn synthesize_bbox(id: u32, position: Vec2, cfg: &SensorConfig) -> SyntheticBBox {
    let psi = position.angle();
    SyntheticBBox {
        id,
        centroid_x: (0.5 - psi / cfg.fov) * f64::from(cfg.image_w),
        mean_depth: position.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(sigma: f64) -> SensorConfig {
        SensorConfig {
            pos_noise_sigma: sigma,
            ..SensorConfig::default()
        }
    }

    fn ped_at(id: u32, p: Vec2) -> PedestrianState {
        PedestrianState::new(id, p, vec![], 1.3)
    }

    fn obs(id: u32, p: Vec2) -> Observation {
        Observation {
            id,
            position: p,
            forward: None,
            speed: None,
        }
    }

    #[test]
    fn sense_region_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let origin = Pose2::default();
        let peds = [
            ped_at(1, Vec2::new(2.0, 0.0)),
            ped_at(2, Vec2::new(0.3, 0.0)),
            ped_at(3, Vec2::new(2.0, 2.0)),
        ];
        let frame = sense(&peds, origin, 0.0, &cfg(0.0), &mut rng);
        assert_eq!(frame.observations.len(), 1);
        assert_eq!(frame.observations[0].position, Vec2::new(2.0, 0.0));
        assert_eq!(frame.observations[0].speed, None);
    }

    #[test]
    fn range_sensor_sees_behind_the_camera_cone() {
        let cfg = RangeSensorConfig {
            pos_noise_sigma: 0.0,
            ..RangeSensorConfig::default()
        };
        let peds = vec![
            PedestrianState::new(1, Vec2::new(0.0, 2.0), vec![], 1.0),
            PedestrianState::new(2, Vec2::new(-0.5, -1.0), vec![], 1.0),
            PedestrianState::new(3, Vec2::new(3.0, 3.0), vec![], 1.0),
            PedestrianState::new(4, Vec2::new(-2.0, 0.0), vec![], 1.0),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let f = sense_range(&peds, Pose2::default(), 0.0, &cfg, &mut rng);
        let ids: Vec<u32> = f.observations.iter().map(|o| o.id).collect();
        assert_eq!(ids, vec![1, 2]);
        assert_eq!(f.get(1).unwrap().position, Vec2::new(0.0, 2.0));
    }

    #[test]
    fn sense_uses_robot_frame() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pose = Pose2::new(Vec2::new(1.0, 1.0), std::f64::consts::FRAC_PI_2);
        let frame = sense(
            &[ped_at(1, Vec2::new(1.0, 3.0))],
            pose,
            0.0,
            &cfg(0.0),
            &mut rng,
        );
        let p = frame.observations[0].position;
        assert_abs_diff_eq!(p.x, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn noisy_observations_stay_in_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let c = cfg(0.5);
        let peds: Vec<_> = (0..20)
            .map(|i| ped_at(i, Vec2::new(0.55 + 0.1 * i as f64, 0.0)))
            .collect();
        for _ in 0..50 {
            let frame = sense(&peds, Pose2::default(), 0.0, &c, &mut rng);
            assert!(frame.observations.iter().all(|o| c.in_square(o.position)));
        }
    }

    #[test]
    fn motion_from_static_robot() {
        let prev = SensorFrame {
            timestamp: 0.0,
            robot_pose: Pose2::default(),
            observations: vec![obs(4, Vec2::new(2.0, 0.0))],
        };
        let curr = SensorFrame {
            timestamp: 0.1,
            robot_pose: Pose2::default(),
            observations: vec![obs(4, Vec2::new(2.0, 0.13)), obs(5, Vec2::new(3.0, 0.0))],
        };
        let out = estimate_motion(&prev, &curr).unwrap();
        let o = out.get(4).unwrap();
        assert_abs_diff_eq!(o.speed.unwrap(), 1.3, epsilon = 1e-9);
        let u = o.forward.unwrap();
        assert_abs_diff_eq!(u.x, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(u.y, 1.0, epsilon = 1e-9);
        assert_eq!(out.get(5).unwrap().speed, None);
        assert_eq!(out.get(5).unwrap().velocity(), Vec2::ZERO);
    }

    #[test]
    fn ego_motion_is_compensated() {
        // pedestrian fixed at world (2, 0); robot advances 0.05 m per frame
        let prev = SensorFrame {
            timestamp: 0.0,
            robot_pose: Pose2::default(),
            observations: vec![obs(1, Vec2::new(2.0, 0.0))],
        };
        let curr = SensorFrame {
            timestamp: 0.1,
            robot_pose: Pose2::new(Vec2::new(0.05, 0.0), 0.0),
            observations: vec![obs(1, Vec2::new(1.95, 0.0))],
        };
        let out = estimate_motion(&prev, &curr).unwrap();
        assert_abs_diff_eq!(out.get(1).unwrap().speed.unwrap(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn non_positive_interval_is_rejected() {
        let f = SensorFrame::empty(1.0, Pose2::default());
        assert!(estimate_motion(&f, &f).is_err());
    }

    #[test]
    fn bbox_examples() {
        let c = SensorConfig::default();
        let w = f64::from(c.image_w);
        let p = bbox_to_position(
            &SyntheticBBox {
                id: 0,
                centroid_x: w / 2.0,
                mean_depth: 2.0,
            },
            &c,
        );
        assert_abs_diff_eq!(p.x, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 0.0, epsilon = 1e-12);

        let p = bbox_to_position(
            &SyntheticBBox {
                id: 0,
                centroid_x: 0.0,
                mean_depth: 2.0,
            },
            &c,
        );
        assert_abs_diff_eq!(p.x, 3f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-9);

        let p = bbox_to_position(
            &SyntheticBBox {
                id: 0,
                centroid_x: w,
                mean_depth: 1.0,
            },
            &c,
        );
        assert_abs_diff_eq!(p.x, 0.8660254, epsilon = 1e-7);
        assert_abs_diff_eq!(p.y, -0.5, epsilon = 1e-12);
    }

    #[test]
    fn tracker_without_smoothing_matches_differencing() {
        let mut tracker = MotionTracker::new(0.0);
        let a = SensorFrame {
            timestamp: 0.0,
            robot_pose: Pose2::default(),
            observations: vec![obs(1, Vec2::new(2.0, 0.0))],
        };
        let b = SensorFrame {
            timestamp: 0.1,
            robot_pose: Pose2::new(Vec2::new(0.02, 0.0), 0.1),
            observations: vec![obs(1, Vec2::new(1.9, -0.1))],
        };
        tracker.update(a.clone()).unwrap();
        let tracked = tracker.update(b.clone()).unwrap();
        let direct = estimate_motion(&a, &b).unwrap();
        let (t, d) = (tracked.get(1).unwrap(), direct.get(1).unwrap());
        assert_abs_diff_eq!(t.speed.unwrap(), d.speed.unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(t.velocity().x, d.velocity().x, epsilon = 1e-12);
    }

    #[test]
    fn density_threshold_is_floor_of_area() {
        assert_eq!(SensorConfig::default().density_threshold(), 9);
        let c = SensorConfig {
            side: 2.5,
            ..SensorConfig::default()
        };
        assert_eq!(c.density_threshold(), 6);
    }
}
