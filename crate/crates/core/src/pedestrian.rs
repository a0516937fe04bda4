//! Pedestrian speed law and the scripted pedestrian kinematics used by the
//! simulator.
//!
//! A pedestrian walks its waypoint list at the speed given by the fundamental
//! diagram: it slows down as the free space in front of it shrinks and walks
//! at its preferred speed otherwise. Pedestrians never steer around anything.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, Vec2, EPS};

/// Distance at which a waypoint counts as reached, in meters.
pub const WAYPOINT_REACHED: f64 = 0.1;

/// Default preferred walking speed, m/s.
pub const DEFAULT_PREF_SPEED: f64 = 1.3;

/// Front-space cap used by the simulator, meters.
pub const DEFAULT_FRONT_SPACE_CAP: f64 = 4.0;

/// Fundamental-diagram constants, shared by all pedestrians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FdParams {
    pub alpha: f64,
    pub beta: f64,
    /// Height normalisation, height / 1.72.
    pub height_factor: f64,
}

impl Default for FdParams {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.6,
            height_factor: 1.0,
        }
    }
}

impl FdParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("height_factor", self.height_factor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(
                    format!("pedestrian_model.{name}"),
                    "must be > 0",
                ));
            }
        }
        Ok(())
    }

    /// Smallest front space at which a pedestrian walks at `pref_speed`.
    pub fn saturation_space(&self, pref_speed: f64) -> f64 {
        self.height_factor * (1.0 + self.beta) * pref_speed.sqrt() / self.alpha
    }
}

/// A disc-shaped obstacle as seen by a pedestrian's front-space ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: Vec2,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PedestrianState {
    pub id: u32,
    pub position: Vec2,
    /// Unit heading.
    pub forward: Vec2,
    pub pref_speed: f64,
    pub radius: f64,
    pub waypoints: Vec<Vec2>,
    pub waypoint_index: usize,
    /// Static obstacle (wall segment) modelled as a pedestrian that never moves.
    #[serde(default)]
    pub fixed: bool,
}

impl PedestrianState {
    pub fn new(id: u32, position: Vec2, waypoints: Vec<Vec2>, pref_speed: f64) -> Self {
        let forward = waypoints
            .first()
            .and_then(|w| (*w - position).normalized())
            .unwrap_or(Vec2::X);
        Self {
            id,
            position,
            forward,
            pref_speed,
            radius: 0.25,
            waypoints,
            waypoint_index: 0,
            fixed: false,
        }
    }

    /// A wall disc: never moves and is excluded from pedestrian metrics.
    pub fn fixed(id: u32, position: Vec2, radius: f64) -> Self {
        Self {
            id,
            position,
            forward: Vec2::X,
            pref_speed: DEFAULT_PREF_SPEED,
            radius,
            waypoints: Vec::new(),
            waypoint_index: 0,
            fixed: true,
        }
    }

    pub fn halted(&self) -> bool {
        self.fixed || self.waypoint_index >= self.waypoints.len()
    }

    pub fn disc(&self) -> Disc {
        Disc {
            center: self.position,
            radius: self.radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pref_speed > 0.0 && self.pref_speed <= 3.0) {
            return Err(Error::config(
                format!("pedestrians[{}].pref_speed", self.id),
                "must lie in (0, 3]",
            ));
        }
        if !(self.radius > 0.0 && self.radius <= 0.5) {
            return Err(Error::config(
                format!("pedestrians[{}].radius", self.id),
                "must lie in (0, 0.5]",
            ));
        }
        if (self.forward.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                format!("pedestrians[{}].forward", self.id),
                "must be a unit vector",
            ));
        }
        Ok(())
    }
}

/// Natural walking speed for the given free space ahead:
/// `min(pref, (S * alpha / (H * (1 + beta)))^2)`.
pub fn walking_speed(front_space: f64, params: &FdParams, pref_speed: f64) -> Result<f64> {
    if front_space < 0.0 || front_space.is_nan() {
        return Err(Error::InvalidArgument(format!(
            "front space must be non-negative, got {front_space}"
        )));
    }
    let free = front_space * params.alpha / (params.height_factor * (1.0 + params.beta));
    Ok(pref_speed.min(free * free))
}

/// Distance along the ray from `origin` in unit direction `dir` to the first
/// point of `disc`, or `None` when the ray misses. Zero when `origin` is
/// already inside the disc.
pub fn ray_disc_hit(origin: Vec2, dir: Vec2, disc: Disc) -> Option<f64> {
    let rel = disc.center - origin;
    let r2 = disc.radius * disc.radius;
    if rel.norm_sq() <= r2 {
        return Some(0.0);
    }
    let along = rel.dot(dir);
    if along <= 0.0 {
        return None;
    }
    let perp_sq = rel.norm_sq() - along * along;
    if perp_sq > r2 {
        return None;
    }
    Some(along - (r2 - perp_sq).sqrt())
}

/// Free space in front of `ped` against arbitrary discs, clamped to `[0, cap]`.
///
/// This is how far the pedestrian's own disc can slide along its heading
/// before touching another disc, so a disc just off the centre line still
/// counts.
pub fn front_space_among(
    ped: &PedestrianState,
    discs: impl IntoIterator<Item = Disc>,
    cap: f64,
) -> f64 {
    discs
        .into_iter()
        .filter_map(|d| {
            let grown = Disc {
                center: d.center,
                radius: d.radius + ped.radius,
            };
            ray_disc_hit(ped.position, ped.forward, grown)
        })
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, cap)
}

/// Free space in front of `ped` along its heading against every other
/// pedestrian and the robot, clamped to `[0, cap]`.
pub fn front_space(
    ped: &PedestrianState,
    others: &[PedestrianState],
    robot_disc: Disc,
    cap: f64,
) -> f64 {
    let discs = others
        .iter()
        .filter(|o| o.id != ped.id)
        .map(PedestrianState::disc)
        .chain(std::iter::once(robot_disc));
    front_space_among(ped, discs, cap)
}

/// Advances a scripted pedestrian by `speed * dt` toward its current waypoint.
///
/// The step is cut short at the waypoint. Once the last waypoint is reached
/// the pedestrian stays put and keeps its final heading.
pub fn step_pedestrian(ped: &PedestrianState, speed: f64, dt: f64) -> PedestrianState {
    let mut next = ped.clone();
    if ped.fixed {
        return next;
    }
    advance_reached(&mut next);
    if next.halted() {
        return next;
    }

    let mut budget = speed.max(0.0) * dt;
    // a waypoint counted as reached from up to WAYPOINT_REACHED away is still
    // walked through, so the path is exactly the waypoint polyline
    let target = next.waypoints[next.waypoint_index];
    if next.waypoint_index > 0 {
        let corner = next.waypoints[next.waypoint_index - 1];
        if dist(next.position, corner) < WAYPOINT_REACHED && !leaving(next.position, corner, target)
        {
            budget -= walk_toward(&mut next, corner, budget);
        }
    }
    walk_toward(&mut next, target, budget);

    advance_reached(&mut next);
    if !next.halted() {
        if let Some(dir) = (next.waypoints[next.waypoint_index] - next.position).normalized() {
            next.forward = dir;
        }
    }
    next
}

/// Whether `p` lies on the segment from `corner` toward `target`.
fn leaving(p: Vec2, corner: Vec2, target: Vec2) -> bool {
    let out = target - corner;
    let rel = p - corner;
    rel.dot(out) > 0.0 && rel.cross(out).abs() <= EPS * out.norm().max(1.0)
}

/// Moves at most `budget` toward `target`, landing on it exactly when in
/// reach. Returns the distance covered.
fn walk_toward(ped: &mut PedestrianState, target: Vec2, budget: f64) -> f64 {
    let to_target = target - ped.position;
    let remaining = to_target.norm();
    let Some(dir) = to_target.normalized() else {
        return 0.0;
    };
    ped.forward = dir;
    if budget >= remaining {
        ped.position = target;
        remaining
    } else {
        ped.position += dir * budget;
        budget
    }
}

fn advance_reached(ped: &mut PedestrianState) {
    while ped.waypoint_index < ped.waypoints.len()
        && dist(ped.position, ped.waypoints[ped.waypoint_index]) < WAYPOINT_REACHED
    {
        ped.waypoint_index += 1;
    }
}
