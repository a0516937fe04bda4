//! Builtin scenario catalog.

use crate::error::{Error, Result};
use crate::geometry::Vec2;

use super::{PedestrianSpec, RandomCrowd, RobotSpec, ScenarioConfig};

pub const BUILTIN_NAMES: [&str; 8] = [
    "corridor",
    "crossing",
    "random-5",
    "random-10",
    "1ped-3m",
    "1ped-4m",
    "ped-perp-3m",
    "ped-perp-4m",
];

const WALL_SPACING: f64 = 0.5;

fn robot_to(goal: Vec2) -> RobotSpec {
    RobotSpec {
        start: Vec2::ZERO,
        heading: 0.0,
        goal,
    }
}

/// Fixed discs every 0.5 m along `y = y` for `x` in `[x0, x1]`.
fn wall_x(y: f64, x0: f64, x1: f64) -> impl Iterator<Item = PedestrianSpec> {
    let n = ((x1 - x0) / WALL_SPACING).round() as usize;
    (0..=n).map(move |i| PedestrianSpec::wall(Vec2::new(x0 + i as f64 * WALL_SPACING, y)))
}

fn wall_y(x: f64, y0: f64, y1: f64) -> impl Iterator<Item = PedestrianSpec> {
    let n = ((y1 - y0) / WALL_SPACING).round() as usize;
    (0..=n).map(move |i| PedestrianSpec::wall(Vec2::new(x, y0 + i as f64 * WALL_SPACING)))
}

/// Single pedestrian walking head-on at 1 m/s towards the robot's start,
/// where it halts.
fn head_on(name: &str, distance: f64) -> ScenarioConfig {
    let ped = PedestrianSpec::walker(Vec2::new(distance, 0.0), vec![Vec2::ZERO], 1.0);
    ScenarioConfig::new(name, robot_to(Vec2::new(8.0, 0.0)), vec![ped])
}

/// Single pedestrian crossing the robot's path from right to left, `distance`
/// metres ahead of the robot's start.
fn perpendicular(name: &str, distance: f64) -> ScenarioConfig {
    let start_y = -(PERP_LEAD + distance / 0.6) * 1.0 + PERP_OFFSET;
    let ped = PedestrianSpec::walker(
        Vec2::new(distance, start_y),
        vec![Vec2::new(distance, 8.0)],
        1.0,
    );
    ScenarioConfig::new(name, robot_to(Vec2::new(8.0, 0.0)), vec![ped])
}

const PERP_LEAD: f64 = 0.0;
const PERP_OFFSET: f64 = 0.0;

/// 15 pedestrians walking against the robot in a 5 m corridor. They start
/// in two staggered lanes and drift towards the centre line, zig-zagging
/// across the robot's path.
fn corridor() -> ScenarioConfig {
    let (length, half, lane) = (16.0, 2.5, 1.2);
    let mut peds = Vec::new();
    for k in 0..15 {
        let x = 4.0 + 1.2 * k as f64;
        let y = if k % 2 == 0 { lane } else { -lane };
        let speed = 0.8 + 0.05 * (k % 5) as f64;
        peds.push(PedestrianSpec::walker(
            Vec2::new(x, y),
            vec![Vec2::new(x - 3.0, -0.3 * y), Vec2::new(-6.0, -0.3 * y)],
            speed,
        ));
    }
    peds.extend(wall_x(half, -2.0, length + 2.0));
    peds.extend(wall_x(-half, -2.0, length + 2.0));
    ScenarioConfig::new("corridor", robot_to(Vec2::new(length - 2.0, 0.0)), peds)
}

/// Horizontal corridor crossed by a vertical one; pedestrians flow along
/// the vertical arm in both directions, keeping to the right.
fn crossing() -> ScenarioConfig {
    let (cx, half) = (6.0, 2.0);
    let mut peds = Vec::new();
    for k in 0..8 {
        let up = k % 2 == 0;
        let row = (k / 2) as f64;
        let lane = if (k / 2) % 2 == 0 { 1.3 } else { 0.5 };
        let (x, y0, y1) = if up {
            (cx - lane, -3.0 - row, 12.0)
        } else {
            (cx + lane, 3.0 + row, -12.0)
        };
        peds.push(PedestrianSpec::walker(
            Vec2::new(x, y0),
            vec![Vec2::new(x, y1)],
            0.9,
        ));
    }
    for y in [-half, half] {
        peds.extend(wall_x(y, -2.0, cx - half - WALL_SPACING));
        peds.extend(wall_x(y, cx + half + WALL_SPACING, 14.0));
    }
    for x in [cx - half, cx + half] {
        peds.extend(wall_y(x, -12.0, -half));
        peds.extend(wall_y(x, half, 12.0));
    }
    ScenarioConfig::new("crossing", robot_to(Vec2::new(12.0, 0.0)), peds)
}

fn random(name: &str, count: usize, half_extent: Vec2) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(name, robot_to(Vec2::new(10.0, 0.0)), Vec::new());
    cfg.random_crowd = Some(RandomCrowd {
        count,
        center: Vec2::new(5.0, 0.0),
        half_extent,
        legs: 4,
        min_speed: 0.6,
        max_speed: 1.2,
        keep_clear: 1.5,
    });
    cfg
}

pub fn builtin_scenarios() -> Vec<ScenarioConfig> {
    vec![
        corridor(),
        crossing(),
        random("random-5", 5, Vec2::new(1.5, 1.5)),
        random("random-10", 10, Vec2::new(4.0, 2.0)),
        head_on("1ped-3m", 3.0),
        head_on("1ped-4m", 4.0),
        perpendicular("ped-perp-3m", 3.0),
        perpendicular("ped-perp-4m", 4.0),
    ]
}

/// Case-insensitive lookup by name.
pub fn builtin_scenario(name: &str) -> Result<ScenarioConfig> {
    let wanted = name.to_ascii_lowercase();
    builtin_scenarios()
        .into_iter()
        .find(|s| s.name == wanted)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("unknown scenario `{name}`; try list-scenarios"))
        })
}
