//! Run-level metrics: the freezing-problem predicate, the freeze detector and
//! pedestrian friendliness.

use crate::geometry::{dist, Vec2, EPS};
use crate::pedestrian::PedestrianState;
use crate::sensing::{Pose2, SensorConfig};

/// Score awarded when the robot passed every engaged pedestrian from behind.
pub const PF_INFINITY: f64 = 10.0;

/// Length of the freeze detection window, s.
pub const FREEZE_WINDOW: f64 = 10.0;
/// Net displacement below which a window counts as frozen, m.
pub const FREEZE_DISPLACEMENT: f64 = 0.2;
/// Goal distance under which the robot is never considered frozen, m.
pub const FREEZE_GOAL_EXCLUSION: f64 = 0.5;

/// Largest pedestrian set for which every chain ordering is searched.
const EXHAUSTIVE_LIMIT: usize = 8;

/// Forward region used by the freezing predicate: the sensing square
/// extended back to the robot, `0 < x <= offset + side`, `|y| <= side / 2`.
pub fn in_frp_region(p: Vec2, sensing: &SensorConfig) -> bool {
    p.x > 0.0 && p.x <= sensing.offset + sensing.side + EPS && p.y.abs() <= sensing.side / 2.0 + EPS
}

/// Freezing-problem predicate over robot-frame pedestrian positions.
///
/// True when at least one pedestrian is in the forward region, every such
/// pedestrian is within `omega` of the robot, and they can be ordered into a
/// chain whose consecutive gaps are all below `2 * omega`.
pub fn frp_predicate(local_positions: &[Vec2], omega: f64, sensing: &SensorConfig) -> bool {
    let peds: Vec<Vec2> = local_positions
        .iter()
        .copied()
        .filter(|p| in_frp_region(*p, sensing))
        .collect();
    if peds.is_empty() || peds.iter().any(|p| p.norm() > omega + EPS) {
        return false;
    }
    let linked = |a: Vec2, b: Vec2| dist(a, b) < 2.0 * omega;
    if peds.len() <= EXHAUSTIVE_LIMIT {
        hamiltonian_path_exists(&peds, linked)
    } else {
        let mut by_angle = peds;
        by_angle.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        by_angle.windows(2).all(|w| linked(w[0], w[1]))
    }
}

/// World-state convenience wrapper around [`frp_predicate`].
pub fn frp_predicate_world(
    robot: Pose2,
    pedestrians: &[PedestrianState],
    omega: f64,
    sensing: &SensorConfig,
) -> bool {
    let local: Vec<Vec2> = pedestrians
        .iter()
        .map(|p| robot.to_local(p.position))
        .collect();
    frp_predicate(&local, omega, sensing)
}

fn hamiltonian_path_exists(points: &[Vec2], linked: impl Fn(Vec2, Vec2) -> bool) -> bool {
    let n = points.len();
    let full = (1usize << n) - 1;
    // reach[mask] has bit j set when some path visits exactly `mask` and ends at j
    let mut reach = vec![0u32; 1 << n];
    for j in 0..n {
        reach[1 << j] |= 1 << j;
    }
    for mask in 1..=full {
        let ends = reach[mask];
        if ends == 0 {
            continue;
        }
        for j in (0..n).filter(|j| ends & (1 << j) != 0) {
            for k in (0..n).filter(|k| mask & (1 << k) == 0) {
                if linked(points[j], points[k]) {
                    reach[mask | (1 << k)] |= 1 << k;
                }
            }
        }
    }
    reach[full] != 0
}

/// True when the window spans at least [`FREEZE_WINDOW`] seconds, the robot's
/// net displacement over it is under [`FREEZE_DISPLACEMENT`], and the goal is
/// still more than [`FREEZE_GOAL_EXCLUSION`] away.
pub fn freeze_detector(window: &[(f64, Vec2)], goal: Vec2) -> bool {
    let (Some(&(t0, p0)), Some(&(t1, p1))) = (window.first(), window.last()) else {
        return false;
    };
    if t1 - t0 < FREEZE_WINDOW - 1e-9 {
        return false;
    }
    dist(p0, p1) < FREEZE_DISPLACEMENT && dist(p1, goal) > FREEZE_GOAL_EXCLUSION
}

/// Per-pedestrian bookkeeping for the friendliness score.
#[derive(Debug, Clone, Default)]
struct Encounter {
    lateral_sign: f64,
    engaged: bool,
    passed_in_front: bool,
}

/// Accumulates pedestrian friendliness over a run.
///
/// A pedestrian is engaged when the robot crosses the line of its heading
/// while within `eta` of it. The crossing is a pass from behind when the
/// robot is in the half-plane opposite the pedestrian's heading at that
/// instant. The score is [`PF_INFINITY`] when no engaged pedestrian was passed
/// in front, and otherwise the minimum robot-pedestrian distance.
#[derive(Debug, Clone)]
pub struct FriendlinessTracker {
    eta: f64,
    min_dist: f64,
    encounters: Vec<Encounter>,
}

impl FriendlinessTracker {
    pub fn new(eta: f64, pedestrian_count: usize) -> Self {
        Self {
            eta,
            min_dist: f64::INFINITY,
            encounters: vec![Encounter::default(); pedestrian_count],
        }
    }

    /// `pedestrians` must be in the same order on every call.
    pub fn observe(&mut self, robot: Vec2, pedestrians: &[PedestrianState]) {
        for (enc, ped) in self.encounters.iter_mut().zip(pedestrians) {
            let rel = robot - ped.position;
            let d = rel.norm();
            self.min_dist = self.min_dist.min(d);
            let lateral = rel.dot(ped.forward.perp());
            let sign = if lateral.abs() <= EPS {
                0.0
            } else {
                lateral.signum()
            };
            if sign == 0.0 {
                continue;
            }
            if enc.lateral_sign != 0.0 && sign != enc.lateral_sign && d <= self.eta {
                enc.engaged = true;
                if rel.dot(ped.forward) >= 0.0 {
                    enc.passed_in_front = true;
                }
            }
            enc.lateral_sign = sign;
        }
    }

    /// Whether every engaged pedestrian was passed from behind.
    pub fn passed_behind(&self) -> bool {
        self.encounters.iter().all(|e| !e.passed_in_front)
    }

    pub fn engaged_count(&self) -> usize {
        self.encounters.iter().filter(|e| e.engaged).count()
    }

    pub fn min_distance(&self) -> f64 {
        self.min_dist
    }

    pub fn score(&self) -> f64 {
        pedestrian_friendliness(self.passed_behind(), self.min_dist)
    }
}

/// `Z * N_inf + (1 - Z) * min_dist`.
pub fn pedestrian_friendliness(passed_behind: bool, min_dist: f64) -> f64 {
    if passed_behind {
        PF_INFINITY
    } else {
        min_dist.min(PF_INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sensing() -> SensorConfig {
        SensorConfig::default()
    }

    #[test]
    fn frp_examples() {
        let s = sensing();
        assert!(frp_predicate(
            &[Vec2::new(0.4, 0.3), Vec2::new(0.4, -0.3)],
            0.5,
            &s
        ));
        assert!(!frp_predicate(&[Vec2::new(3.0, 0.0)], 0.5, &s));
        assert!(!frp_predicate(
            &[Vec2::new(0.3, 0.6), Vec2::new(0.3, -0.6)],
            0.5,
            &s
        ));
        assert!(!frp_predicate(&[], 0.5, &s));
    }

    #[test]
    fn frp_needs_a_chain() {
        let s = sensing();
        let omega = 0.5;
        // three pedestrians on a half circle; a chain exists through the middle one
        let arc = [
            Vec2::from_angle(-1.2) * 0.45,
            Vec2::from_angle(1.2) * 0.45,
            Vec2::from_angle(0.0) * 0.45,
        ];
        assert!(frp_predicate(&arc, omega, &s));
    }

    #[test]
    fn freeze_examples() {
        let goal = Vec2::new(10.0, 0.0);
        let oscillating: Vec<_> = (0..=100)
            .map(|i| (i as f64 * 0.1, Vec2::new(0.05 * (i as f64).sin(), 0.0)))
            .collect();
        assert!(freeze_detector(&oscillating, goal));

        let advancing: Vec<_> = (0..=100)
            .map(|i| (i as f64 * 0.1, Vec2::new(0.03 * i as f64, 0.0)))
            .collect();
        assert!(!freeze_detector(&advancing, goal));

        let parked: Vec<_> = (0..=100)
            .map(|i| (i as f64 * 0.1, Vec2::new(9.7, 0.0)))
            .collect();
        assert!(!freeze_detector(&parked, goal));

        let short: Vec<_> = (0..50).map(|i| (i as f64 * 0.1, Vec2::ZERO)).collect();
        assert!(!freeze_detector(&short, goal));
    }

    fn crossing_ped(position: Vec2) -> PedestrianState {
        PedestrianState::new(0, position, vec![Vec2::new(position.x, 10.0)], 1.0)
    }

    #[test]
    fn passing_behind_scores_n_infinity() {
        let mut pf = FriendlinessTracker::new(1.4, 1);
        // pedestrian walks +y along x = 3, robot crosses x = 3 after it went by
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            let ped = crossing_ped(Vec2::new(3.0, -1.0 + t));
            let robot = Vec2::new(2.0 + 0.5 * t, 0.0);
            pf.observe(robot, &[ped]);
        }
        assert_eq!(pf.engaged_count(), 1);
        assert_eq!(pf.score(), PF_INFINITY);
    }

    #[test]
    fn passing_in_front_scores_min_distance() {
        let mut pf = FriendlinessTracker::new(1.4, 1);
        let mut min = f64::INFINITY;
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            let ped = crossing_ped(Vec2::new(3.0, -1.5 + 0.2 * t));
            let robot = Vec2::new(2.0 + 0.5 * t, 0.0);
            min = min.min(dist(robot, ped.position));
            pf.observe(robot, &[ped]);
        }
        assert!(!pf.passed_behind());
        assert_eq!(pf.score(), min);
        assert!(pf.score() < PF_INFINITY);
    }

    #[test]
    fn distant_crossings_do_not_engage() {
        let mut pf = FriendlinessTracker::new(1.4, 1);
        for k in 0..=40 {
            let t = k as f64 * 0.1;
            let ped = crossing_ped(Vec2::new(3.0, -5.0 + 0.1 * t));
            pf.observe(Vec2::new(2.0 + 0.5 * t, 0.0), &[ped]);
        }
        assert_eq!(pf.engaged_count(), 0);
        assert_eq!(pf.score(), PF_INFINITY);
    }

    #[test]
    fn pf_bounded_by_n_infinity() {
        assert_eq!(pedestrian_friendliness(false, 0.36), 0.36);
        assert_eq!(pedestrian_friendliness(true, 0.36), 10.0);
        assert_eq!(pedestrian_friendliness(false, 50.0), 10.0);
    }
}
