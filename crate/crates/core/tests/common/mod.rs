//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use crowdnav::{Pfz, Vec2};

/// Points on a 0.1 m grid, as integer decimetres.
pub fn to_grid(p: Vec2) -> (i64, i64) {
    ((p.x * 10.0).round() as i64, (p.y * 10.0).round() as i64)
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

fn in_triangle(p: (i64, i64), a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    let neg = d1 < 0 || d2 < 0 || d3 < 0;
    let pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(neg && pos)
}

/// Extreme points of a grid point set: a point is extreme unless it is a
/// convex combination of the others, which in the plane means it lies in a
/// closed triangle or on a closed segment spanned by other points. Exact
/// integer arithmetic. Sorted, deduplicated.
pub fn brute_hull_vertices(points: &[Vec2]) -> Vec<(i64, i64)> {
    let mut pts: Vec<(i64, i64)> = points.iter().map(|p| to_grid(*p)).collect();
    pts.sort();
    pts.dedup();
    let n = pts.len();
    let mut out = Vec::new();
    for i in 0..n {
        let p = pts[i];
        let others: Vec<_> = (0..n).filter(|&j| j != i).map(|j| pts[j]).collect();
        let mut covered = false;
        'search: for a in 0..others.len() {
            for b in a + 1..others.len() {
                if on_segment(p, others[a], others[b]) {
                    covered = true;
                    break 'search;
                }
                for c in b + 1..others.len() {
                    if in_triangle(p, others[a], others[b], others[c]) {
                        covered = true;
                        break 'search;
                    }
                }
            }
        }
        if !covered {
            out.push(p);
        }
    }
    out
}

/// Zone membership computed from the zone's parameters alone.
pub fn zone_contains(zone: &Pfz, p: Vec2) -> bool {
    const TOL: f64 = 1e-9;
    match zone {
        Pfz::Circle { center, radius } => (p - *center).norm() <= radius + TOL,
        Pfz::Segment { a, b, inflation } => {
            let ab = *b - *a;
            let t = ((p - *a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
            (p - (*a + ab * t)).norm() <= inflation + TOL
        }
        Pfz::Polygon(poly) => {
            let v = poly.vertices();
            (0..v.len()).all(|i| {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                let e = b - a;
                e.x * (p.y - a.y) - e.y * (p.x - a.x) >= -TOL * e.norm()
            })
        }
    }
}

/// Goal-regret minimizing rotation over a grid `fine` times denser than
/// `step`, among angles whose rotated lookahead leaves the zone.
pub fn phi1_oracle(
    lookahead: Vec2,
    goal: Vec2,
    zone: &Pfz,
    max: f64,
    step: f64,
    fine: usize,
) -> Option<(f64, f64)> {
    let h = step / fine as f64;
    let n = (max / h).floor() as i64;
    let mut best: Option<(f64, f64)> = None;
    let mut consider = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let r = Vec2::new(
            c * lookahead.x - s * lookahead.y,
            s * lookahead.x + c * lookahead.y,
        );
        if zone_contains(zone, r) {
            return;
        }
        let d = (r - goal).norm();
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((phi, d));
        }
    };
    for k in -n..=n {
        consider(k as f64 * h);
    }
    consider(max);
    consider(-max);
    best
}

/// Distance between robot and pedestrian after both move in a straight line
/// for `dt`: the robot from the origin along +x at `robot_speed`.
pub fn separation_after(ped: Vec2, ped_vel: Vec2, robot_speed: f64, dt: f64) -> f64 {
    let robot = Vec2::new(robot_speed * dt, 0.0);
    let ped = Vec2::new(ped.x + ped_vel.x * dt, ped.y + ped_vel.y * dt);
    (ped - robot).norm()
}
