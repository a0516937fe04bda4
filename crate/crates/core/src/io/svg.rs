use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Pfz, Vec2};
use crate::sim::{Bounds, RunReport};

pub const PX_PER_METER: f64 = 40.0;

struct Canvas {
    bounds: Bounds,
}

impl Canvas {
    fn px(&self, p: Vec2) -> (f64, f64) {
        (
            (p.x - self.bounds.min.x) * PX_PER_METER,
            (self.bounds.max.y - p.y) * PX_PER_METER,
        )
    }

    fn points(&self, ps: impl IntoIterator<Item = Vec2>) -> String {
        ps.into_iter()
            .map(|p| {
                let (x, y) = self.px(p);
                format!("{x:.1},{y:.1}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// SVG plot of a run: walls, pedestrian paths (gray), robot path (green), the
/// freezing zone at every triggered tick (red) and the goal.
pub fn svg_document(report: &RunReport) -> String {
    let mut all: Vec<Vec2> = vec![report.goal];
    all.extend(report.walls.iter().copied());
    for s in &report.trajectory {
        all.push(s.robot.position);
        all.extend(s.pedestrians.iter().copied());
    }
    let canvas = Canvas {
        bounds: Bounds::around(all, 1.0),
    };
    let size = canvas.bounds.max - canvas.bounds.min;
    let (w, h) = (size.x * PX_PER_METER, size.y * PX_PER_METER);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.1} {h:.1}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for c in &report.walls {
        let (x, y) = canvas.px(*c);
        let _ = writeln!(
            out,
            r##"<circle class="wall" cx="{x:.1}" cy="{y:.1}" r="{:.1}" fill="#444"/>"##,
            0.25 * PX_PER_METER
        );
    }

    let n_peds = report.pedestrian_ids.len();
    for i in 0..n_peds {
        let pts = canvas.points(report.trajectory.iter().map(|s| s.pedestrians[i]));
        let _ = writeln!(
            out,
            r#"<polyline class="pedestrian" points="{pts}" fill="none" stroke="gray" stroke-width="1.5"/>"#
        );
    }

    for s in report.trajectory.iter().filter(|s| s.triggered) {
        let Some(trig) = &s.trigger else { continue };
        let zone = trig.pfz.transformed(s.robot.heading, s.robot.position);
        let _ = writeln!(out, "{}", zone_element(&canvas, &zone));
    }

    let path = canvas.points(report.trajectory.iter().map(|s| s.robot.position));
    let _ = writeln!(
        out,
        r#"<polyline class="robot" points="{path}" fill="none" stroke="green" stroke-width="2.5"/>"#
    );

    let (gx, gy) = canvas.px(report.goal);
    let _ = writeln!(
        out,
        r#"<circle class="goal" cx="{gx:.1}" cy="{gy:.1}" r="6" fill="none" stroke="blue" stroke-width="2"/>"#
    );
    out.push_str("</svg>\n");
    out
}

fn zone_element(canvas: &Canvas, zone: &Pfz) -> String {
    const STYLE: &str = r#"fill="red" fill-opacity="0.3" stroke="none""#;
    match zone {
        Pfz::Circle { center, radius } => {
            let (x, y) = canvas.px(*center);
            format!(
                r#"<circle class="pfz" cx="{x:.1}" cy="{y:.1}" r="{:.1}" {STYLE}/>"#,
                radius * PX_PER_METER
            )
        }
        Pfz::Segment { a, b, inflation } => {
            let (x1, y1) = canvas.px(*a);
            let (x2, y2) = canvas.px(*b);
            format!(
                r#"<line class="pfz" x1="{x1:.1}" y1="{y1:.1}" x2="{x2:.1}" y2="{y2:.1}" stroke="red" stroke-opacity="0.3" stroke-width="{:.1}" stroke-linecap="round"/>"#,
                2.0 * inflation * PX_PER_METER
            )
        }
        Pfz::Polygon(poly) => {
            let pts = canvas.points(poly.vertices().iter().copied());
            format!(r#"<polygon class="pfz" points="{pts}" {STYLE}/>"#)
        }
    }
}

pub fn render_svg(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, svg_document(report)).map_err(|e| Error::io(path, e))
}
