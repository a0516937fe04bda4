use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Vec2;
use crate::planner::Branch;
use crate::sim::RunReport;

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub robot_x: f64,
    pub robot_y: f64,
    pub robot_heading: f64,
    pub cmd_v: f64,
    pub cmd_w: f64,
    pub branch: Branch,
    pub triggered: bool,
    pub phi: f64,
    pub pedestrians: Vec<Vec2>,
}

const FIXED_COLUMNS: [&str; 9] = [
    "t",
    "robot_x",
    "robot_y",
    "robot_heading",
    "cmd_v",
    "cmd_w",
    "branch",
    "triggered",
    "phi",
];

fn csv_err(path: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.to_string(),
        message: e.to_string(),
    }
}

/// The trajectory log of one run as CSV text, one row per planning tick.
pub fn trajectory_csv(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for id in &report.pedestrian_ids {
        header.push(format!("ped_{id}_x"));
        header.push(format!("ped_{id}_y"));
    }
    w.write_record(&header).expect("in-memory write");
    for s in &report.trajectory {
        let mut row = vec![
            s.t.to_string(),
            s.robot.position.x.to_string(),
            s.robot.position.y.to_string(),
            s.robot.heading.to_string(),
            s.cmd_v.to_string(),
            s.cmd_w.to_string(),
            s.branch.to_string(),
            s.triggered.to_string(),
            s.phi.to_string(),
        ];
        for p in &s.pedestrians {
            row.push(p.x.to_string());
            row.push(p.y.to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

pub fn write_trajectory(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, trajectory_csv(report)).map_err(|e| Error::io(path, e))
}

/// Parses a trajectory log back into records.
pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Vec<TrajectoryRecord>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| csv_err(&name, e))?.clone();
    if header.len() < FIXED_COLUMNS.len()
        || !(header.len() - FIXED_COLUMNS.len()).is_multiple_of(2)
        || header.iter().zip(FIXED_COLUMNS).any(|(a, b)| a != b)
    {
        return Err(csv_err(&name, "unexpected header"));
    }
    let mut out = Vec::new();
    for (line, row) in r.records().enumerate() {
        let row = row.map_err(|e| csv_err(&name, e))?;
        let num = |i: usize| -> Result<f64> {
            row[i].parse().map_err(|_| {
                csv_err(
                    &name,
                    format!("row {}: column `{}` is not a number", line + 1, &header[i]),
                )
            })
        };
        let branch = match &row[6] {
            "Frozone" => Branch::Frozone,
            "Baseline" => Branch::Baseline,
            other => {
                return Err(csv_err(
                    &name,
                    format!("row {}: bad branch `{other}`", line + 1),
                ))
            }
        };
        let triggered = row[7]
            .parse()
            .map_err(|_| csv_err(&name, format!("row {}: bad triggered flag", line + 1)))?;
        let pedestrians = (FIXED_COLUMNS.len()..row.len())
            .step_by(2)
            .map(|i| Ok(Vec2::new(num(i)?, num(i + 1)?)))
            .collect::<Result<Vec<_>>>()?;
        out.push(TrajectoryRecord {
            t: num(0)?,
            robot_x: num(1)?,
            robot_y: num(2)?,
            robot_heading: num(3)?,
            cmd_v: num(4)?,
            cmd_w: num(5)?,
            branch,
            triggered,
            phi: num(8)?,
            pedestrians,
        });
    }
    Ok(out)
}
