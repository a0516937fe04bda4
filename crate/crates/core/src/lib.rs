//! Crowd navigation around potential freezing zones.
//!
//! A guiding velocity from a sampling planner is rotated away from the
//! region where slow or converging pedestrians are predicted to be, so the
//! robot passes behind them instead of stopping in front of them. The
//! [`sim`] module runs the planners through seeded crowd scenarios.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod freezing;
pub mod geometry;
pub mod io;
pub mod pedestrian;
pub mod planner;
pub mod sensing;
pub mod sim;

pub use error::{Error, Result};
pub use freezing::{frozone_step, DeviationResult, FrozoneConfig, FrozoneOutcome};
pub use geometry::{contains, convex_hull, dist_to_zone, rotate, ConvexPolygon, Hull, Pfz, Vec2};
pub use pedestrian::{walking_speed, FdParams, PedestrianState};
pub use planner::{
    baseline_velocity, hybrid_select, hybrid_step, PlannerConfig, PlannerKind, RobotState,
};
pub use sensing::{Observation, Pose2, RangeSensorConfig, SensorConfig, SensorFrame};
pub use sim::{run_batch, run_scenario, BatchSummary, Outcome, RunReport, ScenarioConfig};
