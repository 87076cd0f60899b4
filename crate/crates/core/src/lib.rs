//! Deterministic simulator for cooperative simultaneous tracking and jamming
//! of a rogue drone by a team of UAV agents.
//!
//! The crate is layered bottom-up: RF geometry, motion models, sensing,
//! per-agent particle filtering with covariance-intersection fusion, the
//! cascaded tracking/jamming controller, and finally the closed-loop
//! simulation with Monte-Carlo aggregation.

pub mod control;
pub mod dynamics;
pub mod estimation;
pub mod geometry_rf;
mod linalg;
pub mod seed;
pub mod sensing;
pub mod sim;

pub use control::{DecisionRecord, Fallback};
pub use dynamics::{ActionGrid, AgentState, MotionModel, TargetState};
pub use estimation::{Estimate, ParticleSet};
pub use geometry_rf::{AntennaParams, PowerLevels, RfParams};
pub use sensing::{Measurement, SensingParams};
pub use sim::{Mode, ScenarioConfig, StepLog, TrialLog, TrialSummary};
