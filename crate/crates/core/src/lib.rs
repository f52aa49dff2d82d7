//! Distributed track selection for a network of multifunction radars.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinematics`] – white-noise constant-velocity truth model.
//! * [`sensing`] – range/azimuth measurements, Jacobian and noise model.
//! * [`tracker`] – per-target EKF with a cyclic multi-measurement update.
//! * [`game`] – the track-selection game, utilities and brute-force
//!   Nash/Pareto oracles.
//! * [`dynamics`] – the distributed best-response rule and baseline
//!   selection strategies.
//! * [`harness`] – scenario configuration, closed-loop simulation and
//!   Monte Carlo aggregation.

pub mod dynamics;
pub mod error;
pub mod game;
pub mod harness;
pub mod kinematics;
pub mod seed;
pub mod sensing;
pub mod tracker;

pub use dynamics::{DynamicsConfig, RadarDecisionState, StrategyKind};
pub use error::{Error, Result};
pub use game::{GainTable, GameSpec, ProfileSpace, StrategyProfile};
pub use harness::{MetricsLog, ScenarioConfig};
pub use kinematics::{MotionModel, TargetState};
pub use sensing::{Measurement, RadarSite};
pub use tracker::{Track, UpdateTrace};
