//! Monte Carlo system-level simulator for a full-duplex small cell embedded
//! in a dense hard-core network of interfering cells.
//!
//! A run draws network instances around a reference base station, picks one
//! uplink and one downlink terminal with one of three scheduling rules,
//! optionally switches to half duplex when that maximizes the sum rate, and
//! reports rate distributions and mean interference contributions.
//!
//! ```
//! use fdnet::{engine, SimConfig};
//!
//! let config = SimConfig { realizations: 50, ..SimConfig::default() };
//! let report = engine::run(&config, 1).unwrap();
//! assert!(report.sum.mean > 0.0);
//! ```

pub mod chan;
pub mod cli;
pub mod config;
pub mod engine;
pub mod error;
pub mod geom;
pub mod phy;
pub mod report;
pub mod rng;
pub mod sched;
pub mod units;

pub use config::{load_config, Algorithm, OpaKnowledge, PathlossProfile, SimConfig};
pub use engine::{run, run_realization, sweep, SweepAxis};
pub use error::{Error, Result};
pub use report::{Report, Summary};
