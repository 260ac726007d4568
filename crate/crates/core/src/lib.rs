//! Trace-driven memory subsystem simulator for STT-RAM devices on a
//! DDR4-style interface, with a conventional DRAM baseline for comparison.
//!
//! The STT-RAM model tracks a storing state per bank (page buffer contents
//! saved to the persistent array or not), selects between plain activations
//! and activate-with-store commands, charges the store time and store energy
//! they incur, and never schedules automatic refresh. A rank-level power
//! state machine accounts dwell time per state for background energy.
//!
//! Modules:
//! - [`device`]: device parameters, config files, MTJ write physics
//! - [`memstate`]: bank storing state, ACT/ACT_ST selection, power states
//! - [`controller`]: address mapping, scheduling, the cycle-level run loop
//! - [`power`]: command counters and the per-rank energy breakdown
//! - [`trace`]: trace file format and synthetic trace generation
//! - [`report`]: run orchestration, statistics output, compare mode

pub mod controller;
pub mod device;
pub mod error;
pub mod memstate;
pub mod power;
pub mod report;
pub mod trace;

pub use error::{Error, Result};
