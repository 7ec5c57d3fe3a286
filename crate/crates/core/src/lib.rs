//! Cryogenic wiring heat-load and noise-budget engine for dilution
//! refrigerators hosting superconducting quantum processors.
//!
//! The crate models the fridge as an ordered chain of temperature stages and
//! each installed line as a cable run with discrete attenuators. On top of
//! that it computes:
//!
//! - passive conduction through coax and twisted pairs, with thermalization
//!   bounds ([`heatflow`]),
//! - thermal-photon occupations through attenuator cascades and lossy
//!   cables, current noise, and dephasing limits ([`noise`]),
//! - required drive/flux signal levels and their dissipation ([`signals`]),
//! - per-stage budgets against cooling powers, plate-temperature prediction,
//!   and cable-diameter scaling scenarios ([`budget`]),
//! - inversion of measured temperature rises into extracted loads
//!   ([`calibration`]),
//! - exhaustive attenuator-placement search ([`attenopt`]).
//!
//! Material data lives in a JSON catalog ([`materials::Catalog`]); bundled
//! scenario presets are exposed through [`config::Project::preset`].

pub mod attenopt;
pub mod budget;
pub mod calibration;
pub mod config;
pub mod constants;
pub mod error;
pub mod fridge;
pub mod heatflow;
pub mod materials;
pub mod noise;
pub mod quad;
pub mod report;
pub mod signals;

pub use budget::{BudgetReport, PassiveBasis, ScenarioSpec, SignalPlan};
pub use config::{Project, ProjectConfig};
pub use error::{CryoError, Result};
pub use fridge::{FridgeModel, LineKind, LineSpec, Stage};
pub use materials::{CableSpec, Catalog, Material, TwistedPairSpec};
