//! Link-budget modeling and design-space exploration for DWDM links on
//! silicon-photonic interposers.
//!
//! The library models an inter-chiplet link as a fabrication-platform
//! parameter record ([`platform::FabricationPlatform`]) with optional design
//! pathways applied (lower losses, wider FSR, higher power ceilings). For a
//! variant and waveguide length it computes insertion losses and
//! microring-array power penalties ([`budget`]), searches for the channel
//! count and bitrate that maximize aggregate bandwidth within the optical
//! power budgets ([`optimize`]), and sweeps lengths to classify each variant
//! as viable, viable with repeaters, or non-viable ([`explore`]).
//!
//! Everything is a pure function over immutable values; results are safe to
//! share across threads and deterministic for a fixed configuration.

pub mod budget;
pub mod config;
pub mod explore;
pub mod optimize;
pub mod platform;
pub mod report;

pub use budget::{BudgetEvaluation, BudgetModel, LinkGeometry, LossBreakdown, PenaltyBreakdown};
pub use explore::{SweepResult, ViabilityClass, ViabilityGrid};
pub use optimize::{BitrateSearch, EnergyModel, Optimizer, OptimumDuplet};
pub use platform::{
    apply_pathways, builtin_platform, builtin_platforms, enumerate_variants, FabricationPlatform,
    LinkVariant, PathwaySet, WaveguideMaop,
};
