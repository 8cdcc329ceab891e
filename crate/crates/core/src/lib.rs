//! Multi-satellite observation scheduling: instances, conflict analysis,
//! MILP formulations with LP/MPS export, and an exact combinatorial solver.

pub mod error;
pub mod formulation;
pub mod generate;
pub mod instance;
pub mod model;
pub mod interval;
pub mod schedule;
pub mod solver;
pub mod validate;
pub mod windowing;
#[cfg(test)]
mod testkit;

pub use formulation::{build, Formulation, ObjectiveKind};
pub use generate::{generate, GenSpec, Style, WindowModel};
pub use error::{FormulationError, InstanceError, ModelError, SolveError};
pub use instance::{
    normalize_and_clip, setup_time_bound, setup_time_exact, AngleSample, Mission, Resource, SchedulingInstance,
    SchedulingPeriod, VisibleTimeWindow,
};
pub use interval::Span;
pub use schedule::{Assignment, Schedule};
pub use windowing::{preprocess, PreprocessResult};
pub use model::{evaluate, parse_lp, read_mps, write_lp, write_mps, LinearModel};
pub use solver::{brute_force, greedy, solve_exact, ReportRow, SolveLimits, SolveReport};
pub use validate::{validate, FindingCode, ValidationReport};
pub use windowing::{resource_stats, InstanceStats};
