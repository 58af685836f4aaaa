//! Constrained multi-objective evolutionary optimization with push-and-pull
//! search embedded in an M2M population decomposition.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the problem/solution data model, constraint violation and
//!   the dominance comparators every selection routine is built on.
//! * [`decomposition`] splits the objective orthant into angular subregions and
//!   allocates solutions to sub-populations.
//! * [`ranking`] implements non-dominated sorting, crowding distance and
//!   rank-then-crowding truncation under any [`ranking::Relation`].
//! * [`pps`] tracks ideal/nadir change rates, the push→pull switch and the
//!   epsilon level schedule.
//! * [`engine`] contains the variation operators, the PPS-M2M main loop and
//!   the NSGA-II-CDP and M2M-CDP baselines.
//! * [`problems`], [`metrics`] and [`stats`] provide benchmarks, quality
//!   indicators and rank statistics for experiments.
//!
//! Data-parallel inner loops (batch evaluation, per-bucket selection, metric
//! evaluation) go through [`par`], which runs on rayon when the `parallel`
//! feature is enabled and falls back to plain iterators otherwise. Results are
//! identical in both modes.

pub mod decomposition;
pub mod engine;
mod error;
pub mod metrics;
pub mod model;
pub mod par;
pub mod pps;
pub mod problems;
pub mod ranking;
pub mod stats;

pub use error::{Error, Result};
pub use model::{Comparison, Individual, Problem};
