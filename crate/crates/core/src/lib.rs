//! Qualitative reasoning over a person's health model.
//!
//! Facts about the home and the person are read with [`ingest`], compared
//! across hourly cycles by [`evaluation`], completed into consistent sign
//! labelings by [`prediction`], justified by [`explanation`] and turned into
//! feedback by [`policy`]; [`pipeline`] chains them into one cycle.
//! [`localization`] tracks the person on the home grid.

pub mod error;
pub mod evaluation;
pub mod explanation;
pub mod ingest;
pub mod localization;
pub mod policy;
pub mod model;
pub mod pipeline;
pub mod prediction;
pub mod sign;

pub use error::{Position, UnknownToken};
pub use ingest::{emit_facts, parse_facts, parse_model, Fact, FactBase, Model, Term};
pub use model::{DependencyGraph, ItemClass, ItemId};
pub use sign::{arc_effect, ArcType, Sign};
