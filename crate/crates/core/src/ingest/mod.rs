//! Reading and writing the line-oriented fact format and model files.

mod fact;
mod model_file;
mod parser;

pub use fact::{is_known_predicate, time_position, Fact, FactBase, Term};
pub use model_file::{parse_model, parse_model_unchecked, Model, ModelError};
pub use parser::{emit_facts, parse_facts, parse_facts_bytes, parse_facts_with_warnings, IngestWarning, ParseError};

pub(crate) use parser::Cursor;
