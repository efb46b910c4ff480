//! The dependency graph, value scales and the home context.

mod context;
mod graph;
mod scale;

pub use context::{
    attribute_schema, AttributeValues, CellId, CellInfo, EntityKind, EntityModel, Grid, Passage,
};
pub use graph::{
    is_identifier, validate_graph, Arc, DependencyGraph, GraphBuilder, Indicator, IndicatorId, Influence,
    Item, ItemClass, ItemId, Layer, Link, SourceKind, Violation,
};
pub use scale::{DomainError, Scale, ValueDomain};
