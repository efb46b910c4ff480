use std::collections::BTreeMap;

use super::EvalError;
use crate::ingest::{FactBase, Term};
use crate::model::{DependencyGraph, DomainError, IndicatorId, ItemId, ValueDomain};
use crate::sign::Sign;

/// Compares a node's value in the previous cycle with the current one.
///
/// Lower severity now is an improvement (`Plus`); a missing value on either
/// side leaves the change undefined.
pub fn differential(previous: Option<&Term>, current: Option<&Term>, domain: &ValueDomain) -> Result<Sign, DomainError> {
    let previous = previous.map(|v| domain.severity(v)).transpose()?;
    let current = current.map(|v| domain.severity(v)).transpose()?;
    Ok(match (previous, current) {
        (Some(before), Some(now)) if now < before => Sign::Plus,
        (Some(before), Some(now)) if now > before => Sign::Minus,
        (Some(_), Some(_)) => Sign::Zero,
        _ => Sign::Unknown,
    })
}

/// First value of `predicate(node, V, history)` in the base.
fn value_at<'a>(facts: &'a FactBase, predicate: &str, node: &str, history: i64) -> Option<&'a Term> {
    facts
        .at_time(predicate, history)
        .find(|f| f.arity() == 3 && f.sym(0) == Some(node))
        .and_then(|f| f.arg(1))
}

fn node_differential(
    facts: &FactBase,
    predicate: &str,
    node: &str,
    domain: &ValueDomain,
) -> Result<Option<Sign>, EvalError> {
    let current = value_at(facts, predicate, node, 0);
    let previous = value_at(facts, predicate, node, 1);
    if current.is_none() && previous.is_none() {
        return Ok(None);
    }
    differential(previous, current, domain)
        .map(Some)
        .map_err(|source| EvalError::Domain {
            node: node.to_string(),
            source,
        })
}

/// Differentials of every indicator with an `obsInd` value at `H=0` or `H=1`.
/// Indicators with neither are absent from the map.
pub fn indicator_differentials(graph: &DependencyGraph, facts: &FactBase) -> Result<BTreeMap<IndicatorId, Sign>, EvalError> {
    let mut diffs = BTreeMap::new();
    for (index, indicator) in graph.indicators().iter().enumerate() {
        if let Some(sign) = node_differential(facts, "obsInd", &indicator.name, &indicator.domain)? {
            diffs.insert(IndicatorId(index), sign);
        }
    }
    Ok(diffs)
}

/// Differentials of items from direct `obsItem` comparisons.
pub fn item_differentials(graph: &DependencyGraph, facts: &FactBase) -> Result<BTreeMap<ItemId, Sign>, EvalError> {
    let mut diffs = BTreeMap::new();
    for id in graph.item_ids() {
        let item = graph.item(id);
        if let Some(sign) = node_differential(facts, "obsItem", &item.name, &item.domain)? {
            diffs.insert(id, sign);
        }
    }
    Ok(diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scale;

    fn severity() -> ValueDomain {
        ValueDomain::Scale(Scale::severity())
    }

    #[test]
    fn scale_comparisons() {
        let d = severity();
        let (severe, mild) = (Term::sym("severe"), Term::sym("mild"));
        assert_eq!(differential(Some(&severe), Some(&mild), &d), Ok(Sign::Plus));
        assert_eq!(differential(Some(&mild), Some(&severe), &d), Ok(Sign::Minus));
        assert_eq!(differential(Some(&mild), Some(&mild), &d), Ok(Sign::Zero));
        assert_eq!(differential(None, Some(&Term::sym("moderate")), &d), Ok(Sign::Unknown));
    }

    #[test]
    fn out_of_domain() {
        let err = differential(Some(&Term::sym("absent")), None, &severity()).unwrap_err();
        assert_eq!(err.value, "absent");
    }

    #[test]
    fn numeric_range_polarity() {
        let weight = ValueDomain::Range {
            low: 1,
            high: 300,
            higher_is_worse: false,
        };
        assert_eq!(differential(Some(&Term::Int(72)), Some(&Term::Int(68)), &weight), Ok(Sign::Minus));
    }
}
