use std::collections::BTreeMap;

use super::{DifferentialRecord, PartialLabeling, Provenance};
use crate::model::{DependencyGraph, IndicatorId};
use crate::sign::{arc_effect, Sign};

/// Combines the effects of an item's incoming indicator links.
///
/// `Plus` wins when there is at least one `Plus` and no `Minus` or `Unknown`;
/// `Minus` symmetrically; `Zero` only when every effect is `Zero`. Any other
/// multiset, including the empty one, leaves the item to be guessed.
pub fn combine_effects(effects: &[Sign]) -> Option<Sign> {
    let count = |s: Sign| effects.iter().filter(|&&e| e == s).count();
    let (plus, minus, zero, unknown) = (count(Sign::Plus), count(Sign::Minus), count(Sign::Zero), count(Sign::Unknown));
    if plus > 0 && minus == 0 && unknown == 0 {
        Some(Sign::Plus)
    } else if minus > 0 && plus == 0 && unknown == 0 {
        Some(Sign::Minus)
    } else if zero > 0 && zero == effects.len() {
        Some(Sign::Zero)
    } else {
        None
    }
}

/// Labels items that lack a direct differential from their indicators.
///
/// Indicators absent from `indicator_diffs` contribute nothing; those mapped
/// to `Unknown` contribute an unknown effect. Existing labels are kept.
pub fn propagate_indicators(
    graph: &DependencyGraph,
    indicator_diffs: &BTreeMap<IndicatorId, Sign>,
    existing: &PartialLabeling,
) -> PartialLabeling {
    let mut labeling = existing.clone();
    for item in graph.item_ids() {
        if labeling.is_labeled(item) {
            continue;
        }
        let effects: Vec<Sign> = graph
            .links_into(item)
            .iter()
            .filter_map(|link| indicator_diffs.get(&link.source).map(|&s| arc_effect(s, link.kind)))
            .collect();
        if let Some(sign) = combine_effects(&effects) {
            labeling.label(
                item,
                DifferentialRecord {
                    sign,
                    provenance: Provenance::Inferred,
                    cycle: labeling.cycle(),
                },
            );
        }
    }
    labeling
}
