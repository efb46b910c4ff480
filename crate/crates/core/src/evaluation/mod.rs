//! Absolute and differential evaluation of a cycle.
//!
//! Observed values are compared across consecutive cycles, the night-activity
//! rules supply sleep indicator values, and indicator changes are pushed to
//! items that have no direct observation. The result is a partial labeling of
//! the item layer.

mod differential;
mod propagate;
mod sleep;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use differential::{differential, indicator_differentials, item_differentials};
pub use propagate::{combine_effects, propagate_indicators};
pub use sleep::{evaluate_sleep, Period, SleepEvaluation, SleepModel, SleepTrace, SleepValue};

use crate::ingest::{Fact, FactBase, Term};
use crate::model::{DependencyGraph, DomainError, IndicatorId, ItemId};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{node}: {source}")]
    Domain { node: String, source: DomainError },
    #[error("hour {0} is outside 0..23")]
    HourOutOfRange(i64),
    #[error("no hour(N) fact and no hour given")]
    MissingHour,
    #[error("`{fact}` refers to unknown node `{node}`")]
    UnknownNode { fact: String, node: String },
    #[error("malformed fact `{0}`")]
    Malformed(String),
}

/// How a label was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Direct comparison of observed values.
    Observed,
    /// Propagated from indicators during evaluation.
    Inferred,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DifferentialRecord {
    pub sign: Sign,
    pub provenance: Provenance,
    pub cycle: i64,
}

/// Items split between labeled ones and those left to guess.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialLabeling {
    cycle: i64,
    labels: BTreeMap<ItemId, DifferentialRecord>,
    to_guess: BTreeSet<ItemId>,
}

impl PartialLabeling {
    /// Every item of `graph` unlabeled.
    pub fn unlabeled(graph: &DependencyGraph, cycle: i64) -> PartialLabeling {
        PartialLabeling {
            cycle,
            labels: BTreeMap::new(),
            to_guess: graph.item_ids().collect(),
        }
    }

    /// Labels every item with a determinate sign in `observed` as observed.
    pub fn from_observations(graph: &DependencyGraph, observed: &BTreeMap<ItemId, Sign>, cycle: i64) -> PartialLabeling {
        let mut labeling = PartialLabeling::unlabeled(graph, cycle);
        for (&item, &sign) in observed {
            if sign.is_determinate() {
                labeling.label(
                    item,
                    DifferentialRecord {
                        sign,
                        provenance: Provenance::Observed,
                        cycle,
                    },
                );
            }
        }
        labeling
    }

    pub fn cycle(&self) -> i64 {
        self.cycle
    }

    /// Moves `item` from the unlabeled set to the labeled map.
    pub fn label(&mut self, item: ItemId, record: DifferentialRecord) {
        self.to_guess.remove(&item);
        self.labels.insert(item, record);
    }

    pub fn get(&self, item: ItemId) -> Option<&DifferentialRecord> {
        self.labels.get(&item)
    }

    pub fn is_labeled(&self, item: ItemId) -> bool {
        self.labels.contains_key(&item)
    }

    /// The item's sign, `Unknown` while unlabeled.
    pub fn sign(&self, item: ItemId) -> Sign {
        self.labels.get(&item).map_or(Sign::Unknown, |r| r.sign)
    }

    pub fn labels(&self) -> &BTreeMap<ItemId, DifferentialRecord> {
        &self.labels
    }

    pub fn to_guess(&self) -> &BTreeSet<ItemId> {
        &self.to_guess
    }

    /// `diff_item`, `diff_item_inferred` and `to_guess` facts, by item name.
    pub fn to_facts(&self, graph: &DependencyGraph) -> Vec<Fact> {
        let mut facts = Vec::new();
        for id in graph.item_ids() {
            let item = graph.item(id);
            let class = Term::sym(item.class.as_str());
            let name = Term::sym(item.name.as_str());
            if let Some(record) = self.labels.get(&id) {
                let predicate = match record.provenance {
                    Provenance::Observed => "diff_item",
                    Provenance::Inferred => "diff_item_inferred",
                };
                facts.push(Fact::new(
                    predicate,
                    [class, name, Term::sym(record.sign.as_word()), Term::Int(record.cycle)],
                ));
            } else {
                facts.push(Fact::new("to_guess", [class, name]));
            }
        }
        facts
    }

    /// Reads back the facts written by [`PartialLabeling::to_facts`].
    /// Items not mentioned are left to guess.
    pub fn from_facts(graph: &DependencyGraph, facts: &FactBase) -> Result<PartialLabeling, EvalError> {
        let cycle = facts.hour().unwrap_or(0);
        let mut labeling = PartialLabeling::unlabeled(graph, cycle);
        for (predicate, provenance) in [("diff_item", Provenance::Observed), ("diff_item_inferred", Provenance::Inferred)] {
            for fact in facts.with_predicate(predicate).filter(|f| f.arity() == 4) {
                let (Some(name), Some(word), Some(t)) = (fact.sym(1), fact.sym(2), fact.int(3)) else {
                    return Err(EvalError::Malformed(fact.to_string()));
                };
                let item = graph.item_id(name).ok_or_else(|| EvalError::UnknownNode {
                    fact: fact.to_string(),
                    node: name.to_string(),
                })?;
                let sign = Sign::from_word(word).ok_or_else(|| EvalError::Malformed(fact.to_string()))?;
                if sign.is_determinate() {
                    labeling.label(
                        item,
                        DifferentialRecord {
                            sign,
                            provenance,
                            cycle: t,
                        },
                    );
                }
            }
        }
        Ok(labeling)
    }
}

/// `diff_ind(Ind,Val,T)` facts for the given differentials.
pub fn indicator_facts(graph: &DependencyGraph, diffs: &BTreeMap<IndicatorId, Sign>, cycle: i64) -> Vec<Fact> {
    diffs
        .iter()
        .map(|(&id, sign)| {
            Fact::new(
                "diff_ind",
                [
                    Term::sym(graph.indicator(id).name.as_str()),
                    Term::sym(sign.as_word()),
                    Term::Int(cycle),
                ],
            )
        })
        .collect()
}

/// Options for [`evaluate`].
#[derive(Debug, Clone, Default)]
pub struct EvaluationConfig {
    /// Cycle hour; taken from the `hour(N)` fact when `None`.
    pub hour: Option<i64>,
    /// Night-activity rules; derived from the graph when `None`.
    pub sleep: Option<SleepModel>,
}

/// Everything one evaluation cycle produces.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub hour: i64,
    pub sleep: SleepEvaluation,
    pub indicator_diffs: BTreeMap<IndicatorId, Sign>,
    pub labeling: PartialLabeling,
}

impl Evaluation {
    /// The derived sleep values followed by `diff_ind`, `diff_item`,
    /// `diff_item_inferred` and `to_guess` facts.
    pub fn to_facts(&self, graph: &DependencyGraph) -> FactBase {
        let mut base = FactBase::new();
        base.insert(Fact::new("hour", [self.hour]));
        base.extend(self.sleep.facts.iter().cloned());
        base.extend(indicator_facts(graph, &self.indicator_diffs, self.hour));
        base.extend(self.labeling.to_facts(graph));
        base
    }
}

/// Runs one evaluation cycle over `facts`.
///
/// A sleep value derived by the night rules is only added when the facts do
/// not already carry a current value for that indicator.
pub fn evaluate(graph: &DependencyGraph, facts: &FactBase, config: &EvaluationConfig) -> Result<Evaluation, EvalError> {
    let hour = config.hour.or_else(|| facts.hour()).ok_or(EvalError::MissingHour)?;
    let sleep_model = config.sleep.clone().unwrap_or_else(|| SleepModel::from_graph(graph));
    let mut sleep = evaluate_sleep(&sleep_model, facts, hour)?;
    sleep.facts.retain(|derived| {
        let indicator = derived.sym(0);
        !facts.at_time("obsInd", 0).any(|f| f.sym(0) == indicator)
    });

    let mut working = facts.clone();
    working.extend(sleep.facts.iter().cloned());
    let indicator_diffs = indicator_differentials(graph, &working)?;
    let observed = item_differentials(graph, &working)?;
    let direct = PartialLabeling::from_observations(graph, &observed, hour);
    let labeling = propagate_indicators(graph, &indicator_diffs, &direct);
    Ok(Evaluation {
        hour,
        sleep,
        indicator_diffs,
        labeling,
    })
}
