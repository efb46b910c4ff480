//! Completing a partial labeling of the item layer.
//!
//! Every item left to guess that has incoming influences receives a sign
//! produced by one of those influences under the same labeling. All such
//! labelings are enumerated; signs shared by every labeling are the robust
//! predictions, and the labeling with the largest weighted support is the
//! optimal one.

mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::UnknownToken;
use crate::evaluation::{PartialLabeling, Provenance};
use crate::ingest::{Fact, Term};
use crate::model::{DependencyGraph, ItemId};
use crate::sign::{arc_effect, Sign};

/// Default bound on stored solutions.
pub const DEFAULT_CAP: usize = 10_000;

/// Where an item's sign comes from during prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// Direct observation in this cycle.
    Observed,
    /// Propagated from indicators by evaluation.
    Inferred,
    /// Assigned by the search.
    Guessed,
    /// Unlabeled with no incoming influence: always unknown.
    NoEvidence,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Observed => "observed",
            Origin::Inferred => "inferred",
            Origin::Guessed => "guessed",
            Origin::NoEvidence => "no_evidence",
        }
    }
}

/// How evaluation-inferred labels are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightConvention {
    /// Anything evaluation produced weighs 5.
    #[default]
    EvaluationFive,
    /// Only direct observations weigh 5; inferred labels weigh 1.
    ObservedFive,
}

impl FromStr for WeightConvention {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eval5" => Ok(WeightConvention::EvaluationFive),
            "obs5" => Ok(WeightConvention::ObservedFive),
            _ => Err(UnknownToken::new("weight convention", s)),
        }
    }
}

impl fmt::Display for WeightConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightConvention::EvaluationFive => "eval5",
            WeightConvention::ObservedFive => "obs5",
        })
    }
}

/// Weight of an arc, given where its source's sign came from.
pub fn arc_weight(source: Origin, convention: WeightConvention) -> i64 {
    match (source, convention) {
        (Origin::Observed, _) => 5,
        (Origin::Inferred, WeightConvention::EvaluationFive) => 5,
        _ => 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PredictionConfig {
    pub cap: usize,
    pub weights: WeightConvention,
}

impl Default for PredictionConfig {
    fn default() -> Self {
        PredictionConfig {
            cap: DEFAULT_CAP,
            weights: WeightConvention::default(),
        }
    }
}

/// Accumulated arc weight per produced sign for one item.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct SupportTally {
    pub minus: i64,
    pub zero: i64,
    pub plus: i64,
}

impl SupportTally {
    pub fn get(&self, sign: Sign) -> i64 {
        match sign {
            Sign::Minus => self.minus,
            Sign::Zero => self.zero,
            Sign::Plus => self.plus,
            Sign::Unknown => 0,
        }
    }

    fn add(&mut self, sign: Sign, weight: i64) {
        match sign {
            Sign::Minus => self.minus += weight,
            Sign::Zero => self.zero += weight,
            Sign::Plus => self.plus += weight,
            Sign::Unknown => {}
        }
    }

    /// Nonzero buckets, in sign order minus, zero, plus.
    pub fn buckets(&self) -> impl Iterator<Item = (Sign, i64)> + '_ {
        Sign::DETERMINATE
            .into_iter()
            .map(|s| (s, self.get(s)))
            .filter(|&(_, w)| w != 0)
    }
}

/// A total labeling of the items with its support tallies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    labeling: Vec<Sign>,
    tallies: Vec<SupportTally>,
    objective: i64,
}

impl Solution {
    /// Tallies every item from `labeling` and scores the guessed ones.
    pub fn score(graph: &DependencyGraph, origins: &[Origin], labeling: Vec<Sign>, weights: WeightConvention) -> Solution {
        let mut tallies = vec![SupportTally::default(); labeling.len()];
        for item in graph.item_ids() {
            for inf in graph.influences_into(item) {
                let effect = arc_effect(labeling[inf.source.0], inf.kind);
                tallies[item.0].add(effect, arc_weight(origins[inf.source.0], weights));
            }
        }
        let objective = graph
            .item_ids()
            .filter(|id| origins[id.0] == Origin::Guessed)
            .map(|id| tallies[id.0].get(labeling[id.0]))
            .sum();
        Solution {
            labeling,
            tallies,
            objective,
        }
    }

    pub fn sign(&self, item: ItemId) -> Sign {
        self.labeling[item.0]
    }

    /// Signs indexed by `ItemId`.
    pub fn labeling(&self) -> &[Sign] {
        &self.labeling
    }

    pub fn tally(&self, item: ItemId) -> &SupportTally {
        &self.tallies[item.0]
    }

    /// Sum of the winning tally over guessed items.
    pub fn objective(&self) -> i64 {
        self.objective
    }

    /// Items with a determinate sign.
    pub fn labeled_count(&self) -> usize {
        self.labeling.iter().filter(|s| s.is_determinate()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PredictionError {
    #[error("no consistent labeling: the observations are inconsistent")]
    NoSolutions,
}

/// Solutions found by one search, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub origins: Vec<Origin>,
    pub solutions: Vec<Solution>,
    /// The cap stopped the search before every solution was seen.
    pub truncated: bool,
}

/// Origin of every item under `partial`.
pub fn origins(graph: &DependencyGraph, partial: &PartialLabeling) -> Vec<Origin> {
    graph
        .item_ids()
        .map(|id| match partial.get(id) {
            Some(record) => match record.provenance {
                Provenance::Observed => Origin::Observed,
                Provenance::Inferred => Origin::Inferred,
            },
            None if graph.influences_into(id).is_empty() => Origin::NoEvidence,
            None => Origin::Guessed,
        })
        .collect()
}

fn fixed_signs(graph: &DependencyGraph, partial: &PartialLabeling, origins: &[Origin]) -> Vec<Option<Sign>> {
    graph
        .item_ids()
        .map(|id| match origins[id.0] {
            Origin::Guessed => None,
            Origin::NoEvidence => Some(Sign::Unknown),
            _ => Some(partial.sign(id)),
        })
        .collect()
}

fn finish(graph: &DependencyGraph, origins: Vec<Origin>, found: Vec<Vec<Sign>>, truncated: bool, weights: WeightConvention) -> Enumeration {
    let mut solutions: Vec<Solution> = found
        .into_iter()
        .map(|labeling| Solution::score(graph, &origins, labeling, weights))
        .collect();
    solutions.sort_by(|a, b| a.labeling.cmp(&b.labeling));
    Enumeration {
        origins,
        solutions,
        truncated,
    }
}

/// Every labeling in which each guessed item has a determinate sign produced
/// by one of its incoming influences. Empty when none exists.
pub fn enumerate_solutions(graph: &DependencyGraph, partial: &PartialLabeling, config: &PredictionConfig) -> Enumeration {
    let origins = origins(graph, partial);
    let mut search = search::Search::new(graph, fixed_signs(graph, partial, &origins), config.cap);
    search.enumerate_strict();
    let (found, truncated) = (std::mem::take(&mut search.found), search.truncated);
    finish(graph, origins, found, truncated, config.weights)
}

/// Labelings that may leave guessed items unknown, restricted to those with
/// the most determinate signs. Every determinate guess is still supported.
pub fn maximal_partial_fallback(graph: &DependencyGraph, partial: &PartialLabeling, config: &PredictionConfig) -> Enumeration {
    let origins = origins(graph, partial);
    let mut search = search::Search::new(graph, fixed_signs(graph, partial, &origins), config.cap);
    search.enumerate_fallback();
    let (found, truncated) = (std::mem::take(&mut search.found), search.truncated);
    finish(graph, origins, found, truncated, config.weights)
}

/// Determinate signs shared by every solution.
pub fn robust_signs(solutions: &[Solution]) -> Result<BTreeMap<ItemId, Sign>, PredictionError> {
    let (first, rest) = solutions.split_first().ok_or(PredictionError::NoSolutions)?;
    Ok(first
        .labeling
        .iter()
        .enumerate()
        .filter(|&(i, s)| s.is_determinate() && rest.iter().all(|other| other.labeling[i] == *s))
        .map(|(i, &s)| (ItemId(i), s))
        .collect())
}

/// The solution with the largest objective; ties go to the labeling that is
/// smallest item by item in the order minus, zero, plus.
pub fn optimal_solution(solutions: &[Solution]) -> Option<&Solution> {
    solutions
        .iter()
        .max_by(|a, b| a.objective.cmp(&b.objective).then_with(|| b.labeling.cmp(&a.labeling)))
}

/// Outcome of the prediction phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionResult {
    pub origins: Vec<Origin>,
    pub robust: BTreeMap<ItemId, Sign>,
    pub optimal: Solution,
    pub all_solutions: Vec<Solution>,
    /// Robust and optimal were computed from a capped subset of solutions.
    pub truncated: bool,
    /// No total labeling existed; solutions maximize labeled items instead.
    pub fallback: bool,
}

impl PredictionResult {
    /// `ilab` for robust signs, then `label` and `count_infl` for the
    /// optimal solution.
    pub fn to_facts(&self, graph: &DependencyGraph) -> Vec<Fact> {
        let name = |id: ItemId| Term::sym(graph.item_name(id));
        let mut facts: Vec<Fact> = self
            .robust
            .iter()
            .filter_map(|(&id, s)| s.as_int().map(|v| Fact::new("ilab", [name(id), Term::Int(v)])))
            .collect();
        for id in graph.item_ids() {
            let sign = self.optimal.sign(id);
            let value = sign.as_int().map_or_else(|| Term::sym("unknown"), Term::Int);
            facts.push(Fact::new(
                "label",
                [name(id), value, Term::sym(self.origins[id.0].as_str())],
            ));
        }
        for id in graph.item_ids() {
            for (sign, weight) in self.optimal.tally(id).buckets() {
                let value = sign.as_int().expect("buckets are determinate");
                facts.push(Fact::new("count_infl", [name(id), Term::Int(value), Term::Int(weight)]));
            }
        }
        facts
    }
}

/// Enumerates total labelings, falling back to maximal partial ones when
/// there are none.
pub fn predict(graph: &DependencyGraph, partial: &PartialLabeling, config: &PredictionConfig) -> PredictionResult {
    let strict = enumerate_solutions(graph, partial, config);
    let (enumeration, fallback) = if strict.solutions.is_empty() {
        (maximal_partial_fallback(graph, partial, config), true)
    } else {
        (strict, false)
    };
    let robust = robust_signs(&enumeration.solutions).expect("the fallback always has a solution");
    let optimal = optimal_solution(&enumeration.solutions)
        .cloned()
        .expect("the fallback always has a solution");
    PredictionResult {
        origins: enumeration.origins,
        robust,
        optimal,
        all_solutions: enumeration.solutions,
        truncated: enumeration.truncated,
        fallback,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::DifferentialRecord;
    use crate::model::ItemClass;
    use crate::sign::ArcType;

    fn observe(graph: &DependencyGraph, signs: &[(&str, Sign)]) -> PartialLabeling {
        let mut partial = PartialLabeling::unlabeled(graph, 0);
        for &(name, sign) in signs {
            partial.label(
                graph.item_id(name).unwrap(),
                DifferentialRecord {
                    sign,
                    provenance: Provenance::Observed,
                    cycle: 0,
                },
            );
        }
        partial
    }

    fn graph(arcs: &[(&str, ArcType, &str)], items: &[&str]) -> DependencyGraph {
        let mut b = DependencyGraph::builder();
        for item in items {
            b.item(item, ItemClass::State);
        }
        for &(from, kind, to) in arcs {
            b.influence(kind, from, to);
        }
        b.build().unwrap()
    }

    #[test]
    fn single_observed_parent() {
        let g = graph(&[("a", ArcType::Pos, "b")], &["a", "b"]);
        let result = predict(&g, &observe(&g, &[("a", Sign::Plus)]), &PredictionConfig::default());
        assert_eq!(result.all_solutions.len(), 1);
        let b = g.item_id("b").unwrap();
        assert_eq!(result.optimal.sign(b), Sign::Plus);
        assert_eq!(
            *result.optimal.tally(b),
            SupportTally {
                plus: 5,
                ..Default::default()
            }
        );
        assert_eq!(result.robust.len(), 2);
        assert!(!result.fallback);
    }

    #[test]
    fn empty_graph_has_one_empty_solution() {
        let g = DependencyGraph::default();
        let result = predict(&g, &PartialLabeling::unlabeled(&g, 0), &PredictionConfig::default());
        assert_eq!(result.all_solutions.len(), 1);
        assert!(result.robust.is_empty());
    }

    #[test]
    fn evidence_less_items_stay_unknown() {
        let g = graph(&[], &["lonely"]);
        let result = predict(&g, &PartialLabeling::unlabeled(&g, 0), &PredictionConfig::default());
        assert_eq!(result.origins, vec![Origin::NoEvidence]);
        assert_eq!(result.optimal.labeling(), &[Sign::Unknown]);
        assert!(!result.fallback);
    }

    #[test]
    fn unsupported_child_triggers_fallback() {
        // a=+ via neg and b=- via pos both yield unknown for c.
        let g = graph(
            &[("a", ArcType::Neg, "c"), ("b", ArcType::Pos, "c"), ("a", ArcType::Pos, "d")],
            &["a", "b", "c", "d"],
        );
        let partial = observe(&g, &[("a", Sign::Plus), ("b", Sign::Minus)]);
        assert!(enumerate_solutions(&g, &partial, &PredictionConfig::default()).solutions.is_empty());
        let result = predict(&g, &partial, &PredictionConfig::default());
        assert!(result.fallback);
        assert_eq!(result.all_solutions.len(), 1);
        let id = |n| g.item_id(n).unwrap();
        assert_eq!(result.optimal.sign(id("c")), Sign::Unknown);
        assert_eq!(result.optimal.sign(id("d")), Sign::Plus);
    }

    #[test]
    fn multi_feasible_item_is_not_robust() {
        // c receives -, = and + from its three observed parents.
        let g = graph(
            &[("a", ArcType::Neg, "c"), ("b", ArcType::Pos, "c"), ("z", ArcType::Dir, "c")],
            &["a", "b", "c", "z"],
        );
        let partial = observe(&g, &[("a", Sign::Minus), ("b", Sign::Zero), ("z", Sign::Plus)]);
        let result = predict(&g, &partial, &PredictionConfig::default());
        assert_eq!(result.all_solutions.len(), 3);
        assert!(!result.robust.contains_key(&g.item_id("c").unwrap()));
        assert_eq!(result.robust.len(), 3);
        // Equal tallies: the tie goes to minus.
        assert_eq!(result.optimal.sign(g.item_id("c").unwrap()), Sign::Minus);
    }

    #[test]
    fn cap_truncates() {
        let items: Vec<String> = (0..6).map(|i| format!("i{i}")).collect();
        let names: Vec<&str> = items.iter().map(String::as_str).collect();
        let mut arcs = vec![("src", ArcType::Dir, "i0")];
        for w in names.windows(2) {
            arcs.push((w[0], ArcType::Dir, w[1]));
        }
        let mut all = names.clone();
        all.push("src");
        let g = graph(&arcs, &all);
        // src has no evidence, so nothing down the chain can be determinate.
        let result = predict(&g, &PartialLabeling::unlabeled(&g, 0), &PredictionConfig::default());
        assert!(result.fallback);
        let config = PredictionConfig {
            cap: 2,
            ..Default::default()
        };
        let g2 = graph(
            &[("a", ArcType::Neg, "c"), ("b", ArcType::Pos, "c"), ("z", ArcType::Dir, "c")],
            &["a", "b", "c", "z"],
        );
        let partial = observe(&g2, &[("a", Sign::Minus), ("b", Sign::Zero), ("z", Sign::Plus)]);
        let capped = predict(&g2, &partial, &config);
        assert!(capped.truncated);
        assert_eq!(capped.all_solutions.len(), 2);
    }

    #[test]
    fn weight_conventions() {
        assert_eq!(arc_weight(Origin::Observed, WeightConvention::EvaluationFive), 5);
        assert_eq!(arc_weight(Origin::Guessed, WeightConvention::EvaluationFive), 1);
        assert_eq!(arc_weight(Origin::Inferred, WeightConvention::EvaluationFive), 5);
        assert_eq!(arc_weight(Origin::Inferred, WeightConvention::ObservedFive), 1);
        assert_eq!("obs5".parse::<WeightConvention>(), Ok(WeightConvention::ObservedFive));
    }
}
