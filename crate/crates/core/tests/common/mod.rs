//! Random instance generators and brute-force oracles shared by the
//! integration suites. The oracles are written straight from the rule text
//! and share no code with the library's search.

#![allow(dead_code)]

pub mod evaluation;
pub mod explanation;
pub mod ingest;
pub mod localization;

use std::collections::BTreeMap;

use healthgraph::evaluation::{DifferentialRecord, PartialLabeling, Provenance};
use healthgraph::model::{DependencyGraph, ItemClass, ItemId};
use healthgraph::{arc_effect, ArcType, Sign};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_sign<R: Rng>(rng: &mut R) -> Sign {
    *Sign::DETERMINATE.choose(rng).unwrap()
}

pub fn random_kind<R: Rng>(rng: &mut R) -> ArcType {
    *ArcType::ALL.choose(rng).unwrap()
}

/// Items `i00..`, random influences (self loops and cycles allowed).
pub fn random_item_graph<R: Rng>(rng: &mut R, items: usize, arcs: usize) -> DependencyGraph {
    let mut builder = DependencyGraph::builder();
    let names: Vec<String> = (0..items).map(|i| format!("i{i:02}")).collect();
    for name in &names {
        builder.item(name, *ItemClass::ALL.choose(rng).unwrap());
    }
    for _ in 0..arcs {
        let from = names.choose(rng).unwrap();
        let to = names.choose(rng).unwrap();
        builder.influence(random_kind(rng), from, to);
    }
    builder.build().expect("generated graph is valid")
}

/// Labels `count` distinct random items, a third of them as inferred.
pub fn random_observations<R: Rng>(rng: &mut R, graph: &DependencyGraph, count: usize) -> PartialLabeling {
    let mut partial = PartialLabeling::unlabeled(graph, 0);
    let mut ids: Vec<ItemId> = graph.item_ids().collect();
    ids.shuffle(rng);
    for id in ids.into_iter().take(count) {
        let provenance = if rng.gen_ratio(1, 3) {
            Provenance::Inferred
        } else {
            Provenance::Observed
        };
        partial.label(
            id,
            DifferentialRecord {
                sign: random_sign(rng),
                provenance,
                cycle: 0,
            },
        );
    }
    partial
}

/// What the oracle expects from prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionOracle {
    pub solutions: Vec<Vec<Sign>>,
    pub fallback: bool,
    pub robust: BTreeMap<ItemId, Sign>,
    pub optimal: Vec<Sign>,
    pub optimal_objective: i64,
}

fn produced(graph: &DependencyGraph, labeling: &[Sign], item: ItemId) -> Vec<Sign> {
    graph
        .influences_into(item)
        .iter()
        .map(|inf| arc_effect(labeling[inf.source.0], inf.kind))
        .filter(|s| s.is_determinate())
        .collect()
}

/// Exhaustive enumeration over every assignment of the guessable items.
pub fn prediction_oracle(graph: &DependencyGraph, partial: &PartialLabeling, obs_weight_only: bool) -> PredictionOracle {
    let n = graph.items().len();
    let guessable: Vec<ItemId> = graph
        .item_ids()
        .filter(|&id| !partial.is_labeled(id) && !graph.influences_into(id).is_empty())
        .collect();
    let base: Vec<Sign> = graph.item_ids().map(|id| partial.sign(id)).collect();

    let run = |values: &[Sign]| -> Vec<Vec<Sign>> {
        let mut out = Vec::new();
        let k = guessable.len();
        let total = values.len().pow(k as u32);
        for code in 0..total {
            let mut labeling = base.clone();
            let mut c = code;
            for &g in &guessable {
                labeling[g.0] = values[c % values.len()];
                c /= values.len();
            }
            let ok = guessable.iter().all(|&g| {
                let s = labeling[g.0];
                !s.is_determinate() || produced(graph, &labeling, g).contains(&s)
            });
            if ok {
                out.push(labeling);
            }
        }
        out
    };

    let mut solutions = run(&Sign::DETERMINATE);
    let mut fallback = false;
    if solutions.is_empty() {
        fallback = true;
        let all = run(&[Sign::Minus, Sign::Zero, Sign::Plus, Sign::Unknown]);
        let best = all
            .iter()
            .map(|l| l.iter().filter(|s| s.is_determinate()).count())
            .max()
            .unwrap_or(0);
        solutions = all
            .into_iter()
            .filter(|l| l.iter().filter(|s| s.is_determinate()).count() == best)
            .collect();
    }
    solutions.sort();

    let mut robust = BTreeMap::new();
    for i in 0..n {
        let s = solutions[0][i];
        if s.is_determinate() && solutions.iter().all(|l| l[i] == s) {
            robust.insert(ItemId(i), s);
        }
    }

    let weight = |id: ItemId| -> i64 {
        match partial.get(id).map(|r| r.provenance) {
            Some(Provenance::Observed) => 5,
            Some(Provenance::Inferred) if !obs_weight_only => 5,
            _ => 1,
        }
    };
    let objective = |labeling: &[Sign]| -> i64 {
        guessable
            .iter()
            .filter(|g| labeling[g.0].is_determinate())
            .map(|&g| {
                graph
                    .influences_into(g)
                    .iter()
                    .filter(|inf| arc_effect(labeling[inf.source.0], inf.kind) == labeling[g.0])
                    .map(|inf| weight(inf.source))
                    .sum::<i64>()
            })
            .sum()
    };
    let mut optimal = solutions[0].clone();
    let mut optimal_objective = objective(&optimal);
    for labeling in &solutions[1..] {
        let value = objective(labeling);
        if value > optimal_objective {
            optimal = labeling.clone();
            optimal_objective = value;
        }
    }
    PredictionOracle {
        solutions,
        fallback,
        robust,
        optimal,
        optimal_objective,
    }
}
