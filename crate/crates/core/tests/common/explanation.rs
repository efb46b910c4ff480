//! Minimal explanation forests by trying every arc subset.

use std::collections::{BTreeMap, BTreeSet};

use healthgraph::arc_effect;
use healthgraph::explanation::Explanation;
use healthgraph::model::{DependencyGraph, ItemId};
use healthgraph::prediction::{Origin, PredictionResult};
use healthgraph::ArcType;

pub type Arc = (ItemId, ItemId, ArcType);

pub fn all_arcs(graph: &DependencyGraph) -> Vec<Arc> {
    let mut arcs: Vec<Arc> = graph
        .item_ids()
        .flat_map(|t| graph.influences_into(t).iter().map(move |inf| (inf.source, t, inf.kind)))
        .collect();
    arcs.sort();
    arcs.dedup();
    arcs
}

/// Every arc subset that satisfies the chain rules for `root`, as arc
/// sequences read from the root backwards.
pub fn valid_chains(graph: &DependencyGraph, prediction: &PredictionResult, root: ItemId, arcs: &[Arc]) -> Vec<Vec<Arc>> {
    let label = prediction.optimal.labeling();
    let has_incoming = |n: ItemId| !graph.influences_into(n).is_empty();
    let needs_in = |n: ItemId| {
        if n == root {
            has_incoming(n)
        } else {
            prediction.origins[n.0] == Origin::Guessed && has_incoming(n)
        }
    };
    let mut out = Vec::new();
    for mask in 0u32..(1 << arcs.len()) {
        let chosen: Vec<Arc> = (0..arcs.len()).filter(|i| mask & (1 << i) != 0).map(|i| arcs[i]).collect();
        let sound = chosen.iter().all(|&(s, t, k)| {
            label[t.0].is_determinate() && arc_effect(label[s.0], k) == label[t.0]
        });
        if !sound {
            continue;
        }
        let mut nodes: BTreeSet<ItemId> = chosen.iter().map(|a| a.0).collect();
        nodes.insert(root);
        if !chosen.iter().all(|a| nodes.contains(&a.1)) {
            continue;
        }
        let out_degree = |n: ItemId| chosen.iter().filter(|a| a.0 == n).count();
        let in_degree = |n: ItemId| chosen.iter().filter(|a| a.1 == n).count();
        if out_degree(root) != 0 || nodes.iter().any(|&n| n != root && out_degree(n) != 1) {
            continue;
        }
        if nodes.iter().any(|&n| in_degree(n) != usize::from(needs_in(n))) {
            continue;
        }
        // Following outgoing arcs from every node must reach the root.
        let reaches_root = nodes.iter().all(|&start| {
            let mut node = start;
            for _ in 0..=nodes.len() {
                if node == root {
                    return true;
                }
                node = chosen.iter().find(|a| a.0 == node).unwrap().1;
            }
            false
        });
        if !reaches_root {
            continue;
        }
        // Read it as a sequence from the root.
        let mut sequence = Vec::new();
        let mut node = root;
        while let Some(&arc) = chosen.iter().find(|a| a.1 == node) {
            sequence.push(arc);
            node = arc.0;
        }
        out.push(sequence);
    }
    out
}

pub struct Oracle {
    pub cost: usize,
    pub chains: BTreeMap<ItemId, Vec<Arc>>,
    pub no_chain: BTreeSet<ItemId>,
}

pub fn oracle(graph: &DependencyGraph, prediction: &PredictionResult, targets: &[ItemId]) -> Option<Oracle> {
    let arcs = all_arcs(graph);
    let mut per_target = Vec::new();
    let mut no_chain = BTreeSet::new();
    for &t in targets {
        let chains = valid_chains(graph, prediction, t, &arcs);
        if chains.is_empty() {
            no_chain.insert(t);
        } else {
            per_target.push((t, chains));
        }
    }
    let combinations: usize = per_target.iter().map(|(_, c)| c.len()).product();
    if combinations > 200_000 {
        return None;
    }
    let mut best: Option<(usize, Vec<Arc>, Vec<usize>)> = None;
    let mut choice = vec![0; per_target.len()];
    loop {
        let mut union = BTreeSet::new();
        let mut sequence = Vec::new();
        for (i, (_, chains)) in per_target.iter().enumerate() {
            union.extend(chains[choice[i]].iter().copied());
            sequence.extend(chains[choice[i]].iter().copied());
        }
        let better = match &best {
            None => true,
            Some((cost, seq, _)) => union.len() < *cost || union.len() == *cost && sequence < *seq,
        };
        if better {
            best = Some((union.len(), sequence, choice.clone()));
        }
        // Next combination.
        let mut i = 0;
        while i < choice.len() {
            choice[i] += 1;
            if choice[i] < per_target[i].1.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
        if i == choice.len() {
            break;
        }
    }
    let (cost, _, choice) = best.unwrap_or((0, Vec::new(), Vec::new()));
    let chains = per_target
        .iter()
        .zip(choice)
        .map(|((t, chains), c)| (*t, chains[c].clone()))
        .collect();
    Some(Oracle { cost, chains, no_chain })
}

pub fn library_chains(explanation: &Explanation) -> BTreeMap<ItemId, Vec<Arc>> {
    explanation
        .forest
        .paths
        .iter()
        .map(|(&root, path)| (root, path.arcs.iter().map(|a| (a.arc.source, a.arc.target, a.arc.kind)).collect()))
        .collect()
}
