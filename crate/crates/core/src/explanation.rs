//! Local explanation of predicted signs.
//!
//! Each target gets at most one chain of item arcs, followed backwards from
//! the target. Every arc in a chain is sound: the effect of its source's sign
//! equals its target's sign. A chain starts with an arc into the target
//! (unless the target has no incoming arcs) and keeps going while the node it
//! reached was itself guessed by prediction; it stops at an item whose sign
//! came from evaluation. Chains never revisit a node.
//!
//! The forest minimizes the number of distinct arcs over all targets, so arcs
//! that serve several targets are preferred. Ties go to the forest whose
//! chains, read target by target from the root backwards, are smallest when
//! arcs are compared by (source, target, type).

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::ingest::{Fact, Term};
use crate::model::{DependencyGraph, ItemClass, ItemId};
use crate::prediction::{Origin, PredictionResult};
use crate::sign::{arc_effect, ArcType, Sign};

/// Default bound on search nodes before the best forest so far is returned.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// One influence arc, ordered by source, target, then type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcRef {
    pub source: ItemId,
    pub target: ItemId,
    pub kind: ArcType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathArc {
    pub arc: ArcRef,
    /// The arc enters the root and so produced the root's sign directly.
    pub contributing: bool,
}

/// The chain justifying one target, root first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplanationPath {
    pub root: ItemId,
    pub arcs: Vec<PathArc>,
}

impl ExplanationPath {
    /// Items on the chain, root first.
    pub fn nodes(&self) -> Vec<ItemId> {
        std::iter::once(self.root).chain(self.arcs.iter().map(|a| a.arc.source)).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplanationForest {
    pub paths: BTreeMap<ItemId, ExplanationPath>,
    /// How many paths use each arc.
    pub shared: BTreeMap<ArcRef, usize>,
}

impl ExplanationForest {
    fn from_chains(chains: Vec<(ItemId, Vec<ArcRef>)>) -> ExplanationForest {
        let mut forest = ExplanationForest::default();
        for (root, arcs) in chains {
            for arc in &arcs {
                *forest.shared.entry(*arc).or_default() += 1;
            }
            let arcs = arcs
                .into_iter()
                .map(|arc| PathArc {
                    arc,
                    contributing: arc.target == root,
                })
                .collect();
            forest.paths.insert(root, ExplanationPath { root, arcs });
        }
        forest
    }
}

/// Number of distinct arcs in the forest.
pub fn explanation_cost(forest: &ExplanationForest) -> usize {
    forest.shared.len()
}

/// Why a target got no explanation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    /// The labeling leaves the target unknown.
    Unlabeled,
    /// The sign differs between solutions.
    NotRobust { sign: Sign },
    /// No chain of sound arcs reaches an evaluated item.
    NoChain,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::Unlabeled => f.write_str("no determinate sign"),
            Rejection::NotRobust { sign } => write!(f, "sign {sign} is not the same in every solution"),
            Rejection::NoChain => f.write_str("no chain of contributing arcs"),
        }
    }
}

impl Rejection {
    pub fn as_str(self) -> &'static str {
        match self {
            Rejection::Unlabeled => "unlabeled",
            Rejection::NotRobust { .. } => "not_robust",
            Rejection::NoChain => "no_chain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExplainConfig {
    /// Minimize distinct arcs over the whole forest. When off, each target
    /// gets its own shortest chain.
    pub share_arcs: bool,
    pub budget: usize,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            share_arcs: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub forest: ExplanationForest,
    pub rejected: BTreeMap<ItemId, Rejection>,
    /// False when the budget ran out and the forest may not be minimal.
    pub exhaustive: bool,
}

impl Explanation {
    /// Adds the paths and rejections of an explanation over other targets.
    pub fn merge(&mut self, other: Explanation) {
        for (arc, count) in other.forest.shared {
            *self.forest.shared.entry(arc).or_default() += count;
        }
        self.forest.paths.extend(other.forest.paths);
        self.rejected.extend(other.rejected);
        self.exhaustive &= other.exhaustive;
    }

    /// `expl_arc(Root,Src,Dst,Type)` for every path arc, then
    /// `unexplained(Root,Reason)`.
    pub fn to_facts(&self, graph: &DependencyGraph) -> Vec<Fact> {
        let name = |id: ItemId| Term::sym(graph.item_name(id));
        let mut facts = Vec::new();
        for (&root, path) in &self.forest.paths {
            for a in &path.arcs {
                facts.push(Fact::new(
                    "expl_arc",
                    [name(root), name(a.arc.source), name(a.arc.target), Term::sym(a.arc.kind.as_str())],
                ));
            }
        }
        for (&root, reason) in &self.rejected {
            facts.push(Fact::new("unexplained", [name(root), Term::sym(reason.as_str())]));
        }
        facts
    }

    /// One block per target listing `src -(type)-> dst [sign]` lines.
    pub fn report(&self, graph: &DependencyGraph, labeling: &[Sign]) -> String {
        let mut out = String::new();
        let mut roots: BTreeSet<ItemId> = self.forest.paths.keys().copied().collect();
        roots.extend(self.rejected.keys().copied());
        for root in roots {
            let name = graph.item_name(root);
            if let Some(reason) = self.rejected.get(&root) {
                out.push_str(&format!("{name}: not explained ({reason})\n"));
                continue;
            }
            let path = &self.forest.paths[&root];
            out.push_str(&format!("{name} [{}]\n", labeling[root.0]));
            if path.arcs.is_empty() {
                out.push_str("  (no incoming arcs)\n");
            }
            for a in &path.arcs {
                out.push_str(&format!(
                    "  {} -({})-> {} [{}]\n",
                    graph.item_name(a.arc.source),
                    a.arc.kind,
                    graph.item_name(a.arc.target),
                    labeling[a.arc.target.0]
                ));
            }
        }
        out
    }
}

/// Items of `class`, the usual explanation target set.
pub fn class_targets(graph: &DependencyGraph, class: ItemClass) -> BTreeSet<ItemId> {
    graph.items_of_class(class).collect()
}

/// Explains `targets` under the optimal solution of `prediction`.
pub fn explain(
    graph: &DependencyGraph,
    prediction: &PredictionResult,
    targets: &BTreeSet<ItemId>,
    config: &ExplainConfig,
) -> Explanation {
    explain_labeling(
        graph,
        prediction.optimal.labeling(),
        &prediction.origins,
        &prediction.robust,
        targets,
        config,
    )
}

/// Explains `targets` under an explicit labeling. `robust` holds the signs
/// shared by every solution; targets outside it are rejected.
pub fn explain_labeling(
    graph: &DependencyGraph,
    labeling: &[Sign],
    origins: &[Origin],
    robust: &BTreeMap<ItemId, Sign>,
    targets: &BTreeSet<ItemId>,
    config: &ExplainConfig,
) -> Explanation {
    let problem = Problem::new(graph, labeling, origins);
    let mut rejected = BTreeMap::new();
    let mut accepted = Vec::new();
    for &target in targets {
        let sign = labeling[target.0];
        if !sign.is_determinate() {
            rejected.insert(target, Rejection::Unlabeled);
        } else if robust.get(&target) != Some(&sign) {
            rejected.insert(target, Rejection::NotRobust { sign });
        } else if problem.must_extend(target, true) && problem.shortest_chain(target).is_none() {
            rejected.insert(target, Rejection::NoChain);
        } else {
            accepted.push(target);
        }
    }

    let independent: Vec<(ItemId, Vec<ArcRef>)> = accepted
        .iter()
        .map(|&t| (t, problem.shortest_chain(t).expect("accepted targets have a chain")))
        .collect();
    if !config.share_arcs {
        return Explanation {
            forest: ExplanationForest::from_chains(independent),
            rejected,
            exhaustive: true,
        };
    }
    let incumbent = ExplanationForest::from_chains(independent.clone());
    let mut search = ForestSearch::new(&problem, accepted.clone(), explanation_cost(&incumbent), config.budget);
    search.run();
    let exhaustive = !search.exhausted_budget;
    let forest = match search.best {
        Some(chains) => ExplanationForest::from_chains(accepted.into_iter().zip(chains).collect()),
        None => incumbent,
    };
    Explanation {
        forest,
        rejected,
        exhaustive,
    }
}

/// Sound arcs and chain lengths under a fixed labeling.
struct Problem<'a> {
    graph: &'a DependencyGraph,
    origins: &'a [Origin],
    /// Sound incoming arcs per item, in arc order.
    sound: Vec<Vec<ArcRef>>,
    /// Fewest arcs from an item back to an evaluated one, for items that
    /// must be extended.
    distance: Vec<Option<usize>>,
}

impl<'a> Problem<'a> {
    fn new(graph: &'a DependencyGraph, labeling: &[Sign], origins: &'a [Origin]) -> Problem<'a> {
        let sound: Vec<Vec<ArcRef>> = graph
            .item_ids()
            .map(|target| {
                let sign = labeling[target.0];
                let mut arcs: Vec<ArcRef> = graph
                    .influences_into(target)
                    .iter()
                    .filter(|inf| sign.is_determinate() && arc_effect(labeling[inf.source.0], inf.kind) == sign)
                    .map(|inf| ArcRef {
                        source: inf.source,
                        target,
                        kind: inf.kind,
                    })
                    .collect();
                arcs.sort();
                arcs.dedup();
                arcs
            })
            .collect();
        let mut problem = Problem {
            graph,
            origins,
            sound,
            distance: Vec::new(),
        };
        problem.distance = problem.distances(None);
        problem
    }

    /// Whether a chain that reached `item` must continue past it.
    fn must_extend(&self, item: ItemId, is_root: bool) -> bool {
        let has_incoming = !self.graph.influences_into(item).is_empty();
        has_incoming && (is_root || self.origins[item.0] == Origin::Guessed)
    }

    /// Breadth-first from the items where a chain may stop, never passing
    /// through `blocked`.
    fn distances(&self, blocked: Option<ItemId>) -> Vec<Option<usize>> {
        let n = self.sound.len();
        let mut forward: Vec<Vec<ItemId>> = vec![Vec::new(); n];
        for arcs in &self.sound {
            for arc in arcs {
                forward[arc.source.0].push(arc.target);
            }
        }
        let mut distance = vec![None; n];
        let mut queue = VecDeque::new();
        for id in self.graph.item_ids() {
            // A sound arc out of a stopping item ends a chain with one arc.
            if !self.must_extend(id, false) && Some(id) != blocked {
                for &target in &forward[id.0] {
                    if distance[target.0].is_none() {
                        distance[target.0] = Some(1);
                        queue.push_back(target);
                    }
                }
            }
        }
        while let Some(item) = queue.pop_front() {
            let d = distance[item.0].expect("queued items have a distance");
            if !self.must_extend(item, false) || Some(item) == blocked {
                continue;
            }
            for &target in &forward[item.0] {
                if distance[target.0].is_none() {
                    distance[target.0] = Some(d + 1);
                    queue.push_back(target);
                }
            }
        }
        distance
    }

    /// Arcs needed to finish a chain whose last source is `source`.
    fn remaining(&self, source: ItemId) -> Option<usize> {
        remaining_in(&self.distance, self.must_extend(source, false), source)
    }

    /// The shortest chain for `root`, smallest arcs first among equals.
    /// `None` when no chain exists.
    fn shortest_chain(&self, root: ItemId) -> Option<Vec<ArcRef>> {
        let mut chain = Vec::new();
        if !self.must_extend(root, true) {
            return Some(chain);
        }
        // A shortest chain never comes back to its root, so distances that
        // avoid the root are exact along it.
        let distance = self.distances(Some(root));
        let remaining = |source: ItemId| {
            (source != root)
                .then(|| remaining_in(&distance, self.must_extend(source, false), source))
                .flatten()
        };
        let mut left = self.sound[root.0].iter().filter_map(|arc| remaining(arc.source)).min()? + 1;
        let mut node = root;
        while left > 0 {
            let arc = *self.sound[node.0]
                .iter()
                .find(|arc| remaining(arc.source) == Some(left - 1))
                .expect("distances are consistent");
            chain.push(arc);
            node = arc.source;
            left -= 1;
        }
        Some(chain)
    }
}

fn remaining_in(distance: &[Option<usize>], extends: bool, source: ItemId) -> Option<usize> {
    if extends {
        distance[source.0]
    } else {
        Some(0)
    }
}

/// Depth-first branch and bound over one chain per target.
struct ForestSearch<'p, 'a> {
    problem: &'p Problem<'a>,
    targets: Vec<ItemId>,
    use_count: BTreeMap<ArcRef, usize>,
    chains: Vec<Vec<ArcRef>>,
    /// Items on each target's chain.
    on_chain: Vec<Vec<bool>>,
    /// Largest cost still worth exploring.
    limit: usize,
    /// A forest with no arcs was found; nothing can beat it.
    done: bool,
    best: Option<Vec<Vec<ArcRef>>>,
    budget: usize,
    exhausted_budget: bool,
}

impl<'p, 'a> ForestSearch<'p, 'a> {
    fn new(problem: &'p Problem<'a>, targets: Vec<ItemId>, incumbent: usize, budget: usize) -> ForestSearch<'p, 'a> {
        let n = problem.sound.len();
        ForestSearch {
            problem,
            chains: vec![Vec::new(); targets.len()],
            on_chain: vec![vec![false; n]; targets.len()],
            targets,
            use_count: BTreeMap::new(),
            limit: incumbent,
            done: false,
            best: None,
            budget,
            exhausted_budget: false,
        }
    }

    fn run(&mut self) {
        self.start_chain(0);
    }

    fn cost(&self) -> usize {
        self.use_count.len()
    }

    /// Items that still need an arc not yet in the forest.
    fn lower_bound(&self, target_index: usize, pending: Option<ItemId>) -> usize {
        let mut needy = BTreeSet::new();
        let free = |item: ItemId| self.problem.sound[item.0].iter().any(|arc| self.use_count.contains_key(arc));
        if let Some(item) = pending {
            if !free(item) {
                needy.insert(item);
            }
        }
        for &root in &self.targets[target_index..] {
            if self.problem.must_extend(root, true) && !free(root) {
                needy.insert(root);
            }
        }
        self.cost() + needy.len()
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            self.exhausted_budget = true;
            return false;
        }
        self.budget -= 1;
        true
    }

    fn start_chain(&mut self, index: usize) {
        if index == self.targets.len() {
            // Pruning keeps every complete forest within the limit, and later
            // forests of equal cost come later in the tie order.
            let cost = self.cost();
            self.best = Some(self.chains.clone());
            match cost.checked_sub(1) {
                Some(limit) => self.limit = limit,
                None => self.done = true,
            }
            return;
        }
        let root = self.targets[index];
        if !self.problem.must_extend(root, true) {
            self.start_chain(index + 1);
            return;
        }
        self.on_chain[index][root.0] = true;
        self.extend(index, root);
        self.on_chain[index][root.0] = false;
    }

    fn extend(&mut self, index: usize, node: ItemId) {
        if self.done || self.exhausted_budget || !self.spend() {
            return;
        }
        if self.lower_bound(index + 1, Some(node)) > self.limit {
            return;
        }
        let problem = self.problem;
        for &arc in &problem.sound[node.0] {
            let source = arc.source;
            if self.on_chain[index][source.0] {
                continue;
            }
            if problem.remaining(source).is_none() {
                continue;
            }
            *self.use_count.entry(arc).or_default() += 1;
            self.chains[index].push(arc);
            self.on_chain[index][source.0] = true;
            if problem.must_extend(source, false) {
                self.extend(index, source);
            } else if self.lower_bound(index + 1, None) <= self.limit {
                self.start_chain(index + 1);
            }
            self.on_chain[index][source.0] = false;
            self.chains[index].pop();
            let count = self.use_count.get_mut(&arc).expect("arc was counted");
            *count -= 1;
            if *count == 0 {
                self.use_count.remove(&arc);
            }
            if self.done || self.exhausted_budget {
                return;
            }
        }
    }
}
