//! Backtracking over the unlabeled items.
//!
//! Variables are visited in the topological order of the strongly connected
//! components of the influence graph, so most items are checked as soon as
//! they are assigned. The strict search backjumps on conflicts; the fallback
//! search is a two-phase branch and bound on the number of labeled items.

use crate::model::{DependencyGraph, ItemId};
use crate::sign::{arc_effect, Sign};

/// Small growable bitset over variable positions.
#[derive(Debug, Clone, Default)]
struct PosSet(Vec<u64>);

impl PosSet {
    fn insert(&mut self, pos: usize) {
        let (word, bit) = (pos / 64, pos % 64);
        if self.0.len() <= word {
            self.0.resize(word + 1, 0);
        }
        self.0[word] |= 1 << bit;
    }

    fn contains(&self, pos: usize) -> bool {
        self.0.get(pos / 64).is_some_and(|w| w & (1 << (pos % 64)) != 0)
    }

    /// `self ∪ (other \ {except})`
    fn merge_without(&mut self, other: &PosSet, except: usize) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (mine, theirs) in self.0.iter_mut().zip(&other.0) {
            *mine |= theirs;
        }
        if self.contains(except) {
            self.0[except / 64] &= !(1 << (except % 64));
        }
    }
}

enum Outcome {
    Found,
    Conflict(PosSet),
}

/// The labeling problem: fixed items carry their sign, variables are `None`.
pub(super) struct Search<'a> {
    graph: &'a DependencyGraph,
    label: Vec<Option<Sign>>,
    order: Vec<ItemId>,
    position: Vec<Option<usize>>,
    children: Vec<Vec<ItemId>>,
    cap: usize,
    pub(super) found: Vec<Vec<Sign>>,
    pub(super) truncated: bool,
}

impl<'a> Search<'a> {
    /// `fixed[i]` is `Some` for items whose sign is given.
    pub(super) fn new(graph: &'a DependencyGraph, fixed: Vec<Option<Sign>>, cap: usize) -> Search<'a> {
        let order = variable_order(graph, &fixed);
        let mut position = vec![None; fixed.len()];
        for (pos, item) in order.iter().enumerate() {
            position[item.0] = Some(pos);
        }
        let children = graph
            .item_ids()
            .map(|id| {
                let mut targets: Vec<ItemId> = graph.influences_from(id).iter().map(|inf| inf.source).collect();
                targets.dedup();
                targets
            })
            .collect();
        Search {
            graph,
            label: fixed,
            order,
            position,
            children,
            cap,
            found: Vec::new(),
            truncated: false,
        }
    }

    fn stopped(&self) -> bool {
        self.truncated
    }

    fn record(&mut self) {
        if self.found.len() >= self.cap {
            self.truncated = true;
            return;
        }
        self.found.push(self.label.iter().map(|s| s.unwrap_or(Sign::Unknown)).collect());
    }

    /// Whether some incoming arc produces `value`, or could once its
    /// unassigned source is labeled.
    fn can_support(&self, item: ItemId, value: Sign) -> bool {
        self.graph.influences_into(item).iter().any(|inf| match self.label[inf.source.0] {
            Some(s) => arc_effect(s, inf.kind) == value,
            None => Sign::DETERMINATE.iter().any(|&s| arc_effect(s, inf.kind) == value),
        })
    }

    /// Whether an assigned source already produces a determinate sign.
    fn has_assigned_support(&self, item: ItemId) -> bool {
        self.graph
            .influences_into(item)
            .iter()
            .any(|inf| self.label[inf.source.0].is_some_and(|s| arc_effect(s, inf.kind).is_determinate()))
    }

    /// Positions of assigned variables among the sources of `item`.
    fn assigned_sources(&self, item: ItemId, into: &mut PosSet) {
        for inf in self.graph.influences_into(item) {
            if let Some(pos) = self.position[inf.source.0] {
                if self.label[inf.source.0].is_some() {
                    into.insert(pos);
                }
            }
        }
    }

    /// Checks the constraints touched by the assignment just made to `item`.
    /// `require_value` demands that unassigned children keep a determinate option.
    fn check(&self, item: ItemId, require_value: bool) -> Result<(), PosSet> {
        let conflict_of = |culprit: ItemId| {
            let mut set = PosSet::default();
            if let Some(pos) = self.position[culprit.0] {
                set.insert(pos);
            }
            self.assigned_sources(culprit, &mut set);
            set
        };
        let value = self.label[item.0].expect("checked item is assigned");
        let supported = |item: ItemId, value: Sign| {
            if value.is_determinate() {
                self.can_support(item, value)
            } else {
                !self.has_assigned_support(item)
            }
        };
        if !supported(item, value) {
            return Err(conflict_of(item));
        }
        for &child in &self.children[item.0] {
            if self.position[child.0].is_none() || child == item {
                continue;
            }
            match self.label[child.0] {
                Some(v) => {
                    if !supported(child, v) {
                        return Err(conflict_of(child));
                    }
                }
                None if require_value => {
                    if !Sign::DETERMINATE.iter().any(|&w| self.can_support(child, w)) {
                        let mut set = PosSet::default();
                        self.assigned_sources(child, &mut set);
                        return Err(set);
                    }
                }
                None => {}
            }
        }
        Ok(())
    }

    /// Every assignment of the variables to determinate, supported signs.
    pub(super) fn enumerate_strict(&mut self) {
        for pos in 0..self.order.len() {
            let item = self.order[pos];
            if !Sign::DETERMINATE.iter().any(|&w| self.can_support(item, w)) {
                return;
            }
        }
        self.strict(0);
    }

    fn strict(&mut self, pos: usize) -> Outcome {
        if pos == self.order.len() {
            self.record();
            return Outcome::Found;
        }
        let item = self.order[pos];
        let mut conflict = PosSet::default();
        let mut found = false;
        for value in Sign::DETERMINATE {
            self.label[item.0] = Some(value);
            let outcome = match self.check(item, true) {
                Ok(()) => self.strict(pos + 1),
                Err(reason) => Outcome::Conflict(reason),
            };
            self.label[item.0] = None;
            match outcome {
                Outcome::Found => found = true,
                Outcome::Conflict(reason) if !found && !reason.contains(pos) => {
                    // The failure does not depend on this item: jump back.
                    return Outcome::Conflict(reason);
                }
                Outcome::Conflict(reason) => conflict.merge_without(&reason, pos),
            }
            if self.stopped() {
                break;
            }
        }
        if found {
            Outcome::Found
        } else {
            Outcome::Conflict(conflict)
        }
    }

    /// Variables at `from..` that could still take a determinate sign.
    fn potential(&self, from: usize) -> usize {
        self.order[from..]
            .iter()
            .filter(|&&item| Sign::DETERMINATE.iter().any(|&w| self.can_support(item, w)))
            .count()
    }

    /// Assignments over `{-, =, +, ?}` with supported determinate signs and
    /// the largest possible number of determinate ones.
    ///
    /// Only labelings that leave an item unknown when nothing supports a sign
    /// for it are explored. Every maximum lies among them: giving such an item
    /// a supported sign can only add support elsewhere, so it would raise the
    /// count.
    pub(super) fn enumerate_fallback(&mut self) -> usize {
        let ceiling = self.potential(0);
        let mut best = None;
        self.maximize(0, 0, ceiling, &mut best);
        let target = best.unwrap_or(0);
        self.collect(0, 0, target);
        target
    }

    fn maximize(&mut self, pos: usize, count: usize, ceiling: usize, best: &mut Option<usize>) {
        if *best == Some(ceiling) {
            return;
        }
        if pos == self.order.len() {
            if best.map_or(true, |b| count > b) {
                *best = Some(count);
            }
            return;
        }
        if best.is_some_and(|b| count + self.potential(pos) <= b) {
            return;
        }
        let item = self.order[pos];
        for value in [Sign::Minus, Sign::Zero, Sign::Plus, Sign::Unknown] {
            self.label[item.0] = Some(value);
            if self.check(item, false).is_ok() {
                self.maximize(pos + 1, count + usize::from(value.is_determinate()), ceiling, best);
            }
            self.label[item.0] = None;
        }
    }

    fn collect(&mut self, pos: usize, count: usize, target: usize) {
        if self.stopped() {
            return;
        }
        if pos == self.order.len() {
            if count == target {
                self.record();
            }
            return;
        }
        if count + self.potential(pos) < target {
            return;
        }
        let item = self.order[pos];
        for value in [Sign::Minus, Sign::Zero, Sign::Plus, Sign::Unknown] {
            self.label[item.0] = Some(value);
            if self.check(item, false).is_ok() {
                self.collect(pos + 1, count + usize::from(value.is_determinate()), target);
            }
            self.label[item.0] = None;
            if self.stopped() {
                return;
            }
        }
    }
}

/// Variables in topological order of the condensation, sources first;
/// items of one component by id.
fn variable_order(graph: &DependencyGraph, fixed: &[Option<Sign>]) -> Vec<ItemId> {
    let components = strongly_connected(graph);
    let mut order = Vec::new();
    for component in components.into_iter().rev() {
        let mut members: Vec<ItemId> = component.into_iter().filter(|id| fixed[id.0].is_none()).collect();
        members.sort();
        order.extend(members);
    }
    order
}

/// Tarjan's algorithm, iterative. Components come out sinks first.
fn strongly_connected(graph: &DependencyGraph) -> Vec<Vec<ItemId>> {
    let n = graph.items().len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next = 0;

    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (node, next child offset)
        let mut frames = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (node, ref mut child)) = frames.last_mut() {
            let successors = graph.influences_from(ItemId(node));
            if let Some(inf) = successors.get(*child) {
                *child += 1;
                let succ = inf.source.0;
                if index[succ] == usize::MAX {
                    index[succ] = next;
                    low[succ] = next;
                    next += 1;
                    stack.push(succ);
                    on_stack[succ] = true;
                    frames.push((succ, 0));
                } else if on_stack[succ] {
                    low[node] = low[node].min(index[succ]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[node]);
            }
            if low[node] == index[node] {
                let mut component = Vec::new();
                loop {
                    let member = stack.pop().expect("component root is on the stack");
                    on_stack[member] = false;
                    component.push(ItemId(member));
                    if member == node {
                        break;
                    }
                }
                components.push(component);
            }
        }
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ItemClass;
    use crate::sign::ArcType;

    #[test]
    fn components_in_topological_order() {
        let mut b = DependencyGraph::builder();
        for name in ["a", "b", "c", "d"] {
            b.item(name, ItemClass::State);
        }
        b.influence(ArcType::Pos, "a", "b")
            .influence(ArcType::Pos, "b", "c")
            .influence(ArcType::Pos, "c", "b")
            .influence(ArcType::Pos, "c", "d");
        let graph = b.build().unwrap();
        let components = strongly_connected(&graph);
        let sizes: Vec<usize> = components.iter().rev().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 1]);
        let order = variable_order(&graph, &[None; 4]);
        let names: Vec<&str> = order.iter().map(|&id| graph.item_name(id)).collect();
        assert_eq!(names, vec!["a", "b", "c", "d"]);
    }
}
