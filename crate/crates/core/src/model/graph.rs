use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use super::scale::{Scale, ValueDomain};
use crate::error::UnknownToken;
use crate::sign::ArcType;

/// Where an indicator's absolute value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SourceKind {
    HumanInput,
    Aggregation,
    Inference,
}

impl SourceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceKind::HumanInput => "human_input",
            SourceKind::Aggregation => "aggregation",
            SourceKind::Inference => "inference",
        }
    }
}

impl FromStr for SourceKind {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "human_input" => Ok(SourceKind::HumanInput),
            "aggregation" => Ok(SourceKind::Aggregation),
            "inference" => Ok(SourceKind::Inference),
            _ => Err(UnknownToken::new("indicator source", s)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemClass {
    State,
    Functionalities,
    Adl,
    Risk,
}

impl ItemClass {
    pub const ALL: [ItemClass; 4] = [
        ItemClass::State,
        ItemClass::Functionalities,
        ItemClass::Adl,
        ItemClass::Risk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ItemClass::State => "state",
            ItemClass::Functionalities => "functionalities",
            ItemClass::Adl => "adl",
            ItemClass::Risk => "risk",
        }
    }

    /// Scale used when a model does not declare one for an item.
    pub fn default_scale(self) -> Scale {
        match self {
            ItemClass::State => Scale::severity(),
            ItemClass::Functionalities | ItemClass::Risk => Scale::disability(),
            ItemClass::Adl => Scale::dependency(),
        }
    }
}

impl fmt::Display for ItemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ItemClass {
    type Err = UnknownToken;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ItemClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| UnknownToken::new("item class", s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Indicator {
    pub name: String,
    pub source: SourceKind,
    pub domain: ValueDomain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub class: ItemClass,
    pub domain: ValueDomain,
}

/// Which layer pair an arc connects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    /// `link(Type, Ind, I)`
    IndicatorToItem,
    /// `influence(Type, I1, I2)`
    ItemToItem,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub source: String,
    pub target: String,
    pub kind: ArcType,
    pub layer: Layer,
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let functor = match self.layer {
            Layer::IndicatorToItem => "link",
            Layer::ItemToItem => "influence",
        };
        write!(f, "{functor}({},{},{})", self.kind, self.source, self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndicatorId(pub usize);

/// An incoming item→item arc as seen from its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Influence {
    pub source: ItemId,
    pub kind: ArcType,
    /// Index into [`DependencyGraph::arcs`].
    pub arc: usize,
}

/// An incoming indicator→item arc as seen from its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub source: IndicatorId,
    pub kind: ArcType,
    pub arc: usize,
}

/// A broken model invariant. Violations are data, not failures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnresolvedEndpoint { arc: Arc, endpoint: String },
    Layer { arc: Arc, reason: String },
    NameClash { name: String },
    ConflictingDeclaration { name: String, detail: String },
    InvalidIdentifier { name: String },
    UndeclaredDomainTarget { node: String },
    Context { detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnresolvedEndpoint { arc, endpoint } => {
                write!(f, "{arc}: endpoint `{endpoint}` is not declared")
            }
            Violation::Layer { arc, reason } => write!(f, "{arc}: {reason}"),
            Violation::NameClash { name } => {
                write!(f, "`{name}` is declared both as indicator and item")
            }
            Violation::ConflictingDeclaration { name, detail } => {
                write!(f, "conflicting declarations for `{name}`: {detail}")
            }
            Violation::InvalidIdentifier { name } => write!(f, "`{name}` is not a valid identifier"),
            Violation::UndeclaredDomainTarget { node } => {
                write!(f, "domain declared for unknown node `{node}`")
            }
            Violation::Context { detail } => f.write_str(detail),
        }
    }
}

/// `[a-zA-Z][a-zA-Z0-9_]*`
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Two-layer dependency graph: indicators with out-arcs to items, and typed
/// influences among items. Immutable once built.
#[derive(Debug, Clone, Default)]
pub struct DependencyGraph {
    indicators: Vec<Indicator>,
    items: Vec<Item>,
    arcs: Vec<Arc>,
    indicator_index: HashMap<String, IndicatorId>,
    item_index: HashMap<String, ItemId>,
    influences_in: Vec<Vec<Influence>>,
    influences_out: Vec<Vec<Influence>>,
    links_in: Vec<Vec<Link>>,
    conflicts: Vec<Violation>,
}

impl DependencyGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    /// Items, sorted by name. `ItemId(i)` indexes this slice.
    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn indicators(&self) -> &[Indicator] {
        &self.indicators
    }

    /// Arcs sorted by layer, then source, target and kind.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn item_id(&self, name: &str) -> Option<ItemId> {
        self.item_index.get(name).copied()
    }

    pub fn indicator_id(&self, name: &str) -> Option<IndicatorId> {
        self.indicator_index.get(name).copied()
    }

    pub fn item(&self, id: ItemId) -> &Item {
        &self.items[id.0]
    }

    pub fn indicator(&self, id: IndicatorId) -> &Indicator {
        &self.indicators[id.0]
    }

    pub fn item_name(&self, id: ItemId) -> &str {
        &self.items[id.0].name
    }

    pub fn item_ids(&self) -> impl Iterator<Item = ItemId> {
        (0..self.items.len()).map(ItemId)
    }

    /// Incoming item→item arcs of `item`, sorted by source.
    pub fn influences_into(&self, item: ItemId) -> &[Influence] {
        &self.influences_in[item.0]
    }

    /// Outgoing item→item arcs of `item`; `source` holds the *target* item.
    pub fn influences_from(&self, item: ItemId) -> &[Influence] {
        &self.influences_out[item.0]
    }

    /// Incoming indicator links of `item`.
    pub fn links_into(&self, item: ItemId) -> &[Link] {
        &self.links_in[item.0]
    }

    pub fn items_of_class(&self, class: ItemClass) -> impl Iterator<Item = ItemId> + '_ {
        self.item_ids().filter(move |&id| self.item(id).class == class)
    }

    pub fn node_domain(&self, name: &str) -> Option<&ValueDomain> {
        self.item_id(name)
            .map(|id| &self.item(id).domain)
            .or_else(|| self.indicator_id(name).map(|id| &self.indicator(id).domain))
    }

    /// Every violated invariant, empty iff the graph is well formed.
    pub fn validate(&self) -> Vec<Violation> {
        validate_graph(self)
    }
}

/// Checks endpoint resolution, layering and naming invariants.
pub fn validate_graph(graph: &DependencyGraph) -> Vec<Violation> {
    let mut violations = graph.conflicts.clone();
    for name in graph.items.iter().map(|i| &i.name).chain(graph.indicators.iter().map(|i| &i.name)) {
        if !is_identifier(name) {
            violations.push(Violation::InvalidIdentifier { name: name.clone() });
        }
    }
    for item in &graph.items {
        if graph.indicator_index.contains_key(&item.name) {
            violations.push(Violation::NameClash {
                name: item.name.clone(),
            });
        }
    }
    for arc in &graph.arcs {
        let is_item = |n: &str| graph.item_index.contains_key(n);
        let is_indicator = |n: &str| graph.indicator_index.contains_key(n);
        for endpoint in [&arc.source, &arc.target] {
            if !is_item(endpoint) && !is_indicator(endpoint) {
                violations.push(Violation::UnresolvedEndpoint {
                    arc: arc.clone(),
                    endpoint: endpoint.clone(),
                });
            }
        }
        let layer_error = match arc.layer {
            Layer::IndicatorToItem if is_indicator(&arc.source) && is_indicator(&arc.target) => {
                Some("indicators have no mutual dependencies")
            }
            Layer::IndicatorToItem if is_item(&arc.source) => Some("link source must be an indicator"),
            Layer::IndicatorToItem if is_indicator(&arc.target) => Some("link target must be an item"),
            Layer::ItemToItem if is_indicator(&arc.source) || is_indicator(&arc.target) => {
                Some("influence endpoints must be items")
            }
            _ => None,
        };
        if let Some(reason) = layer_error {
            violations.push(Violation::Layer {
                arc: arc.clone(),
                reason: reason.to_string(),
            });
        }
    }
    violations
}

/// Collects declarations; duplicates are idempotent, conflicts are recorded.
#[derive(Debug, Clone, Default)]
pub struct GraphBuilder {
    indicators: BTreeMap<String, (SourceKind, Option<ValueDomain>)>,
    items: BTreeMap<String, (ItemClass, Option<ValueDomain>)>,
    arcs: BTreeSet<Arc>,
    domains: BTreeMap<String, ValueDomain>,
    conflicts: Vec<Violation>,
}

impl GraphBuilder {
    pub fn indicator(&mut self, name: &str, source: SourceKind) -> &mut Self {
        match self.indicators.get(name) {
            Some((existing, _)) if *existing != source => {
                self.conflicts.push(Violation::ConflictingDeclaration {
                    name: name.to_string(),
                    detail: format!("indicator source {} vs {}", existing.as_str(), source.as_str()),
                });
            }
            Some(_) => {}
            None => {
                self.indicators.insert(name.to_string(), (source, None));
            }
        }
        self
    }

    pub fn item(&mut self, name: &str, class: ItemClass) -> &mut Self {
        match self.items.get(name) {
            Some((existing, _)) if *existing != class => {
                self.conflicts.push(Violation::ConflictingDeclaration {
                    name: name.to_string(),
                    detail: format!("item class {existing} vs {class}"),
                });
            }
            Some(_) => {}
            None => {
                self.items.insert(name.to_string(), (class, None));
            }
        }
        self
    }

    /// `link(kind, indicator, item)`
    pub fn link(&mut self, kind: ArcType, indicator: &str, item: &str) -> &mut Self {
        self.arcs.insert(Arc {
            source: indicator.to_string(),
            target: item.to_string(),
            kind,
            layer: Layer::IndicatorToItem,
        });
        self
    }

    /// `influence(kind, from, to)`
    pub fn influence(&mut self, kind: ArcType, from: &str, to: &str) -> &mut Self {
        self.arcs.insert(Arc {
            source: from.to_string(),
            target: to.to_string(),
            kind,
            layer: Layer::ItemToItem,
        });
        self
    }

    /// Declares the value domain of an indicator or item.
    pub fn domain(&mut self, node: &str, domain: ValueDomain) -> &mut Self {
        if let Some(existing) = self.domains.get(node) {
            if *existing != domain {
                self.conflicts.push(Violation::ConflictingDeclaration {
                    name: node.to_string(),
                    detail: format!("domain {} vs {}", existing.describe(), domain.describe()),
                });
            }
        } else {
            self.domains.insert(node.to_string(), domain);
        }
        self
    }

    /// Builds without checking; use [`validate_graph`] on the result.
    pub fn finish(&self) -> DependencyGraph {
        let mut conflicts = self.conflicts.clone();
        for node in self.domains.keys() {
            if !self.items.contains_key(node) && !self.indicators.contains_key(node) {
                conflicts.push(Violation::UndeclaredDomainTarget { node: node.clone() });
            }
        }
        let indicators: Vec<Indicator> = self
            .indicators
            .iter()
            .map(|(name, (source, _))| Indicator {
                name: name.clone(),
                source: *source,
                domain: self
                    .domains
                    .get(name)
                    .cloned()
                    .unwrap_or(ValueDomain::Scale(Scale::severity())),
            })
            .collect();
        let items: Vec<Item> = self
            .items
            .iter()
            .map(|(name, (class, _))| Item {
                name: name.clone(),
                class: *class,
                domain: self
                    .domains
                    .get(name)
                    .cloned()
                    .unwrap_or_else(|| ValueDomain::Scale(class.default_scale())),
            })
            .collect();
        let indicator_index: HashMap<String, IndicatorId> = indicators
            .iter()
            .enumerate()
            .map(|(i, ind)| (ind.name.clone(), IndicatorId(i)))
            .collect();
        let item_index: HashMap<String, ItemId> = items
            .iter()
            .enumerate()
            .map(|(i, item)| (item.name.clone(), ItemId(i)))
            .collect();

        let mut arcs: Vec<Arc> = self.arcs.iter().cloned().collect();
        arcs.sort_by(|a, b| {
            (a.layer, &a.source, &a.target, a.kind).cmp(&(b.layer, &b.source, &b.target, b.kind))
        });

        let mut influences_in = vec![Vec::new(); items.len()];
        let mut influences_out = vec![Vec::new(); items.len()];
        let mut links_in = vec![Vec::new(); items.len()];
        for (index, arc) in arcs.iter().enumerate() {
            match arc.layer {
                Layer::ItemToItem => {
                    if let (Some(&s), Some(&t)) = (item_index.get(&arc.source), item_index.get(&arc.target)) {
                        influences_in[t.0].push(Influence {
                            source: s,
                            kind: arc.kind,
                            arc: index,
                        });
                        influences_out[s.0].push(Influence {
                            source: t,
                            kind: arc.kind,
                            arc: index,
                        });
                    }
                }
                Layer::IndicatorToItem => {
                    if let (Some(&s), Some(&t)) = (indicator_index.get(&arc.source), item_index.get(&arc.target)) {
                        links_in[t.0].push(Link {
                            source: s,
                            kind: arc.kind,
                            arc: index,
                        });
                    }
                }
            }
        }
        for list in &mut influences_in {
            list.sort_by_key(|inf| (inf.source, inf.kind));
        }

        DependencyGraph {
            indicators,
            items,
            arcs,
            indicator_index,
            item_index,
            influences_in,
            influences_out,
            links_in,
            conflicts,
        }
    }

    /// Builds and validates.
    pub fn build(&self) -> Result<DependencyGraph, Vec<Violation>> {
        let graph = self.finish();
        let violations = validate_graph(&graph);
        if violations.is_empty() {
            Ok(graph)
        } else {
            Err(violations)
        }
    }
}
