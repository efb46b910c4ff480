use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use healthgraph::ingest::parse_facts_with_warnings;
use healthgraph::model::{DependencyGraph, ItemClass, ItemId};
use healthgraph::policy::{parse_policy, PolicySet};
use healthgraph::{FactBase, Model};

pub fn model(path: &Path) -> Result<Model> {
    let text = read(path)?;
    healthgraph::parse_model(&text).with_context(|| format!("{}", path.display()))
}

pub fn policy(path: &Path) -> Result<PolicySet> {
    let text = read(path)?;
    let policy = parse_policy(&text).with_context(|| format!("{}", path.display()))?;
    policy.check_vocabulary().with_context(|| format!("{}", path.display()))?;
    Ok(policy)
}

/// Reads one fact file, reporting unknown predicates on stderr.
pub fn facts(path: &Path) -> Result<FactBase> {
    let text = read(path)?;
    let (base, warnings) = parse_facts_with_warnings(&text).with_context(|| format!("{}", path.display()))?;
    for warning in warnings {
        eprintln!("warning: {}: {warning}", path.display());
    }
    Ok(base)
}

pub fn merged_facts(paths: &[PathBuf]) -> Result<FactBase> {
    let mut base = FactBase::new();
    for path in paths {
        base.extend(facts(path)?.iter().cloned());
    }
    Ok(base)
}

/// Which items to explain.
#[derive(Debug, Clone)]
pub enum ClassChoice {
    Every,
    Class(ItemClass),
    Custom(BTreeSet<String>),
}

impl ClassChoice {
    /// Parses `state`, `adl`, ... or `custom:<file>` where the file lists
    /// item names separated by whitespace or commas.
    pub fn parse(flag: Option<&str>) -> Result<ClassChoice> {
        let Some(flag) = flag else { return Ok(ClassChoice::Every) };
        if let Some(path) = flag.strip_prefix("custom:") {
            let text = read(Path::new(path))?;
            let names = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            return Ok(ClassChoice::Custom(names));
        }
        Ok(ClassChoice::Class(flag.parse()?))
    }

    /// Target sets, explained one after the other.
    pub fn groups(&self, graph: &DependencyGraph) -> Result<Vec<BTreeSet<ItemId>>> {
        Ok(match self {
            ClassChoice::Every => ItemClass::ALL
                .into_iter()
                .map(|class| graph.items_of_class(class).collect())
                .collect(),
            ClassChoice::Class(class) => vec![graph.items_of_class(*class).collect()],
            ClassChoice::Custom(names) => {
                let mut ids = BTreeSet::new();
                for name in names {
                    match graph.item_id(name) {
                        Some(id) => ids.insert(id),
                        None => bail!("custom class names unknown item `{name}`"),
                    };
                }
                vec![ids]
            }
        })
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// The model, policy and sorted cycle files of a day directory.
pub struct Day {
    pub model: PathBuf,
    pub policy: PathBuf,
    pub cycles: Vec<PathBuf>,
}

pub fn day(dir: &Path) -> Result<Day> {
    let mut models = Vec::new();
    let mut policies = Vec::new();
    let mut cycles = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        match path.extension().and_then(|e| e.to_str()) {
            Some("model") => models.push(path),
            Some("policy") => policies.push(path),
            Some("facts") => cycles.push(path),
            _ => {}
        }
    }
    cycles.sort();
    let one = |mut found: Vec<PathBuf>, kind: &str| -> Result<PathBuf> {
        match found.len() {
            1 => Ok(found.remove(0)),
            n => bail!("{} must hold exactly one .{kind} file, found {n}", dir.display()),
        }
    };
    if cycles.is_empty() {
        bail!("{} has no .facts files", dir.display());
    }
    if cycles.len() > 24 {
        bail!("{} has {} cycles; a day has at most 24", dir.display(), cycles.len());
    }
    Ok(Day {
        model: one(models, "model")?,
        policy: one(policies, "policy")?,
        cycles,
    })
}
