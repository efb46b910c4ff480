//! Append-only record of every cycle, one `entry(Cycle,Kind,Payload).` per line.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use healthgraph::model::DependencyGraph;
use healthgraph::prediction::PredictionResult;
use healthgraph::{Fact, Term};

#[derive(Debug, Default)]
pub struct RunLog {
    entries: Vec<Fact>,
}

impl RunLog {
    pub fn push(&mut self, cycle: i64, kind: &str, payload: Term) {
        self.entries.push(Fact::new("entry", [Term::Int(cycle), Term::sym(kind), payload]));
    }

    /// Logs each fact as its own entry, the fact itself as payload.
    pub fn push_facts<'a>(&mut self, cycle: i64, kind: &str, facts: impl IntoIterator<Item = &'a Fact>) {
        for fact in facts {
            self.push(cycle, kind, Term::Compound(fact.predicate.clone(), fact.args.clone()));
        }
    }

    /// Every solution as `solution(Index, Objective, item(Sign), ...)`.
    pub fn push_solutions(&mut self, cycle: i64, graph: &DependencyGraph, prediction: &PredictionResult) {
        for (index, solution) in prediction.all_solutions.iter().enumerate() {
            let mut args = vec![Term::Int(index as i64), Term::Int(solution.objective())];
            for id in graph.item_ids() {
                let sign = solution.sign(id);
                let value = sign.as_int().map_or_else(|| Term::sym("unknown"), Term::Int);
                args.push(Term::Compound(graph.item_name(id).to_string(), vec![value]));
            }
            self.push(cycle, "solution", Term::Compound("solution".into(), args));
        }
        if prediction.truncated {
            self.push(cycle, "truncated", Term::Int(prediction.all_solutions.len() as i64));
        }
        if prediction.fallback {
            self.push(cycle, "fallback", Term::sym("maximal_partial"));
        }
    }

    pub fn append_to(&self, path: &Path) -> Result<()> {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("cannot open {}", path.display()))?;
        for entry in &self.entries {
            writeln!(file, "{entry}").with_context(|| format!("cannot write {}", path.display()))?;
        }
        Ok(())
    }
}
