//! End-of-day summary of the feedback given across cycles.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{ActionCause, Decision, FeedbackForm, PolicySet, PromptTime};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq)]
struct CycleRecord {
    time: i64,
    predictions: Vec<(String, Sign)>,
    decision: Decision,
}

/// Accumulates decisions over a day and renders them as text. Rendering is
/// deterministic: the same cycles always give the same bytes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DayReport {
    cycles: Vec<CycleRecord>,
}

impl DayReport {
    pub fn new() -> DayReport {
        DayReport::default()
    }

    /// Adds a cycle. `predictions` are the robust signs of guessed items.
    pub fn push(&mut self, time: i64, mut predictions: Vec<(String, Sign)>, decision: Decision) {
        predictions.sort();
        self.cycles.push(CycleRecord {
            time,
            predictions,
            decision,
        });
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Latest form and prompt time of each output that received feedback.
    pub fn latest_forms(&self) -> BTreeMap<&str, (FeedbackForm, PromptTime, i64)> {
        let mut latest = BTreeMap::new();
        for cycle in &self.cycles {
            for prompt in &cycle.decision.prompts {
                latest.insert(prompt.output.as_str(), (prompt.form, prompt.time, cycle.time));
            }
        }
        latest
    }

    pub fn render(&self, policy: &PolicySet) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Day report: {} cycles", self.cycles.len());
        let latest = self.latest_forms();
        for &form in &policy.order {
            let outputs: Vec<_> = latest.iter().filter(|(_, v)| v.0 == form).collect();
            if outputs.is_empty() {
                continue;
            }
            let _ = writeln!(out, "\n{}s", capitalized(form.word()));
            for (output, (_, time, cycle)) in outputs {
                let _ = writeln!(out, "  {output} (hour {cycle}, {})", time.as_str());
            }
        }

        let _ = writeln!(out, "\nPredictions");
        for cycle in &self.cycles {
            let signs: Vec<String> = cycle.predictions.iter().map(|(item, sign)| format!("{item} {sign}")).collect();
            let listed = if signs.is_empty() { "none".to_string() } else { signs.join(", ") };
            let _ = writeln!(out, "  hour {}: {listed}", cycle.time);
        }

        let actions: Vec<String> = self
            .cycles
            .iter()
            .flat_map(|cycle| {
                cycle.decision.actions.iter().map(move |action| {
                    let cause = match &action.cause {
                        ActionCause::Feedback { output, form } => format!("{output} {form}"),
                        ActionCause::Observed { action } => format!("observed {action}"),
                    };
                    format!("  hour {}: {} ({cause}, {})", cycle.time, action.action, action.time.as_str())
                })
            })
            .collect();
        if !actions.is_empty() {
            let _ = writeln!(out, "\nActions");
            for line in actions {
                let _ = writeln!(out, "{line}");
            }
        }
        out
    }
}

fn capitalized(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
