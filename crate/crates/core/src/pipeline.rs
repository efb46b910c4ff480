//! One monitoring cycle end to end: evaluation, prediction, explanation and
//! the feedback policy, with reactions carried across cycles.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::evaluation::{evaluate, EvalError, Evaluation, EvaluationConfig};
use crate::explanation::{explain, ExplainConfig, Explanation, ExplanationForest};
use crate::ingest::{FactBase, Model};
use crate::model::{ItemClass, ItemId};
use crate::policy::{log_reaction, step, Decision, DayReport, PolicySet, ReactionLog, StepError};
use crate::prediction::{predict, Origin, PredictionConfig, PredictionResult};
use crate::sign::Sign;

#[derive(Debug, Clone, Default)]
pub struct PipelineConfig {
    pub evaluation: EvaluationConfig,
    pub prediction: PredictionConfig,
    pub explanation: ExplainConfig,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Evaluation(#[from] EvalError),
    #[error(transparent)]
    Policy(#[from] StepError),
}

#[derive(Debug, Clone)]
pub struct CycleOutcome {
    pub evaluation: Evaluation,
    pub prediction: PredictionResult,
    pub explanation: Explanation,
    pub decision: Decision,
    /// Facts the policy conditions were checked against.
    pub view: FactBase,
    pub warnings: Vec<String>,
}

impl CycleOutcome {
    /// Robust determinate signs of the items the search had to guess.
    pub fn guessed_signs(&self, model: &Model) -> Vec<(String, Sign)> {
        guessed_targets(&self.prediction)
            .into_iter()
            .map(|id| (model.graph.item_name(id).to_string(), self.prediction.robust[&id]))
            .collect()
    }
}

fn guessed_targets(prediction: &PredictionResult) -> BTreeSet<ItemId> {
    prediction
        .robust
        .iter()
        .filter(|(id, sign)| prediction.origins[id.0] == Origin::Guessed && sign.is_determinate())
        .map(|(&id, _)| id)
        .collect()
}

/// Runs cycles for one person over a day.
#[derive(Debug, Clone)]
pub struct Pipeline<'a> {
    model: &'a Model,
    policy: &'a PolicySet,
    config: PipelineConfig,
    reactions: ReactionLog,
    decisions: Vec<Decision>,
    report: DayReport,
}

impl<'a> Pipeline<'a> {
    pub fn new(model: &'a Model, policy: &'a PolicySet, config: PipelineConfig) -> Pipeline<'a> {
        Pipeline {
            model,
            policy,
            config,
            reactions: ReactionLog::default(),
            decisions: Vec::new(),
            report: DayReport::new(),
        }
    }

    /// Runs one cycle over its input facts. Observed actions are first
    /// logged as reactions to the previous decision.
    pub fn run_cycle(&mut self, facts: &FactBase) -> Result<CycleOutcome, PipelineError> {
        let graph = &self.model.graph;
        if let Some(previous) = self.decisions.last() {
            self.reactions.record(log_reaction(self.policy, previous, facts));
        }

        let evaluation = evaluate(graph, facts, &self.config.evaluation)?;
        let prediction = predict(graph, &evaluation.labeling, &self.config.prediction);
        let mut warnings = Vec::new();
        if prediction.fallback {
            warnings.push("no total labeling exists; using maximal partial labelings".to_string());
        }
        if prediction.truncated {
            warnings.push(format!(
                "solution cap of {} reached; robust signs are approximate",
                self.config.prediction.cap
            ));
        }

        // Each item class is explained on its own.
        let targets = guessed_targets(&prediction);
        let mut explanation = Explanation {
            forest: ExplanationForest::default(),
            rejected: Default::default(),
            exhaustive: true,
        };
        for class in ItemClass::ALL {
            let of_class: BTreeSet<ItemId> = graph.items_of_class(class).filter(|id| targets.contains(id)).collect();
            if !of_class.is_empty() {
                explanation.merge(explain(graph, &prediction, &of_class, &self.config.explanation));
            }
        }
        if !explanation.exhaustive {
            warnings.push("explanation budget exhausted; chains may not be minimal".to_string());
        }

        let mut view = facts.clone();
        view.extend(evaluation.to_facts(graph).iter().cloned());
        view.extend(prediction.to_facts(graph));
        view.extend(explanation.to_facts(graph));
        view.extend(self.reactions.to_facts());

        let decision = step(self.policy, &view, evaluation.hour)?;
        let outcome = CycleOutcome {
            evaluation,
            prediction,
            explanation,
            decision,
            view,
            warnings,
        };
        self.report
            .push(outcome.evaluation.hour, outcome.guessed_signs(self.model), outcome.decision.clone());
        self.decisions.push(outcome.decision.clone());
        Ok(outcome)
    }

    pub fn reactions(&self) -> &ReactionLog {
        &self.reactions
    }

    pub fn report(&self) -> &DayReport {
        &self.report
    }

    pub fn render_report(&self) -> String {
        self.report.render(self.policy)
    }
}
