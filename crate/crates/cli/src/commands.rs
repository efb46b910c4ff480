use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use healthgraph::evaluation::{self, EvaluationConfig, PartialLabeling};
use healthgraph::explanation::{self, ExplainConfig, Explanation, ExplanationForest};
use healthgraph::localization::{track, LocalizationConfig};
use healthgraph::pipeline::{CycleOutcome, Pipeline, PipelineConfig};
use healthgraph::policy::PolicySet;
use healthgraph::prediction::{self, PredictionConfig, PredictionResult};
use healthgraph::{emit_facts, Fact, FactBase, Model};

use crate::load::{self, ClassChoice};
use crate::runlog::RunLog;
use crate::{CycleArgs, RunArgs, Tuning};

/// Exit status of `predict` when only maximal partial labelings exist.
const FALLBACK_STATUS: u8 = 2;

const RUN_LOG: &str = "run.log";

fn prediction_config(tuning: &Tuning) -> PredictionConfig {
    let mut config = PredictionConfig {
        weights: tuning.weights,
        ..PredictionConfig::default()
    };
    if let Some(cap) = tuning.cap {
        config.cap = cap;
    }
    config
}

fn pipeline_config(args_hour: Option<i64>, tuning: &Tuning) -> PipelineConfig {
    PipelineConfig {
        evaluation: EvaluationConfig {
            hour: args_hour,
            ..EvaluationConfig::default()
        },
        prediction: prediction_config(tuning),
        explanation: ExplainConfig::default(),
    }
}

fn write_facts(dir: &Path, name: &str, facts: impl IntoIterator<Item = Fact>) -> Result<()> {
    let mut base = FactBase::new();
    base.extend(facts);
    write_text(dir, name, &emit_facts(&base))
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn warn(warnings: &[String]) {
    for warning in warnings {
        eprintln!("warning: {warning}");
    }
}

pub fn evaluate(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let facts = load::merged_facts(&args.facts)?;
    let config = pipeline_config(args.hour, &args.tuning);
    let evaluation = evaluation::evaluate(&model.graph, &facts, &config.evaluation)?;
    write_facts(&args.out, "evaluation.facts", evaluation.to_facts(&model.graph).iter().cloned())?;
    println!(
        "hour {}: {} items labeled, {} to guess",
        evaluation.hour,
        evaluation.labeling.labels().len(),
        evaluation.labeling.to_guess().len()
    );
    Ok(ExitCode::SUCCESS)
}

/// Partial labeling from evaluation output when the facts carry it,
/// otherwise from a fresh evaluation of the raw observations.
fn labeling(model: &Model, facts: &FactBase, hour: Option<i64>) -> Result<(i64, PartialLabeling)> {
    let evaluated = ["diff_item", "diff_item_inferred", "to_guess"]
        .iter()
        .any(|p| facts.with_predicate(p).next().is_some());
    if evaluated {
        let labeling = PartialLabeling::from_facts(&model.graph, facts)?;
        Ok((hour.or_else(|| facts.hour()).unwrap_or(labeling.cycle()), labeling))
    } else {
        let config = EvaluationConfig {
            hour,
            ..EvaluationConfig::default()
        };
        let evaluation = evaluation::evaluate(&model.graph, facts, &config)?;
        Ok((evaluation.hour, evaluation.labeling))
    }
}

fn prediction_warnings(prediction: &PredictionResult, cap: usize) -> Vec<String> {
    let mut warnings = Vec::new();
    if prediction.fallback {
        warnings.push("no total labeling exists; wrote the maximal partial labelings".to_string());
    }
    if prediction.truncated {
        warnings.push(format!("solution cap of {cap} reached; robust signs are approximate"));
    }
    warnings
}

pub fn predict(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let facts = load::merged_facts(&args.facts)?;
    let (hour, partial) = labeling(&model, &facts, args.hour)?;
    let config = prediction_config(&args.tuning);
    let prediction = prediction::predict(&model.graph, &partial, &config);
    write_facts(&args.out, "prediction.facts", prediction.to_facts(&model.graph))?;
    let mut log = RunLog::default();
    log.push_solutions(hour, &model.graph, &prediction);
    log.append_to(&args.out.join(RUN_LOG))?;
    println!(
        "hour {hour}: {} solutions, {} robust signs, objective {}",
        prediction.all_solutions.len(),
        prediction.robust.len(),
        prediction.optimal.objective()
    );
    warn(&prediction_warnings(&prediction, config.cap));
    if prediction.fallback {
        return Ok(ExitCode::from(FALLBACK_STATUS));
    }
    Ok(ExitCode::SUCCESS)
}

pub fn explain(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let facts = load::merged_facts(&args.facts)?;
    let choice = ClassChoice::parse(args.tuning.class.as_deref())?;
    let (_, partial) = labeling(&model, &facts, args.hour)?;
    let config = prediction_config(&args.tuning);
    let prediction = prediction::predict(&model.graph, &partial, &config);
    warn(&prediction_warnings(&prediction, config.cap));

    let mut explanation = Explanation {
        forest: ExplanationForest::default(),
        rejected: Default::default(),
        exhaustive: true,
    };
    for targets in choice.groups(&model.graph)? {
        if !targets.is_empty() {
            explanation.merge(explanation::explain(&model.graph, &prediction, &targets, &ExplainConfig::default()));
        }
    }
    if !explanation.exhaustive {
        warn(&["explanation budget exhausted; chains may not be minimal".to_string()]);
    }
    write_facts(&args.out, "explanation.facts", explanation.to_facts(&model.graph))?;
    let report = explanation.report(&model.graph, prediction.optimal.labeling());
    write_text(&args.out, "explanation.txt", &report)?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn require_policy(args: &CycleArgs) -> Result<PolicySet> {
    match &args.policy {
        Some(path) => load::policy(path),
        None => bail!("--policy is required for this command"),
    }
}

pub fn feedback(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let policy = require_policy(args)?;
    let facts = load::merged_facts(&args.facts)?;
    let mut pipeline = Pipeline::new(&model, &policy, pipeline_config(args.hour, &args.tuning));
    let outcome = pipeline.run_cycle(&facts)?;
    warn(&outcome.warnings);
    write_facts(&args.out, "decision.facts", outcome.decision.to_facts())?;
    let report = pipeline.render_report();
    write_text(&args.out, "report.txt", &report)?;
    let mut log = RunLog::default();
    log_cycle(&mut log, &model, &outcome);
    log.append_to(&args.out.join(RUN_LOG))?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

pub fn localize(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let facts = load::merged_facts(&args.facts)?;
    let found = track(&model.context.grid, &facts, &LocalizationConfig::default());
    for selection in found.selections.values() {
        println!(
            "t={}: ({},{}) by criterion {}",
            selection.time, selection.cell.0, selection.cell.1, selection.criterion
        );
    }
    write_facts(&args.out, "localization.facts", found.to_facts())?;
    Ok(ExitCode::SUCCESS)
}

pub fn report(args: &CycleArgs) -> Result<ExitCode> {
    let model = load::model(&args.model)?;
    let policy = require_policy(args)?;
    let cycles = args
        .facts
        .iter()
        .map(|path| load::facts(path))
        .collect::<Result<Vec<_>>>()?;
    let config = pipeline_config(args.hour, &args.tuning);
    day(&model, &policy, &cycles, config, &args.out, false)
}

pub fn run(args: &RunArgs) -> Result<ExitCode> {
    let day_files = load::day(&args.day)?;
    let model = load::model(&day_files.model)?;
    let policy = load::policy(&day_files.policy)?;
    let cycles = day_files
        .cycles
        .iter()
        .map(|path| load::facts(path))
        .collect::<Result<Vec<_>>>()?;
    let config = pipeline_config(None, &args.tuning);
    day(&model, &policy, &cycles, config, &args.out, true)
}

/// Runs the cycles in order and writes the day report. With `artifacts`,
/// each cycle's facts also go to `cycle-NN/`.
fn day(
    model: &Model,
    policy: &PolicySet,
    cycles: &[FactBase],
    config: PipelineConfig,
    out: &Path,
    artifacts: bool,
) -> Result<ExitCode> {
    let mut pipeline = Pipeline::new(model, policy, config);
    let mut log = RunLog::default();
    for (index, facts) in cycles.iter().enumerate() {
        let outcome = pipeline
            .run_cycle(facts)
            .with_context(|| format!("cycle {}", index + 1))?;
        for warning in &outcome.warnings {
            eprintln!("warning: cycle {} (hour {}): {warning}", index + 1, outcome.evaluation.hour);
        }
        log_cycle(&mut log, model, &outcome);
        if artifacts {
            let dir = out.join(format!("cycle-{:02}", index + 1));
            write_facts(&dir, "evaluation.facts", outcome.evaluation.to_facts(&model.graph).iter().cloned())?;
            write_facts(&dir, "prediction.facts", outcome.prediction.to_facts(&model.graph))?;
            write_facts(&dir, "explanation.facts", outcome.explanation.to_facts(&model.graph))?;
            write_facts(&dir, "decision.facts", outcome.decision.to_facts())?;
        }
    }
    let report = pipeline.render_report();
    write_text(out, "report.txt", &report)?;
    log.append_to(&out.join(RUN_LOG))?;
    print!("{report}");
    Ok(ExitCode::SUCCESS)
}

fn log_cycle(log: &mut RunLog, model: &Model, outcome: &CycleOutcome) {
    let hour = outcome.evaluation.hour;
    let graph = &model.graph;
    log.push_facts(hour, "labeling", outcome.evaluation.labeling.to_facts(graph).iter());
    log.push_solutions(hour, graph, &outcome.prediction);
    let robust: Vec<Fact> = outcome
        .prediction
        .to_facts(graph)
        .into_iter()
        .filter(|f| f.predicate == "ilab")
        .collect();
    log.push_facts(hour, "robust", robust.iter());
    log.push_facts(hour, "explanation", outcome.explanation.to_facts(graph).iter());
    log.push_facts(hour, "decision", outcome.decision.to_facts().iter());
    let reactions: Vec<Fact> = outcome.view.with_predicate("reaction").cloned().collect();
    log.push_facts(hour, "reaction", reactions.iter());
}
