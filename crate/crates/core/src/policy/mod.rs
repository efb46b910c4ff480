//! Feedback policies.
//!
//! A policy declares feedback outputs with the forms each may take, rules
//! that make a form a candidate, preferences between forms, event-condition-
//! action rules and pairs of conflicting actions. Each cycle the engine picks
//! one form per triggered output, fires the actions and schedules prompts.

mod parse;
mod report;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use parse::parse_policy;
pub use report::DayReport;

use crate::error::Position;
use crate::ingest::{is_known_predicate, Fact, FactBase, ParseError, Term};
use crate::model::Scale;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FeedbackForm {
    Suggestion,
    Alert,
    Alarm,
    Notification,
    Reminder,
}

impl FeedbackForm {
    pub const ALL: [FeedbackForm; 5] = [
        FeedbackForm::Suggestion,
        FeedbackForm::Alert,
        FeedbackForm::Alarm,
        FeedbackForm::Notification,
        FeedbackForm::Reminder,
    ];

    /// Built-in order, most urgent first.
    pub const DEFAULT_ORDER: [FeedbackForm; 5] = [
        FeedbackForm::Alarm,
        FeedbackForm::Alert,
        FeedbackForm::Reminder,
        FeedbackForm::Notification,
        FeedbackForm::Suggestion,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FeedbackForm::Suggestion => "S",
            FeedbackForm::Alert => "A",
            FeedbackForm::Alarm => "AA",
            FeedbackForm::Notification => "N",
            FeedbackForm::Reminder => "R",
        }
    }

    pub fn from_code(code: &str) -> Option<FeedbackForm> {
        FeedbackForm::ALL.into_iter().find(|f| f.code() == code)
    }

    pub fn word(self) -> &'static str {
        match self {
            FeedbackForm::Suggestion => "suggestion",
            FeedbackForm::Alert => "alert",
            FeedbackForm::Alarm => "alarm",
            FeedbackForm::Notification => "notification",
            FeedbackForm::Reminder => "reminder",
        }
    }

    pub fn from_word(word: &str) -> Option<FeedbackForm> {
        FeedbackForm::ALL.into_iter().find(|f| f.word() == word)
    }

    /// When a prompt in this form is delivered. Rules firing on the chosen
    /// form can make it more urgent, never less.
    pub fn default_time(self) -> PromptTime {
        match self {
            FeedbackForm::Alarm | FeedbackForm::Alert | FeedbackForm::Reminder => PromptTime::Immediate,
            FeedbackForm::Suggestion | FeedbackForm::Notification => PromptTime::EndOfDay,
        }
    }
}

impl fmt::Display for FeedbackForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.word())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Channel {
    Audio,
    Video,
}

impl Channel {
    pub fn as_str(self) -> &'static str {
        match self {
            Channel::Audio => "audio",
            Channel::Video => "video",
        }
    }
}

/// Ordered most urgent first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PromptTime {
    Immediate,
    EndOfDay,
}

impl PromptTime {
    pub fn as_str(self) -> &'static str {
        match self {
            PromptTime::Immediate => "immediate",
            PromptTime::EndOfDay => "endOfDay",
        }
    }
}

/// Statement number (1-based) and where it starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct RuleId {
    pub index: usize,
    pub position: Position,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {} at {}", self.index, self.position)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackOutput {
    pub name: String,
    pub forms: BTreeSet<FeedbackForm>,
    /// The system action associated with the output.
    pub action: String,
    pub channel: Channel,
    /// Observed actions that count as a reaction to this output.
    pub reactions: BTreeSet<String>,
    pub declared: RuleId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Above,
    AtLeast,
    Below,
    AtMost,
    Differs,
}

impl Comparison {
    fn holds(self, ordering: Ordering) -> bool {
        match self {
            Comparison::Above => ordering == Ordering::Greater,
            Comparison::AtLeast => ordering != Ordering::Less,
            Comparison::Below => ordering == Ordering::Less,
            Comparison::AtMost => ordering != Ordering::Greater,
            Comparison::Differs => ordering != Ordering::Equal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArgPattern {
    Any,
    Equal(Term),
    /// Integers compare numerically; symbols compare by rank on a built-in
    /// scale that contains both words.
    Compare(Comparison, Term),
}

impl ArgPattern {
    fn matches(&self, value: &Term) -> bool {
        match self {
            ArgPattern::Any => true,
            ArgPattern::Equal(expected) => expected == value,
            ArgPattern::Compare(op, bound) => compare(value, bound).is_some_and(|o| op.holds(o)),
        }
    }
}

fn compare(value: &Term, bound: &Term) -> Option<Ordering> {
    match (value, bound) {
        (Term::Int(a), Term::Int(b)) => Some(a.cmp(b)),
        (Term::Sym(a), Term::Sym(b)) => [Scale::severity(), Scale::disability(), Scale::dependency()]
            .iter()
            .find_map(|scale| Some(scale.rank(a)?.cmp(&scale.rank(b)?))),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    pub predicate: String,
    pub args: Vec<ArgPattern>,
    pub position: Position,
}

impl Pattern {
    fn matches(&self, fact: &Fact) -> bool {
        fact.arity() == self.args.len() && self.args.iter().zip(&fact.args).all(|(p, v)| p.matches(v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Literal {
    pub negated: bool,
    pub pattern: Pattern,
}

/// Conjunction of literals; empty means true.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Condition(pub Vec<Literal>);

impl Condition {
    pub fn holds(&self, view: &FactBase) -> bool {
        self.0.iter().all(|literal| {
            let found = view
                .with_predicate(&literal.pattern.predicate)
                .any(|fact| literal.pattern.matches(fact));
            found != literal.negated
        })
    }

    fn patterns(&self) -> impl Iterator<Item = &Pattern> {
        self.0.iter().map(|l| &l.pattern)
    }
}

/// Makes `form` a candidate for `output` when the condition holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trigger {
    pub id: RuleId,
    pub output: String,
    pub form: FeedbackForm,
    pub when: Condition,
}

/// `better` ranks above `worse`, for one output or all of them, except while
/// `unless` holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preference {
    pub id: RuleId,
    pub better: FeedbackForm,
    pub worse: FeedbackForm,
    pub output: Option<String>,
    pub unless: Option<Condition>,
}

impl Preference {
    fn applies_to(&self, output: &str) -> bool {
        self.output.as_deref().map_or(true, |o| o == output)
    }
}

/// What an event-condition-action rule reacts to. `None` fields match
/// anything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Event {
    Feedback {
        output: Option<String>,
        form: Option<FeedbackForm>,
    },
    Observed {
        action: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eca {
    pub id: RuleId,
    pub event: Event,
    pub when: Condition,
    pub action: String,
    pub time: PromptTime,
}

/// Two system actions that must not both be performed in one cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub id: RuleId,
    pub first: String,
    pub second: String,
}

/// The kinds of rule a policy is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    EventTriggering,
    /// An output declaration: exactly one of its forms per cycle.
    Choice,
    DefaultOrdering,
    Exception,
    Eca,
    Consistency,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolicySet {
    pub outputs: BTreeMap<String, FeedbackOutput>,
    pub triggers: Vec<Trigger>,
    pub preferences: Vec<Preference>,
    pub ecas: Vec<Eca>,
    pub conflicts: Vec<Conflict>,
    /// Static order used to break ties, most urgent first.
    pub order: Vec<FeedbackForm>,
}

impl Default for PolicySet {
    fn default() -> Self {
        PolicySet {
            outputs: BTreeMap::new(),
            triggers: Vec::new(),
            preferences: Vec::new(),
            ecas: Vec::new(),
            conflicts: Vec::new(),
            order: FeedbackForm::DEFAULT_ORDER.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{position}: unknown feedback form `{code}`")]
    UnknownForm { position: Position, code: String },
    #[error("{position}: output `{name}` is not declared")]
    UndeclaredOutput { position: Position, name: String },
    #[error("{position}: output `{output}` cannot take the form {form}")]
    FormNotPossible {
        position: Position,
        output: String,
        form: FeedbackForm,
    },
    #[error("{position}: output `{name}` is declared twice")]
    DuplicateOutput { position: Position, name: String },
    #[error("{position}: `order` must list each of AA, A, R, N, S once")]
    BadOrder { position: Position },
    #[error("unconditional preferences form a cycle through {}", forms_list(.forms))]
    PreferenceCycle { forms: Vec<FeedbackForm> },
}

fn forms_list(forms: &[FeedbackForm]) -> String {
    forms.iter().map(|f| f.code()).collect::<Vec<_>>().join(", ")
}

/// Errors raised while running a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("{rule}: unknown predicate {predicate}/{arity} in condition")]
    UnknownPredicate {
        rule: RuleId,
        predicate: String,
        arity: usize,
    },
    #[error("active preferences for `{output}` form a cycle through {}", forms_list(.forms))]
    PreferenceCycle { output: String, forms: Vec<FeedbackForm> },
}

impl PolicySet {
    pub fn kind_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts = BTreeMap::new();
        let mut add = |kind: RuleKind| {
            let name = match kind {
                RuleKind::EventTriggering => "event_triggering",
                RuleKind::Choice => "choice",
                RuleKind::DefaultOrdering => "default_ordering",
                RuleKind::Exception => "exception",
                RuleKind::Eca => "eca",
                RuleKind::Consistency => "consistency",
            };
            *counts.entry(name).or_insert(0) += 1;
        };
        self.outputs.values().for_each(|_| add(RuleKind::Choice));
        self.triggers.iter().for_each(|_| add(RuleKind::EventTriggering));
        for p in &self.preferences {
            add(if p.unless.is_some() {
                RuleKind::Exception
            } else {
                RuleKind::DefaultOrdering
            });
        }
        self.ecas.iter().for_each(|_| add(RuleKind::Eca));
        self.conflicts.iter().for_each(|_| add(RuleKind::Consistency));
        counts
    }

    fn output(&self, name: &str, position: Position) -> Result<&FeedbackOutput, PolicyError> {
        self.outputs.get(name).ok_or_else(|| PolicyError::UndeclaredOutput {
            position,
            name: name.to_string(),
        })
    }

    fn possible(&self, output: &str, form: FeedbackForm, position: Position) -> Result<(), PolicyError> {
        if self.output(output, position)?.forms.contains(&form) {
            Ok(())
        } else {
            Err(PolicyError::FormNotPossible {
                position,
                output: output.to_string(),
                form,
            })
        }
    }

    /// Load-time checks: every referenced output is declared, every form is
    /// possible for its output, and unconditional preferences are acyclic.
    fn check(&self) -> Result<(), PolicyError> {
        for trigger in &self.triggers {
            self.possible(&trigger.output, trigger.form, trigger.id.position)?;
        }
        for preference in &self.preferences {
            if let Some(output) = &preference.output {
                self.output(output, preference.id.position)?;
            }
        }
        for eca in &self.ecas {
            if let Event::Feedback { output: Some(output), form } = &eca.event {
                match form {
                    Some(form) => self.possible(output, *form, eca.id.position)?,
                    None => self.output(output, eca.id.position).map(|_| ())?,
                }
            }
        }
        let fixed = |p: &&Preference| p.unless.is_none();
        let global: Vec<&Preference> = self.preferences.iter().filter(fixed).filter(|p| p.output.is_none()).collect();
        if let Some(forms) = preference_cycle(&global) {
            return Err(PolicyError::PreferenceCycle { forms });
        }
        for name in self.outputs.keys() {
            let scoped: Vec<&Preference> = self.preferences.iter().filter(fixed).filter(|p| p.applies_to(name)).collect();
            if let Some(forms) = preference_cycle(&scoped) {
                return Err(PolicyError::PreferenceCycle { forms });
            }
        }
        Ok(())
    }

    /// Every condition in the policy, with the rule it belongs to.
    fn conditions(&self) -> Vec<(RuleId, &Condition)> {
        let mut all: Vec<(RuleId, &Condition)> = self.triggers.iter().map(|t| (t.id, &t.when)).collect();
        all.extend(self.preferences.iter().filter_map(|p| p.unless.as_ref().map(|c| (p.id, c))));
        all.extend(self.ecas.iter().map(|e| (e.id, &e.when)));
        all
    }

    fn rank(&self, form: FeedbackForm) -> usize {
        self.order.iter().position(|&f| f == form).expect("order lists every form")
    }

    /// Forms in the effective order for `output`, most preferred first: a
    /// linear extension of the active preferences that follows the static
    /// order wherever they leave a choice.
    pub fn effective_order(&self, output: &str, view: &FactBase) -> Result<Vec<FeedbackForm>, StepError> {
        let active: Vec<&Preference> = self
            .preferences
            .iter()
            .filter(|p| p.applies_to(output) && !p.unless.as_ref().is_some_and(|c| c.holds(view)))
            .collect();
        let mut placed: Vec<FeedbackForm> = Vec::new();
        let mut left: Vec<FeedbackForm> = self.order.clone();
        while !left.is_empty() {
            let next = left.iter().copied().find(|&f| {
                !active
                    .iter()
                    .any(|p| p.worse == f && p.better != f && left.contains(&p.better))
            });
            let Some(next) = next else {
                return Err(StepError::PreferenceCycle {
                    output: output.to_string(),
                    forms: left,
                });
            };
            placed.push(next);
            left.retain(|&f| f != next);
        }
        Ok(placed)
    }

    /// Rejects conditions over predicates outside the fact vocabulary.
    pub fn check_vocabulary(&self) -> Result<(), StepError> {
        for (rule, condition) in self.conditions() {
            for pattern in condition.patterns() {
                if !is_known_predicate(&pattern.predicate, pattern.args.len()) {
                    return Err(StepError::UnknownPredicate {
                        rule,
                        predicate: pattern.predicate.clone(),
                        arity: pattern.args.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Forms on a cycle of `better over worse` edges, if any.
fn preference_cycle(preferences: &[&Preference]) -> Option<Vec<FeedbackForm>> {
    let mut left: BTreeSet<FeedbackForm> = FeedbackForm::ALL.into_iter().collect();
    loop {
        let free = left
            .iter()
            .copied()
            .find(|&f| !preferences.iter().any(|p| p.worse == f && left.contains(&p.better)));
        match free {
            Some(f) => {
                left.remove(&f);
            }
            None if left.is_empty() => return None,
            None => return Some(left.into_iter().collect()),
        }
    }
}

/// What set off a system action.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActionCause {
    Feedback { output: String, form: FeedbackForm },
    Observed { action: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemAction {
    pub rule: RuleId,
    pub cause: ActionCause,
    pub action: String,
    pub time: PromptTime,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    pub output: String,
    pub form: FeedbackForm,
    pub channel: Channel,
    pub time: PromptTime,
}

/// Everything the engine decided in one cycle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Decision {
    pub time: i64,
    /// Chosen form per output.
    pub forms: BTreeMap<String, FeedbackForm>,
    /// Every form that was triggered, per output.
    pub candidates: BTreeMap<String, BTreeSet<FeedbackForm>>,
    pub actions: Vec<SystemAction>,
    /// Actions dropped because they conflict with a preferred one.
    pub suppressed: Vec<SystemAction>,
    pub prompts: Vec<Prompt>,
}

impl Decision {
    pub fn is_empty(&self) -> bool {
        self.forms.is_empty() && self.actions.is_empty()
    }

    /// `feedback_form`, `do_action` and `do_prompt` facts. Actions set off by
    /// an observed action read `do_action(Observed,observed,Action)`.
    pub fn to_facts(&self) -> Vec<Fact> {
        let mut facts = Vec::new();
        for (output, form) in &self.forms {
            facts.push(Fact::new("feedback_form", [Term::sym(output.as_str()), Term::sym(form.word())]));
        }
        for action in &self.actions {
            let (first, second) = match &action.cause {
                ActionCause::Feedback { output, form } => (output.as_str(), form.word()),
                ActionCause::Observed { action } => (action.as_str(), "observed"),
            };
            facts.push(Fact::new(
                "do_action",
                [Term::sym(first), Term::sym(second), Term::sym(action.action.as_str())],
            ));
        }
        for prompt in &self.prompts {
            facts.push(Fact::new(
                "do_prompt",
                [
                    Term::sym(prompt.output.as_str()),
                    Term::sym(prompt.form.word()),
                    Term::sym(prompt.channel.as_str()),
                    Term::sym(prompt.time.as_str()),
                ],
            ));
        }
        facts
    }
}

/// Orders two conflicting actions; the greater one is kept.
pub type ActionPreference = fn(&PolicySet, &SystemAction, &SystemAction) -> Ordering;

/// Keeps the more urgent action: immediate before end of day, then the more
/// urgent feedback form (observed causes count as most urgent), then the
/// smaller action name.
pub fn by_urgency(policy: &PolicySet, a: &SystemAction, b: &SystemAction) -> Ordering {
    let form_rank = |action: &SystemAction| match &action.cause {
        ActionCause::Feedback { form, .. } => policy.rank(*form) + 1,
        ActionCause::Observed { .. } => 0,
    };
    b.time
        .cmp(&a.time)
        .then_with(|| form_rank(b).cmp(&form_rank(a)))
        .then_with(|| b.action.cmp(&a.action))
}

/// Runs one cycle over `view`, the facts available to conditions: the
/// cycle's observations, evaluation and prediction results, explanation arcs
/// and logged reactions. `time` stamps the decision.
pub fn step(policy: &PolicySet, view: &FactBase, time: i64) -> Result<Decision, StepError> {
    step_with(policy, view, time, by_urgency)
}

pub fn step_with(policy: &PolicySet, view: &FactBase, time: i64, prefer: ActionPreference) -> Result<Decision, StepError> {
    policy.check_vocabulary()?;
    let mut decision = Decision {
        time,
        ..Decision::default()
    };
    for trigger in &policy.triggers {
        if trigger.when.holds(view) {
            decision
                .candidates
                .entry(trigger.output.clone())
                .or_default()
                .insert(trigger.form);
        }
    }
    for (output, candidates) in &decision.candidates {
        let order = policy.effective_order(output, view)?;
        let chosen = order
            .into_iter()
            .find(|f| candidates.contains(f))
            .expect("candidates are nonempty");
        decision.forms.insert(output.clone(), chosen);
    }

    let mut actions: Vec<SystemAction> = Vec::new();
    let mut prompt_time: BTreeMap<&str, PromptTime> = BTreeMap::new();
    for eca in &policy.ecas {
        match &eca.event {
            Event::Feedback { output, form } => {
                for (name, &chosen) in &decision.forms {
                    let fits = output.as_ref().map_or(true, |o| o == name) && form.map_or(true, |f| f == chosen);
                    if fits && eca.when.holds(view) {
                        actions.push(SystemAction {
                            rule: eca.id,
                            cause: ActionCause::Feedback {
                                output: name.clone(),
                                form: chosen,
                            },
                            action: eca.action.clone(),
                            time: eca.time,
                        });
                        let slot = prompt_time.entry(name.as_str()).or_insert(eca.time);
                        *slot = (*slot).min(eca.time);
                    }
                }
            }
            Event::Observed { action } => {
                let observed: BTreeSet<&str> = view
                    .with_predicate("action_observed")
                    .filter(|f| f.arity() == 2)
                    .filter_map(|f| f.sym(0))
                    .filter(|a| action.as_deref().map_or(true, |wanted| wanted == *a))
                    .collect();
                for name in observed {
                    if eca.when.holds(view) {
                        actions.push(SystemAction {
                            rule: eca.id,
                            cause: ActionCause::Observed {
                                action: name.to_string(),
                            },
                            action: eca.action.clone(),
                            time: eca.time,
                        });
                    }
                }
            }
        }
    }
    actions.sort_by(|a, b| (&a.cause, &a.action, a.rule).cmp(&(&b.cause, &b.action, b.rule)));
    actions.dedup_by(|a, b| a.cause == b.cause && a.action == b.action);

    // Drop the less preferred side of every conflicting pair that is present.
    let mut dropped = vec![false; actions.len()];
    for conflict in &policy.conflicts {
        for i in 0..actions.len() {
            for j in 0..actions.len() {
                if dropped[i] || dropped[j] || actions[i].action != conflict.first || actions[j].action != conflict.second {
                    continue;
                }
                let loser = if prefer(policy, &actions[i], &actions[j]) == Ordering::Less { i } else { j };
                dropped[loser] = true;
            }
        }
    }
    for (action, dropped) in actions.into_iter().zip(dropped) {
        if dropped {
            decision.suppressed.push(action);
        } else {
            decision.actions.push(action);
        }
    }

    for (output, &form) in &decision.forms {
        let declared = &policy.outputs[output];
        decision.prompts.push(Prompt {
            output: output.clone(),
            form,
            channel: declared.channel,
            time: prompt_time.get(output.as_str()).map_or(form.default_time(), |&t| t.min(form.default_time())),
        });
    }
    Ok(decision)
}

/// A person's action observed after feedback was given.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ReactionEntry {
    pub output: String,
    pub form: FeedbackForm,
    pub action: String,
    pub time: i64,
}

impl ReactionEntry {
    pub fn to_fact(&self) -> Fact {
        Fact::new(
            "reaction",
            [
                Term::sym(self.output.as_str()),
                Term::sym(self.form.word()),
                Term::sym(self.action.as_str()),
                Term::Int(self.time),
            ],
        )
    }
}

/// Reactions to `decision` among the `action_observed(A,T)` facts: actions
/// declared as reactions of a chosen output, observed no earlier than the
/// decision.
pub fn log_reaction(policy: &PolicySet, decision: &Decision, observed: &FactBase) -> Vec<ReactionEntry> {
    let mut entries = Vec::new();
    for fact in observed.with_predicate("action_observed").filter(|f| f.arity() == 2) {
        let (Some(action), Some(time)) = (fact.sym(0), fact.int(1)) else { continue };
        if time < decision.time {
            continue;
        }
        for (output, &form) in &decision.forms {
            if policy.outputs[output].reactions.contains(action) {
                entries.push(ReactionEntry {
                    output: output.clone(),
                    form,
                    action: action.to_string(),
                    time,
                });
            }
        }
    }
    entries.sort();
    entries.dedup();
    entries
}

/// Append-only record of reactions across cycles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReactionLog {
    entries: Vec<ReactionEntry>,
}

impl ReactionLog {
    /// Appends entries not already recorded.
    pub fn record(&mut self, entries: impl IntoIterator<Item = ReactionEntry>) {
        for entry in entries {
            if !self.entries.contains(&entry) {
                self.entries.push(entry);
            }
        }
    }

    pub fn entries(&self) -> &[ReactionEntry] {
        &self.entries
    }

    pub fn to_facts(&self) -> Vec<Fact> {
        self.entries.iter().map(ReactionEntry::to_fact).collect()
    }
}
