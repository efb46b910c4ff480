use std::collections::BTreeSet;
use std::ops::Range;

use super::EvalError;
use crate::ingest::{Fact, FactBase, Term};
use crate::model::DependencyGraph;

/// A named night period and the cycle hours it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Period {
    pub name: String,
    pub hours: Range<i64>,
}

/// Which indicators the night-activity rules evaluate, and when.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SleepModel {
    /// Indicators linked to the sleep item, whatever the arc type.
    pub indicators: BTreeSet<String>,
    pub periods: Vec<Period>,
}

impl SleepModel {
    /// Periods `earlynight` (hours 22 and 23), `middlenight` (0 and 1) and
    /// `latenight` (2 to 4).
    pub fn default_periods() -> Vec<Period> {
        vec![
            Period {
                name: "earlynight".into(),
                hours: 22..24,
            },
            Period {
                name: "middlenight".into(),
                hours: 0..2,
            },
            Period {
                name: "latenight".into(),
                hours: 2..5,
            },
        ]
    }

    /// Sleep indicators are those with a link into the item named `sleep`.
    pub fn from_graph(graph: &DependencyGraph) -> SleepModel {
        SleepModel::for_item(graph, "sleep")
    }

    pub fn for_item(graph: &DependencyGraph, item: &str) -> SleepModel {
        let indicators = graph
            .item_id(item)
            .map(|id| {
                graph
                    .links_into(id)
                    .iter()
                    .map(|link| graph.indicator(link.source).name.clone())
                    .collect()
            })
            .unwrap_or_default();
        SleepModel {
            indicators,
            periods: SleepModel::default_periods(),
        }
    }

    /// Indicator evaluated at `hour`: a sleep indicator named after a period
    /// covering the hour.
    pub fn active_indicator(&self, hour: i64) -> Option<&str> {
        self.periods
            .iter()
            .filter(|p| p.hours.contains(&hour))
            .find(|p| self.indicators.contains(&p.name))
            .map(|p| p.name.as_str())
    }
}

/// Value assigned to the active period indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SleepValue {
    Ok,
    Mild,
    Moderate,
    Consistent,
}

impl SleepValue {
    pub fn as_str(self) -> &'static str {
        match self {
            SleepValue::Ok => "ok",
            SleepValue::Mild => "mild",
            SleepValue::Moderate => "moderate",
            SleepValue::Consistent => "consistent",
        }
    }
}

/// Every intermediate derivation of one night-activity evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SleepTrace {
    pub night: bool,
    pub times: BTreeSet<i64>,
    pub in_bed: BTreeSet<i64>,
    pub awake: BTreeSet<i64>,
    pub sleep_interrupt: BTreeSet<i64>,
    pub back_to_bed: BTreeSet<i64>,
    pub bad_sleep: BTreeSet<i64>,
    pub poss_early_awake: BTreeSet<i64>,
    pub n_early_awake: BTreeSet<i64>,
    pub period: Option<String>,
    pub value: Option<SleepValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SleepEvaluation {
    pub trace: SleepTrace,
    /// At most one `obsInd(S,V,0)`, for the period indicator active this hour.
    pub facts: Vec<Fact>,
}

fn is_bed_fact(fact: &Fact, attribute: &str) -> bool {
    fact.arity() == 4 && fact.sym(0) == Some(attribute) && fact.sym(1) == Some("bed")
}

/// Runs the night-activity rules for the cycle at `hour`.
///
/// The person is in bed at `T` when an `in_bed(T)` fact says so or the bed
/// mat reports a positive `filteredLoad`. The time line is every stamp seen
/// on `time`, `localized`, `in_bed` and `attribute_obj` facts.
pub fn evaluate_sleep(model: &SleepModel, facts: &FactBase, hour: i64) -> Result<SleepEvaluation, EvalError> {
    if !(0..24).contains(&hour) {
        return Err(EvalError::HourOutOfRange(hour));
    }
    let mut trace = SleepTrace {
        night: !(8..=21).contains(&hour),
        ..SleepTrace::default()
    };

    trace.in_bed.extend(facts.with_predicate("in_bed").filter_map(Fact::time));
    trace.in_bed.extend(
        facts
            .with_predicate("attribute_obj")
            .filter(|f| is_bed_fact(f, "filteredLoad") && f.int(2).is_some_and(|w| w > 0))
            .filter_map(Fact::time),
    );
    for predicate in ["time", "localized", "in_bed", "attribute_obj"] {
        trace.times.extend(facts.with_predicate(predicate).filter_map(Fact::time));
    }
    let localized: BTreeSet<i64> = facts.with_predicate("localized").filter_map(Fact::time).collect();

    // obsInd(S,V,1) for some sleep indicator S
    let previously = |value: &str| {
        facts
            .at_time("obsInd", 1)
            .any(|f| f.sym(1) == Some(value) && f.sym(0).is_some_and(|s| model.indicators.contains(s)))
    };
    let has_link = !model.indicators.is_empty();
    let (prev_ok, prev_mild, prev_moderate) = (previously("ok"), previously("mild"), previously("moderate"));

    let times = trace.times.clone();
    let in_bed = trace.in_bed.clone();

    if trace.night {
        trace.awake = times
            .iter()
            .copied()
            .filter(|t| !in_bed.contains(t) && localized.contains(t))
            .collect();
    }
    let awake = trace.awake.clone();

    trace.sleep_interrupt = awake
        .iter()
        .copied()
        .filter(|&t| in_bed.iter().any(|&t1| t1 < t) || (has_link && (prev_ok || prev_moderate)))
        .collect();
    let interrupt = trace.sleep_interrupt.clone();

    trace.back_to_bed = in_bed
        .iter()
        .copied()
        .filter(|&t| {
            let after_waking = has_link && prev_mild && awake.iter().any(|&t1| t1 < t);
            let after_interrupt = has_link
                && times.contains(&t)
                && interrupt
                    .iter()
                    .any(|&t0| awake.iter().any(|&t1| t0 < t1 && t1 < t && times.contains(&t1)));
            after_waking || after_interrupt
        })
        .collect();

    trace.bad_sleep = facts
        .with_predicate("attribute_obj")
        .filter(|f| is_bed_fact(f, "loadVolatility") && f.arg(2) != Some(&Term::sym("stable")))
        .filter_map(Fact::time)
        .filter(|t| in_bed.contains(t))
        .collect();

    let mut early: BTreeSet<i64> = interrupt
        .iter()
        .copied()
        .filter(|&t| times.iter().any(|&t1| t <= t1 && !in_bed.contains(&t1)))
        .collect();
    if has_link && prev_mild {
        early.extend(awake.iter().copied().filter(|t| times.contains(t)));
    }
    trace.poss_early_awake = early;
    trace.n_early_awake = trace
        .poss_early_awake
        .iter()
        .copied()
        .filter(|&t| trace.back_to_bed.iter().any(|&t1| t < t1 && times.contains(&t1)))
        .collect();

    let Some(indicator) = model.active_indicator(hour) else {
        return Ok(SleepEvaluation { trace, facts: Vec::new() });
    };
    trace.period = Some(indicator.to_string());

    let consistent = !times.is_empty()
        && trace
            .poss_early_awake
            .iter()
            .any(|t| !trace.n_early_awake.contains(t));
    let moderate = !consistent && trace.back_to_bed.iter().any(|t| times.contains(t));
    let mild = !consistent && !moderate && trace.bad_sleep.iter().any(|t| times.contains(t));
    let prev_ok_here = facts
        .at_time("obsInd", 1)
        .any(|f| f.sym(0) == Some(indicator) && f.sym(1) == Some("ok"));
    let ok = !consistent
        && !moderate
        && !mild
        && prev_ok_here
        && times
            .iter()
            .any(|&t1| !interrupt.contains(&t1) && in_bed.iter().any(|&t| t != t1));

    trace.value = if consistent {
        Some(SleepValue::Consistent)
    } else if moderate {
        Some(SleepValue::Moderate)
    } else if mild {
        Some(SleepValue::Mild)
    } else if ok {
        Some(SleepValue::Ok)
    } else {
        None
    };
    let facts = trace
        .value
        .map(|v| Fact::new("obsInd", [Term::sym(indicator), Term::sym(v.as_str()), Term::Int(0)]))
        .into_iter()
        .collect();
    Ok(SleepEvaluation { trace, facts })
}
