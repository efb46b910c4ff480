use std::collections::{BTreeMap, BTreeSet};

use healthgraph::evaluation::{evaluate, EvaluationConfig, SleepTrace};
use healthgraph::{parse_facts, parse_model, Sign};

const MODEL: &str = include_str!("../../../fixtures/sleep/sleep.model");

/// Night traces with their rule derivations worked out by hand.
const NIGHTS: [(&str, &str, &str); 3] = [
    (
        "uninterrupted",
        include_str!("../../../fixtures/sleep/uninterrupted.facts"),
        include_str!("../../../fixtures/sleep/uninterrupted.trace"),
    ),
    (
        "volatile",
        include_str!("../../../fixtures/sleep/volatile.facts"),
        include_str!("../../../fixtures/sleep/volatile.trace"),
    ),
    (
        "wake_return",
        include_str!("../../../fixtures/sleep/wake_return.facts"),
        include_str!("../../../fixtures/sleep/wake_return.trace"),
    ),
];

fn read_trace(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|line| line.split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

fn times(set: &BTreeSet<i64>) -> String {
    set.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn render(trace: &SleepTrace) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("night".into(), trace.night.to_string()),
        ("times".into(), times(&trace.times)),
        ("in_bed".into(), times(&trace.in_bed)),
        ("awake".into(), times(&trace.awake)),
        ("sleep_interrupt".into(), times(&trace.sleep_interrupt)),
        ("back_to_bed".into(), times(&trace.back_to_bed)),
        ("bad_sleep".into(), times(&trace.bad_sleep)),
        ("poss_early_awake".into(), times(&trace.poss_early_awake)),
        ("n_early_awake".into(), times(&trace.n_early_awake)),
        ("period".into(), trace.period.clone().unwrap_or_default()),
        ("value".into(), trace.value.map(|v| v.as_str().to_string()).unwrap_or_default()),
    ])
}

#[test]
fn night_traces_match_hand_derivations() {
    let model = parse_model(MODEL).unwrap();
    for (name, facts, expected) in NIGHTS {
        let facts = parse_facts(facts).unwrap();
        let evaluation = evaluate(&model.graph, &facts, &EvaluationConfig::default()).unwrap();
        assert_eq!(render(&evaluation.sleep.trace), read_trace(expected), "{name}");
    }
}

/// The derived value feeds the sleep item: ok stays equal, mild and
/// moderate after an ok hour are worse.
#[test]
fn night_values_reach_the_sleep_item() {
    let model = parse_model(MODEL).unwrap();
    let sleep = model.graph.item_id("sleep").unwrap();
    let expected = [Sign::Zero, Sign::Minus, Sign::Minus];
    for ((name, facts, _), sign) in NIGHTS.into_iter().zip(expected) {
        let facts = parse_facts(facts).unwrap();
        let evaluation = evaluate(&model.graph, &facts, &EvaluationConfig::default()).unwrap();
        assert_eq!(evaluation.labeling.sign(sleep), sign, "{name}");
    }
}
