use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use healthgraph::parse_facts;
use tempfile::TempDir;

fn fixture(path: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

fn healthgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_healthgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Model with `c` guessed from `a` through a `pos` arc.
fn tiny(dir: &Path, facts: &str) -> (PathBuf, PathBuf) {
    let model = dir.join("tiny.model");
    fs::write(&model, "item(a,state).\nitem(c,state).\ninfluence(pos,a,c).\n").unwrap();
    let path = dir.join("cycle.facts");
    fs::write(&path, facts).unwrap();
    (model, path)
}

#[test]
fn eve_day_writes_the_expected_report() {
    let out = TempDir::new().unwrap();
    let result = healthgraph(&["run", "--day", s(&fixture("eve")), "--out", s(out.path())]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    assert_eq!(read(&out.path().join("report.txt")), read(&fixture("eve/report.txt")));
    for cycle in ["cycle-01", "cycle-02", "cycle-03"] {
        for name in ["evaluation.facts", "prediction.facts", "explanation.facts", "decision.facts"] {
            parse_facts(&read(&out.path().join(cycle).join(name))).unwrap();
        }
    }
    let decision = parse_facts(&read(&out.path().join("cycle-03/decision.facts"))).unwrap();
    assert!(decision
        .iter()
        .any(|f| f.to_string() == "feedback_form(do_not_walk_in_the_dark,alert)."));
    let log = read(&out.path().join("run.log"));
    assert!(log.lines().all(|l| l.starts_with("entry(")));
    assert!(log.contains("entry(12,reaction,reaction(keep_active,suggestion,more_active,12))."));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let first = TempDir::new().unwrap();
    let second = TempDir::new().unwrap();
    for out in [&first, &second] {
        let result = healthgraph(&["run", "--day", s(&fixture("eve")), "--out", s(out.path())]);
        assert!(result.status.success());
    }
    for name in ["report.txt", "run.log", "cycle-02/prediction.facts", "cycle-03/decision.facts"] {
        assert_eq!(read(&first.path().join(name)), read(&second.path().join(name)), "{name}");
    }
}

#[test]
fn report_takes_one_facts_file_per_cycle() {
    let out = TempDir::new().unwrap();
    let mut args = vec![
        "report".to_string(),
        "--model".into(),
        fixture("eve/eve.model").display().to_string(),
        "--policy".into(),
        fixture("eve/eve.policy").display().to_string(),
        "--out".into(),
        out.path().display().to_string(),
    ];
    for cycle in ["cycle1", "cycle2", "cycle3"] {
        args.push("--facts".into());
        args.push(fixture(&format!("eve/{cycle}.facts")).display().to_string());
    }
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let result = healthgraph(&args);
    assert!(result.status.success());
    assert_eq!(read(&out.path().join("report.txt")), read(&fixture("eve/report.txt")));
}

#[test]
fn localize_matches_the_hand_trace() {
    let out = TempDir::new().unwrap();
    let result = healthgraph(&[
        "localize",
        "--model",
        s(&fixture("localize/home.model")),
        "--facts",
        s(&fixture("localize/readings.facts")),
        "--out",
        s(out.path()),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let got = parse_facts(&read(&out.path().join("localization.facts"))).unwrap();
    let expected = parse_facts(&read(&fixture("localize/expected.facts"))).unwrap();
    assert_eq!(got, expected);
}

#[test]
fn predict_reads_what_evaluate_writes() {
    let out = TempDir::new().unwrap();
    let model = fixture("eve/eve.model");
    let raw = fixture("eve/cycle2.facts");
    let evaluated = healthgraph(&["evaluate", "--model", s(&model), "--facts", s(&raw), "--out", s(out.path())]);
    assert!(evaluated.status.success());
    let chained = out.path().join("chained");
    let direct = out.path().join("direct");
    let evaluation = out.path().join("evaluation.facts");
    for (input, dir) in [(&evaluation, &chained), (&raw, &direct)] {
        let result = healthgraph(&["predict", "--model", s(&model), "--facts", s(input), "--out", s(dir)]);
        assert!(result.status.success());
    }
    assert_eq!(read(&chained.join("prediction.facts")), read(&direct.join("prediction.facts")));
    assert_eq!(read(&chained.join("run.log")), read(&direct.join("run.log")));
}

#[test]
fn nothing_to_guess_gives_one_trivial_solution() {
    let dir = TempDir::new().unwrap();
    let (model, facts) = tiny(dir.path(), "hour(5).\ndiff_item(state,a,worse,5).\ndiff_item(state,c,worse,5).\n");
    let out = dir.path().join("out");
    let result = healthgraph(&["predict", "--model", s(&model), "--facts", s(&facts), "--out", s(&out)]);
    assert!(result.status.success());
    assert_eq!(read(&out.join("run.log")), "entry(5,solution,solution(0,0,a(-1),c(-1))).\n");
}

#[test]
fn inconsistent_observations_still_write_results() {
    let dir = TempDir::new().unwrap();
    // `pos` carries no worsening, so nothing can support a sign for c.
    let (model, facts) = tiny(dir.path(), "hour(5).\ndiff_item(state,a,worse,5).\nto_guess(state,c).\n");
    let out = dir.path().join("out");
    let result = healthgraph(&["predict", "--model", s(&model), "--facts", s(&facts), "--out", s(&out)]);
    assert_eq!(result.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&result.stderr).contains("no total labeling"));
    let prediction = read(&out.join("prediction.facts"));
    assert!(prediction.contains("label(a,-1,observed)."));
    assert!(prediction.contains("label(c,unknown,guessed)."));
    assert!(read(&out.join("run.log")).contains("entry(5,fallback,maximal_partial)."));
}

#[test]
fn explain_limits_targets_to_the_chosen_items() {
    let dir = TempDir::new().unwrap();
    let list = dir.path().join("targets.txt");
    fs::write(&list, "dress\n").unwrap();
    let class = format!("custom:{}", list.display());
    let model = fixture("eve/eve.model");
    let facts = fixture("eve/cycle2.facts");
    let custom = healthgraph(&["explain", "--model", s(&model), "--facts", s(&facts), "--class", &class, "--out", s(dir.path())]);
    assert!(custom.status.success(), "{}", String::from_utf8_lossy(&custom.stderr));
    let arcs = parse_facts(&read(&dir.path().join("explanation.facts"))).unwrap();
    assert!(arcs.iter().all(|f| f.sym(0) == Some("dress")));
    assert!(arcs.iter().any(|f| f.to_string() == "expl_arc(dress,balance,dress,neg)."));

    let risk = healthgraph(&["explain", "--model", s(&model), "--facts", s(&facts), "--class", "risk", "--out", s(dir.path())]);
    assert!(risk.status.success());
    assert_eq!(String::from_utf8_lossy(&risk.stdout), "fall [-]\n  vision -(neg)-> fall [-]\n");
}

#[test]
fn bad_input_fails_with_a_position() {
    let dir = TempDir::new().unwrap();
    let (model, facts) = tiny(dir.path(), "hour(5).\nobsInd(x,1\n");
    let result = healthgraph(&["evaluate", "--model", s(&model), "--facts", s(&facts), "--out", s(dir.path())]);
    assert!(!result.status.success());
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("cycle.facts: 3:1:"), "{stderr}");

    let result = healthgraph(&["evaluate", "--model", s(&model), "--facts", s(&facts), "--hour", "24"]);
    assert!(!result.status.success());
    let result = healthgraph(&["feedback", "--model", s(&model), "--facts", s(&facts)]);
    assert!(!result.status.success());
}
