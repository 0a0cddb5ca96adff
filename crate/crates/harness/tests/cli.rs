use std::path::PathBuf;
use std::process::{Command, Output};

use multilearn::fingerprint::attack_experiment;
use multilearn_harness::{ExperimentKind, Params, Setup};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multilearn")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

#[test]
fn experiment_reports_match_golden_files() {
    for (config, expected) in [
        ("adist_sweep.toml", "adist_sweep.expected.csv"),
        ("parity_sweep.toml", "parity_sweep.expected.csv"),
    ] {
        let path = fixture(config);
        for threads in ["1", "3"] {
            let out = run(&["--threads", threads, "experiment", "run", "--config", path.to_str().unwrap()]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            assert_eq!(stdout(&out), golden(expected), "{config} with {threads} threads");
        }
    }
}

#[test]
fn sanitizer_output_matches_golden_file() {
    let input = fixture("points_db.txt");
    let args = ["--seed", "1", "sanitize", "points", "--alpha", "0.2", "--epsilon", "1", "--delta", "0.01", "--input"];
    let out = run(&[&args[..], &[input.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), golden("points_db.expected.csv"));
}

#[test]
fn seed_flag_overrides_config_and_json_parses() {
    let path = fixture("parity_sweep.toml");
    let config = path.to_str().unwrap();
    let a = run(&["--seed", "4", "--format", "json", "experiment", "run", "--config", config]);
    let b = run(&["--seed", "4", "--format", "json", "experiment", "run", "--config", config]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let report = multilearn_harness::TrialReport::parse(&stdout(&a), multilearn_harness::Format::Json).unwrap();
    assert_eq!(report.summary.len(), 3);
    assert_eq!(report.rows.len(), 0);
}

#[test]
fn rows_flag_writes_per_trial_csv() {
    let dir = std::env::temp_dir().join(format!("multilearn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rows = dir.join("rows.csv");
    let summary = dir.join("summary.csv");
    let path = fixture("adist_sweep.toml");
    let out = run(&[
        "--out",
        summary.to_str().unwrap(),
        "experiment",
        "run",
        "--config",
        path.to_str().unwrap(),
        "--rows",
        rows.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&summary).unwrap(), golden("adist_sweep.expected.csv"));
    let text = std::fs::read_to_string(&rows).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("point,trial,success"));
    assert_eq!(lines.count(), 5 * 200);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn attack_command_matches_library_experiment() {
    let out = run(&["--seed", "17", "attack", "boneh-shaw", "--n", "4", "--xi", "0.1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let params = Params { n: Some(4), xi: Some(0.1), ..Params::default() };
    let Setup::Attack { learner, cfg } = Setup::new(ExperimentKind::Attack, &params).unwrap() else {
        panic!("attack setup");
    };
    let report = attack_experiment(&learner, &cfg, 5, 17).unwrap();
    let mut expected = String::from("trial,feasible,accused,accurate,flagged\n");
    for (t, r) in report.rows.iter().enumerate() {
        let accused = r.accused.map(|i| i.to_string()).unwrap_or_default();
        expected.push_str(&format!("{t},{},{accused},{},{}\n", r.feasible, r.accurate, r.flagged));
    }
    assert_eq!(stdout(&out), expected);
    assert!(stderr(&out).contains(&format!("completeness {:.4}", report.completeness_rate)));
}

#[test]
fn exit_codes() {
    let ok = run(&["--seed", "2", "mech", "compose", "--charges", "0.5:0,0.5:0"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "mode,charges,epsilon,delta\nbasic,2,1.0,0.0\n");

    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["--bogus"]).status.code(), Some(1));

    let no_seed = run(&["learn", "erm", "--k", "1", "--n", "10", "--universe", "8", "--alpha", "0.2", "--beta", "0.1"]);
    assert_eq!(no_seed.status.code(), Some(1));
    assert!(stderr(&no_seed).contains("--seed"), "{}", stderr(&no_seed));

    let bad_alpha = run(&["--seed", "1", "learn", "erm", "--k", "1", "--n", "10", "--universe", "8", "--alpha", "1.2", "--beta", "0.1"]);
    assert_eq!(bad_alpha.status.code(), Some(1));
    assert!(stderr(&bad_alpha).contains("--alpha"), "{}", stderr(&bad_alpha));

    let missing = run(&["--seed", "1", "sanitize", "points", "--alpha", "0.2", "--epsilon", "1", "--delta", "0.01", "--input", "/nonexistent/db.txt"]);
    assert_eq!(missing.status.code(), Some(2));

    let over_budget = run(&[
        "--seed", "2", "learn", "generic", "--class", "thresh", "--universe", "16", "--sanitizer", "blr", "--m-hat",
        "10", "--k", "2", "--n", "100", "--alpha", "0.2", "--beta", "0.1", "--epsilon", "1", "--epsilon-prime", "1",
        "--delta", "0.01",
    ]);
    assert_eq!(over_budget.status.code(), Some(2));
    assert!(stderr(&over_budget).contains("budget"));
}

#[test]
fn learn_reports_every_label() {
    let out = run(&[
        "--seed", "2", "learn", "erm", "--class", "thresh", "--universe", "16", "--k", "3", "--n", "200", "--alpha",
        "0.2", "--beta", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("label,target,hypothesis,empirical_error,generalization_error,ledger_epsilon,ledger_delta")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3);
    for (j, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], j.to_string());
        assert_eq!(fields[3], "0.0");
    }
}
