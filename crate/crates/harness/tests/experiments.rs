use multilearn::domain::{ClassTag, Universe};
use multilearn::learners::{Algorithm, LearnerSpec};
use multilearn::mechanisms::{compose_advanced, PrivacyLedger, PrivacyParams};
use multilearn_harness::{
    plan_sample_size, run_experiment, ExperimentConfig, Format, HarnessError, Setup, TrialReport,
};

const PARITY: &str = r#"
kind = "parity-learner"
seed = 11
trials = 200

[params]
d = 6
k = 3
epsilon = 1.0
delta = 0.1
beta = 0.1

[sweep]
axis = "n"
values = [100, 400, 1600]
"#;

fn spec(algorithm: Algorithm, class: ClassTag, alpha: f64, epsilon: f64, delta: f64) -> LearnerSpec {
    LearnerSpec {
        algorithm,
        class,
        alpha,
        beta: 0.1,
        epsilon,
        epsilon_prime: None,
        delta,
        proper: true,
        agnostic: false,
    }
}

fn config(text: &str) -> ExperimentConfig {
    ExperimentConfig::from_toml(text).unwrap()
}

#[test]
fn planned_sample_sizes() {
    let bits = Universe::bit_vectors(6).unwrap();
    let parity = spec(Algorithm::Parities, ClassTag::Parity, 0.1, 1.0, 0.1);
    assert_eq!(plan_sample_size(&parity, &bits, 3).unwrap(), 1152);

    let points = spec(Algorithm::Points, ClassTag::Point, 0.2, 1.0, 0.01);
    assert_eq!(plan_sample_size(&points, &Universe::indexed(64).unwrap(), 4).unwrap(), 2726);

    let erm = spec(Algorithm::Erm, ClassTag::Thresh, 0.1, 0.0, 0.0);
    assert_eq!(plan_sample_size(&erm, &Universe::indexed(32).unwrap(), 4).unwrap(), 6940);
}

#[test]
fn success_rate_grows_with_sample_size() {
    let report = run_experiment(&config(PARITY), 4).unwrap();
    let rates: Vec<f64> = report.summary.iter().map(|s| s.success_rate).collect();
    assert_eq!(rates.len(), 3);
    assert!(rates.windows(2).all(|w| w[0] <= w[1]), "rates {rates:?}");
    assert!(rates[2] >= 0.9, "rates {rates:?}");
}

#[test]
fn one_trial_gives_one_row_per_point() {
    let text = PARITY.replace("trials = 200", "trials = 1\nrows = true");
    let report = run_experiment(&config(&text), 1).unwrap();
    assert_eq!(report.summary.len(), 3);
    assert_eq!(report.rows.len(), 3);
    for (i, (s, r)) in report.summary.iter().zip(&report.rows).enumerate() {
        assert_eq!((s.point, s.trials, r.point, r.trial), (i, 1, i, 0));
    }
    let csv = report.render(Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let text = PARITY.replace("trials = 200", "trials = 20\nrows = true");
    let a = run_experiment(&config(&text), 1).unwrap();
    let b = run_experiment(&config(&text), 3).unwrap();
    for format in [Format::Csv, Format::Json] {
        assert_eq!(a.render(format).unwrap(), b.render(format).unwrap());
    }
    let reseeded = text.replace("seed = 11", "seed = 12");
    let c = run_experiment(&config(&reseeded), 1).unwrap();
    assert_ne!(a.render(Format::Json).unwrap(), c.render(Format::Json).unwrap());
}

#[test]
fn ledger_columns_match_static_charge() {
    let text = r#"
kind = "direct-sum"
seed = 3
trials = 4

[params]
class = "thresh"
universe = 16
k = 5
n = 400
alpha = 0.2
beta = 0.1
epsilon = 0.5
delta_prime = 0.01
"#;
    let report = run_experiment(&config(text), 2).unwrap();
    let expected = compose_advanced(&PrivacyLedger::repeated(PrivacyParams { epsilon: 0.5, delta: 0.0 }, 5), 0.01).unwrap();
    let s = &report.summary[0];
    assert!((s.ledger_epsilon.unwrap() - expected.epsilon).abs() < 1e-8);
    assert!((s.ledger_delta.unwrap() - expected.delta).abs() < 1e-12);

    let basic = run_experiment(&config(&text.replace("delta_prime = 0.01\n", "")), 1).unwrap();
    assert_eq!(basic.summary[0].ledger_epsilon, Some(2.5));
    assert_eq!(basic.summary[0].ledger_delta, Some(0.0));

    let c = config(text);
    let charge = Setup::new(c.kind, &c.params).unwrap().charge().unwrap();
    assert_eq!(s.ledger_epsilon, Some(multilearn_harness::round9(charge.epsilon)));
}

#[test]
fn every_kind_runs_from_a_config() {
    let configs = [
        "kind = \"adist\"\nseed = 1\ntrials = 5\n[params]\ngap = 3.0\nepsilon = 1.0\ndelta = 0.1\n",
        "kind = \"sanitize-points\"\nseed = 1\ntrials = 3\n[params]\nuniverse = 16\nn = 500\nalpha = 0.2\nepsilon = 1.0\ndelta = 0.01\n",
        "kind = \"erm\"\nseed = 1\ntrials = 3\n[params]\nclass = \"point\"\nuniverse = 8\nk = 2\nn = 50\nalpha = 0.2\nbeta = 0.1\n",
        "kind = \"direct-sum\"\nseed = 1\ntrials = 3\n[params]\nclass = \"thresh\"\nuniverse = 8\nk = 2\nn = 50\nalpha = 0.2\nbeta = 0.1\nepsilon = 1.0\nlabels = \"adversarial\"\n",
        "kind = \"point-learner\"\nseed = 1\ntrials = 3\n[params]\nuniverse = 32\nk = 2\nn = 300\nalpha = 0.2\nbeta = 0.1\nepsilon = 1.0\ndelta = 0.01\n",
        "kind = \"generic-learner\"\nseed = 1\ntrials = 2\n[params]\nclass = \"point\"\nuniverse = 8\nk = 2\nn = 300\nalpha = 0.3\nbeta = 0.1\nepsilon = 1.0\nepsilon_prime = 1.0\ndelta = 0.01\n",
        "kind = \"attack\"\nseed = 1\ntrials = 2\n[params]\nn = 4\nxi = 0.1\n",
    ];
    for text in configs {
        let c = config(text);
        let report = run_experiment(&ExperimentConfig { rows: true, ..c.clone() }, 2).unwrap();
        assert_eq!(report.summary.len(), 1, "{}", c.kind.name());
        assert_eq!(report.rows.len(), c.trials, "{}", c.kind.name());
        assert_eq!(report.summary[0].kind, c.kind.name());
        let json = report.render(Format::Json).unwrap();
        assert_eq!(TrialReport::parse(&json, Format::Json).unwrap(), report);
    }
}

#[test]
fn invalid_configs_name_the_offending_field() {
    let cases = [
        (PARITY.replace("epsilon = 1.0", "epsilon = -1.0"), "params.epsilon"),
        (PARITY.replace("beta = 0.1", "beta = 0.0"), "params.beta"),
        (PARITY.replace("kind = \"parity-learner\"", "kind = \"erm\""), "params.class"),
        (PARITY.replace("axis = \"n\"", "axis = \"n\"\nstep = 2"), "step"),
        (PARITY.replace("[100, 400, 1600]", "[]"), "sweep.values"),
        (PARITY.replace("d = 6\n", "d = 6\nlabels = \"adversarial\"\n"), "params.labels"),
    ];
    for (text, expected) in cases {
        match ExperimentConfig::from_toml(&text) {
            Err(HarnessError::Config { path, .. }) => assert_eq!(path, expected),
            other => panic!("{expected}: expected a config error, got {other:?}"),
        }
    }
    let c = config(PARITY);
    assert!(matches!(run_experiment(&c, 0), Err(HarnessError::Config { ref path, .. }) if path == "threads"));
}
