use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use multilearn::domain::{ClassTag, Concept, LabeledDistribution, MultiLabeledDatabase, Universe};
use multilearn::fingerprint::{attack_trial, AttackReport, PirateVariant};
use multilearn::learners::{Algorithm, LearnerSpec, MultiLearner};
use multilearn::mechanisms::{
    a_dist, a_dist_output_probability, a_dist_threshold, compose_advanced, compose_basic, em_exact_distribution,
    exponential_mechanism, PrivacyLedger, PrivacyParams, ScoredCandidate,
};
use multilearn::rng::stream;
use multilearn::sanitize::sanitize_points;
use multilearn_harness::{
    invalid, mixed_distribution, random_concept, run_experiment, write_output, Cell, ExperimentConfig, ExperimentKind,
    Format, HarnessError, LearnerOptions, LearnerSetup, Params, Result, SanitizerKind, Setup, Table,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "multilearn", version, about = "Private multi-concept learning experiments")]
struct Cli {
    /// Master seed; every random draw derives from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output format (experiments default to the config's format).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for trial-level parallelism.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a multi-learner on sampled or file-provided data.
    Learn(LearnArgs),
    #[command(subcommand)]
    Sanitize(SanitizeCommand),
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Mechanism demos.
    #[command(subcommand)]
    Mech(MechCommand),
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Args)]
struct LearnArgs {
    /// erm, direct-sum, generic, parities or points.
    algorithm: Algorithm,
    #[arg(long)]
    k: usize,
    /// Sample size; defaults to the planning bound.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    epsilon_prime: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Switches to advanced composition with this slack.
    #[arg(long)]
    delta_prime: Option<f64>,
    /// `<size>` for indexed elements or `bits:<d>` for `{0,1}^d`.
    #[arg(long)]
    universe: String,
    /// Concept class; inferred for points and parities.
    #[arg(long)]
    class: Option<ClassTag>,
    /// `uniform`, `mixed`, or a database file used as the sample.
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// Comma-separated targets such as `point:3,point:5`; random when absent.
    #[arg(long)]
    targets: Option<String>,
    #[arg(long, value_enum)]
    sanitizer: Option<SanitizerKind>,
    #[arg(long)]
    m_hat: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    agnostic: bool,
}

#[derive(Subcommand)]
enum SanitizeCommand {
    /// Release point-query answers for a database file.
    Points {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        input: PathBuf,
        /// Read the universe as `{0,1}^d` bit vectors.
        #[arg(long)]
        bits: bool,
    },
}

#[derive(Subcommand)]
enum AttackCommand {
    /// Boneh-Shaw codebook attacked through a learner.
    BonehShaw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        xi: f64,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value = "erm")]
        learner: Algorithm,
        #[arg(long, default_value = "pac")]
        variant: String,
        /// Code length; defaults to the security bound.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        epsilon_prime: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        m_hat: Option<usize>,
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum MechCommand {
    /// Exact distribution and sampled frequencies of the exponential mechanism.
    Exponential {
        /// Comma-separated scores.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        scores: Vec<f64>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        sensitivity: f64,
        #[arg(long, default_value_t = 0)]
        draws: usize,
    },
    /// Stable selection on two candidates separated by `gap`.
    Adist {
        #[arg(long)]
        gap: f64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Total charge of a list of `epsilon:delta` charges.
    Compose {
        #[arg(long, value_delimiter = ',')]
        charges: Vec<String>,
        /// Use advanced composition with this slack.
        #[arg(long)]
        delta_prime: Option<f64>,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run a TOML experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Also write per-trial rows as CSV to this path.
        #[arg(long)]
        rows: Option<PathBuf>,
    },
}

fn seed(cli: &Cli) -> Result<u64> {
    cli.seed.ok_or_else(|| HarnessError::config("--seed", "required"))
}

fn parse_universe(spec: &str) -> Result<Universe> {
    let bad = || HarnessError::config("--universe", format!("expected `<size>` or `bits:<d>`, got `{spec}`"));
    match spec.split_once(':') {
        Some(("bits", d)) => Universe::bit_vectors(d.parse().map_err(|_| bad())?).map_err(|e| {
            HarnessError::config("--universe", e.to_string())
        }),
        None => Universe::indexed(spec.parse().map_err(|_| bad())?).map_err(|e| HarnessError::config("--universe", e.to_string())),
        _ => Err(bad()),
    }
}

fn read_database(path: &Path, bits: bool) -> Result<MultiLabeledDatabase> {
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.to_path_buf(), source })?;
    MultiLabeledDatabase::parse_text(&text, bits).map_err(|e| HarnessError::config(path.display().to_string(), e.to_string()))
}

fn learn(cli: &Cli, a: &LearnArgs) -> Result<Table> {
    let seed = seed(cli)?;
    let universe = parse_universe(&a.universe)?;
    let class = a.class.unwrap_or(match a.algorithm {
        Algorithm::Parities => ClassTag::Parity,
        _ => ClassTag::Point,
    });
    let private = a.algorithm != Algorithm::Erm;
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| HarnessError::config(flag, format!("required by {}", a.algorithm)));
    let spec = LearnerSpec {
        algorithm: a.algorithm,
        class,
        alpha: a.alpha,
        beta: a.beta,
        epsilon: if private { need(a.epsilon, "--epsilon")? } else { 0.0 },
        epsilon_prime: a.epsilon_prime,
        delta: match a.algorithm {
            Algorithm::Erm | Algorithm::DirectSum => a.delta.unwrap_or(0.0),
            _ => need(a.delta, "--delta")?,
        },
        proper: true,
        agnostic: a.agnostic,
    };
    let opts = LearnerOptions { spec, delta_prime: a.delta_prime, sanitizer: a.sanitizer, m_hat: a.m_hat, budget: a.budget };
    let learner = LearnerSetup::new(&opts, &universe).map_err(invalid)?;
    let (s, labeled, targets) = match a.dist.as_str() {
        "uniform" | "mixed" => {
            let marginal = if a.dist == "mixed" {
                mixed_distribution(universe)?
            } else {
                multilearn::domain::Distribution::uniform(universe)
            };
            let targets: Vec<Concept> = match &a.targets {
                Some(t) => t
                    .split(',')
                    .map(|c| c.parse::<Concept>().and_then(|c| c.check(&universe).map(|_| c)))
                    .collect::<multilearn::Result<_>>()
                    .map_err(|e| HarnessError::config("--targets", e.to_string()))?,
                None => {
                    let mut rng = stream(seed, &[0]);
                    (0..a.k).map(|_| random_concept(class, &universe, &mut rng)).collect()
                }
            };
            if targets.len() != a.k {
                return Err(HarnessError::config("--targets", format!("{} targets for k = {}", targets.len(), a.k)));
            }
            let n = match a.n {
                Some(n) => n,
                None => learner.plan(&universe, a.k).map_err(invalid)?,
            };
            let labeled = LabeledDistribution::realizable(&marginal, &targets).map_err(invalid)?;
            let s = labeled.sample_database(n, &mut stream(seed, &[1]))?;
            (s, Some(labeled), Some(targets))
        }
        path => {
            let s = read_database(Path::new(path), universe.dimension().is_some())?;
            if s.universe() != &universe || s.k() != a.k {
                return Err(HarnessError::config("--dist", "database header disagrees with --universe or --k"));
            }
            (s, None, None)
        }
    };
    let outcome = learner.learn(&s, &mut stream(seed, &[2]))?;
    let charge = outcome.charge;
    let mut table = Table::new(&[
        "label",
        "target",
        "hypothesis",
        "empirical_error",
        "generalization_error",
        "ledger_epsilon",
        "ledger_delta",
    ]);
    for j in 0..a.k {
        let h = outcome.hypotheses.as_ref().map(|h| *h.get(j));
        let emp = h.map(|h| multilearn::domain::empirical_error(&s.view(j)?, &h)).transpose()?;
        let gen = match (&labeled, h) {
            (Some(l), Some(h)) => Some(l.error(j, &h)?),
            _ => None,
        };
        table.push(vec![
            Cell::int(j),
            targets.as_ref().map_or(Cell::Empty, |t| t[j].to_string().into()),
            h.map_or(Cell::Text("none".into()), |h| h.to_string().into()),
            Cell::opt_float(emp.map(|e| *e.numer() as f64 / *e.denom() as f64)),
            Cell::opt_float(gen),
            Cell::opt_float(charge.map(|c| c.epsilon)),
            Cell::opt_float(charge.map(|c| c.delta)),
        ]);
    }
    Ok(table)
}

fn sanitize(cli: &Cli, cmd: &SanitizeCommand) -> Result<Table> {
    let SanitizeCommand::Points { alpha, epsilon, delta, input, bits } = cmd;
    let seed = seed(cli)?;
    let d = read_database(input, *bits)?;
    let check = |name: &str, v: f64| {
        if v > 0.0 && v < 1.0 || (name == "--epsilon" && v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(HarnessError::config(name, format!("{v} is out of range")))
        }
    };
    check("--alpha", *alpha)?;
    check("--epsilon", *epsilon)?;
    check("--delta", *delta)?;
    let answers = sanitize_points(&d, *alpha, *epsilon, *delta, &mut stream(seed, &[]))?;
    let mut table = Table::new(&["x", "a_x"]);
    for x in d.universe().elements() {
        table.push(vec![Cell::int(x.index()), Cell::float(answers.get(x))]);
    }
    Ok(table)
}

fn attack(cli: &Cli, cmd: &AttackCommand) -> Result<Table> {
    let AttackCommand::BonehShaw {
        n,
        xi,
        trials,
        learner,
        variant,
        k,
        alpha,
        beta,
        epsilon,
        epsilon_prime,
        delta,
        m_hat,
        strict,
    } = cmd;
    let seed = seed(cli)?;
    let variant: PirateVariant = serde_json::from_value(serde_json::Value::String(variant.clone()))
        .map_err(|_| HarnessError::config("--variant", format!("unknown variant `{variant}`")))?;
    let params = Params {
        n: Some(*n),
        k: *k,
        xi: Some(*xi),
        alpha: Some(*alpha),
        beta: *beta,
        epsilon: *epsilon,
        epsilon_prime: *epsilon_prime,
        delta: *delta,
        m_hat: *m_hat,
        variant: Some(variant),
        learner: Some(*learner),
        strict: Some(*strict),
        ..Params::default()
    };
    let Setup::Attack { learner, cfg } = Setup::new(ExperimentKind::Attack, &params)? else {
        unreachable!("attack params build an attack setup")
    };
    if *trials == 0 {
        return Err(HarnessError::config("--trials", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
        .map_err(|e| HarnessError::config("--threads", e.to_string()))?;
    let rows = pool.install(|| {
        (0..*trials)
            .into_par_iter()
            .map(|t| attack_trial(&learner, &cfg, &mut stream(seed, &[t as u64])))
            .collect::<multilearn::Result<Vec<_>>>()
    })?;
    let report = AttackReport::from_trials(cfg.n, rows);
    eprintln!(
        "completeness {:.4}  soundness violation {:.4}  accuracy {:.4}  flagged {:.4}",
        report.completeness_rate, report.soundness_violation_rate, report.accuracy_rate, report.flagged_rate
    );
    let mut table = Table::new(&["trial", "feasible", "accused", "accurate", "flagged"]);
    for (t, r) in report.rows.iter().enumerate() {
        table.push(vec![
            Cell::int(t),
            r.feasible.into(),
            r.accused.map_or(Cell::Empty, Cell::int),
            r.accurate.into(),
            r.flagged.into(),
        ]);
    }
    Ok(table)
}

fn parse_charge(s: &str) -> Result<PrivacyParams> {
    let bad = |m: String| HarnessError::config("--charges", m);
    let (e, d) = s.split_once(':').ok_or_else(|| bad(format!("expected `epsilon:delta`, got `{s}`")))?;
    let e: f64 = e.trim().parse().map_err(|_| bad(format!("bad epsilon in `{s}`")))?;
    let d: f64 = d.trim().parse().map_err(|_| bad(format!("bad delta in `{s}`")))?;
    PrivacyParams::new(e, d).map_err(|err| bad(err.to_string()))
}

fn mech(cli: &Cli, cmd: &MechCommand) -> Result<Table> {
    match cmd {
        MechCommand::Exponential { scores, epsilon, sensitivity, draws } => {
            let candidates: Vec<_> = scores.iter().enumerate().map(|(i, &s)| ScoredCandidate::new(i, s)).collect();
            let probs = em_exact_distribution(&candidates, *epsilon, *sensitivity).map_err(invalid)?;
            let mut counts = vec![0usize; candidates.len()];
            if *draws > 0 {
                let mut rng = stream(seed(cli)?, &[]);
                for _ in 0..*draws {
                    counts[*exponential_mechanism(&candidates, *epsilon, *sensitivity, &mut rng)?] += 1;
                }
            }
            let mut table = Table::new(&["candidate", "score", "probability", "frequency"]);
            for (i, c) in candidates.iter().enumerate() {
                let freq = (*draws > 0).then(|| counts[i] as f64 / *draws as f64);
                table.push(vec![Cell::int(i), Cell::float(c.score), Cell::float(probs[i]), Cell::opt_float(freq)]);
            }
            Ok(table)
        }
        MechCommand::Adist { gap, epsilon, delta, trials } => {
            let p = a_dist_output_probability(*gap, *epsilon, *delta).map_err(invalid)?;
            let rate = if *trials > 0 {
                let mut rng = stream(seed(cli)?, &[]);
                let mut released = 0usize;
                for _ in 0..*trials {
                    let s = a_dist(ScoredCandidate::new(0u8, *gap), ScoredCandidate::new(1u8, 0.0), *epsilon, *delta, &mut rng)?;
                    released += usize::from(!s.is_bottom());
                }
                Some(released as f64 / *trials as f64)
            } else {
                None
            };
            let mut table = Table::new(&["gap", "threshold", "release_probability", "release_rate"]);
            table.push(vec![
                Cell::float(*gap),
                Cell::float(a_dist_threshold(*epsilon, *delta)),
                Cell::float(p),
                Cell::opt_float(rate),
            ]);
            Ok(table)
        }
        MechCommand::Compose { charges, delta_prime } => {
            let mut ledger = PrivacyLedger::new();
            for c in charges {
                ledger.charge(parse_charge(c)?);
            }
            let (mode, total) = match delta_prime {
                Some(dp) => ("advanced", compose_advanced(&ledger, *dp).map_err(invalid)?),
                None => ("basic", compose_basic(&ledger).map_err(invalid)?),
            };
            let mut table = Table::new(&["mode", "charges", "epsilon", "delta"]);
            table.push(vec![Cell::Text(mode.into()), Cell::int(ledger.len()), Cell::float(total.epsilon), Cell::float(total.delta)]);
            Ok(table)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let format = cli.format.unwrap_or_default();
    let out = cli.out.as_deref();
    let table = match &cli.command {
        Command::Learn(a) => learn(cli, a)?,
        Command::Sanitize(cmd) => sanitize(cli, cmd)?,
        Command::Attack(cmd) => attack(cli, cmd)?,
        Command::Mech(cmd) => mech(cli, cmd)?,
        Command::Experiment(ExperimentCommand::Run { config, rows }) => {
            let mut config = ExperimentConfig::load(config)?;
            if let Some(seed) = cli.seed {
                config.seed = seed;
            }
            if rows.is_some() {
                config.rows = true;
            }
            let report = run_experiment(&config, cli.threads)?;
            if let Some(path) = rows {
                write_output(&report.rows_table().render(Format::Csv), Some(path))?;
            }
            return write_output(&report.render(cli.format.unwrap_or(config.format))?, out);
        }
    };
    write_output(&table.render(format), out)
}

/// Names command-line flags instead of config fields in diagnostics.
fn as_flag(e: HarnessError) -> HarnessError {
    match e {
        HarnessError::Config { path, message } => {
            let path = match path.strip_prefix("params.") {
                Some(field) => format!("--{}", field.replace('_', "-")),
                None => path,
            };
            HarnessError::Config { path, message }
        }
        other => other,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let experiment = matches!(cli.command, Command::Experiment(_));
    match run(&cli).map_err(|e| if experiment { e } else { as_flag(e) }) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
