//! `pointcert` command line: certify single clouds, evaluate datasets,
//! train the toy classifier, run the brute-force oracle suite, and convert
//! smoothing radii.
//!
//! Exit codes: 0 on success, 1 on usage or config errors, 2 when the
//! oracle-check suite finds a property violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use pointcert::certify::{predict_and_certify, AttackModel, Outcome};
use pointcert::classifier::CentroidModel;
use pointcert::harness::{
    oracle_check, run_evaluation, train_from_spec, EvalConfig, OracleCheckOptions, TrainSpec,
};
use pointcert::pointcloud::read_xyz_file;

#[derive(Parser)]
#[command(
    name = "pointcert",
    version,
    about = "Certified robustness for point-cloud classifiers via random subsampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict and certify a single cloud against the chosen attacks.
    Certify(CertifyArgs),
    /// Evaluate a dataset: records.jsonl plus one accuracy curve per attack.
    Evaluate(EvaluateArgs),
    /// Run the brute-force oracle, witness, and falsification suite.
    OracleCheck(OracleCheckArgs),
    /// Train the nearest-centroid classifier and write the model JSON.
    Train(TrainArgs),
    /// Convert a smoothing L2 radius into a perturbed-point count.
    RsConvert(RsConvertArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// XYZ file to certify.
    #[arg(long)]
    input: PathBuf,
    /// Nearest-centroid model JSON.
    #[arg(long)]
    model: PathBuf,
    /// Subsample size.
    #[arg(long, default_value_t = 16)]
    k: usize,
    /// Number of Monte-Carlo subsamples N.
    #[arg(long, default_value_t = 10_000)]
    num_samples: usize,
    /// Total error budget for the probability bounds.
    #[arg(long, default_value_t = 0.001)]
    alpha: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Attack model: perturbation, modification, addition, deletion, or all.
    #[arg(long, default_value = "all")]
    attack: String,
    /// Cloud dimension (coordinates per point).
    #[arg(long, default_value_t = 3)]
    dim: usize,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Evaluation config JSON.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for records and curves.
    #[arg(long)]
    out_dir: PathBuf,
    /// Worker threads (defaults to the number of cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    #[arg(long, default_value_t = 3)]
    max_k: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Random attacks per (instance, attack model, size).
    #[arg(long, default_value_t = 200)]
    trials: u64,
}

#[derive(Args)]
struct TrainArgs {
    /// Training config JSON: {dataset, k, epochs, seed}.
    #[arg(long)]
    config: PathBuf,
    /// Where to write the model JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RsConvertArgs {
    /// Certified L2 radius.
    #[arg(long)]
    delta: f64,
    /// Space diameter bound (e.g. 2*sqrt(3) for unit-cube xyz coordinates).
    #[arg(long)]
    lambda: f64,
}

fn parse_attacks(spec: &str) -> Result<Vec<AttackModel>, pointcert::Error> {
    if spec == "all" {
        return Ok(AttackModel::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse()).collect()
}

fn run(cli: Cli) -> Result<ExitCode, pointcert::Error> {
    match cli.command {
        Command::Certify(args) => {
            let parsed = read_xyz_file(&args.input, args.dim)?;
            if parsed.duplicates_dropped > 0 {
                eprintln!(
                    "warning: dropped {} duplicate point(s) from {}",
                    parsed.duplicates_dropped,
                    args.input.display()
                );
            }
            let model = CentroidModel::load(&args.model)?;
            let attacks = parse_attacks(&args.attack)?;
            let results = predict_and_certify(
                &model,
                &parsed.cloud,
                args.k,
                args.num_samples,
                args.alpha,
                args.seed,
                &attacks,
            )?;

            let label = match results[0].outcome {
                Outcome::Certified { label, .. } => serde_json::json!(label),
                Outcome::Abstain => serde_json::json!("ABSTAIN"),
            };
            let mut per_attack = serde_json::Map::new();
            for res in &results {
                let size = match res.outcome {
                    Outcome::Certified { r_star, .. } => serde_json::json!(r_star),
                    Outcome::Abstain => serde_json::json!("ABSTAIN"),
                };
                per_attack.insert(res.attack.to_string(), size);
            }
            let bounds = &results[0].bounds;
            let output = serde_json::json!({
                "input": args.input,
                "n": parsed.cloud.len(),
                "label": label,
                "certified_size": per_attack,
                "bounds": bounds,
                "params": results[0].params,
            });
            println!("{}", serde_json::to_string_pretty(&output)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Evaluate(args) => {
            let config = EvalConfig::from_json(&std::fs::read(&args.config)?)?;
            let report = match args.workers {
                Some(workers) => rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .map_err(|e| pointcert::Error::Config(e.to_string()))?
                    .install(|| run_evaluation(&config, &args.out_dir)),
                None => run_evaluation(&config, &args.out_dir),
            }?;
            eprintln!(
                "wrote {} records and {} curves to {}",
                report.records.len(),
                report.curves.len(),
                args.out_dir.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck(args) => {
            let report = oracle_check(&OracleCheckOptions {
                max_n: args.max_n,
                max_k: args.max_k,
                seed: args.seed,
                trials: args.trials,
            })?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.violations > 0 {
                eprintln!("oracle-check found {} violation(s)", report.violations);
                return Ok(ExitCode::from(2));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Train(args) => {
            let spec = TrainSpec::from_json(&std::fs::read(&args.config)?)?;
            let model = train_from_spec(&spec)?;
            model.save(&args.out)?;
            eprintln!("wrote model to {}", args.out.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::RsConvert(args) => {
            let size = pointcert::harness::rs_size_from_radius(args.delta, args.lambda)?;
            println!("{size}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version are successes; anything else is usage error 1
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::FAILURE,
            };
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}
