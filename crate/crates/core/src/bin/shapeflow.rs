use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use shapeflow::experiment::{self, Command, ExperimentSpec};

/// Eigenvalue shape flows and inequality checks.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// First eigenvalues of a shape on a P1 mesh.
    Eigen(Common),
    /// Minimizing-movement flows.
    #[command(subcommand)]
    Flow(FlowSub),
    /// Cauchy table of flows over a list of step sizes.
    Gmm(Common),
    /// Distance between two flows over time.
    Contraction(Common),
    /// Discrete evolution variational inequality residuals.
    Evi(Common),
    /// A priori error estimate against a fine reference.
    Apriori(Common),
    /// Brunn-Minkowski margins along a Minkowski path.
    Bmi(Common),
    /// Alpha-convexity along a radial interpolation.
    Alpha(Common),
    /// First and second domain variations.
    Variation(Common),
    /// Robin eigenvalues with negative beta on sawtooth domains.
    NegbetaDemo(Common),
    /// The verification suite (`--level quick|full`).
    Verify(Common),
}

#[derive(Subcommand)]
enum FlowSub {
    /// Run one flow and write its trajectory.
    Run(Common),
}

#[derive(Args)]
struct Common {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, or file path for the primary artifact.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Parameters as `--key value` or `--key=value`; they override the config.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "PARAMS")]
    params: Vec<String>,
}

fn spec_from(command: Command, c: &Common) -> shapeflow::Result<ExperimentSpec> {
    let mut spec = match &c.config {
        Some(p) => ExperimentSpec::parse_config(&std::fs::read_to_string(p)?, Some(command))?,
        None => ExperimentSpec::new(command),
    };
    let mut it = c.params.iter();
    while let Some(a) = it.next() {
        let key = a
            .strip_prefix("--")
            .ok_or_else(|| shapeflow::Error::InvalidInput(format!("expected --key, got '{a}'")))?;
        let (k, v) = match key.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| shapeflow::Error::InvalidInput(format!("--{key} needs a value")))?;
                (key.to_string(), v.clone())
            }
        };
        spec.set(&k, &v)?;
    }
    if let Some(s) = c.seed {
        spec.seed = s;
    }
    if let Some(o) = &c.out {
        spec.out = Some(o.clone());
    }
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Sub::Eigen(c) => (Command::Eigen, c),
        Sub::Flow(FlowSub::Run(c)) => (Command::Flow, c),
        Sub::Gmm(c) => (Command::Gmm, c),
        Sub::Contraction(c) => (Command::Contraction, c),
        Sub::Evi(c) => (Command::Evi, c),
        Sub::Apriori(c) => (Command::Apriori, c),
        Sub::Bmi(c) => (Command::Bmi, c),
        Sub::Alpha(c) => (Command::Alpha, c),
        Sub::Variation(c) => (Command::Variation, c),
        Sub::NegbetaDemo(c) => (Command::NegbetaDemo, c),
        Sub::Verify(c) => (Command::Verify, c),
    };
    let result = spec_from(command, common).and_then(|spec| {
        let outcome = experiment::run(&spec)?;
        let out = spec.out.clone().unwrap_or_else(|| PathBuf::from("results").join(&spec.name));
        outcome.write(&out)?;
        Ok(outcome)
    });
    match result {
        Ok(o) => {
            print!("{}", o.summary);
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
