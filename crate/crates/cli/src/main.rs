use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use pbqdho::nogo::AnsatzMode;
use pbqdho::report::{run_subcommand, ParamsFile, RunConfig, Subcommand};

#[derive(Parser)]
#[command(name = "pbqdho", version, about = "Pseudo-boson and damped-oscillator certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(ClapSubcommand)]
enum Command {
    /// Commutation rules and adjoint relations of the ladder operators
    CheckCcr(Common),
    /// Joint Gaussian vacua
    Vacuum(Common),
    /// Sign obstruction in L2
    NogoL2(Common),
    /// Joint infeasibility over weighted spaces
    NogoWeighted(Common),
    /// Randomised search over first-order ansatz operators
    NogoAnsatz(Common),
    /// Ladder families and their eigenrelations
    Ladder(Common),
    /// Biorthogonality of the two families
    Gram(Common),
    /// Truncated S operators
    SOperators(Common),
    /// Intertwining relations
    Intertwine(Common),
}

#[derive(Args)]
struct Common {
    /// JSON parameter file
    #[arg(long)]
    params: Option<PathBuf>,
    /// Report destination (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, num_args = 2, value_names = ["N", "L"])]
    truncation: Option<Vec<usize>>,
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, default_value_t = 10.0)]
    cmax: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    /// real, k3, general or model
    #[arg(long, default_value = "real")]
    mode: AnsatzMode,
    #[arg(long)]
    expect_divergence: bool,
    #[arg(long)]
    expect_no_solution: bool,
    #[arg(long, default_value_t = pbqdho::tol::ALG)]
    tol_alg: f64,
    #[arg(long, default_value_t = pbqdho::tol::INT)]
    tol_int: f64,
}

fn split(command: Command) -> (Subcommand, Common) {
    match command {
        Command::CheckCcr(c) => (Subcommand::CheckCcr, c),
        Command::Vacuum(c) => (Subcommand::Vacuum, c),
        Command::NogoL2(c) => (Subcommand::NogoL2, c),
        Command::NogoWeighted(c) => (Subcommand::NogoWeighted, c),
        Command::NogoAnsatz(c) => (Subcommand::NogoAnsatz, c),
        Command::Ladder(c) => (Subcommand::Ladder, c),
        Command::Gram(c) => (Subcommand::Gram, c),
        Command::SOperators(c) => (Subcommand::SOperators, c),
        Command::Intertwine(c) => (Subcommand::Intertwine, c),
    }
}

fn config(sub: Subcommand, c: &Common) -> Result<RunConfig, String> {
    let params = match &c.params {
        Some(path) => Some(ParamsFile::load(&path.to_string_lossy()).map_err(|e| e.to_string())?),
        None => None,
    };
    let mut cfg = RunConfig::new(sub, params);
    cfg.params_path = c.params.as_ref().map(|p| p.to_string_lossy().into_owned());
    cfg.seed = c.seed;
    if let Some(t) = &c.truncation {
        cfg.truncation = (t[0], t[1]);
    }
    cfg.grid = c.grid;
    cfg.cmax = c.cmax;
    cfg.samples = c.samples;
    cfg.mode = c.mode;
    cfg.expect_divergence = c.expect_divergence;
    cfg.expect_no_solution = c.expect_no_solution;
    cfg.tol_alg = c.tol_alg;
    cfg.tol_int = c.tol_int;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, common) = split(cli.command);
    let cfg = match config(sub, &common) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let doc = match run_subcommand(&cfg, &timestamp) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = doc.to_json_pretty();
    match &common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    for c in doc.checks.iter().filter(|c| !c.passed) {
        eprintln!("FAIL [{}] {}", c.tag, c.name);
    }
    eprintln!("{}: {}/{} checks passed", sub.name(), doc.summary.passed, doc.summary.total);
    ExitCode::from(doc.exit_code() as u8)
}
