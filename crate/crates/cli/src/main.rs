//! `lawcheck`: runs the effectlaws law catalog.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use effectlaws::runner::{all_ids, default_jobs, replay, run_selected, select, Report, WitnessFile};
use effectlaws::{Config, HarnessError, Mutant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Check monad, transformer and operation laws over small finite carriers.
#[derive(Parser, Debug)]
#[command(name = "lawcheck", version)]
struct Cli {
    /// Laws to run: an id, a prefix of ids (`thm19`), or a glob
    /// (`monad-laws/*`). Repeatable; all laws when absent.
    #[arg(long = "suite", value_name = "GLOB")]
    suites: Vec<String>,

    /// Seed for every sampled quantifier.
    #[arg(long, env = "LAWCHECK_SEED", default_value_t = 0)]
    seed: u64,

    /// Largest universe carrier the laws quantify over (at most 4).
    #[arg(long)]
    max_carrier: Option<usize>,

    /// Function spaces up to this size are enumerated, larger ones sampled.
    #[arg(long)]
    fn_enum_cap: Option<u64>,

    /// Also check the individual squares of the algebraic lifting argument.
    #[arg(long)]
    deep_diagrams: bool,

    /// Smaller carriers and budgets.
    #[arg(long)]
    quick: bool,

    /// Include callcc among the continuation operations.
    #[arg(long)]
    with_callcc: bool,

    /// Longest list fastProduct is checked on.
    #[arg(long)]
    fp_max_len: Option<usize>,

    /// Largest list element fastProduct is checked on.
    #[arg(long)]
    fp_max_elem: Option<u64>,

    /// Swap in a deliberately broken definition.
    #[arg(long, value_parser = parse_mutant)]
    mutant: Option<Mutant>,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Write a witness file for every failing law into this directory.
    #[arg(long, value_name = "DIR")]
    witness_dir: Option<PathBuf>,

    /// Re-run exactly the case recorded in a witness file.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,

    /// With --replay: drop the mutant recorded in the witness file.
    #[arg(long, requires = "replay")]
    without_mutant: bool,

    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,

    /// List the selected law ids and exit.
    #[arg(long)]
    list: bool,
}

fn parse_mutant(s: &str) -> Result<Mutant, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

impl Cli {
    fn config(&self) -> Config {
        let mut cfg = if self.quick { Config::quick() } else { Config::default() };
        cfg.seed = self.seed;
        if let Some(n) = self.max_carrier {
            cfg.max_carrier = n;
        }
        if let Some(n) = self.fn_enum_cap {
            cfg.budget.fn_enum_cap = n;
        }
        if let Some(n) = self.fp_max_len {
            cfg.fp_max_len = n;
        }
        if let Some(n) = self.fp_max_elem {
            cfg.fp_max_elem = n;
        }
        cfg.deep_diagrams = self.deep_diagrams;
        cfg.with_callcc = self.with_callcc;
        cfg.mutant = self.mutant;
        cfg
    }
}

enum Failure {
    Usage(String),
    Laws,
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<(), Failure> {
    let body = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json() + "\n",
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(path) = &cli.replay {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let w = WitnessFile::parse(&text)?;
        let mut cfg = w.config.clone();
        if cli.without_mutant {
            cfg.mutant = None;
        }
        let r = replay(&w, &cfg)?;
        let report = Report { config: cfg, suites: vec![r] };
        emit(cli, &report)?;
        return if report.passed() { Ok(()) } else { Err(Failure::Laws) };
    }

    let cfg = cli.config();
    cfg.validate()?;
    effectlaws::examples::product_carrier(cfg.fp_max_len, cfg.fp_max_elem)?;
    let ids = select(&all_ids(&cfg), &cli.suites)?;
    if cli.list {
        for id in ids {
            println!("{id}");
        }
        return Ok(());
    }
    let suites = run_selected(&cfg, &ids, cli.jobs.unwrap_or_else(default_jobs));
    let report = Report { config: cfg.clone(), suites };
    if let Some(dir) = &cli.witness_dir {
        std::fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        for r in &report.suites {
            if let Some(w) = WitnessFile::from_report(&cfg, r) {
                let path = dir.join(w.file_name());
                std::fs::write(&path, w.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
        }
    }
    emit(cli, &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Laws)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Failing cases are caught and reported; the default hook would also
    // print each one to stderr.
    std::panic::set_hook(Box::new(|_| {}));
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Laws) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("lawcheck: {msg}");
            ExitCode::from(2)
        }
    }
}
