use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use anyon_waveguide::cli_io::{error_line, exit_code, run, RunConfig, Verb};
use anyon_waveguide::error::Error;

#[derive(Parser)]
#[command(
    name = "anyon",
    version,
    about = "Two-anyon spectra in a squeezed trap and their Tonks-Girardeau limit"
)]
struct Cli {
    #[command(subcommand)]
    verb: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tonks-Girardeau levels and orbital sets
    Tg,
    /// Lowest two-anyon levels at one ε
    Spectrum2d,
    /// Gaps along a decreasing ε ladder
    Sweep,
    /// Overlaps with the dressed one-dimensional states
    Overlap,
    /// Monte Carlo Hardy quotients on the shipped trial family
    Hardy,
    /// Energy identity of the dressed TG states
    Decoupling,
    /// Calogero reference levels
    Calogero,
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// Comma-separated, strictly decreasing
    #[arg(long, global = true, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    /// Particle number
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    k: Option<usize>,
    #[arg(long, global = true)]
    nmax: Option<usize>,
    #[arg(long, global = true)]
    mmax: Option<usize>,
    #[arg(long, global = true)]
    omega_b: Option<f64>,
    #[arg(long, global = true)]
    order: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip the doubled-truncation re-solve
    #[arg(long, global = true)]
    no_doubling: bool,
    /// Skip the φ^ε projection in `overlap`
    #[arg(long, global = true)]
    no_projection: bool,
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML file, or a manifest whose embedded config is reused
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn to_config(&self) -> RunConfig {
        RunConfig {
            alpha: self.alpha,
            epsilon: self.epsilon,
            eps_list: self.eps_list.clone(),
            n: self.n,
            k: self.k,
            n_max: self.nmax,
            m_max: self.mmax,
            omega_b: self.omega_b,
            order: self.order,
            tol: self.tol,
            seed: self.seed,
            samples: self.samples,
            threads: self.threads,
            check_doubling: self.no_doubling.then_some(false),
            projection: self.no_projection.then_some(false),
            cache_dir: self.cache_dir.clone(),
            out: self.out.clone(),
        }
    }
}

fn verb(c: Command) -> Verb {
    match c {
        Command::Tg => Verb::Tg,
        Command::Spectrum2d => Verb::Spectrum2d,
        Command::Sweep => Verb::Sweep,
        Command::Overlap => Verb::Overlap,
        Command::Hardy => Verb::Hardy,
        Command::Decoupling => Verb::Decoupling,
        Command::Calogero => Verb::Calogero,
    }
}

fn main_inner(cli: &Cli) -> Result<bool, Error> {
    let base = match &cli.flags.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let cfg = base.overlay(&cli.flags.to_config());
    let verb = verb(cli.verb);
    cfg.validate(verb)?;
    if let Some(t) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    }
    let report = run(verb, &cfg)?;
    println!("{}", report.csv.display());
    println!("{}", report.manifest.display());
    if !report.ok {
        eprintln!(
            "error[numerical]: {} check failed, see {}",
            verb.name(),
            report.manifest.display()
        );
    }
    Ok(report.ok)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            eprintln!(
                "error[validation]: {}",
                e.to_string().lines().next().unwrap_or("bad arguments")
            );
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match main_inner(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("{}", error_line(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
