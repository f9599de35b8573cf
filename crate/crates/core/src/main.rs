use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use surflap::config::RunConfig;
use surflap::decomposition::MutationHook;
use surflap::report::Report;
use surflap::runner;
use surflap::Error;

#[derive(Parser)]
#[command(
    name = "surflap",
    version,
    about = "Adapted-frame calculus and Bochner-Laplacian decomposition checks on embedded surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// number of random sample points (requires a seed)
    #[arg(long)]
    points: Option<usize>,
    /// grid sampling, e.g. 10x10
    #[arg(long)]
    grid: Option<String>,
    /// RNG seed for random sampling
    #[arg(long)]
    seed: Option<u64>,
    /// override an identity budget, NAME=VALUE (repeatable)
    #[arg(long = "tol-override")]
    tol_override: Vec<String>,
    /// write the full JSON report here
    #[arg(long)]
    json: Option<String>,
    /// write per-point CSV rows here
    #[arg(long)]
    csv: Option<String>,
    /// frame name (repeatable for compare-frames)
    #[arg(long = "frame")]
    frames: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Curvatures and frame scalars per point, with closed-form checks
    Curvature(CommonArgs),
    /// Run a named identity suite
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// structure | operators | lemmas | decomposition | extension
        #[arg(long)]
        suite: String,
        /// debug: flip the sign of one named term in the theorem routes
        /// (nq, ev, rho-x3, sadj-x3-v, g-kw-q)
        #[arg(long, hide = true)]
        debug_flip: Option<String>,
    },
    /// Side-by-side frame comparison on identical surface fields
    CompareFrames(CommonArgs),
    /// Build an extension and report PDE / divergence / curl residuals
    Extend(CommonArgs),
}

fn apply_overrides(config: &mut RunConfig, args: &CommonArgs) -> surflap::Result<()> {
    if let Some(n) = args.points {
        config.sampling.random = Some(n);
        config.sampling.grid = None;
    }
    if let Some(grid) = &args.grid {
        let parts: Vec<&str> = grid.split(['x', 'X']).collect();
        if parts.len() != 2 {
            return Err(Error::Config(format!("--grid expects AxB, got `{grid}`")));
        }
        let a: usize = parts[0]
            .parse()
            .map_err(|_| Error::Config(format!("bad grid dimension `{}`", parts[0])))?;
        let b: usize = parts[1]
            .parse()
            .map_err(|_| Error::Config(format!("bad grid dimension `{}`", parts[1])))?;
        config.sampling.grid = Some([a, b]);
        config.sampling.random = None;
    }
    if let Some(seed) = args.seed {
        config.sampling.seed = Some(seed);
    }
    if config.sampling.random.is_some() && config.sampling.seed.is_none() {
        return Err(Error::Config(
            "--points requires --seed (or a seed in the config)".into(),
        ));
    }
    for spec in &args.tol_override {
        let (name, value) = spec.split_once('=').ok_or_else(|| {
            Error::Config(format!("--tol-override expects NAME=VALUE, got `{spec}`"))
        })?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::Config(format!("bad tolerance value `{value}`")))?;
        if v.is_nan() || v <= 0.0 {
            return Err(Error::Config(format!(
                "tolerance `{name}` must be positive"
            )));
        }
        config.tolerances.insert(name.to_string(), v);
    }
    if let Some(frame) = args.frames.first() {
        config.frame = Some(frame.clone());
    }
    Ok(())
}

fn emit(report: &Report, args: &CommonArgs, config: &RunConfig) -> surflap::Result<()> {
    report.print_summary();
    if let Some(path) = args.json.as_ref().or(config.output.json.as_ref()) {
        report.write_json(path)?;
    }
    if let Some(path) = args.csv.as_ref().or(config.output.csv.as_ref()) {
        report.write_csv(path)?;
    }
    Ok(())
}

fn run() -> surflap::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Curvature(args) => {
            let mut config = RunConfig::from_path(&args.config)?;
            apply_overrides(&mut config, &args)?;
            let report = runner::run_curvature(&config)?;
            emit(&report, &args, &config)?;
            Ok(report.pass)
        }
        Command::Verify {
            common,
            suite,
            debug_flip,
        } => {
            let mut config = RunConfig::from_path(&common.config)?;
            apply_overrides(&mut config, &common)?;
            let mutation = match debug_flip {
                Some(name) => MutationHook::parse(&name)?,
                None => MutationHook::None,
            };
            let report = runner::run_verify(&config, &suite, mutation)?;
            emit(&report, &common, &config)?;
            Ok(report.pass)
        }
        Command::CompareFrames(args) => {
            let mut config = RunConfig::from_path(&args.config)?;
            apply_overrides(&mut config, &args)?;
            let report = runner::run_compare_frames(&config, &args.frames)?;
            emit(&report, &args, &config)?;
            Ok(report.pass)
        }
        Command::Extend(args) => {
            let mut config = RunConfig::from_path(&args.config)?;
            apply_overrides(&mut config, &args)?;
            let report = runner::run_extend(&config)?;
            emit(&report, &args, &config)?;
            Ok(report.pass)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config(_)
        | Error::Parse { .. }
        | Error::UnknownIdent { .. }
        | Error::Arity { .. }
        | Error::UnknownCatalog(_)
        | Error::InvalidParam(_)
        | Error::UnavailableQuantity(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
