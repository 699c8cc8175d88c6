use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hmimo::los::ModelKind;
use hmimo::sweep::{emit_csv, run_sweep, SweepConfig};
use hmimo::Error;

/// Run a distance sweep over LoS channel models and write the results as CSV.
#[derive(Debug, Parser)]
#[command(name = "hmimo-sweep", version)]
struct Args {
    /// Flat key-value (TOML) sweep configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; overrides `output` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated model list, e.g. INTCM,CDCM,PSCM.
    #[arg(long, value_delimiter = ',')]
    models: Option<Vec<String>>,
    /// Comma-separated distances in wavelengths.
    #[arg(long, value_delimiter = ',')]
    distances: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// INTCM quadrature points per axis, both apertures.
    #[arg(long)]
    oracle_grid: Option<usize>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NonFinite(_) | Error::ZeroMatrix | Error::Singular => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn run(args: Args) -> Result<(), Error> {
    let mut config = SweepConfig::from_file(&args.config)?;
    if let Some(models) = args.models {
        config.models = models
            .iter()
            .map(|m| m.parse::<ModelKind>())
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    if let Some(d) = args.distances {
        config.distances = d;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(p) = args.oracle_grid {
        config.oracle_p = p;
        config.oracle_q = p;
    }
    if let Some(out) = args.out {
        config.output = Some(out);
    }
    config.validate()?;
    let out = config
        .output
        .clone()
        .ok_or_else(|| Error::Config("no output path (use --out or `output`)".into()))?;
    let rows = run_sweep(&config)?;
    emit_csv(&rows, &out)?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hmimo-sweep: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
